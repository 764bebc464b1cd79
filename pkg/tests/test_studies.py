import json

import pytest

from lattice_homog.errors import (EmptyTable, InsufficientData, MissingCase,
                                  MissingTopology, NotOrthotropic)
from lattice_homog.homogenize import ResultRecord
from lattice_homog.studies import (ResultTable, StudyConfig,
                                   classify_topologies, export,
                                   load_results_csv, rank_report, run_study,
                                   size_independence_report,
                                   stiffness_case_heatmap)


def record(topology="S", size=300.0, case="actuator-stiff", strain=0.01,
           e1=10.0, e2=10.0, g12=1.0, c1122=1.0, nu=0.1):
    c1111 = e1 / (1 - nu * nu) if nu else e1
    return ResultRecord(
        topology=topology, size=size, case=case, strain=strain,
        c1111=c1111, c2222=c1111 * e2 / e1, c1122=c1122, c1212=g12,
        e1=e1, e2=e2, g12=g12, nu12=nu, nu21=nu, dof_count=100,
        solve_seconds=0.1)


def synthetic_table(values: dict, sizes=(750.0,), cases=("actuator-stiff",),
                    strain=0.01):
    """values: topology -> (e, g); same record replicated per size/case."""
    recs = []
    for topo, (e, g) in values.items():
        for size in sizes:
            for case in cases:
                recs.append(record(topology=topo, size=size, case=case,
                                   strain=strain, e1=e, e2=e, g12=g))
    return ResultTable(records=recs)


TINY = dict(topologies=("S", "THTH"), sizes=(250.0, 400.0), strains=(0.01,),
            cases=("actuator-stiff", "equal-low"))


class TestStudyConfig:
    def test_defaults_are_paper_matrix(self):
        cfg = StudyConfig()
        assert len(cfg.topologies) == 10 and "T4H" not in cfg.topologies
        assert cfg.sizes == (750.0, 1000.0, 1250.0, 1500.0)
        assert cfg.strains[0] == 0.01 and cfg.strains[-1] == 0.045
        assert len(cfg.cases) == 4
        assert cfg.material.young_modulus == 2000.0

    def test_t4h_rejected(self):
        with pytest.raises(NotOrthotropic):
            StudyConfig(topologies=("S", "T4H"))

    def test_validation(self):
        with pytest.raises(ValueError):
            StudyConfig(topologies=())
        with pytest.raises(ValueError):
            StudyConfig(strains=(0.5,))
        with pytest.raises(ValueError):
            StudyConfig(cases=("bogus",))
        with pytest.raises(ValueError):
            StudyConfig(jobs=0)

    def test_from_json_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"topologies": ["S"], "sizes": [300.0],
                                    "strains": [0.01], "jobs": 1}))
        cfg = StudyConfig.from_file(path)
        assert cfg.topologies == ("S",)
        assert cfg.sizes == (300.0,)

    def test_from_toml_file(self, tmp_path):
        path = tmp_path / "cfg.toml"
        path.write_text('topologies = ["S", "H"]\nsizes = [400.0]\n'
                        'strains = [0.01, 0.02]\ndepth = 5.0\n')
        cfg = StudyConfig.from_file(path)
        assert cfg.topologies == ("S", "H")
        assert cfg.strains == (0.01, 0.02)

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValueError):
            StudyConfig.from_dict({"topology": ["S"]})


class TestRunStudy:
    def test_tiny_matrix_complete(self):
        table = run_study(StudyConfig(**TINY))
        assert len(table.records) == 2 * 2 * 1 * 2
        assert not table.failures
        for topo in TINY["topologies"]:
            for size in TINY["sizes"]:
                for case in TINY["cases"]:
                    assert table.get(topo, size, case, 0.01) is not None

    def test_single_record(self):
        table = run_study(StudyConfig(topologies=("S",), sizes=(300.0,),
                                      strains=(0.01,),
                                      cases=("actuator-stiff",)))
        assert len(table.records) == 1

    def test_failures_recorded(self):
        # 60 mm box cannot hold a single hexagon cell
        cfg = StudyConfig(topologies=("S", "H"), sizes=(60.0,),
                          strains=(0.01,), cases=("actuator-stiff",))
        table = run_study(cfg)
        assert len(table.records) == 1
        assert len(table.failures) == 1
        f = table.failures[0]
        assert f.topology == "H" and f.error == "BboxTooSmall"

    def test_deterministic_table(self):
        t1 = run_study(StudyConfig(**TINY))
        t2 = run_study(StudyConfig(**TINY))
        rows1 = [r.csv_row() for r in t1.records]
        rows2 = [r.csv_row() for r in t2.records]
        assert rows1 == rows2

    def test_worker_pool_matches_sequential(self):
        seq = run_study(StudyConfig(**TINY, jobs=1))
        par = run_study(StudyConfig(**TINY, jobs=2))
        assert [r.csv_row() for r in seq.records] == \
            [r.csv_row() for r in par.records]

    def test_duplicate_keys_rejected(self):
        with pytest.raises(ValueError):
            ResultTable(records=[record(), record()])


class TestSizeIndependence:
    def test_identical_records_zero_spread(self):
        table = synthetic_table({"S": (10.0, 1.0)}, sizes=(750.0, 1000.0))
        rep = size_independence_report(table)
        assert len(rep) == 1
        assert rep[0].e1_spread == 0.0
        assert not rep[0].flagged

    def test_outlier_flagged(self):
        recs = [record(size=750.0, e1=10.0, e2=10.0),
                record(size=1000.0, e1=20.0, e2=20.0)]
        rep = size_independence_report(ResultTable(records=recs))
        assert rep[0].flagged
        assert rep[0].e1_spread == pytest.approx(10.0 / 15.0)

    def test_insufficient_data(self):
        table = synthetic_table({"S": (10.0, 1.0)}, sizes=(750.0,))
        with pytest.raises(InsufficientData):
            size_independence_report(table)


class TestRankReport:
    def test_order_and_values(self):
        table = synthetic_table({"T": (75.0, 27.0), "S": (70.0, 0.01),
                                 "H": (2.3, 0.11)})
        e_rank, g_rank = rank_report(table)
        assert e_rank.order() == ["T", "S", "H"]
        assert g_rank.order() == ["T", "H", "S"]
        assert e_rank.entries[0][1] == pytest.approx(75.0)

    def test_tie_annotation(self):
        table = synthetic_table({"T": (70.5, 2.0), "S": (70.0, 1.0),
                                 "H": (2.0, 0.1)})
        e_rank, _ = rank_report(table)
        assert e_rank.ties == (True, False)
        assert "tie" in e_rank.lines()[0]

    def test_single_topology(self):
        table = synthetic_table({"S": (70.0, 1.0)})
        e_rank, g_rank = rank_report(table)
        assert e_rank.order() == ["S"]
        assert g_rank.ties == ()

    def test_missing_topology(self):
        table = synthetic_table({"S": (70.0, 1.0)})
        with pytest.raises(MissingTopology):
            rank_report(table, require_all=True)
        with pytest.raises(MissingTopology):
            rank_report(table, at_strain=0.02)


class TestHeatmap:
    def test_reference_column_is_one(self):
        cases = ("actuator-stiff", "node-stiff", "equal-low", "equal-high")
        recs = []
        for i, case in enumerate(cases):
            recs.append(record(case=case, e1=10.0 * (i + 1),
                               e2=10.0 * (i + 1), g12=float(i + 1)))
        ratios = stiffness_case_heatmap(ResultTable(records=recs))
        assert ratios["e1"]["S"]["actuator-stiff"] == 1.0
        assert ratios["e2"]["S"]["actuator-stiff"] == 1.0
        assert ratios["g12"]["S"]["actuator-stiff"] == 1.0
        assert ratios["e1"]["S"]["node-stiff"] == pytest.approx(2.0)
        assert ratios["g12"]["S"]["equal-high"] == pytest.approx(4.0)

    def test_missing_reference_case(self):
        table = synthetic_table({"S": (10.0, 1.0)}, cases=("equal-low",))
        with pytest.raises(MissingCase):
            stiffness_case_heatmap(table)


class TestClassify:
    def test_area_scaling_rule(self):
        recs = []
        # ratio exactly 5 axially -> stretching; 120 in shear -> bending
        for case, e, g in (("actuator-stiff", 50.0, 5.0),
                           ("node-stiff", 50.0, 5.0),
                           ("equal-low", 10.0, 0.1),
                           ("equal-high", 50.0, 12.0)):
            recs.append(record(case=case, e1=e, e2=e, g12=g))
        out = classify_topologies(ResultTable(records=recs))
        assert out["S"]["axial"] == "stretching"
        assert out["S"]["shear"] == "bending"

    def test_missing_case(self):
        table = synthetic_table({"S": (10.0, 1.0)})
        with pytest.raises(MissingCase):
            classify_topologies(table)


class TestExport:
    def test_file_set_and_determinism(self, tmp_path):
        table = run_study(StudyConfig(**TINY))
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        export(table, out1)
        export(table, out2)
        expected = {"results.csv", "timings.csv", "ranking_E.txt",
                    "ranking_G.txt", "heatmap_E.csv", "heatmap_G.csv",
                    "poisson.csv"}
        names = {p.name for p in out1.iterdir()}
        assert expected <= names
        assert (out1 / "plot_data").is_dir()
        curves = sorted(p.name for p in (out1 / "plot_data").iterdir())
        assert "curve_S_actuator-stiff.csv" in curves
        assert "comparison.csv" in curves
        for name in sorted(expected - {"timings.csv"}):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_results_csv_roundtrip(self, tmp_path):
        table = run_study(StudyConfig(**TINY))
        export(table, tmp_path)
        loaded = load_results_csv(tmp_path / "results.csv")
        assert len(loaded.records) == len(table.records)
        for a, b in zip(loaded.records, table.records):
            assert a.key == b.key
            assert a.e1 == b.e1 and a.c1122 == b.c1122
            assert a.dof_count == b.dof_count

    def test_heatmap_reference_column(self, tmp_path):
        cases = ("actuator-stiff", "node-stiff", "equal-low", "equal-high")
        recs = [record(case=c, e1=10.0 + i, e2=10.0 + i, g12=1.0 + i)
                for i, c in enumerate(cases)]
        export(ResultTable(records=recs), tmp_path)
        lines = (tmp_path / "heatmap_E.csv").read_text().splitlines()
        assert lines[0].split(",")[1] == "actuator-stiff"
        assert float(lines[1].split(",")[1]) == 1.0

    def test_failures_file(self, tmp_path):
        cfg = StudyConfig(topologies=("S", "H"), sizes=(60.0,),
                          strains=(0.01,), cases=("actuator-stiff",))
        table = run_study(cfg)
        export(table, tmp_path)
        lines = (tmp_path / "failures.csv").read_text().splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("H,")
        assert "BboxTooSmall" in lines[1]

    def test_empty_table_rejected(self, tmp_path):
        with pytest.raises(EmptyTable):
            export(ResultTable(records=[]), tmp_path)

    def test_single_record_export(self, tmp_path):
        table = ResultTable(records=[record()])
        export(table, tmp_path)
        lines = (tmp_path / "results.csv").read_text().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("topology,size_mm,case,strain,")

    def test_bad_results_csv(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("not,a,results,file\n")
        with pytest.raises(ValueError):
            load_results_csv(path)


class TestSizeMean:
    def test_mean_across_sizes(self):
        recs = [record(size=750.0, e1=10.0, e2=12.0, g12=1.0),
                record(size=1000.0, e1=14.0, e2=16.0, g12=3.0)]
        table = ResultTable(records=recs)
        mean = table.size_mean("S", "actuator-stiff", 0.01)
        assert mean["e1"] == pytest.approx(12.0)
        assert mean["e2"] == pytest.approx(14.0)
        assert mean["g12"] == pytest.approx(2.0)
        assert table.size_mean("H", "actuator-stiff", 0.01) is None
