"""Experiment-matrix orchestration: sweeps, rankings, heatmaps, exports.

A study runs ``homogenize`` over topologies x sizes x stiffness cases x
strains, collects records into a keyed table (failures recorded, never
dropped) and writes reproducible CSV/text reports: modulus rankings,
stiffness-case ratio tables, Poisson summary and plot-ready sweep data.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fem
from .catalog import ANALYZED_CODES, list_topologies, topology_by_code
from .errors import (EmptyTable, InsufficientData, MissingCase,
                     MissingTopology, NotOrthotropic)
from .homogenize import ResultRecord
from .meshbuild import CASES, Material, case_by_id

log = logging.getLogger("lattice_homog")

DEFAULT_SIZES = (750.0, 1000.0, 1250.0, 1500.0)
DEFAULT_STRAINS = (0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.04, 0.045)

_TOPO_ORDER = {t.code: i for i, t in enumerate(list_topologies())}
_CASE_ORDER = {c.case_id: i for i, c in enumerate(CASES)}

# Stretching-dominated fingerprint: modulus ratio of the two equal-stiffness
# cases tracks the section-area ratio (5) for axial load paths.
AREA_SCALING_BAND = (4.0, 6.0)
TIE_THRESHOLD = 0.05


@dataclass(frozen=True)
class StudyConfig:
    topologies: tuple[str, ...] = ANALYZED_CODES
    sizes: tuple[float, ...] = DEFAULT_SIZES
    strains: tuple[float, ...] = DEFAULT_STRAINS
    cases: tuple[str, ...] = tuple(c.case_id for c in CASES)
    young_modulus: float = 2000.0
    poisson_ratio: float = 0.3
    depth: float = 5.0
    edge_length: float = 50.0
    bc: str = "affine"
    jobs: int = 1
    output_dir: str | None = None

    def __post_init__(self):
        if not (self.topologies and self.sizes and self.strains and self.cases):
            raise ValueError("topologies, sizes, strains and cases must be "
                             "non-empty")
        for code in self.topologies:
            topo = topology_by_code(code)
            if not topo.orthotropic_rve:
                raise NotOrthotropic(
                    f"{topo.code} is excluded from stiffness studies: it has "
                    "two enantiomorphic forms and no orthotropic RVE")
        for c in self.cases:
            case_by_id(c)
        for s in self.strains:
            if not 0.0 < s <= 0.1:
                raise ValueError(f"strain {s} outside (0, 0.1]")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    @property
    def material(self) -> Material:
        return Material(self.young_modulus, self.poisson_ratio)

    @staticmethod
    def from_file(path) -> "StudyConfig":
        path = Path(path)
        if path.suffix.lower() == ".toml":
            try:
                import tomllib
            except ImportError:
                import tomli as tomllib
            data = tomllib.loads(path.read_text())
        else:
            data = json.loads(path.read_text())
        return StudyConfig.from_dict(data)

    @staticmethod
    def from_dict(data: dict) -> "StudyConfig":
        known = {f for f in StudyConfig.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown study config keys: {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("topologies", "sizes", "strains", "cases"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return StudyConfig(**kwargs)


@dataclass(frozen=True)
class Failure:
    topology: str
    size: float
    case: str
    strain: float
    error: str
    message: str


@dataclass
class ResultTable:
    records: list[ResultRecord] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)

    def __post_init__(self):
        self._index = {}
        for r in self.records:
            if r.key in self._index:
                raise ValueError(f"duplicate result key {r.key}")
            self._index[r.key] = r
        self.records.sort(key=_record_order)

    def get(self, topology, size, case, strain) -> ResultRecord | None:
        return self._index.get((topology, float(size), case, float(strain)))

    def topologies(self) -> list[str]:
        seen = sorted({r.topology for r in self.records},
                      key=lambda c: _TOPO_ORDER[c])
        return seen

    def sizes(self) -> list[float]:
        return sorted({r.size for r in self.records})

    def cases(self) -> list[str]:
        return sorted({r.case for r in self.records},
                      key=lambda c: _CASE_ORDER[c])

    def strains(self) -> list[float]:
        return sorted({r.strain for r in self.records})

    def select(self, topology=None, size=None, case=None, strain=None):
        out = []
        for r in self.records:
            if topology is not None and r.topology != topology:
                continue
            if size is not None and r.size != float(size):
                continue
            if case is not None and r.case != case:
                continue
            if strain is not None and r.strain != float(strain):
                continue
            out.append(r)
        return out

    def size_mean(self, topology, case, strain, fields=("e1", "e2", "g12")):
        """Per-field mean across mesh sizes (the paper's reported values)."""
        recs = self.select(topology=topology, case=case, strain=strain)
        if not recs:
            return None
        return {f: float(np.mean([getattr(r, f) for r in recs]))
                for f in fields}


def _record_order(r: ResultRecord):
    return (_TOPO_ORDER[r.topology], r.size, _CASE_ORDER[r.case], r.strain)


def _run_group(args):
    """All strains for one (topology, size, case); one assembly, one
    factorization, back-substitutions per strain and load case."""
    topo, size, case, strains, young, nu, depth, edge, bc = args
    out, failures = [], []
    try:
        from .homogenize import run_load_cases, stiffness_tensor, \
            engineering_constants
        from .meshbuild import build_beam_mesh
        from .tiling import generate_tiling
        import time as _time

        t0 = _time.perf_counter()
        g = generate_tiling(topo, size, edge)
        mesh = build_beam_mesh(g, case, Material(young, nu), depth)
        system = fem.assemble(mesh)
        for s in strains:
            t1 = _time.perf_counter()
            ed = run_load_cases(mesh, s, system=system, bc=bc)
            tensor = stiffness_tensor(ed)
            const = engineering_constants(tensor)
            now = _time.perf_counter()
            elapsed = (now - t1) + (t1 - t0 if s == strains[0] else 0.0)
            out.append(ResultRecord(
                topology=topo, size=float(size), case=case, strain=float(s),
                c1111=tensor.c1111, c2222=tensor.c2222, c1122=tensor.c1122,
                c1212=tensor.c1212, e1=const.e1, e2=const.e2, g12=const.g12,
                nu12=const.nu12, nu21=const.nu21, dof_count=mesh.n_dofs,
                solve_seconds=elapsed))
    except Exception as ex:  # per-key failures are data, not crashes
        for s in strains:
            failures.append(Failure(topo, float(size), case, float(s),
                                    type(ex).__name__, str(ex)))
    return out, failures


def run_study(cfg: StudyConfig) -> ResultTable:
    """Run the full experiment matrix of ``cfg``.

    Results are keyed and sorted, so the table content is independent of
    the worker schedule.
    """
    groups = [(topo, float(size), case, tuple(cfg.strains),
               cfg.young_modulus, cfg.poisson_ratio, cfg.depth,
               cfg.edge_length, cfg.bc)
              for topo in cfg.topologies
              for size in cfg.sizes
              for case in cfg.cases]
    records: list[ResultRecord] = []
    failures: list[Failure] = []
    log.info("study: %d meshes x %d strains", len(groups), len(cfg.strains))
    if cfg.jobs == 1:
        results = map(_run_group, groups)
    else:
        pool = ProcessPoolExecutor(max_workers=cfg.jobs)
        results = pool.map(_run_group, groups)
    for i, (recs, fails) in enumerate(results):
        records.extend(recs)
        failures.extend(fails)
        log.info("  [%d/%d] %s size=%g case=%s: %d records, %d failures",
                 i + 1, len(groups), groups[i][0], groups[i][1],
                 groups[i][2], len(recs), len(fails))
    if cfg.jobs > 1:
        pool.shutdown()
    failures.sort(key=lambda f: (_TOPO_ORDER[f.topology], f.size,
                                 _CASE_ORDER[f.case], f.strain))
    return ResultTable(records=records, failures=failures)


@dataclass(frozen=True)
class SizeSpread:
    topology: str
    e1_spread: float
    e2_spread: float
    g_spread: float
    flagged: bool


def size_independence_report(table: ResultTable, case: str = "actuator-stiff",
                             strain: float = 0.01,
                             threshold: float = 0.05) -> list[SizeSpread]:
    """Relative spread (max-min)/mean of E1, E2, G across mesh sizes."""
    out = []
    for topo in table.topologies():
        recs = table.select(topology=topo, case=case, strain=strain)
        if len(recs) < 2:
            raise InsufficientData(
                f"{topo}: need at least 2 sizes at case={case} "
                f"strain={strain}, found {len(recs)}")
        spreads = {}
        for f in ("e1", "e2", "g12"):
            vals = np.array([getattr(r, f) for r in recs])
            spreads[f] = float((vals.max() - vals.min()) / vals.mean())
        out.append(SizeSpread(
            topology=topo, e1_spread=spreads["e1"], e2_spread=spreads["e2"],
            g_spread=spreads["g12"],
            flagged=max(spreads.values()) > threshold))
    return out


@dataclass(frozen=True)
class Ranking:
    """Descending (topology, value) order with within-threshold tie flags.

    ``ties[i]`` is True when entry i and i+1 differ by less than the tie
    threshold relative to their mean.
    """

    metric: str
    entries: tuple[tuple[str, float], ...]
    ties: tuple[bool, ...]

    def order(self) -> list[str]:
        return [code for code, _ in self.entries]

    def lines(self) -> list[str]:
        out = []
        for i, (code, value) in enumerate(self.entries):
            tie = "  (tie with next)" if i < len(self.ties) and self.ties[i] \
                else ""
            out.append(f"{i + 1:2d}. {code:6s} {value:.6g}{tie}")
        return out


def _ranking(values: dict[str, float], metric: str) -> Ranking:
    entries = tuple(sorted(values.items(), key=lambda kv: -kv[1]))
    ties = tuple(
        abs(a[1] - b[1]) / max(0.5 * (a[1] + b[1]), 1e-300) < TIE_THRESHOLD
        for a, b in zip(entries[:-1], entries[1:]))
    return Ranking(metric=metric, entries=entries, ties=ties)


def rank_report(table: ResultTable, at_strain: float = 0.01,
                case: str = "actuator-stiff",
                require_all: bool = False) -> tuple[Ranking, Ranking]:
    """Topology rankings for E (mean of E1, E2) and G, size-averaged."""
    e_vals, g_vals = {}, {}
    for topo in table.topologies():
        mean = table.size_mean(topo, case, at_strain)
        if mean is None:
            raise MissingTopology(
                f"{topo} has no records at case={case} strain={at_strain}")
        e_vals[topo] = 0.5 * (mean["e1"] + mean["e2"])
        g_vals[topo] = mean["g12"]
    if require_all:
        missing = set(ANALYZED_CODES) - set(e_vals)
        if missing:
            raise MissingTopology(
                f"ranking requires all 10 topologies; missing {sorted(missing)}")
    return _ranking(e_vals, "E"), _ranking(g_vals, "G")


def stiffness_case_heatmap(table: ResultTable, at_strain: float = 0.01
                           ) -> dict[str, dict[str, dict[str, float]]]:
    """Modulus ratios versus the actuator-stiff default, size-averaged.

    Returns ``{metric: {topology: {case: ratio}}}`` for metrics e1, e2, g12;
    the actuator-stiff column is identically 1.
    """
    cases = table.cases()
    if "actuator-stiff" not in cases:
        raise MissingCase("heatmap needs the actuator-stiff reference case")
    ratios: dict[str, dict[str, dict[str, float]]] = {
        "e1": {}, "e2": {}, "g12": {}}
    for topo in table.topologies():
        ref = table.size_mean(topo, "actuator-stiff", at_strain)
        if ref is None:
            raise MissingCase(
                f"{topo}: no actuator-stiff records at strain={at_strain}")
        for metric in ratios:
            ratios[metric][topo] = {}
        for case in cases:
            mean = table.size_mean(topo, case, at_strain)
            if mean is None:
                raise MissingCase(
                    f"{topo}: case {case} missing at strain={at_strain}")
            for metric in ratios:
                ratios[metric][topo][case] = mean[metric] / ref[metric]
    return ratios


def classify_topologies(table: ResultTable, at_strain: float = 0.01
                        ) -> dict[str, dict[str, str]]:
    """Stretching vs bending per topology and loading mode.

    A topology is stretching-dominated for a mode when the equal-high over
    equal-low modulus ratio sits in the linear area-scaling band around 5.
    """
    lo, hi = AREA_SCALING_BAND
    out = {}
    for topo in table.topologies():
        high = table.size_mean(topo, "equal-high", at_strain)
        low = table.size_mean(topo, "equal-low", at_strain)
        if high is None or low is None:
            raise MissingCase(
                f"{topo}: classification needs equal-high and equal-low at "
                f"strain={at_strain}")
        e_ratio = (high["e1"] + high["e2"]) / (low["e1"] + low["e2"])
        g_ratio = high["g12"] / low["g12"]
        out[topo] = {
            "axial": "stretching" if lo <= e_ratio <= hi else "bending",
            "shear": "stretching" if lo <= g_ratio <= hi else "bending",
        }
    return out


# ---------------------------------------------------------------------------
# export

def _fmt(x: float) -> str:
    return repr(float(x))


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def export(table: ResultTable, outdir, at_strain: float | None = None) -> list[Path]:
    """Write the result table and derived reports under ``outdir``.

    Emits results.csv (plus failures.csv and timings.csv when relevant),
    ranking and heatmap reports, a Poisson summary and per-topology sweep
    curves; byte-identical across reruns on identical tables.
    """
    if not table.records:
        raise EmptyTable("cannot export an empty result table")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    header = ",".join(ResultRecord.CSV_FIELDS)
    rows = [r.csv_row() for r in table.records]
    path = outdir / "results.csv"
    _write(path, "\n".join([header] + rows) + "\n")
    written.append(path)

    # Wall time is machine noise, not physics: keep it out of results.csv
    # so reruns of one study are byte-identical.
    path = outdir / "timings.csv"
    _write(path, "\n".join(
        ["topology,size_mm,case,strain,solve_seconds,dof_count"]
        + [f"{r.topology},{_fmt(r.size)},{r.case},{_fmt(r.strain)},"
           f"{r.solve_seconds:.6f},{r.dof_count}" for r in table.records])
        + "\n")
    written.append(path)

    if table.failures:
        path = outdir / "failures.csv"
        _write(path, "\n".join(
            ["topology,size_mm,case,strain,error,message"]
            + [f"{f.topology},{_fmt(f.size)},{f.case},{_fmt(f.strain)},"
               f"{f.error},\"{f.message}\"" for f in table.failures]) + "\n")
        written.append(path)

    strain = at_strain if at_strain is not None else table.strains()[0]
    case = "actuator-stiff" if "actuator-stiff" in table.cases() \
        else table.cases()[0]

    try:
        e_rank, g_rank = rank_report(table, strain, case)
        path = outdir / "ranking_E.txt"
        _write(path, "\n".join(
            [f"# Young's modulus ranking (mean of E1,E2; case={case}, "
             f"strain={_fmt(strain)}, averaged over sizes)"]
            + e_rank.lines()) + "\n")
        written.append(path)
        path = outdir / "ranking_G.txt"
        _write(path, "\n".join(
            [f"# Shear modulus ranking (case={case}, strain={_fmt(strain)}, "
             "averaged over sizes)"] + g_rank.lines()) + "\n")
        written.append(path)
    except MissingTopology:
        log.info("skipping rankings: single-topology table")

    try:
        ratios = stiffness_case_heatmap(table, strain)
        cases = table.cases()
        for metric, fname in (("e1", "heatmap_E.csv"), ("g12", "heatmap_G.csv")):
            lines = ["topology," + ",".join(cases)]
            second = "e2" if metric == "e1" else None
            for topo in table.topologies():
                vals = [ratios[metric][topo][c] for c in cases]
                lines.append(topo + "," + ",".join(_fmt(v) for v in vals))
                if second:
                    vals2 = [ratios[second][topo][c] for c in cases]
                    lines.append(f"{topo}(E2)," + ",".join(_fmt(v) for v in vals2))
            path = outdir / fname
            _write(path, "\n".join(lines) + "\n")
            written.append(path)
    except MissingCase:
        log.info("skipping heatmaps: not all stiffness cases present")

    lines = ["topology,nu12,nu21"]
    for topo in table.topologies():
        mean = table.size_mean(topo, case, strain, fields=("nu12", "nu21"))
        if mean is not None:
            lines.append(f"{topo},{_fmt(mean['nu12'])},{_fmt(mean['nu21'])}")
    path = outdir / "poisson.csv"
    _write(path, "\n".join(lines) + "\n")
    written.append(path)

    plot_dir = outdir / "plot_data"
    plot_dir.mkdir(exist_ok=True)
    for topo in table.topologies():
        for c in table.cases():
            lines = ["strain,e1_mpa,e2_mpa,g12_mpa,nu12,nu21"]
            for s in table.strains():
                mean = table.size_mean(topo, c, s,
                                       fields=("e1", "e2", "g12", "nu12", "nu21"))
                if mean is None:
                    continue
                lines.append(",".join(
                    [_fmt(s)] + [_fmt(mean[f])
                                 for f in ("e1", "e2", "g12", "nu12", "nu21")]))
            path = plot_dir / f"curve_{topo}_{c}.csv"
            _write(path, "\n".join(lines) + "\n")
            written.append(path)

    lines = ["topology,e1_mpa,e2_mpa,g12_mpa"]
    for topo in table.topologies():
        mean = table.size_mean(topo, case, strain)
        if mean is not None:
            lines.append(f"{topo},{_fmt(mean['e1'])},{_fmt(mean['e2'])},"
                         f"{_fmt(mean['g12'])}")
    path = plot_dir / "comparison.csv"
    _write(path, "\n".join(lines) + "\n")
    written.append(path)
    return written


def load_results_csv(path) -> ResultTable:
    """Rebuild a result table from an exported results.csv."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != ",".join(ResultRecord.CSV_FIELDS):
        raise ValueError(f"{path} is not a results.csv export")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        records.append(ResultRecord(
            topology=parts[0], size=float(parts[1]), case=parts[2],
            strain=float(parts[3]), c1111=float(parts[4]),
            c2222=float(parts[5]), c1122=float(parts[6]),
            c1212=float(parts[7]), e1=float(parts[8]), e2=float(parts[9]),
            g12=float(parts[10]), nu12=float(parts[11]),
            nu21=float(parts[12]), dof_count=int(parts[13]),
            solve_seconds=0.0))
    return ResultTable(records=records)
