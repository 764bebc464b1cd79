"""Command-line interface.

Subcommands: list-topologies, gen-mesh, homogenize, study, report.
Data goes to stdout or files; logs and progress go to stderr only.
Exit codes: 0 success, 1 domain error, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .catalog import list_topologies
from .errors import LatticeError
from .homogenize import homogenize
from .meshbuild import CASES, Material, build_beam_mesh
from .studies import StudyConfig, export, load_results_csv, run_study
from .tiling import generate_tiling

log = logging.getLogger("lattice_homog")

_CASE_IDS = [c.case_id for c in CASES]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lattice-homog",
        description="Homogenized in-plane elastic properties of planar "
                    "actuator-lattice meshes on the uniform tilings.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-topologies",
                       help="catalog of the 11 uniform tilings")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("gen-mesh", help="generate a tiling graph as JSON")
    p.add_argument("--topology", required=True)
    p.add_argument("--size", type=float, required=True,
                   help="square bounding box side, mm")
    p.add_argument("--edge", type=float, default=50.0,
                   help="edge length, mm (default 50)")
    p.add_argument("--out", type=Path, default=None,
                   help="output path (default: stdout)")
    p.add_argument("--fe-out", type=Path, default=None,
                   help="also write the FE beam mesh JSON here")
    p.add_argument("--case", choices=_CASE_IDS, default="actuator-stiff",
                   help="stiffness case for --fe-out")
    p.add_argument("--depth", type=float, default=5.0,
                   help="out-of-plane depth, mm (default 5)")

    p = sub.add_parser("homogenize",
                       help="homogenized constants for one configuration")
    p.add_argument("--topology", required=True)
    p.add_argument("--size", type=float, default=750.0,
                   help="square bounding box side, mm (default 750)")
    p.add_argument("--edge", type=float, default=50.0)
    p.add_argument("--case", choices=_CASE_IDS, default="actuator-stiff")
    p.add_argument("--strain", type=float, default=0.01)
    p.add_argument("--depth", type=float, default=5.0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=Path, default=None,
                   help="output path (default: stdout)")

    p = sub.add_parser("study", help="run the full experiment matrix")
    p.add_argument("--config", type=Path, default=None,
                   help="study config, JSON or TOML (default: full matrix)")
    p.add_argument("--out", type=Path, default=None,
                   help="output directory (default: the config's "
                        "output_dir, else study_out)")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: available parallelism)")

    p = sub.add_parser("report",
                       help="regenerate reports from an existing results.csv")
    p.add_argument("--results", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True,
                   help="output directory")
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    return _build_parser().parse_args(argv)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        out.write_text(text if text.endswith("\n") else text + "\n",
                       encoding="utf-8", newline="\n")


def _cmd_list_topologies(args) -> int:
    topos = list_topologies()
    if args.format == "json":
        payload = [{"code": t.code,
                    "vertex_config": ".".join(str(k) for k in t.vertex_config),
                    "vertex_degree": t.vertex_degree,
                    "orthotropic_rve": t.orthotropic_rve} for t in topos]
        _emit(json.dumps(payload, indent=2), None)
    else:
        lines = ["code,vertex_config,vertex_degree,orthotropic_rve"]
        for t in topos:
            cfg = ".".join(str(k) for k in t.vertex_config)
            lines.append(f"{t.code},{cfg},{t.vertex_degree},"
                         f"{str(t.orthotropic_rve).lower()}")
        _emit("\n".join(lines), None)
    return 0


def _cmd_gen_mesh(args) -> int:
    g = generate_tiling(args.topology, args.size, args.edge)
    log.info("generated %s: %d vertices, %d edges", g.topology.code,
             g.n_vertices, g.n_edges)
    _emit(g.to_json(), args.out)
    if args.fe_out is not None:
        mesh = build_beam_mesh(g, args.case, Material(), args.depth)
        _emit(mesh.to_json(), args.fe_out)
        log.info("beam mesh: %d fe-nodes, %d segments", mesh.n_fe_nodes,
                 mesh.n_segments)
    return 0


def _cmd_homogenize(args) -> int:
    record = homogenize(args.topology, args.size, args.case, args.strain,
                        depth=args.depth, edge_length=args.edge)
    log.info("homogenized %s in %.2f s (%d DOFs)", record.topology,
             record.solve_seconds, record.dof_count)
    if args.format == "json":
        _emit(record.to_json(), args.out)
    else:
        from .homogenize import ResultRecord
        _emit(",".join(ResultRecord.CSV_FIELDS) + "\n" + record.csv_row(),
              args.out)
    return 0


def _cmd_study(args) -> int:
    cfg = StudyConfig.from_file(args.config) if args.config else StudyConfig()
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs != cfg.jobs:
        cfg = StudyConfig.from_dict({**_cfg_dict(cfg), "jobs": jobs})
    out = args.out or Path(cfg.output_dir or "study_out")
    table = run_study(cfg)
    written = export(table, out)
    log.info("study complete: %d records, %d failures, %d files under %s",
             len(table.records), len(table.failures), len(written), out)
    return 0


def _cfg_dict(cfg: StudyConfig) -> dict:
    return {f: getattr(cfg, f) for f in StudyConfig.__dataclass_fields__}


def _cmd_report(args) -> int:
    table = load_results_csv(args.results)
    written = export(table, args.out)
    log.info("reports regenerated: %d files under %s", len(written), args.out)
    return 0


_COMMANDS = {
    "list-topologies": _cmd_list_topologies,
    "gen-mesh": _cmd_gen_mesh,
    "homogenize": _cmd_homogenize,
    "study": _cmd_study,
    "report": _cmd_report,
}


def run(args) -> int:
    """Execute a parsed command; returns the process exit code."""
    try:
        return _COMMANDS[args.command](args)
    except LatticeError as ex:
        log.error("%s: %s", type(ex).__name__, ex)
        return 1
    except OSError as ex:
        log.error("I/O error: %s", ex)
        return 3


def main(argv=None) -> int:
    level = os.environ.get("LATTICE_HOMOG_LOG", "INFO").upper()
    logging.basicConfig(stream=sys.stderr,
                        level=getattr(logging, level, logging.INFO),
                        format="%(levelname)s %(message)s")
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
