"""Command-line front end.

Subcommands: coverage, plan, payload, validate, plot, gen, sweep, probe.
Exit codes: 0 success, 2 infeasible (or failed validation), 1 input error.
All output is deterministic byte-for-byte for identical inputs.
"""

from __future__ import annotations

import argparse
import sys

from . import bench, documents, mapgen, svgplot
from .geometry import MapValidationError, NetworkMap
from .model import NoCoverageError, UavParams, default_uav_params
from .payload import PayloadQuery, max_payload
from .planner import plan_unlimited
from .planner_battery import plan_min_energy, plan_min_time
from .validate import validate_trajectory

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INFEASIBLE = 2


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as exit code 1, not 2."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        raise _CliError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc.strerror}")


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _CliError(f"cannot write {path}: {exc.strerror}")


def _load_map(path: str) -> NetworkMap:
    return documents.map_from_doc(documents.loads(_read(path), where=path))


def _load_uav(path: str | None) -> UavParams:
    if path is None:
        return default_uav_params()
    return documents.uav_from_doc(documents.loads(_read(path), where=path))


def build_parser() -> _Parser:
    parser = _Parser(prog="cellnav", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coverage", help="print the map's coverage radius")
    p.add_argument("--map", required=True, dest="map_path")

    p = sub.add_parser("plan", help="plan a route")
    p.add_argument("--map", required=True, dest="map_path")
    p.add_argument("--uav", dest="uav_path")
    p.add_argument(
        "--objective",
        choices=("time", "time-unlimited", "energy"),
        default="time",
    )
    p.add_argument("-o", "--output", dest="output")

    p = sub.add_parser("payload", help="maximum deliverable payload")
    p.add_argument("--map", required=True, dest="map_path")
    p.add_argument("--uav", dest="uav_path")
    p.add_argument("--eps-w", type=float, required=True, dest="eps_w")
    p.add_argument("--k-max", type=int, required=True, dest="k_max")
    p.add_argument("-o", "--output", dest="output")

    p = sub.add_parser("validate", help="validate a trajectory file")
    p.add_argument("--map", required=True, dest="map_path")
    p.add_argument("--uav", dest="uav_path")
    p.add_argument("--trajectory", required=True, dest="trajectory_path")
    p.add_argument("-o", "--output", dest="output")

    p = sub.add_parser("plot", help="render the map (and route) as SVG")
    p.add_argument("--map", required=True, dest="map_path")
    p.add_argument("--trajectory", dest="trajectory_path")
    p.add_argument("-o", "--output", dest="output")

    p = sub.add_parser("gen", help="generate a feasible random map")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--M", type=int, required=True, dest="m")
    p.add_argument("--N", type=int, required=True, dest="n")
    p.add_argument("--size", type=float, default=10_000.0)
    p.add_argument("--tau", type=float, default=mapgen.DEFAULT_TAU)
    p.add_argument("--uav", dest="uav_path")
    p.add_argument("-o", "--output", dest="output")

    p = sub.add_parser("sweep", help="objective sweep over one variable")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--M", type=int, required=True, dest="m")
    p.add_argument("--N", type=int, required=True, dest="n")
    p.add_argument("--size", type=float, default=10_000.0)
    p.add_argument("--variable", required=True, choices=bench.SWEEP_VARIABLES)
    p.add_argument("--values", required=True, help="comma-separated sweep values")
    p.add_argument("--station", type=int, default=0)
    p.add_argument("--objective", choices=("time", "energy"), default="time")
    p.add_argument("--uav", dest="uav_path")
    p.add_argument("-o", "--output", dest="output")

    p = sub.add_parser("probe", help="runtime scaling probe")
    p.add_argument("--M", required=True, dest="m", help="comma-separated station counts")
    p.add_argument("--N", required=True, dest="n", help="comma-separated charging counts")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", dest="output")

    return parser


def _cmd_plan(args) -> int:
    net = _load_map(args.map_path)
    uav = _load_uav(args.uav_path)
    if args.objective == "time-unlimited":
        result = plan_unlimited(net, uav.top_speed)
    elif args.objective == "energy":
        result = plan_min_energy(net, uav)
    else:
        result = plan_min_time(net, uav)
    _write(args.output, documents.dumps(documents.result_to_doc(result, uav)))
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def _cmd_payload(args) -> int:
    net = _load_map(args.map_path)
    uav = _load_uav(args.uav_path)
    query = PayloadQuery(eps_w=args.eps_w, k_max=args.k_max, net=net, uav=uav)
    result = max_payload(query)
    doc = {
        "schema": "payload/1",
        "deliverable": result.deliverable,
        "w3": result.w3,
        "bottleneck_length": result.bottleneck.length,
    }
    _write(args.output, documents.dumps(doc))
    return EXIT_OK if result.deliverable else EXIT_INFEASIBLE


def _cmd_validate(args) -> int:
    net = _load_map(args.map_path)
    uav = _load_uav(args.uav_path)
    traj = documents.trajectory_from_doc(
        documents.loads(_read(args.trajectory_path), where=args.trajectory_path)
    )
    report = validate_trajectory(net, uav, traj)
    _write(args.output, documents.dumps(documents.report_to_doc(report)))
    return EXIT_OK if report.passed else EXIT_INFEASIBLE


def _cmd_plot(args) -> int:
    net = _load_map(args.map_path)
    traj = None
    if args.trajectory_path:
        traj = documents.trajectory_from_doc(
            documents.loads(_read(args.trajectory_path), where=args.trajectory_path)
        )
    _write(args.output, svgplot.emit_svg(net, traj))
    return EXIT_OK


def _cmd_gen(args) -> int:
    uav = _load_uav(args.uav_path)
    net = mapgen.generate_map(args.seed, args.m, args.n, args.size, uav, tau=args.tau)
    _write(args.output, documents.dumps(documents.map_to_doc(net)))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    uav = _load_uav(args.uav_path)
    raw = [v for v in args.values.split(",") if v]
    if args.variable == "unavailable":
        values: tuple = tuple(
            tuple(int(i) for i in chunk.split("+") if i) for chunk in raw
        )
    else:
        try:
            values = tuple(float(v) for v in raw)
        except ValueError:
            raise _CliError(f"--values: expected numbers, got {args.values!r}")
    spec = bench.ExperimentSpec(
        seed=args.seed,
        stations=args.m,
        charging=args.n,
        variable=args.variable,
        values=values,
        size=args.size,
        objective=args.objective,
        station_index=args.station,
        uav=uav,
    )
    _write(args.output, bench.sweep_table(spec))
    return EXIT_OK


def _cmd_probe(args) -> int:
    try:
        m_values = [int(v) for v in args.m.split(",") if v]
        n_values = [int(v) for v in args.n.split(",") if v]
    except ValueError:
        raise _CliError("--M and --N take comma-separated integers")
    rows = bench.scaling_probe(m_values, n_values, args.reps, args.seed)
    _write(args.output, bench.probe_table(rows))
    return EXIT_OK


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "coverage":
            net = _load_map(args.map_path)
            sys.stdout.write(format(net.d0, ".17g") + "\n")
            return EXIT_OK
        if args.command == "plan":
            return _cmd_plan(args)
        if args.command == "payload":
            return _cmd_payload(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "plot":
            return _cmd_plot(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "probe":
            return _cmd_probe(args)
        raise _CliError(f"unknown command {args.command!r}")
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (documents.DocumentError, MapValidationError, NoCoverageError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT_ERROR
    except RuntimeError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
