"""``mrcpp`` command line: decompose, plan, verify, benchmark.

Exit codes: 0 ok, 1 usage, 2 map or output I/O, 3 disconnected free space,
4 start pixel not plannable, 5 plan failed verification.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .bench import DEFAULT_K, EnvParams, aggregate, evaluate, aggregate_json, format_table, rows_to_csv, run_suite
from .decomposition import DisconnectedMapError, build_dual, assign_weights, decompose, to_json
from .gridmap import GeodesicError, GridMap, MapFormatError, load_map, read_map
from .pathgen import FootprintSpec, verify_coverage
from .planner import ALGORITHMS, dumps, make_plan, plan_from_json, plan_to_json, prepare, verify
from .render import plan_svg

EXIT_USAGE, EXIT_IO, EXIT_DISCONNECTED, EXIT_START, EXIT_INCOMPLETE = 1, 2, 3, 4, 5
SAMPLE_PREFIX = "sample:"

log = logging.getLogger("mrcpp")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 by default; 2 is reserved for I/O
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def sample_names() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files("mrcpp").joinpath("data").iterdir() if p.name.endswith(".txt"))


def _load(source: str, fmt: str | None) -> GridMap:
    try:
        if source.startswith(SAMPLE_PREFIX):
            name = source[len(SAMPLE_PREFIX):]
            if name not in sample_names():
                raise CliError(EXIT_IO, f"unknown sample map {name!r}; available: {', '.join(sample_names())}")
            data = resources.files("mrcpp").joinpath("data", name + ".txt").read_bytes()
            return load_map(data, fmt or "ascii")
        return read_map(source, fmt)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read map {source}: {exc.strerror or exc}") from exc
    except MapFormatError as exc:
        raise CliError(EXIT_IO, f"bad map {source}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from exc


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _point(s: str) -> tuple[int, int]:
    try:
        x, y = (int(t) for t in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y pixel coordinates, got {s!r}")
    return x, y


def _k_list(s: str) -> tuple[int, ...]:
    try:
        ks = tuple(_positive_int(t) for t in s.split(",") if t.strip())
    except argparse.ArgumentTypeError as exc:
        raise argparse.ArgumentTypeError(f"bad --k-list: {exc}")
    if not ks:
        raise argparse.ArgumentTypeError("empty --k-list")
    return ks


def _radius(s: str) -> float:
    try:
        return FootprintSpec(float(s)).radius
    except ValueError:
        raise argparse.ArgumentTypeError(f"footprint radius must be a positive number, got {s!r}")


def _prepare(args, grid: GridMap):
    start = args.start
    if start is not None and not grid.in_bounds(start):
        raise CliError(EXIT_USAGE, f"start {start[0]},{start[1]} is outside the {grid.width}x{grid.height} map")
    try:
        return prepare(grid, start, args.largest_component)
    except DisconnectedMapError as exc:
        raise CliError(EXIT_DISCONNECTED, f"{exc} (use --largest-component to plan the largest one)") from exc
    except GeodesicError as exc:
        raise CliError(EXIT_START, str(exc)) from exc


# ------------------------------------------------------------------ commands

def cmd_decompose(args) -> int:
    grid = _load(args.map, args.format)
    try:
        decomp = decompose(grid, args.largest_component)
    except DisconnectedMapError as exc:
        raise CliError(EXIT_DISCONNECTED, f"{exc} (use --largest-component to plan the largest one)") from exc
    graph = None
    if args.start is not None:
        try:
            graph = assign_weights(decomp, grid, args.start)
        except GeodesicError as exc:
            raise CliError(EXIT_START, str(exc)) from exc
    doc = {"map": args.map, **to_json(decomp, graph, build_dual(decomp, grid.resolution))}
    _write(args.out, json.dumps(doc, indent=1) + "\n")
    log.info("%d cells, %d critical vertices", len(decomp.cells), len(decomp.vertices))
    return 0


def cmd_plan(args) -> int:
    grid = _load(args.map, args.format)
    problem = _prepare(args, grid)
    result = make_plan(problem, args.algorithm, args.robots, FootprintSpec(args.footprint))
    report = verify(problem, result.plan)
    doc = plan_to_json(result, args.map)
    doc["coverage"] = {"free": report.free, "covered": report.covered, "missed": report.missed, "overlap": report.overlap}
    doc["excluded_area"] = problem.decomposition.excluded_area
    _write(args.out, dumps(doc))
    if args.svg:
        _write(args.svg, plan_svg(result.plan, grid))
    m = result.metrics
    log.info(
        "%s k=%d: utilization %.1f%%, max cost %.3f (ratio %.3f), missed %d",
        args.algorithm.upper(), args.robots, m.utilization, m.max_cost, m.max_cost_ratio, report.missed,
    )
    if problem.decomposition.excluded_area:
        log.warning("%d free pixels outside the largest component were excluded", problem.decomposition.excluded_area)
    return 0 if report.missed == 0 else EXIT_INCOMPLETE


def cmd_verify(args) -> int:
    grid = _load(args.map, args.format)
    try:
        doc = json.loads(Path(args.plan).read_text())
        plan = plan_from_json(doc)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read plan {args.plan}: {exc.strerror or exc}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_IO, f"malformed plan {args.plan}: {exc}") from exc
    region = None
    if args.largest_component:
        region = decompose(grid, True).region
    report = verify_coverage(plan, grid, region)
    m = evaluate(plan, doc["reference_cost"], doc["k"])
    metrics = {"utilization_pct": m.utilization, "max_cost": m.max_cost, "max_cost_ratio": m.max_cost_ratio}
    out = {
        "free": report.free,
        "covered": report.covered,
        "missed": report.missed,
        "overlap": report.overlap,
        "metrics": metrics,
        "metrics_match": metrics == doc.get("metrics"),
    }
    _write(None, json.dumps(out, indent=1) + "\n")
    return 0 if report.missed == 0 else EXIT_INCOMPLETE


def cmd_benchmark(args) -> int:
    # fail on an unwritable destination before spending minutes on the suite
    for path in (args.out, args.aggregate):
        if path and path != "-":
            try:
                with open(path, "a"):
                    pass
            except OSError as exc:
                raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from exc
    params = EnvParams(width=args.width, height=args.height)
    seeds = range(args.seed, args.seed + args.maps)
    rows = run_suite(seeds, args.k_list, args.algorithms, params, FootprintSpec(args.footprint), args.jobs, args.timings)
    agg = aggregate(rows)
    csv_text = rows_to_csv(rows)
    if args.out:
        _write(args.out, csv_text)
    if args.aggregate:
        _write(args.aggregate, aggregate_json(agg))
    # the summary table only goes to stdout when no artifact is streamed there
    stream = sys.stderr if "-" in (args.out, args.aggregate) else sys.stdout
    stream.write(format_table(agg) + "\n")
    return 0


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mrcpp", description="Multi-robot complete coverage planning on occupancy grid maps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def map_args(sp, start_help):
        sp.add_argument("--map", required=True, help=f"PGM/ASCII map path, or {SAMPLE_PREFIX}NAME for a bundled map")
        sp.add_argument("--format", choices=("pgm", "ascii"), help="override format detection")
        sp.add_argument("--largest-component", action="store_true", help="plan only the largest free component")
        sp.add_argument("--start", type=_point, metavar="X,Y", help=start_help)

    d = sub.add_parser("decompose", help="boustrophedon cells and Reeb graph as JSON")
    map_args(d, "also weight the Reeb graph from this start pixel")
    d.add_argument("--out", help="JSON destination (default stdout)")
    d.set_defaults(func=cmd_decompose)

    pl = sub.add_parser("plan", help="plan k robot coverage paths")
    map_args(pl, "start pixel (default: first free pixel, row-major)")
    pl.add_argument("--algorithm", choices=ALGORITHMS, default="crc")
    pl.add_argument("--robots", "-k", type=_positive_int, default=1, metavar="K")
    pl.add_argument("--footprint", type=_radius, default=0.5, metavar="RADIUS", help="footprint half-width in pixels")
    pl.add_argument("--out", help="plan JSON destination (default stdout)")
    pl.add_argument("--svg", help="also render the plan as SVG")
    pl.set_defaults(func=cmd_plan)

    v = sub.add_parser("verify", help="re-check a written plan against its map")
    v.add_argument("--map", required=True)
    v.add_argument("--format", choices=("pgm", "ascii"))
    v.add_argument("--largest-component", action="store_true")
    v.add_argument("--plan", required=True, help="plan JSON written by 'mrcpp plan'")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("benchmark", help="compare algorithms on generated maps")
    b.add_argument("--maps", type=_positive_int, default=200)
    b.add_argument("--seed", type=int, default=0, help="first seed; map i uses seed+i")
    b.add_argument("--k-list", type=_k_list, default=DEFAULT_K, metavar="K1,K2,...")
    b.add_argument("--algorithms", type=lambda s: tuple(s.split(",")), default=ALGORITHMS, metavar="A1,A2,...")
    b.add_argument("--width", type=_positive_int, default=EnvParams.width)
    b.add_argument("--height", type=_positive_int, default=EnvParams.height)
    b.add_argument("--footprint", type=_radius, default=0.5)
    b.add_argument("--out", help="per-run CSV destination ('-' for stdout)")
    b.add_argument("--aggregate", help="aggregate JSON destination ('-' for stdout)")
    b.add_argument("--jobs", type=_positive_int, default=1)
    b.add_argument("--timings", action="store_true", help="fill wall_ms (makes the CSV non-deterministic)")
    b.set_defaults(func=cmd_benchmark)
    for sp in (d, pl, v, b):
        sp.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        bad = [a for a in getattr(args, "algorithms", ()) if a not in ALGORITHMS]
        if bad:
            parser.error(f"unknown algorithm(s): {', '.join(bad)}")
    except SystemExit as exc:  # usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"mrcpp: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
