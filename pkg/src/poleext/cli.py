"""Command-line front end: degree, fixed-points, extend, render."""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from pathlib import Path

from .circlemap import fixed_points
from .expr import LiftError
from .extend import NoFixedPointError, StrategyError
from .geom2d import DomainError
from .render import RenderSpec, render_svg
from .scenario import Scenario, ScenarioError, prepare, run_pipeline, sample_rows
from .verify import dumps

EXIT_OK = 0
EXIT_NO_FIXED_POINT = 2
EXIT_INVALID = 3
EXIT_STRATEGY = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(args) -> Scenario:
    sc = Scenario.load(args.scenario)
    return sc.with_overrides(
        strategy=getattr(args, "strategy", None),
        grid_n=getattr(args, "grid", None),
        tol=getattr(args, "tol", None),
        seed=getattr(args, "seed", None),
    )


def cmd_degree(args) -> int:
    print(_load(args).boundary_map().degree)
    return EXIT_OK


def cmd_fixed_points(args) -> int:
    fps = fixed_points(_load(args).boundary_map())
    if fps.kind == "all-fixed":
        print('"all-fixed"')
        return EXIT_OK
    print(dumps([float(p) for p in fps.points]))
    return EXIT_OK if fps else EXIT_NO_FIXED_POINT


def cmd_extend(args) -> int:
    result = run_pipeline(_load(args))
    out = Path(args.out)
    header, rows = sample_rows(result)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    write_atomic(out / "report.json", result.report.to_json() + "\n")
    write_atomic(out / "samples.csv", buf.getvalue())
    print(str(out / "report.json"))
    return EXIT_OK


def cmd_render(args) -> int:
    spec = RenderSpec(str(args.out), args.svg_size, args.density)
    _, domain, ext = prepare(_load(args))
    path = Path(args.out)
    if path.suffix.lower() != ".svg":
        path = path / "figure.svg"
    write_atomic(path, render_svg(domain, ext, spec))
    print(str(path))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poleext", description="Extend boundary self-maps of star-shaped domains without interior fixed points.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, overrides: bool = True):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        if overrides:
            p.add_argument("--strategy", choices=["rotation", "collapse0", "witness"])
            p.add_argument("--seed", type=int)

    common(sub.add_parser("degree", help="print the degree of the boundary map"), overrides=False)
    common(sub.add_parser("fixed-points", help="print the fixed points of the boundary map"), overrides=False)

    p = sub.add_parser("extend", help="build the extension and write report.json and samples.csv")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--grid", type=int, help="scan grid size (>= 16)")
    p.add_argument("--tol", type=float, help="scan residual tolerance (> 0)")

    p = sub.add_parser("render", help="write an SVG of the extension")
    common(p)
    p.add_argument("--out", required=True, help="output .svg path or directory")
    p.add_argument("--svg-size", type=int, default=512)
    p.add_argument("--density", type=int, default=16)
    return parser


_COMMANDS = {"degree": cmd_degree, "fixed-points": cmd_fixed_points, "extend": cmd_extend, "render": cmd_render}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    if getattr(args, "grid", None) is not None and args.grid < 16:
        print("poleext: error: --grid must be at least 16", file=sys.stderr)
        return EXIT_INVALID
    if getattr(args, "tol", None) is not None and not args.tol > 0:
        print("poleext: error: --tol must be positive", file=sys.stderr)
        return EXIT_INVALID
    try:
        return _COMMANDS[args.command](args)
    except NoFixedPointError as exc:
        print(f"poleext: {exc}", file=sys.stderr)
        return EXIT_NO_FIXED_POINT
    except StrategyError as exc:
        print(f"poleext: strategy not applicable: {exc}", file=sys.stderr)
        return EXIT_STRATEGY
    except (ScenarioError, LiftError, DomainError, ValueError) as exc:
        print(f"poleext: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
