"""Command-line interface.

Exit codes: 0 success, 1 violations found, 2 usage or input error. Machine
output goes to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import catalog as cat
from . import harness
from . import linalg as la
from .radius import numerical_radius
from .transforms import aluthge_t, polar_decompose

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_dims(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            dims = list(range(int(lo), int(hi) + 1))
        else:
            dims = [int(d) for d in text.split(",") if d.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}; use e.g. 2..6 or 2,4") from None
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"dims must be positive integers, got {text!r}")
    return dims


def _parse_grid(text: str) -> list[float]:
    try:
        grid = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad t grid {text!r}") from None
    if not grid or any(not 0.0 <= t <= 1.0 for t in grid):
        raise argparse.ArgumentTypeError(f"t values must lie in [0, 1], got {text!r}")
    return grid


def _positive(kind):
    def parse(text):
        try:
            val = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not val > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return val

    return parse


def _add_common(p, trials=1000):
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=_positive(float), default=cat.DEFAULT_TOL)
    p.add_argument("--trials", type=_positive(int), default=trials)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="numrad", allow_abbrev=False, description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", allow_abbrev=False, help="compute one quantity of a matrix file")
    p.add_argument("--matrix", required=True, help="matrix JSON file ('-' for stdin)")
    p.add_argument("--quantity", choices=("w", "norm", "aluthge", "polar"), required=True)
    p.add_argument("--t", type=float)
    p.add_argument("--tol", type=_positive(float))
    p.add_argument("--out")

    p = sub.add_parser("check", allow_abbrev=False, help="run the verification suite")
    p.add_argument("--entry", action="append", help="entry id (repeatable; default all)")
    p.add_argument("--family", action="append", choices=harness.FAMILIES, help="repeatable; default all")
    p.add_argument("--dims", type=_parse_dims, default=list(range(2, 7)))
    p.add_argument("--t-grid", type=_parse_grid, default=list(harness.T_GRID))
    p.add_argument("--quiet", action="store_true", help="no progress on stderr")
    _add_common(p)

    p = sub.add_parser("sweep", allow_abbrev=False, help="worst margin per t for one entry")
    p.add_argument("--entry", required=True)
    p.add_argument("--family", choices=harness.FAMILIES, default="gaussian")
    p.add_argument("--dims", type=_parse_dims, default=[4])
    p.add_argument("--t-grid", type=_parse_grid, default=list(harness.T_GRID))
    _add_common(p)

    p = sub.add_parser("search", allow_abbrev=False, help="search for operands minimizing a margin")
    p.add_argument("--entry", required=True)
    p.add_argument("--family", choices=harness.FAMILIES, default="gaussian")
    p.add_argument("--dims", type=_parse_dims, default=[2])
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=_positive(float), default=cat.DEFAULT_TOL)
    p.add_argument("--out")

    p = sub.add_parser("list", allow_abbrev=False, help="list registry entries")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    return parser


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_matrix(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        return la.loads_matrix(text)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except (ValueError, la.ShapeError) as exc:
        raise UsageError(f"malformed matrix in {path}: {exc}") from None


def _entry(entry_id: str) -> cat.CatalogEntry:
    try:
        return cat.get_entry(entry_id)
    except cat.UnknownEntry:
        raise UsageError(f"unknown entry {entry_id!r}; see 'numrad list'") from None


def cmd_compute(args) -> int:
    a = _read_matrix(args.matrix)
    if args.quantity in ("w", "aluthge", "polar") and a.shape[0] != a.shape[1]:
        raise UsageError(f"{args.quantity} needs a square matrix, got {a.shape}")
    if args.quantity == "w":
        out = {"quantity": "w", **numerical_radius(a, tol=args.tol).to_dict()}
    elif args.quantity == "norm":
        out = {"quantity": "norm", "value": la.spectral_norm(a)}
    elif args.quantity == "aluthge":
        if args.t is None:
            raise UsageError("--t is required for the aluthge quantity")
        if not 0.0 <= args.t <= 1.0:
            raise UsageError(f"--t must lie in [0, 1], got {args.t}")
        out = la.matrix_to_dict(aluthge_t(a, args.t))
    else:
        parts = polar_decompose(a)
        out = {"isometry": la.matrix_to_dict(parts.isometry), "positive": la.matrix_to_dict(parts.positive)}
    _emit(json.dumps(out), args.out)
    return EXIT_OK


def _rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def cmd_check(args) -> int:
    entries = [_entry(e).id for e in args.entry] if args.entry else [e.id for e in cat.list_entries()]
    families = args.family or list(harness.FAMILIES)
    specs = [harness.GeneratorSpec(f, d, args.seed) for f in families for d in args.dims]
    for eid in entries:
        entry = cat.get_entry(eid)
        if not any(harness.compatible(entry, s) for s in specs):
            raise UsageError(f"{eid} has no compatible family/dimension among the selection")

    def progress(report):
        if not args.quiet:
            status = "ok" if report.passed else f"{len(report.violations)} VIOLATIONS"
            print(
                f"{report.entry} {report.spec.family} n={report.spec.dim}: "
                f"min margin {report.min_margin:+.3e} {status}",
                file=sys.stderr,
            )

    reports = harness.run_suite(
        entries, specs, args.trials, args.tol, args.t_grid, skip_incompatible=True, progress=progress
    )
    text = harness.reports_to_csv(reports) if args.format == "csv" else harness.reports_to_json(reports)
    _emit(text, args.out)
    bad = [r for r in reports if r.violations]
    covered = sorted({r.entry for r in reports})
    print(f"{len(reports)} reports over {len(covered)} entries, {len(bad)} with violations", file=sys.stderr)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_sweep(args) -> int:
    entry = _entry(args.entry)
    if not entry.has_t:
        raise UsageError(f"{entry.id} has no t parameter")
    rows = []
    for dim in args.dims:
        spec = harness.GeneratorSpec(args.family, dim, args.seed)
        if not harness.compatible(entry, spec):
            raise UsageError(f"{entry.id} cannot run on {args.family} dim {dim}: {harness.incompatibility(entry, spec)}")
        for row in harness.t_sweep(entry.id, spec, args.trials, args.t_grid, args.tol):
            rows.append({"entry": entry.id, "family": args.family, "dim": dim, **row})
    text = _rows_to_csv(rows) if args.format == "csv" else json.dumps(rows, indent=2)
    _emit(text, args.out)
    return EXIT_VIOLATION if any(r["violations"] for r in rows) else EXIT_OK


def cmd_search(args) -> int:
    entry = _entry(args.entry)
    if args.budget < 1:
        raise UsageError(f"--budget must be >= 1, got {args.budget}")
    if not 0.0 <= args.t <= 1.0:
        raise UsageError(f"--t must lie in [0, 1], got {args.t}")
    if len(args.dims) != 1:
        raise UsageError("search takes a single dimension")
    spec = harness.GeneratorSpec(args.family, args.dims[0], args.seed)
    if not harness.compatible(entry, spec):
        raise UsageError(harness.incompatibility(entry, spec))
    res = harness.tightness_search(entry.id, spec, args.budget, args.tol, t=args.t)
    _emit(json.dumps(res.to_dict()), args.out)
    return EXIT_VIOLATION if res.margin < -args.tol else EXIT_OK


def cmd_list(args) -> int:
    if args.format == "json":
        text = json.dumps(cat.registry_json(), indent=2)
    else:
        text = "\n".join(
            f"{e.id}\t{e.kind.value}\t{','.join(r.value for r in e.arity)}\t{e.anchor}: \"{e.quote}\""
            for e in cat.list_entries()
        )
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "check": cmd_check, "sweep": cmd_sweep, "search": cmd_search, "list": cmd_list}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"numrad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
