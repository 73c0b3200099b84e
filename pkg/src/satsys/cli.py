"""Command line interface.

Exit codes: 0 success, 1 usage error or failed check, 2 size limit or
work budget exceeded, 3 unparseable input file, 4 input that parses but
is not a saturated system of the right shape, 5 realization failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .counting import (
    count_closed_form,
    count_egf,
    count_recurrence,
    count_table,
    table_to_csv_text,
)
from .covers import (
    SaturatedCover,
    cover_condition_report,
    count_by_code_pairs,
    iter_saturated_covers,
)
from .grid import GridPoint, GridShape
from .modular import RealizationError, realize
from .transfer import (
    BudgetExceededError,
    DEFAULT_SEARCH_BUDGET,
    axiom_report,
    count_saturated_subset_search,
    from_pairs,
    is_saturated,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_LIMIT = 2
EXIT_PARSE = 3
EXIT_BAD_INPUT = 4
EXIT_UNREALIZED = 5

SERIES_LIMIT = 64
CODES_LIMIT = 8
GALLERY_LIMIT = 512


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors, which this tool reserves for
    # size limits; route them to the generic failure code instead
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAIL, f"{self.prog}: error: {message}\n")


def _bruteforce_fits(m: int, n: int) -> bool:
    return (m <= 2 and n <= 2) or (min(m, n) <= 1 and max(m, n) <= 3)


def _codes_fits(m: int, n: int) -> bool:
    return m <= CODES_LIMIT and n <= CODES_LIMIT


def _series_fits(m: int, n: int) -> bool:
    return m <= SERIES_LIMIT and n <= SERIES_LIMIT


_METHODS = {
    "recurrence": (lambda m, n, budget: count_recurrence(m, n), _series_fits),
    "closed": (lambda m, n, budget: count_closed_form(m, n), _series_fits),
    "egf": (lambda m, n, budget: count_egf(m, n), _series_fits),
    "codes": (
        lambda m, n, budget: count_by_code_pairs(GridShape(m, n)),
        _codes_fits,
    ),
    "bruteforce": (
        lambda m, n, budget: count_saturated_subset_search(
            GridShape(m, n), budget
        ),
        _bruteforce_fits,
    ),
}


def _write_output(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def cmd_count(args) -> int:
    m, n = args.m, args.n
    override = args.budget is not None
    budget = args.budget if override else DEFAULT_SEARCH_BUDGET
    if override:
        print(
            "warning: --budget waives the size limits; this may take long",
            file=sys.stderr,
        )

    if args.table:
        # the table always comes from the recurrence: budget-free and
        # already cross-checked against every other method
        if not (_series_fits(m, n) or override):
            print(
                f"count: shape ({m},{n}) is over the table limit; "
                "pass --budget to force",
                file=sys.stderr,
            )
            return EXIT_LIMIT
        text = table_to_csv_text(count_table(m, n))
        _write_output(text, args.output)
        return EXIT_OK

    if args.all_methods:
        names = [
            name
            for name, (_, fits) in _METHODS.items()
            if fits(m, n) or override
        ]
    else:
        names = [args.method]
        _, fits = _METHODS[args.method]
        if not (fits(m, n) or override):
            names = []
    if not names:
        print(
            f"count: shape ({m},{n}) is over the size limit for the "
            "requested method(s); pass --budget to force",
            file=sys.stderr,
        )
        return EXIT_LIMIT

    results = {}
    for name in names:
        fn, _ = _METHODS[name]
        try:
            results[name] = fn(m, n, budget)
        except BudgetExceededError as exc:
            print(f"count: {exc}", file=sys.stderr)
            return EXIT_LIMIT

    if args.all_methods:
        lines = [f"{name} {results[name]}" for name in names]
        _write_output("\n".join(lines) + "\n", args.output)
        if len(set(results.values())) > 1:
            print("count: methods disagree", file=sys.stderr)
            return EXIT_FAIL
        return EXIT_OK

    _write_output(f"{results[names[0]]}\n", args.output)
    return EXIT_OK


def _codes_line(cover: SaturatedCover) -> str:
    a, b = cover.codes
    return ",".join(map(str, a)) + "|" + ",".join(map(str, b))


def cmd_enumerate(args) -> int:
    m, n = args.m, args.n
    override = args.budget is not None
    budget = args.budget if override else DEFAULT_SEARCH_BUDGET
    if override:
        print(
            "warning: --budget waives the size limits; this may take long",
            file=sys.stderr,
        )
    elif not _codes_fits(m, n):
        print(
            f"enumerate: shape ({m},{n}) is over the enumeration limit; "
            "pass --budget to force",
            file=sys.stderr,
        )
        return EXIT_LIMIT
    # every height tuple yields at least one cover, so the population
    # bounds the enumeration work and can be checked up front
    population = count_recurrence(m, n)
    if population > budget:
        print(
            f"enumerate: ({m},{n}) holds {population} covers, over the "
            f"budget of {budget}; raise --budget to force",
            file=sys.stderr,
        )
        return EXIT_LIMIT

    renderers = {
        "json": lambda cover: cover.to_json() + "\n",
        "codes": lambda cover: _codes_line(cover) + "\n",
        "dot": lambda cover: cover.to_dot() + "\n",
    }
    render = renderers[args.format]
    handle = sys.stdout if args.output is None else open(args.output, "w")
    try:
        for cover in iter_saturated_covers(GridShape(m, n)):
            handle.write(render(cover))
    finally:
        if handle is not sys.stdout:
            handle.close()
    return EXIT_OK


def _load_json_file(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        return None
    except json.JSONDecodeError as exc:
        print(f"{path} is not valid JSON: {exc}", file=sys.stderr)
        return None


def _parse_shape(doc: dict) -> GridShape | None:
    m, n = doc.get("m"), doc.get("n")
    if isinstance(m, int) and isinstance(n, int) and m >= 0 and n >= 0:
        return GridShape(m, n)
    return None


def _parse_point_list(raw) -> list[tuple[int, int]] | None:
    if not isinstance(raw, list):
        return None
    out = []
    for entry in raw:
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(c, int) for c in entry)
        ):
            return None
        out.append((entry[0], entry[1]))
    return out


def _parse_pair_list(raw) -> list[tuple, ...] | None:
    if not isinstance(raw, list):
        return None
    out = []
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != 2:
            return None
        pts = _parse_point_list(entry)
        if pts is None:
            return None
        out.append((pts[0], pts[1]))
    return out


def _report_section(name: str, violations: list) -> bool:
    if violations:
        print(f"{name}: {len(violations)} violation(s)")
        for item in violations[:10]:
            print(f"  {item}")
        if len(violations) > 10:
            print(f"  ... and {len(violations) - 10} more")
        return False
    print(f"{name}: ok")
    return True


def cmd_verify(args) -> int:
    doc = _load_json_file(args.file)
    if doc is None:
        return EXIT_PARSE
    if not isinstance(doc, dict):
        print("expected a JSON object", file=sys.stderr)
        return EXIT_PARSE
    shape = _parse_shape(doc)
    if shape is None:
        print("missing or invalid m/n fields", file=sys.stderr)
        return EXIT_PARSE

    if "relations" in doc:
        pairs = _parse_pair_list(doc["relations"])
        if pairs is None:
            print("relations must be a list of point pairs", file=sys.stderr)
            return EXIT_PARSE
        report = axiom_report(shape, pairs)
        ok = True
        for axiom in ("not_ordered", "restriction", "transitivity"):
            ok &= _report_section(axiom, report[axiom])
        if not ok:
            return EXIT_FAIL
        system = from_pairs(
            shape, [(GridPoint(*a), GridPoint(*b)) for a, b in pairs]
        )
        print(f"saturated: {'yes' if is_saturated(system) else 'no'}")
        return EXIT_OK

    if "horizontal" in doc or "vertical" in doc:
        horizontal = _parse_point_list(doc.get("horizontal", []))
        vertical = _parse_point_list(doc.get("vertical", []))
        if horizontal is None or vertical is None:
            print("edge lists must contain [i, j] points", file=sys.stderr)
            return EXIT_PARSE
        report = cover_condition_report(
            shape,
            frozenset(GridPoint(*p) for p in horizontal),
            frozenset(GridPoint(*p) for p in vertical),
        )
        ok = True
        for condition in ("out_of_range", "column_prefix", "row_prefix", "square"):
            ok &= _report_section(condition, report[condition])
        if not ok:
            return EXIT_FAIL
        cover = SaturatedCover(
            shape,
            frozenset(GridPoint(*p) for p in horizontal),
            frozenset(GridPoint(*p) for p in vertical),
        )
        print(f"codes: {_codes_line(cover)}")
        return EXIT_OK

    print(
        "expected a transfer system (relations) or cover (horizontal/vertical)",
        file=sys.stderr,
    )
    return EXIT_PARSE


def cmd_realize(args) -> int:
    doc = _load_json_file(args.file)
    if doc is None:
        return EXIT_PARSE
    if not isinstance(doc, dict) or "relations" not in doc:
        print("expected a transfer system object", file=sys.stderr)
        return EXIT_PARSE
    shape = _parse_shape(doc)
    pairs = _parse_pair_list(doc.get("relations"))
    if shape is None or pairs is None:
        print("missing or invalid m/n/relations fields", file=sys.stderr)
        return EXIT_PARSE

    report = axiom_report(shape, pairs)
    if any(report.values()):
        print("input is not a transfer system:", file=sys.stderr)
        for axiom, violations in report.items():
            for item in violations[:5]:
                print(f"  {axiom}: {item}", file=sys.stderr)
        return EXIT_BAD_INPUT
    system = from_pairs(shape, [(GridPoint(*a), GridPoint(*b)) for a, b in pairs])

    budget = args.budget if args.budget is not None else DEFAULT_SEARCH_BUDGET
    try:
        cert = realize(system, args.p, args.q, budget)
    except ValueError as exc:
        print(f"realize: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except BudgetExceededError as exc:
        print(f"realize: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except RealizationError as exc:
        print(f"realize: verification failed: {exc}", file=sys.stderr)
        if exc.target is not None and exc.produced is not None:
            print(f"target:   {exc.target.to_json()}", file=sys.stderr)
            print(f"produced: {exc.produced.to_json()}", file=sys.stderr)
        return EXIT_UNREALIZED
    _write_output(cert.to_json() + "\n", args.output)
    return EXIT_OK


def cmd_report(args) -> int:
    m, n = args.m, args.n
    if not _series_fits(m, n):
        print(
            f"report: shape ({m},{n}) is over the report limit",
            file=sys.stderr,
        )
        return EXIT_LIMIT
    out = Path(args.output or "satsys-report")
    out.mkdir(parents=True, exist_ok=True)

    from . import figures

    written = []
    csv_path = out / "counts.csv"
    csv_path.write_text(table_to_csv_text(count_table(m, n)))
    written.append(csv_path)
    written.append(figures.save_count_heatmap(m, n, out / "heatmap.png"))
    population = count_recurrence(m, n)
    if population <= GALLERY_LIMIT:
        written.append(
            figures.save_gallery(GridShape(m, n), out / f"gallery_{m}x{n}.png")
        )
    else:
        print(
            f"report: skipping the gallery, {population} covers is over "
            f"{GALLERY_LIMIT}",
            file=sys.stderr,
        )
    for path in written:
        print(path)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from . import acceptance

    results = acceptance.run_all(quick=not args.full)
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"criterion {r.number:2d}: {status} ({r.elapsed:.2f}s) {r.label}")
        if not r.passed:
            print(f"  detail: {r.detail}")
            print(
                "  repro:  python3 -m pytest tests/test_acceptance.py"
                f" -k {r.number:02d}"
            )
    total = sum(r.elapsed for r in results)
    print(f"{len(results) - len(failed)}/{len(results)} passed in {total:.1f}s")
    return EXIT_OK if not failed else EXIT_FAIL


def _add_shape_args(sub) -> None:
    sub.add_argument("m", type=int, help="first exponent")
    sub.add_argument("n", type=int, help="second exponent")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="satsys",
        description="count, enumerate, verify and realize saturated transfer systems",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_count = subs.add_parser("count", help="count saturated transfer systems")
    _add_shape_args(p_count)
    p_count.add_argument(
        "--method",
        choices=sorted(_METHODS),
        default="recurrence",
    )
    p_count.add_argument("--all-methods", action="store_true")
    p_count.add_argument(
        "--table", action="store_true", help="emit the full CSV table up to (m, n)"
    )
    p_count.add_argument("--budget", type=int, default=None)
    p_count.add_argument("--output", default=None)
    p_count.set_defaults(fn=cmd_count)

    p_enum = subs.add_parser("enumerate", help="list all saturated covers")
    _add_shape_args(p_enum)
    p_enum.add_argument("--format", choices=["json", "codes", "dot"], default="json")
    p_enum.add_argument("--budget", type=int, default=None)
    p_enum.add_argument("--output", default=None)
    p_enum.set_defaults(fn=cmd_enumerate)

    p_verify = subs.add_parser("verify", help="check a system or cover file")
    p_verify.add_argument("file")
    p_verify.set_defaults(fn=cmd_verify)

    p_realize = subs.add_parser(
        "realize", help="construct an index set certificate for a system file"
    )
    p_realize.add_argument("file")
    p_realize.add_argument("p", type=int)
    p_realize.add_argument("q", type=int)
    p_realize.add_argument("--budget", type=int, default=None)
    p_realize.add_argument("--output", default=None)
    p_realize.set_defaults(fn=cmd_realize)

    p_report = subs.add_parser(
        "report", help="write the counts table, heatmap and gallery"
    )
    _add_shape_args(p_report)
    p_report.add_argument("--output", default=None, help="output directory")
    p_report.set_defaults(fn=cmd_report)

    p_self = subs.add_parser("selftest", help="run the acceptance checks")
    p_self.add_argument(
        "--full", action="store_true", help="run every criterion at full size"
    )
    p_self.set_defaults(fn=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
