"""Self-test suite behind the ``satsys selftest`` command.

Each check returns (passed, detail) and is registered with a number and
a label; ``run_all`` times them.  The quick variant trims the sizes so
the whole run stays interactive, the full variant runs everything at
the sizes the test-suite pins.
"""

from __future__ import annotations

import filecmp
import random
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from .counting import (
    count_closed_form,
    count_egf,
    count_recurrence,
    egf_pde_residual,
    stirling2,
    stirling_alternating_identity,
)
from .covers import (
    classify,
    collapse,
    count_by_code_pairs,
    cover_from_codes,
    cover_to_system,
    expand,
    iter_saturated_covers,
    system_to_cover,
)
from .grid import GridShape
from .modular import (
    RealizationError,
    divisor_relation_report,
    find_index_set_bruteforce,
    modular_transfer_system,
    negation_orbit_count,
    realize,
    relation_from_orbit_mask,
)
from .transfer import (
    count_saturated_subset_search,
    generate,
    is_saturated,
    iter_saturated_systems,
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    label: str
    passed: bool
    detail: str
    elapsed: float


def check_base_rows(quick: bool) -> tuple[bool, str]:
    top = 20
    for m in range(top + 1):
        for fn in (count_recurrence, count_closed_form):
            if fn(m, 0) != 2 ** m or fn(0, m) != 2 ** m:
                return False, f"{fn.__name__} wrong on a base row at {m}"
    return True, f"both base rows match powers of two up to {top}, two methods"


def check_five_methods(quick: bool) -> tuple[bool, str]:
    shape = GridShape(1, 1)
    values = {
        "recurrence": count_recurrence(1, 1),
        "closed": count_closed_form(1, 1),
        "egf": count_egf(1, 1),
        "codes": count_by_code_pairs(shape),
        "subset search": count_saturated_subset_search(shape),
    }
    if set(values.values()) != {7}:
        return False, f"expected 7 everywhere, got {values}"
    return True, "all five counting methods give 7 on the unit square"


def check_series_agreement(quick: bool) -> tuple[bool, str]:
    top = 4 if quick else 6
    for m in range(top + 1):
        for n in range(top + 1):
            a = count_recurrence(m, n)
            b = count_closed_form(m, n)
            c = count_egf(m, n)
            if not a == b == c:
                return False, f"({m},{n}): recurrence {a}, closed {b}, egf {c}"
            if a != count_recurrence(n, m):
                return False, f"count not symmetric at ({m},{n})"
    return True, f"recurrence, closed form and series agree on 0..{top} squared"


def check_enumeration_oracles(quick: bool) -> tuple[bool, str]:
    top = 5
    for m in range(top + 1):
        for n in range(top + 1):
            a = count_by_code_pairs(GridShape(m, n))
            b = count_closed_form(m, n)
            if a != b:
                return False, f"({m},{n}): codes {a}, closed {b}"
    for m, n in ((1, 1), (2, 1), (1, 2), (1, 3)):
        a = count_saturated_subset_search(GridShape(m, n))
        b = count_closed_form(m, n)
        if a != b:
            return False, f"({m},{n}): subset search {a}, closed {b}"
    return True, "code-pair and subset-search counts match the closed form"


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for idx in range(len(part)):
            yield part[:idx] + [part[idx] + [first]] + part[idx + 1:]
        yield [[first]] + part


def check_weighted_identity(quick: bool) -> tuple[bool, str]:
    for ell in range(13):
        for r in range(ell + 1):
            left, right = stirling_alternating_identity(ell, r)
            if left != right:
                return False, f"identity sides differ at ell={ell}, r={r}"
    top = 6 if quick else 8
    for ell in range(1, top + 1):
        per_blocks: dict[int, int] = {}
        for part in _set_partitions(list(range(ell))):
            marks = sum(
                1 for block in part for x in block if x != min(block)
            )
            per_blocks[len(part)] = per_blocks.get(len(part), 0) + marks
        for r in range(ell + 1):
            direct = per_blocks.get(r, 0)
            if direct != (ell - r) * stirling2(ell, r):
                return False, f"direct count differs at ell={ell}, r={r}"
            if direct != stirling_alternating_identity(ell, r)[1]:
                return False, f"identity misses the count at ell={ell}, r={r}"
    return True, f"identity holds to 12, matches marked counts to {top}"


def check_differential_relation(quick: bool) -> tuple[bool, str]:
    degree = 6 if quick else 10
    residual = egf_pde_residual(degree + 1, degree + 1)
    bad = [
        (i, j)
        for i in range(degree + 1)
        for j in range(degree + 1)
        if i + j <= degree and residual.coeff(i, j) != 0
    ]
    if bad:
        return False, f"residual is nonzero at {bad[:5]}"
    return True, f"series residual vanishes to total degree {degree}"


def check_fiber_structure(quick: bool) -> tuple[bool, str]:
    top = 2 if quick else 3
    for m in range(top + 1):
        for n in range(1, top + 1):
            gs = GridShape(m, n)
            sizes: dict[frozenset, int] = {}
            for cov in iter_saturated_covers(gs):
                sub, signature = collapse(cov)
                sizes[signature] = sizes.get(signature, 0) + 1
                if expand(sub, signature, gs) != cov:
                    return False, f"collapse then expand moved a cover on {gs}"
            if len(sizes) != 2 ** (m + 1):
                return False, f"{gs}: {len(sizes)} classes, not {2 ** (m + 1)}"
            for signature, size in sizes.items():
                width = m if len(signature) == m + 1 else len(signature)
                if size != count_recurrence(width, n - 1):
                    return (
                        False,
                        f"{gs}: fiber {sorted(signature)} holds {size}",
                    )
                for sub in iter_saturated_covers(GridShape(width, n - 1)):
                    if collapse(expand(sub, signature, gs)) != (sub, signature):
                        return False, f"expand then collapse moved {signature}"
    return True, f"fiber sizes and both inverses verified for m,n up to {top}"


def check_bijections(quick: bool) -> tuple[bool, str]:
    top = 3 if quick else 4
    seen = 0
    for m in range(top + 1):
        for n in range(top + 1):
            gs = GridShape(m, n)
            for cov in iter_saturated_covers(gs):
                seen += 1
                if cover_from_codes(gs, cov.codes) != cov:
                    return False, f"code round trip failed on {gs}"
                if system_to_cover(cover_to_system(cov)) != cov:
                    return False, f"system round trip failed on {gs}"
    return True, f"{seen} covers round-tripped through codes and systems"


def check_modular_saturation(quick: bool) -> tuple[bool, str]:
    max_k = 80 if quick else 200
    exhaustive_orbits = 12 if quick else 16
    samples = 50 if quick else 1000
    rng = random.Random(2026)
    checked = 0
    for k in range(1, max_k + 1):
        orbits = negation_orbit_count(k)
        if k <= 60 and orbits <= exhaustive_orbits:
            masks = range(2 ** orbits)
        else:
            masks = (rng.getrandbits(orbits) for _ in range(samples))
        for mask in masks:
            relation = relation_from_orbit_mask(k, mask)
            report = divisor_relation_report(k, relation)
            if any(report.values()):
                return False, f"k={k} mask={mask}: {report}"
            checked += 1
    return True, f"{checked} index sets up to k={max_k} all induce saturated systems"


def check_realization_sweep(quick: bool) -> tuple[bool, str]:
    expected = {0: 2, 1: 7, 2: 23}
    realized = 0
    for p, q in ((5, 7), (7, 5), (5, 11)):
        for n, want in expected.items():
            targets = list(iter_saturated_systems(GridShape(1, n)))
            if len(targets) != want:
                return False, f"(1,{n}) holds {len(targets)} systems, not {want}"
            for target in targets:
                try:
                    cert = realize(target, p, q)
                    cert.verify()
                except (RealizationError, ValueError) as exc:
                    return False, f"p={p} q={q} n={n}: {exc}"
                realized += 1
    confirmed = 0
    unit = list(iter_saturated_systems(GridShape(1, 1)))
    for target in unit:
        found = find_index_set_bruteforce(target, 35, 5, 7)
        if found is None or modular_transfer_system(found, 5, 7) != target:
            return False, "exhaustive search missed a target on Z/35"
        confirmed += 1
    for position in (0, 1, 3, 5):
        target = unit[position]
        found = find_index_set_bruteforce(target, 55, 5, 11)
        if found is None or modular_transfer_system(found, 5, 11) != target:
            return False, f"exhaustive search missed target {position} on Z/55"
        confirmed += 1
    return (
        True,
        f"{realized} certificates verified, {confirmed} confirmed exhaustively",
    )


def check_unrealizable(quick: bool) -> tuple[bool, str]:
    claw = generate(GridShape(1, 1), [((0, 0), (1, 1))])
    if is_saturated(claw):
        return False, "the claw system is unexpectedly saturated"
    found = find_index_set_bruteforce(claw, 35, 5, 7)
    if found is not None:
        return False, f"unexpected index set {found}"
    return True, "no index set on Z/35 induces the non-saturated claw"


def check_determinism(quick: bool) -> tuple[bool, str]:
    from . import cli

    with tempfile.TemporaryDirectory() as tmp:
        base = Path(tmp)
        for label, argv in (
            ("enumerate", ["enumerate", "2", "2"]),
            ("realize", None),
        ):
            if argv is None:
                target = next(iter_saturated_systems(GridShape(1, 2)))
                source = base / "target.json"
                source.write_text(target.to_json())
                argv = ["realize", str(source), "5", "7"]
            first, second = base / f"{label}_a", base / f"{label}_b"
            if cli.main(argv + ["--output", str(first)]) != 0:
                return False, f"{label} run failed"
            if cli.main(argv + ["--output", str(second)]) != 0:
                return False, f"{label} rerun failed"
            if not filecmp.cmp(first, second, shallow=False):
                return False, f"{label} output differs between runs"
    return True, "enumerate and realize rerun byte-identically"


_CRITERIA = (
    (1, "base row counts", check_base_rows),
    (2, "five methods on the unit square", check_five_methods),
    (3, "series methods agree, symmetrically", check_series_agreement),
    (4, "enumeration oracles", check_enumeration_oracles),
    (5, "weighted partition identity", check_weighted_identity),
    (6, "differential relation of the series", check_differential_relation),
    (7, "top-row fiber structure", check_fiber_structure),
    (8, "bijection round trips", check_bijections),
    (9, "index sets are saturated", check_modular_saturation),
    (10, "realization sweep with certificates", check_realization_sweep),
    (11, "non-saturated systems are unrealizable", check_unrealizable),
    (12, "deterministic command output", check_determinism),
)


def run_criterion(number: int, quick: bool = False) -> CriterionResult:
    for num, label, fn in _CRITERIA:
        if num == number:
            start = time.perf_counter()
            try:
                passed, detail = fn(quick)
            except Exception as exc:  # a crash is a failure, not an abort
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            return CriterionResult(
                num, label, passed, detail, time.perf_counter() - start
            )
    raise ValueError(f"no criterion numbered {number}")


def run_all(quick: bool = False) -> list[CriterionResult]:
    return [run_criterion(num, quick) for num, _, _ in _CRITERIA]
