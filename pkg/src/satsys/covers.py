"""Saturated covers: the unit-edge skeletons of saturated transfer systems.

A saturated transfer system is determined by the unit grid edges it
admits, and the edge sets that arise are exactly those satisfying
three local conditions:

  1. in each column, the present horizontal edges fill a bottom-up
     prefix of heights,
  2. in each row, the present vertical edges fill a left-to-right
     prefix of depths,
  3. no unit square has exactly three of its four edges.

Such an edge set is a saturated cover.  Conditions 1 and 2 let a cover
be encoded by its column heights and row depths; condition 3 is a
pairwise compatibility constraint between the two tuples, so covers
can be enumerated and counted through these code pairs.

Covers of height n fiber over subsets of {0..m} via the shape of the
top row; collapsing the top row and the columns it forces to be full
drops a cover to height n - 1, and that descent drives both the
counting recurrence and the inductive realization.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

from .grid import GridEdge, GridPoint, GridShape, horizontal_edge, vertical_edge
from .transfer import TransferSystem, generate, is_saturated, pair_space


class CoverError(ValueError):
    """Edge set violates one of the three saturated-cover conditions."""


class CodePair(NamedTuple):
    """Column heights and row depths of a saturated cover.

    ``column_heights[i-1]`` counts the horizontal edges in column i,
    so it lies in 0..n+1; ``row_depths[j-1]`` counts the vertical
    edges in row j, in 0..m+1.
    """

    column_heights: tuple[int, ...]
    row_depths: tuple[int, ...]


@dataclass(frozen=True)
class SaturatedCover:
    """Unit-edge set satisfying the three cover conditions.

    Edges are stored by source point: ``horizontal`` holds (i, j) for
    each edge (i, j) -> (i+1, j), ``vertical`` holds (i, j) for each
    edge (i, j) -> (i, j+1).  Construction validates the conditions.
    """

    shape: GridShape
    horizontal: frozenset[GridPoint]
    vertical: frozenset[GridPoint]

    def __post_init__(self) -> None:
        report = cover_condition_report(
            self.shape, self.horizontal, self.vertical
        )
        bad = {k: v for k, v in report.items() if v}
        if bad:
            raise CoverError(f"not a saturated cover: {bad}")

    @cached_property
    def codes(self) -> CodePair:
        m, n = self.shape
        heights = tuple(
            sum(1 for j in range(n + 1) if GridPoint(i - 1, j) in self.horizontal)
            for i in range(1, m + 1)
        )
        depths = tuple(
            sum(1 for i in range(m + 1) if GridPoint(i, j - 1) in self.vertical)
            for j in range(1, n + 1)
        )
        return CodePair(heights, depths)

    @property
    def edges(self) -> tuple[GridEdge, ...]:
        out = [horizontal_edge(p.i, p.j) for p in self.horizontal]
        out += [vertical_edge(p.i, p.j) for p in self.vertical]
        return tuple(sorted(out))

    def to_json_dict(self) -> dict:
        return {
            "m": self.shape.m,
            "n": self.shape.n,
            "horizontal": sorted([p.i, p.j] for p in self.horizontal),
            "vertical": sorted([p.i, p.j] for p in self.vertical),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    def to_dot(self) -> str:
        """Graphviz rendering of the grid with admitted edges solid."""
        m, n = self.shape
        lines = [
            "digraph cover {",
            "  rankdir=BT;",
            '  node [shape=plaintext, fontsize=11];',
        ]
        for i in range(m + 1):
            for j in range(n + 1):
                lines.append(
                    f'  p{i}_{j} [label="({i},{j})", pos="{i},{j}!"];'
                )
        for i in range(m):
            for j in range(n + 1):
                style = "solid" if GridPoint(i, j) in self.horizontal else "dotted"
                lines.append(f"  p{i}_{j} -> p{i + 1}_{j} [style={style}];")
        for i in range(m + 1):
            for j in range(n):
                style = "solid" if GridPoint(i, j) in self.vertical else "dotted"
                lines.append(f"  p{i}_{j} -> p{i}_{j + 1} [style={style}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def cover_condition_report(
    shape: GridShape,
    horizontal: frozenset[GridPoint],
    vertical: frozenset[GridPoint],
) -> dict[str, list]:
    """Violations of the three cover conditions, empty lists when valid.

    Keys: ``out_of_range``, ``column_prefix``, ``row_prefix``,
    ``square``.  The square entries name the lower-left corner of each
    offending unit square.
    """
    m, n = shape.validate()
    report: dict[str, list] = {
        "out_of_range": [],
        "column_prefix": [],
        "row_prefix": [],
        "square": [],
    }
    for p in horizontal:
        if not (0 <= p.i < m and 0 <= p.j <= n):
            report["out_of_range"].append(("horizontal", p))
    for p in vertical:
        if not (0 <= p.i <= m and 0 <= p.j < n):
            report["out_of_range"].append(("vertical", p))
    if report["out_of_range"]:
        return report
    for i in range(m):
        for j in range(1, n + 1):
            if GridPoint(i, j) in horizontal and GridPoint(i, j - 1) not in horizontal:
                report["column_prefix"].append(GridPoint(i, j))
    for j in range(n):
        for i in range(1, m + 1):
            if GridPoint(i, j) in vertical and GridPoint(i - 1, j) not in vertical:
                report["row_prefix"].append(GridPoint(i, j))
    for i in range(m):
        for j in range(n):
            count = (
                (GridPoint(i, j) in horizontal)
                + (GridPoint(i, j + 1) in horizontal)
                + (GridPoint(i, j) in vertical)
                + (GridPoint(i + 1, j) in vertical)
            )
            if count == 3:
                report["square"].append(GridPoint(i, j))
    return report


def is_saturated_cover(
    shape: GridShape,
    horizontal: frozenset[GridPoint],
    vertical: frozenset[GridPoint],
) -> bool:
    report = cover_condition_report(shape, horizontal, vertical)
    return not any(report.values())


# --- codes ------------------------------------------------------------

def is_compatible(shape: GridShape, codes: CodePair) -> bool:
    """Code-pair condition equivalent to the no-three-edge-square rule.

    With heights a and depths b: whenever a_i names a real row
    (1 <= a_i <= n) the verticals of that row must stop at or before
    depth i, and symmetrically for b_j naming a real column.
    """
    m, n = shape
    a, b = codes.column_heights, codes.row_depths
    if len(a) != m or len(b) != n:
        return False
    if not all(0 <= ai <= n + 1 for ai in a):
        return False
    if not all(0 <= bj <= m + 1 for bj in b):
        return False
    for i in range(1, m + 1):
        ai = a[i - 1]
        if 1 <= ai <= n and b[ai - 1] > i:
            return False
    for j in range(1, n + 1):
        bj = b[j - 1]
        if 1 <= bj <= m and a[bj - 1] > j:
            return False
    return True


def cover_from_codes(shape: GridShape, codes: CodePair) -> SaturatedCover:
    if not is_compatible(shape, codes):
        raise CoverError(f"incompatible code pair {codes} on {shape}")
    m, n = shape
    a, b = codes.column_heights, codes.row_depths
    horizontal = frozenset(
        GridPoint(i - 1, j) for i in range(1, m + 1) for j in range(a[i - 1])
    )
    vertical = frozenset(
        GridPoint(i, j - 1) for j in range(1, n + 1) for i in range(b[j - 1])
    )
    return SaturatedCover(shape, horizontal, vertical)


def iter_code_pairs(shape: GridShape) -> Iterator[CodePair]:
    """Compatible code pairs in lexicographic order of (heights, depths)."""
    m, n = shape.validate()
    for a in itertools.product(range(n + 2), repeat=m):
        # depth options per row are independent once the heights are fixed
        options: list[list[int]] = []
        for j in range(1, n + 1):
            cap = m + 1
            for i in range(1, m + 1):
                if a[i - 1] == j:
                    cap = min(cap, i)
                    break  # later columns only raise the minimum index
            allowed = [
                bj
                for bj in range(cap + 1)
                if not (1 <= bj <= m and a[bj - 1] > j)
            ]
            options.append(allowed)
        for b in itertools.product(*options):
            yield CodePair(tuple(a), tuple(b))


def count_by_code_pairs(shape: GridShape) -> int:
    """Number of saturated covers, summed per height tuple.

    For fixed column heights the admissible depths of distinct rows do
    not interact, so each height tuple contributes a product of row
    option counts.  This multiplies out instead of enumerating.
    """
    m, n = shape.validate()
    total = 0
    for a in itertools.product(range(n + 2), repeat=m):
        prod = 1
        for j in range(1, n + 1):
            cap = m + 1
            for i in range(1, m + 1):
                if a[i - 1] == j:
                    cap = min(cap, i)
                    break
            prod *= sum(
                1
                for bj in range(cap + 1)
                if not (1 <= bj <= m and a[bj - 1] > j)
            )
            if prod == 0:
                break
        total += prod
    return total


def iter_saturated_covers(shape: GridShape) -> Iterator[SaturatedCover]:
    for codes in iter_code_pairs(shape):
        yield cover_from_codes(shape, codes)


# --- transfer systems -------------------------------------------------

def cover_to_system(cover: SaturatedCover) -> TransferSystem:
    """The saturated transfer system generated by the cover's edges."""
    pairs = [(e.source, e.target) for e in cover.edges]
    return generate(cover.shape, pairs)


def system_to_cover(system: TransferSystem) -> SaturatedCover:
    """Unit-edge skeleton of a saturated transfer system.

    Only saturated systems are determined by their unit edges, so
    anything else is refused.
    """
    if not is_saturated(system):
        raise CoverError("transfer system is not saturated")
    sp = system.space
    horizontal, vertical = set(), set()
    rest = system.mask & sp.cover_bits
    while rest:
        low = rest & -rest
        y, x = sp.pairs[low.bit_length() - 1]
        if x.j == y.j:
            horizontal.add(y)
        else:
            vertical.add(y)
        rest &= rest - 1
    return SaturatedCover(system.shape, frozenset(horizontal), frozenset(vertical))


# --- top-row classification and the collapse/expand descent -----------

def classify(cover: SaturatedCover) -> frozenset[int]:
    """Subset of {0..m} recording the top-row shape of the cover.

    With k the largest depth of a top-row vertical (-1 when the top
    row has none), the class is {0..k} together with every column
    index beyond k+1 whose top horizontal edge is missing.  Requires
    height n >= 1.
    """
    m, n = cover.shape
    if n < 1:
        raise ValueError("classification needs a grid of height at least 1")
    k = -1
    while k + 1 <= m and GridPoint(k + 1, n - 1) in cover.vertical:
        k += 1
    out = set(range(k + 1))
    for i in range(k + 2, m + 1):
        if GridPoint(i - 1, n) not in cover.horizontal:
            out.add(i)
    return frozenset(out)


def _prefix_run(signature: frozenset[int]) -> int:
    k = -1
    while k + 1 in signature:
        k += 1
    return k


def collapse(cover: SaturatedCover) -> tuple[SaturatedCover, frozenset[int]]:
    """Strip the top row, deleting the columns it forces full.

    Returns the cover one row shorter together with the class of the
    input.  Columns beyond the top vertical run whose top horizontal
    is present are full-height with equal vertical patterns on both
    boundaries, so deleting them loses nothing.  Inverse of ``expand``.
    """
    m, n = cover.shape
    signature = classify(cover)
    k = _prefix_run(signature)
    gaps = [i for i in range(k + 2, m + 1) if i not in signature]
    for g in gaps:
        for j in range(n + 1):
            if GridPoint(g - 1, j) not in cover.horizontal:
                raise CoverError(f"column {g} should be full at height {j}")
        for j in range(n):
            left = GridPoint(g - 1, j) in cover.vertical
            right = GridPoint(g, j) in cover.vertical
            if left != right:
                raise CoverError(f"column {g} boundaries differ in row {j + 1}")

    def newx(x: int) -> int:
        return x - sum(1 for g in gaps if g <= x)

    gap_sources = {g - 1 for g in gaps}
    horizontal = frozenset(
        GridPoint(newx(p.i + 1) - 1, p.j)
        for p in cover.horizontal
        if p.j < n and p.i not in gap_sources
    )
    vertical = frozenset(
        GridPoint(newx(p.i), p.j)
        for p in cover.vertical
        if p.j < n - 1
    )
    sub = SaturatedCover(GridShape(m - len(gaps), n - 1), horizontal, vertical)
    return sub, signature


def expand(
    sub: SaturatedCover, signature: frozenset[int], shape: GridShape
) -> SaturatedCover:
    """Rebuild the cover of the given shape from its collapse.

    Steps: reinsert the deleted columns at full height with repeated
    vertical boundaries, then lay the top row down: verticals along
    the prefix run of the class, and above each column inside the run
    a horizontal edge exactly when the row below has one.
    """
    m, n = shape.validate()
    if n < 1:
        raise ValueError("expansion needs a target height of at least 1")
    k = _prefix_run(signature)
    if not signature <= set(range(m + 1)):
        raise ValueError(f"class {sorted(signature)} leaves {{0..{m}}}")
    gaps = [i for i in range(k + 2, m + 1) if i not in signature]
    expected_m = m - len(gaps) if len(signature) <= m else m
    if sub.shape != GridShape(expected_m, n - 1):
        raise ValueError(
            f"collapsed cover has shape {sub.shape}, expected "
            f"({expected_m}, {n - 1})"
        )

    def oldx(x: int) -> int:
        out = x
        for g in sorted(gaps):
            if g <= out:
                out += 1
        return out

    horizontal = set()
    for p in sub.horizontal:
        horizontal.add(GridPoint(oldx(p.i + 1) - 1, p.j))
    for g in gaps:
        for j in range(n + 1):
            horizontal.add(GridPoint(g - 1, j))
    # vertical rows below the top stretch across reinserted columns
    vertical = set()
    for j in range(n - 1):
        depth = sum(1 for p in sub.vertical if p.j == j)
        span = depth
        for g in sorted(gaps):
            if g <= span:
                span += 1
        vertical.update(GridPoint(i, j) for i in range(span))
    vertical.update(GridPoint(i, n - 1) for i in range(k + 1))
    # top horizontals over the vertical run copy the row below
    for c in range(1, k + 1):
        if GridPoint(c - 1, n - 1) in horizontal:
            horizontal.add(GridPoint(c - 1, n))
    return SaturatedCover(shape, frozenset(horizontal), frozenset(vertical))


# --- JSON wire format -------------------------------------------------

class CoverParseError(ValueError):
    """Malformed saturated-cover JSON."""


def cover_from_json_dict(doc: dict) -> SaturatedCover:
    try:
        shape = GridShape(int(doc["m"]), int(doc["n"]))
        horizontal = frozenset(GridPoint(int(i), int(j)) for i, j in doc["horizontal"])
        vertical = frozenset(GridPoint(int(i), int(j)) for i, j in doc["vertical"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CoverParseError(f"bad cover document: {exc}") from exc
    try:
        return SaturatedCover(shape, horizontal, vertical)
    except CoverError as exc:
        raise CoverParseError(str(exc)) from exc


def cover_from_json(text: str) -> SaturatedCover:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CoverParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CoverParseError("document must be a JSON object")
    return cover_from_json_dict(doc)
