"""Transfer systems on exponent grids.

A transfer system is a partial order refining the grid order that is
closed under restriction: whenever y -> x is admitted and z <= x, the
pair (meet(y, z), z) is admitted too.  We store one as a bitmask over
the strict comparable pairs of the grid, reflexive pairs implicit.

A transfer system is saturated when it is closed under two-out-of-three:
if z <= y <= x and (z, x) is admitted then so is (y, x).

Enumeration walks the lectic order of Ganter's Next-Closure algorithm.
Transfer systems form a closure system (any intersection of transfer
systems is one), so the closure of a pair set is well defined and the
walk visits each system exactly once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .grid import (
    GridPoint,
    GridShape,
    comparable,
    in_shape,
    leq,
    meet,
    points,
)

DEFAULT_SEARCH_BUDGET = 2 ** 22


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration or search would exceed its work budget."""


@dataclass(frozen=True)
class Relation:
    """One admitted pair: the subgroup at ``low`` transfers up to ``high``."""

    low: GridPoint
    high: GridPoint

    def __post_init__(self) -> None:
        if not leq(self.low, self.high):
            raise ValueError(f"relation needs low <= high, got {self!r}")

    @property
    def strict(self) -> bool:
        return self.low != self.high


class PairSpace:
    """Precomputed pair indexing and closure tables for one grid shape.

    Pairs are the strict comparable pairs (x, y), x < y, ordered
    lexicographically.  For each pair bit we precompute the restriction
    consequences as a bitmask, and for the transitivity pass we keep,
    per grid point y, the bitmask of pairs (y, x) with y < x, so that a
    downward sweep over the lex-sorted points (a reverse topological
    order of <=) computes reachability in one pass.
    """

    def __init__(self, shape: GridShape) -> None:
        shape.validate()
        self.shape = shape
        self.pts = points(shape)
        self.point_index = {pt: a for a, pt in enumerate(self.pts)}
        pairs = [
            (x, y)
            for x in self.pts
            for y in self.pts
            if x != y and leq(x, y)
        ]
        pairs.sort()
        self.pairs: tuple[tuple[GridPoint, GridPoint], ...] = tuple(pairs)
        self.pair_index = {pq: a for a, pq in enumerate(self.pairs)}
        self.npairs = len(self.pairs)
        self.full_mask = (1 << self.npairs) - 1

        # restr[a]: pairs forced by pair a under restriction alone.
        self.restr: list[int] = []
        for (y, x) in self.pairs:
            forced = 0
            for z in self.pts:
                if leq(z, x):
                    w = meet(y, z)
                    if w != z:
                        forced |= 1 << self.pair_index[(w, z)]
            self.restr.append(forced)

        # bit_lower/bit_upper[b]: point indices of pair b's members.
        # pair_bit_from[a][t]: bit of pair (pts[a], pts[t]), or 0.
        npts = len(self.pts)
        self.bit_lower = [0] * self.npairs
        self.bit_upper = [0] * self.npairs
        self.pair_bit_from = [[0] * npts for _ in range(npts)]
        for b, (y, x) in enumerate(self.pairs):
            a, t = self.point_index[y], self.point_index[x]
            self.bit_lower[b] = a
            self.bit_upper[b] = t
            self.pair_bit_from[a][t] = 1 << b

        # satreq[a]: pairs whose presence saturation forces from pair a,
        # i.e. (y, x) for every y strictly between the members of a.
        self.satreq: list[int] = []
        for (z, x) in self.pairs:
            forced = 0
            for y in self.pts:
                if y != z and y != x and leq(z, y) and leq(y, x):
                    forced |= 1 << self.pair_index[(y, x)]
            self.satreq.append(forced)

        # cover bits: pairs that are unit steps, for cover extraction.
        self.cover_bits = 0
        for b, (y, x) in enumerate(self.pairs):
            if (x.i - y.i, x.j - y.j) in ((1, 0), (0, 1)):
                self.cover_bits |= 1 << b

    def close(self, mask: int) -> int:
        """Smallest transfer system containing the given pair set.

        One restriction sweep per pair bit is complete (a restriction
        of a restriction is again a direct restriction of the original
        pair), so the outer loop only re-runs for pairs created by the
        transitivity pass.
        """
        npts = len(self.pts)
        restr = self.restr
        bit_lower, bit_upper = self.bit_lower, self.bit_upper
        pair_bit_from = self.pair_bit_from
        expanded = 0
        while True:
            rest = mask & ~expanded
            while rest:
                low = rest & -rest
                mask |= restr[low.bit_length() - 1]
                rest &= rest - 1
            expanded = mask
            # transitivity via point reachability; lex point order is a
            # linear extension, so one descending sweep settles reach.
            succ = [0] * npts
            rest = mask
            while rest:
                low = rest & -rest
                b = low.bit_length() - 1
                succ[bit_lower[b]] |= 1 << bit_upper[b]
                rest &= rest - 1
            reach = [0] * npts
            for a in range(npts - 1, -1, -1):
                s = succ[a]
                acc = s
                while s:
                    lowp = s & -s
                    acc |= reach[lowp.bit_length() - 1]
                    s &= s - 1
                reach[a] = acc
            grown = mask
            for a in range(npts):
                r = reach[a]
                row = pair_bit_from[a]
                while r:
                    lowp = r & -r
                    grown |= row[lowp.bit_length() - 1]
                    r &= r - 1
            if grown == mask:
                return mask
            mask = grown

    def is_transfer_mask(self, mask: int) -> bool:
        return self.close(mask) == mask

    def is_saturated_mask(self, mask: int) -> bool:
        rest = mask
        while rest:
            low = rest & -rest
            b = low.bit_length() - 1
            if self.satreq[b] & ~mask:
                return False
            rest &= rest - 1
        return True

    def saturate(self, mask: int) -> int:
        """Smallest saturated transfer system containing the pair set."""
        while True:
            mask = self.close(mask)
            extra = 0
            rest = mask
            while rest:
                low = rest & -rest
                extra |= self.satreq[low.bit_length() - 1]
                rest &= rest - 1
            if extra & ~mask == 0:
                return mask
            mask |= extra


@lru_cache(maxsize=None)
def pair_space(shape: GridShape) -> PairSpace:
    return PairSpace(shape)


@dataclass(frozen=True)
class TransferSystem:
    """An admitted-pair set on a grid, stored as a bitmask over PairSpace."""

    shape: GridShape
    mask: int

    @property
    def space(self) -> PairSpace:
        return pair_space(self.shape)

    def __contains__(self, pair: tuple[GridPoint, GridPoint]) -> bool:
        low, high = pair
        if low == high:
            return in_shape(low, self.shape)
        idx = self.space.pair_index.get((low, high))
        return idx is not None and bool(self.mask >> idx & 1)

    def admits(self, low: GridPoint, high: GridPoint) -> bool:
        return (low, high) in self

    @property
    def strict_pairs(self) -> tuple[tuple[GridPoint, GridPoint], ...]:
        sp = self.space
        return tuple(
            sp.pairs[b] for b in range(sp.npairs) if self.mask >> b & 1
        )

    @property
    def relations(self) -> tuple[Relation, ...]:
        return tuple(Relation(y, x) for y, x in self.strict_pairs)

    def restrict(self, sub: GridShape) -> "TransferSystem":
        """Intersection with the pairs of a smaller grid."""
        if sub.m > self.shape.m or sub.n > self.shape.n:
            raise ValueError(f"{sub} does not sit inside {self.shape}")
        target = pair_space(sub)
        mask = 0
        for b, pq in enumerate(target.pairs):
            if pq in self:
                mask |= 1 << b
        return TransferSystem(sub, mask)

    def to_json_dict(self) -> dict:
        return {
            "m": self.shape.m,
            "n": self.shape.n,
            "relations": [
                [[y.i, y.j], [x.i, x.j]] for y, x in self.strict_pairs
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))


def from_pairs(
    shape: GridShape, pairs: Iterable[tuple[GridPoint, GridPoint]]
) -> TransferSystem:
    """TransferSystem with exactly the given strict pairs; no closure taken.

    Raises if the pair set fails an axiom; use ``generate`` to close up.
    """
    sp = pair_space(shape)
    mask = _mask_of(sp, pairs)
    if sp.close(mask) != mask:
        raise ValueError("pair set is not restriction and transitivity closed")
    return TransferSystem(shape, mask)


def generate(
    shape: GridShape, pairs: Iterable[tuple[GridPoint, GridPoint]]
) -> TransferSystem:
    """Smallest transfer system admitting all the given pairs."""
    sp = pair_space(shape)
    return TransferSystem(shape, sp.close(_mask_of(sp, pairs)))


def _mask_of(
    sp: PairSpace, pairs: Iterable[tuple[GridPoint, GridPoint]]
) -> int:
    mask = 0
    for low, high in pairs:
        low, high = GridPoint(*low), GridPoint(*high)
        if not in_shape(low, sp.shape) or not in_shape(high, sp.shape):
            raise ValueError(f"pair ({low}, {high}) leaves the grid {sp.shape}")
        if low == high:
            continue
        if not leq(low, high):
            raise ValueError(f"pair ({low}, {high}) is not ordered upward")
        mask |= 1 << sp.pair_index[(low, high)]
    return mask


def is_saturated(system: TransferSystem) -> bool:
    return system.space.is_saturated_mask(system.mask)


def saturation(system: TransferSystem) -> TransferSystem:
    return TransferSystem(system.shape, system.space.saturate(system.mask))


def axiom_report(
    shape: GridShape, pairs: Iterable[tuple[GridPoint, GridPoint]]
) -> dict[str, list]:
    """Axiom violations of a raw strict-pair set, for diagnostics.

    Keys: ``not_ordered``, ``restriction``, ``transitivity``; values list
    offending pairs (or pair chains).  Empty lists mean the set is a
    transfer system.
    """
    sp = pair_space(shape)
    report: dict[str, list] = {
        "not_ordered": [],
        "restriction": [],
        "transitivity": [],
    }
    ok: set[tuple[GridPoint, GridPoint]] = set()
    for low, high in pairs:
        low, high = GridPoint(*low), GridPoint(*high)
        if low == high:
            continue
        if not (in_shape(low, shape) and in_shape(high, shape) and leq(low, high)):
            report["not_ordered"].append((low, high))
        else:
            ok.add((low, high))
    for (y, x) in sorted(ok):
        for z in sp.pts:
            if leq(z, x):
                w = meet(y, z)
                if w != z and (w, z) not in ok:
                    report["restriction"].append(((y, x), (w, z)))
    for (z, y) in sorted(ok):
        for (y2, x) in sorted(ok):
            if y2 == y and (z, x) not in ok and z != x:
                report["transitivity"].append(((z, y), (y, x)))
    return report


# --- enumeration ------------------------------------------------------

def _next_closure(sp: PairSpace, mask: int) -> int | None:
    """Lectic successor of a closed set, None after the last one."""
    for e in range(sp.npairs - 1, -1, -1):
        bit = 1 << e
        if mask & bit:
            continue
        prefix = bit - 1
        cand = sp.close((mask & prefix) | bit)
        if (cand & prefix) == (mask & prefix):
            return cand
    return None


def iter_transfer_systems(
    shape: GridShape, budget: int | None = DEFAULT_SEARCH_BUDGET
) -> Iterator[TransferSystem]:
    """All transfer systems on the grid, in lectic order of their masks.

    ``budget`` caps the number of systems yielded; None removes the cap.
    """
    sp = pair_space(shape)
    mask: int | None = 0
    emitted = 0
    while mask is not None:
        if budget is not None and emitted >= budget:
            raise BudgetExceededError(
                f"more than {budget} transfer systems on {shape}"
            )
        yield TransferSystem(shape, mask)
        emitted += 1
        mask = _next_closure(sp, mask)


def iter_saturated_systems(
    shape: GridShape, budget: int | None = DEFAULT_SEARCH_BUDGET
) -> Iterator[TransferSystem]:
    for ts in iter_transfer_systems(shape, budget):
        if ts.space.is_saturated_mask(ts.mask):
            yield ts


def count_transfer_systems(
    shape: GridShape, budget: int | None = DEFAULT_SEARCH_BUDGET
) -> int:
    return sum(1 for _ in iter_transfer_systems(shape, budget))


def count_saturated_bruteforce(
    shape: GridShape, budget: int | None = DEFAULT_SEARCH_BUDGET
) -> int:
    """Saturated count by full enumeration; the slow reference method."""
    return sum(1 for _ in iter_saturated_systems(shape, budget))


def _subset_search(shape: GridShape, budget: int | None) -> tuple[int, int]:
    """Count (all, saturated) transfer systems by depth-first search
    over relation subsets.

    Pairs are decided in index order; taking a pair closes the mask at
    once, and a branch is cut when the closure reaches back below the
    decision point, so each closed set is reached along exactly one
    path.  Independent of the lectic-order walk, which makes the two
    enumerations mutual checks.  The budget caps visited search nodes.
    """
    sp = pair_space(shape)
    npairs = sp.npairs
    visited = 0
    total = saturated = 0

    def walk(mask: int, t: int) -> None:
        nonlocal visited, total, saturated
        visited += 1
        if budget is not None and visited > budget:
            raise BudgetExceededError(
                f"subset search on {shape} exceeded {budget} nodes"
            )
        while t < npairs and mask >> t & 1:
            t += 1
        if t == npairs:
            total += 1
            saturated += sp.is_saturated_mask(mask)
            return
        walk(mask, t + 1)
        new = sp.close(mask | 1 << t)
        if not (new & ~mask & ((1 << t) - 1)):
            walk(new, t + 1)

    walk(0, 0)
    return total, saturated


def count_transfer_subset_search(
    shape: GridShape, budget: int | None = DEFAULT_SEARCH_BUDGET
) -> int:
    return _subset_search(shape, budget)[0]


def count_saturated_subset_search(
    shape: GridShape, budget: int | None = DEFAULT_SEARCH_BUDGET
) -> int:
    return _subset_search(shape, budget)[1]


# --- JSON wire format -------------------------------------------------

class TransferParseError(ValueError):
    """Malformed transfer-system JSON."""


def from_json_dict(doc: dict) -> TransferSystem:
    try:
        shape = GridShape(int(doc["m"]), int(doc["n"]))
        raw = doc["relations"]
    except (KeyError, TypeError, ValueError) as exc:
        raise TransferParseError(f"bad transfer-system document: {exc}") from exc
    shape.validate()
    pairs = []
    for entry in raw:
        try:
            (a, b), (c, d) = entry
            low, high = GridPoint(int(a), int(b)), GridPoint(int(c), int(d))
        except (TypeError, ValueError) as exc:
            raise TransferParseError(f"bad relation entry {entry!r}") from exc
        if not (in_shape(low, shape) and in_shape(high, shape)):
            raise TransferParseError(f"relation {entry!r} leaves the grid")
        if not leq(low, high):
            raise TransferParseError(f"relation {entry!r} is not ordered upward")
        pairs.append((low, high))
    sp = pair_space(shape)
    mask = _mask_of(sp, pairs)
    if sp.close(mask) != mask:
        raise TransferParseError(
            "relation set is not closed under restriction and transitivity"
        )
    return TransferSystem(shape, mask)


def from_json(text: str) -> TransferSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TransferParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise TransferParseError("document must be a JSON object")
    return from_json_dict(doc)
