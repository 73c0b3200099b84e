"""Index sets on Z/kZ and the transfer systems they induce.

An index set is a subset of Z/kZ that contains 0 and is closed under
negation.  It induces a relation on the divisor lattice of k: the pair
C_d -> C_e is admitted exactly when the reduction of the set mod e is
invariant under translation by d.  Such relations are always saturated
transfer systems, and on C_{p q^n} with p, q > 3 every saturated
transfer system arises this way; ``realize`` builds an explicit index
set for each one, together with a verified certificate.

Moduli with two prime factors map onto the usual grid picture; for
other moduli the relation is exposed directly over divisor pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum, auto
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator

from .covers import SaturatedCover, system_to_cover
from .grid import (
    GridPoint,
    GridShape,
    divisor_pairs,
    divisors,
    factorize,
    is_prime,
    two_prime_shape,
)
from .transfer import (
    DEFAULT_SEARCH_BUDGET,
    BudgetExceededError,
    TransferSystem,
    from_pairs,
    is_saturated,
)

MODULUS_LIMIT = 10 ** 7


@dataclass(frozen=True)
class IndexSet:
    """Residue set with 0, closed under negation, on a fixed modulus."""

    modulus: int
    residues: frozenset[int]

    def __post_init__(self) -> None:
        k = self.modulus
        if not 1 <= k <= MODULUS_LIMIT:
            raise ValueError(f"modulus must be in 1..{MODULUS_LIMIT}, got {k}")
        if not isinstance(self.residues, frozenset):
            object.__setattr__(self, "residues", frozenset(self.residues))
        for x in self.residues:
            if not 0 <= x < k:
                raise ValueError(f"residue {x} outside Z/{k}Z")
            if (k - x) % k not in self.residues:
                raise ValueError(f"residue {x} present without its negative")
        if 0 not in self.residues:
            raise ValueError("an index set must contain 0")

    @classmethod
    def of(cls, modulus: int, residues: Iterable[int]) -> "IndexSet":
        return cls(modulus, frozenset(residues))

    @property
    def sorted_residues(self) -> tuple[int, ...]:
        return tuple(sorted(self.residues))

    @property
    def mask(self) -> int:
        out = 0
        for x in self.residues:
            out |= 1 << x
        return out

    def __contains__(self, x: int) -> bool:
        return x % self.modulus in self.residues

    def __str__(self) -> str:
        body = ",".join(map(str, self.sorted_residues))
        return f"{{{body}}} mod {self.modulus}"


def restrict_index(J: IndexSet, ell: int) -> IndexSet:
    """Reduction mod a divisor; realizes the restricted transfer system."""
    if ell < 1 or J.modulus % ell:
        raise ValueError(f"{ell} does not divide the modulus {J.modulus}")
    return IndexSet.of(ell, {x % ell for x in J.residues})


# --- the induced relation on the divisor lattice ----------------------

def _reduced_mask(residues: Iterable[int], e: int) -> int:
    out = 0
    for x in residues:
        out |= 1 << (x % e)
    return out


def _rotation_invariant(mask: int, e: int, d: int) -> bool:
    full = (1 << e) - 1
    return ((mask << d | mask >> (e - d)) & full) == mask


def modular_relation(I: IndexSet) -> frozenset[tuple[int, int]]:
    """Admitted strict divisor pairs (d, e) of the induced relation."""
    k = I.modulus
    reduced: dict[int, int] = {}
    out = []
    for d, e in divisor_pairs(k):
        if e not in reduced:
            reduced[e] = _reduced_mask(I.residues, e)
        if _rotation_invariant(reduced[e], e, d):
            out.append((d, e))
    return frozenset(out)


def divisor_relation_report(
    k: int, pairs: frozenset[tuple[int, int]]
) -> dict[str, list]:
    """Axiom and saturation violations of a divisor-pair relation.

    Keys ``restriction``, ``transitivity``, ``saturation``; empty lists
    mean the relation is a saturated transfer system on the divisor
    lattice of k.
    """
    report: dict[str, list] = {
        "restriction": [],
        "transitivity": [],
        "saturation": [],
    }
    for d, e in sorted(pairs):
        for ell in divisors(e):
            g = gcd(d, ell)
            if g != ell and (g, ell) not in pairs:
                report["restriction"].append(((d, e), (g, ell)))
    for d, e in sorted(pairs):
        for e2, f in sorted(pairs):
            if e2 == e and d != f and (d, f) not in pairs:
                report["transitivity"].append(((d, e), (e, f)))
    for d, f in sorted(pairs):
        for e in divisors(f):
            if d < e < f and e % d == 0 and (e, f) not in pairs:
                report["saturation"].append(((d, f), e))
    return report


def modular_relation_report(I: IndexSet) -> dict[str, list]:
    return divisor_relation_report(I.modulus, modular_relation(I))


def _grid_point_of(d: int, p: int | None, q: int | None) -> GridPoint:
    fac = factorize(d)
    i = fac.pop(p, 0) if p is not None else 0
    j = fac.pop(q, 0) if q is not None else 0
    if fac:
        raise ValueError(f"divisor {d} does not factor over ({p}, {q})")
    return GridPoint(i, j)


def _infer_primes(k: int) -> tuple[int | None, int | None]:
    primes = sorted(factorize(k))
    if len(primes) > 2:
        raise ValueError(
            f"modulus {k} has more than two prime factors; "
            "use modular_relation for the divisor-lattice form"
        )
    if len(primes) == 2:
        return primes[0], primes[1]
    if len(primes) == 1:
        return None, primes[0]
    return None, None


def modular_transfer_system(
    I: IndexSet, p: int | None = None, q: int | None = None
) -> TransferSystem:
    """Grid transfer system induced by an index set on a two-prime modulus.

    With both primes left implicit the smaller prime takes the first
    axis, and a prime-power modulus is read as a chain on the second
    axis.  Moduli with three or more primes are refused.
    """
    k = I.modulus
    if p is None and q is None:
        p, q = _infer_primes(k)
    shape = two_prime_shape(k, p, q)
    pairs = [
        (_grid_point_of(d, p, q), _grid_point_of(e, p, q))
        for d, e in modular_relation(I)
    ]
    return from_pairs(shape, pairs)


# --- negation orbits, for exhaustive and randomized sweeps ------------

def negation_orbit_count(k: int) -> int:
    """Orbits of x -> -x on Z/kZ minus {0}; the search-space bit count."""
    return k // 2


def index_set_from_orbit_mask(k: int, mask: int) -> IndexSet:
    """Bit b set means the orbit {b+1, k-b-1} is included."""
    residues = {0}
    for b in range(k // 2):
        if mask >> b & 1:
            residues.add(b + 1)
            residues.add(k - b - 1)
    return IndexSet.of(k, residues)


def orbit_mask_of(I: IndexSet) -> int:
    mask = 0
    for x in I.residues:
        if x:
            mask |= 1 << (min(x, I.modulus - x) - 1)
    return mask


@lru_cache(maxsize=None)
def _orbit_reduction_table(k: int, e: int) -> tuple[int, ...]:
    """Residue mask mod e contributed by each negation orbit of Z/kZ."""
    return tuple(
        1 << (r % e) | 1 << ((k - r) % e) for r in range(1, k // 2 + 1)
    )


def relation_from_orbit_mask(
    k: int, orbit_mask: int
) -> frozenset[tuple[int, int]]:
    """Admitted divisor pairs of the index set named by an orbit mask."""
    reduced: dict[int, int] = {}
    out = []
    for d, e in divisor_pairs(k):
        if e not in reduced:
            table = _orbit_reduction_table(k, e)
            acc, rest = 1, orbit_mask
            while rest:
                low = rest & -rest
                acc |= table[low.bit_length() - 1]
                rest &= rest - 1
            reduced[e] = acc
        if _rotation_invariant(reduced[e], e, d):
            out.append((d, e))
    return frozenset(out)


# --- constructions behind the realization recursion -------------------

def low_residue_shift(i: int, p: int, q: int, level: int) -> int:
    """Smallest-band lift multiplier: the alpha < q making
    (alpha p q^level + i) mod q^(level+1) land in [0, q^level).

    Built from the inverse of p mod q; the output is re-checked, and
    existence holds for every 0 < i < p q^level.
    """
    step = q ** level
    if not 0 < i < p * step:
        raise ValueError(f"need 0 < i < {p * step}, got {i}")
    head = i // step
    alpha = (-pow(p, -1, q) * head) % q
    if (alpha * p * step + i) % (step * q) >= step:
        raise ArithmeticError(f"lift multiplier failed for i={i}, p={p}, q={q}")
    return alpha


def crt_q_multiple(a: int, p: int, q: int) -> int:
    """The 0 < c < pq with q | c and c congruent to a mod p."""
    if not 0 < a < p:
        raise ValueError(f"need 0 < a < {p}, got {a}")
    c = q * ((a * pow(q, -1, p)) % p)
    assert c % q == 0 and c % p == a % p and 0 < c < p * q
    return c


class TopRowType(Enum):
    """Shape of the top unit square of a width-one saturated cover."""

    FULL_HORIZONTAL = auto()
    BOTH_VERTICALS = auto()
    LEFT_VERTICAL_ONLY = auto()
    EMPTY = auto()


def classify_top_row(cover: SaturatedCover) -> TopRowType:
    m, n = cover.shape
    if m != 1 or n < 1:
        raise ValueError(f"top-row classification needs shape (1, n>=1), got {cover.shape}")
    left = GridPoint(0, n - 1) in cover.vertical
    right = GridPoint(1, n - 1) in cover.vertical
    if left and right:
        return TopRowType.BOTH_VERTICALS
    if left:
        return TopRowType.LEFT_VERTICAL_ONLY
    # a lone right vertical is excluded by restriction closure
    assert not right
    if GridPoint(0, n) in cover.horizontal:
        return TopRowType.FULL_HORIZONTAL
    return TopRowType.EMPTY


class RealizationError(RuntimeError):
    """A constructed index set failed verification against its target."""

    def __init__(
        self,
        message: str,
        target: TransferSystem | None = None,
        produced: TransferSystem | None = None,
    ) -> None:
        if target is not None and produced is not None:
            message = f"{message}\n{_system_diff(target, produced)}"
        super().__init__(message)
        self.target = target
        self.produced = produced


def _system_diff(target: TransferSystem, produced: TransferSystem) -> str:
    want = set(target.strict_pairs)
    got = set(produced.strict_pairs)
    fmt = lambda pr: f"({pr[0].i},{pr[0].j}) -> ({pr[1].i},{pr[1].j})"
    lines = ["target vs produced:"]
    lines += [f"  missing  {fmt(pr)}" for pr in sorted(want - got)]
    lines += [f"  spurious {fmt(pr)}" for pr in sorted(got - want)]
    if len(lines) == 1:
        lines.append("  (relations agree; shapes or moduli differ)")
    return "\n".join(lines)


@dataclass(frozen=True)
class RealizationCertificate:
    """An index set realizing a saturated target, with its witness.

    The witness is a nonzero multiple of q^n contained in the index
    set; it is what lets the construction recurse one level up.
    """

    p: int
    q: int
    n: int
    target: TransferSystem
    index_set: IndexSet
    witness_multiple: int

    def verify(self) -> None:
        step = self.q ** self.n
        w = self.witness_multiple
        if w == 0 or w % step or w not in self.index_set:
            raise RealizationError(f"witness {w} is not a nonzero multiple of {step} in the set")
        if not 0 < w // step < self.p:
            raise RealizationError(f"witness {w} is not a * {step} with 0 < a < {self.p}")
        produced = modular_transfer_system(self.index_set, self.p, self.q)
        if produced != self.target:
            raise RealizationError(
                f"index set {self.index_set} does not realize the target",
                self.target,
                produced,
            )

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "n": self.n,
            "target": self.target.to_json_dict(),
            "index_set": list(self.index_set.sorted_residues),
            "witness": self.witness_multiple,
            "verified": True,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))


def realize_chain(
    t: TransferSystem, q: int, budget: int = DEFAULT_SEARCH_BUDGET
) -> IndexSet:
    """Index set for a saturated system on a q-chain, modulus q^n.

    Recursion on the height: a present top edge lifts the lower set to
    its full preimage, an absent one embeds it symmetrically around 0,
    leaving the top translation broken.  The output is verified, with
    an exhaustive orbit search as fallback.
    """
    if t.shape.m != 0:
        raise ValueError(f"expected a chain shape (0, n), got {t.shape}")
    if not (is_prime(q) and q > 3):
        raise ValueError(f"q must be a prime above 3, got {q}")
    if not is_saturated(t):
        raise ValueError("chain system is not saturated")

    def build(level: int) -> set[int]:
        if level == 0:
            return {0}
        prev = build(level - 1)
        step = q ** (level - 1)
        if t.admits(GridPoint(0, level - 1), GridPoint(0, level)):
            return {alpha * step + i for alpha in range(q) for i in prev}
        return {0} | {x for i in prev if i for x in (i, q ** level - i)}

    n = t.shape.n
    I = IndexSet.of(q ** n, build(n))
    if modular_transfer_system(I, None, q) == t:
        return I
    found = find_index_set_bruteforce(t, q ** n, None, q, budget)
    if found is None:
        raise RealizationError("no index set exists for the chain system", t)
    return found


def _translate(members: set[int], shift: int, k: int) -> set[int]:
    return {(x + shift) % k for x in members}


def _crt_pair(a1: int, m1: int, a2: int, m2: int) -> int:
    x = a1 * m2 * pow(m2, -1, m1) + a2 * m1 * pow(m1, -1, m2)
    return x % (m1 * m2)


def _spread_lattice_lift(p: int, q: int, step: int) -> set[int]:
    """Lift of the step-multiples lattice that reduces onto all of it
    while breaking the top translation and both top verticals.

    Lifting the lattice plainly lands on the full multiples-of-(q*step)
    coset, which stays invariant under everything; trading the +-2q
    multiples for a pair of off-lattice residues with the same
    reductions breaks that.
    """
    base = {t * q for t in range(p)}
    drop = {2 * q, (p - 2) * q}
    y = _crt_pair((2 * q) % p, p, 1, q)
    spread = (base - drop) | {y, p * q - y}
    return {u * step for u in spread}


def _step_invariant_lift(low: frozenset[int], p: int, q: int, step: int) -> set[int]:
    """Lift of a lower set that is invariant under step, the case the
    pointwise construction cannot handle.

    Such a set is the full preimage of its reduction mod step, so the
    banded lifts would tile complete translation orbits and leave the
    top horizontal present.  Instead the multiples of step are spread
    off-lattice and every other residue class mod step is lifted as a
    full fiber, which restricts correctly and keeps all three top
    edges broken.
    """
    qn = q * step
    k = p * qn
    members = _spread_lattice_lift(p, q, step)
    for w in sorted({x % step for x in low} - {0}):
        members |= {(v + t * qn) % k for v in (w, qn - w) for t in range(p)}
    return members


def _smallest_witness(members: set[int], p: int, step: int) -> int | None:
    for a in range(1, p):
        if a * step in members:
            return a * step
    return None


def _single_vertical_removal(a: int, p: int, q: int, level: int) -> tuple[int, int]:
    """Elements cut from the lifted set when only the left top vertical
    survives; the shifted variant keeps the next witness alive whenever
    the plain cut would land on a multiple of q^(level+1)."""
    step = q ** level
    k = p * q ** (level + 1)
    cut = a * step if a % q else a * step + p * step
    return cut, k - cut


def realize(
    t: TransferSystem, p: int, q: int, budget: int = DEFAULT_SEARCH_BUDGET
) -> RealizationCertificate:
    """Certificate realizing a saturated system on shape (1, n) by an
    index set on Z/(p q^n)Z containing a nonzero multiple of q^n.

    Recursion on the top-row shape: a full horizontal column reduces to
    the q-chain; otherwise the level below is realized first and lifted
    according to which top edges survive.  Every level is verified, and
    a failure raises with a relation diff rather than returning a bad
    certificate.
    """
    for prime in (p, q):
        if not (is_prime(prime) and prime > 3):
            raise ValueError(f"{prime} is not a prime above 3")
    if p == q:
        raise ValueError("the two primes must differ")
    if t.shape.m != 1:
        raise ValueError(f"expected shape (1, n), got {t.shape}")
    if not is_saturated(t):
        raise ValueError("target transfer system is not saturated")
    index_set, witness = _certified(t, p, q, budget)
    cert = RealizationCertificate(p, q, t.shape.n, t, index_set, witness)
    cert.verify()
    return cert


def _certified(
    t: TransferSystem, p: int, q: int, budget: int
) -> tuple[IndexSet, int]:
    n = t.shape.n
    k = p * q ** n
    if n == 0:
        full = t.admits(GridPoint(0, 0), GridPoint(1, 0))
        members = set(range(p)) if full else {0, 1, p - 1}
        witness = 1
    else:
        kind = classify_top_row(system_to_cover(t))
        step = q ** (n - 1)
        if kind is TopRowType.FULL_HORIZONTAL:
            chain = realize_chain(t.restrict(GridShape(0, n)), q, budget)
            members = {
                alpha * q ** n + i for alpha in range(p) for i in chain.residues
            }
            witness = q ** n
        else:
            low, low_witness = _certified(
                t.restrict(GridShape(1, n - 1)), p, q, budget
            )
            a = low_witness // step
            members = {
                alpha * p * step + i
                for alpha in range(q)
                for i in low.residues
            }
            if kind is TopRowType.LEFT_VERTICAL_ONLY:
                members -= set(_single_vertical_removal(a, p, q, n - 1))
                if _translate(members, p * step, k) == members:
                    raise RealizationError(
                        "single-vertical cut left the right translation intact", t
                    )
                top_chain = {x % q ** n for x in members}
                if _translate(top_chain, step, q ** n) != top_chain:
                    raise RealizationError(
                        "single-vertical cut broke the left translation", t
                    )
            elif kind is TopRowType.EMPTY:
                low_set = set(low.residues)
                if _translate(low_set, step, p * step) == low_set:
                    members = _step_invariant_lift(low.residues, p, q, step)
                else:
                    c = crt_q_multiple(a, p, q)
                    members = {0, c * step, k - c * step}
                    kept = low.residues - {0, a * step, p * step - a * step}
                    for i in sorted(kept):
                        x = low_residue_shift(i, p, q, n - 1) * p * step + i
                        members |= {x, k - x}
                top_chain = {x % q ** n for x in members}
                if _translate(top_chain, step, q ** n) == top_chain:
                    raise RealizationError(
                        "empty-top lift left the left translation intact", t
                    )
                if _translate(members, q ** n, k) == members:
                    raise RealizationError(
                        "empty-top lift left the top translation intact", t
                    )
            witness_found = _smallest_witness(members, p, q ** n)
            if witness_found is None:
                raise RealizationError(
                    f"lift contains no nonzero multiple of {q ** n}", t
                )
            witness = witness_found
    index_set = IndexSet.of(k, members)
    produced = modular_transfer_system(index_set, p, q)
    if produced != t:
        raise RealizationError(
            f"constructed set {index_set} realizes the wrong system",
            t,
            produced,
        )
    return index_set, witness


# --- exhaustive search ------------------------------------------------

def _target_pair_checks(
    target: TransferSystem | frozenset | set,
    k: int,
    p: int | None,
    q: int | None,
) -> tuple[tuple[int, int, bool], ...]:
    all_pairs = divisor_pairs(k)
    if isinstance(target, TransferSystem):
        if p is None and q is None:
            p, q = _match_primes_to_shape(k, target.shape)
        if two_prime_shape(k, p, q) != target.shape:
            raise ValueError(
                f"modulus {k} with primes ({p}, {q}) does not give shape {target.shape}"
            )
        admitted = {
            (d, e)
            for d, e in all_pairs
            if target.admits(_grid_point_of(d, p, q), _grid_point_of(e, p, q))
        }
    else:
        admitted = set(target)
        if not admitted <= set(all_pairs):
            raise ValueError("target pairs are not strict divisor pairs of the modulus")
    # checking small reductions first makes mismatches cheap
    ordered = sorted(all_pairs, key=lambda de: (de[1], de[0]))
    return tuple((d, e, (d, e) in admitted) for d, e in ordered)


def _match_primes_to_shape(k: int, shape: GridShape) -> tuple[int | None, int | None]:
    fac = factorize(k)
    primes = sorted(fac)
    for pp in [None, *primes]:
        for qq in [None, *primes]:
            if pp == qq and pp is not None:
                continue
            trial = dict(fac)
            if (trial.pop(pp, 0) if pp else 0) == shape.m and (
                trial.pop(qq, 0) if qq else 0
            ) == shape.n and not trial:
                return pp, qq
    raise ValueError(f"modulus {k} cannot carry a system of shape {shape}")


def find_index_set_bruteforce(
    target: TransferSystem | frozenset | set,
    k: int,
    p: int | None = None,
    q: int | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> IndexSet | None:
    """First index set on Z/kZ inducing the target, or None if no index
    set at all does (making the absence a certificate).

    Candidates are scanned in increasing orbit-mask order, one bit per
    negation orbit; the budget caps how many are examined, and running
    into it raises rather than guessing.  The target may be a grid
    transfer system or, for moduli with many primes, a raw set of
    admitted divisor pairs.
    """
    checks = _target_pair_checks(target, k, p, q)
    orbits = negation_orbit_count(k)
    tables = {e: _orbit_reduction_table(k, e) for _, e in divisor_pairs(k)}
    scanned = 0
    for mask in range(1 << orbits):
        scanned += 1
        if scanned > budget:
            raise BudgetExceededError(
                f"scanned {budget} candidate index sets without exhausting Z/{k}Z"
            )
        reduced: dict[int, int] = {}
        hit = True
        for d, e, want in checks:
            acc = reduced.get(e)
            if acc is None:
                table = tables[e]
                acc, rest = 1, mask
                while rest:
                    low = rest & -rest
                    acc |= table[low.bit_length() - 1]
                    rest &= rest - 1
                reduced[e] = acc
            if _rotation_invariant(acc, e, d) != want:
                hit = False
                break
        if hit:
            return index_set_from_orbit_mask(k, mask)
    return None


def iter_index_sets(k: int) -> Iterator[IndexSet]:
    """All index sets on Z/kZ in increasing orbit-mask order."""
    for mask in range(1 << negation_orbit_count(k)):
        yield index_set_from_orbit_mask(k, mask)
