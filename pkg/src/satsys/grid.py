"""Exponent grids and divisor lattices.

The subgroup lattice of a cyclic group of order p^m q^n is the grid
{0..m} x {0..n}: the point (i, j) stands for the subgroup of order
p^i q^j, the order is componentwise, meets are componentwise minima,
and the cover relations are the unit steps.  For an arbitrary modulus
the same roles are played by divisibility, gcd and prime steps; the
grid is just the two-prime special case drawn as a picture.

Row j (1 <= j <= n) consists of the vertical edges (i, j-1) -> (i, j);
column i (1 <= i <= m) of the horizontal edges (i-1, j) -> (i, j).
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple


class GridShape(NamedTuple):
    m: int
    n: int

    def validate(self) -> "GridShape":
        if self.m < 0 or self.n < 0:
            raise ValueError(f"grid shape needs m >= 0 and n >= 0, got {self!r}")
        return self

    @property
    def point_count(self) -> int:
        return (self.m + 1) * (self.n + 1)


class GridPoint(NamedTuple):
    i: int
    j: int


class GridEdge(NamedTuple):
    source: GridPoint
    target: GridPoint

    @property
    def orientation(self) -> str:
        return "horizontal" if self.source.j == self.target.j else "vertical"

    def to_json(self) -> list[list[int]]:
        return [[self.source.i, self.source.j], [self.target.i, self.target.j]]


def horizontal_edge(i: int, j: int) -> GridEdge:
    """The column-(i+1) edge (i, j) -> (i+1, j)."""
    return GridEdge(GridPoint(i, j), GridPoint(i + 1, j))


def vertical_edge(i: int, j: int) -> GridEdge:
    """The row-(j+1) edge (i, j) -> (i, j+1)."""
    return GridEdge(GridPoint(i, j), GridPoint(i, j + 1))


def leq(x: GridPoint, y: GridPoint) -> bool:
    return x.i <= y.i and x.j <= y.j


def meet(x: GridPoint, y: GridPoint) -> GridPoint:
    return GridPoint(min(x.i, y.i), min(x.j, y.j))


def comparable(x: GridPoint, y: GridPoint) -> bool:
    return leq(x, y) or leq(y, x)


def in_shape(pt: GridPoint, shape: GridShape) -> bool:
    return 0 <= pt.i <= shape.m and 0 <= pt.j <= shape.n


def is_cover_pair(x: GridPoint, y: GridPoint) -> bool:
    """True when y covers x in the grid order (one unit step)."""
    di, dj = y.i - x.i, y.j - x.j
    return (di, dj) in ((1, 0), (0, 1))


@lru_cache(maxsize=None)
def points(shape: GridShape) -> tuple[GridPoint, ...]:
    """All grid points in lexicographic order (a linear extension of <=)."""
    shape.validate()
    return tuple(
        GridPoint(i, j) for i in range(shape.m + 1) for j in range(shape.n + 1)
    )


@lru_cache(maxsize=None)
def cover_edges(shape: GridShape) -> tuple[GridEdge, ...]:
    """The m(n+1) horizontal and n(m+1) vertical unit edges, sorted."""
    shape.validate()
    m, n = shape
    edges = [horizontal_edge(i, j) for i in range(m) for j in range(n + 1)]
    edges += [vertical_edge(i, j) for i in range(m + 1) for j in range(n)]
    return tuple(sorted(edges))


# --- divisor lattices -------------------------------------------------

def factorize(k: int) -> dict[int, int]:
    """Prime factorization of k >= 1 as {prime: multiplicity}."""
    if k < 1:
        raise ValueError(f"modulus must be >= 1, got {k}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= k:
        while k % d == 0:
            out[d] = out.get(d, 0) + 1
            k //= d
        d += 1 if d == 2 else 2
    if k > 1:
        out[k] = out.get(k, 0) + 1
    return out


def is_prime(k: int) -> bool:
    return k >= 2 and factorize(k) == {k: 1}


@lru_cache(maxsize=None)
def divisors(k: int) -> tuple[int, ...]:
    """Sorted divisors of k >= 1."""
    if k < 1:
        raise ValueError(f"modulus must be >= 1, got {k}")
    out = [d for d in range(1, k + 1) if k % d == 0]
    return tuple(out)


def divisor_pairs(k: int) -> tuple[tuple[int, int], ...]:
    """Strict divisibility pairs (d, e), d | e | k, d < e, sorted."""
    ds = divisors(k)
    return tuple((d, e) for d in ds for e in ds if d < e and e % d == 0)


def divisor_covers(k: int) -> tuple[tuple[int, int], ...]:
    """Cover pairs of the divisor lattice: e = d * prime."""
    ds = divisors(k)
    return tuple((d, e) for d, e in divisor_pairs(k) if is_prime(e // d))


def two_prime_shape(k: int, p: int | None, q: int | None) -> GridShape:
    """Shape (m, n) with k = p^m q^n; raises if k has other prime factors."""
    fac = factorize(k)
    m = fac.pop(p, 0) if p is not None else 0
    n = fac.pop(q, 0) if q is not None else 0
    if fac:
        raise ValueError(
            f"modulus {k} has prime factors {sorted(fac)} besides {p} and {q}"
        )
    return GridShape(m, n)


def point_order(pt: GridPoint, p: int | None, q: int | None) -> int:
    """Subgroup order p^i q^j named by a grid point."""
    out = 1
    if pt.i:
        if p is None:
            raise ValueError("point has a nonzero first exponent but no prime p")
        out *= p ** pt.i
    if pt.j:
        if q is None:
            raise ValueError("point has a nonzero second exponent but no prime q")
        out *= q ** pt.j
    return out
