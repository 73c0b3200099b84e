"""Exact counts of saturated covers by recurrence, closed form, and EGF.

The top-row descent fibers the covers of height n over the subsets of
{0..m}, giving the recurrence

    s(m, 0) = 2^m
    s(m, n+1) = s(m, n) + sum_k C(m+1, k) s(k, n)   (k = 0..m)

which unrolls to the closed alternating form

    s(m, n) = sum_j (-1)^(m-j) S(m+1, j-1) (j!/2) j^n   (j = 2..m+2)

with S the Stirling subset numbers, and packages into the exponential
generating function

    f(x, y) = e^(2x+2y) / (e^x + e^y - e^(x+y))^3,

where s(m, n) = m! n! [x^m y^n] f.  All three are implemented here in
exact arithmetic; agreement with each other and with direct
enumeration is what the test suite pins down.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence, TextIO


@lru_cache(maxsize=None)
def stirling2(ell: int, r: int) -> int:
    """Stirling subset number: partitions of an ell-set into r blocks."""
    if ell < 0 or r < 0:
        raise ValueError("stirling2 needs nonnegative arguments")
    if ell == 0:
        return 1 if r == 0 else 0
    if r == 0:
        return 0
    return r * stirling2(ell - 1, r) + stirling2(ell - 1, r - 1)


def stirling_alternating_identity(ell: int, r: int) -> tuple[int, int]:
    """Both sides of (ell-r) S(ell,r) = sum over t of the signed tail.

    The right side is sum_{t=1}^{ell-r} (-1)^(t+1) C(ell, t+1) S(ell-t, r).
    Returns (left, right); they agree for all 0 <= r <= ell.
    """
    left = (ell - r) * stirling2(ell, r)
    right = sum(
        (-1) ** (t + 1) * comb(ell, t + 1) * stirling2(ell - t, r)
        for t in range(1, ell - r + 1)
    )
    return left, right


@lru_cache(maxsize=None)
def count_recurrence(m: int, n: int) -> int:
    """Saturated-cover count via the top-row fiber recurrence."""
    if m < 0 or n < 0:
        raise ValueError("grid exponents must be nonnegative")
    if n == 0:
        return 2 ** m
    prev = count_recurrence(m, n - 1)
    return prev + sum(
        comb(m + 1, k) * count_recurrence(k, n - 1) for k in range(m + 1)
    )


def count_closed_form(m: int, n: int) -> int:
    """Saturated-cover count via the alternating Stirling sum."""
    if m < 0 or n < 0:
        raise ValueError("grid exponents must be nonnegative")
    total = 0
    for j in range(2, m + 3):
        term = stirling2(m + 1, j - 1) * (factorial(j) // 2) * j ** n
        total += term if (m - j) % 2 == 0 else -term
    return total


# --- bivariate series over the rationals -------------------------------

class BivariateSeries:
    """Truncated power series in two variables with Fraction coefficients.

    Coefficients live on the rectangle a <= order_x, b <= order_y; all
    arithmetic truncates there.
    """

    __slots__ = ("order_x", "order_y", "coeffs")

    def __init__(
        self, order_x: int, order_y: int, coeffs: Sequence[Sequence[Fraction]]
    ) -> None:
        self.order_x = order_x
        self.order_y = order_y
        self.coeffs = tuple(tuple(row) for row in coeffs)
        if len(self.coeffs) != order_x + 1 or any(
            len(row) != order_y + 1 for row in self.coeffs
        ):
            raise ValueError("coefficient grid does not match the stated order")

    @classmethod
    def exponential(cls, cx: int, cy: int, order_x: int, order_y: int):
        """Series of e^(cx*x + cy*y)."""
        rows = []
        for a in range(order_x + 1):
            fa = Fraction(cx ** a, factorial(a))
            rows.append(
                [fa * Fraction(cy ** b, factorial(b)) for b in range(order_y + 1)]
            )
        return cls(order_x, order_y, rows)

    @classmethod
    def constant(cls, value: int, order_x: int, order_y: int):
        rows = [
            [Fraction(value if a == b == 0 else 0) for b in range(order_y + 1)]
            for a in range(order_x + 1)
        ]
        return cls(order_x, order_y, rows)

    def coeff(self, a: int, b: int) -> Fraction:
        return self.coeffs[a][b]

    def _check_match(self, other: "BivariateSeries") -> None:
        if (self.order_x, self.order_y) != (other.order_x, other.order_y):
            raise ValueError("series orders differ")

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check_match(other)
        return BivariateSeries(
            self.order_x,
            self.order_y,
            [
                [x + y for x, y in zip(r1, r2)]
                for r1, r2 in zip(self.coeffs, other.coeffs)
            ],
        )

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check_match(other)
        return BivariateSeries(
            self.order_x,
            self.order_y,
            [
                [x - y for x, y in zip(r1, r2)]
                for r1, r2 in zip(self.coeffs, other.coeffs)
            ],
        )

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check_match(other)
        M, N = self.order_x, self.order_y
        out = [[Fraction(0)] * (N + 1) for _ in range(M + 1)]
        for a in range(M + 1):
            row = self.coeffs[a]
            for b in range(N + 1):
                c = row[b]
                if not c:
                    continue
                for a2 in range(M + 1 - a):
                    orow = other.coeffs[a2]
                    trow = out[a + a2]
                    for b2 in range(N + 1 - b):
                        if orow[b2]:
                            trow[b + b2] += c * orow[b2]
        return BivariateSeries(M, N, out)

    def reciprocal(self) -> "BivariateSeries":
        """Multiplicative inverse; needs a unit constant term."""
        if self.coeffs[0][0] == 0:
            raise ValueError("series has no reciprocal: zero constant term")
        M, N = self.order_x, self.order_y
        c00 = self.coeffs[0][0]
        out = [[Fraction(0)] * (N + 1) for _ in range(M + 1)]
        for a in range(M + 1):
            for b in range(N + 1):
                if a == b == 0:
                    out[0][0] = 1 / c00
                    continue
                acc = Fraction(0)
                for c in range(a + 1):
                    for d in range(b + 1):
                        if c == a and d == b:
                            continue
                        if out[c][d]:
                            acc += out[c][d] * self.coeffs[a - c][b - d]
                out[a][b] = -acc / c00
        return BivariateSeries(M, N, out)

    def diff_x(self) -> "BivariateSeries":
        """Partial derivative in x; the x-order drops by one."""
        rows = [
            [Fraction(a + 1) * self.coeffs[a + 1][b] for b in range(self.order_y + 1)]
            for a in range(self.order_x)
        ]
        return BivariateSeries(self.order_x - 1, self.order_y, rows)

    def diff_y(self) -> "BivariateSeries":
        rows = [
            [Fraction(b + 1) * self.coeffs[a][b + 1] for b in range(self.order_y)]
            for a in range(self.order_x + 1)
        ]
        return BivariateSeries(self.order_x, self.order_y - 1, rows)

    def truncate(self, order_x: int, order_y: int) -> "BivariateSeries":
        if order_x > self.order_x or order_y > self.order_y:
            raise ValueError("cannot truncate upward")
        return BivariateSeries(
            order_x,
            order_y,
            [row[: order_y + 1] for row in self.coeffs[: order_x + 1]],
        )


@lru_cache(maxsize=None)
def egf_series(order_x: int, order_y: int) -> BivariateSeries:
    """e^(2x+2y) / (e^x + e^y - e^(x+y))^3 truncated to the given orders."""
    ex = BivariateSeries.exponential(1, 0, order_x, order_y)
    ey = BivariateSeries.exponential(0, 1, order_x, order_y)
    exy = BivariateSeries.exponential(1, 1, order_x, order_y)
    num = BivariateSeries.exponential(2, 2, order_x, order_y)
    inv = (ex + ey - exy).reciprocal()
    return num * inv * inv * inv


def count_egf(m: int, n: int) -> int:
    """Saturated-cover count read off the generating function."""
    if m < 0 or n < 0:
        raise ValueError("grid exponents must be nonnegative")
    series = egf_series(max(m, 4), max(n, 4))
    value = series.coeff(m, n) * factorial(m) * factorial(n)
    if value.denominator != 1:
        raise ArithmeticError(f"EGF coefficient at ({m}, {n}) is not integral")
    return value.numerator


def egf_pde_residual(order_x: int, order_y: int) -> BivariateSeries:
    """df/dy - (e^x + 1) f - (e^x - 1) df/dx, truncated; identically zero.

    The top-row recurrence is equivalent to this first-order relation,
    so a zero residual re-derives the recurrence from the closed
    generating function.
    """
    f = egf_series(order_x, order_y)
    m, n = order_x - 1, order_y - 1
    ex = BivariateSeries.exponential(1, 0, m, n)
    one = BivariateSeries.constant(1, m, n)
    ft = f.truncate(m, n)
    fx = f.diff_x().truncate(m, n)
    fy = f.diff_y().truncate(m, n)
    return fy - ((ex + one) * ft + (ex - one) * fx)


def count_table(max_m: int, max_n: int, method=count_recurrence) -> list[list[int]]:
    """Rectangular table t[m][n] for m <= max_m, n <= max_n."""
    return [[method(m, n) for n in range(max_n + 1)] for m in range(max_m + 1)]


def write_table_csv(fp: TextIO, table: Sequence[Sequence[int]]) -> None:
    """Header row names the n values; each data row starts with its m."""
    writer = csv.writer(fp, lineterminator="\n")
    width = len(table[0])
    writer.writerow(["m\\n"] + [str(n) for n in range(width)])
    for m, row in enumerate(table):
        writer.writerow([str(m)] + [str(v) for v in row])


def read_table_csv(fp: TextIO) -> list[list[int]]:
    reader = csv.reader(fp)
    rows = [row for row in reader if row]
    return [[int(v) for v in row[1:]] for row in rows[1:]]


def table_to_csv_text(table: Sequence[Sequence[int]]) -> str:
    buf = io.StringIO()
    write_table_csv(buf, table)
    return buf.getvalue()
