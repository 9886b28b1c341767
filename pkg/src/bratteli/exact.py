"""Exact rational helpers: interval arithmetic with Fraction endpoints,
small dense linear algebra over the rationals, and certified Perron data
for primitive nonnegative integer matrices."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def exact(v) -> "Interval":
        f = Fraction(v)
        return Interval(f, f)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other):
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_interval(other))

    def __rsub__(self, other):
        return _as_interval(other) + (-self)

    def __mul__(self, other):
        other = _as_interval(other)
        corners = [a * b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(min(corners), max(corners))

    __rmul__ = __mul__

    def reciprocal(self):
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval straddles zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _as_interval(other).reciprocal()

    def sign(self):
        """1, -1, or None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def power(self, k: int):
        out = Interval.exact(1)
        base = self
        if k < 0:
            base = self.reciprocal()
            k = -k
        for _ in range(k):
            out = out * base
        return out

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def _as_interval(v):
    return v if isinstance(v, Interval) else Interval.exact(v)


def sqrt_bounds(x: Fraction, slack: Fraction = Fraction(1, 10**12)) -> Interval:
    """A thin rational interval around sqrt(x) for x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Interval.exact(0)
    scale = 10**16
    n = x.numerator * scale * scale * x.denominator
    r = isqrt(n)
    lo = Fraction(r, scale * x.denominator)
    hi = Fraction(r + 1, scale * x.denominator)
    return Interval(lo, hi)


def sqrt_upper(x: Fraction) -> Fraction:
    """A certified rational upper bound for sqrt(x), tight on perfect squares."""
    if x < 0:
        raise ValueError("negative radicand")
    n = x.numerator * x.denominator
    r = isqrt(n)
    if r * r == n:
        return Fraction(r, x.denominator)
    return Fraction(r + 1, x.denominator)


# -- rational matrices (lists of lists) ----------------------------------------


def mat_identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows, mid, cols = len(a), len(b), len(b[0])
    return [
        [sum(a[i][k] * b[k][j] for k in range(mid)) for j in range(cols)]
        for i in range(rows)
    ]


def mat_vec(a, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def mat_pow(a, k):
    n = len(a)
    out = mat_identity(n)
    base = [row[:] for row in a]
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def determinant(a):
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def char_poly(a):
    """Coefficients c_0..c_n of det(xI - A) via Faddeev-LeVerrier."""
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = mat_identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        m = mat_mul(a, m)
        c = Fraction(-1, k) * sum(m[i][i] for i in range(n))
        coeffs[n - k] = c
        for i in range(n):
            m[i][i] += c
    return coeffs


def poly_eval(coeffs, x):
    out = coeffs[-1] if not isinstance(x, Interval) else Interval.exact(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        out = out * x + c
    return out


def kernel_vector(a):
    """A nonzero rational kernel vector of a square singular matrix, or None."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    pivots = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, n) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(n):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * p for v, p in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    c0 = free[0]
    vec = [Fraction(0)] * n
    vec[c0] = Fraction(1)
    for r, col in enumerate(pivots):
        vec[col] = -m[r][c0]
    return tuple(vec)


def adjugate_column(a, col):
    """Column ``col`` of the adjugate matrix adj(a)[i][col] = cofactor(a)[col][i]."""
    n = len(a)
    out = []
    for i in range(n):
        minor = [
            [a[r][c] for c in range(n) if c != i]
            for r in range(n)
            if r != col
        ]
        sign = -1 if (i + col) % 2 else 1
        out.append(sign * _det_generic(minor))
    return tuple(out)


def _det_generic(m):
    """Determinant that also works with Interval entries (cofactor expansion)."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return m[0][0]
    total = None
    for j in range(n):
        entry = m[0][j]
        minor = [[m[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = entry * _det_generic(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


# -- Perron data ------------------------------------------------------------------


def is_primitive(a) -> bool:
    """Some power of the nonnegative matrix is entrywise positive."""
    n = len(a)
    if any(len(row) != n for row in a) or any(x < 0 for row in a for x in row):
        return False
    bound = (n - 1) * (n - 1) + 1
    m = [row[:] for row in a]
    for _ in range(bound):
        if all(x > 0 for row in m for x in row):
            return True
        m = mat_mul(m, a)
    return all(x > 0 for row in m for x in row)


@dataclass
class PerronData:
    """Dominant eigenvalue and a positive eigenvector of a primitive matrix.

    ``value`` is exact (Fraction) when the eigenvalue is rational, otherwise a
    certified interval narrowed on demand; ``vector(width)`` returns entry
    enclosures of at most the requested width.
    """

    matrix: list
    value: object  # Fraction | Interval
    _coeffs: list = None

    def eigen_interval(self, width: Fraction) -> Interval:
        if isinstance(self.value, Fraction):
            return Interval.exact(self.value)
        while self.value.width > width:
            mid = self.value.mid
            sign = poly_eval(self._coeffs, mid)
            if sign == 0:
                self.value = Interval.exact(mid)
                break
            if sign > 0:
                self.value = Interval(self.value.lo, mid)
            else:
                self.value = Interval(mid, self.value.hi)
        return self.value if isinstance(self.value, Interval) else Interval.exact(self.value)

    def vector(self, width: Fraction):
        """Positive eigenvector entries as intervals (exact when rational)."""
        n = len(self.matrix)
        if isinstance(self.value, Fraction):
            lam = self.value
            m = [[lam * (1 if i == j else 0) - self.matrix[i][j] for j in range(n)] for i in range(n)]
            vec = kernel_vector(m)
            if vec is None:
                raise ArithmeticError("rational eigenvalue with trivial kernel")
            if any(v < 0 for v in vec) and any(v <= 0 for v in vec):
                vec = tuple(-v for v in vec)
            return tuple(Interval.exact(v) for v in vec)
        request = width
        while True:
            lam = self.eigen_interval(request)
            m = [
                [lam * (1 if i == j else 0) - Interval.exact(self.matrix[i][j]) for j in range(n)]
                for i in range(n)
            ]
            col = [v if isinstance(v, Interval) else Interval.exact(v) for v in adjugate_column(m, 0)]
            if all(e.sign() == 1 for e in col) and all(e.width <= width * max(1, abs(e.mid)) for e in col):
                return tuple(col)
            request = request / 2**8


def perron_data(a) -> PerronData:
    """Certified Perron eigenvalue/eigenvector for a primitive integer matrix."""
    if not is_primitive(a):
        raise ValueError("matrix is not primitive")
    coeffs = char_poly([[Fraction(x) for x in row] for row in a])
    # rational roots of a monic integer polynomial are integers dividing c_0
    row_sums = [sum(row) for row in a]
    hi_bound = max(row_sums)
    lo_bound = min(row_sums)
    for cand in range(max(1, lo_bound), hi_bound + 1):
        if poly_eval(coeffs, Fraction(cand)) == 0:
            return PerronData(a, Fraction(cand), coeffs)
    # certify a sign-changing rational bracket around the simple dominant root
    import numpy as np

    approx = Fraction(float(max(np.linalg.eigvals(np.array(a, dtype=float)).real)))
    for pad in range(40, 0, -4):
        eps = Fraction(1, 2**pad)
        lo, hi = approx - eps, approx + eps
        if poly_eval(coeffs, lo) < 0 < poly_eval(coeffs, hi):
            return PerronData(a, Interval(lo, hi), coeffs)
    raise ArithmeticError("could not certify a bracket for the dominant eigenvalue")
