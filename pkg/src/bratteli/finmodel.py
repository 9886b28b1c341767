"""Finite-dimensional groupoid models.

Functions on a finite equivalence relation convolve exactly like block
matrices under the matrix-unit identification; this module implements that
algebra over exact scalars, the constancy-on-fibres test characterizing the
image of the factor inclusion, and the exact verification of the
carry partial isometry whose range and support projections are conjugate
under a Hadamard tensor power."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class FiniteGroupoidFn:
    """A function on the pair groupoid of a partitioned finite index set,
    stored as a full matrix vanishing off the diagonal blocks."""

    def __init__(self, classes, matrix):
        self.classes = tuple(tuple(c) for c in classes)
        size = sum(len(c) for c in self.classes)
        self.size = size
        flat = sorted(i for c in self.classes for i in c)
        if flat != list(range(size)):
            raise ValueError("classes must partition 0..N-1")
        self._block_of = {}
        for b, c in enumerate(self.classes):
            for i in c:
                self._block_of[i] = b
        self.matrix = [list(row) for row in matrix]
        if len(self.matrix) != size or any(len(r) != size for r in self.matrix):
            raise ValueError("matrix shape must match the index set")
        for i in range(size):
            for j in range(size):
                if self._block_of[i] != self._block_of[j] and self.matrix[i][j] != 0:
                    raise ValueError(f"value off the diagonal blocks at ({i},{j})")

    def same_groupoid(self, other) -> bool:
        return self.classes == other.classes

    def value(self, i, j):
        return self.matrix[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroupoidFn)
            and self.classes == other.classes
            and self.matrix == other.matrix
        )

    def __repr__(self):
        return f"FiniteGroupoidFn(classes={self.classes})"


def convolve(f: FiniteGroupoidFn, g: FiniteGroupoidFn) -> FiniteGroupoidFn:
    """(f * g)(x, z) = sum over y of f(x, y) g(y, z); equals the matrix
    product because the classes are disjoint."""
    if not f.same_groupoid(g):
        raise ValueError("functions live on different groupoids")
    n = f.size
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        row = f.matrix[i]
        for y in range(n):
            a = row[y]
            if a == 0:
                continue
            grow = g.matrix[y]
            orow = out[i]
            for j in range(n):
                b = grow[j]
                if b != 0:
                    orow[j] = orow[j] + a * b
    return FiniteGroupoidFn(f.classes, out)


def adjoint(f: FiniteGroupoidFn) -> FiniteGroupoidFn:
    """f*(x, y) = conjugate of f(y, x)."""
    n = f.size
    out = [[_conj(f.matrix[j][i]) for j in range(n)] for i in range(n)]
    return FiniteGroupoidFn(f.classes, out)


def _conj(v):
    return v.conjugate() if hasattr(v, "conjugate") else v


def matrix_unit(classes, i, j) -> FiniteGroupoidFn:
    size = sum(len(c) for c in classes)
    m = [[0] * size for _ in range(size)]
    m[i][j] = 1
    return FiniteGroupoidFn(classes, m)


def alpha_constancy(f: FiniteGroupoidFn, fibres) -> bool:
    """Is f constant on every fibre of the factor map?  ``fibres`` partitions
    the groupoid elements (index pairs) as produced by the finite shadow of
    the path identification."""
    for orbit in fibres:
        vals = {f.value(i, j) for i, j in orbit}
        if len(vals) > 1:
            return False
    return True


# -- exact scaled matrices: entries times 2^(s/2) ------------------------------------


@dataclass(frozen=True)
class ScaledMatrix:
    """An integer matrix scaled by a power of sqrt(2), kept exact."""

    entries: tuple  # of tuples of ints
    half_exponent: int  # value = entries * 2^(half_exponent / 2)

    @staticmethod
    def of(array, half_exponent=0) -> "ScaledMatrix":
        return ScaledMatrix(tuple(tuple(int(v) for v in row) for row in array), half_exponent)

    def to_numpy(self):
        return np.array(self.entries, dtype=np.int64)

    def matmul(self, other: "ScaledMatrix") -> "ScaledMatrix":
        prod = self.to_numpy() @ other.to_numpy()
        return ScaledMatrix.of(prod, self.half_exponent + other.half_exponent)

    def transpose(self) -> "ScaledMatrix":
        return ScaledMatrix.of(self.to_numpy().T, self.half_exponent)

    def normalized(self) -> "ScaledMatrix":
        """Absorb even powers of two into the integer entries when possible,
        and pull out common factors of two otherwise."""
        arr = self.to_numpy()
        e = self.half_exponent
        while e >= 2:
            arr = arr * 2
            e -= 2
        while e <= -2 and not np.any(arr % 2):
            arr = arr // 2
            e += 2
        return ScaledMatrix.of(arr, e)

    def is_zero(self) -> bool:
        return not np.any(self.to_numpy())

    def equals(self, other: "ScaledMatrix") -> bool:
        a, b = self.normalized(), other.normalized()
        if a.is_zero() and b.is_zero():
            return True
        if a.half_exponent != b.half_exponent:
            return False
        return a.entries == b.entries

    def max_abs_difference(self, other: "ScaledMatrix") -> Fraction:
        """Exact zero when equal, else a certified rational upper bound on the
        max-entry distance."""
        if self.equals(other):
            return Fraction(0)
        a, b = self.normalized(), other.normalized()
        bound = Fraction(0)
        for m in (a, b):
            top = int(np.abs(m.to_numpy()).max())
            bound += Fraction(top) * Fraction(2) ** ((m.half_exponent + 1) // 2)
        return bound


def hadamard_tensor(n: int) -> ScaledMatrix:
    """The n-fold tensor power of the 2x2 sign matrix, scaled by 2^(-n/2)."""
    h = np.array([[1, 1], [1, -1]], dtype=np.int64)
    out = np.array([[1]], dtype=np.int64)
    for _ in range(n):
        out = np.kron(out, h)
    return ScaledMatrix.of(out, -n)


@dataclass(frozen=True)
class HadamardReport:
    n: int
    range_projection_ok: bool
    support_projection_ok: bool
    conjugation_ok: bool
    unitary_ok: bool
    residual: Fraction

    @property
    def all_ok(self):
        return (
            self.range_projection_ok
            and self.support_projection_ok
            and self.conjugation_ok
            and self.unitary_ok
        )


def carry_isometry(n: int) -> ScaledMatrix:
    """v = 2^(-n/2) sum over words w of e_{1,w}: the first row all ones."""
    size = 2**n
    arr = np.zeros((size, size), dtype=np.int64)
    arr[0, :] = 1
    return ScaledMatrix.of(arr, -n)


def hadamard_verify(n: int) -> HadamardReport:
    """Exact check that v v* is the corner projection, v* v is the averaging
    projection, and the Hadamard tensor power conjugates one to the other."""
    if n < 1:
        raise ValueError("need n >= 1")
    size = 2**n
    v = carry_isometry(n)
    vstar = v.transpose()
    e11 = np.zeros((size, size), dtype=np.int64)
    e11[0, 0] = 1
    corner = ScaledMatrix.of(e11, 0)
    allones = ScaledMatrix.of(np.ones((size, size), dtype=np.int64), -2 * n)

    vvstar = v.matmul(vstar)
    vstarv = vstar.matmul(v)
    range_ok = vvstar.equals(corner)
    support_ok = vstarv.equals(allones)

    h = hadamard_tensor(n)
    conj = h.matmul(corner).matmul(h)
    conj_ok = conj.equals(vstarv)

    ident = ScaledMatrix.of(np.eye(size, dtype=np.int64), 0)
    unitary_ok = h.matmul(h.transpose()).equals(ident)

    residual = Fraction(0)
    for pair in ((vvstar, corner), (vstarv, allones), (conj, vstarv)):
        residual = max(residual, pair[0].max_abs_difference(pair[1]))
    return HadamardReport(n, range_ok, support_ok, conj_ok, unitary_ok, residual)
