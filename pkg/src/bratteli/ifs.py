"""Iterated function systems over exact rationals: certified contraction
bounds, attractor cell approximations with sup-norm box arithmetic, strong
separation verdicts with exact certificates, and the symbolic code-space
system on k letters."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exact import mat_mul, mat_vec, sqrt_upper


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix x + offset with rational entries."""

    matrix: tuple
    offset: tuple

    def __init__(self, matrix, offset):
        object.__setattr__(
            self, "matrix", tuple(tuple(Fraction(v) for v in row) for row in matrix)
        )
        object.__setattr__(self, "offset", tuple(Fraction(v) for v in offset))

    @property
    def dim(self):
        return len(self.offset)

    def __call__(self, x):
        return tuple(v + b for v, b in zip(mat_vec(self.matrix, x), self.offset))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        m = mat_mul([list(r) for r in self.matrix], [list(r) for r in other.matrix])
        b = self(other.offset)
        return AffineMap(m, b)

    def inverse(self) -> "AffineMap":
        from .exact import determinant, mat_identity

        n = self.dim
        det = determinant([list(r) for r in self.matrix])
        if det == 0:
            raise ZeroDivisionError("map is not invertible")
        aug = [list(self.matrix[i]) + mat_identity(n)[i] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if aug[r][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [v * inv for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
        minv = [row[n:] for row in aug]
        boff = mat_vec(minv, [-b for b in self.offset])
        return AffineMap(minv, boff)

    def fixed_point(self):
        """Solve x = Ax + b exactly (unique for a contraction)."""
        from .exact import mat_identity

        n = self.dim
        m = [[(1 if i == j else 0) - self.matrix[i][j] for j in range(n)] for i in range(n)]
        aug = [list(m[i]) + [self.offset[i]] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if aug[r][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [v * inv for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
        return tuple(row[n] for row in aug)


def lipschitz_bound(m: AffineMap) -> Fraction:
    """Certified upper bound on the operator norm (sup over the unit ball of
    the Euclidean image norm): sqrt of the product of the max column and row
    absolute sums, which dominates the spectral norm and is tight on scalar
    matrices."""
    rows = [sum(abs(v) for v in row) for row in m.matrix]
    cols = [sum(abs(m.matrix[i][j]) for i in range(len(m.matrix))) for j in range(m.dim)]
    r, c = max(rows), max(cols)
    if r == c:
        return r
    return sqrt_upper(r * c)


# -- boxes (sup-norm geometry) -----------------------------------------------------


def box_of_image(m: AffineMap, box):
    """Exact bounding box of the affine image of a box."""
    out = []
    for i, row in enumerate(m.matrix):
        lo = hi = m.offset[i]
        for j, a in enumerate(row):
            blo, bhi = box[j]
            lo += a * (blo if a >= 0 else bhi)
            hi += a * (bhi if a >= 0 else blo)
        out.append((lo, hi))
    return tuple(out)


def box_contains(outer, inner) -> bool:
    return all(o[0] <= i[0] and i[1] <= o[1] for o, i in zip(outer, inner))


def box_diameter(box) -> Fraction:
    """Sup-norm diameter: the largest side length."""
    return max(hi - lo for lo, hi in box)


def box_distance(a, b) -> Fraction:
    """Sup-norm distance between two boxes (0 when they intersect)."""
    gaps = []
    for (alo, ahi), (blo, bhi) in zip(a, b):
        gaps.append(max(blo - ahi, alo - bhi, Fraction(0)))
    return max(gaps)


def point_box_max_distance(p, box) -> Fraction:
    """Largest sup-norm distance from the point to the box."""
    return max(max(abs(p[i] - lo), abs(p[i] - hi)) for i, (lo, hi) in enumerate(box))


def point_box_distance(p, box) -> Fraction:
    out = Fraction(0)
    for i, (lo, hi) in enumerate(box):
        if p[i] < lo:
            out = max(out, lo - p[i])
        elif p[i] > hi:
            out = max(out, p[i] - hi)
    return out


# -- systems ----------------------------------------------------------------------


class HullError(ValueError):
    """The starting box is not mapped into itself."""


@dataclass(frozen=True)
class CellApprox:
    depth: int
    cells: tuple  # (word, box) pairs

    def max_diameter(self) -> Fraction:
        return max(box_diameter(box) for _, box in self.cells)


class IfsSystem:
    """Finitely many rational affine contractions with a rational hull box."""

    kind = "affine"

    def __init__(self, dim, maps, hull=None, lam=None):
        self.dim = dim
        self.maps = list(maps)
        if any(m.dim != dim for m in self.maps):
            raise ValueError("map dimension mismatch")
        self.hull = tuple((Fraction(a), Fraction(b)) for a, b in hull) if hull else None
        bounds = [lipschitz_bound(m) for m in self.maps]
        self.lam = Fraction(lam) if lam is not None else max(bounds)
        if any(b > self.lam for b in bounds):
            raise ValueError("declared contraction bound below a certified map bound")
        if self.lam >= 1:
            raise ValueError(f"not a uniform contraction system (bound {self.lam})")

    @property
    def map_count(self):
        return len(self.maps)

    def word_map(self, word) -> AffineMap:
        """Composition f_{w1} o ... o f_{wn}."""
        out = None
        for idx in word:
            m = self.maps[idx]
            out = m if out is None else out.compose(m)
        if out is None:
            raise ValueError("empty word")
        return out

    def check_hull(self):
        if self.hull is None:
            raise HullError("no hull box given")
        for i, m in enumerate(self.maps):
            if not box_contains(self.hull, box_of_image(m, self.hull)):
                raise HullError(f"map {i} does not send the hull into itself")

    def attractor_cells(self, n: int) -> CellApprox:
        """All depth-n word cells as exact boxes; the cell of w is the exact
        bounding box of f_w(hull), so it contains the attractor piece of w and
        has sup-norm diameter at most lam^n * diam(hull)."""
        self.check_hull()
        if n == 0:
            return CellApprox(0, (((), self.hull),))
        out = []
        for word in product(range(self.map_count), repeat=n):
            out.append((word, box_of_image(self.word_map(word), self.hull)))
        return CellApprox(n, tuple(out))


@dataclass(frozen=True)
class Separated:
    gap: Fraction
    depth: int


@dataclass(frozen=True)
class Overlapping:
    point: tuple
    witness: tuple  # ((map, word), (map, word)) fixed-point certificates


@dataclass(frozen=True)
class SeparationUnknown:
    depth: int


def strong_separation(s, depth: int = 4):
    """Separated(gap) when the depth-n cell unions of distinct first letters
    keep a positive sup-norm distance; Overlapping(point) when two first-letter
    pieces share an exactly computed point of the attractor; Unknown otherwise."""
    if getattr(s, "kind", "affine") == "code":
        return Separated(Fraction(1), 0)
    cells = s.attractor_cells(depth).cells
    groups = {}
    for word, box in cells:
        groups.setdefault(word[0], []).append(box)
    letters = sorted(groups)
    gap = None
    for i in letters:
        for j in letters:
            if i >= j:
                continue
            d = min(box_distance(a, b) for a in groups[i] for b in groups[j])
            gap = d if gap is None else min(gap, d)
    if gap is not None and gap > 0:
        return Separated(gap, depth)
    cert = _overlap_certificate(s)
    if cert is not None:
        return Overlapping(*cert)
    return SeparationUnknown(depth)


def _overlap_certificate(s, word_len: int = 2):
    """Search for an exact common point: images under two distinct first maps
    of fixed points of short composition words (all attractor points)."""
    words = []
    for n in range(1, word_len + 1):
        words.extend(product(range(s.map_count), repeat=n))
    anchors = [(w, s.word_map(w).fixed_point()) for w in words]
    seen = {}
    for i in range(s.map_count):
        for w, fp in anchors:
            pt = s.maps[i](fp)
            for (j, w2), pt2 in seen.items():
                if j != i and pt2 == pt:
                    return pt, ((j, w2), (i, w))
            seen[(i, w)] = pt
    return None


# -- the symbolic code space system --------------------------------------------------


@dataclass(frozen=True)
class PrependMap:
    symbol: int


class CodeSpaceSystem:
    """Left-shift inverses on infinite words over k letters with the 2^-n
    agreement metric; prepending a letter halves distances, so the system is
    a uniform contraction with bound 1/2, strongly separated by first letter."""

    kind = "code"
    dim = None

    def __init__(self, k: int):
        if k < 2:
            raise ValueError("need at least two letters")
        self.k = k
        self.maps = [PrependMap(j) for j in range(k)]
        self.lam = Fraction(1, 2)

    @property
    def map_count(self):
        return self.k

    def word_map(self, word):
        return tuple(PrependMap(j).symbol for j in word)

    def apply_word(self, word, stream):
        """f_{w1} o ... o f_{wn} prepends the word in order."""
        return tuple(word) + tuple(stream)

    def attractor_cells(self, n: int) -> CellApprox:
        """Cells are word cylinders; their diameter in the agreement metric is
        exactly 2^-n."""
        cells = tuple(
            (w, ("cylinder", w, Fraction(1, 2**n)))
            for w in product(range(self.k), repeat=n)
        )
        if n == 0:
            cells = (((), ("cylinder", (), Fraction(1))),)
        return CellApprox(n, cells)

    def cell_diameter(self, n: int) -> Fraction:
        return Fraction(1, 2**n)


def code_space_system(k: int) -> CodeSpaceSystem:
    return CodeSpaceSystem(k)


# -- serialization -----------------------------------------------------------------


def system_to_dict(s) -> dict:
    if getattr(s, "kind", "affine") == "code":
        return {"code_space": s.k}
    out = {
        "dimension": s.dim,
        "maps": [
            {
                "matrix": [[str(v) for v in row] for row in m.matrix],
                "offset": [str(v) for v in m.offset],
            }
            for m in s.maps
        ],
        "lambda": str(s.lam),
    }
    if s.hull:
        out["hull"] = [[str(a), str(b)] for a, b in s.hull]
    return out


def system_from_dict(data: dict):
    if "code_space" in data:
        return CodeSpaceSystem(int(data["code_space"]))
    maps = [
        AffineMap(
            [[Fraction(v) for v in row] for row in m["matrix"]],
            [Fraction(v) for v in m["offset"]],
        )
        for m in data["maps"]
    ]
    hull = None
    if "hull" in data:
        hull = [(Fraction(a), Fraction(b)) for a, b in data["hull"]]
    return IfsSystem(int(data["dimension"]), maps, hull=hull, lam=Fraction(data["lambda"]))
