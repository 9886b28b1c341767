"""The ordered group attached to a diagram as a direct limit of integer
lattices along the incidence matrices: element arithmetic, limit equality,
positivity, the order unit, invariant traces via the harmonic recursion on
vertex weights, and symbolic identification for the catalog families."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .diagram import Diagram, incidence_matrix, path_counts
from .exact import Interval, PerronData, is_primitive, mat_pow, mat_transpose, mat_vec, perron_data
from .groups import GroupExpr, Z, limit, localized


UNKNOWN = "unknown"


@dataclass(frozen=True)
class DGElement:
    level: int
    vector: tuple

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(v) for v in self.vector))


def element(level, vector) -> DGElement:
    return DGElement(level, tuple(vector))


def _check_element(d: Diagram, e: DGElement):
    if len(e.vector) != d.vertex_count(e.level):
        raise ValueError(
            f"vector of length {len(e.vector)} at level {e.level} "
            f"needs {d.vertex_count(e.level)} entries"
        )


def push_forward(d: Diagram, e: DGElement, to_level: int) -> DGElement:
    """Image of the element under the connecting maps up to ``to_level``."""
    _check_element(d, e)
    if to_level < e.level:
        raise ValueError("can only push forward to a deeper level")
    vec = e.vector
    for n in range(e.level + 1, to_level + 1):
        vec = mat_vec(incidence_matrix(d, n), vec)
    return DGElement(to_level, tuple(int(v) for v in vec))


_block_pow_cache = {}


def _stationary_matrix(d: Diagram):
    return incidence_matrix(d, d.stationary_from + 1) if d.is_stationary else None


def _stationary_block_power(d: Diagram):
    """The repeating matrix raised to its dimension (kernel chains stabilize
    there), cached per diagram."""
    key = (d.levels, d.edge_levels, d.stationary_from)
    if key not in _block_pow_cache:
        a = _stationary_matrix(d)
        _block_pow_cache[key] = mat_pow(a, len(a))
    return _block_pow_cache[key]


def dg_equal(d: Diagram, e1: DGElement, e2: DGElement, extra_depth: int = 32):
    """Equality in the direct limit.

    Exact on stationary diagrams: the kernel chain of the repeating matrix
    stabilizes within its dimension, so a persistent difference is definitive.
    On finite diagrams a difference surviving to the depth cap is UNKNOWN.
    """
    top = max(e1.level, e2.level)
    v1 = push_forward(d, e1, top).vector
    v2 = push_forward(d, e2, top).vector
    diff = DGElement(top, tuple(a - b for a, b in zip(v1, v2)))
    return _is_zero(d, diff, extra_depth)


def _is_zero(d: Diagram, e: DGElement, extra_depth: int = 32):
    if all(v == 0 for v in e.vector):
        return True
    if d.is_stationary:
        base = max(e.level, d.stationary_from)
        vec = push_forward(d, e, base).vector
        if all(v == 0 for v in vec):
            return True
        vec = mat_vec(_stationary_block_power(d), vec)
        return all(v == 0 for v in vec)
    hi = min(d.depth, e.level + extra_depth)
    vec = e.vector
    for n in range(e.level + 1, hi + 1):
        vec = mat_vec(incidence_matrix(d, n), vec)
        if all(v == 0 for v in vec):
            return True
    return False if hi < d.depth else UNKNOWN


class Positivity(Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NOT_POSITIVE = "not-positive"
    UNKNOWN = "unknown"


def is_positive(d: Diagram, e: DGElement, depth_cap: int = 32) -> Positivity:
    """Membership of the nonzero class in the positive cone.

    A pushforward with all entries >= 0 certifies membership (and such a
    vector can never die, since no incidence column is zero); all entries
    <= 0 certifies the complement.  Mixed signs on a primitive stationary
    diagram are settled by the sign of the invariant-weight pairing, with
    iteration-and-cycle detection as the fallback when the pairing straddles
    zero; otherwise the answer is UNKNOWN at the cap.
    """
    _check_element(d, e)
    z = _is_zero(d, e, depth_cap)
    if z is True:
        return Positivity.ZERO

    vec = e.vector
    level = e.level
    seen = set()
    perron_sign = None
    if d.is_stationary and is_primitive(_stationary_matrix(d)):
        tr = trace(d)
        width = Fraction(1, 10**12)
        for _ in range(6):
            pairing_value = pairing(tr, e, width=width)
            s = pairing_value.sign() if isinstance(pairing_value, Interval) else _num_sign(pairing_value)
            if s is not None:
                perron_sign = s
                break
            width /= 10**6
        if perron_sign == 1:
            return Positivity.POSITIVE
        if perron_sign == -1:
            return Positivity.NOT_POSITIVE

    for _ in range(depth_cap):
        if all(v >= 0 for v in vec) and any(v > 0 for v in vec):
            return Positivity.POSITIVE
        if all(v <= 0 for v in vec) and any(v < 0 for v in vec):
            return Positivity.NOT_POSITIVE
        level += 1
        if d.depth is not None and level > d.depth:
            return Positivity.UNKNOWN
        vec = tuple(int(v) for v in mat_vec(incidence_matrix(d, level), vec))
        if d.is_stationary and level >= d.stationary_from:
            # past the prefix the map is time-invariant, so a revisited
            # mixed-sign vector repeats forever
            if vec in seen:
                return Positivity.NOT_POSITIVE
            seen.add(vec)
    return Positivity.UNKNOWN


def _num_sign(v):
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def order_unit(d: Diagram, level: int) -> DGElement:
    """Class of the unit: the vector of root-path counts into each vertex."""
    if level < 0:
        raise ValueError("level must be >= 0")
    return DGElement(level, path_counts(d, level))


# -- traces -------------------------------------------------------------------


class TraceVector:
    """Vertex weights satisfying weight(v) = sum of weight(t(e)) over edges e
    leaving v, normalized to 1 at the root.

    Perron mode (primitive stationary diagrams) is the unique such family:
    exact rationals when the dominant eigenvalue is rational, certified
    intervals otherwise.  Finite-depth mode fixes the barycentric solution at
    the chosen depth, which need not be unique beyond it.
    """

    def __init__(self, diagram: Diagram, mode: str, depth: int | None = None):
        self.diagram = diagram
        self.mode = mode
        self.depth = depth
        self._perron: PerronData | None = None
        self._exact_levels = None
        if mode == "perron":
            a = _stationary_matrix(diagram)
            if a is None or not is_primitive(a):
                raise ValueError("perron mode needs a primitive stationary diagram")
            self._perron = perron_data(mat_transpose(a))
        elif mode == "finite":
            if depth is None:
                raise ValueError("finite mode needs a depth")
            self._exact_levels = self._solve_finite(depth)
        else:
            raise ValueError(f"unknown trace mode {mode!r}")

    def _solve_finite(self, depth):
        d = self.diagram
        counts = path_counts(d, depth)
        total = sum(counts)
        levels = [tuple([Fraction(1, total)] * d.vertex_count(depth))]
        for n in range(depth, 0, -1):
            nxt = levels[0]
            a_t = mat_transpose(incidence_matrix(d, n))
            levels.insert(0, tuple(mat_vec(a_t, nxt)))
        scale = levels[0][0]
        return [tuple(v / scale for v in row) for row in levels]

    @property
    def is_exact(self) -> bool:
        if self.mode == "finite":
            return True
        return isinstance(self._perron.value, Fraction)

    def values(self, level: int, width: Fraction = Fraction(1, 10**12)):
        """Weights at a level: Fractions when exact, else Interval enclosures."""
        d = self.diagram
        if self.mode == "finite":
            if level >= len(self._exact_levels):
                raise ValueError(f"finite-depth trace has no level {level}")
            return self._exact_levels[level]
        s = d.stationary_from
        u = self._perron.vector(width)
        lam = self._perron.eigen_interval(width)
        if self.is_exact:
            u = tuple(ui.lo for ui in u)
            lam = lam.lo
        base = {s: u}
        cur = u
        for n in range(s, 0, -1):
            a_t = mat_transpose(incidence_matrix(d, n))
            cur = tuple(mat_vec(a_t, cur))
            base[n - 1] = cur
        scale = base[0][0]
        if level <= s:
            row = base[level]
        else:
            if self.is_exact:
                factor = Fraction(1, 1) / lam ** (level - s)
            else:
                factor = lam.power(-(level - s))
            row = tuple(ui * factor for ui in u)
        if self.is_exact:
            return tuple(v / scale for v in row)
        inv = scale.reciprocal()
        return tuple(v * inv for v in row)


def trace(d: Diagram, depth: int | None = None) -> TraceVector:
    """Perron trace for primitive stationary diagrams when ``depth`` is None,
    otherwise the finite-depth barycentric solution."""
    if depth is None:
        return TraceVector(d, "perron")
    return TraceVector(d, "finite", depth)


def pairing(t: TraceVector, e: DGElement, width: Fraction = Fraction(1, 10**12)):
    """Sum of weight(v) * vector[v] at the element's level."""
    vals = t.values(e.level, width=width)
    total = None
    for w, c in zip(vals, e.vector):
        term = w * c
        total = term if total is None else total + term
    return total


# -- symbolic identification -----------------------------------------------------


def identify_group(d: Diagram) -> GroupExpr:
    """Catalog identification: a stationary single-vertex diagram with k edges
    presents Z[1/k] (Z when k = 1); anything else stays a formal limit."""
    if d.is_stationary and d.levels[-1] == 1:
        k = len(d.edges_at(d.stationary_from))
        return Z if k == 1 else localized(k)
    if d.is_stationary:
        a = incidence_matrix(d, d.stationary_from + 1)
        return limit("stationary " + ";".join(",".join(str(x) for x in row) for row in a))
    return limit(f"finite-depth-{d.depth}")
