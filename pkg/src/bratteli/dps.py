"""Contraction-fibred extensions of an adic system.

Every edge of an ordered diagram carries either the identity or a composition
word over a function system (length-n words at level n); a point of the
extension is a path together with a point of the nested images of the
attractor along it.  Fibres over paths with cofinally many genuine
contractions are single points; fibres over eventually-identity paths are
whole copies of the attractor.  The extension map acts by the adic successor
on the path and by the exactly composed replacement word on the coordinate.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .diagram import Diagram
from .pathspace import (
    AllIdentity,
    AllMax,
    AllMin,
    LazyPath,
    UndecidableTail,
    lazy_path,
    path_distance,
)
from .ifs import (
    box_diameter,
    box_distance,
    box_of_image,
    point_box_distance,
)
from .vershik import OrderedSystem, step


@dataclass(frozen=True)
class AssignmentIssue:
    rule: str
    locus: str
    detail: str

    def __str__(self):
        return f"{self.rule} at {self.locus}: {self.detail}"


class DpsAssignment:
    """A diagram, a function system, and one word (or the identity) per edge.

    ``word_tables[n-1][e]`` is None for the identity or a tuple of map indices
    of length n (the level-n words are compositions of exactly n maps, which
    caps the contraction factor of any level-k cell by lam^k)."""

    def __init__(self, diagram: Diagram, system, word_tables):
        self.diagram = diagram
        self.system = system
        self.word_tables = [
            [None if w is None else tuple(w) for w in level] for level in word_tables
        ]
        if diagram.depth is not None and len(self.word_tables) != diagram.depth:
            raise ValueError("need one word table per level")
        self._sys = OrderedSystem(diagram)

    @property
    def ordered_system(self) -> OrderedSystem:
        return self._sys

    def word_of(self, level: int, edge_index: int):
        return self.word_tables[level - 1][edge_index]

    def is_identity_edge(self, level: int, edge_index: int) -> bool:
        return self.word_of(level, edge_index) is None

    def identity_step(self, level: int, vertex: int) -> int:
        d = self.diagram
        hits = [
            i
            for i in d.out_edges(level, vertex)
            if self.is_identity_edge(level, i)
        ]
        if len(hits) != 1:
            raise UndecidableTail(
                f"identity continuation from vertex {vertex} at level {level} is not unique"
            )
        return hits[0]

    def identity_tail_path(self, prefix) -> LazyPath:
        return lazy_path(self.diagram, prefix, AllIdentity(self))

    def composed_word(self, x: LazyPath, upto: int):
        """Concatenated map word along the first ``upto`` edges."""
        out = []
        for n in range(1, upto + 1):
            w = self.word_of(n, x.edge_at(n))
            if w is not None:
                out.extend(w)
        return tuple(out)

    def cell_box(self, word):
        if not word:
            return self.system.hull
        return box_of_image(self.system.word_map(word), self.system.hull)

    def __repr__(self):
        return f"DpsAssignment(levels={len(self.word_tables)}, maps={self.system.map_count})"


# -- validation -------------------------------------------------------------------


def validate_assignment(a: DpsAssignment, cover_depth: int = 3, tol: Fraction = Fraction(1, 10**6)):
    """Check the assignment properties.

    Extreme edges must carry genuine words; the non-identity words into each
    vertex must cover the attractor (exact when they exhaust all length-n
    words, otherwise certified against the depth-``cover_depth`` cells within
    ``tol``); the identity edges must chain into a path from the root; and
    level-n words must have length exactly n.
    """
    issues = []
    d = a.diagram
    depth = d.depth if d.depth is not None else d.materialized_depth
    k = a.system.map_count

    for n in range(1, depth + 1):
        for v in range(d.vertex_count(n)):
            order = d.in_edges(n, v)
            for which, idx in (("minimal", order[0]), ("maximal", order[-1])):
                if a.is_identity_edge(n, idx):
                    issues.append(
                        AssignmentIssue("extreme-identity", f"edge ({n},{idx})", f"{which} edge carries the identity")
                    )

    for n in range(1, depth + 1):
        for e, w in enumerate(a.word_tables[n - 1]):
            if w is not None and len(w) != n:
                issues.append(
                    AssignmentIssue("word-length", f"edge ({n},{e})", f"word of length {len(w)} at level {n}")
                )

    exact_levels = []
    for n in range(1, depth + 1):
        for v in range(d.vertex_count(n)):
            words = [
                a.word_of(n, i)
                for i in range(d.edge_count(n))
                if d.edge(n, i).target == v and not a.is_identity_edge(n, i)
            ]
            if not words:
                issues.append(AssignmentIssue("coverage", f"vertex ({n},{v})", "no contraction word arrives here"))
                continue
            if set(words) >= set(_all_words(k, n)):
                exact_levels.append((n, v))
                continue
            witness = _coverage_witness(a, words, cover_depth, tol)
            if witness is not None:
                issues.append(
                    AssignmentIssue(
                        "coverage",
                        f"vertex ({n},{v})",
                        f"attractor cell near {witness} is {float(_coverage_gap(a, words, witness)):.3g} away from the word images",
                    )
                )

    if not _identity_path_exists(a, depth):
        issues.append(AssignmentIssue("identity-path", "diagram", "identity edges contain no root path"))
    return issues


def _all_words(k, n):
    from itertools import product

    return [w for w in product(range(k), repeat=n)]


def _coverage_witness(a, words, cover_depth, tol):
    """Center of an attractor cell further than tol from every word image."""
    if getattr(a.system, "kind", "affine") == "code":
        covered = {w[:1] for w in words}
        missing = [(j,) for j in range(a.system.k) if (j,) not in covered]
        return missing[0] if missing else None
    cells = a.system.attractor_cells(cover_depth).cells
    images = [a.cell_box(w) for w in words]
    for _, box in cells:
        center = tuple((lo + hi) / 2 for lo, hi in box)
        gap = min(point_box_distance(center, img) for img in images)
        if gap > tol + box_diameter(box):
            return center
    return None


def _coverage_gap(a, words, point):
    images = [a.cell_box(w) for w in words]
    return min(point_box_distance(point, img) for img in images)


def _identity_path_exists(a: DpsAssignment, depth: int) -> bool:
    d = a.diagram
    frontier = {0}
    for n in range(1, depth + 1):
        frontier = {
            d.edge(n, i).target
            for i in range(d.edge_count(n))
            if d.edge(n, i).source in frontier and a.is_identity_edge(n, i)
        }
        if not frontier:
            return False
    return True


# -- fibres ------------------------------------------------------------------------


@dataclass(frozen=True)
class SingletonFibre:
    point: tuple
    error: Fraction
    depth: int


@dataclass(frozen=True)
class AttractorFibre:
    word: tuple  # concatenated map word of the non-identity prefix


def fibre(a: DpsAssignment, x: LazyPath, depth: int | None = None):
    """Fibre dichotomy decided on the tail descriptor: identity tails give a
    full copy of the attractor carried by the composed prefix word; all-max or
    all-min tails give a single point approximated by nested cells."""
    tail = x.tail
    if isinstance(tail, AllIdentity):
        m = len(x.prefix)
        return AttractorFibre(a.composed_word(x, m))
    if isinstance(tail, (AllMax, AllMin)):
        d = a.diagram
        k = d.depth if depth is None else min(depth, d.depth or depth)
        box = a.cell_box(a.composed_word(x, k))
        center = tuple((lo + hi) / 2 for lo, hi in box)
        return SingletonFibre(center, box_diameter(box) / 2, k)
    raise UndecidableTail(f"tail {tail.literal()} does not decide the fibre kind")


def fibre_box(a: DpsAssignment, f):
    if isinstance(f, AttractorFibre):
        return a.cell_box(f.word)
    half = f.error
    return tuple((c - half, c + half) for c in f.point)


def fibre_diameter_bound(a: DpsAssignment, x: LazyPath, at_least_level: int = 1) -> Fraction:
    """Certified upper bound for the fibre diameter using the deepest
    materializable non-identity word at or past the given level."""
    d = a.diagram
    depth = d.depth if d.depth is not None else d.materialized_depth
    word = a.composed_word(x, depth)
    if not word:
        return box_diameter(a.system.hull)
    return box_diameter(a.cell_box(word))


# -- extension points and dynamics --------------------------------------------------------


@dataclass(frozen=True)
class ExtPoint:
    """A path plus a fibre coordinate: an exact attractor point for
    eventually-identity paths, a certified approximation otherwise."""

    x: LazyPath
    kind: str  # "incell" | "determined"
    coord: tuple | None = None  # exact rationals (incell)
    approx: SingletonFibre | None = None

    def __post_init__(self):
        if self.kind not in ("incell", "determined"):
            raise ValueError(f"unknown point kind {self.kind}")


def ext_point(a: DpsAssignment, x: LazyPath, coord=None, depth: int | None = None) -> ExtPoint:
    f = fibre(a, x, depth)
    if isinstance(f, AttractorFibre):
        if coord is None:
            raise ValueError("a copy-of-attractor fibre needs an explicit coordinate")
        coord = tuple(Fraction(c) for c in coord)
        if point_box_distance(coord, a.cell_box(f.word)) > 0:
            raise ValueError("coordinate lies outside the fibre cell")
        return ExtPoint(x, "incell", coord=coord)
    return ExtPoint(x, "determined", approx=f)


def phi_tilde(a: DpsAssignment, p: ExtPoint, depth: int | None = None) -> ExtPoint:
    """One step of the extension: the adic successor on the path; on the
    coordinate, the new prefix word composed with the inverse of the old one
    (eventually-identity case), or a fresh approximation of the unique point
    over the successor (determined case)."""
    sys = a.ordered_system
    y = step(sys, p.x)
    if p.kind == "determined":
        return ext_point(a, y, depth=depth)
    # both paths carry the identity past the larger of the carry extent and
    # the non-identity threshold, so the replacement word stops there
    m = len(p.x.prefix)
    top = max(m, _first_difference_level(p.x, y))
    forward = a.composed_word(y, top)
    backward = a.composed_word(p.x, top)
    coord = p.coord
    if backward:
        coord = a.system.word_map(backward).inverse()(coord)
    if forward:
        coord = a.system.word_map(forward)(coord)
    return ExtPoint(y, "incell", coord=tuple(coord))


def _first_difference_level(x: LazyPath, y: LazyPath) -> int:
    from .pathspace import first_difference

    n = first_difference(x, y)
    if n is None:
        return 0
    last = n
    horizon = max(len(x.prefix), len(y.prefix))
    for k in range(n, horizon + 1):
        if x.edge_at(k) != y.edge_at(k):
            last = k
    return last


def phi_tilde_inverse(a: DpsAssignment, p: ExtPoint, depth: int | None = None) -> ExtPoint:
    from .vershik import inverse_step

    sys = a.ordered_system
    y = inverse_step(sys, p.x)
    if p.kind == "determined":
        return ext_point(a, y, depth=depth)
    m = len(p.x.prefix)
    top = max(m, _first_difference_level(p.x, y))
    forward = a.composed_word(y, top)
    backward = a.composed_word(p.x, top)
    coord = p.coord
    if backward:
        coord = a.system.word_map(backward).inverse()(coord)
    if forward:
        coord = a.system.word_map(forward)(coord)
    return ExtPoint(y, "incell", coord=tuple(coord))


# -- fibre distances ---------------------------------------------------------------------


def fibre_hausdorff(a: DpsAssignment, x: LazyPath, y: LazyPath, depth: int = 6):
    """Certified (lower, upper) bounds for the Hausdorff distance between the
    fibres over x and y in the product sup-metric."""
    fx, fy = fibre(a, x, depth), fibre(a, y, depth)
    base = path_distance(x, y)
    lo, hi = _set_hausdorff_bounds(a, fx, fy, depth)
    return (max(base, lo), max(base, hi))


def _pieces(a: DpsAssignment, f, depth: int):
    if isinstance(f, SingletonFibre):
        return [fibre_box(a, f)]
    cells = a.system.attractor_cells(depth).cells
    word_box = a.system.word_map(f.word) if f.word else None
    out = []
    for _, box in cells:
        out.append(box_of_image(word_box, box) if word_box else box)
    return out


def _set_hausdorff_bounds(a, fx, fy, depth):
    if isinstance(fx, AttractorFibre) and isinstance(fy, AttractorFibre) and fx.word == fy.word:
        return (Fraction(0), Fraction(0))
    pa, pb = _pieces(a, fx, depth), _pieces(a, fy, depth)

    def direction(src, dst):
        lo = max(min(box_distance(s, t) for t in dst) for s in src)
        hi = max(min(_box_max_pair(s, t) for t in dst) for s in src)
        return lo, hi

    lo1, hi1 = direction(pa, pb)
    lo2, hi2 = direction(pb, pa)
    return (max(lo1, lo2), max(hi1, hi2))


def _box_max_pair(a_box, b_box) -> Fraction:
    out = Fraction(0)
    for (alo, ahi), (blo, bhi) in zip(a_box, b_box):
        out = max(out, max(abs(ahi - blo), abs(bhi - alo)))
    return out


# -- regularity witnesses -------------------------------------------------------------------


@dataclass
class DpsWitnessReport:
    case: str  # "cofinal" | "identity-tail"
    k: int
    samples: int
    diameter_cases: int
    hausdorff_cases: int
    ok: bool
    detail: str = ""


def regularity_witness_dps(
    a: DpsAssignment,
    x: LazyPath,
    eps: Fraction,
    samples: int = 100,
    seed: int = 0,
) -> DpsWitnessReport:
    """Witness cylinder for the factor map of the extension.

    Cofinally-contracting paths: pick k with lam^k < eps and a genuine word at
    level k; every path in the k-cylinder has fibre diameter under eps.
    Eventually-identity paths: pick k past the identity threshold with both
    2^-k and lam^k under eps; a sampled neighbour either carries a genuine
    word past k (its fibre is small) or shares the cell image (its fibre is
    within 2^-k of the base fibre in Hausdorff distance).
    """
    eps = Fraction(eps)
    d = a.diagram
    depth = d.depth if d.depth is not None else d.materialized_depth
    lam = a.system.lam
    rng = random.Random(seed)
    identity_tail = isinstance(x.tail, AllIdentity)

    k = 1
    while lam**k >= eps or Fraction(1, 2**k) >= eps:
        k += 1
    if identity_tail:
        k = max(k, len(x.prefix) + 1)
    else:
        while a.is_identity_edge(k, x.edge_at(k)):
            k += 1
    if k > depth:
        raise UndecidableTail(f"witness level {k} exceeds the materialized depth {depth}")

    prefix = x.truncate(k)
    diam_cases = haus_cases = 0
    ok, detail = True, ""
    for _ in range(samples):
        y = _sample_extension(a, prefix, rng, depth)
        if not identity_tail:
            bound = fibre_diameter_bound(a, y)
            diam_cases += 1
            if bound >= eps:
                ok, detail = False, f"fibre diameter bound {bound} not below {eps}"
            continue
        if _has_contraction_past(a, y, k, depth):
            bound = fibre_diameter_bound(a, y)
            diam_cases += 1
            if bound >= eps:
                ok, detail = False, f"fibre diameter bound {bound} not below {eps}"
        else:
            lo, hi = fibre_hausdorff(a, x, y, depth=3)
            haus_cases += 1
            if hi >= eps:
                ok, detail = False, f"fibre distance up to {hi} not below {eps}"
    case = "identity-tail" if identity_tail else "cofinal"
    return DpsWitnessReport(case, k, samples, diam_cases, haus_cases, ok, detail)


def _has_contraction_past(a: DpsAssignment, y: LazyPath, k: int, depth: int) -> bool:
    if not isinstance(y.tail, AllIdentity):
        return True
    for n in range(k, len(y.prefix) + 1):
        if not a.is_identity_edge(n, y.edge_at(n)):
            return True
    return False


def _sample_extension(a: DpsAssignment, prefix, rng, depth: int) -> LazyPath:
    d = a.diagram
    at = 0
    for n, idx in enumerate(prefix, start=1):
        at = d.edge(n, idx).target
    ext = []
    k = len(prefix)
    grow = rng.randrange(0, max(1, depth - k))
    for n in range(k + 1, k + 1 + grow):
        options = d.out_edges(n, at)
        idx = rng.choice(options)
        ext.append(idx)
        at = d.edge(n, idx).target
    tail = rng.choice([AllIdentity(a), AllMax(), AllMin()])
    return lazy_path(d, tuple(prefix) + tuple(ext), tail)
