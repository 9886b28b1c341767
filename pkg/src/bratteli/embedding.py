"""Double embeddings of one diagram into another and the induced two-point
identification of paths.

Two edge-injections with a shared vertex map and disjoint images fold the big
path space onto a quotient in which a path whose tail lies inside one copy is
glued to the mirror path through the other copy.  This module checks the
embedding conditions, classifies fibres and computes partners and splitting
levels, enumerates the anchor paths whose extension blocks map to circles,
and provides the saturated open sets, the two-family covers, the double-point
locus with its thickness filtration, and the regularity witnesses used to
analyse the factor map on pair groupoids.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .diagram import Diagram
from .pathspace import (
    LazyPath,
    Periodic,
    UndecidableTail,
    enumerate_paths,
    extends,
    first_difference,
    lazy_path,
    pair_distance,
    path_distance,
    path_target,
    shell_index,
    tail_agreement,
    tail_step,
)


class EmbeddingPair:
    """Two level-preserving edge-injections of ``small`` into ``big`` sharing
    one vertex map, with disjoint edge images.

    Maps are given per materialized level and repeat beyond it (both diagrams
    stationary).  ``vertex_levels[n][w]`` is the image vertex; the two sides'
    vertex maps may be given separately for condition testing but normally
    coincide.
    """

    def __init__(
        self,
        small: Diagram,
        big: Diagram,
        vertex_levels,
        edge_levels_0,
        edge_levels_1,
        vertex_levels_1=None,
    ):
        self.small = small
        self.big = big
        self.vertex_levels = [list(v) for v in vertex_levels]
        self.vertex_levels_1 = [list(v) for v in (vertex_levels_1 or vertex_levels)]
        self.edge_levels = ([list(v) for v in edge_levels_0], [list(v) for v in edge_levels_1])
        self._preimage_cache = {}

    # -- level-indexed lookups (maps repeat beyond the materialized prefix) --

    def _vmap(self, n, side=0):
        table = self.vertex_levels if side == 0 else self.vertex_levels_1
        return table[min(n, len(table) - 1)]

    def _emap(self, side, n):
        table = self.edge_levels[side]
        return table[min(n - 1, len(table) - 1)]

    def vertex_image(self, n, w, side=0):
        return self._vmap(n, side)[w]

    def vertex_preimage(self, n, v):
        hits = [w for w, img in enumerate(self._vmap(n)) if img == v]
        if len(hits) > 1:
            raise UndecidableTail(f"vertex map not injective at level {n}")
        return hits[0] if hits else None

    def edge_image(self, side, n, f_idx):
        return self._emap(side, n)[f_idx]

    def edge_preimage(self, side, n, e_idx):
        key = (side, min(n - 1, len(self.edge_levels[side]) - 1))
        if key not in self._preimage_cache:
            self._preimage_cache[key] = {img: f for f, img in enumerate(self._emap(side, n))}
        return self._preimage_cache[key].get(e_idx)

    def embedded_side(self, n, e_idx):
        """0, 1, or None when the edge lies outside both copies."""
        if self.edge_preimage(0, n, e_idx) is not None:
            return 0
        if self.edge_preimage(1, n, e_idx) is not None:
            return 1
        return None

    def flip_edge(self, n, e_idx):
        """Mirror an embedded edge into the other copy."""
        side = self.embedded_side(n, e_idx)
        if side is None:
            raise ValueError(f"edge ({n},{e_idx}) is not embedded")
        return self.edge_image(1 - side, n, self.edge_preimage(side, n, e_idx))

    def embedded_tail_step(self, tail, level, vertex, offset):
        """Edge the embedded tail produces at ``level`` from the big-diagram
        ``vertex`` one level below (used by the path machinery)."""
        w = self.vertex_preimage(level - 1, vertex)
        if w is None:
            raise UndecidableTail(f"vertex {vertex} at level {level - 1} is outside the embedded copy")
        inner = tail_step(self.small, tail.inner, level, w, offset)
        return self.edge_image(tail.side, level, inner)

    # -- stability horizon ---------------------------------------------------

    def stable_level(self) -> int:
        """Level past which the diagrams and the maps all repeat."""
        horizon = max(
            self.big.materialized_depth,
            self.small.materialized_depth,
            len(self.edge_levels[0]),
            len(self.edge_levels[1]),
            len(self.vertex_levels) - 1,
        )
        return horizon + 1

    def __repr__(self):
        return f"EmbeddingPair(small={self.small!r}, big={self.big!r})"

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


# -- condition checking ---------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    ok: bool
    witness: str = ""


def check_conditions(pair: EmbeddingPair) -> list[ConditionReport]:
    """The six embedding conditions: levels preserved on vertices and edges,
    endpoint maps intertwined, edge-injectivity of each side, a shared vertex
    map, and disjoint edge images."""
    out = []
    small, big = pair.small, pair.big
    top = pair.stable_level()

    ok, wit = True, ""
    for n in range(0, top + 1):
        for w in range(small.vertex_count(n)):
            for side in (0, 1):
                v = pair.vertex_image(n, w, side)
                if not (0 <= v < big.vertex_count(n)):
                    ok, wit = False, f"vertex ({n},{w}) side {side} maps outside level {n}"
    out.append(ConditionReport("(i) vertex levels preserved", ok, wit))

    ok, wit = True, ""
    for n in range(1, top + 1):
        for side in (0, 1):
            for f in range(small.edge_count(n)):
                e = pair.edge_image(side, n, f)
                if not (0 <= e < big.edge_count(n)):
                    ok, wit = False, f"edge ({n},{f}) side {side} maps outside level {n}"
    out.append(ConditionReport("(ii) edge levels preserved", ok, wit))

    ok, wit = True, ""
    for n in range(1, top + 1):
        for side in (0, 1):
            for f in range(small.edge_count(n)):
                fe = small.edge(n, f)
                be = big.edge(n, pair.edge_image(side, n, f))
                if be.source != pair.vertex_image(n - 1, fe.source, side):
                    ok, wit = False, f"source of edge ({n},{f}) side {side} not intertwined"
                if be.target != pair.vertex_image(n, fe.target, side):
                    ok, wit = False, f"target of edge ({n},{f}) side {side} not intertwined"
    out.append(ConditionReport("(iii) endpoints intertwined", ok, wit))

    ok, wit = True, ""
    for n in range(1, top + 1):
        for side in (0, 1):
            imgs = [pair.edge_image(side, n, f) for f in range(small.edge_count(n))]
            if len(set(imgs)) != len(imgs):
                ok, wit = False, f"side {side} not injective on level-{n} edges"
    out.append(ConditionReport("(iv) edge maps injective", ok, wit))

    ok, wit = True, ""
    for n in range(0, top + 1):
        for w in range(small.vertex_count(n)):
            if pair.vertex_image(n, w, 0) != pair.vertex_image(n, w, 1):
                ok, wit = False, f"vertex maps disagree at ({n},{w})"
    out.append(ConditionReport("(v) shared vertex map", ok, wit))

    ok, wit = True, ""
    for n in range(1, top + 1):
        left = {pair.edge_image(0, n, f) for f in range(small.edge_count(n))}
        right = {pair.edge_image(1, n, f) for f in range(small.edge_count(n))}
        if left & right:
            ok, wit = False, f"images share edge {sorted(left & right)[0]} at level {n}"
    out.append(ConditionReport("(vi) disjoint edge images", ok, wit))
    return out


def conditions_ok(pair: EmbeddingPair) -> bool:
    return all(r.ok for r in check_conditions(pair))


def covers_big(pair: EmbeddingPair) -> bool:
    """True when the two copies exhaust every edge of the big diagram (the
    product-form case)."""
    for n in range(1, pair.stable_level() + 1):
        for e in range(pair.big.edge_count(n)):
            if pair.embedded_side(n, e) is None:
                return False
    return True


# -- fibre classification -----------------------------------------------------------


@dataclass(frozen=True)
class FibreClass:
    kind: str  # "singleton" | "pair"
    partner: LazyPath | None = None
    splitting_level: int | None = None
    side: int | None = None
    n0: int | None = None


def _one_sided_tail(pair: EmbeddingPair, x: LazyPath):
    """(side, first_level) when every edge from first_level on lies in one
    copy, with first_level minimal; None otherwise.  Needs a stationary big
    diagram so the tail block is exact."""
    if not pair.big.is_stationary:
        raise UndecidableTail("tail side detection needs a stationary diagram")
    stab = max(pair.stable_level(), len(x.prefix) + 1)
    block = x.tail.block
    p = len(block)
    sides = {pair.embedded_side(n, x.edge_at(n)) for n in range(stab, stab + p)}
    if len(sides) != 1 or None in sides:
        return None
    side = sides.pop()
    n0 = 0
    for n in range(stab - 1, 0, -1):
        if pair.embedded_side(n, x.edge_at(n)) != side:
            n0 = n
            break
    return side, n0 + 1


def classify_fibre(pair: EmbeddingPair, x: LazyPath) -> FibreClass:
    """The identification rule: a path whose tail lies in copy j from the
    least possible level n0+1 is glued to the mirror path; the edge at n0
    itself swaps copies when it happens to lie in the other copy.  Everything
    else is alone in its class."""
    one = _one_sided_tail(pair, x)
    if one is None:
        return FibreClass("singleton")
    side, first = one
    n0 = first - 1
    stab = max(pair.stable_level(), len(x.prefix) + 1)
    horizon = stab + len(x.tail.block) - 1
    edges = [x.edge_at(n) for n in range(1, horizon + 1)]

    def mirrored(n, e):
        return pair.edge_image(1 - side, n, pair.edge_preimage(side, n, e))

    if n0 == 0:
        partner_edges = [mirrored(n, e) for n, e in enumerate(edges, start=1)]
        split = 1
    elif pair.embedded_side(n0, edges[n0 - 1]) == 1 - side:
        partner_edges = list(edges)
        partner_edges[n0 - 1] = pair.flip_edge(n0, edges[n0 - 1])
        for n in range(n0 + 1, horizon + 1):
            partner_edges[n - 1] = mirrored(n, edges[n - 1])
        split = n0
    else:
        partner_edges = list(edges)
        for n in range(n0 + 1, horizon + 1):
            partner_edges[n - 1] = mirrored(n, edges[n - 1])
        split = n0 + 1
    block_levels = range(stab, stab + len(x.tail.block))
    partner_block = tuple(partner_edges[n - 1] for n in block_levels)
    partner = LazyPath(pair.big, tuple(partner_edges[: stab - 1]), Periodic(partner_block))
    return FibreClass("pair", partner, split, side, n0)


def partner(pair: EmbeddingPair, x: LazyPath) -> LazyPath:
    """The other point of the fibre (x itself for singleton classes)."""
    fc = classify_fibre(pair, x)
    return x if fc.kind == "singleton" else fc.partner


# -- anchor paths and their extension blocks --------------------------------------------


def is_anchor(pair: EmbeddingPair, p) -> bool:
    """A finite path whose last edge leaves both copies but lands on an
    embedded vertex; the empty path is an anchor by convention."""
    if len(p) == 0:
        return True
    last_level = len(p)
    if pair.embedded_side(last_level, p[-1]) is not None:
        return False
    return pair.vertex_preimage(last_level, path_target(pair.big, p)) is not None


def enumerate_anchors(pair: EmbeddingPair, max_len: int):
    """All anchor paths of length <= max_len, shortest first, lexicographic."""
    out = [()]
    for n in range(1, max_len + 1):
        out.extend(p for p in enumerate_paths(pair.big, n) if is_anchor(pair, p))
    return out


def in_anchor_block(pair: EmbeddingPair, x: LazyPath, p) -> bool:
    """Does x extend p with every later edge inside one of the two copies
    (sides may alternate)?"""
    if not extends(x, p):
        return False
    stab = max(pair.stable_level(), len(x.prefix) + 1)
    for n in range(len(p) + 1, stab):
        if pair.embedded_side(n, x.edge_at(n)) is None:
            return False
    if pair.big.is_stationary:
        block = x.tail.block
        return all(
            pair.embedded_side(n, x.edge_at(n)) is not None
            for n in range(stab, stab + len(block))
        )
    raise UndecidableTail("anchor block membership needs a stationary diagram")


def one_sided_from(pair: EmbeddingPair, x: LazyPath, side: int, start: int) -> bool:
    """Every edge from level ``start`` on lies in copy ``side``."""
    stab = max(pair.stable_level(), len(x.prefix) + 1)
    for n in range(start, stab):
        if pair.embedded_side(n, x.edge_at(n)) != side:
            return False
    if pair.big.is_stationary:
        block = x.tail.block
        return all(
            pair.embedded_side(n, x.edge_at(n)) == side for n in range(stab, stab + len(block))
        )
    raise UndecidableTail("one-sided tail test needs a stationary diagram")


# -- saturated sets ---------------------------------------------------------------------


@dataclass(frozen=True)
class CylinderSet:
    """C(p) for an anchor-style p whose last edge leaves both copies."""

    pair: EmbeddingPair
    p: tuple

    def contains(self, x: LazyPath) -> bool:
        return extends(x, self.p)

    def cylinders(self):
        return (self.p,)


@dataclass(frozen=True)
class OneSidedSet:
    """D_j(p): extensions of p staying in copy j forever."""

    pair: EmbeddingPair
    p: tuple
    j: int

    def contains(self, x: LazyPath) -> bool:
        return extends(x, self.p) and one_sided_from(self.pair, x, self.j, len(self.p) + 1)

    def cylinders(self):
        return (self.p,)


@dataclass(frozen=True)
class TrimmedCylinder:
    """U_p = C(p) minus both one-sided tail sets."""

    pair: EmbeddingPair
    p: tuple

    def contains(self, x: LazyPath) -> bool:
        if not extends(x, self.p):
            return False
        start = len(self.p) + 1
        return not (
            one_sided_from(self.pair, x, 0, start) or one_sided_from(self.pair, x, 1, start)
        )

    def cylinders(self):
        return (self.p,)


@dataclass(frozen=True)
class PairedPatch:
    """V_{p,q} = (C(p) - D_1(p)) u (C(q) - D_0(q)) for a mirrored pair of
    prefixes: p runs through copy 0 after position m, q through copy 1, with
    the position-m edges equal or swapped copies of one another."""

    pair: EmbeddingPair
    p: tuple
    q: tuple

    def __post_init__(self):
        _patch_shape(self.pair, self.p, self.q)

    def contains(self, x: LazyPath) -> bool:
        if extends(x, self.p) and not one_sided_from(self.pair, x, 1, len(self.p) + 1):
            return True
        return extends(x, self.q) and not one_sided_from(self.pair, x, 0, len(self.q) + 1)

    def cylinders(self):
        return (self.p, self.q)


def _patch_shape(pair: EmbeddingPair, p, q):
    """Validate the mirrored-prefix shape and return the swap position m
    (0 for fully mirrored prefixes)."""
    if len(p) != len(q) or len(p) == 0:
        raise ValueError("patch needs two prefixes of one positive length")
    k = len(p)
    m = 0
    for n in range(k, 0, -1):
        if pair.embedded_side(n, p[n - 1]) != 0:
            m = n
            break
    if m == k:
        raise ValueError("the copy-0 run after the swap position is empty")
    for n in range(1, m):
        if p[n - 1] != q[n - 1]:
            raise ValueError(f"prefixes disagree at level {n} before the swap position")
    for n in range(m + 1, k + 1):
        f0 = pair.edge_preimage(0, n, p[n - 1])
        f1 = pair.edge_preimage(1, n, q[n - 1])
        if f0 is None or f1 is None or f0 != f1:
            raise ValueError(f"runs at level {n} are not mirror images")
    if m >= 1:
        pm, qm = p[m - 1], q[m - 1]
        side_p = pair.embedded_side(m, pm)
        side_q = pair.embedded_side(m, qm)
        if side_p == 0:
            raise ValueError("position-m edge of p may not lie in copy 0")
        if side_q == 1:
            raise ValueError("position-m edge of q may not lie in copy 1")
        if side_p is None and pm != qm:
            raise ValueError("free position-m edges must coincide")
        if side_p == 1 and (side_q != 0 or pair.flip_edge(m, pm) != qm):
            raise ValueError("swapped position-m edges must mirror one another")
    return m


@dataclass(frozen=True)
class AnchorBlock:
    """The closed saturated block of all extensions of an anchor path that
    stay inside the two copies."""

    pair: EmbeddingPair
    p: tuple

    def contains(self, x: LazyPath) -> bool:
        return in_anchor_block(self.pair, x, self.p)

    def cylinders(self):
        return (self.p,)


def set_by_kind(pair: EmbeddingPair, kind: str, p=(), q=(), j=0):
    table = {
        "cyl": lambda: CylinderSet(pair, tuple(p)),
        "trimmed": lambda: TrimmedCylinder(pair, tuple(p)),
        "patch": lambda: PairedPatch(pair, tuple(p), tuple(q)),
        "one-sided": lambda: OneSidedSet(pair, tuple(p), j),
        "anchor-block": lambda: AnchorBlock(pair, tuple(p)),
    }
    if kind not in table:
        raise KeyError(f"unknown set kind {kind!r}")
    return table[kind]()


# -- covering families ----------------------------------------------------------------


def _small_runs(pair: EmbeddingPair, w: int, lo: int, hi: int):
    """All small-diagram edge runs on levels lo..hi starting at vertex w."""
    runs = [((), w)]
    for n in range(lo, hi + 1):
        block = pair.small.edges_at(n)
        runs = [
            (r + (f,), e.target)
            for r, at in runs
            for f, e in enumerate(block)
            if e.source == at
        ]
    return [r for r, _ in runs]


def covering_families(pair: EmbeddingPair, n: int):
    """Two families of pairwise disjoint saturated open sets covering the
    path space: level-n cylinders (trimmed when the last edge is embedded)
    and mirrored patches one level deeper catching every two-point class
    whose splitting level is at most n."""
    if n < 1:
        raise ValueError("need n >= 1")
    fam0 = []
    for p in enumerate_paths(pair.big, n):
        if pair.embedded_side(n, p[-1]) is None:
            fam0.append(CylinderSet(pair, p))
        else:
            fam0.append(TrimmedCylinder(pair, p))

    k = n + 1
    fam1 = []
    # fully mirrored prefixes
    for run in _small_runs(pair, 0, 1, k):
        p = tuple(pair.edge_image(0, lvl, f) for lvl, f in enumerate(run, start=1))
        q = tuple(pair.edge_image(1, lvl, f) for lvl, f in enumerate(run, start=1))
        fam1.append(PairedPatch(pair, p, q))
    # swap at position m, mirrored runs above
    for m in range(1, n + 1):
        for head in enumerate_paths(pair.big, m):
            hm = head[m - 1]
            side = pair.embedded_side(m, hm)
            if side == 0:
                continue
            if side is None:
                q_m = hm
            else:  # side == 1
                q_m = pair.flip_edge(m, hm)
            w = pair.vertex_preimage(m, path_target(pair.big, head))
            if w is None:
                continue
            for run in _small_runs(pair, w, m + 1, k):
                p = head + tuple(pair.edge_image(0, lvl, f) for lvl, f in enumerate(run, start=m + 1))
                q = head[: m - 1] + (q_m,) + tuple(
                    pair.edge_image(1, lvl, f) for lvl, f in enumerate(run, start=m + 1)
                )
                fam1.append(PairedPatch(pair, p, q))
    return fam0, fam1


# -- the double-point locus -------------------------------------------------------------


def in_double_locus(pair: EmbeddingPair, xy) -> bool:
    """Pairs over which the factor map is two-to-one: tail-equivalent paths
    whose common tail lies inside a single copy."""
    x, y = xy
    if tail_agreement(x, y) is None:
        return False
    return _one_sided_tail(pair, x) is not None and _one_sided_tail(pair, y) is not None


def locus_side(pair: EmbeddingPair, xy) -> int:
    x, y = xy
    one = _one_sided_tail(pair, x)
    if one is None or not in_double_locus(pair, xy):
        raise ValueError("pair lies outside the double-point locus")
    return one[0]


def in_thick_part(pair: EmbeddingPair, xy, n: int) -> bool:
    """Locus pairs whose fibre has diameter above 2^-n: one coordinate is
    already one-sided from level n on."""
    x, y = xy
    if not in_double_locus(pair, xy):
        return False
    return any(one_sided_from(pair, z, j, n) for z in (x, y) for j in (0, 1))


# -- regularity witnesses ------------------------------------------------------------


@dataclass
class WitnessReport:
    k: int
    prefixes: tuple  # (p, p2, q, q2)
    samples: int
    hausdorff_cases: int
    diameter_cases: int
    ok: bool
    detail: str = ""

    def member(self, ab) -> bool:
        return self._member(ab)


def regularity_witness(
    pair: EmbeddingPair,
    pxy,
    pxy2,
    eps: Fraction,
    samples: int = 16,
    seed: int = 0,
    sample_depth: int = 4,
) -> WitnessReport:
    """Witness neighbourhood for a doubled pair of the pair groupoid.

    Given two distinct preimages (x,y) and (x',y') of one quotient pair and a
    positive eps, pick k at least the splitting levels and the shell index + 1
    with 2^-k < eps; the set of pairs carried by the four k-prefixes and the
    two mirrored patches is open and saturated, and every sampled member
    satisfies one of the two closeness alternatives: its own fibre pair is
    within eps in the pair metric (Hausdorff case) or the two preimages of the
    sampled pair are within eps of each other (diameter case).
    """
    (x, y), (x2, y2) = pxy, pxy2
    if partner(pair, x) != x2 or partner(pair, y) != y2:
        raise ValueError("inputs are not the two preimages of one quotient pair")
    n = shell_index(x, y)
    if n is None or shell_index(x2, y2) != n:
        raise ValueError("both pairs must be tail-equivalent in the same shell")
    m = first_difference(x, x2)
    l = first_difference(y, y2)
    # the mirrored patches need one run edge past each splitting position
    k = max(l + 1, m + 1, n + 1)
    while Fraction(1, 2**k) >= eps:
        k += 1
    p, p2 = x.truncate(k), x2.truncate(k)
    q, q2 = y.truncate(k), y2.truncate(k)
    patch_x = PairedPatch(pair, *( (p, p2) if _starts_copy0(pair, p, k) else (p2, p) ))
    patch_y = PairedPatch(pair, *( (q, q2) if _starts_copy0(pair, q, k) else (q2, q) ))

    def member(ab):
        a, b = ab
        agree = tail_agreement(a, b)
        if agree is None or agree > k + 1:
            return False
        in_gamma = (extends(a, p) and extends(b, q)) or (extends(a, p2) and extends(b, q2))
        return in_gamma and patch_x.contains(a) and patch_y.contains(b)

    side_x = locus_side(pair, (x, y))
    rng = random.Random(seed)
    hits = haus = diam = 0
    detail = ""
    ok = True
    for _ in range(samples * 4):
        if hits >= samples:
            break
        a, b = _sample_gamma_member(pair, p, q, rng, sample_depth)
        if not member((a, b)):
            continue
        hits += 1
        a2, b2 = partner(pair, a), partner(pair, b)
        if not member((a2, b2)):
            ok, detail = False, "partner pair escaped the witness set"
            continue
        if one_sided_from(pair, a, side_x, k + 1):
            d = _pair_set_hausdorff([(x, y), (x2, y2)], [(a, b), (a2, b2)])
            haus += 1
            if d >= eps:
                ok, detail = False, f"hausdorff distance {d} not below {eps}"
        else:
            d = pair_distance((a, b), (a2, b2))
            diam += 1
            if d >= eps:
                ok, detail = False, f"fibre spread {d} not below {eps}"
    if hits == 0:
        ok, detail = False, "no samples landed in the witness set"
    report = WitnessReport(k, (p, p2, q, q2), hits, haus, diam, ok, detail)
    report._member = member
    return report


def _starts_copy0(pair, p, k):
    return pair.embedded_side(k, p[-1]) == 0


def _pair_set_hausdorff(set_a, set_b):
    d_ab = max(min(pair_distance(a, b) for b in set_b) for a in set_a)
    d_ba = max(min(pair_distance(a, b) for a in set_a) for b in set_b)
    return max(d_ab, d_ba)


def _sample_gamma_member(pair, p, q, rng, depth):
    """A random pair extending (p, q) with a common continuation."""
    big = pair.big
    k = len(p)
    at = path_target(big, p)
    ext = []
    for n in range(k + 1, k + 1 + depth):
        options = big.out_edges(n, at)
        idx = rng.choice(options)
        ext.append(idx)
        at = big.edge(n, idx).target
    stab = pair.stable_level()
    blocks = []
    for e in range(big.edge_count(stab + 1)):
        if big.edge(stab + 1, e).source == at and big.edge(stab + 1, e).target == at:
            blocks.append((e,))
    tail = Periodic(rng.choice(blocks)) if blocks else Periodic((big.out_edges(k + 1 + depth, at)[0],))
    a = LazyPath(big, p + tuple(ext), tail)
    b = LazyPath(big, q + tuple(ext), tail)
    return a, b


# -- finite shadows for the matrix models ------------------------------------------------


def finite_shadow_partition(pair: EmbeddingPair, n: int, side: int, inner_tail=None):
    """Orbits of path-index pairs under the partner involution, for paths of
    length n extended by a fixed one-sided tail.  This is the fibre partition
    of the level-n matrix model under the factor map."""
    if inner_tail is None:
        inner_tail = Periodic((0,))
    from .pathspace import Embedded

    paths = enumerate_paths(pair.big, n)
    index = {pp: i for i, pp in enumerate(paths)}
    targets = [path_target(pair.big, pp) for pp in paths]
    sigma = {}
    for i, pp in enumerate(paths):
        x = LazyPath(pair.big, pp, Embedded(side, inner_tail, pair))
        fc = classify_fibre(pair, x)
        sigma[i] = index[fc.partner.truncate(n)] if fc.kind == "pair" else i

    # equivalence closure of (a,b) ~ (sigma a, sigma b): the tail flips sides
    # under the partner map, so sigma need not be an involution on truncations
    parent = {}

    def find(p):
        parent.setdefault(p, p)
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def union(p, q):
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[rp] = rq

    pairs = [
        (a, b)
        for a in range(len(paths))
        for b in range(len(paths))
        if targets[a] == targets[b]
    ]
    for a, b in pairs:
        union((a, b), (sigma[a], sigma[b]))
    groups = {}
    for ab in pairs:
        groups.setdefault(find(ab), []).append(ab)
    return paths, [sorted(g) for g in groups.values()]
