"""Symbolic assembly of the computable invariants.

For a double embedding: the ordered group of the big diagram with its order
unit, the group of the small diagram one degree up, the trace description,
and the invariant-measure vanishing bound on the glued locus.  For an
extension assignment: the two short exact sequences with their tensor factors
over the curated attractor catalog, collapsed to isomorphisms when the
attractor is contractible and split when the outer term is free abelian.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diagram import Diagram, has_full_edge_connections
from .dimgroup import identify_group, trace
from .dps import DpsAssignment, validate_assignment
from .embedding import EmbeddingPair, conditions_ok, covers_big
from .groups import (
    GroupExpr,
    Z,
    ZERO,
    Z_INF,
    cont_func,
    direct_sum,
    is_free_abelian,
    quotient_by_unit,
    tensor,
)


@dataclass(frozen=True)
class ExactSequence:
    left: GroupExpr
    middle: object  # GroupExpr when resolved, str symbol otherwise
    right: GroupExpr
    split: str  # "yes" | "no" | "unknown"
    note: str = ""

    def __str__(self):
        mid = self.middle if isinstance(self.middle, str) else str(self.middle)
        return f"0 -> {self.left} -> {mid} -> {self.right} -> 0 (split: {self.split})"


@dataclass(frozen=True)
class InvariantReport:
    k0: object  # GroupExpr | str
    k1: object
    k0_order: str = ""
    traces: str = ""
    exact_sequences: tuple = ()
    quotients: tuple = ()  # (description, GroupExpr) pairs
    tags: tuple = ()

    def lines(self):
        out = [f"K0: {self.k0}", f"K1: {self.k1}"]
        if self.k0_order:
            out.append(f"K0 order: {self.k0_order}")
        if self.traces:
            out.append(f"traces: {self.traces}")
        for seq in self.exact_sequences:
            out.append(f"sequence: {seq}")
        for desc, g in self.quotients:
            out.append(f"quotient: {desc} = {g}")
        for t in self.tags:
            out.append(f"tag: {t}")
        return out


# -- double embeddings -----------------------------------------------------------


def factor_invariants(pair: EmbeddingPair) -> InvariantReport:
    """Invariants of the glued relation: the even group is order isomorphic to
    the big diagram's limit group, the odd group is the small diagram's limit
    group, and traces correspond one-to-one with invariant weights upstairs."""
    if not conditions_ok(pair):
        raise ValueError("embedding conditions fail; run check_conditions for details")
    k0 = identify_group(pair.big)
    k1 = identify_group(pair.small)
    minimal = has_full_edge_connections(pair.big, 16)
    tr = _trace_summary(pair.big)
    tags = []
    if minimal:
        tags.append("minimal: glued relation inherits minimality")
    if covers_big(pair):
        tags.append(
            "product form: big algebra = small algebra x binary shift; "
            "glued algebra = small algebra x dyadic rotation tensor factor"
        )
    return InvariantReport(
        k0=k0,
        k1=k1,
        k0_order=f"usual order on {k0} with order unit the class of 1",
        traces=tr,
        tags=tuple(tags),
    )


def _trace_summary(d: Diagram) -> str:
    try:
        t = trace(d)
    except ValueError:
        return "trace simplex described at finite depth (no primitive block)"
    if t.is_exact:
        vals = t.values(1)
        return "unique trace with level-1 weights (" + ", ".join(str(v) for v in vals) + ")"
    return "unique trace with certified interval weights"


def measure_vanishing(pair: EmbeddingPair, m: int):
    """Exact mass of the set of paths running through copy 0 for their first
    m levels, and the 2^-m bound it must satisfy.

    The weight of each such cylinder equals that of its 2^m mirror siblings
    (the shared vertex map makes them pass the same vertices), so the total is
    at most 2^-m."""
    big, small = pair.big, pair.small
    t = trace(big)
    # weighted count of small-diagram paths of length m, by image vertex
    counts = {0: Fraction(1)}  # small vertex -> path count
    for n in range(1, m + 1):
        nxt = {}
        for f in range(small.edge_count(n)):
            e = small.edge(n, f)
            if e.source in counts:
                nxt[e.target] = nxt.get(e.target, Fraction(0)) + counts[e.source]
        counts = nxt
    level_weights = t.values(m)
    exact = t.is_exact
    total = Fraction(0) if exact else None
    for w, count in counts.items():
        v = pair.vertex_image(m, w)
        term = count * level_weights[v]
        total = term if total is None else total + term
    bound = Fraction(1, 2**m)
    ok = (total <= bound) if exact else (total.hi <= bound)
    return {"mass": total, "bound": bound, "ok": ok, "exact": exact}


# -- attractor catalog ---------------------------------------------------------------


CATALOG_SHAPES = ("cube", "code", "gasket", "carpet-cube")


def attractor_catalog(shape: str, param: int | None = None):
    """Curated even/odd topological invariants of the catalog attractors."""
    if shape == "cube":
        return {"k0": Z, "k1": ZERO, "contractible": True}
    if shape == "code":
        k = param or 2
        return {"k0": cont_func("C"), "k1": ZERO, "contractible": False}
    if shape == "gasket":
        return {"k0": Z, "k1": Z_INF, "contractible": False}
    if shape == "carpet-cube":
        return {"k0": direct_sum(Z, Z_INF), "k1": ZERO, "contractible": False}
    raise KeyError(f"unknown catalog shape {shape!r}; known: {CATALOG_SHAPES}")


def _identity_core_group(a: DpsAssignment) -> GroupExpr:
    """The ordered group of the identity-labeled subdiagram (the single-path
    case gives the integers)."""
    d = a.diagram
    depth = d.depth if d.depth is not None else d.materialized_depth
    per_level = [
        sum(1 for i in range(d.edge_count(n)) if a.is_identity_edge(n, i))
        for n in range(1, depth + 1)
    ]
    if all(c == 1 for c in per_level):
        return Z
    from .groups import limit

    return limit("identity-subdiagram")


def dps_invariants(a: DpsAssignment, shape: str, a_k0: GroupExpr | None = None, param=None) -> InvariantReport:
    """The two short exact sequences of the extension, with the tensor factors
    computed over the catalog and the collapse/splitting rules applied."""
    issues = validate_assignment(a)
    if issues:
        raise ValueError(f"assignment invalid: {issues[0]}")
    cat = attractor_catalog(shape, param)
    if a_k0 is None:
        a_k0 = _identity_core_group(a)
    base_k0 = identify_group(a.diagram)
    base_sym = f"K0(base) = {base_k0}"

    right0 = tensor(a_k0, quotient_by_unit(cat["k0"]))
    right1 = tensor(a_k0, cat["k1"])

    seqs = []
    quotients = []
    tags = []

    if cat["contractible"]:
        tags.append("contractible attractor: both inclusions are isomorphisms")

    # even sequence: 0 -> K0(base) -> K0(ext) -> A (x) (K^0(C)/Z) -> 0
    if right0 == ZERO:
        k0_mid = base_k0
        split0 = "yes"
        note0 = "outer term vanishes: inclusion is an isomorphism"
    elif is_free_abelian(right0):
        k0_mid = direct_sum(base_k0, right0)
        split0 = "yes"
        note0 = "outer term is free abelian, so the sequence splits"
    else:
        k0_mid = f"extension of {right0} by {base_k0}"
        split0 = "unknown"
        note0 = ""
        quotients.append((f"K0(ext) / {base_sym}", right0))
    seqs.append(ExactSequence(base_k0, k0_mid, right0, split0, note0))

    # odd sequence: 0 -> Z -> K1(ext) -> A (x) K^-1(C) -> 0
    if right1 == ZERO:
        k1_mid = Z
        split1 = "yes"
        note1 = "outer term vanishes: inclusion is an isomorphism"
    elif is_free_abelian(right1):
        k1_mid = direct_sum(Z, right1)
        split1 = "yes"
        note1 = "outer term is free abelian, so the sequence splits"
    else:
        k1_mid = f"extension of {right1} by Z"
        split1 = "unknown"
        note1 = ""
        quotients.append(("K1(ext) / Z", right1))
    seqs.append(ExactSequence(Z, k1_mid, right1, split1, note1))

    return InvariantReport(
        k0=k0_mid,
        k1=k1_mid,
        k0_order=f"contains {base_sym} as the image of the inclusion",
        traces="traces of the base system pull back bijectively",
        exact_sequences=tuple(seqs),
        quotients=tuple(quotients),
        tags=tuple(tags),
    )
