"""Symbolic abelian groups: free parts, localizations Z[1/m], the group of
eventually-zero integer sequences, C(X,Z), quotients by a canonical copy of Z,
direct limits, and the tensor/quotient rewriting the reports rely on.

Expressions are normalized on construction so that structural equality agrees
with the intended isomorphism on the whole catalog: direct sums are flattened
and sorted, free ranks merged, and Z[1/m] is keyed by the radical of m (so
Z[1/4] equals Z[1/2])."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GroupExpr:
    kind: str
    data: tuple = ()

    def __str__(self):
        return _render(self)

    def __repr__(self):
        return f"GroupExpr<{_render(self)}>"


ZERO = GroupExpr("zero")
Z = GroupExpr("free", (1,))
Z_INF = GroupExpr("zinf")

_SUM_ORDER = {"free": 0, "loc": 1, "zinf": 2, "cfz": 3, "quot": 4, "bigsum": 5, "limit": 6, "tensor": 7}


def free(rank: int) -> GroupExpr:
    if rank < 0:
        raise ValueError("negative rank")
    return ZERO if rank == 0 else GroupExpr("free", (rank,))


def radical(m: int) -> int:
    if m < 1:
        raise ValueError("need m >= 1")
    out, p, rest = 1, 2, m
    while p * p <= rest:
        if rest % p == 0:
            out *= p
            while rest % p == 0:
                rest //= p
        p += 1
    return out * (rest if rest > 1 else 1)


def localized(m: int) -> GroupExpr:
    """Z[1/m], keyed by the radical of m."""
    r = radical(m)
    return Z if r == 1 else GroupExpr("loc", (r,))


def cont_func(space_tag: str) -> GroupExpr:
    """C(space, Z) for a totally disconnected compact space."""
    return GroupExpr("cfz", (space_tag,))


def limit(tag: str) -> GroupExpr:
    return GroupExpr("limit", (tag,))


def direct_sum(*parts) -> GroupExpr:
    flat = []
    for g in parts:
        if g.kind == "zero":
            continue
        if g.kind == "sum":
            flat.extend(g.data)
        else:
            flat.append(g)
    rank = sum(g.data[0] for g in flat if g.kind == "free")
    rest = [g for g in flat if g.kind != "free"]
    # countably many copies absorb each other (but not the finite free part,
    # which reports keep decomposed)
    if sum(1 for g in rest if g.kind == "zinf") > 1:
        rest = [g for g in rest if g.kind != "zinf"] + [Z_INF]
    if rank:
        rest.append(free(rank))
    if not rest:
        return ZERO
    rest.sort(key=lambda g: (_SUM_ORDER.get(g.kind, 9), g.data))
    if len(rest) == 1:
        return rest[0]
    return GroupExpr("sum", tuple(rest))


def big_sum(g: GroupExpr) -> GroupExpr:
    """Countable direct sum of copies of g."""
    if g.kind == "zero":
        return ZERO
    if g.kind in ("free", "zinf"):
        return Z_INF
    return GroupExpr("bigsum", (g,))


def tensor(a: GroupExpr, b: GroupExpr) -> GroupExpr:
    if a.kind == "zero" or b.kind == "zero":
        return ZERO
    if a == Z:
        return b
    if b == Z:
        return a
    if a.kind == "free":
        return _free_tensor(a.data[0], b)
    if b.kind == "free":
        return _free_tensor(b.data[0], a)
    if a.kind == "zinf":
        return big_sum(b)
    if b.kind == "zinf":
        return big_sum(a)
    if a.kind == "loc" and b.kind == "loc":
        return localized(a.data[0] * b.data[0])
    if a.kind == "sum":
        return direct_sum(*(tensor(part, b) for part in a.data))
    if b.kind == "sum":
        return direct_sum(*(tensor(a, part) for part in b.data))
    return GroupExpr("tensor", (a, b))


def _free_tensor(rank: int, g: GroupExpr) -> GroupExpr:
    if g.kind == "free":
        return free(rank * g.data[0])
    return direct_sum(*([g] * rank))


def quotient_by_unit(g: GroupExpr) -> GroupExpr:
    """g modulo the canonical copy of Z generated by the unit.

    The rewrite assumes the unit spans a free direct summand, which holds for
    every catalog value; anything else stays a formal quotient."""
    if g.kind == "free":
        return free(g.data[0] - 1)
    if g.kind == "sum":
        parts = list(g.data)
        for i, part in enumerate(parts):
            if part.kind == "free":
                parts[i] = free(part.data[0] - 1)
                return direct_sum(*parts)
    if g.kind == "zero":
        raise ValueError("the zero group has no unit class")
    return GroupExpr("quot", (g,))


def is_free_abelian(g: GroupExpr) -> bool:
    """Detectably free abelian: free parts, Z^inf, and sums of those."""
    if g.kind in ("zero", "free", "zinf"):
        return True
    if g.kind == "sum":
        return all(is_free_abelian(p) for p in g.data)
    return False


def _render(g: GroupExpr) -> str:
    if g.kind == "zero":
        return "0"
    if g.kind == "free":
        r = g.data[0]
        return "Z" if r == 1 else f"Z^{r}"
    if g.kind == "loc":
        return f"Z[1/{g.data[0]}]"
    if g.kind == "zinf":
        return "Z^inf"
    if g.kind == "cfz":
        return f"C({g.data[0]},Z)"
    if g.kind == "quot":
        return f"{_render(g.data[0])}/Z"
    if g.kind == "limit":
        return f"lim<{g.data[0]}>"
    if g.kind == "sum":
        return " (+) ".join(_render(p) for p in g.data)
    if g.kind == "bigsum":
        return f"(+)_N {_render(g.data[0])}"
    if g.kind == "tensor":
        return f"({_render(g.data[0])}) (x) ({_render(g.data[1])})"
    raise ValueError(f"unknown kind {g.kind}")


def parse_group(text: str) -> GroupExpr:
    """Inverse of str() on the forms the reports emit (sums of atoms)."""
    text = text.strip()
    if " (+) " in text:
        return direct_sum(*(parse_group(t) for t in text.split(" (+) ")))
    if text == "0":
        return ZERO
    if text == "Z":
        return Z
    if text == "Z^inf":
        return Z_INF
    if text.startswith("Z^"):
        return free(int(text[2:]))
    if text.startswith("Z[1/") and text.endswith("]"):
        return localized(int(text[4:-1]))
    if text.endswith("/Z"):
        inner = parse_group(text[:-2])
        return GroupExpr("quot", (inner,))
    if text.startswith("C(") and text.endswith(",Z)"):
        return cont_func(text[2:-3])
    if text.startswith("lim<") and text.endswith(">"):
        return limit(text[4:-1])
    raise ValueError(f"cannot parse group expression {text!r}")
