"""The adic successor map on a properly ordered diagram, with orbits and the
finite tower enumeration it induces on paths of a fixed length."""
from __future__ import annotations

from .diagram import Diagram, EdgeId, extreme_path_prefix, is_properly_ordered
from .pathspace import (
    AllMax,
    AllMin,
    LazyPath,
    UndecidableTail,
    max_path,
    min_path,
    replace_head,
)


class OrderedSystem:
    """A properly ordered diagram with its extreme paths cached."""

    def __init__(self, diagram: Diagram, check_depth: int = 8):
        self.diagram = diagram
        result = is_properly_ordered(diagram, check_depth)
        if result.kind == "no":
            raise ValueError(f"diagram is not properly ordered: {result.witness}")
        self.order_check = result
        self.xmax = max_path(diagram)
        self.xmin = min_path(diagram)

    def __repr__(self):
        return f"OrderedSystem({self.diagram!r})"


def successor(d: Diagram, e: EdgeId):
    """Next edge among those sharing the target, None if maximal."""
    idx = d.successor_index(e.level, e.index)
    return None if idx is None else EdgeId(e.level, idx)


def predecessor(d: Diagram, e: EdgeId):
    idx = d.predecessor_index(e.level, e.index)
    return None if idx is None else EdgeId(e.level, idx)


def min_path_to(d: Diagram, level: int, vertex: int) -> tuple:
    """The unique root path of minimal edges into the given vertex."""
    return extreme_path_prefix(d, level, "min", end_vertex=vertex)


def max_path_to(d: Diagram, level: int, vertex: int) -> tuple:
    return extreme_path_prefix(d, level, "max", end_vertex=vertex)


def _carry_horizon(x: LazyPath) -> int:
    """Level beyond which an all-extreme tail pattern provably repeats."""
    d = x.diagram
    L = len(x.prefix)
    if d.is_stationary:
        period = len(x.tail.block)
        return max(L, d.materialized_depth) + period
    return d.depth


def _least_non_extreme(x: LazyPath, which: str):
    """Least level whose edge is not maximal (which="max") / minimal ("min");
    None when the whole path is extreme."""
    d = x.diagram
    test = d.is_maximal if which == "max" else d.is_minimal
    horizon = _carry_horizon(x)
    for n in range(1, horizon + 1):
        if not test(n, x.edge_at(n)):
            return n
    if d.is_stationary:
        return None  # a full period of extreme edges repeats forever
    if which == "max" and isinstance(x.tail, AllMax):
        return None
    if which == "min" and isinstance(x.tail, AllMin):
        return None
    raise UndecidableTail(f"no non-{which} edge within the visible depth")


def step(sys: OrderedSystem, x: LazyPath) -> LazyPath:
    """The adic successor: replace the least non-maximal edge by its order
    successor and reset everything below to minimal edges; the all-maximal
    path is sent to the all-minimal path."""
    d = sys.diagram
    n = _least_non_extreme(x, "max")
    if n is None:
        return sys.xmin
    succ = d.successor_index(n, x.edge_at(n))
    head = min_path_to(d, n - 1, d.edge(n, succ).source) + (succ,)
    return replace_head(x, head)


def inverse_step(sys: OrderedSystem, x: LazyPath) -> LazyPath:
    """Order-dual of :func:`step`; a two-sided inverse of it."""
    d = sys.diagram
    n = _least_non_extreme(x, "min")
    if n is None:
        return sys.xmax
    pred = d.predecessor_index(n, x.edge_at(n))
    head = max_path_to(d, n - 1, d.edge(n, pred).source) + (pred,)
    return replace_head(x, head)


def orbit(sys: OrderedSystem, x: LazyPath, steps: int, budget: int = 1_000_000):
    """Iterates x, step(x), ..., step^(steps)(x); negative steps iterate the
    inverse.  The budget bounds the total number of applications."""
    if abs(steps) > budget:
        raise ValueError(f"orbit of {steps} steps exceeds the budget {budget}")
    out = [x]
    cur = x
    advance = step if steps >= 0 else inverse_step
    for _ in range(abs(steps)):
        cur = advance(sys, cur)
        out.append(cur)
    return out


# -- finite towers --------------------------------------------------------------


def finite_successor(d: Diagram, p: tuple):
    """Successor of a finite path under the same carry rule; None when every
    edge is maximal."""
    for j in range(len(p)):
        n = j + 1
        if not d.is_maximal(n, p[j]):
            succ = d.successor_index(n, p[j])
            head = min_path_to(d, n - 1, d.edge(n, succ).source) + (succ,)
            return head + p[j + 1 :]
    return None


def tower_enumeration(sys: OrderedSystem, n: int):
    """All length-n root paths in adic order.

    The successor rule preserves the end vertex, so the paths split into one
    tower per level-n vertex; towers are concatenated in vertex order, each
    running from its all-minimal to its all-maximal path.
    """
    d = sys.diagram
    out = []
    for v in range(d.vertex_count(n)):
        p = min_path_to(d, n, v)
        while True:
            out.append(p)
            p = finite_successor(d, p)
            if p is None:
                break
    return out
