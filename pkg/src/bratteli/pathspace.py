"""Finite and lazily-infinite paths on a diagram, with the 2^-n ultrametric.

An infinite path is stored exactly as a finite prefix plus a tail descriptor.
Tails come in five kinds: all-maximal, all-minimal, a repeating edge block,
the image of a smaller diagram's tail under one side of a double embedding,
and the identity-labeled continuation used by extension assignments.  Every
"for all levels >= n" question is decided on the descriptor, never by
truncation, so distances, tail equivalence, and fibre computations are exact.

On a stationary diagram every tail resolves to a repeating block, and the
canonical form of a path is the shortest prefix followed by the primitive
block; path equality is then a syntactic check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .diagram import Diagram


class UndecidableTail(ValueError):
    """Raised when a question about an infinite tail cannot be settled from
    the descriptors (for example past the depth of a finite diagram)."""


# -- tail descriptors -------------------------------------------------------------


@dataclass(frozen=True)
class AllMax:
    def literal(self):
        return "allmax"


@dataclass(frozen=True)
class AllMin:
    def literal(self):
        return "allmin"


@dataclass(frozen=True)
class Periodic:
    block: tuple

    def __post_init__(self):
        object.__setattr__(self, "block", tuple(self.block))
        if not self.block:
            raise ValueError("empty periodic block")

    def literal(self):
        return "periodic:[" + ",".join(str(i) for i in self.block) + "]"


@dataclass(frozen=True)
class Embedded:
    side: int
    inner: object  # tail over the embedded diagram
    pair: object  # EmbeddingPair

    def literal(self):
        return f"embedded:{self.side}:{self.inner.literal()}"


@dataclass(frozen=True)
class AllIdentity:
    assignment: object  # DpsAssignment

    def literal(self):
        return "identity"


def primitive_block(block):
    """Shortest block generating the same cyclic sequence."""
    n = len(block)
    for p in range(1, n + 1):
        if n % p == 0 and all(block[i] == block[i % p] for i in range(n)):
            return tuple(block[:p])
    return tuple(block)


def _tail_kind_key(tail):
    if isinstance(tail, Periodic):
        return ("periodic", tail.block)
    if isinstance(tail, AllMax):
        return ("allmax",)
    if isinstance(tail, AllMin):
        return ("allmin",)
    if isinstance(tail, AllIdentity):
        return ("identity",)
    if isinstance(tail, Embedded):
        return ("embedded", tail.side, _tail_kind_key(tail.inner))
    raise TypeError(f"unknown tail {tail!r}")


def _unique_extreme_step(d, level, vertex, which):
    """The unique maximal/minimal edge leaving ``vertex`` at ``level``."""
    block = d.edges_at(level)
    found = []
    for i, e in enumerate(block):
        if e.source != vertex:
            continue
        extreme = d.max_edge_into(level, e.target) if which == "max" else d.min_edge_into(level, e.target)
        if extreme == i:
            found.append(i)
    if len(found) != 1:
        raise UndecidableTail(
            f"all-{which} continuation from vertex {vertex} at level {level} is not unique"
        )
    return found[0]


def tail_step(d, tail, level, vertex, offset):
    """Edge index the tail produces at ``level`` (``offset`` levels past its
    start) when the path sits at ``vertex`` one level earlier."""
    if isinstance(tail, Periodic):
        return tail.block[offset % len(tail.block)]
    if isinstance(tail, AllMax):
        return _unique_extreme_step(d, level, vertex, "max")
    if isinstance(tail, AllMin):
        return _unique_extreme_step(d, level, vertex, "min")
    if isinstance(tail, AllIdentity):
        return tail.assignment.identity_step(level, vertex)
    if isinstance(tail, Embedded):
        return tail.pair.embedded_tail_step(tail, level, vertex, offset)
    raise TypeError(f"unknown tail {tail!r}")


def walk_tail(d, tail, start_level, start_vertex, upto_level):
    """Materialize tail edges on levels start_level..upto_level."""
    edges = []
    vertex = start_vertex
    for n in range(start_level, upto_level + 1):
        idx = tail_step(d, tail, n, vertex, n - start_level)
        edges.append(idx)
        vertex = d.edge(n, idx).target
    return edges


# -- lazy paths --------------------------------------------------------------------


class LazyPath:
    """An exact infinite path: root prefix of edge indices plus a tail.

    The canonical form uses the shortest prefix realizing the tail pattern;
    on stationary diagrams the tail is always the primitive repeating block.
    """

    def __init__(self, diagram: Diagram, prefix, tail):
        self.diagram = diagram
        self.prefix = tuple(prefix)
        self.tail = tail
        self._edges = list(self.prefix)
        self._sig_cache = {}
        self._check_prefix()
        self._canonicalize()
        self._check_tail()

    def _check_prefix(self):
        d = self.diagram
        at = 0
        for n, idx in enumerate(self.prefix, start=1):
            e = d.edge(n, idx)
            if e.source != at:
                raise ValueError(f"prefix not composable at level {n}")
            at = e.target

    def _check_tail(self):
        if isinstance(self.tail, Periodic):
            if not _periodic_block_fits(self.diagram, self.tail.block, len(self.prefix) + 1, self.prefix):
                raise ValueError("periodic block does not fit after the prefix")
        if isinstance(self.tail, Embedded) and self.tail.pair.big != self.diagram:
            raise ValueError("embedded tail refers to a different diagram")
        if isinstance(self.tail, AllIdentity) and self.tail.assignment.diagram != self.diagram:
            raise ValueError("identity tail refers to a different diagram")

    def prefix_end_vertex(self):
        at = 0
        for n, idx in enumerate(self.prefix, start=1):
            at = self.diagram.edge(n, idx).target
        return at

    def _canonicalize(self):
        d = self.diagram
        if d.is_stationary and not isinstance(self.tail, Periodic):
            kind, transient, block = self._resolve_periodic()
            self.prefix = self.prefix + transient
            self._edges = list(self.prefix)
            self.tail = Periodic(block)
        if isinstance(self.tail, Periodic):
            self.tail = Periodic(primitive_block(self.tail.block))
        while self.prefix:
            level = len(self.prefix)
            shorter = _absorb(d, self.tail, level, self.prefix[-1], self.prefix[:-1])
            if shorter is None:
                break
            self.tail = shorter
            self.prefix = self.prefix[:-1]
            self._edges = list(self.prefix)

    def _resolve_periodic(self):
        """Resolve any tail on a stationary diagram into transient + block by
        walking until the (vertex, tail-phase) state repeats."""
        d = self.diagram
        s = d.stationary_from
        start0 = len(self.prefix) + 1
        start = max(start0, s)
        head = []
        vertex = self.prefix_end_vertex()
        for n in range(start0, start):
            idx = tail_step(d, self.tail, n, vertex, n - start0)
            head.append(idx)
            vertex = d.edge(n, idx).target
        seen = {}
        edges = []
        level = start
        while True:
            state = (vertex, self._phase(level))
            if state in seen:
                break
            seen[state] = len(edges)
            idx = tail_step(d, self.tail, level, vertex, level - start0)
            edges.append(idx)
            vertex = d.edge(level, idx).target
            level += 1
        i = seen[state]
        return ("periodic", tuple(head) + tuple(edges[:i]), tuple(edges[i:]))

    def _phase(self, level):
        tail, start = self.tail, len(self.prefix) + 1
        if isinstance(tail, Periodic):
            return (level - start) % len(tail.block)
        if isinstance(tail, Embedded) and isinstance(tail.inner, Periodic):
            return (level - start) % len(tail.inner.block)
        return 0

    # materialization

    def edge_at(self, n: int) -> int:
        """Edge index at level n (n >= 1), from the prefix or the tail."""
        if n < 1:
            raise ValueError("levels start at 1")
        while len(self._edges) < n:
            level = len(self._edges) + 1
            vertex = 0 if level == 1 else self.diagram.edge(level - 1, self._edges[-1]).target
            start = len(self.prefix) + 1
            self._edges.append(tail_step(self.diagram, self.tail, level, vertex, level - start))
        return self._edges[n - 1]

    def vertex_at(self, n: int) -> int:
        """Vertex index at level n along the path (0 is the root)."""
        if n == 0:
            return 0
        return self.diagram.edge(n, self.edge_at(n)).target

    def truncate(self, n: int) -> tuple:
        """First n edges as a finite path."""
        return tuple(self.edge_at(k) for k in range(1, n + 1))

    # resolution: exact eventual behaviour of the edge stream

    def signature(self, from_level: int):
        """Edge stream from ``from_level`` on, as ("periodic", transient, block)
        or, on a finite diagram, ("finite", edges, tail_kind_key)."""
        if from_level not in self._sig_cache:
            self._sig_cache[from_level] = self._signature(from_level)
        return self._sig_cache[from_level]

    def _signature(self, from_level):
        d = self.diagram
        if d.depth is not None:
            edges = tuple(self.edge_at(n) for n in range(from_level, d.depth + 1))
            return ("finite", edges, _tail_kind_key(self.tail))
        # canonical stationary form: tail is Periodic after the prefix
        start = len(self.prefix) + 1
        block = self.tail.block
        if from_level >= start:
            off = (from_level - start) % len(block)
            return ("periodic", (), block[off:] + block[:off])
        head = tuple(self.edge_at(n) for n in range(from_level, start))
        return ("periodic", head, block)

    # comparisons

    def __eq__(self, other):
        if not isinstance(other, LazyPath):
            return NotImplemented
        if self.diagram != other.diagram:
            return False
        if self.diagram.is_stationary:
            return self.prefix == other.prefix and self.tail == other.tail
        return first_difference(self, other) is None

    def __hash__(self):
        return hash((self.prefix, _tail_kind_key(self.tail)))

    def __repr__(self):
        return f"LazyPath(prefix={list(self.prefix)}, tail={self.tail.literal()})"

    def literal(self):
        return "prefix=[" + ",".join(str(i) for i in self.prefix) + "] tail=" + self.tail.literal()


def _absorb(d, tail, level, edge_index, rest_prefix):
    """Tail shifted one level earlier absorbing the given prefix edge, or None."""
    if isinstance(tail, Periodic):
        if tail.block[-1] != edge_index:
            return None
        rotated = (tail.block[-1],) + tail.block[:-1]
        if not _periodic_block_fits(d, rotated, level, rest_prefix):
            return None
        return Periodic(rotated)
    if isinstance(tail, AllMax):
        return tail if d.is_maximal(level, edge_index) else None
    if isinstance(tail, AllMin):
        return tail if d.is_minimal(level, edge_index) else None
    if isinstance(tail, AllIdentity):
        return tail if tail.assignment.is_identity_edge(level, edge_index) else None
    if isinstance(tail, Embedded):
        inner_idx = tail.pair.edge_preimage(tail.side, level, edge_index)
        if inner_idx is None:
            return None
        inner = _absorb(tail.pair.small, tail.inner, level, inner_idx, None)
        return None if inner is None else Embedded(tail.side, inner, tail.pair)
    raise TypeError(f"unknown tail {tail!r}")


def _periodic_block_fits(d, block, start_level, rest_prefix):
    """The block must give existing, composable edges from start_level on."""
    if d.depth is not None:
        return False
    p = len(block)
    prev_target = None
    if rest_prefix is not None:
        prev_target = 0
        for n, idx in enumerate(rest_prefix, start=1):
            prev_target = d.edge(n, idx).target
    horizon = max(d.materialized_depth + p, start_level + 2 * p)
    for n in range(start_level, horizon + 1):
        idx = block[(n - start_level) % p]
        if idx >= d.edge_count(n):
            return False
        e = d.edge(n, idx)
        if prev_target is not None and e.source != prev_target:
            return False
        prev_target = e.target
    return True


def _shift_tail(d, tail, old_start, new_start):
    if new_start < old_start:
        raise ValueError("can only shift tails forward")
    if isinstance(tail, Periodic):
        off = (new_start - old_start) % len(tail.block)
        return Periodic(tail.block[off:] + tail.block[:off])
    if isinstance(tail, Embedded):
        return Embedded(tail.side, _shift_tail(tail.pair.small, tail.inner, old_start, new_start), tail.pair)
    return tail


def replace_head(x: LazyPath, new_head) -> LazyPath:
    """The path with its first len(new_head) edges replaced; the stream beyond
    is kept unchanged."""
    n = len(new_head)
    L = len(x.prefix)
    if n >= L:
        x.edge_at(n)  # force materialization so the splice point is legal
        tail = _shift_tail(x.diagram, x.tail, L + 1, n + 1)
        return LazyPath(x.diagram, new_head, tail)
    return LazyPath(x.diagram, tuple(new_head) + x.prefix[n:], x.tail)


# -- construction helpers ------------------------------------------------------------


def lazy_path(diagram, prefix, tail) -> LazyPath:
    return LazyPath(diagram, prefix, tail)


def constant_path(diagram, edge_index) -> LazyPath:
    """The path repeating one edge index forever (single-vertex diagrams)."""
    return LazyPath(diagram, (), Periodic((edge_index,)))


def max_path(diagram) -> LazyPath:
    return LazyPath(diagram, (), AllMax())


def min_path(diagram) -> LazyPath:
    return LazyPath(diagram, (), AllMin())


# -- metric and tail relation -----------------------------------------------------------


def _stream_at(sig, i):
    _, transient, block = sig
    if i < len(transient):
        return transient[i]
    return block[(i - len(transient)) % len(block)]


def first_difference(x: LazyPath, y: LazyPath):
    """Least level where the two paths disagree; None when they are equal."""
    mlen = max(len(x.prefix), len(y.prefix))
    for n in range(1, mlen + 1):
        if x.edge_at(n) != y.edge_at(n):
            return n
    start = mlen + 1
    sx, sy = x.signature(start), y.signature(start)
    if sx[0] == "finite":
        ex, ey = sx[1], sy[1]
        for i, (a, b) in enumerate(zip(ex, ey)):
            if a != b:
                return start + i
        if sx[2] == sy[2]:
            return None
        raise UndecidableTail("streams agree to depth but tails differ in kind")
    head = max(len(sx[1]), len(sy[1]))
    span = head + lcm(len(sx[2]), len(sy[2]))
    for i in range(span):
        if _stream_at(sx, i) != _stream_at(sy, i):
            return start + i
    return None


def path_distance(x: LazyPath, y: LazyPath) -> Fraction:
    """The ultrametric 2^-(length of the longest agreeing prefix)."""
    n = first_difference(x, y)
    if n is None:
        return Fraction(0)
    return Fraction(1, 2 ** (n - 1))


def tail_agreement(x: LazyPath, y: LazyPath):
    """Least n with x_k = y_k for all k >= n; None when not tail-equivalent."""
    mlen = max(len(x.prefix), len(y.prefix))
    start = mlen + 1
    sx, sy = x.signature(start), y.signature(start)
    if sx[0] == "finite":
        ex, ey = sx[1], sy[1]
        if sx[2] != sy[2]:
            raise UndecidableTail("tails differ in kind past the visible depth")
        if ex != ey:
            last = max(i for i, (a, b) in enumerate(zip(ex, ey)) if a != b)
            n = start + last + 1
        else:
            n = start
    else:
        head = max(len(sx[1]), len(sy[1]))
        span = head + lcm(len(sx[2]), len(sy[2]))
        diffs = [i for i in range(span) if _stream_at(sx, i) != _stream_at(sy, i)]
        if any(i >= head for i in diffs):
            return None  # a periodic disagreement recurs cofinally
        n = start + (diffs[-1] + 1 if diffs else 0)
    while n > 1 and x.edge_at(n - 1) == y.edge_at(n - 1):
        n -= 1
    return n


def in_relation_level(x: LazyPath, y: LazyPath, n: int) -> bool:
    """Stage-n tail equivalence: the paths agree from level n on."""
    a = tail_agreement(x, y)
    return a is not None and a <= n


def shell_index(x: LazyPath, y: LazyPath):
    """The unique n with the pair in stage n+1 but not stage n (0 on the
    diagonal); None when the pair is not tail-equivalent."""
    a = tail_agreement(x, y)
    return None if a is None else a - 1


def pair_distance(p1, p2) -> Fraction:
    """Metric on tail-equivalent pairs: coordinatewise max inside a common
    shell, and 1 across shells."""
    (x, y), (x2, y2) = p1, p2
    s1, s2 = shell_index(x, y), shell_index(x2, y2)
    if s1 is None or s2 is None:
        raise UndecidableTail("pair distance needs tail-equivalent pairs")
    if s1 != s2:
        return Fraction(1)
    return max(path_distance(x, x2), path_distance(y, y2))


# -- finite paths -----------------------------------------------------------------------


def path_target(d: Diagram, p, start_level=1):
    """End vertex of a finite path (edge indices starting at start_level)."""
    if not p:
        return 0
    at = d.edge(start_level, p[0]).source if start_level > 1 else 0
    for n, idx in enumerate(p, start=start_level):
        e = d.edge(n, idx)
        if e.source != at:
            raise ValueError(f"path not composable at level {n}")
        at = e.target
    return at


def enumerate_paths(d: Diagram, n: int):
    """All root paths of length n in lexicographic edge-index order."""
    paths = [((), 0)]
    for level in range(1, n + 1):
        block = d.edges_at(level)
        paths = [
            (p + (i,), e.target)
            for p, at in paths
            for i, e in enumerate(block)
            if e.source == at
        ]
    return [p for p, _ in sorted(paths)]


def extends(x: LazyPath, p) -> bool:
    """Does the path begin with the finite path p?"""
    return all(x.edge_at(n) == idx for n, idx in enumerate(p, start=1))


def cylinder_relation(p, q):
    """"disjoint" / "equal" / "p-inside-q" / "q-inside-p" for two cylinders."""
    k = min(len(p), len(q))
    if tuple(p[:k]) != tuple(q[:k]):
        return "disjoint"
    if len(p) == len(q):
        return "equal"
    return "q-inside-p" if len(p) < len(q) else "p-inside-q"
