"""Bratteli diagrams with ordered edges.

A diagram is a leveled directed graph: finitely many vertices at each level,
a single root at level 0, and edges running from level n-1 into level n.
Edges sharing a target carry order ranks 0..deg-1.  Infinite diagrams are
encoded as a finite prefix plus one repeating level block (``stationary_from``);
everything past the prefix reuses that block.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class VertexId:
    level: int
    index: int


@dataclass(frozen=True)
class EdgeId:
    level: int
    index: int


@dataclass(frozen=True)
class Edge:
    """One edge of a level block: source index at level n-1, target index at
    level n, and the order rank among edges sharing the target."""

    source: int
    target: int
    rank: int


class DepthError(ValueError):
    """Raised when an operation needs a level beyond a finite diagram's depth."""


class Diagram:
    """Immutable leveled graph; all operations on it are pure.

    ``levels[n]`` is the vertex count at level n (0 <= n <= L).
    ``edge_levels[n-1]`` is the tuple of edges at level n (1 <= n <= L).
    If ``stationary_from == s`` (then s == L is required), the level-s block
    repeats at every level > L, so the diagram is infinite.
    """

    def __init__(self, levels, edge_levels, stationary_from=None):
        self.levels = tuple(int(c) for c in levels)
        self.edge_levels = tuple(
            tuple(Edge(*e) if not isinstance(e, Edge) else e for e in block)
            for block in edge_levels
        )
        self.stationary_from = stationary_from
        if len(self.levels) != len(self.edge_levels) + 1:
            raise ValueError("need one vertex count per level, one edge block per level >= 1")
        if stationary_from is not None:
            s = stationary_from
            if not (1 <= s == len(self.edge_levels)):
                raise ValueError("stationary_from must name the last materialized level")
            if self.levels[s - 1] != self.levels[s]:
                raise ValueError("a repeating block needs equal vertex counts on both sides")
        self._in_edges_cache = {}
        self._incidence_cache = {}

    # -- basic accessors ---------------------------------------------------

    @property
    def is_stationary(self):
        return self.stationary_from is not None

    @property
    def depth(self):
        """Materialized depth for finite diagrams, None when infinite."""
        return None if self.is_stationary else len(self.edge_levels)

    @property
    def materialized_depth(self):
        return len(self.edge_levels)

    def check_level(self, n):
        if n < 1 or (self.depth is not None and n > self.depth):
            raise DepthError(f"level {n} outside diagram of depth {self.depth}")

    def vertex_count(self, n):
        if n < 0:
            raise ValueError("negative level")
        if n < len(self.levels):
            return self.levels[n]
        if self.is_stationary:
            return self.levels[-1]
        raise DepthError(f"level {n} outside diagram of depth {self.depth}")

    def edges_at(self, n):
        self.check_level(n)
        if n <= len(self.edge_levels):
            return self.edge_levels[n - 1]
        return self.edge_levels[self.stationary_from - 1]

    def edge(self, n, index):
        return self.edges_at(n)[index]

    def edge_count(self, n):
        return len(self.edges_at(n))

    def in_edges(self, n, target):
        """Edge indices at level n into the given target vertex, sorted by rank."""
        key = (min(n, len(self.edge_levels)) if self.is_stationary else n, target)
        if key not in self._in_edges_cache:
            block = self.edges_at(n)
            found = [(e.rank, i) for i, e in enumerate(block) if e.target == target]
            self._in_edges_cache[key] = tuple(i for _, i in sorted(found))
        return self._in_edges_cache[key]

    def out_edges(self, n, source):
        block = self.edges_at(n)
        return tuple(i for i, e in enumerate(block) if e.source == source)

    def min_edge_into(self, n, target):
        return self.in_edges(n, target)[0]

    def max_edge_into(self, n, target):
        return self.in_edges(n, target)[-1]

    def successor_index(self, n, index):
        """Next edge in rank order among those sharing the target; None if maximal."""
        e = self.edge(n, index)
        order = self.in_edges(n, e.target)
        pos = order.index(index)
        return None if pos == len(order) - 1 else order[pos + 1]

    def predecessor_index(self, n, index):
        e = self.edge(n, index)
        order = self.in_edges(n, e.target)
        pos = order.index(index)
        return None if pos == 0 else order[pos - 1]

    def is_maximal(self, n, index):
        return self.successor_index(n, index) is None

    def is_minimal(self, n, index):
        return self.predecessor_index(n, index) is None

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self.levels == other.levels
            and self.edge_levels == other.edge_levels
            and self.stationary_from == other.stationary_from
        )

    def __hash__(self):
        return hash((self.levels, self.edge_levels, self.stationary_from))

    def __repr__(self):
        tail = f", stationary_from={self.stationary_from}" if self.is_stationary else ""
        return f"Diagram(levels={list(self.levels)}{tail})"


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    rule: str
    locus: str
    detail: str

    def __str__(self):
        return f"{self.rule} at {self.locus}: {self.detail}"


def validate(d: Diagram) -> list[Violation]:
    """Check the diagram axioms; an empty report means the diagram is valid.

    Checked: one root vertex; edge endpoints inside their levels; every vertex
    emits an edge and every non-root vertex receives one; ranks into each
    vertex form 0..deg-1; a repeating block has matching vertex counts.
    """
    out = []
    if d.levels[0] != 1:
        out.append(Violation("root", "level 0", f"expected 1 vertex, found {d.levels[0]}"))
    last = d.materialized_depth
    for n in range(1, last + 1):
        block = d.edges_at(n)
        vlo, vhi = d.levels[n - 1], d.levels[n]
        for i, e in enumerate(block):
            if not (0 <= e.source < vlo):
                out.append(Violation("edge-source", f"edge ({n},{i})", f"source {e.source} not in 0..{vlo - 1}"))
            if not (0 <= e.target < vhi):
                out.append(Violation("edge-target", f"edge ({n},{i})", f"target {e.target} not in 0..{vhi - 1}"))
        for w in range(vhi):
            ranks = sorted(e.rank for e in block if e.target == w)
            if not ranks:
                out.append(Violation("no-incoming", f"vertex ({n},{w})", "no edge ends here"))
            elif ranks != list(range(len(ranks))):
                out.append(Violation("bad-ranks", f"vertex ({n},{w})", f"ranks {ranks} are not 0..{len(ranks) - 1}"))
        # every vertex one level down must emit an edge; at the last materialized
        # level of a finite diagram there is nothing to emit into
        for v in range(vlo):
            if not any(e.source == v for e in block):
                out.append(Violation("no-outgoing", f"vertex ({n - 1},{v})", "no edge starts here"))
    if d.is_stationary and d.levels[last - 1] != d.levels[last]:
        out.append(Violation("block-shape", f"level {last}", "repeating block must preserve the vertex count"))
    return out


def has_full_edge_connections(d: Diagram, depth: int) -> bool:
    """True iff every (source, target) vertex pair in consecutive levels up to
    ``depth`` (capped at the repeating block for infinite diagrams) is joined."""
    last = depth if d.depth is None else min(depth, d.depth)
    last = min(last, d.materialized_depth) if d.is_stationary else last
    for n in range(1, last + 1):
        block = d.edges_at(n)
        present = {(e.source, e.target) for e in block}
        for v in range(d.vertex_count(n - 1)):
            for w in range(d.vertex_count(n)):
                if (v, w) not in present:
                    return False
    return True


# -- incidence and path counts ------------------------------------------------


def incidence_matrix(d: Diagram, n: int) -> list[list[int]]:
    """A[w][v] = number of level-n edges from vertex v to vertex w."""
    d.check_level(n)
    key = min(n, d.materialized_depth) if d.is_stationary else n
    if key not in d._incidence_cache:
        rows = [[0] * d.vertex_count(n - 1) for _ in range(d.vertex_count(n))]
        for e in d.edges_at(n):
            rows[e.target][e.source] += 1
        d._incidence_cache[key] = rows
    return [row[:] for row in d._incidence_cache[key]]


def apply_incidence(d: Diagram, n: int, vec):
    """Multiply a level-(n-1) vector by the level-n incidence matrix."""
    a = incidence_matrix(d, n)
    return tuple(sum(row[v] * vec[v] for v in range(len(vec))) for row in a)


def path_counts(d: Diagram, n: int):
    """Number of root paths into each level-n vertex."""
    vec = (1,)
    for k in range(1, n + 1):
        vec = apply_incidence(d, k, vec)
    return vec


# -- telescoping ---------------------------------------------------------------


def _compose_block(d: Diagram, lo: int, hi: int):
    """Edges of the telescoped level spanning original levels lo+1..hi.

    Each new edge is a composable chain; its rank orders chains into a common
    target reverse-lexicographically in the original ranks, the deepest edge
    being most significant.
    """
    chains = [((), v) for v in range(d.vertex_count(lo))]
    for n in range(lo + 1, hi + 1):
        block = d.edges_at(n)
        chains = [
            (path + (i,), e.target)
            for path, at in chains
            for i, e in enumerate(block)
            if e.source == at
        ]
    raw = []
    for path, target in chains:
        source = d.edge(lo + 1, path[0]).source
        key = tuple(d.edge(lo + 1 + j, path[j]).rank for j in range(len(path)))[::-1]
        raw.append((target, key, source, path))
    edges = []
    chain_map = []
    for target in range(d.vertex_count(hi)):
        group = sorted((key, source, path) for t, key, source, path in raw if t == target)
        for rank, (key, source, path) in enumerate(group):
            edges.append(Edge(source, target, rank))
            chain_map.append(path)
    return tuple(edges), tuple(chain_map)


def telescope(d: Diagram, cuts=None, stride=None):
    """Contract the diagram to the given cut levels.

    ``cuts`` is a strictly increasing list of levels > 0; consecutive cuts are
    merged into one level of composed edge chains.  For a stationary diagram a
    ``stride`` may be given (optionally after finitely many explicit cuts) and
    the result is stationary with the stride-fold composed block.
    """
    cuts = list(cuts) if cuts else []
    if any(b <= a for a, b in zip([0] + cuts, cuts)):
        raise ValueError("cut levels must be positive and strictly increasing")
    if stride is not None and not d.is_stationary:
        raise ValueError("stride telescoping needs a stationary diagram")
    if d.depth is not None and cuts and cuts[-1] > d.depth:
        raise DepthError(f"cut level {cuts[-1]} exceeds depth {d.depth}")

    level_marks = [0] + cuts
    if stride is not None:
        level_marks = level_marks + [level_marks[-1] + stride]
    if len(level_marks) == 1:
        raise ValueError("nothing to telescope to")

    levels = [d.vertex_count(m) for m in level_marks]
    blocks = []
    for lo, hi in zip(level_marks, level_marks[1:]):
        block, _ = _compose_block(d, lo, hi)
        blocks.append(block)

    if stride is None:
        return Diagram(levels, blocks, None)
    # the final block spans `stride` consecutive original levels inside the
    # stationary part only if it starts at or past the prefix end
    start = level_marks[-2]
    if start + 1 < d.materialized_depth:
        raise ValueError("stride block must start inside the stationary part")
    return Diagram(levels, blocks, stationary_from=len(blocks))


def telescope_chain_map(d: Diagram, lo: int, hi: int):
    """Map from composed-edge index to the original edge-index chain lo+1..hi."""
    _, chain_map = _compose_block(d, lo, hi)
    return chain_map


# -- proper ordering -------------------------------------------------------------


@dataclass(frozen=True)
class ProperOrderResult:
    kind: str  # "yes" | "no" | "unknown"
    max_prefix: tuple = ()
    min_prefix: tuple = ()
    witness: str = ""


def _extreme_source(d: Diagram, n: int, target: int, which: str) -> int:
    idx = d.max_edge_into(n, target) if which == "max" else d.min_edge_into(n, target)
    return d.edge(n, idx).source


def extreme_path_prefix(d: Diagram, depth: int, which: str, end_vertex=None):
    """Edge indices of the unique all-max/all-min path into a level-``depth``
    vertex, walking the extreme incoming edges backwards."""
    vertex = 0 if end_vertex is None else end_vertex
    rev = []
    for n in range(depth, 0, -1):
        idx = d.max_edge_into(n, vertex) if which == "max" else d.min_edge_into(n, vertex)
        rev.append(idx)
        vertex = d.edge(n, idx).source
    return tuple(reversed(rev))


def _stationary_extreme_vertices(d: Diagram, which: str):
    """Vertices of the repeating block that lie on a cycle of the map sending a
    vertex to the source of its extreme incoming edge; each supports exactly one
    infinite extreme path."""
    s = d.stationary_from
    count = d.levels[s]
    sigma = {w: _extreme_source(d, s + 1, w, which) for w in range(count)}
    on_cycle = [w for w in range(count) if _is_cyclic(sigma, w)]
    return sigma, on_cycle


def _is_cyclic(sigma, w):
    cur = sigma[w]
    for _ in range(len(sigma)):
        if cur == w:
            return True
        cur = sigma[cur]
    return False


def _cycle_of(sigma, w):
    cyc, cur = [w], sigma[w]
    while cur != w:
        cyc.append(cur)
        cur = sigma[cur]
    return cyc


def _stationary_extreme_prefix(d: Diagram, which: str, cyclic_vertex: int, depth: int):
    """Prefix of the unique infinite extreme path through the given block cycle."""
    s = d.stationary_from
    sigma, _ = _stationary_extreme_vertices(d, which)
    cycle = _cycle_of(sigma, cyclic_vertex)
    period = len(cycle)
    # vertex occupied at level max(depth, s): walk the cycle backwards in time
    top = max(depth, s)
    steps = top - s
    vertex = cycle[(-steps) % period]
    prefix = extreme_path_prefix(d, top, which, end_vertex=vertex)
    return prefix[:depth]


def is_properly_ordered(d: Diagram, depth: int) -> ProperOrderResult:
    """Decide uniqueness of the all-maximal and all-minimal infinite paths.

    Exact for stationary diagrams (cycle analysis of the repeating block);
    for finite diagrams the answer refers to the materialized depth only.
    """
    if d.is_stationary:
        prefixes = {}
        for which in ("max", "min"):
            sigma, cyc = _stationary_extreme_vertices(d, which)
            if len(cyc) != 1:
                w = f"{which}: {len(cyc)} block vertices each carry an all-{which} path"
                return ProperOrderResult("no", witness=w)
            prefixes[which] = _stationary_extreme_prefix(d, which, cyc[0], depth)
        return ProperOrderResult("yes", prefixes["max"], prefixes["min"])
    hi = min(depth, d.depth)
    finals = {}
    for which in ("max", "min"):
        ends = list(range(d.vertex_count(hi)))
        if len(ends) != 1:
            return ProperOrderResult(
                "unknown",
                witness=f"{len(ends)} candidate all-{which} prefixes at depth {hi}",
            )
        finals[which] = extreme_path_prefix(d, hi, which, end_vertex=0)
    return ProperOrderResult("yes", finals["max"], finals["min"])


# -- serialization ---------------------------------------------------------------


def to_dict(d: Diagram) -> dict:
    out = {
        "levels": list(d.levels),
        "edges": [[[e.source, e.target, e.rank] for e in block] for block in d.edge_levels],
    }
    if d.is_stationary:
        out["stationary_from"] = d.stationary_from
    return out


def from_dict(data: dict) -> Diagram:
    return Diagram(
        data["levels"],
        [[Edge(*e) for e in block] for block in data["edges"]],
        data.get("stationary_from"),
    )
