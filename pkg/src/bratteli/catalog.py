"""Stock diagrams, embedding pairs, function systems, and edge assignments.

These are the concrete inputs everything else in the package is exercised on:
full shifts k^∞, the Fibonacci diagram, the ladder diagram whose quotient is a
shrinking union of circles, the standard double embeddings, and the cube /
code-space / gasket / carpet-cube extension data.
"""
from __future__ import annotations

from fractions import Fraction

from .diagram import Diagram, Edge


def full_shift(k: int) -> Diagram:
    """One vertex per level, k edges per level, ranks 0..k-1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    block = [Edge(0, 0, r) for r in range(k)]
    return Diagram([1, 1], [block], stationary_from=1)


def single_path_diagram() -> Diagram:
    """One vertex and one edge per level; its path space is a point."""
    return full_shift(1)


def stationary_diagram(matrix, root_edges=None) -> Diagram:
    """Stationary diagram for a square incidence matrix A[w][v].

    The prefix connects the root once to every vertex unless ``root_edges``
    gives explicit per-vertex multiplicities.  Ranks into each vertex order the
    block edges by source index.
    """
    d = len(matrix)
    root_edges = root_edges or [1] * d
    lvl1 = []
    for w in range(d):
        for r in range(root_edges[w]):
            lvl1.append(Edge(0, w, r))
    block = []
    for w in range(d):
        rank = 0
        for v in range(d):
            for _ in range(matrix[w][v]):
                block.append(Edge(v, w, rank))
                rank += 1
    return Diagram([1, d, d], [lvl1, block], stationary_from=2)


def fibonacci_diagram() -> Diagram:
    return stationary_diagram([[1, 1], [1, 0]])


def ladder_diagram() -> Diagram:
    """Two vertices per level: a single chain along the top, two parallel edges
    along the bottom, and one diagonal from top to bottom at every level."""
    lvl1 = [Edge(0, 0, 0), Edge(0, 1, 0), Edge(0, 1, 1)]
    block = [
        Edge(0, 0, 0),  # top -> top
        Edge(1, 1, 0),  # bottom -> bottom, first copy
        Edge(1, 1, 1),  # bottom -> bottom, second copy
        Edge(0, 1, 2),  # diagonal top -> bottom
    ]
    return Diagram([1, 2, 2], [lvl1, block], stationary_from=2)


# -- embedding pairs -----------------------------------------------------------


def binary_pair():
    """2^∞ with the one-edge chain embedded on the left (edge 0) and on the
    right (edge 1); the quotient is a circle."""
    from .embedding import EmbeddingPair

    big = full_shift(2)
    small = single_path_diagram()
    return EmbeddingPair(
        small,
        big,
        vertex_levels=[[0], [0]],
        edge_levels_0=[[0]],
        edge_levels_1=[[1]],
    )


def three_pair():
    """3^∞ with the chain embedded as edges 0 and 1; edge 2 stays free."""
    from .embedding import EmbeddingPair

    big = full_shift(3)
    small = single_path_diagram()
    return EmbeddingPair(
        small,
        big,
        vertex_levels=[[0], [0]],
        edge_levels_0=[[0]],
        edge_levels_1=[[1]],
    )


def quad_pair():
    """4^∞ with the 2^∞ diagram embedded as edges {0,1} and {2,3}."""
    from .embedding import EmbeddingPair

    big = full_shift(4)
    small = full_shift(2)
    return EmbeddingPair(
        small,
        big,
        vertex_levels=[[0], [0]],
        edge_levels_0=[[0, 1]],
        edge_levels_1=[[2, 3]],
    )


def ladder_pair():
    """The ladder diagram with the chain embedded along the two parallel
    bottom edges; the quotient is a shrinking union of circles plus a point."""
    from .embedding import EmbeddingPair

    big = ladder_diagram()
    small = single_path_diagram()
    return EmbeddingPair(
        small,
        big,
        vertex_levels=[[0], [1], [1]],
        edge_levels_0=[[1], [1]],
        edge_levels_1=[[2], [2]],
    )


def pair_by_name(name: str):
    table = {
        "binary": binary_pair,
        "three": three_pair,
        "quad": quad_pair,
        "ladder": ladder_pair,
    }
    if name not in table:
        raise KeyError(f"unknown embedding pair {name!r}; try one of {sorted(table)}")
    return table[name]()


def diagram_by_name(name: str) -> Diagram:
    table = {
        "2inf": lambda: full_shift(2),
        "3inf": lambda: full_shift(3),
        "4inf": lambda: full_shift(4),
        "chain": single_path_diagram,
        "fibonacci": fibonacci_diagram,
        "ladder": ladder_diagram,
    }
    if name not in table:
        raise KeyError(f"unknown diagram {name!r}; try one of {sorted(table)}")
    return table[name]()


# -- function systems ------------------------------------------------------------


def interval_halves():
    """x/2 and (x+1)/2 on [0,1]; overlapping at the midpoint."""
    from .ifs import AffineMap, IfsSystem

    h = Fraction(1, 2)
    return IfsSystem(
        1,
        [AffineMap([[h]], [0]), AffineMap([[h]], [h])],
        hull=[(Fraction(0), Fraction(1))],
    )


def middle_thirds():
    """x/3 and x/3 + 2/3 on [0,1]; strongly separated with gap 1/3."""
    from .ifs import AffineMap, IfsSystem

    t = Fraction(1, 3)
    return IfsSystem(
        1,
        [AffineMap([[t]], [0]), AffineMap([[t]], [Fraction(2, 3)])],
        hull=[(Fraction(0), Fraction(1))],
    )


def cube_system(m: int):
    """The 2^m maps x -> (x + delta)/2, delta in {0,1}^m, on the unit m-cube."""
    from .ifs import AffineMap, IfsSystem

    h = Fraction(1, 2)
    mat = [[h if i == j else Fraction(0) for j in range(m)] for i in range(m)]
    maps = []
    for bits in range(2**m):
        delta = [Fraction((bits >> i) & 1, 2) for i in range(m)]
        maps.append(AffineMap(mat, delta))
    hull = [(Fraction(0), Fraction(1))] * m
    return IfsSystem(m, maps, hull=hull)


def gasket_system():
    """Right-angle gasket: x/2, x/2+(1/2,0), x/2+(0,1/2) on the unit square.

    The classical gasket uses an equilateral triangle; this rational model is
    homeomorphic to it and keeps every certificate exact.
    """
    from .ifs import AffineMap, IfsSystem

    h = Fraction(1, 2)
    mat = [[h, Fraction(0)], [Fraction(0), h]]
    z = Fraction(0)
    maps = [
        AffineMap(mat, [z, z]),
        AffineMap(mat, [h, z]),
        AffineMap(mat, [z, h]),
    ]
    return IfsSystem(2, maps, hull=[(z, Fraction(1))] * 2)


def carpet_cube_system():
    """The 26 maps x -> (x + delta)/3, delta in {0,1,2}^3 minus the center,
    on the unit 3-cube."""
    from .ifs import AffineMap, IfsSystem

    t = Fraction(1, 3)
    mat = [[t if i == j else Fraction(0) for j in range(3)] for i in range(3)]
    maps = []
    for a in range(3):
        for b in range(3):
            for c in range(3):
                if (a, b, c) == (1, 1, 1):
                    continue
                maps.append(AffineMap(mat, [Fraction(a, 3), Fraction(b, 3), Fraction(c, 3)]))
    return IfsSystem(3, maps, hull=[(Fraction(0), Fraction(1))] * 3)


def system_by_name(name: str):
    from .ifs import code_space_system

    table = {
        "interval-halves": interval_halves,
        "middle-thirds": middle_thirds,
        "cube1": lambda: cube_system(1),
        "cube2": lambda: cube_system(2),
        "cube3": lambda: cube_system(3),
        "gasket": gasket_system,
        "carpet-cube": carpet_cube_system,
        "code2": lambda: code_space_system(2),
        "code3": lambda: code_space_system(3),
    }
    if name not in table:
        raise KeyError(f"unknown function system {name!r}; try one of {sorted(table)}")
    return table[name]()


# -- extension assignments ---------------------------------------------------------


def _word_diagram(word_count_at, depth: int) -> Diagram:
    """Single-vertex diagram with word_count_at(n)+1 edges at level n."""
    levels = [1] * (depth + 1)
    blocks = []
    for n in range(1, depth + 1):
        count = word_count_at(n) + 1
        blocks.append([Edge(0, 0, r) for r in range(count)])
    return Diagram(levels, blocks, None)


def standard_assignment(system, depth: int):
    """Edge data for the stock extension over a single-vertex diagram.

    Level n carries every length-n composition word exactly once plus one
    identity edge placed at a middle rank, so the maximal and minimal edges
    always carry genuine contractions and the identity edges line up into an
    infinite path.
    """
    from .dps import DpsAssignment

    k = system.map_count
    diagram = _word_diagram(lambda n: k**n, depth)
    word_tables = []
    for n in range(1, depth + 1):
        count = k**n + 1
        id_rank = count // 2
        words = []
        wi = 0
        for rank in range(count):
            if rank == id_rank:
                words.append(None)
            else:
                words.append(_word_from_index(wi, k, n))
                wi += 1
        word_tables.append(words)
    return DpsAssignment(diagram, system, word_tables)


def _word_from_index(i: int, k: int, n: int):
    digits = []
    for _ in range(n):
        digits.append(i % k)
        i //= k
    return tuple(reversed(digits))


def assignment_by_name(name: str, depth: int):
    return standard_assignment(system_by_name(name), depth)
