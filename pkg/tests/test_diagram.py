"""Diagram construction, validation, telescoping, incidence matrices."""
import pytest

from bratteli import catalog
from bratteli.diagram import (
    Diagram,
    DepthError,
    Edge,
    has_full_edge_connections,
    incidence_matrix,
    is_properly_ordered,
    path_counts,
    telescope,
    validate,
)
from bratteli.exact import mat_mul
from bratteli.pathspace import enumerate_paths


def test_full_shift_is_valid():
    assert validate(catalog.full_shift(2)) == []
    assert validate(catalog.full_shift(3)) == []


def test_missing_incoming_edge_reported():
    # level-2 vertex 1 receives nothing
    d = Diagram(
        [1, 2, 2],
        [
            [Edge(0, 0, 0), Edge(0, 1, 0)],
            [Edge(0, 0, 0), Edge(1, 0, 1)],
        ],
    )
    rules = {v.rule for v in validate(d)}
    assert "no-incoming" in rules


def test_bad_rank_reported():
    d = Diagram([1, 1], [[Edge(0, 0, 0), Edge(0, 0, 2)]])
    assert {v.rule for v in validate(d)} == {"bad-ranks"}


def test_two_roots_reported():
    d = Diagram([2, 1], [[Edge(0, 0, 0), Edge(1, 0, 1)]])
    assert "root" in {v.rule for v in validate(d)}


def test_catalog_diagrams_valid():
    for name in ("2inf", "3inf", "4inf", "chain", "fibonacci", "ladder"):
        assert validate(catalog.diagram_by_name(name)) == [], name


def test_full_edge_connections():
    assert has_full_edge_connections(catalog.full_shift(2), 10)
    assert has_full_edge_connections(catalog.fibonacci_diagram(), 10) is False
    assert has_full_edge_connections(catalog.ladder_diagram(), 10) is False


def test_incidence_matrix_basic():
    assert incidence_matrix(catalog.full_shift(2), 1) == [[2]]
    fib = catalog.fibonacci_diagram()
    assert incidence_matrix(fib, 2) == [[1, 1], [1, 0]]
    assert incidence_matrix(fib, 5) == [[1, 1], [1, 0]]


def test_incidence_level_out_of_range():
    d = Diagram([1, 1], [[Edge(0, 0, 0)]])
    with pytest.raises(DepthError):
        incidence_matrix(d, 2)


def test_telescope_full_shift_doubles():
    t = telescope(catalog.full_shift(2), stride=2)
    assert t.levels == (1, 1)
    assert len(t.edges_at(1)) == 4
    assert t.is_stationary
    t3 = telescope(catalog.full_shift(3), stride=2)
    assert len(t3.edges_at(5)) == 9


def test_telescope_identity_cuts():
    d = catalog.full_shift(2)
    assert telescope(d, stride=1) == d
    fin = Diagram([1, 1, 1], [[Edge(0, 0, 0), Edge(0, 0, 1)]] * 2)
    assert telescope(fin, cuts=[1, 2]) == fin


def test_telescope_matrix_is_product():
    fib = catalog.fibonacci_diagram()
    t = telescope(fib, cuts=[1], stride=3)
    a = incidence_matrix(fib, 2)
    expected = mat_mul(mat_mul(a, a), a)
    got = incidence_matrix(t, 2)
    assert [[int(x) for x in row] for row in got] == [
        [int(x) for x in row] for row in expected
    ]


def test_telescope_matrix_product_exhaustive_small_levels():
    d = catalog.fibonacci_diagram()
    for hi in range(2, 7):
        t = telescope(d, cuts=[1], stride=hi - 1)
        prod = incidence_matrix(d, 2)
        for _ in range(hi - 2):
            prod = mat_mul(incidence_matrix(d, 2), prod)
        assert incidence_matrix(t, 2) == [[int(x) for x in row] for row in prod]


def test_telescope_path_count_preserved():
    d = catalog.full_shift(2)
    t = telescope(d, stride=2)
    assert len(enumerate_paths(t, 3)) == len(enumerate_paths(d, 6))


def test_telescope_of_valid_is_valid():
    for name in ("2inf", "3inf", "fibonacci"):
        d = catalog.diagram_by_name(name)
        assert validate(telescope(d, cuts=[1], stride=2)) == []


def test_telescope_cut_beyond_depth():
    d = Diagram([1, 1], [[Edge(0, 0, 0)]])
    with pytest.raises(DepthError):
        telescope(d, cuts=[3])


def test_telescoped_order_matches_odometer():
    # chains through two binary levels, deepest edge most significant
    t = telescope(catalog.full_shift(2), stride=2)
    from bratteli.diagram import telescope_chain_map

    chains = telescope_chain_map(catalog.full_shift(2), 0, 2)
    ranks = {t.edge(1, i).rank: chains[i] for i in range(4)}
    assert ranks == {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)}


def test_path_counts():
    assert path_counts(catalog.full_shift(2), 5) == (32,)
    assert path_counts(catalog.fibonacci_diagram(), 2) == (2, 1)


def test_proper_order_full_shift():
    r = is_properly_ordered(catalog.full_shift(2), 6)
    assert r.kind == "yes"
    assert r.max_prefix == (1,) * 6
    assert r.min_prefix == (0,) * 6
    r3 = is_properly_ordered(catalog.full_shift(3), 4)
    assert r3.kind == "yes"
    assert r3.max_prefix == (2,) * 4


def test_proper_order_fibonacci():
    # rank-2 stationary block with a single edge into the second vertex: one
    # of the extreme maps is forced into a 2-cycle, so two extreme paths exist
    r = is_properly_ordered(catalog.fibonacci_diagram(), 6)
    assert r.kind == "no"


def test_not_properly_ordered():
    # two vertices, each with a self-feeding maximal chain
    block = [Edge(0, 0, 0), Edge(1, 0, 1), Edge(1, 1, 0), Edge(0, 1, 1)]
    d = Diagram([1, 2, 2], [[Edge(0, 0, 0), Edge(0, 1, 0)], block], stationary_from=2)
    # max into 0 comes from 1, max into 1 comes from 0: the extreme map is a
    # 2-cycle, so two all-max paths exist
    assert is_properly_ordered(d, 6).kind == "no"


def test_ladder_not_properly_ordered():
    assert is_properly_ordered(catalog.ladder_diagram(), 6).kind == "no"


def test_roundtrip_dict():
    from bratteli.diagram import from_dict, to_dict

    for name in ("2inf", "fibonacci", "ladder"):
        d = catalog.diagram_by_name(name)
        assert from_dict(to_dict(d)) == d
