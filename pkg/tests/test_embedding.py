"""Double-embedding conditions, fibre classification, saturated sets,
covering families, the double-point locus, and regularity witnesses."""
from fractions import Fraction

import pytest

from bratteli import catalog
from bratteli.embedding import (
    AnchorBlock,
    CylinderSet,
    EmbeddingPair,
    PairedPatch,
    TrimmedCylinder,
    check_conditions,
    classify_fibre,
    conditions_ok,
    covering_families,
    covers_big,
    enumerate_anchors,
    finite_shadow_partition,
    in_anchor_block,
    in_double_locus,
    in_thick_part,
    is_anchor,
    locus_side,
    one_sided_from,
    partner,
    regularity_witness,
    set_by_kind,
)
from bratteli.pathspace import LazyPath, Periodic, lazy_path

BIN = catalog.binary_pair()
THREE = catalog.three_pair()
QUAD = catalog.quad_pair()
LADDER = catalog.ladder_pair()

T2 = BIN.big
T3 = THREE.big


def p3(prefix, tail):
    return lazy_path(T3, prefix, Periodic(tuple(tail)))


def p2(prefix, tail):
    return lazy_path(T2, prefix, Periodic(tuple(tail)))


# -- conditions ---------------------------------------------------------------


def test_catalog_pairs_satisfy_conditions():
    for pair in (BIN, THREE, QUAD, LADDER):
        report = check_conditions(pair)
        assert all(r.ok for r in report), [str(r) for r in report if not r.ok]


def test_overlapping_edge_maps_fail_vi():
    bad = EmbeddingPair(
        catalog.single_path_diagram(),
        catalog.full_shift(2),
        vertex_levels=[[0], [0]],
        edge_levels_0=[[0]],
        edge_levels_1=[[0]],
    )
    report = {r.condition: r.ok for r in check_conditions(bad)}
    assert report["(vi) disjoint edge images"] is False


def test_mismatched_vertex_maps_fail_v():
    fib = catalog.fibonacci_diagram()
    small = catalog.single_path_diagram()
    bad = EmbeddingPair(
        small,
        fib,
        vertex_levels=[[0], [0], [0]],
        edge_levels_0=[[0], [0]],
        edge_levels_1=[[1], [1]],
        vertex_levels_1=[[0], [1], [1]],
    )
    report = {r.condition: r.ok for r in check_conditions(bad)}
    assert report["(v) shared vertex map"] is False


def test_covers_big():
    assert covers_big(BIN)
    assert covers_big(QUAD)
    assert not covers_big(THREE)
    assert not covers_big(LADDER)


# -- fibre classification -----------------------------------------------------------


def test_all_left_pairs_with_all_right():
    x = p2((), (0,))
    fc = classify_fibre(BIN, x)
    assert fc.kind == "pair"
    assert fc.n0 == 0
    assert fc.splitting_level == 1
    assert fc.partner == p2((), (1,))


def test_binary_carry_rule():
    # 0.1000... = 0.0111... : swap at the least level whose edge sits in the
    # other copy, flip the tail
    x = p2((1,), (0,))
    fc = classify_fibre(BIN, x)
    assert fc.kind == "pair"
    assert fc.n0 == 1
    assert fc.splitting_level == 1
    assert fc.partner == p2((0,), (1,))


def test_free_edge_then_tail():
    # rule with a free edge at n0: partner keeps it
    x = p3((2,), (0,))
    fc = classify_fibre(THREE, x)
    assert fc.kind == "pair"
    assert fc.n0 == 1
    assert fc.splitting_level == 2
    assert fc.partner == p3((2,), (1,))


def test_singleton_with_cofinal_free_edges():
    x = p3((), (2,))
    assert classify_fibre(THREE, x).kind == "singleton"
    y = p3((), (0, 2))
    assert classify_fibre(THREE, y).kind == "singleton"


def test_alternating_embedded_tail_is_singleton():
    x = p2((), (0, 1))
    assert classify_fibre(BIN, x).kind == "singleton"


def test_partner_involution_with_same_split():
    samples = [
        p2((), (0,)),
        p2((1,), (0,)),
        p2((0, 1, 1), (0,)),
        p2((1, 0, 1), (1,)),
        p3((2, 1), (0,)),
        p3((0, 2, 0), (1,)),
    ]
    for x in samples:
        pair = BIN if x.diagram is T2 else THREE
        fc = classify_fibre(pair, x)
        assert fc.kind == "pair"
        back = classify_fibre(pair, fc.partner)
        assert back.kind == "pair"
        assert back.partner == x
        assert back.splitting_level == fc.splitting_level


def test_quad_pair_fibres():
    # tails through the two-edge copy: the mirror flips 0<->2 and 1<->3
    big = QUAD.big
    x = lazy_path(big, (3,), Periodic((0, 1)))
    fc = classify_fibre(QUAD, x)
    assert fc.kind == "pair"
    assert fc.partner == lazy_path(big, (1,), Periodic((2, 3)))


def test_binary_expansion_oracle_small():
    # the gluing agrees with identifying binary expansions of the same angle
    for bits in range(2**6):
        prefix = tuple((bits >> i) & 1 for i in range(6))
        for t in (0, 1):
            x = p2(prefix, (t,))
            fc = classify_fibre(BIN, x)
            expected = _binary_partner(prefix, t)
            assert fc.kind == "pair"
            got = tuple(fc.partner.edge_at(n) for n in range(1, 9))
            assert got == expected[:8]


def _binary_partner(prefix, tail_bit):
    seq = list(prefix) + [tail_bit] * 10
    if tail_bit == 0:
        last = max((i for i, b in enumerate(seq) if b == 1), default=None)
        if last is None:
            return tuple([1] * 16)
        out = seq[:last] + [0] + [1] * 16
    else:
        last = max((i for i, b in enumerate(seq) if b == 0), default=None)
        if last is None:
            return tuple([0] * 16)
        out = seq[:last] + [1] + [0] * 16
    return tuple(out[:16])


# -- anchors ------------------------------------------------------------------------


def test_anchor_basics():
    assert is_anchor(THREE, ())
    assert is_anchor(THREE, (2,))
    assert not is_anchor(THREE, (0,))
    assert not is_anchor(THREE, (1, 1))


def test_enumerate_anchors_counts():
    assert enumerate_anchors(THREE, 2) == [(), (2,), (0, 2), (1, 2), (2, 2)]
    assert len(enumerate_anchors(THREE, 3)) == 14
    assert enumerate_anchors(BIN, 5) == [()]


def test_ladder_anchors_end_in_diagonal():
    anchors = enumerate_anchors(LADDER, 3)
    assert () in anchors
    for p in anchors:
        if p:
            e = LADDER.big.edge(len(p), p[-1])
            assert LADDER.embedded_side(len(p), p[-1]) is None
            assert e.target == 1


def test_anchor_block_membership():
    x = p3((2,), (0,))
    assert in_anchor_block(THREE, x, (2,))
    y = p3((2, 0, 2), (0,))
    assert not in_anchor_block(THREE, y, (2,))
    z = p3((), (0, 1))
    assert in_anchor_block(THREE, z, ())


def test_anchor_blocks_disjoint():
    anchors = enumerate_anchors(THREE, 2)
    family = _generating_family(THREE, 5)
    for x in family:
        hits = [p for p in anchors if in_anchor_block(THREE, x, p)]
        assert len(hits) <= 1


# -- saturated sets -----------------------------------------------------------------


def _generating_family(pair, depth):
    from bratteli.pathspace import enumerate_paths

    big = pair.big
    k = big.edge_count(big.stationary_from)
    blocks = [(i,) for i in range(k)] + [(i, j) for i in range(k) for j in range(k) if i != j]
    out = []
    for n in range(depth + 1):
        for prefix in enumerate_paths(big, n):
            for b in blocks:
                out.append(lazy_path(big, prefix, Periodic(b)))
    return out


def test_saturation_of_set_families():
    family = _generating_family(THREE, 4)
    sets = []
    for p in [(2,), (2, 2)]:
        sets.append(CylinderSet(THREE, p))
    for p in [(0,), (1,), (0, 1)]:
        sets.append(TrimmedCylinder(THREE, p))
    for p in enumerate_anchors(THREE, 2):
        sets.append(AnchorBlock(THREE, p))
    _, fam1 = covering_families(THREE, 2)
    sets.extend(fam1)
    for s in sets:
        for x in family:
            if s.contains(x):
                assert s.contains(partner(THREE, x)), (s, x)


def test_one_sided_set_excluded_from_trimmed():
    u = set_by_kind(THREE, "trimmed", p=(0,))
    d0 = set_by_kind(THREE, "one-sided", p=(0,), j=0)
    x = p3((0,), (0,))
    assert d0.contains(x)
    assert not u.contains(x)


def test_patch_shape_validation():
    with pytest.raises(ValueError):
        PairedPatch(THREE, (0, 0), (1, 0))  # q runs through copy 0
    PairedPatch(THREE, (0, 0), (1, 1))  # fully mirrored: fine
    PairedPatch(THREE, (2, 0), (2, 1))  # free swap edge
    PairedPatch(THREE, (1, 0), (0, 1))  # swapped embedded edge


# -- covering families ---------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_covering_families_cover_and_disjoint(n):
    fam0, fam1 = covering_families(THREE, n)
    family = _generating_family(THREE, n + 3)
    for x in family:
        hits0 = sum(1 for s in fam0 if s.contains(x))
        hits1 = sum(1 for s in fam1 if s.contains(x))
        assert hits0 <= 1, x
        assert hits1 <= 1, x
        assert hits0 + hits1 >= 1, x


def test_covering_family_shapes():
    fam0, fam1 = covering_families(THREE, 1)
    kinds0 = sorted(type(s).__name__ for s in fam0)
    assert kinds0 == ["CylinderSet", "TrimmedCylinder", "TrimmedCylinder"]
    assert all(isinstance(s, PairedPatch) for s in fam1)
    # mirrored pair of full runs plus one swap position choice per free/copy-1 edge
    assert len(fam1) == 3


# -- double locus --------------------------------------------------------------------


def test_double_locus_membership():
    x = p2((1, 1, 0), (0,))
    y = p2((0, 0, 1), (0,))
    assert in_double_locus(BIN, (x, y))
    assert locus_side(BIN, (x, y)) == 0
    z = p2((), (0, 1))
    assert not in_double_locus(BIN, (z, z))


def test_locus_side_one():
    x = p2((0,), (1,))
    assert locus_side(BIN, (x, x)) == 1


def test_thick_part_levels():
    x = p2((1, 1, 1, 1, 0), (0,))  # one-sided from level 6... actually 5? edges: 1,1,1,1,0,0,...
    y = p2((1, 1, 1, 1, 1), (0,))  # one-sided (copy 0) from level 6
    pairxy = (x, y)
    assert in_double_locus(BIN, pairxy)
    assert in_thick_part(BIN, pairxy, 5)
    assert in_thick_part(BIN, pairxy, 8)
    assert not in_thick_part(BIN, pairxy, 4)


def test_thick_part_monotone():
    x = p3((2, 0, 0), (0,))
    y = p3((0, 1, 2, 0), (0,))
    pairxy = (x, y)
    vals = [in_thick_part(THREE, pairxy, n) for n in range(1, 10)]
    assert vals == sorted(vals)  # False..False True..True is monotone here


# -- regularity witnesses ---------------------------------------------------------------


def test_regularity_witness_carry_pair():
    x = p2((1,), (0,))
    x2 = p2((0,), (1,))
    report = regularity_witness(BIN, (x, x), (x2, x2), Fraction(1, 8), samples=16, seed=0)
    assert report.ok, report.detail
    assert report.k == 4
    assert report.samples >= 16
    assert report.member((x, x))
    assert report.member((x2, x2))


def test_regularity_witness_large_eps():
    x = p2((1,), (0,))
    x2 = p2((0,), (1,))
    report = regularity_witness(BIN, (x, x), (x2, x2), Fraction(2), samples=8, seed=1)
    assert report.ok
    assert report.k == 2  # shape constraints alone force the level


def test_regularity_witness_both_cases_seen():
    x = p2((1,), (0,))
    x2 = p2((0,), (1,))
    report = regularity_witness(BIN, (x, x), (x2, x2), Fraction(1, 8), samples=40, seed=3)
    assert report.hausdorff_cases > 0
    assert report.diameter_cases > 0


def test_regularity_witness_rejects_non_fibre():
    x = p2((1,), (0,))
    with pytest.raises(ValueError):
        regularity_witness(BIN, (x, x), (x, x), Fraction(1, 4))


# -- finite shadows ----------------------------------------------------------------------


def test_finite_shadow_partition_binary():
    paths, orbits = finite_shadow_partition(BIN, 2, side=0)
    assert len(paths) == 4
    # the partition covers all 16 index pairs exactly once
    covered = sorted(ab for o in orbits for ab in o)
    assert covered == sorted((a, b) for a in range(4) for b in range(4))
    # the partner-truncation map is the 4-cycle of the adic predecessor, so
    # the whole diagonal collapses into one constraint class
    idx = {p: i for i, p in enumerate(paths)}
    zz = (idx[(0, 0)], idx[(0, 0)])
    oo = (idx[(1, 1)], idx[(1, 1)])
    diag_orbit = next(o for o in orbits if zz in o)
    assert oo in diag_orbit
    assert len(diag_orbit) == 4
