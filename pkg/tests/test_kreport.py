"""Symbolic invariant reports for the catalog inputs."""
from fractions import Fraction

import pytest

from bratteli import catalog
from bratteli.groups import (
    Z,
    ZERO,
    Z_INF,
    big_sum,
    cont_func,
    direct_sum,
    free,
    localized,
    parse_group,
    quotient_by_unit,
    tensor,
)
from bratteli.kreport import (
    GroupExpr,
    attractor_catalog,
    dps_invariants,
    factor_invariants,
    measure_vanishing,
)


# -- group expression algebra ---------------------------------------------------


def test_localization_normalized_by_radical():
    assert localized(4) == localized(2)
    assert localized(12) == localized(6)
    assert localized(1) == Z
    assert str(localized(8)) == "Z[1/2]"


def test_direct_sum_normalization():
    assert direct_sum(Z, ZERO, Z) == free(2)
    assert direct_sum(Z_INF, Z) == direct_sum(Z, Z_INF)
    assert direct_sum() == ZERO
    assert str(direct_sum(Z, Z_INF)) == "Z (+) Z^inf"


def test_tensor_rules():
    assert tensor(Z, localized(2)) == localized(2)
    assert tensor(free(3), Z) == free(3)
    assert tensor(free(2), free(3)) == free(6)
    assert tensor(Z_INF, Z) == Z_INF
    assert tensor(Z_INF, free(5)) == Z_INF
    assert tensor(ZERO, cont_func("C")) == ZERO
    assert tensor(Z, quotient_by_unit(cont_func("C"))) == quotient_by_unit(cont_func("C"))
    for g in (Z, free(4), Z_INF, localized(2), cont_func("C")):
        assert tensor(Z, g) == g


def test_tensor_distributes_over_catalog_sums():
    g = direct_sum(Z, Z_INF)
    assert tensor(Z, g) == g
    assert tensor(free(2), g) == direct_sum(free(2), Z_INF)


def test_quotient_rules():
    assert quotient_by_unit(Z) == ZERO
    assert quotient_by_unit(free(3)) == free(2)
    assert quotient_by_unit(direct_sum(Z, Z_INF)) == Z_INF
    q = quotient_by_unit(cont_func("C"))
    assert q.kind == "quot"
    assert str(q) == "C(C,Z)/Z"


def test_big_sum():
    assert big_sum(Z) == Z_INF
    assert big_sum(free(7)) == Z_INF
    assert big_sum(ZERO) == ZERO


def test_parse_round_trip():
    for g in (Z, ZERO, free(3), localized(2), Z_INF, direct_sum(Z, Z_INF), quotient_by_unit(cont_func("C"))):
        assert parse_group(str(g)) == g


# -- factor invariants -------------------------------------------------------------


def test_factor_invariants_binary():
    rep = factor_invariants(catalog.binary_pair())
    assert rep.k0 == localized(2)
    assert rep.k1 == Z
    assert any("product form" in t for t in rep.tags)
    assert any("minimal" in t for t in rep.tags)


def test_factor_invariants_quad():
    rep = factor_invariants(catalog.quad_pair())
    assert rep.k0 == localized(2)
    assert rep.k1 == localized(2)
    assert any("product form" in t for t in rep.tags)


def test_factor_invariants_three():
    rep = factor_invariants(catalog.three_pair())
    assert rep.k0 == localized(3)
    assert rep.k1 == Z
    assert not any("product form" in t for t in rep.tags)


def test_factor_invariants_trace_line():
    rep = factor_invariants(catalog.binary_pair())
    assert "1/2" in rep.traces


# -- measure vanishing ----------------------------------------------------------------


def test_measure_vanishing_quad_pair():
    for m in (1, 5, 20):
        out = measure_vanishing(catalog.quad_pair(), m)
        assert out["exact"]
        assert out["mass"] == Fraction(1, 2**m)
        assert out["ok"]


def test_measure_vanishing_binary_pair():
    out = measure_vanishing(catalog.binary_pair(), 7)
    assert out["mass"] == Fraction(1, 2**7)
    assert out["ok"]


def test_measure_vanishing_monotone():
    masses = [measure_vanishing(catalog.quad_pair(), m)["mass"] for m in range(1, 12)]
    assert all(a > b for a, b in zip(masses, masses[1:]))


# -- attractor catalog ------------------------------------------------------------------


def test_attractor_catalog_values():
    assert attractor_catalog("cube") == {"k0": Z, "k1": ZERO, "contractible": True}
    assert attractor_catalog("gasket") == {"k0": Z, "k1": Z_INF, "contractible": False}
    assert attractor_catalog("carpet-cube") == {
        "k0": direct_sum(Z, Z_INF),
        "k1": ZERO,
        "contractible": False,
    }
    code = attractor_catalog("code", 2)
    assert code["k0"] == cont_func("C")
    assert code["k1"] == ZERO
    with pytest.raises(KeyError):
        attractor_catalog("pentagon")


# -- extension invariants ------------------------------------------------------------------


def test_dps_invariants_cube():
    a = catalog.assignment_by_name("cube1", depth=4)
    rep = dps_invariants(a, "cube")
    assert rep.k0 == parse_group("Z[1/2]") or rep.k0.kind == "limit"
    s0, s1 = rep.exact_sequences
    assert s0.right == ZERO and s1.right == ZERO
    assert s0.split == s1.split == "yes"
    assert rep.k1 == Z
    assert any("contractible" in t for t in rep.tags)


def test_dps_invariants_code():
    a = catalog.assignment_by_name("code2", depth=4)
    rep = dps_invariants(a, "code", param=2)
    assert rep.k1 == Z
    assert rep.quotients
    desc, g = rep.quotients[0]
    assert g == quotient_by_unit(cont_func("C"))
    s0, _ = rep.exact_sequences
    assert s0.split == "unknown"


def test_dps_invariants_gasket():
    a = catalog.assignment_by_name("gasket", depth=4)
    rep = dps_invariants(a, "gasket")
    assert rep.k1 == direct_sum(Z, Z_INF)
    s0, s1 = rep.exact_sequences
    assert s0.right == ZERO  # quotient of Z by its unit vanishes
    assert s1.split == "yes"


def test_dps_invariants_carpet_cube():
    a = catalog.assignment_by_name("carpet-cube", depth=2)
    rep = dps_invariants(a, "carpet-cube")
    s0, s1 = rep.exact_sequences
    assert s0.right == Z_INF
    assert s0.split == "yes"
    assert isinstance(rep.k0, GroupExpr) and Z_INF in (rep.k0,) + tuple(
        rep.k0.data if rep.k0.kind == "sum" else ()
    )
    assert rep.k1 == Z


def test_dps_invariants_single_identity_core():
    a = catalog.assignment_by_name("cube1", depth=3)
    from bratteli.kreport import _identity_core_group

    assert _identity_core_group(a) == Z


def test_dps_invariants_rejects_invalid():
    from bratteli.diagram import Diagram, Edge
    from bratteli.dps import DpsAssignment

    d = Diagram([1, 1], [[Edge(0, 0, 0), Edge(0, 0, 1)]])
    bad = DpsAssignment(d, catalog.interval_halves(), [[(0,), (1,)]])
    with pytest.raises(ValueError):
        dps_invariants(bad, "cube")
