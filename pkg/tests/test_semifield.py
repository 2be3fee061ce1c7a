from __future__ import annotations

import numpy as np
import pytest

from mubforge import semifield as S
from mubforge.ff import Space, field_for_order

NATIVE = [(name, e["native_q"][0]) for name, e in S.CATALOG.items()
          if e["kind"] in ("commutative", "symplectic", "commutative+symplectic")
          and e["native_q"][0] <= 27]

REQUIRED = {"field", "albert", "bkla", "dickson", "knuth", "cohen-ganley", "thas-payne", "ganley",
            "penttila-williams", "suzuki", "bblp", "coulter-matthews", "pseudo-planar"}


def test_catalog_lists_required_families():
    names = {e["name"] for e in S.catalog_listing()}
    assert REQUIRED <= names
    for e in S.catalog_listing():
        assert e["constraints"] and e["native_q"] and e["reference"]


@pytest.mark.parametrize("name,q", NATIVE)
def test_native_members_are_presemifields(name, q):
    s = S.catalog(name, q)
    rep = S.verify_presemifield(s, samples=20000)
    assert rep.passed, rep.failures
    if s.symplectic:
        assert S.isotropy_check(s).passed
    if s.commutative:
        pts = s.space.points()
        x, y = pts[:, None], pts[None, :min(s.n, 50)]
        assert np.array_equal(s.mul(x, y), s.mul(y, x))


@pytest.mark.parametrize("name,q", [("field", 5), ("field", 9), ("albert", 27)])
def test_knuth_dual_matches_partner(name, q):
    c = S.catalog(name, q)
    d = S.knuth_dual(c)
    assert S.verify_presemifield(d).passed
    assert S.isotropy_check(d).passed
    partner = S.PARTNERS.get(name)
    if partner:
        ref = S.catalog(partner, q)
        assert np.array_equal(ref.table(), d.table())
    assert S.symplectic_coefficient_symmetry(c.ctx, d.coeffs)


def test_even_dual_is_symplectic():
    c = S.catalog("field", 16)
    d = S.knuth_dual_even(c)
    assert S.isotropy_check(d).passed
    assert S.verify_presemifield(d).passed


def test_commutative_not_symplectic_two_dim():
    for name in ("dickson", "cohen-ganley"):
        s = S.catalog(name, 9)
        assert not S.isotropy_check(s).passed


def test_planted_zero_divisor_in_table():
    s = S.catalog("field", 9)
    T = s.table().copy()
    T[4, 7] = 0
    bad = S.from_table("corrupted", s.space, T)
    rep = S.verify_presemifield(bad)
    assert not rep.passed
    checks = {f["check"] for f in rep.failures}
    assert "no_zero_divisors" in checks


def test_planted_distributivity_defect():
    s = S.catalog("albert", 27)
    T = s.table().copy()
    T[3, 5] = s.ctx.add(T[3, 5], 1)
    rep = S.verify_presemifield(S.from_table("corrupted", s.space, T))
    assert not rep.passed
    assert any("distributive" in f["check"] for f in rep.failures)


def test_catalog_rejects_invalid_parameters():
    with pytest.raises(S.CatalogError):
        S.catalog("ganley", 9)
    with pytest.raises(S.CatalogError):
        S.catalog("albert", 9)
    with pytest.raises(S.CatalogError):
        S.catalog("dickson", 9, j=1)
    with pytest.raises(S.CatalogError):
        S.catalog("no-such-family", 9)


def test_json_round_trip():
    s = S.catalog("knuth", 9)
    t = S.presemifield_from_json(s.to_json())
    assert np.array_equal(s.table(), t.table())
    c = S.from_coeffs("custom", field_for_order(27), {(0, 1): 1, (1, 0): 1}, commutative=True)
    d = S.presemifield_from_json(c.to_json())
    assert np.array_equal(c.table(), d.table())


@pytest.mark.parametrize("reading,passes_iso", [("verbatim", True), ("alternate", False)])
def test_penttila_williams_symplectic_readings(reading, passes_iso):
    s = S.catalog("penttila-williams", 243, reading=reading)
    assert S.verify_presemifield(s, samples=20000).passed
    assert S.isotropy_check(s).passed is passes_iso


def test_penttila_williams_commutative_readings():
    good = S.catalog("penttila-williams-commutative", 243, reading="verbatim")
    bad = S.catalog("penttila-williams-commutative", 243, reading="alternate")
    assert S.verify_presemifield(good, samples=20000).passed
    assert not S.verify_presemifield(bad, samples=20000).passed


# -- planar and pseudo-planar functions -------------------------------------

def test_planar_power_functions():
    F = field_for_order(9)
    assert S.planar_test(S.power_function(F, 2)).passed
    assert not S.planar_test(S.power_function(F, 3)).passed
    assert S.quadratic_test(S.power_function(F, 4)).passed
    assert not S.quadratic_test(S.power_function(F, 5)).passed


def test_coulter_matthews_planar():
    f = S.coulter_matthews(243, 3)
    assert S.planar_test(f).passed
    with pytest.raises(S.SemifieldError):
        S.coulter_matthews(243, 1)


def test_planar_from_presemifield_round_trip():
    c = S.catalog("albert", 27)
    f = S.planar_from_presemifield(c)
    assert S.planar_test(f).passed
    coeffs = S.commutative_coeffs(f)
    x, y = np.indices((27, 27))
    # f(x + y) - f(x) - f(y) = 2 (x * y) for the recovered form
    F = c.ctx
    lhs = F.sub(F.sub(f.values[F.add(x, y)], f.values[x]), f.values[y])
    assert np.array_equal(lhs, F.smul(2, S.eval_form(F, coeffs, x, y)))
    assert np.array_equal(S.eval_form(F, coeffs, x, y), c.table())


def test_pseudoplanar_sweeps():
    quad, other = S.search_pseudoplanar(field_for_order(8))
    assert len(quad) == 8 and other == []
    quad4, other4 = S.search_pseudoplanar(field_for_order(4))
    assert quad4 == [(0,)] and other4 == []


def test_pseudoplanar_commutative_round_trip():
    F = field_for_order(8)
    f = S.planar_from_monomials(F, [(1, 0, 1), (1, 1, 2)], "pseudo-planar")
    assert S.pseudo_planar_test(f).passed
    c, rep = S.comm_from_pseudoplanar(f)
    assert rep.passed and S.verify_presemifield(c).passed
    star, g, rep2 = S.pseudoplanar_from_presemifield(c)
    assert rep2.passed and S.pseudo_planar_test(g).passed


def test_planted_non_pseudoplanar():
    F = field_for_order(8)
    f = S.power_function(F, 7, "pseudo-planar")
    assert not S.pseudo_planar_test(f).passed


def test_planar_json_round_trip():
    f = S.power_function(field_for_order(27), 2)
    g = S.planar_fn_from_json(f.to_json())
    assert np.array_equal(f.values, g.values)


def test_from_table_shape_check():
    with pytest.raises(S.SemifieldError):
        S.from_table("x", Space(field_for_order(3), 1), np.zeros((2, 2)))
