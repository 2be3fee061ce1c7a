from __future__ import annotations

import numpy as np
import pytest

from mubforge import semifield as S
from mubforge import spread as SP
from mubforge.ff import Space, field_for_order


def test_rref_and_rank():
    M = np.array([[1, 2, 0], [2, 4, 0], [0, 1, 1]])
    assert SP.rank(M, 5) == 2
    R = SP.rref(M, 5)
    assert R.shape == (2, 3) and R[0, 0] == 1


def test_symplectic_form_properties():
    W = SP.SymplecticSpace(Space(field_for_order(9), 1))
    z = np.arange(W.size)
    F = W.form(z[:, None], z[None, :])
    assert np.array_equal(F, (-F.T) % W.p)
    assert np.all(np.diag(F) == 0)
    # nondegenerate: only 0 is orthogonal to everything
    assert np.flatnonzero(~np.any(F, axis=1)).tolist() == [0]
    assert np.array_equal(W.gram, (-W.gram.T) % W.p)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_desarguesian(q):
    sp = SP.desarguesian_spread(q)
    assert len(sp) == q + 1
    assert SP.is_spread(sp).passed
    assert SP.is_symplectic(sp).passed
    assert SP.slope_closure_test(sp)


@pytest.mark.parametrize("name,q,symplectic", [
    ("albert-symplectic", 27, True), ("knuth", 9, True), ("thas-payne", 9, True),
    ("dickson", 9, False), ("cohen-ganley", 9, False), ("albert", 27, False),
])
def test_semifield_spreads(name, q, symplectic):
    sp = SP.spread_from_presemifield(S.catalog(name, q))
    assert SP.is_spread(sp).passed
    assert SP.is_symplectic(sp).passed is symplectic
    assert SP.slope_closure_test(sp)


def test_json_round_trip():
    sp = SP.spread_from_presemifield(S.catalog("knuth", 9))
    back = SP.spread_from_json(sp.to_json())
    assert back.same_members(sp)
    assert SP.is_spread(back).passed
    with pytest.raises(SP.SpreadError):
        SP.spread_from_json({**sp.to_json(), "form": "other"})


def test_planted_overlapping_member():
    sp = SP.desarguesian_spread(5)
    W = sp.space
    # x -> 2x + [x == 1] read on a basis is x -> 3x, which duplicates another member
    h = W.V.ctx.mul(2, W.V.points())
    bad = SP.graph_member(W, W.V.ctx.add(h, np.where(W.V.points() == 1, 1, 0)), "planted")
    members = list(sp.members)
    members[2] = bad
    planted = SP.Spread(W, members, "planted")
    assert not SP.is_spread(planted).passed


def test_planted_non_isotropic_but_disjoint():
    # over GF(3)^2 -> W of dim 4: a non-symmetric slope matrix gives a non-isotropic member
    V = Space(field_for_order(3), 2)
    W = SP.SymplecticSpace(V)
    B = np.array([[1, 0, 0, 1], [0, 1, 0, 0]])
    sp = SP.Spread(W, [SP.make_member(W, B)], "planted")
    rep = SP.is_symplectic(sp)
    assert not rep.passed
    assert rep.failures[0]["check"] == "isotropic"


def test_missing_member_fails_coverage():
    sp = SP.desarguesian_spread(7)
    short = SP.Spread(sp.space, sp.members[:-1], "short")
    rep = SP.is_spread(short)
    assert not rep.passed
    assert {f["check"] for f in rep.failures} >= {"member_count", "coverage"}


def test_bblp_q27():
    sp = SP.bblp_spread(27)
    assert sp.details["paths_agree"]
    assert SP.orbit_census(sp.space, sp) == [1, 1, 13, 13]
    assert SP.is_spread(sp).passed and SP.is_symplectic(sp).passed
    assert not SP.slope_closure_test(sp)
    F = field_for_order(27)
    u = F.elements()
    assert np.array_equal(SP.bblp_beta(F, 1, SP.bblp_alpha(F, 1, u)), u)
    assert np.array_equal(SP.bblp_alpha(F, 1, SP.bblp_beta(F, 1, u)), u)


def test_bblp_rejects_bad_q():
    with pytest.raises((SP.SpreadError, S.SemifieldError)):
        SP.bblp_spread(9)


def test_suzuki_q8():
    sp = SP.suzuki_spread(8)
    assert len(sp) == 65
    assert SP.is_spread(sp).passed
    assert SP.is_symplectic(sp).passed
    with pytest.raises(SP.SpreadError):
        SP.suzuki_spread(4)


def test_suzuki_matrix_singular_g_planted():
    F = field_for_order(8)
    k = SP.suzuki_k(8)
    a, g, b = SP.suzuki_matrix(F, k, 3, 5)
    assert g != 0
    # a member built from a zero g collapses: (x, g x) with g = 0 meets the horizontal member
    W = SP.SymplecticSpace(Space(F, 2))
    zero = SP.graph_member(W, np.zeros(W.n, dtype=np.int64), "zero")
    sp = SP.suzuki_spread(8)
    members = list(sp.members)
    members[5] = zero
    assert not SP.is_spread(SP.Spread(W, members, "planted")).passed


@pytest.mark.parametrize("q,expected", [(3, 48), (5, 240)])
def test_automorphism_orders_agree(q, expected):
    sp = SP.desarguesian_spread(q)
    a = SP.automorphism_order(sp)
    b = SP.automorphism_order_oracle(sp)
    assert a.complete and b.complete
    assert a.order == b.order == expected
