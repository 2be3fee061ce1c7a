from __future__ import annotations

import numpy as np
import pytest

from mubforge import spread as SP
from mubforge.ff import Space, field_for_order
from mubforge.mub import build_even_symplectic, build_odd_symplectic, build_suzuki
from mubforge.pauli import (PauliCtx, PauliError, cartan_from_member, check_composition,
                            check_eigenvectors, check_K_conjugation, check_T_action, commutes,
                            dense, verify_decomposition)
from mubforge.semifield import catalog

SMALL = [2, 3, 4, 5, 7, 8, 9]


def ctx_for(q, dim=1):
    return PauliCtx(Space(field_for_order(q), dim))


@pytest.mark.parametrize("q", SMALL)
def test_composition_against_dense(q):
    rep = check_composition(ctx_for(q))
    assert rep.passed, rep.failures


@pytest.mark.parametrize("q", SMALL)
def test_T_action(q):
    assert check_T_action(ctx_for(q)).passed


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_K_conjugation(q):
    assert check_K_conjugation(ctx_for(q)).passed


def test_qubit_paulis():
    ctx = ctx_for(2)
    X, Z = dense(ctx.op(1, 0)), dense(ctx.op(0, 1))
    assert np.allclose(X, [[0, 1], [1, 0]])
    assert np.allclose(Z, [[1, 0], [0, -1]])
    assert not commutes(ctx.op(1, 0), ctx.op(0, 1))
    A = ctx.op(1, 1)
    assert np.allclose(dense(A @ A.inverse()), np.eye(2))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_orthogonal_decomposition_dense(q):
    sp = SP.desarguesian_spread(q)
    rep = verify_decomposition(PauliCtx(sp.space.V), sp)
    assert rep.passed, rep.failures
    assert "killing_dense" in " ".join(rep.counts)


def test_decomposition_two_dim_knuth():
    sp = SP.spread_from_presemifield(catalog("knuth", 3 ** 2))
    rep = verify_decomposition(PauliCtx(sp.space.V), sp, dense_check=False)
    assert rep.passed


def test_suzuki_decomposition_symbolic():
    sp = SP.suzuki_spread(8)
    rep = verify_decomposition(PauliCtx(sp.space.V), sp, dense_check=False)
    assert rep.passed
    assert rep.mode == "symbolic"


def test_non_isotropic_member_rejected():
    ctx = ctx_for(3, 2)
    W = ctx.W
    bad = SP.make_member(W, np.array([[1, 0, 0, 1], [0, 1, 0, 0]]))
    with pytest.raises(PauliError):
        cartan_from_member(ctx, bad)


@pytest.mark.parametrize("build", [
    lambda: build_odd_symplectic(catalog("field", 9)),
    lambda: build_odd_symplectic(catalog("knuth", 9)),
    lambda: build_even_symplectic(catalog("field", 8)),
])
def test_eigenvectors_exhaustive(build):
    rep = check_eigenvectors(build())
    assert rep.passed, rep.failures
    assert rep.details["bases_without_slope"] == 0


def test_suzuki_eigenvectors_sampled():
    rep = check_eigenvectors(build_suzuki(8), samples=10**4, seed=0)
    assert rep.passed
    assert rep.mode == "sampled"
