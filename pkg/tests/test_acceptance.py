"""One test per acceptance criterion; the summary prints a PASS/FAIL line for each."""

from __future__ import annotations

import numpy as np
import pytest

from mubforge import mub as M
from mubforge import semifield as S
from mubforge import spread as SP
from mubforge.ff import Space, field_for_order
from mubforge.gr4 import ring_for_degree, verify_ring
from mubforge.pauli import (PauliCtx, check_composition, check_eigenvectors, check_K_conjugation,
                            check_T_action, verify_decomposition)

criterion = pytest.mark.criterion


@criterion(1, "desarguesian odd q in {3,5,7,9,27}: full exact")
def test_criterion_01_desarguesian_odd(evidence):
    for q in (3, 5, 7, 9, 27):
        ms = M.build_odd_symplectic(S.catalog("field", q))
        assert len(ms.bases) == q + 1
        rep = M.verify_mub(ms, mode="full")
        assert rep.passed, rep.failures
        assert rep.details["certificates"] == [0, q]
        evidence[q] = rep.counts["cross_pairs"]


@criterion(2, "desarguesian even q in {2,4,8,16}: full exact; q=2 equals qubit X/Y/Z")
def test_criterion_02_desarguesian_even(evidence):
    for q in (2, 4, 8, 16):
        ms = M.build_even_symplectic(S.catalog("field", q))
        rep = M.verify_mub(ms, mode="full")
        assert rep.passed, rep.failures
        assert rep.details["certificates"] == [0, q]
        evidence[q] = rep.counts["cross_pairs"]
    qubit = M.compare_mub_sets(M.build_even_symplectic(S.catalog("field", 2)), M.build_qubit_reference())
    assert qubit["identical"]
    evidence["qubit"] = qubit["verdict"]


@criterion(3, "semifield catalog: axioms, symplecticity, exact MUBs; Ganley sampled 1e5")
def test_criterion_03_semifield_catalog(evidence):
    cases = [("albert", "albert-symplectic", 27), ("dickson", "knuth", 9),
             ("cohen-ganley", "thas-payne", 9)]
    for comm, symp, q in cases:
        c, s = S.catalog(comm, q), S.catalog(symp, q)
        for x in (c, s):
            rep = S.verify_presemifield(x)
            assert rep.passed and rep.mode == "exhaustive", (x.name, rep.failures)
        assert S.isotropy_check(s).passed
        sp = SP.spread_from_presemifield(s)
        assert SP.is_spread(sp).passed and SP.is_symplectic(sp).passed
        rep = M.verify_mub(M.build_odd_symplectic(s), mode="full")
        assert rep.passed, rep.failures
        evidence[symp] = rep.mode
    # Ganley n = 729
    c, s = S.catalog("ganley", 27), S.catalog("ganley-symplectic", 27)
    for x in (c, s):
        assert S.verify_presemifield(x, samples=10**6).passed
    sp = SP.spread_from_presemifield(s)
    assert SP.is_spread(sp).passed and SP.is_symplectic(sp).passed
    rep = M.verify_mub(M.build_odd_symplectic(s), mode="sampled", samples=10**5, seed=0)
    assert rep.passed and rep.n_failures == 0
    evidence["ganley"] = {"samples": rep.details["samples"], "seed": rep.details["seed"],
                          "certificates": rep.details["certificates"]}


@criterion(4, "Penttila-Williams n=3^10: axiom sampling, lazy sampled-exact 1e4 pairs")
def test_criterion_04_penttila_williams(evidence):
    readings = {}
    for reading in S.PW_READINGS:
        s = S.catalog("penttila-williams", 243, reading=reading)
        ok = S.verify_presemifield(s, samples=10**5).passed and S.isotropy_check(s).passed
        readings[reading] = ok
    passing = [r for r, ok in readings.items() if ok]
    assert passing == ["verbatim"]
    s = S.catalog("penttila-williams", 243, reading=passing[0])
    ms = M.build_odd_symplectic(s)
    assert ms.lazy and len(ms.bases) == 3**10 + 1
    rep = M.verify_mub(ms, mode="sampled", samples=10**4, seed=0)
    assert rep.passed and rep.n_failures == 0
    assert rep.details["construction"]["params"]["reading"] == "verbatim"
    evidence.update(readings=readings, certificates=rep.details["certificates"])


@criterion(5, "Suzuki q=8: spread over all 4095 points, full exact MUB verification")
def test_criterion_05_suzuki(evidence):
    sp = SP.suzuki_spread(8)
    rep = SP.is_spread(sp)
    assert rep.passed and rep.counts["coverage"] == 4095
    assert SP.is_symplectic(sp).passed
    mrep = M.verify_mub(M.build_suzuki(8), mode="full")
    assert mrep.passed, mrep.failures
    evidence.update(members=len(sp), cross_pairs=mrep.counts["cross_pairs"])


@criterion(6, "BBLP q=27: paths agree, beta inverts alpha, exact MUBs, non-semifield")
def test_criterion_06_bblp(evidence):
    sp = SP.bblp_spread(27)
    assert sp.details["paths_agree"]
    F = field_for_order(27)
    u = F.elements()
    assert np.array_equal(SP.bblp_beta(F, 1, SP.bblp_alpha(F, 1, u)), u)
    assert SP.is_spread(sp).passed and SP.is_symplectic(sp).passed
    rep = M.verify_mub(M.build_bblp(27), mode="full")
    assert rep.passed
    assert SP.slope_closure_test(sp) is False
    assert SP.slope_closure_test(SP.spread_from_presemifield(S.catalog("albert-symplectic", 27))) is True
    evidence["orbit_census"] = SP.orbit_census(sp.space, sp)


@criterion(7, "diagram commutativity: identical canonical sets")
def test_criterion_07_diagram_commutativity(evidence):
    c = S.catalog("albert", 27)
    v = M.compare_mub_sets(M.build_odd_planar(S.planar_from_presemifield(c)),
                           M.build_odd_symplectic(S.knuth_dual(c)))
    assert v["identical"]
    evidence["albert27"] = v["verdict"]
    for q in (4, 8, 16):
        c = S.catalog("field", q)
        v = M.compare_mub_sets(M.build_even_commutative(c), M.build_even_symplectic(S.knuth_dual_even(c)))
        assert v["identical"]
        evidence[f"even{q}"] = v["verdict"]
    F = field_for_order(8)
    f = S.planar_from_monomials(F, [(1, 0, 1), (1, 1, 2)], "pseudo-planar")
    comm, rep = S.comm_from_pseudoplanar(f)
    assert rep.passed
    v = M.compare_mub_sets(M.build_pseudoplanar(f), M.build_even_commutative(comm))
    assert v["identical"]
    evidence["pseudo8"] = v["verdict"]


@criterion(8, "Galois ring suite exhaustive for r <= 4")
def test_criterion_08_galois_ring(evidence):
    for r in (1, 2, 3, 4):
        rep = verify_ring(ring_for_degree(r))
        assert rep.passed, rep.failures
        evidence[r] = sum(rep.counts.values())


@criterion(9, "Pauli/Lie suite: dense oracles n <= 9, symbolic Suzuki n = 64")
def test_criterion_09_pauli(evidence):
    spaces = [Space(field_for_order(q), 1) for q in (2, 3, 4, 5, 7, 8, 9)] + [Space(field_for_order(3), 2)]
    for V in spaces:
        ctx = PauliCtx(V)
        reps = [check_composition(ctx), check_T_action(ctx)]
        if ctx.p != 2:
            reps.append(check_K_conjugation(ctx))
        for rep in reps:
            assert rep.passed, (rep.name, rep.failures)
    for q in (2, 3, 4, 5, 7, 8, 9):
        sp = SP.desarguesian_spread(q)
        rep = verify_decomposition(PauliCtx(sp.space.V), sp, dense_check=True)
        assert rep.passed, rep.failures
    sp = SP.suzuki_spread(8)
    rep = verify_decomposition(PauliCtx(sp.space.V), sp, dense_check=False)
    assert rep.passed and rep.mode == "symbolic"
    evidence["suzuki_checks"] = sum(rep.counts.values())


@criterion(10, "eigenvector formulas: exhaustive n <= 81, Suzuki sampled >= 1e4")
def test_criterion_10_eigenvectors(evidence):
    sets = [M.build_odd_symplectic(S.catalog("field", q)) for q in (3, 5, 7, 9, 27)]
    sets += [M.build_odd_symplectic(S.catalog(name, q)) for name, q in
             (("albert-symplectic", 27), ("knuth", 9), ("thas-payne", 9))]
    sets += [M.build_even_symplectic(S.catalog("field", q)) for q in (2, 4, 8, 16)]
    sets += [M.build_bblp(27)]
    for ms in sets:
        rep = check_eigenvectors(ms)
        assert rep.passed and rep.mode == "exhaustive", (ms.provenance, rep.failures)
        assert rep.details["bases_without_slope"] == 0
        evidence[f"{ms.provenance}/n={ms.n}"] = sum(rep.counts.values())
    rep = check_eigenvectors(M.build_suzuki(8), samples=10**4, seed=0)
    assert rep.passed
    evidence["suzuki"] = sum(rep.counts.values())


@criterion(11, "automorphism orders q in {3,5}: enumeration matches permutation oracle")
def test_criterion_11_automorphisms(evidence):
    for q in (3, 5):
        sp = SP.desarguesian_spread(q)
        a, b = SP.automorphism_order(sp), SP.automorphism_order_oracle(sp)
        assert a.complete and b.complete
        assert a.order == b.order
        evidence[q] = a.order
