from __future__ import annotations

import json

import numpy as np
import pytest

from mubforge import mub as M
from mubforge import semifield as S
from mubforge.pauli import check_eigenvectors


@pytest.mark.parametrize("q", [3, 5, 7])
def test_field_odd_full(q):
    ms = M.build_odd_symplectic(S.catalog("field", q))
    assert len(ms.bases) == q + 1
    rep = M.verify_mub(ms, mode="full")
    assert rep.passed
    assert rep.details["certificates"] == [0, q]


@pytest.mark.parametrize("q", [2, 4, 8])
def test_field_even_full(q):
    rep = M.verify_mub(M.build_even_symplectic(S.catalog("field", q)), mode="full")
    assert rep.passed


def test_qubit_reference_certificates():
    ref = M.build_qubit_reference()
    rep = M.verify_mub(ref)
    assert rep.passed and rep.details["certificates"] == [0, 2]
    assert M.compare_mub_sets(ref, M.build_even_symplectic(S.catalog("field", 2)))["identical"]


def test_planted_perturbed_exponent():
    ms = M.build_odd_symplectic(S.catalog("field", 5))
    d = ms.to_json()
    d["bases"][2]["table"][1][3] = (d["bases"][2]["table"][1][3] + 1) % 5
    bad = M.mubset_from_json(d)
    rep = M.verify_mub(bad, mode="full")
    assert not rep.passed
    kinds = {f["check"] for f in rep.failures}
    assert kinds & {"unbiased", "orthogonal"}
    # witnesses carry the exact certificate, never a float
    for f in rep.failures:
        for v in f.values():
            assert not isinstance(v, float)


def test_planted_perturbation_sampled_mode_detects():
    ms = M.build_odd_symplectic(S.catalog("field", 3))
    d = ms.to_json()
    d["bases"][1]["table"][0][0] = (d["bases"][1]["table"][0][0] + 1) % 3
    rep = M.verify_mub(M.mubset_from_json(d), mode="sampled", samples=2000)
    assert not rep.passed


def test_missing_basis_fails_completeness():
    ms = M.build_odd_symplectic(S.catalog("field", 5))
    short = M.MubSet(ms.space, ms.m, list(ms.bases)[:-1], "short")
    rep = M.verify_mub(short, mode="full")
    assert any(f["check"] == "completeness" for f in rep.failures)


def test_json_round_trip_and_reverify():
    ms = M.build_odd_symplectic(S.catalog("knuth", 9))
    text = json.dumps(ms.to_json())
    back = M.mubset_from_json(json.loads(text))
    assert M.compare_mub_sets(ms, back)["identical"]
    assert M.verify_mub(back).passed


def test_malformed_json():
    with pytest.raises(M.MubError):
        M.mubset_from_json({"n": 3})
    ms = M.build_odd_symplectic(S.catalog("field", 3)).to_json()
    ms["bases"][1]["table"][0][0] = 7
    with pytest.raises(M.MubError):
        M.mubset_from_json(ms)


def test_compare_detects_difference_and_ignores_order():
    a = M.build_odd_symplectic(S.catalog("field", 3))
    d = a.to_json()
    d["bases"] = [d["bases"][0]] + d["bases"][1:][::-1]
    for b in d["bases"][1:]:
        b["table"] = [[(x + 1) % 3 for x in row] for row in b["table"][::-1]]
    assert M.compare_mub_sets(a, M.mubset_from_json(d))["identical"]
    d["bases"][1]["table"][1] = d["bases"][1]["table"][2]
    assert not M.compare_mub_sets(a, M.mubset_from_json(d))["identical"]


def test_commutative_two_dim_refused_by_symplectic_builder():
    with pytest.raises(M.MubError):
        M.build_odd_symplectic(S.catalog("dickson", 9))


def test_planar_path_matches_symplectic_path():
    c = S.catalog("albert", 27)
    a = M.build_odd_planar(S.planar_from_presemifield(c))
    b = M.build_odd_symplectic(S.knuth_dual(c))
    assert M.compare_mub_sets(a, b)["identical"]


@pytest.mark.parametrize("q", [4, 8])
def test_even_commutative_matches_symplectic(q):
    c = S.catalog("field", q)
    a = M.build_even_commutative(c)
    b = M.build_even_symplectic(S.knuth_dual_even(c))
    assert M.compare_mub_sets(a, b)["identical"]


def test_float_mode_is_labelled_non_authoritative():
    rep = M.verify_mub(M.build_odd_symplectic(S.catalog("field", 7)), mode="float", samples=500)
    assert rep.passed and rep.mode == "float"
    assert rep.details["tolerance"] == M.FLOAT_TOL


def test_sampled_reports_are_deterministic_across_threads():
    ms = M.build_odd_symplectic(S.catalog("field", 27))
    r1 = M.verify_mub(ms, mode="sampled", samples=3000, seed=7, threads=1).to_dict()
    r4 = M.verify_mub(ms, mode="sampled", samples=3000, seed=7, threads=4).to_dict()
    assert json.dumps(r1, sort_keys=True) == json.dumps(r4, sort_keys=True)
    f1 = M.verify_mub(ms, mode="full", threads=1).to_dict()
    f3 = M.verify_mub(ms, mode="full", threads=3).to_dict()
    assert f1 == f3


def test_threads_env(monkeypatch):
    monkeypatch.setenv("MUBFORGE_THREADS", "3")
    assert M.default_threads() == 3


def test_csv_export_header_and_norm():
    ms = M.build_odd_symplectic(S.catalog("field", 3))
    text = M.export_csv(ms)
    lines = text.splitlines()
    assert lines[0].startswith("#") and "non-authoritative" in lines[0]
    rows = [ln.split(",") for ln in lines[2:]]
    assert len(rows) == 4 * 3 * 3
    vals = np.array([[float(r[4]), float(r[5])] for r in rows])
    norms = (vals ** 2).sum(axis=1).reshape(4, 3, 3).sum(axis=2)
    assert np.allclose(norms, 1)


def test_planted_eigenvalue_formula_error():
    ms = M.build_odd_symplectic(S.catalog("field", 5))
    b = ms.bases[1]
    good = b.eigen
    b.eigen = lambda u, v: (np.asarray(good(u, v)) + 1) % ms.m
    rep = check_eigenvectors(ms)
    assert not rep.passed


def test_bblp_and_suzuki_builders():
    assert M.verify_mub(M.build_bblp(27), mode="full").passed
    ms = M.build_suzuki(8)
    assert len(ms.bases) == 65 and ms.m == 4


def test_lazy_set_for_large_n():
    ms = M.build_odd_symplectic(S.catalog("penttila-williams", 243))
    assert ms.lazy and len(ms.bases) == 3**10 + 1
    with pytest.raises(M.MubError):
        ms.to_json()
    rep = M.verify_mub(ms, mode="sampled", samples=50, seed=0, threads=1)
    assert rep.passed
