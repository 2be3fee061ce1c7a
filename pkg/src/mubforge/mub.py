"""Complete sets of mutually unbiased bases and their exact verification.

An exponent basis over V (|V| = n) is an n x n table T in Z_m whose row v
is the vector ``sum_w zeta_m^T[v, w] e_w`` (scale 1/sqrt(n) implied).
Every construction here has the shape ``T[v, w] = Q(w) + lin * tr(v.w)``
with lin = 1 (odd p, m = p) or lin = 2 (p = 2, m = 4), so a basis is stored
as its quadratic part Q and tables are produced on demand.

Verification works on count vectors: the unnormalised inner product of
rows a and b is ``sum_k c_k zeta^k`` with c_k = #{w : b_w - a_w = k}.
The standard basis is scaled to sqrt(n) e_w, so every cross-basis
certificate is the integer n.
"""

from __future__ import annotations

import csv
import functools
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import cyclo
from .ff import Space, field_for_order, field_from_json
from .gr4 import make_ring
from .report import Report
from .semifield import (
    PlanarFn,
    Presemifield,
    catalog,
    commutative_coeffs,
    dual_coeffs,
    eval_form,
    knuth_dual_even,
    pseudo_planar_test,
)
from .spread import bblp_beta, suzuki_k, suzuki_matrix

FULL_LIMIT = 100
TABLE_LIMIT = 4096
DEFAULT_SAMPLES = 10**5
FLOAT_TOL = 1e-9


class MubError(ValueError):
    pass


def default_threads() -> int:
    env = os.environ.get("MUBFORGE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class MubBasis:
    kind: str                           # "standard" | "exponent"
    label: object = None
    quad: np.ndarray | Callable | None = None
    table: np.ndarray | None = None     # explicit table (imports, edits)
    slope: Callable | None = None       # u -> h(u): the Cartan member {(u, h(u))}
    eigen: Callable | None = None       # (u, v) -> eigenvalue exponent of D_{u,h(u)}

    def quad_values(self) -> np.ndarray:
        q = self.quad() if callable(self.quad) else self.quad
        return np.asarray(q, dtype=np.int64)


class LazyBases(Sequence):
    """Bases generated on access; nothing is cached (used for huge n)."""

    def __init__(self, count: int, factory: Callable[[int], MubBasis]):
        self._count = count
        self._factory = factory

    def __len__(self):
        return self._count

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._count))]
        if not -self._count <= i < self._count:
            raise IndexError(i)
        return self._factory(i % self._count)


@dataclass(eq=False)
class MubSet:
    space: Space
    m: int
    bases: Sequence
    provenance: str = ""
    details: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def lin(self) -> int:
        return self.m // self.space.p

    @property
    def lazy(self) -> bool:
        return isinstance(self.bases, LazyBases)

    @functools.cached_property
    def characters(self) -> np.ndarray:
        """tr(v.w) for all v, w (int8), used to expand quadratic parts."""
        if self.n > TABLE_LIMIT:
            raise MubError("character table too large; use row access")
        pts = self.space.points()
        return np.asarray(self.space.trdot(pts[:, None], pts[None, :]), dtype=np.int8)

    def rows(self, i: int, vs) -> np.ndarray:
        B = self.bases[i]
        vs = np.atleast_1d(np.asarray(vs, dtype=np.int64))
        if B.kind != "exponent":
            raise MubError("standard basis has no exponent rows")
        if B.table is not None:
            return B.table[vs]
        Q = B.quad_values()
        if self.n <= TABLE_LIMIT:
            tr = self.characters[vs].astype(np.int64)
        else:
            w = self.space.points()
            tr = self.space.trdot(vs[:, None], w[None, :])
        return (Q[None, :] + self.lin * tr) % self.m

    def table(self, i: int) -> np.ndarray:
        B = self.bases[i]
        if B.table is not None:
            return B.table
        if self.n > TABLE_LIMIT:
            raise MubError(f"n = {self.n}: tables are produced row by row")
        return self.rows(i, self.space.points())

    def labels(self) -> list:
        return [b.label for b in self.bases]

    def to_json(self) -> dict:
        if self.lazy:
            raise MubError("refusing to export a lazily generated set")
        bases = []
        for i, b in enumerate(self.bases):
            if b.kind == "standard":
                bases.append({"label": _json_label(b.label), "kind": "standard"})
            else:
                bases.append({"label": _json_label(b.label), "table": self.table(i).tolist()})
        return {"n": self.n, "m": self.m, "field": self.space.ctx.to_json(),
                "shape": self.space.dim, "provenance": self.provenance, "bases": bases}


def _json_label(label):
    if isinstance(label, tuple):
        return [_json_label(x) for x in label]
    if isinstance(label, np.integer):
        return int(label)
    return label


def standard_basis() -> MubBasis:
    return MubBasis("standard", "inf")


def mubset_from_json(d: dict) -> MubSet:
    try:
        n, m = int(d["n"]), int(d["m"])
        bases_in = d["bases"]
    except (KeyError, TypeError) as exc:
        raise MubError(f"malformed MUB JSON: {exc}") from exc
    if "field" in d:
        space = Space(field_from_json(d["field"]), int(d.get("shape", 1)))
    else:
        space = Space(field_for_order(n), 1)
    if space.n != n:
        raise MubError("n does not match the field descriptor")
    bases = []
    for b in bases_in:
        if b.get("kind") == "standard":
            bases.append(MubBasis("standard", b.get("label", "inf")))
            continue
        T = np.asarray(b["table"], dtype=np.int64)
        if T.shape != (n, n):
            raise MubError(f"basis {b.get('label')}: table must be {n}x{n}")
        if T.min(initial=0) < 0 or T.max(initial=0) >= m:
            raise MubError(f"basis {b.get('label')}: exponents must lie in [0, {m})")
        bases.append(MubBasis("exponent", _tuple_label(b.get("label")), table=T))
    return MubSet(space, m, bases, d.get("provenance", "imported"))


def _tuple_label(label):
    return tuple(label) if isinstance(label, list) else label


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _odd_eigen(space: Space, slope: Callable):
    """Eigenvalue exponent -tr(u.h(u)/2) - tr(v.u) of D_{u,h(u)}."""
    F = space.ctx

    def eigen(u, v):
        u = np.asarray(u, dtype=np.int64)
        half = space.scale(F.half, slope(u))
        return (-space.trdot(u, half) - space.trdot(v, u)) % F.p
    return eigen


def _even_eigen(space: Space, quad: Callable):
    """2 tr(v.u) - Q(u) in Z_4, Q being the basis quadratic part."""

    def eigen(u, v):
        u = np.asarray(u, dtype=np.int64)
        return (2 * space.trdot(v, u) - quad()[u]) % 4
    return eigen


def _make_set(space: Space, m: int, labels: list, factory, provenance: str, **details) -> MubSet:
    n = space.n
    if n > TABLE_LIMIT:
        bases = LazyBases(len(labels) + 1,
                          lambda i: standard_basis() if i == 0 else factory(labels[i - 1]))
    else:
        bases = [standard_basis()] + [factory(lab) for lab in labels]
    ms = MubSet(space, m, bases, provenance, details)
    if len(ms.bases) != n + 1:
        raise MubError(f"construction produced {len(ms.bases)} bases, expected {n + 1}")
    return ms


def _quad(fn, lazy: bool):
    return fn if lazy else fn()


def build_odd_symplectic(s: Presemifield) -> MubSet:
    """T[v, w] = tr(w.(w o m)/2 + v.w), one basis per m in V."""
    F = s.ctx
    if F.p == 2:
        raise MubError("odd characteristic required")
    if not s.symplectic:
        raise MubError(f"{s.name} is not flagged symplectic; use its symplectic partner")
    V = s.space
    w = V.points()
    lazy = V.n > TABLE_LIMIT

    def factory(mlab):
        def quad():
            prod = s.mul(w, np.full(w.shape, mlab))
            return V.trdot(w, V.scale(F.half, prod))
        slope = lambda u, mlab=mlab: s.mul(u, np.full(np.shape(u), mlab))
        return MubBasis("exponent", int(mlab), _quad(quad, lazy), slope=slope,
                        eigen=_odd_eigen(V, slope))
    return _make_set(V, F.p, list(range(V.n)), factory, f"odd-symplectic[{s.name}]",
                     presemifield=s.name, params=dict(s.params))


def _dual_slope(ctx, coeffs):
    """u -> u o m for the symplectic partner of a commutative coefficient form."""
    dual = dual_coeffs(ctx, coeffs)
    return lambda mlab: (lambda u: eval_form(ctx, dual, u, mlab))


def build_odd_planar(f: PlanarFn) -> MubSet:
    """T[v, w] = tr(m f(w)/2 + v w), V = F."""
    F = f.ctx
    if F.p == 2:
        raise MubError("planar functions live in odd characteristic")
    V = Space(F, 1)
    w = V.points()
    fw = f(w)
    slope_of = _dual_slope(F, commutative_coeffs(f)) if f.monomials is not None else None

    def factory(mlab):
        quad = F.trace(F.mul(F.mul(F.half, mlab), fw))
        slope = slope_of(mlab) if slope_of else None
        return MubBasis("exponent", int(mlab), quad, slope=slope,
                        eigen=_odd_eigen(V, slope) if slope else None)
    return _make_set(V, F.p, list(range(F.q)), factory, f"odd-planar[{f.kind}]")


def _require_even_coeffs(s: Presemifield):
    if s.ctx.p != 2:
        raise MubError("characteristic 2 required")
    if s.coeffs is None or s.space.dim != 1:
        raise MubError(f"{s.name}: Galois-ring lift needs the coefficient form on V = F")


def build_even_symplectic(s: Presemifield) -> MubSet:
    """T[v, w] = Tr(w^ (w^ o m^)) + 2 tr(w v) in Z_4."""
    _require_even_coeffs(s)
    if not s.symplectic:
        raise MubError(f"{s.name} is not flagged symplectic")
    F = s.ctx
    R = make_ring(F)
    V = Space(F, 1)
    w = V.points()
    lw = R.lift(w)

    def factory(mlab):
        quad = np.asarray(R.trace(R.mul(lw, R.lifted_form(s.coeffs, w, np.full(w.shape, mlab)))))
        slope = lambda u, mlab=mlab: s.mul(u, np.full(np.shape(u), mlab))
        return MubBasis("exponent", int(mlab), quad, slope=slope,
                        eigen=_even_eigen(V, lambda quad=quad: quad))
    return _make_set(V, 4, list(range(F.q)), factory, f"even-symplectic[{s.name}]")


def build_even_commutative(c: Presemifield) -> MubSet:
    """T[v, w] = Tr(m^ (w^ * w^)) + 2 tr(w v) in Z_4."""
    _require_even_coeffs(c)
    F = c.ctx
    R = make_ring(F)
    V = Space(F, 1)
    w = V.points()
    sq = R.lifted_form(c.coeffs, w, w)
    dual = knuth_dual_even(c)

    def factory(mlab):
        quad = np.asarray(R.trace(R.mul(R.lift(mlab), sq)))
        slope = lambda u, mlab=mlab: dual.mul(u, np.full(np.shape(u), mlab))
        return MubBasis("exponent", int(mlab), quad, slope=slope,
                        eigen=_even_eigen(V, lambda quad=quad: quad))
    return _make_set(V, 4, list(range(F.q)), factory, f"even-commutative[{c.name}]")


def build_pseudoplanar(f: PlanarFn, check: bool = True) -> MubSet:
    """T[v, w] = Tr(m^ w^2) + 2 tr(m f(w)) + 2 tr(v w) in Z_4."""
    F = f.ctx
    if F.p != 2:
        raise MubError("characteristic 2 required")
    if check and not pseudo_planar_test(f).passed:
        raise MubError("f is not pseudo-planar")
    R = make_ring(F)
    V = Space(F, 1)
    w = V.points()
    lw2 = R.mul(R.lift(w), R.lift(w))
    fw = f(w)
    slope_of = None
    if f.monomials is not None:
        slope_of = _dual_slope(F, commutative_coeffs(f))

    def factory(mlab):
        quad = (np.asarray(R.trace(R.mul(R.lift(mlab), lw2)))
                + 2 * F.trace(F.mul(mlab, fw))) % 4
        slope = slope_of(mlab) if slope_of else None
        return MubBasis("exponent", int(mlab), quad, slope=slope,
                        eigen=_even_eigen(V, lambda quad=quad: quad) if slope else None)
    return _make_set(V, 4, list(range(F.q)), factory, "pseudo-planar")


def build_bblp(q: int, k: int = 1) -> MubSet:
    """B_inf, B_0, the nonsquare-m bases and the s-class bases of the BBLP spread."""
    bkla = catalog("bkla", q, k=k)
    F = bkla.ctx
    k = bkla.params["k"]
    V = Space(F, 1)
    w = V.points()
    rho1 = F.p**k + 1
    labels = [("m", 0)]
    labels += [("m", m) for m in range(1, F.q) if not F.is_square(m)]
    reps = sorted({min(s, int(F.neg(s)), key=F.coeffs) for s in range(1, F.q)}, key=F.coeffs)
    labels += [("s", s) for s in reps]

    def factory(label):
        kind, x = label
        if kind == "m":
            quad = F.trace(F.mul(F.frob(x, k), F.pow(w, rho1)))
            slope = lambda u, x=x: bkla.mul(u, np.full(np.shape(u), x))
        else:
            ws = F.mul(w, x)
            quad = F.trace(F.mul(F.half, F.mul(ws, bblp_beta(F, k, ws))))
            slope = lambda u, x=x: F.mul(x, bblp_beta(F, k, F.mul(np.asarray(u), x)))
        return MubBasis("exponent", label, np.asarray(quad), slope=slope, eigen=_odd_eigen(V, slope))
    return _make_set(V, F.p, labels, factory, "bblp", k=k)


def build_suzuki(q: int) -> MubSet:
    """T[v, w] = Tr(w^ . w^ M^_c) + 2 tr(v.w) over V = F (+) F, m = 4."""
    k = suzuki_k(q)
    F = field_for_order(q)
    R = make_ring(F)
    V = Space(F, 2)
    w1, w2 = V.split(V.points())
    l1, l2 = R.lift(w1), R.lift(w2)
    s11, s22 = R.mul(l1, l1), R.mul(l2, l2)
    s12 = R.times(2, R.mul(l1, l2))

    def factory(c):
        a, g, b = suzuki_matrix(F, k, *V.split(c))
        la, lg, lb = R.lift(a), R.lift(g), R.lift(b)
        val = R.add(R.add(R.mul(s11, la), R.mul(s12, lg)), R.mul(s22, lb))
        quad = np.asarray(R.trace(val))
        slope = lambda u, c=c: _suzuki_slope(V, k, c, u)
        return MubBasis("exponent", ("c", int(c)), quad, slope=slope,
                        eigen=_even_eigen(V, lambda quad=quad: quad))
    return _make_set(V, 4, list(range(V.n)), factory, "suzuki", k=k)


def _suzuki_slope(V, k, c, u):
    from .spread import suzuki_slope
    return suzuki_slope(V, k, c, u)


def build_qubit_reference() -> MubSet:
    """Eigenbases of Pauli Z, X and Y written as exponent tables in Z_4."""
    V = Space(field_for_order(2), 1)
    x_basis = np.array([[0, 0], [0, 2]])
    y_basis = np.array([[0, 1], [0, 3]])
    return MubSet(V, 4, [standard_basis(), MubBasis("exponent", "X", table=x_basis),
                         MubBasis("exponent", "Y", table=y_basis)], "qubit-XYZ")


# ---------------------------------------------------------------------------
# exact verification
# ---------------------------------------------------------------------------

def _onehot(T: np.ndarray, m: int) -> np.ndarray:
    """(rows, m*n) float32 with block j marking T == j."""
    n = T.shape[1]
    out = np.zeros((T.shape[0], m * n), dtype=np.float32)
    for j in range(m):
        out[:, j * n:(j + 1) * n] = T == j
    return out


def _shift_blocks(H: np.ndarray, k: int, m: int, n: int) -> np.ndarray:
    """Column blocks permuted so block j holds the original block j+k."""
    return np.concatenate([H[:, ((j + k) % m) * n:((j + k) % m + 1) * n] for j in range(m)], axis=1)


def pair_counts(A: np.ndarray, B: np.ndarray, m: int) -> np.ndarray:
    """counts[a, b, k] = #{w : B[b, w] - A[a, w] = k mod m}, via one-hot products."""
    n = A.shape[1]
    HA = _onehot(A, m)
    HB = _onehot(B, m)
    out = np.empty((A.shape[0], B.shape[0], m), dtype=np.int64)
    for k in range(m):
        prod = HA @ _shift_blocks(HB, k, m, n).T
        out[:, :, k] = np.rint(prod).astype(np.int64)
    return out


def _certify_cross(rep: Report, counts: np.ndarray, m: int, n: int, la, lb):
    value, rational = cyclo.abs_squared_counts(counts, m)
    ok = rational & (value == n)
    rep.tally("cross_pairs", ok.size)
    if not ok.all():
        a, b = np.argwhere(~ok)[0]
        rep.fail("unbiased", int((~ok).sum()), bases=[la, lb], rows=[a, b],
                 certificate=int(value[a, b]), rational=bool(rational[a, b]),
                 counts=counts[a, b])
    else:
        rep.details.setdefault("certificates", set()).add(int(n))


def _certify_same(rep: Report, counts: np.ndarray, m: int, n: int, label):
    N = counts.shape[0]
    diag = counts[np.arange(N), np.arange(N)]
    norm_ok = diag[:, 0] == n
    rep.tally("norms", N)
    if not norm_ok.all():
        a = np.flatnonzero(~norm_ok)[0]
        rep.fail("norm", int((~norm_ok).sum()), basis=label, row=a, counts=diag[a])
    zero = cyclo.is_zero_counts(counts, m)
    off = ~np.eye(N, dtype=bool)
    bad = off & ~zero
    rep.tally("orthogonal_pairs", int(off.sum()))
    if bad.any():
        a, b = np.argwhere(bad)[0]
        rep.fail("orthogonal", int(bad.sum()), basis=label, rows=[a, b],
                 counts=counts[a, b])
    else:
        rep.details.setdefault("certificates", set()).update({int(n), 0})


def _check_entries(rep: Report, T: np.ndarray, m: int, label):
    rep.tally("standard_pairs", T.size)
    bad = (T < 0) | (T >= m)
    if bad.any():
        rep.fail("entry_range", int(bad.sum()), basis=label)


def _full_exact(ms: MubSet, rep: Report, threads: int):
    m, n = ms.m, ms.n
    idx = [i for i, b in enumerate(ms.bases) if b.kind == "exponent"]
    nstd = len(ms.bases) - len(idx)
    rep.tally("standard_self", nstd)
    if nstd > 1:
        rep.fail("standard_duplicates", count=nstd)
    tables = {i: ms.table(i) for i in idx}
    for i in idx:
        _check_entries(rep, tables[i], m, ms.bases[i].label)
    hot = {i: _onehot(tables[i], m) for i in idx}
    shifted = {i: [_shift_blocks(hot[i], k, m, n) for k in range(m)] for i in idx}

    def task(pos):
        i = idx[pos]
        sub = Report("chunk")
        rest = idx[pos:]
        # stack partners so one product covers many bases
        chunk = max(1, (1 << 22) // max(1, n * m * n))
        for c0 in range(0, len(rest), chunk):
            part = rest[c0:c0 + chunk]
            counts = np.empty((n, len(part) * n, m), dtype=np.int64)
            for k in range(m):
                Hb = np.concatenate([shifted[j][k] for j in part], axis=0)
                counts[:, :, k] = np.rint(hot[i] @ Hb.T).astype(np.int64)
            for t, j in enumerate(part):
                block = counts[:, t * n:(t + 1) * n]
                if j == i:
                    _certify_same(sub, block, m, n, ms.bases[i].label)
                else:
                    _certify_cross(sub, block, m, n, ms.bases[i].label, ms.bases[j].label)
        return sub

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for sub in pool.map(task, range(len(idx))):
            _merge(rep, sub)


def _merge(rep: Report, sub: Report):
    for k, v in sub.counts.items():
        rep.tally(k, v)
    rep.n_failures += sub.n_failures
    for f in sub.failures:
        if len(rep.failures) < 20:
            rep.failures.append(f)
    if "certificates" in sub.details:
        rep.details.setdefault("certificates", set()).update(sub.details["certificates"])


def _sampled_exact(ms: MubSet, rep: Report, samples: int, seed: int, threads: int):
    m, n = ms.m, ms.n
    N = len(ms.bases)
    rng = np.random.default_rng(seed)
    bi = rng.integers(0, N, size=(samples, 2))
    rows = rng.integers(0, n, size=(samples, 2))
    kinds = np.array([ms.bases[0].kind == "standard"] + [False] * (N - 1)) if ms.lazy else \
        np.array([b.kind == "standard" for b in ms.bases])
    std = kinds[bi]
    batch = 64 if n > TABLE_LIMIT else 1024
    for start in range(0, samples, batch):
        sl = slice(start, min(samples, start + batch))
        b, r, s = bi[sl], rows[sl], std[sl]
        both_std = s[:, 0] & s[:, 1]
        one_std = s[:, 0] ^ s[:, 1]
        # standard vs standard: sqrt(n) e_a . sqrt(n) e_b
        if both_std.any():
            rep.tally("standard_pairs", int(both_std.sum()))
        # standard vs exponent: certificate n as long as the entry is a valid exponent
        for t in np.flatnonzero(one_std):
            j = b[t, 1] if s[t, 0] else b[t, 0]
            v = r[t, 1] if s[t, 0] else r[t, 0]
            row = ms.rows(j, [v])[0]
            rep.tally("standard_pairs")
            if row.min() < 0 or row.max() >= m:
                rep.fail("entry_range", basis=_json_label(ms.bases[j].label), row=v)
        ex = np.flatnonzero(~s[:, 0] & ~s[:, 1])
        if ex.size == 0:
            continue
        A = np.stack([ms.rows(b[t, 0], [r[t, 0]])[0] for t in ex])
        B = np.stack([ms.rows(b[t, 1], [r[t, 1]])[0] for t in ex])
        diff = (B - A) % m
        counts = np.stack([(diff == k).sum(axis=1) for k in range(m)], axis=1)
        same_basis = b[ex, 0] == b[ex, 1]
        same_row = same_basis & (r[ex, 0] == r[ex, 1])
        for t in np.flatnonzero(same_row):
            rep.tally("norms")
            if counts[t, 0] != n:
                rep.fail("norm", basis=_json_label(ms.bases[b[ex[t], 0]].label), row=r[ex[t], 0])
        orth = same_basis & ~same_row
        if orth.any():
            zero = cyclo.is_zero_counts(counts[orth], m)
            rep.tally("orthogonal_pairs", int(orth.sum()))
            for t in np.flatnonzero(orth)[~zero]:
                rep.fail("orthogonal", basis=_json_label(ms.bases[b[ex[t], 0]].label),
                         rows=[r[ex[t], 0], r[ex[t], 1]], counts=counts[t])
            if zero.all():
                rep.details.setdefault("certificates", set()).add(0)
        cross = ~same_basis
        if cross.any():
            value, rational = cyclo.abs_squared_counts(counts[cross], m)
            ok = rational & (value == n)
            rep.tally("cross_pairs", int(cross.sum()))
            for pos in np.flatnonzero(~ok):
                t = np.flatnonzero(cross)[pos]
                rep.fail("unbiased", bases=[_json_label(ms.bases[b[ex[t], 0]].label),
                                            _json_label(ms.bases[b[ex[t], 1]].label)],
                         rows=[r[ex[t], 0], r[ex[t], 1]], certificate=int(value[pos]),
                         rational=bool(rational[pos]))
            if ok.any():
                rep.details.setdefault("certificates", set()).add(int(n))


def _float_check(ms: MubSet, rep: Report, samples: int, seed: int):
    """Complex-double fast path; non-authoritative."""
    m, n = ms.m, ms.n
    zeta = np.exp(2j * np.pi * np.arange(m) / m)
    idx = [i for i, b in enumerate(ms.bases) if b.kind == "exponent"]
    vecs = {i: zeta[ms.table(i)] for i in idx}
    for a, i in enumerate(idx):
        for j in idx[a:]:
            G = np.abs(vecs[i].conj() @ vecs[j].T) ** 2 / n**2
            if i == j:
                target = np.eye(n)
            else:
                target = np.full((n, n), 1.0 / n)
            err = np.abs(G - target)
            rep.tally("float_pairs", G.size)
            if err.max() > FLOAT_TOL:
                a0, b0 = np.unravel_index(np.argmax(err), err.shape)
                rep.fail("float_tolerance", int((err > FLOAT_TOL).sum()),
                         bases=[ms.bases[i].label, ms.bases[j].label], rows=[a0, b0],
                         error=float(err.max()))


def verify_mub(ms: MubSet, mode: str = "auto", samples: int = DEFAULT_SAMPLES, seed: int = 0,
               threads: int | None = None) -> Report:
    """Exact verification of completeness, orthonormality and unbiasedness.

    ``mode``: "auto" (full when n <= 100, else sampled), "full", "sampled"
    or "float" (complex doubles, tolerance 1e-9, non-authoritative).
    """
    threads = threads or default_threads()
    if mode == "auto":
        mode = "full" if ms.n <= FULL_LIMIT else "sampled"
    if mode not in ("full", "sampled", "float"):
        raise MubError(f"unknown mode {mode!r}")
    rep = Report(f"verify_mub[{ms.provenance}]", mode="exact" if mode == "full" else mode)
    rep.details.update(n=ms.n, m=ms.m, bases=len(ms.bases))
    if ms.details:
        rep.details["construction"] = ms.details
    rep.tally("completeness")
    if len(ms.bases) != ms.n + 1:
        rep.fail("completeness", bases=len(ms.bases), expected=ms.n + 1)
    if mode == "full":
        if ms.lazy:
            raise MubError("full verification of a lazy set is not supported")
        _full_exact(ms, rep, threads)
    elif mode == "sampled":
        rep.mode = "sampled-exact"
        rep.details.update(samples=samples, seed=seed)
        _sampled_exact(ms, rep, samples, seed, threads)
    else:
        rep.details.update(tolerance=FLOAT_TOL)
        _float_check(ms, rep, samples, seed)
    if "certificates" in rep.details:
        rep.details["certificates"] = sorted(rep.details["certificates"])
    return rep


# ---------------------------------------------------------------------------
# comparison and export
# ---------------------------------------------------------------------------

def canonical_form(ms: MubSet) -> list[bytes]:
    out = []
    for i, b in enumerate(ms.bases):
        if b.kind == "standard":
            out.append(b"standard")
            continue
        T = ms.table(i)
        T = (T - T[:, :1]) % ms.m
        T = T[np.lexsort(T.T[::-1])]
        out.append(T.astype(np.int8).tobytes())
    return sorted(out, key=lambda x: (x != b"standard", x))


def compare_mub_sets(a: MubSet, b: MubSet) -> dict:
    """Equality up to per-row phase and row/basis order (not unitary equivalence)."""
    if a.n != b.n or a.m != b.m:
        raise MubError("sets differ in n or m")
    ca, cb = canonical_form(a), canonical_form(b)
    identical = ca == cb
    common = len(set(ca) & set(cb))
    return {"verdict": "identical" if identical else "different", "identical": identical,
            "n": a.n, "m": a.m, "bases": [len(ca), len(cb)], "matched_bases": common}


def export_csv(ms: MubSet) -> str:
    """Dense complex entries (normalised), one row per (basis, vector, index)."""
    buf = io.StringIO()
    buf.write("# floating-point values are non-authoritative; the exponent JSON is exact\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["basis", "label", "vector", "index", "re", "im"])
    zeta = np.exp(2j * np.pi * np.arange(ms.m) / ms.m)
    scale = 1 / np.sqrt(ms.n)
    for i, b in enumerate(ms.bases):
        lab = _json_label(b.label)
        lab = "/".join(map(str, lab)) if isinstance(lab, list) else str(lab)
        if b.kind == "standard":
            for v in range(ms.n):
                for w in range(ms.n):
                    wr.writerow([i, lab, v, w, "1" if v == w else "0", "0"])
            continue
        T = ms.table(i)
        for v in range(ms.n):
            for w, e in enumerate(T[v]):
                z = zeta[e] * scale
                wr.writerow([i, lab, v, w, f"{z.real:.17g}", f"{z.imag:.17g}"])
    return buf.getvalue()
