"""Generalized Pauli operators D_{u,v} = X(u) Z(v) kept symbolically.

An operator is a triple (u, v, k) acting by
``e_w -> zeta_m^(k + (m/p) tr(v.w)) e_(u+w)`` where m = p for odd p and
m = 4 for p = 2, so eps = zeta_m^(m/p) is a primitive p-th root of unity.
Dense matrices are built only to cross-check the symbolic rules on small n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ff import Space
from .report import Report
from .spread import Member, Spread, SymplecticSpace

DENSE_LIMIT = 9


class PauliError(ValueError):
    pass


class PauliCtx:
    def __init__(self, space: Space):
        self.V = space
        self.W = SymplecticSpace(space)
        self.p = space.p
        self.n = space.n
        self.m = 4 if self.p == 2 else self.p
        self.eps = self.m // self.p  # eps = zeta_m^eps

    def __eq__(self, other):
        return isinstance(other, PauliCtx) and self.V == other.V

    def __hash__(self):
        return hash(("pauli", self.V))

    def op(self, u: int, v: int, k: int = 0) -> "PauliOp":
        return PauliOp(self, int(u), int(v), int(k) % self.m)

    def all_ops(self) -> list["PauliOp"]:
        return [self.op(u, v) for v in range(self.n) for u in range(self.n)]

    def zeta_powers(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.m) / self.m)


@dataclass(frozen=True)
class PauliOp:
    ctx: PauliCtx
    u: int
    v: int
    k: int = 0

    def __matmul__(self, other: "PauliOp") -> "PauliOp":
        return compose(self, other)

    @property
    def point(self) -> int:
        return int(self.ctx.W.join(self.u, self.v))

    def scaled(self, k: int) -> "PauliOp":
        return PauliOp(self.ctx, self.u, self.v, (self.k + k) % self.ctx.m)

    def inverse(self) -> "PauliOp":
        c = self.ctx
        V = c.V
        k = c.eps * int(V.trdot(self.v, self.u)) - self.k
        return c.op(V.neg(self.u), V.neg(self.v), k)

    def trace_exponent(self):
        """Tr(D) = n zeta^k when (u, v) = (0, 0), else 0 (returned as None)."""
        return self.k if self.u == 0 and self.v == 0 else None


def compose(A: PauliOp, B: PauliOp) -> PauliOp:
    """D_{u,v} D_{u',v'} = eps^{tr(v.u')} D_{u+u',v+v'}."""
    if A.ctx != B.ctx:
        raise PauliError("operators from different contexts")
    c = A.ctx
    V = c.V
    k = A.k + B.k + c.eps * int(V.trdot(A.v, B.u))
    return c.op(V.add(A.u, B.u), V.add(A.v, B.v), k)


def commutes(A: PauliOp, B: PauliOp) -> bool:
    return compose(A, B).k == compose(B, A).k


def dense(A: PauliOp) -> np.ndarray:
    c = A.ctx
    if c.n > 64:
        raise PauliError("dense matrices are for cross-validation on small n")
    w = c.V.points()
    phase = (A.k + c.eps * c.V.trdot(A.v, w)) % c.m
    M = np.zeros((c.n, c.n), dtype=complex)
    M[c.V.add(A.u, w), w] = c.zeta_powers()[phase]
    return M


def _close(a, b) -> bool:
    return bool(np.allclose(a, b, atol=1e-9))


# ---------------------------------------------------------------------------
# algebraic laws
# ---------------------------------------------------------------------------

def check_composition(ctx: PauliCtx) -> Report:
    """Symbolic products and commutators against dense matrices (n <= 9)."""
    if ctx.n > DENSE_LIMIT:
        raise PauliError(f"dense oracle limited to n <= {DENSE_LIMIT}")
    rep = Report(f"pauli_composition[n={ctx.n}]", mode="dense")
    ops = ctx.all_ops()
    mats = [dense(a) for a in ops]
    zeta = ctx.zeta_powers()
    eps = zeta[ctx.eps]
    W = ctx.W
    for i, A in enumerate(ops):
        for j, B in enumerate(ops):
            C = compose(A, B)
            rep.tally("product")
            prod = mats[i] @ mats[j]
            if not _close(prod, dense(C)):
                rep.fail("product", a=[A.u, A.v], b=[B.u, B.v])
            comm = prod - mats[j] @ mats[i]
            f = W.form(A.point, B.point)
            pred = eps ** int(ctx.V.trdot(A.v, B.u)) * (1 - eps**f) * dense(ctx.op(C.u, C.v))
            rep.tally("commutator_formula")
            if not _close(comm, pred):
                rep.fail("commutator_formula", a=[A.u, A.v], b=[B.u, B.v])
            rep.tally("commutator_criterion")
            if commutes(A, B) != (f == 0) or _close(comm, 0) != (f == 0):
                rep.fail("commutator_criterion", a=[A.u, A.v], b=[B.u, B.v], form=f)
        rep.tally("trace")
        tr = np.trace(mats[i])
        expect = 0 if A.trace_exponent() is None else ctx.n * zeta[A.k]
        if not _close(tr, expect):
            rep.fail("trace", a=[A.u, A.v])
        rep.tally("inverse")
        if not _close(mats[i] @ dense(A.inverse()), np.eye(ctx.n)):
            rep.fail("inverse", a=[A.u, A.v])
    stack = np.stack([M.ravel() for M in mats])
    rep.tally("linear_independence")
    if np.linalg.matrix_rank(stack) != ctx.n**2:
        rep.fail("linear_independence")
    return rep


def check_T_action(ctx: PauliCtx) -> Report:
    """T(D_{a,b}) = -D_{a,b}^t equals -eps^{-tr(a.b)} D_{-a,b}, dense."""
    if ctx.n > DENSE_LIMIT:
        raise PauliError(f"dense oracle limited to n <= {DENSE_LIMIT}")
    rep = Report(f"T_action[n={ctx.n}]", mode="dense")
    V = ctx.V
    for A in ctx.all_ops():
        lhs = -dense(A).T
        k = -ctx.eps * int(V.trdot(A.u, A.v))
        rhs = -dense(ctx.op(V.neg(A.u), A.v, k))
        rep.tally("pairs")
        if not _close(lhs, rhs):
            rep.fail("T_action", a=A.u, b=A.v)
    return rep


def check_K_conjugation(ctx: PauliCtx) -> Report:
    """D_{u,v} D_{a,b} D_{u,v}^-1 = eps^{-<(u,v),(a,b)>} D_{a,b} (odd p)."""
    if ctx.p == 2:
        raise PauliError("conjugation formula is stated for odd characteristic")
    rep = Report(f"K_conjugation[n={ctx.n}]", mode="dense" if ctx.n <= DENSE_LIMIT else "symbolic")
    ops = ctx.all_ops()
    use_dense = ctx.n <= DENSE_LIMIT
    mats = [dense(a) for a in ops] if use_dense else None
    for i, U in enumerate(ops):
        Uinv = U.inverse()
        Uinv_d = dense(Uinv) if use_dense else None
        for j, A in enumerate(ops):
            f = ctx.W.form(U.point, A.point)
            conj = compose(compose(U, A), Uinv)
            rep.tally("symbolic")
            if (conj.u, conj.v, conj.k) != (A.u, A.v, (-ctx.eps * f) % ctx.m):
                rep.fail("symbolic", u=[U.u, U.v], a=[A.u, A.v])
            if use_dense:
                rep.tally("dense")
                if not _close(mats[i] @ mats[j] @ Uinv_d, dense(A.scaled(-ctx.eps * f))):
                    rep.fail("dense", u=[U.u, U.v], a=[A.u, A.v])
    return rep


# ---------------------------------------------------------------------------
# Cartan blocks and the orthogonal decomposition
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class CartanBlock:
    member: Member
    generators: list


def member_points(W: SymplecticSpace, member: Member) -> np.ndarray:
    pts = W.span(member.basis)
    return np.sort(pts[pts != 0])


def cartan_from_member(ctx: PauliCtx, member: Member) -> CartanBlock:
    W = ctx.W
    pts = member_points(W, member)
    u, v = W.split(pts)
    # isotropy check on the generating points, vectorised
    f = W.form(pts[:, None], pts[None, :])
    if np.any(f):
        i, j = np.argwhere(f)[0]
        raise PauliError(f"member not isotropic: <{pts[i]}, {pts[j]}> = {f[i, j]}")
    return CartanBlock(member, [ctx.op(a, b) for a, b in zip(u.tolist(), v.tolist())])


def block_commutes(ctx: PauliCtx, block: CartanBlock) -> Report:
    """Symbolic pairwise commutation: the two product phases agree."""
    rep = Report("cartan_abelian", mode="symbolic")
    u = np.array([g.u for g in block.generators])
    v = np.array([g.v for g in block.generators])
    V = ctx.V
    kab = V.trdot(v[:, None], u[None, :])
    kba = V.trdot(v[None, :], u[:, None])
    rep.tally("pairs", kab.size)
    bad = np.argwhere(kab != kba)
    if bad.size:
        i, j = bad[0]
        rep.fail("commute", len(bad), a=[u[i], v[i]], b=[u[j], v[j]])
    return rep


def verify_decomposition(ctx: PauliCtx, sp: Spread, dense_check: bool | None = None) -> Report:
    """sl_n = H_0 (+) ... (+) H_n: sizes, disjointness, abelian blocks, Killing orthogonality."""
    W = ctx.W
    if dense_check is None:
        dense_check = ctx.n <= DENSE_LIMIT
    rep = Report(f"decomposition[n={ctx.n}]", mode="symbolic+dense" if dense_check else "symbolic")
    blocks = [cartan_from_member(ctx, m) for m in sp.members]
    sizes = [len(b.generators) for b in blocks]
    rep.tally("block_sizes")
    if sum(sizes) != ctx.n**2 - 1 or len(blocks) != ctx.n + 1:
        rep.fail("block_sizes", total=sum(sizes), expected=ctx.n**2 - 1)
    owner = np.full(W.size, -1, dtype=np.int64)
    for i, b in enumerate(blocks):
        pts = np.array([g.point for g in b.generators])
        rep.tally("disjoint", pts.size)
        if np.any(owner[pts] >= 0):
            rep.fail("disjoint", member=i)
        owner[pts] = i
        rep.absorb(block_commutes(ctx, b), prefix=f"H{i}")
    rep.tally("partition")
    if np.any(owner[1:] < 0):
        rep.fail("partition", missing=int(np.sum(owner[1:] < 0)))
    # Tr(D_a D_b) != 0 only if b = -a, so blocks are orthogonal iff -a stays in a's block
    neg = W.join(ctx.V.neg(W.split(np.arange(1, W.size))[0]), ctx.V.neg(W.split(np.arange(1, W.size))[1]))
    cross = owner[neg] != owner[1:]
    rep.tally("killing_symbolic", W.size - 1)
    if cross.any():
        rep.fail("killing_symbolic", int(cross.sum()), point=int(np.flatnonzero(cross)[0] + 1))
    if dense_check:
        mats = [[dense(g) for g in b.generators] for b in blocks]
        flat = [np.stack([M.ravel() for M in ms]) for ms in mats]
        for i in range(len(blocks)):
            A = np.stack(mats[i])
            comm = np.einsum("aij,bjk->abik", A, A) - np.einsum("bij,ajk->abik", A, A)
            rep.tally("abelian_dense", len(A) ** 2)
            if not _close(comm, 0):
                rep.fail("abelian_dense", member=i)
            for j in range(i + 1, len(blocks)):
                # Tr(AB) = sum_{ik} A_ik B_ki
                Bt = np.stack([M.T.ravel() for M in mats[j]])
                K = 2 * ctx.n * (flat[i] @ Bt.T)
                rep.tally("killing_dense", K.size)
                if not _close(K, 0):
                    rep.fail("killing_dense", members=[i, j])
    return rep


# ---------------------------------------------------------------------------
# eigenvectors of the Cartan blocks
# ---------------------------------------------------------------------------

def check_eigenvectors(ms, samples: int | None = None, seed: int = 0) -> Report:
    """Apply D_{u,h(u)} to every vector of each exponent basis.

    The image must be a constant phase times the vector, and the phase must
    equal the closed-form eigenvalue attached by the builder.  With
    ``samples`` set, (basis, u) pairs are drawn from a seeded generator and
    all rows v are checked for each draw.
    """
    ctx = PauliCtx(ms.space)
    V, m = ctx.V, ctx.m
    rep = Report(f"eigenvectors[{ms.provenance}]", mode="exhaustive" if samples is None else "sampled")
    idx = [i for i, b in enumerate(ms.bases) if b.kind == "exponent" and b.slope is not None]
    skipped = [i for i, b in enumerate(ms.bases) if b.kind == "exponent" and b.slope is None]
    rep.details.update(bases_checked=len(idx), bases_without_slope=len(skipped), seed=seed)
    w = V.points()
    vs = V.points()
    rng = np.random.default_rng(seed)
    if samples is None:
        jobs = [(i, V.points()) for i in idx]
    else:
        draws = rng.integers(0, len(idx), size=samples)
        us = rng.integers(0, V.n, size=samples)
        jobs = [(idx[b], us[draws == b]) for b in range(len(idx)) if np.any(draws == b)]
    for i, us in jobs:
        B = ms.bases[i]
        T = ms.table(i)
        hs = B.slope(us)
        for u, h in zip(np.atleast_1d(us), np.atleast_1d(hs)):
            # row v of D b: coefficient at w' = u + w is T[v, w] + eps tr(h.w)
            shifted = V.add(u, w)
            img = np.empty_like(T)
            img[:, shifted] = (T + ctx.eps * V.trdot(h, w)[None, :]) % m
            diff = (img - T) % m
            const = np.all(diff == diff[:, :1], axis=1)
            rep.tally("triples", V.n)
            if not const.all():
                rep.fail("eigenvector", int((~const).sum()), basis=B.label, u=u, v=np.flatnonzero(~const)[0])
                continue
            expect = np.asarray(B.eigen(np.full(vs.shape, u), vs)) % m
            bad = np.flatnonzero(diff[:, 0] != expect)
            if bad.size:
                rep.fail("eigenvalue", bad.size, basis=B.label, u=u, v=bad[0],
                         found=diff[bad[0], 0], expected=expect[bad[0]])
    return rep
