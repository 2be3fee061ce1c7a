"""Symplectic spreads of W = V (+) V over GF(p).

Points of W are integers ``z = u + n*v`` with u, v points of V, so the
base-p digits of z are the GF(p)-coordinates of u followed by those of v.
Subspaces are stored as reduced row-echelon basis matrices over GF(p).
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .ff import FieldCtx, Space, field_for_order, field_from_json, make_field
from .report import Report
from .semifield import Presemifield, catalog

MAX_ENUM_POINTS = 1 << 24
MAX_GRAPH_N = 3**6
EXHAUSTIVE_GL_POINTS = 3**4


class SpreadError(ValueError):
    pass


# ---------------------------------------------------------------------------
# linear algebra over GF(p)
# ---------------------------------------------------------------------------

def rref(M, p: int) -> np.ndarray:
    """Reduced row-echelon form over GF(p) with zero rows dropped."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        r += 1
    return A[:r]


def rank(M, p: int) -> int:
    return rref(M, p).shape[0]


@functools.lru_cache(maxsize=None)
def _coefficient_grid(p: int, k: int) -> np.ndarray:
    w = p ** np.arange(k, dtype=np.int64)
    return (np.arange(p**k, dtype=np.int64)[:, None] // w) % p


# ---------------------------------------------------------------------------
# the symplectic space
# ---------------------------------------------------------------------------

class SymplecticSpace:
    """W = V (+) V with <(u,v),(u',v')> = tr(u.v' - v.u')."""

    def __init__(self, space: Space):
        self.V = space
        self.ctx = space.ctx
        self.p = space.p
        self.n = space.n
        self.rdim = space.rdim
        self.dim = 2 * space.rdim
        self.size = self.n * self.n
        self._w = self.p ** np.arange(self.dim, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, SymplecticSpace) and self.V == other.V

    def __hash__(self):
        return hash(("W", self.V))

    def split(self, z):
        z = np.asarray(z, dtype=np.int64)
        return z % self.n, z // self.n

    def join(self, u, v):
        return np.asarray(u, dtype=np.int64) + self.n * np.asarray(v, dtype=np.int64)

    def form(self, z1, z2):
        u1, v1 = self.split(z1)
        u2, v2 = self.split(z2)
        val = (self.V.trdot(u1, v2) - self.V.trdot(v1, u2)) % self.p
        return int(val) if np.ndim(val) == 0 else val

    def digits(self, z):
        return (np.asarray(z, dtype=np.int64)[..., None] // self._w) % self.p

    def from_digits(self, d):
        return (np.asarray(d, dtype=np.int64) % self.p) @ self._w

    def unit_points(self) -> np.ndarray:
        return self._w.copy()

    @functools.cached_property
    def gram(self) -> np.ndarray:
        e = self.unit_points()
        return np.asarray(self.form(e[:, None], e[None, :]), dtype=np.int64)

    def span(self, basis) -> np.ndarray:
        """All points of the GF(p)-span of the basis rows."""
        basis = np.asarray(basis, dtype=np.int64)
        grid = _coefficient_grid(self.p, basis.shape[0])
        return self.from_digits(grid @ basis)

    def graph_basis(self, h_units) -> np.ndarray:
        """Basis of {(x, h(x))} given h on the GF(p) unit vectors of V."""
        e = self.V.unit_vectors()
        return self.digits(self.join(e, np.asarray(h_units, dtype=np.int64)))

    def vertical_basis(self) -> np.ndarray:
        return self.digits(self.join(0, self.V.unit_vectors()))

    def to_json(self) -> dict:
        return {"field": self.ctx.to_json(), "shape": self.V.dim}


# ---------------------------------------------------------------------------
# spreads
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Member:
    basis: np.ndarray
    label: object = None
    slope: np.ndarray | None = None   # h with member = {(x, h(x))}, when known

    def key(self) -> bytes:
        return self.basis.astype(np.int8).tobytes()


def make_member(W: SymplecticSpace, basis, label=None, slope=None) -> Member:
    return Member(rref(basis, W.p), label, slope)


def graph_member(W: SymplecticSpace, h, label=None) -> Member:
    h = np.asarray(h, dtype=np.int64)
    return make_member(W, W.graph_basis(h[W.V.unit_vectors()]), label, h)


def vertical_member(W: SymplecticSpace, label="inf") -> Member:
    return make_member(W, W.vertical_basis(), label)


@dataclass(eq=False)
class Spread:
    space: SymplecticSpace
    members: list
    provenance: str = "external"
    details: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.members)

    def keys(self) -> list[bytes]:
        return sorted(m.key() for m in self.members)

    def same_members(self, other: "Spread") -> bool:
        return self.keys() == other.keys()

    def member_points(self, i: int) -> np.ndarray:
        return self.space.span(self.members[i].basis)

    def to_json(self) -> dict:
        W = self.space
        return {
            "p": W.p,
            "r'": W.rdim,
            "form": "trace",
            "field": W.ctx.to_json(),
            "shape": W.V.dim,
            "provenance": self.provenance,
            "members": [m.basis.tolist() for m in self.members],
        }


def spread_from_json(d: dict) -> Spread:
    if d.get("form", "trace") != "trace":
        raise SpreadError("only the trace form is supported")
    p = int(d["p"])
    rprime = int(d.get("r'", d.get("r_prime", 0)))
    if "field" in d:
        ctx = field_from_json(d["field"])
        dim = int(d.get("shape", 1))
    else:
        ctx, dim = make_field(p, rprime), 1
    if ctx.p != p or ctx.r * dim != rprime:
        raise SpreadError("field/shape disagree with p and r'")
    W = SymplecticSpace(Space(ctx, dim))
    members = []
    for rows in d["members"]:
        B = np.asarray(rows, dtype=np.int64)
        if B.ndim != 2 or B.shape[1] != W.dim:
            raise SpreadError(f"member basis must have {W.dim} columns")
        members.append(make_member(W, B))
    return Spread(W, members, "external")


def spread_from_presemifield(s: Presemifield, provenance: str = "presemifield") -> Spread:
    """(0, V) together with {(x, x o y)} for every y in V."""
    if s.n > MAX_GRAPH_N:
        raise SpreadError(f"|V| = {s.n} too large to list member slopes")
    W = SymplecticSpace(s.space)
    pts = s.space.points()
    members = [vertical_member(W)]
    for y in pts:
        members.append(graph_member(W, s.mul(pts, np.full(pts.shape, y)), int(y)))
    return Spread(W, members, provenance, {"presemifield": s.name})


def is_spread(sp: Spread) -> Report:
    W = sp.space
    rep = Report("is_spread", mode="exhaustive")
    rep.tally("member_count")
    if len(sp) != W.n + 1:
        rep.fail("member_count", found=len(sp), expected=W.n + 1)
    if W.size > MAX_ENUM_POINTS:
        raise SpreadError("point enumeration beyond 2^24 points is not supported")
    owner = np.full(W.size, -1, dtype=np.int64)
    for i, m in enumerate(sp.members):
        rep.tally("dimension")
        if m.basis.shape[0] != W.rdim:
            rep.fail("dimension", member=i, rank=m.basis.shape[0])
        pts = W.span(m.basis)
        if m.slope is not None:
            rep.tally("graph_consistent")
            graph = W.join(W.V.points(), m.slope)
            if not np.array_equal(np.sort(pts), np.sort(graph)):
                rep.fail("graph_consistent", member=i)
        pts = pts[pts != 0]
        clash = owner[pts] >= 0
        rep.tally("points", pts.size)
        if clash.any():
            j = np.flatnonzero(clash)[0]
            rep.fail("disjoint", int(clash.sum()), point=pts[j], members=[int(owner[pts[j]]), i])
        owner[pts] = i
    missing = np.flatnonzero(owner[1:] < 0)
    rep.tally("coverage", W.size - 1)
    if missing.size:
        rep.fail("coverage", missing.size, point=missing[0] + 1)
    return rep


def is_symplectic(sp: Spread) -> Report:
    """Each member totally isotropic (basis pairs suffice by bilinearity)."""
    W = sp.space
    J = W.gram
    rep = Report("is_symplectic", mode="exhaustive")
    for i, m in enumerate(sp.members):
        G = (m.basis @ J @ m.basis.T) % W.p
        rep.tally("basis_pairs", G.size)
        bad = np.argwhere(G)
        if bad.size:
            a, b = bad[0]
            rep.fail("isotropic", len(bad) // 2, member=i, label=m.label,
                     z1=W.from_digits(m.basis[a]), z2=W.from_digits(m.basis[b]))
    return rep


# ---------------------------------------------------------------------------
# slope closure
# ---------------------------------------------------------------------------

def slope_closure(sp: Spread) -> Report:
    """Are the slope maps {L_i} (with 0) closed under addition?"""
    W = sp.space
    r = W.rdim
    rep = Report("slope_closure", mode="exhaustive")
    slopes, skipped = [], []
    for i, m in enumerate(sp.members):
        B = m.basis
        if B.shape[0] == r and np.array_equal(B[:, :r], np.eye(r, dtype=np.int64)):
            slopes.append(B[:, r:] % W.p)
        else:
            skipped.append(i)
    keys = {L.astype(np.int8).tobytes() for L in slopes}
    zero = np.zeros((r, r), dtype=np.int64).astype(np.int8).tobytes()
    has_zero = zero in keys
    keys.add(zero)
    closed = True
    witness = None
    for a in range(len(slopes)):
        S = (slopes[a][None] + np.stack(slopes[a:])) % W.p
        rep.tally("pairs", len(S))
        for b, L in enumerate(S):
            if L.astype(np.int8).tobytes() not in keys:
                closed = False
                witness = (a, a + b)
                break
        if not closed:
            break
    rep.details.update(closed=closed, graphs=len(slopes), skipped_members=skipped,
                       contains_horizontal=has_zero)
    if witness is not None:
        rep.details["witness_members"] = list(witness)
    return rep


def slope_closure_test(sp: Spread) -> bool:
    return bool(slope_closure(sp).details["closed"])


# ---------------------------------------------------------------------------
# BBLP net replacement
# ---------------------------------------------------------------------------

def bblp_beta_coeffs(t: int) -> list[int]:
    if t % 2 == 0:
        raise SpreadError("rho must have odd order")
    pattern = (1, 1, -1, -1) if t % 4 == 1 else (-1, 1, 1, -1)
    return [pattern[i % 4] for i in range(t)]


def bblp_alpha(ctx: FieldCtx, k: int, u):
    return ctx.add(ctx.frob(u, -k), ctx.frob(u, k))


def bblp_beta(ctx: FieldCtx, k: int, v):
    t = ctx.r // np.gcd(k, ctx.r)
    acc = 0
    for i, a in enumerate(bblp_beta_coeffs(t)):
        acc = ctx.add(acc, ctx.smul(a, ctx.frob(v, k * i)))
    return ctx.mul(ctx.half, acc)


def _s_representatives(ctx: FieldCtx) -> list[int]:
    reps = set()
    for s in range(1, ctx.q):
        reps.add(min(s, int(ctx.neg(s)), key=ctx.coeffs))
    return sorted(reps, key=ctx.coeffs)


def sigma_image(W: SymplecticSpace, m: Member, s: int) -> Member:
    """sigma_s(v, w) = (s v, s^-1 w) applied to a graph member."""
    F = W.ctx
    x = W.V.points()
    sinv = F.inv(s)
    h = F.mul(sinv, m.slope[F.mul(sinv, x)])
    return graph_member(W, h)


def tau_image(W: SymplecticSpace, m: Member) -> Member:
    r = W.rdim
    B = np.concatenate([m.basis[:, r:], m.basis[:, :r]], axis=1)
    return make_member(W, B)


def bblp_spread(q: int, k: int = 1, modulus=None) -> Spread:
    """Net replacement on the BKLA spread, built by orbit surgery and by formula.

    The two member lists must agree; a mismatch raises :class:`SpreadError`.
    """
    bkla = catalog("bkla", q, k=k, **({"modulus": modulus} if modulus else {}))
    F = bkla.ctx
    k = bkla.params["k"]
    W = SymplecticSpace(bkla.space)
    sigma = spread_from_presemifield(bkla, "BKLA")
    x = F.elements()

    # (a) orbit surgery
    by_key = {m.key(): i for i, m in enumerate(sigma.members)}
    w1 = next(m for m in sigma.members if m.label == 1)
    orbit_keys = {}
    for s in range(1, F.q):
        img = sigma_image(W, w1, s)
        orbit_keys.setdefault(img.key(), s)
    missing = [key for key in orbit_keys if key not in by_key]
    if missing:
        raise SpreadError("sigma_s orbit of W_1 leaves the BKLA spread")
    n_idx = {by_key[key] for key in orbit_keys}
    surgery = [m for i, m in enumerate(sigma.members) if i not in n_idx]
    surgery += [tau_image(W, sigma.members[i]) for i in sorted(n_idx)]

    # (b) explicit member list
    horiz = graph_member(W, np.zeros(F.q, dtype=np.int64), ("m", 0))
    formula = [vertical_member(W), horiz]
    nonsq = [m for m in range(1, F.q) if not F.is_square(m)]
    for m in nonsq:
        formula.append(graph_member(W, bkla.mul(x, np.full(F.q, m)), ("m", m)))
    for s in _s_representatives(F):
        h = F.mul(s, bblp_beta(F, k, F.mul(x, s)))
        formula.append(graph_member(W, h, ("s", s)))

    sp_a = Spread(W, surgery, "BBLP")
    sp_b = Spread(W, formula, "BBLP")
    if not sp_a.same_members(sp_b):
        raise SpreadError("BBLP orbit surgery and explicit formula disagree")
    census = orbit_census(W, sigma)
    sp_b.details.update(k=k, replaced=len(n_idx), nonsquare_members=len(nonsq),
                        s_classes=len(formula) - 2 - len(nonsq), orbit_sizes=census,
                        paths_agree=True)
    return sp_b


def orbit_census(W: SymplecticSpace, sp: Spread) -> list[int]:
    """Sizes of the orbits of {sigma_s} on the members of a spread."""
    F = W.ctx
    keys = {m.key(): i for i, m in enumerate(sp.members)}
    seen = set()
    sizes = []
    for i, m in enumerate(sp.members):
        if i in seen:
            continue
        orbit = {i}
        if m.slope is not None:
            for s in range(2, F.q):
                orbit.add(keys[sigma_image(W, m, s).key()])
        seen |= orbit
        sizes.append(len(orbit))
    return sorted(sizes)


# ---------------------------------------------------------------------------
# Suzuki-Tits spread
# ---------------------------------------------------------------------------

def suzuki_k(q: int) -> int:
    F = field_for_order(q)
    if F.p != 2 or F.r % 2 == 0 or F.r < 3:
        raise SpreadError("Suzuki spread needs q = 2^(2k+1) with k >= 1")
    return (F.r - 1) // 2


def suzuki_matrix(F: FieldCtx, k: int, alpha, beta):
    """Entries (a, g, b) of M_c = [[a, g], [g, b]] for c = (alpha, beta)."""
    g = F.add(F.frob(alpha, -(k + 1)), F.mul(beta, F.frob(beta, -(k + 1))))
    return alpha, g, beta


def suzuki_slope(V: Space, k: int, c: int, x):
    """x M_c for row vectors x in V = F (+) F."""
    F = V.ctx
    a, g, b = suzuki_matrix(F, k, *V.split(c))
    x1, x2 = V.split(x)
    return V.join((F.add(F.mul(x1, a), F.mul(x2, g)), F.add(F.mul(x1, g), F.mul(x2, b))))


def suzuki_spread(q: int) -> Spread:
    k = suzuki_k(q)
    F = field_for_order(q)
    V = Space(F, 2)
    W = SymplecticSpace(V)
    x = V.points()
    members = [vertical_member(W)]
    for c in range(V.n):
        members.append(graph_member(W, suzuki_slope(V, k, c, x), int(c)))
    return Spread(W, members, "Suzuki", {"k": k})


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------

@dataclass
class AutomorphismCount:
    order: int
    complete: bool
    examined: int
    method: str


def _form_multiplier(A: np.ndarray, J: np.ndarray, p: int):
    G = (A @ J @ A.T) % p
    if np.array_equal(G, J % p):
        return 1
    if np.array_equal(G, (-J) % p):
        return -1
    return None


def automorphism_order(sp: Spread, budget: int = 10**7) -> AutomorphismCount:
    """|{A in Sp+-(W) : A permutes the members}| by enumeration of GL(2r', p).

    Maps act on row vectors: z -> z A.  Exceeding the budget returns a
    partial count with ``complete=False``.
    """
    W = sp.space
    p, d = W.p, W.dim
    if W.size > EXHAUSTIVE_GL_POINTS:
        raise SpreadError(f"exhaustive enumeration limited to |W| <= {EXHAUSTIVE_GL_POINTS}")
    J = W.gram
    keys = {m.key() for m in sp.members}
    grid = _coefficient_grid(p, d)
    order = examined = 0
    # enumerate matrices row by row, rows drawn from nonzero vectors
    rows = grid[1:]
    total = len(rows) ** d
    for idx in np.ndindex(*([len(rows)] * d)):
        if examined >= budget:
            return AutomorphismCount(order, False, examined, "gl-enumeration")
        examined += 1
        A = rows[list(idx)]
        if _form_multiplier(A, J, p) is None:
            continue
        if rank(A, p) < d:
            continue
        if all(rref(m.basis @ A, p).astype(np.int8).tobytes() in keys for m in sp.members):
            order += 1
    return AutomorphismCount(order, examined == total, examined, "gl-enumeration")


def automorphism_order_oracle(sp: Spread, max_group: int = 10**6) -> AutomorphismCount:
    """Independent count: generate Sp+-(W) as a permutation group on points.

    Generators are the symplectic transvections z -> z + <z, a> a together
    with the coordinate swap (an anti-isometry); the group is closed by
    breadth-first search and each element is tested on member point sets.
    """
    W = sp.space
    pts = np.arange(W.size, dtype=np.int64)
    add_table = W.from_digits((W.digits(pts)[:, None, :] + W.digits(pts)[None, :, :]))
    gens = []
    for a in range(1, W.size):
        c = W.form(pts, a)
        ca = W.from_digits((c[:, None] * W.digits(a)[None, :]))
        gens.append(add_table[pts, ca])
    u, v = W.split(pts)
    gens.append(W.join(v, u))
    gens = sorted({tuple(g.tolist()) for g in gens})
    ident = tuple(pts.tolist())
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        garr = np.asarray(g)
        for h in gens:
            comp = tuple(np.asarray(h)[garr].tolist())
            if comp not in seen:
                if len(seen) >= max_group:
                    return AutomorphismCount(0, False, len(seen), "permutation-oracle")
                seen.add(comp)
                queue.append(comp)
    sets = {frozenset(sp.member_points(i).tolist()) for i in range(len(sp))}
    order = 0
    for g in seen:
        garr = np.asarray(g)
        if all(frozenset(garr[sp.member_points(i)].tolist()) in sets for i in range(len(sp))):
            order += 1
    return AutomorphismCount(order, True, len(seen), "permutation-oracle")


def desarguesian_spread(q: int) -> Spread:
    return spread_from_presemifield(catalog("field", q), "presemifield")
