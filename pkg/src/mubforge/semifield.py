"""Presemifields, planar and pseudo-planar functions.

A :class:`Presemifield` is a vectorised product ``mul(x, y)`` on the points
of V = F or V = F (+) F (see :class:`mubforge.ff.Space`).  Products on V = F
may also carry a *coefficient form* ``{(i, j): c}`` meaning
``x * y = sum c x^(p^i) y^(p^j)``; Knuth duals and Galois-ring lifts need it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ff import FieldCtx, Space, field_for_order, field_from_json
from .report import Report

EXHAUSTIVE_DISTRIB = 81
EXHAUSTIVE_ZERO_DIV = 729
TABLE_LIMIT = 3**6


class SemifieldError(ValueError):
    pass


class CatalogError(SemifieldError):
    pass


# ---------------------------------------------------------------------------
# coefficient forms
# ---------------------------------------------------------------------------

def eval_form(ctx: FieldCtx, coeffs: dict, x, y):
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    acc = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    for (i, j), c in coeffs.items():
        if c:
            acc = ctx.add(acc, ctx.mul(c, ctx.mul(ctx.frob(x, i), ctx.frob(y, j))))
    return acc


def clean_coeffs(ctx: FieldCtx, items) -> dict:
    """Sum duplicate (i, j) keys (indices mod r) and drop zeros."""
    out: dict = {}
    for (i, j), c in items:
        key = (i % ctx.r, j % ctx.r)
        out[key] = ctx.add(out.get(key, 0), int(c))
    return {k: int(v) for k, v in sorted(out.items()) if v}


def dual_coeffs(ctx: FieldCtx, coeffs: dict) -> dict:
    """Coefficients of the symplectic partner obtained through the dual spread.

    For ``x * y = sum c_ij x^(p^i) y^(p^j)`` the annihilator of the member
    indexed by y under tr(u.v' - v.u') is ``{(u, v): v = sum c_ij^(p^(r-i))
    u^(p^(r-i)) y^(p^(j-i))}``; swapping the arguments gives
    ``x o y = sum c_ij^(p^(r-i)) x^(p^(j-i)) y^(p^(r-i))``.
    """
    r = ctx.r
    return clean_coeffs(ctx, [(((j - i) % r, (r - i) % r), ctx.frob(c, r - i))
                              for (i, j), c in coeffs.items()])


# ---------------------------------------------------------------------------
# presemifield
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Presemifield:
    name: str
    space: Space
    mul: Callable
    coeffs: dict | None = None
    commutative: bool = False
    symplectic: bool = False
    params: dict = field(default_factory=dict)
    descriptor: dict | None = None

    @property
    def ctx(self) -> FieldCtx:
        return self.space.ctx

    @property
    def n(self) -> int:
        return self.space.n

    def __call__(self, x, y):
        return self.mul(x, y)

    def table(self) -> np.ndarray:
        if self.n > TABLE_LIMIT:
            raise SemifieldError(f"refusing to materialise a {self.n}x{self.n} table")
        pts = self.space.points()
        return self.mul(pts[:, None], pts[None, :])

    def to_json(self) -> dict:
        if self.descriptor is not None:
            return dict(self.descriptor)
        out = {"name": self.name, "field": self.ctx.to_json(), "shape": self.space.dim,
               "commutative": self.commutative, "symplectic": self.symplectic}
        if self.coeffs is not None:
            out["coefficients"] = [{"coeff": self.ctx.coeffs(c), "i": i, "j": j}
                                   for (i, j), c in sorted(self.coeffs.items())]
        else:
            out["table"] = self.table().tolist()
        return out


def from_coeffs(name: str, ctx: FieldCtx, coeffs: dict, **flags) -> Presemifield:
    coeffs = clean_coeffs(ctx, coeffs.items())
    return Presemifield(name, Space(ctx, 1), lambda x, y: eval_form(ctx, coeffs, x, y),
                        coeffs=coeffs, **flags)


def from_table(name: str, space: Space, table, **flags) -> Presemifield:
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (space.n, space.n):
        raise SemifieldError(f"table must be {space.n}x{space.n}")
    return Presemifield(name, space, lambda x, y: table[np.asarray(x), np.asarray(y)], **flags)


def presemifield_from_json(d: dict) -> Presemifield:
    if "family" in d:
        return catalog(d["family"], int(d["q"]), **d.get("params", {}))
    ctx = field_from_json(d["field"])
    flags = {"commutative": bool(d.get("commutative", False)),
             "symplectic": bool(d.get("symplectic", False))}
    name = d.get("name", "imported")
    if "coefficients" in d:
        coeffs = {(int(t["i"]), int(t["j"])): _coeff_value(ctx, t["coeff"]) for t in d["coefficients"]}
        return from_coeffs(name, ctx, coeffs, **flags)
    if "table" in d:
        return from_table(name, Space(ctx, int(d.get("shape", 1))), d["table"], **flags)
    raise SemifieldError("presemifield JSON needs 'family', 'coefficients' or 'table'")


def _coeff_value(ctx: FieldCtx, c) -> int:
    if isinstance(c, (list, tuple)):
        return ctx.elem(c)
    return int(c)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

CATALOG = {
    "field": dict(kind="commutative+symplectic", shape="F", constraints="any q",
                  native_q=[2, 3, 4, 5, 7, 8, 9, 16, 27], reference="Desarguesian (finite field)"),
    "albert": dict(kind="commutative", shape="F",
                   constraints="q odd; rho = p^k nontrivial, F of odd degree over Fix(rho)",
                   native_q=[27], reference="Albert generalized twisted field",
                   partner="albert-symplectic"),
    "albert-symplectic": dict(kind="symplectic", shape="F", constraints="as albert",
                              native_q=[27], reference="Knuth dual of the Albert twisted field"),
    "bkla": dict(kind="symplectic", shape="F", constraints="as albert", native_q=[27],
                 reference="Bader-Kantor-Lunardon spread (twisted field)"),
    "dickson": dict(kind="commutative", shape="F+F",
                    constraints="q odd; j nonsquare; sigma = p^s nontrivial", native_q=[9],
                    reference="Dickson commutative semifield", partner="knuth"),
    "knuth": dict(kind="symplectic", shape="F+F", constraints="as dickson", native_q=[9],
                  reference="Knuth symplectic partner of Dickson"),
    "cohen-ganley": dict(kind="commutative", shape="F+F", constraints="q = 3^r >= 9; j nonsquare",
                         native_q=[9], reference="Cohen-Ganley commutative semifield",
                         partner="thas-payne"),
    "thas-payne": dict(kind="symplectic", shape="F+F", constraints="as cohen-ganley",
                       native_q=[9], reference="Thas-Payne symplectic presemifield"),
    "ganley": dict(kind="commutative", shape="F+F", constraints="q = 3^t, t >= 3 odd",
                   native_q=[27], reference="Ganley commutative semifield",
                   partner="ganley-symplectic"),
    "ganley-symplectic": dict(kind="symplectic", shape="F+F", constraints="as ganley",
                              native_q=[27], reference="symplectic partner of Ganley"),
    "penttila-williams": dict(kind="symplectic", shape="F+F", constraints="q = 3^5",
                              native_q=[243], reference="Penttila-Williams sporadic semifield"),
    "penttila-williams-commutative": dict(kind="commutative", shape="F+F",
                                          constraints="q = 3^5", native_q=[243],
                                          reference="commutative partner of Penttila-Williams",
                                          partner="penttila-williams"),
    "suzuki": dict(kind="spread", shape="F+F", constraints="q = 2^(2k+1), k >= 1", native_q=[8],
                   reference="Luneburg plane / Suzuki-Tits spread"),
    "bblp": dict(kind="spread", shape="F", constraints="q odd, BKLA constraints on rho",
                 native_q=[27], reference="Ball-Bamberg-Lavrauw-Penttila net replacement"),
    "coulter-matthews": dict(kind="planar", shape="F",
                             constraints="q = 3^r, gcd(k, 2r) = 1, k != +-1 mod 2r",
                             native_q=[243], reference="Coulter-Matthews planar monomial"),
    "pseudo-planar": dict(kind="pseudo-planar", shape="F", constraints="q = 2^r",
                          native_q=[4, 8], reference="pseudo-planar functions (Zhou planar)"),
}

PARTNERS = {name: e["partner"] for name, e in CATALOG.items() if "partner" in e}

PW_READINGS = ("verbatim", "alternate")


def catalog_listing() -> list[dict]:
    return [{"name": k, **v} for k, v in CATALOG.items()]


def _albert_k(ctx: FieldCtx, k):
    if ctx.p == 2:
        raise CatalogError("twisted-field families need odd characteristic")
    k = 1 if k is None else int(k)
    if k % ctx.r == 0:
        raise CatalogError("rho = p^k must be a nontrivial automorphism (k not divisible by r)")
    if (ctx.r // math.gcd(k, ctx.r)) % 2 == 0:
        raise CatalogError("F must have odd degree over the fixed field of rho")
    return k % ctx.r


def _nonsquare(ctx: FieldCtx, j):
    if ctx.p == 2:
        raise CatalogError("family needs odd q")
    if j is None:
        return ctx.first_nonsquare()
    j = _coeff_value(ctx, j)
    if ctx.is_square(j):
        raise CatalogError(f"j = {ctx.coeffs(j)} must be a nonsquare")
    return j


def catalog(name: str, q: int, **params) -> Presemifield:
    """Construct a cataloged presemifield over GF(q) (points in F or F (+) F)."""
    name = name.lower()
    if name not in CATALOG or CATALOG[name]["kind"] in ("spread", "planar", "pseudo-planar"):
        raise CatalogError(f"unknown presemifield family {name!r}")
    F = field_for_order(q, params.pop("modulus", None))
    descriptor = {"family": name, "q": q, "params": dict(params)}
    p, r = F.p, F.r
    half = F.half if p > 2 else None

    if name == "field":
        s = from_coeffs("field", F, {(0, 0): 1}, commutative=True, symplectic=True)
    elif name in ("albert", "albert-symplectic", "bkla"):
        k = _albert_k(F, params.get("k"))
        params["k"] = k
        if name == "albert":
            coeffs = {(k, 0): half, (0, k): half}
        elif name == "albert-symplectic":
            coeffs = {(k, 0): half, (r - k, r - k): half}
        else:
            coeffs = {(r - k, 0): 1, (k, k): 1}
        s = from_coeffs(name, F, coeffs, commutative=(name == "albert"),
                        symplectic=(name != "albert"))
    else:
        s = _two_dim_family(name, F, params)
    s.params = params
    s.descriptor = {**descriptor, "params": {k: v for k, v in params.items()}}
    return s


def _two_dim_family(name: str, F: FieldCtx, params: dict) -> Presemifield:
    V = Space(F, 2)
    p, r = F.p, F.r
    add, mul, frob, neg = F.add, F.mul, F.frob, F.neg

    def pair(fn):
        def product(x, y):
            a, b = V.split(x)
            c, d = V.split(y)
            u, v = fn(a, b, c, d)
            return V.join((u, v))
        return product

    if name in ("dickson", "knuth"):
        j = _nonsquare(F, params.get("j"))
        s_exp = int(params.get("s", 1)) % r if r > 1 else 0
        if s_exp == 0:
            raise CatalogError("sigma = p^s must be nontrivial (needs r > 1 and s not divisible by r)")
        params.update(j=F.coeffs(j), s=s_exp)
        if name == "dickson":
            fn = lambda a, b, c, d: (add(mul(a, c), mul(j, mul(frob(b, s_exp), frob(d, s_exp)))),
                                     add(mul(a, d), mul(b, c)))
        else:
            js = frob(j, -s_exp)
            fn = lambda a, b, c, d: (add(mul(a, c), mul(b, d)),
                                     add(mul(a, d), mul(js, mul(b, frob(c, -s_exp)))))
        comm = name == "dickson"
    elif name in ("cohen-ganley", "thas-payne"):
        if p != 3 or r < 2:
            raise CatalogError("q = 3^r >= 9 required")
        j = _nonsquare(F, params.get("j"))
        params.update(j=F.coeffs(j))
        if name == "cohen-ganley":
            j3 = F.pow(j, 3)

            def fn(a, b, c, d):
                bd = mul(b, d)
                return (add(add(mul(a, c), mul(j, bd)), mul(j3, frob(bd, 2))),
                        add(add(mul(a, d), mul(b, c)), mul(j, frob(bd, 1))))
        else:
            jc = frob(j, -1)

            def fn(a, b, c, d):
                second = F.sum([mul(a, d), mul(j, mul(b, c)), mul(jc, mul(b, frob(c, -2))),
                                mul(jc, mul(b, frob(d, -1)))])
                return add(mul(a, c), mul(b, d)), second
        comm = name == "cohen-ganley"
    elif name in ("ganley", "ganley-symplectic"):
        if p != 3 or r < 3 or r % 2 == 0:
            raise CatalogError("q = 3^t with t >= 3 odd required")
        if name == "ganley":
            def fn(a, b, c, d):
                first = F.sub(F.sub(mul(a, c), mul(frob(b, 2), d)), mul(b, frob(d, 2)))
                return first, F.sum([mul(a, d), mul(b, c), mul(frob(b, 1), frob(d, 1))])
        else:
            def fn(a, b, c, d):
                second = F.sub(F.sub(add(mul(a, d), mul(b, frob(d, -1))),
                                     mul(frob(b, -2), frob(c, -2))), mul(frob(b, 2), c))
                return add(mul(a, c), mul(b, d)), second
        comm = name == "ganley"
    elif name in ("penttila-williams", "penttila-williams-commutative"):
        if p != 3 or r != 5:
            raise CatalogError("Penttila-Williams is defined only for q = 3^5")
        reading = params.get("reading", "verbatim")
        if reading not in PW_READINGS:
            raise CatalogError(f"reading must be one of {PW_READINGS}")
        params["reading"] = reading
        if name == "penttila-williams":
            if reading == "verbatim":   # (ac + bd, ad + b d^9 + b c^27)
                fn = lambda a, b, c, d: (add(mul(a, c), mul(b, d)),
                                         F.sum([mul(a, d), mul(b, frob(d, 2)), mul(b, frob(c, 3))]))
            else:                       # (ac + bd, ad + (bd)^9 + (bc)^27)
                fn = lambda a, b, c, d: (add(mul(a, c), mul(b, d)),
                                         F.sum([mul(a, d), frob(mul(b, d), 2), frob(mul(b, c), 3)]))
            comm = False
        else:
            if reading == "verbatim":   # (ac + (bd)^9, ad + bc + (bd)^27)
                fn = lambda a, b, c, d: (add(mul(a, c), frob(mul(b, d), 2)),
                                         F.sum([mul(a, d), mul(b, c), frob(mul(b, d), 3)]))
            else:                       # (ac + b d^9, ad + bc + b d^27)
                fn = lambda a, b, c, d: (add(mul(a, c), mul(b, frob(d, 2))),
                                         F.sum([mul(a, d), mul(b, c), mul(b, frob(d, 3))]))
            comm = True
    else:
        raise CatalogError(f"unknown family {name!r}")
    return Presemifield(name, V, pair(fn), commutative=comm, symplectic=not comm)


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------

def verify_presemifield(s: Presemifield, samples: int = 10**6, seed: int = 0,
                        injectivity_samples: int = 64) -> Report:
    """Distributive laws, absence of zero divisors and (if claimed) commutativity."""
    V, n = s.space, s.n
    rng = np.random.default_rng(seed)
    rep = Report(f"presemifield[{s.name}]", mode="exhaustive" if n <= EXHAUSTIVE_DISTRIB else "sampled")
    rep.details.update(n=n, samples=samples if n > EXHAUSTIVE_DISTRIB else None, seed=seed)

    def triples():
        if n <= EXHAUSTIVE_DISTRIB:
            g = np.indices((n, n, n)).reshape(3, -1)
            yield g[0], g[1], g[2]
        else:
            left = samples
            while left > 0:
                k = min(left, 1 << 18)
                yield tuple(rng.integers(0, n, size=(3, k)))
                left -= k

    for x, y, z in triples():
        lhs = s.mul(V.add(x, y), z)
        rhs = V.add(s.mul(x, z), s.mul(y, z))
        bad = np.flatnonzero(lhs != rhs)
        rep.tally("left_distributive", x.size)
        if bad.size:
            i = bad[0]
            rep.fail("left_distributive", bad.size, x=x[i], y=y[i], z=z[i])
        lhs = s.mul(x, V.add(y, z))
        rhs = V.add(s.mul(x, y), s.mul(x, z))
        bad = np.flatnonzero(lhs != rhs)
        rep.tally("right_distributive", x.size)
        if bad.size:
            i = bad[0]
            rep.fail("right_distributive", bad.size, x=x[i], y=y[i], z=z[i])

    if n <= EXHAUSTIVE_ZERO_DIV:
        x, y = np.indices((n - 1, n - 1)).reshape(2, -1) + 1
        prod = s.mul(x, y)
        bad = np.flatnonzero(prod == 0)
        rep.tally("no_zero_divisors", x.size)
        if bad.size:
            rep.fail("no_zero_divisors", bad.size, x=x[bad[0]], y=y[bad[0]])
        if s.commutative:
            bad = np.flatnonzero(prod != s.mul(y, x))
            rep.tally("commutative", x.size)
            if bad.size:
                rep.fail("commutative", bad.size, x=x[bad[0]], y=y[bad[0]])
    else:
        left = samples
        while left > 0:
            k = min(left, 1 << 18)
            x, y = rng.integers(1, n, size=(2, k))
            prod = s.mul(x, y)
            bad = np.flatnonzero(prod == 0)
            rep.tally("no_zero_divisors", k)
            if bad.size:
                rep.fail("no_zero_divisors", bad.size, x=x[bad[0]], y=y[bad[0]])
            if s.commutative:
                bad = np.flatnonzero(prod != s.mul(y, x))
                rep.tally("commutative", k)
                if bad.size:
                    rep.fail("commutative", bad.size, x=x[bad[0]], y=y[bad[0]])
            left -= k
        pts = V.points()
        for x in rng.integers(1, n, size=injectivity_samples):
            rep.tally("row_injective")
            row = s.mul(np.full(n, x), pts)
            if np.unique(row).size != n:
                rep.fail("row_injective", x=x)
            col = s.mul(pts, np.full(n, x))
            rep.tally("column_injective")
            if np.unique(col).size != n:
                rep.fail("column_injective", y=x)
    return rep


def isotropy_check(s: Presemifield) -> Report:
    """Is every member {(x, x o y)} totally isotropic for tr(u.v' - v.u')?

    By bilinearity it is enough to test GF(p)-basis pairs of x, which lets the
    check run over all y at once even for |V| = 3^10.
    """
    V = s.space
    rep = Report(f"isotropy[{s.name}]")
    ys = V.points()
    basis = V.unit_vectors()
    images = [s.mul(np.full(ys.shape, e), ys) for e in basis]
    for a, ea in enumerate(basis):
        for b in range(a + 1, len(basis)):
            eb = basis[b]
            val = (V.trdot(ea, images[b]) - V.trdot(eb, images[a])) % s.ctx.p
            rep.tally("basis_pairs", ys.size)
            bad = np.flatnonzero(val)
            if bad.size:
                rep.fail("isotropic", bad.size, y=ys[bad[0]], x1=ea, x2=eb)
    return rep


# ---------------------------------------------------------------------------
# Knuth duals
# ---------------------------------------------------------------------------

def _require_coeffs(c: Presemifield):
    if c.coeffs is None:
        raise SemifieldError(f"{c.name}: Knuth dual needs the coefficient form, not a table")
    if c.space.dim != 1:
        raise SemifieldError("Knuth dual is implemented for V = F")


def _coeff_symmetric(c: Presemifield) -> bool:
    return all(c.coeffs.get((j, i), 0) == v for (i, j), v in c.coeffs.items())


def knuth_dual_odd(c: Presemifield) -> Presemifield:
    _require_coeffs(c)
    if c.ctx.p == 2:
        raise SemifieldError("knuth_dual_odd needs odd characteristic")
    if not _coeff_symmetric(c):
        raise SemifieldError(f"{c.name} is not commutative in coefficient form")
    return from_coeffs(f"{c.name}-dual", c.ctx, dual_coeffs(c.ctx, c.coeffs), symplectic=True)


def knuth_dual_even(c: Presemifield) -> Presemifield:
    _require_coeffs(c)
    if c.ctx.p != 2:
        raise SemifieldError("knuth_dual_even needs characteristic 2")
    if not _coeff_symmetric(c):
        raise SemifieldError(f"{c.name} is not commutative in coefficient form")
    return from_coeffs(f"{c.name}-dual", c.ctx, dual_coeffs(c.ctx, c.coeffs), symplectic=True)


def knuth_dual(c: Presemifield) -> Presemifield:
    return knuth_dual_even(c) if c.ctx.p == 2 else knuth_dual_odd(c)


def symplectic_coefficient_symmetry(ctx: FieldCtx, coeffs: dict) -> bool:
    """a_ij == a_{r-i, j-i}^(p^i) for all i, j (indices mod r)."""
    r = ctx.r
    for i in range(r):
        for j in range(r):
            lhs = coeffs.get((i, j), 0)
            rhs = ctx.frob(coeffs.get(((r - i) % r, (j - i) % r), 0), i)
            if lhs != rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# planar and pseudo-planar functions
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class PlanarFn:
    ctx: FieldCtx
    kind: str
    values: np.ndarray
    monomials: list | None = None
    descriptor: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.values[np.asarray(x, dtype=np.int64)]

    def is_quadratic_form(self) -> bool:
        return self.monomials is not None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "field": self.ctx.to_json(), **self.descriptor}
        if self.monomials is not None:
            out["monomials"] = [{"coeff": self.ctx.coeffs(c), "i": i, "j": j}
                                for c, i, j in self.monomials]
        elif "power" not in self.descriptor:
            out["table"] = self.values.tolist()
        return out


def planar_from_monomials(ctx: FieldCtx, monomials, kind: str = "planar") -> PlanarFn:
    """f(x) = sum c x^(p^i + p^j)."""
    mons = [(int(c), int(i) % ctx.r, int(j) % ctx.r) for c, i, j in monomials]
    x = ctx.elements()
    vals = np.zeros(ctx.q, dtype=np.int64)
    for c, i, j in mons:
        vals = ctx.add(vals, ctx.mul(c, ctx.mul(ctx.frob(x, i), ctx.frob(x, j))))
    return PlanarFn(ctx, kind, np.asarray(vals), mons)


def planar_from_table(ctx: FieldCtx, values, kind: str) -> PlanarFn:
    values = np.asarray(values, dtype=np.int64)
    if values.shape != (ctx.q,):
        raise SemifieldError("table length must equal q")
    return PlanarFn(ctx, kind, values)


def power_function(ctx: FieldCtx, e: int, kind: str = "planar") -> PlanarFn:
    return PlanarFn(ctx, kind, np.asarray(ctx.pow(ctx.elements(), e)), None, {"power": int(e)})


def coulter_matthews(q: int, k: int) -> PlanarFn:
    F = field_for_order(q)
    if F.p != 3:
        raise CatalogError("Coulter-Matthews needs q = 3^r")
    r = F.r
    if math.gcd(k, 2 * r) != 1 or k % (2 * r) in (1, 2 * r - 1):
        raise CatalogError("need gcd(k, 2r) = 1 and k != +-1 mod 2r")
    f = power_function(F, (3**k + 1) // 2)
    f.descriptor.update(family="coulter-matthews", k=k)
    return f


def planar_fn_from_json(d: dict) -> PlanarFn:
    ctx = field_from_json(d["field"])
    kind = d.get("kind", "planar")
    if "monomials" in d:
        return planar_from_monomials(
            ctx, [(_coeff_value(ctx, t["coeff"]), t["i"], t["j"]) for t in d["monomials"]], kind)
    if "power" in d:
        return power_function(ctx, int(d["power"]), kind)
    return planar_from_table(ctx, d["table"], kind)


def _bijective_rows(M: np.ndarray) -> np.ndarray:
    srt = np.sort(M, axis=1)
    return ~np.any(srt[:, 1:] == srt[:, :-1], axis=1)


def _difference_test(f: PlanarFn, name: str, combine) -> Report:
    F = f.ctx
    x = F.elements()
    rep = Report(f"{name}[{f.kind}]", mode="exhaustive")
    chunk = max(1, (1 << 21) // F.q)
    for start in range(1, F.q, chunk):
        a = np.arange(start, min(F.q, start + chunk))[:, None]
        rows = combine(f.values[F.add(x[None, :], a)], f.values[x][None, :], a, x[None, :])
        ok = _bijective_rows(rows)
        rep.tally("difference_maps", a.size)
        if not ok.all():
            bad = a[~ok, 0]
            rep.fail("bijective", bad.size, a=bad[0])
    return rep


def planar_test(f: PlanarFn) -> Report:
    F = f.ctx
    if F.p == 2:
        raise SemifieldError("planar functions exist only in odd characteristic")
    return _difference_test(f, "planar", lambda fxa, fx, a, x: F.sub(fxa, fx))


def pseudo_planar_test(f: PlanarFn) -> Report:
    F = f.ctx
    if F.p == 2:
        comb = lambda fxa, fx, a, x: F.add(F.add(fxa, fx), F.mul(a, x))
    else:
        comb = lambda fxa, fx, a, x: F.add(F.sub(fxa, fx), F.mul(a, x))
    return _difference_test(f, "pseudo_planar", comb)


def quadratic_test(f: PlanarFn) -> Report:
    """f(x+y+z) - f(x+y) - f(x+z) - f(y+z) + f(x) + f(y) + f(z) - f(0) == 0, exhaustively."""
    F = f.ctx
    q = F.q
    rep = Report("quadratic", mode="exhaustive")
    x = F.elements()
    for y in range(q):
        xy = F.add(x[:, None], y)
        xz = F.add(x[:, None], x[None, :])
        yz = F.add(y, x)[None, :]
        xyz = F.add(xy, x[None, :])
        val = F.sum([f(xyz), F.neg(f(xy)), F.neg(f(xz)), F.neg(f(yz)),
                     f(x)[:, None], f(y), f(x)[None, :], F.neg(f(0))])
        rep.tally("triples", q * q)
        bad = np.argwhere(val != 0)
        if bad.size:
            rep.fail("quadratic", len(bad), x=bad[0][0], y=y, z=bad[0][1])
    return rep


def commutative_coeffs(f: PlanarFn) -> dict:
    """Coefficient form of the commutative product attached to a quadratic f.

    Odd q: x * y = (f(x+y) - f(x) - f(y)) / 2.
    Even q: x * y = xy + f(x+y) + f(x) + f(y).
    """
    if f.monomials is None:
        raise SemifieldError("f is not given by Frobenius-power monomials")
    F = f.ctx
    if F.p == 2:
        items = [((0, 0), 1)]
        for c, i, j in f.monomials:
            if i != j:
                items += [((i, j), c), ((j, i), c)]
        return clean_coeffs(F, items)
    items = []
    for c, i, j in f.monomials:
        if i == j:
            items.append(((i, i), c))
        else:
            h = F.mul(c, F.half)
            items += [((i, j), h), ((j, i), h)]
    return clean_coeffs(F, items)


def planar_from_presemifield(c: Presemifield) -> PlanarFn:
    if c.ctx.p == 2:
        raise SemifieldError("planar functions need odd characteristic")
    if c.space.dim != 1:
        raise SemifieldError("planar functions are defined on V = F")
    if not c.commutative:
        raise SemifieldError(f"{c.name} is not commutative")
    x = c.ctx.elements()
    mons = None
    if c.coeffs is not None:
        folded = clean_coeffs(c.ctx, [((min(i, j), max(i, j)), v) for (i, j), v in c.coeffs.items()])
        mons = [(v, i, j) for (i, j), v in folded.items()]
    f = PlanarFn(c.ctx, "planar", np.asarray(c.mul(x, x)), mons, {"from": c.name})
    return f


# ---------------------------------------------------------------------------
# even characteristic: commutative presemifields <-> pseudo-planar functions
# ---------------------------------------------------------------------------

def gf2_inverse(M: np.ndarray) -> np.ndarray | None:
    """Inverse of a square GF(2) matrix, or None when singular."""
    n = M.shape[0]
    A = np.concatenate([M % 2, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r, col]), None)
        if piv is None:
            return None
        A[[col, piv]] = A[[piv, col]]
        for r in range(n):
            if r != col and A[r, col]:
                A[r] ^= A[col]
    return A[:, n:]


def gf_solve(ctx: FieldCtx, A: list[list[int]], b: list[int]) -> list[int]:
    """Solve A x = b over GF(q) by Gauss-Jordan elimination."""
    n = len(A)
    M = [list(row) + [bb] for row, bb in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise SemifieldError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = ctx.inv(M[col][col])
        M[col] = [ctx.mul(inv, v) for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [ctx.sub(v, ctx.mul(f, w)) for v, w in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def linearized_coeffs(ctx: FieldCtx, images: list[int]) -> list[int]:
    """Coefficients d_k with L(x) = sum d_k x^(p^k), given L on the basis p^i."""
    basis = [ctx.p**i for i in range(ctx.r)]
    A = [[ctx.frob(e, k) for k in range(ctx.r)] for e in basis]
    return gf_solve(ctx, A, images)


def pseudoplanar_from_presemifield(c: Presemifield):
    """Split a commutative presemifield over GF(2^r) into a strong isotope and a pseudo-planar f.

    Returns ``(star, f, report)`` where ``star(x, y) = g^-1(x * y)`` with
    ``g(x) = sum a_i x^(2^i)`` built from the diagonal coefficients, and
    ``star(x, y) = xy + f(x+y) + f(x) + f(y)``.
    """
    _require_coeffs(c)
    F = c.ctx
    if F.p != 2:
        raise SemifieldError("needs characteristic 2")
    if not _coeff_symmetric(c):
        raise SemifieldError(f"{c.name} is not commutative in coefficient form")
    r = F.r
    diag = {i: c.coeffs.get((i, i), 0) for i in range(r)}
    basis = [2**i for i in range(r)]
    g_vals = [F.sum([F.mul(a, F.frob(e, i)) for i, a in diag.items()]) for e in basis]
    G = np.array([[(v >> k) & 1 for v in g_vals] for k in range(r)], dtype=np.int64)
    Ginv = gf2_inverse(G)
    if Ginv is None:
        raise SemifieldError(f"catalog data error: the linear part g of {c.name} is singular, "
                             "which is impossible for a commutative presemifield")
    ginv_vals = [int(sum(int(Ginv[k, i]) << k for k in range(r))) for i in range(r)]
    d = linearized_coeffs(F, ginv_vals)
    star_coeffs = clean_coeffs(F, [(((i + k) % r, (j + k) % r), F.mul(dk, F.frob(v, k)))
                                   for k, dk in enumerate(d) if dk
                                   for (i, j), v in c.coeffs.items()])
    star = from_coeffs(f"{c.name}-star", F, star_coeffs, commutative=True)
    rep = Report(f"pseudoplanar_split[{c.name}]", mode="exhaustive")
    diag_star = {k: v for k, v in star_coeffs.items() if k[0] == k[1]}
    rep.tally("diagonal_is_identity")
    if diag_star != {(0, 0): 1}:
        rep.fail("diagonal_is_identity", diagonal=str(diag_star))
    mons = [(v, i, j) for (i, j), v in star_coeffs.items() if i < j]
    f = planar_from_monomials(F, mons, kind="pseudo-planar")
    x, y = np.indices((F.q, F.q)).reshape(2, -1)
    ident = F.sum([F.mul(x, y), f(F.add(x, y)), f(x), f(y)])
    bad = np.flatnonzero(ident != star.mul(x, y))
    rep.tally("identity", x.size)
    if bad.size:
        rep.fail("identity", bad.size, x=x[bad[0]], y=y[bad[0]])
    pp = pseudo_planar_test(f)
    rep.absorb(pp)
    rep.details["g"] = [F.coeffs(v) for v in g_vals]
    return star, f, rep


def comm_from_pseudoplanar(f: PlanarFn):
    """x * y = xy + f(x+y) + f(x) + f(y)  (odd q: xy + f(x+y) - f(x) - f(y)).

    Returns ``(presemifield, report)``; the report carries both the
    presemifield verdict and the quadratic-function verdict and fails if
    they disagree.
    """
    F = f.ctx
    if F.q > 3**5:
        raise SemifieldError("table-based construction limited to q <= 243")
    x, y = np.indices((F.q, F.q))
    if F.p == 2:
        table = F.sum([F.mul(x, y), f(F.add(x, y)), f(x), f(y)])
    else:
        table = F.sub(F.sub(F.add(F.mul(x, y), f(F.add(x, y))), f(x)), f(y))
    coeffs = None
    if f.monomials is not None:
        coeffs = clean_coeffs(F, [((0, 0), 1)] + [((i, j), c) for c, i, j in f.monomials]
                              + [((j, i), c) for c, i, j in f.monomials])
    V = Space(F, 1)
    if coeffs is not None:
        s = from_coeffs(f"pp-product", F, coeffs, commutative=True)
    else:
        s = from_table("pp-product", V, table, commutative=True)
    rep = Report("comm_from_pseudoplanar", mode="exhaustive")
    if coeffs is not None:
        bad = np.flatnonzero(s.mul(x, y).ravel() != table.ravel())
        rep.tally("coefficient_form_matches", table.size)
        if bad.size:
            rep.fail("coefficient_form_matches", bad.size)
    axioms = verify_presemifield(s)
    quad = quadratic_test(f)
    rep.details.update(presemifield=axioms.passed, quadratic=quad.passed)
    rep.tally("verdicts_agree")
    if axioms.passed != quad.passed:
        rep.fail("verdicts_agree", presemifield=axioms.passed, quadratic=quad.passed)
    return s, rep


def search_pseudoplanar(ctx: FieldCtx, exponents=None) -> tuple[list, list]:
    """Exhaustive sweep over f = sum c_e x^e for the given exponents.

    Affine terms never change pseudo-planarity, so by default the sweep uses
    every exponent in [1, q-1] whose binary weight is at least 2.  Returns
    ``(quadratic, other)`` lists of coefficient tuples that pass.
    """
    if ctx.p != 2:
        raise SemifieldError("sweep implemented for characteristic 2")
    if exponents is None:
        exponents = [e for e in range(1, ctx.q) if bin(e).count("1") >= 2]
    if ctx.q ** len(exponents) > 1 << 16:
        raise SemifieldError("sweep too large")
    x = ctx.elements()
    powers = [ctx.pow(x, e) for e in exponents]
    quad_mask = [bin(e).count("1") == 2 for e in exponents]
    quadratic, other = [], []
    for cs in np.ndindex(*([ctx.q] * len(exponents))):
        vals = ctx.sum([ctx.mul(c, pw) for c, pw in zip(cs, powers)])
        if pseudo_planar_test(planar_from_table(ctx, vals, "pseudo-planar")).passed:
            is_quad = all(q or c == 0 for c, q in zip(cs, quad_mask))
            (quadratic if is_quad else other).append(tuple(int(c) for c in cs))
    return quadratic, other
