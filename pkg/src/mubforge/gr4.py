"""The Galois ring GR(4^r): Teichmuller lifts, 2-adic decomposition, ring trace.

Ring elements are integers whose base-4 digits are the coefficients of a
polynomial modulo the basic irreducible ``h`` (the Hensel lift of the field
modulus).  With r <= 5 the ring has at most 1024 elements, so addition and
multiplication are full lookup tables.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .ff import FieldCtx, FieldElem, make_field
from .report import Report

MAX_DEGREE = 5


class RingError(ValueError):
    pass


def _z4_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % 4
    return out


def graeffe_step(h: list[int]) -> list[int]:
    """Return g with g(x^2) = (-1)^deg * h(x) h(-x), computed over Z_4."""
    deg = len(h) - 1
    even = [c if i % 2 == 0 else 0 for i, c in enumerate(h)]
    odd = [c if i % 2 == 1 else 0 for i, c in enumerate(h)]
    e2, o2 = _z4_mul(even, even), _z4_mul(odd, odd)
    diff = [(a - b) % 4 for a, b in zip(e2, o2)]
    sign = -1 if deg % 2 else 1
    return [(sign * diff[2 * i]) % 4 for i in range(deg + 1)]


def hensel_lift(f) -> tuple[int, ...]:
    h = [int(c) % 4 for c in f]
    for _ in range(8):
        nxt = graeffe_step(h)
        if nxt == h:
            return tuple(h)
        h = nxt
    raise RingError("Graeffe iteration did not stabilise")


class RingCtx:
    def __init__(self, field: FieldCtx):
        if field.p != 2:
            raise RingError("GR(4^r) needs a field of characteristic 2")
        if field.r > MAX_DEGREE:
            raise RingError(f"degree {field.r} exceeds supported maximum {MAX_DEGREE}")
        self.field = field
        self.r = field.r
        self.size = 4**self.r
        self.basic_modulus = hensel_lift(field.modulus)
        if tuple(c % 2 for c in self.basic_modulus) != field.modulus:
            raise RingError("basic modulus does not reduce to the field modulus")
        self._build_tables()

    def __eq__(self, other):
        return isinstance(other, RingCtx) and self.field == other.field

    def __hash__(self):
        return hash(("GR4", self.field))

    def __repr__(self):
        return f"RingCtx(r={self.r}, basic_modulus={list(self.basic_modulus)})"

    def to_json(self) -> dict:
        return {"r": self.r, "basic_modulus": list(self.basic_modulus)}

    def _build_tables(self):
        r, N = self.r, self.size
        w = 4 ** np.arange(r, dtype=np.int64)
        self._w = w
        digits = (np.arange(N)[:, None] // w[None, :]) % 4
        self._digits = digits
        # multiplication-by-x matrix (row vector convention): coeffs @ S = coeffs of x*a
        h = self.basic_modulus
        S = np.zeros((r, r), dtype=np.int64)
        for k in range(r):
            if k + 1 < r:
                S[k, k + 1] = 1
            else:
                for i in range(r):
                    S[k, i] = (-h[i]) % 4
        shifted = [digits]
        for _ in range(1, r):
            shifted.append((shifted[-1] @ S) % 4)
        prod = np.zeros((N, N, r), dtype=np.int64)
        for k in range(r):
            prod += digits[None, :, k, None] * shifted[k][:, None, :]
        self._mul = ((prod % 4) @ w).astype(np.int64)
        self._add = ((((digits[:, None, :] + digits[None, :, :]) % 4) @ w)).astype(np.int64)
        self._neg = (((-digits) % 4) @ w).astype(np.int64)
        # reduction mod 2 and a naive preimage of each field element
        fw = 2 ** np.arange(r, dtype=np.int64)
        self._reduce = ((digits % 2) @ fw).astype(np.int64)
        fdig = (np.arange(self.field.q)[:, None] // fw[None, :]) % 2
        self._naive = (fdig @ w).astype(np.int64)
        lifts = self._naive.copy()
        for _ in range(4):
            nxt = lifts
            for _ in range(r):
                nxt = self._mul[nxt, nxt]
            if np.array_equal(nxt, lifts):
                break
            lifts = nxt
        else:
            raise RingError("Teichmuller iteration did not reach a fixed point")
        self._lift = lifts
        self._is_teich = np.zeros(N, dtype=bool)
        self._is_teich[lifts] = True
        a = lifts[self._reduce]
        rest = self._add[np.arange(N), self._neg[a]]
        # rest is in 2R: its digits are all even; halve and reduce
        half = ((self._digits[rest] // 2) @ fw).astype(np.int64)
        b = lifts[half]
        self._dec_a, self._dec_b = a, b
        # generalised Frobenius a + 2b -> a^2 + 2b^2 and the trace as the sum of its iterates
        two_b = self._add[b, b]
        phi = self._add[self._mul[a, a], self._mul[two_b, b]]
        self._phi = phi
        acc = np.zeros(N, dtype=np.int64)
        cur = np.arange(N)
        for _ in range(r):
            acc = self._add[acc, cur]
            cur = phi[cur]
        if np.any(acc >= 4):
            raise RingError("ring trace left Z_4")
        self._trace = acc

    # -- vectorised primitives -------------------------------------------

    @staticmethod
    def _out(x):
        x = np.asarray(x)
        return int(x) if x.ndim == 0 else x

    def add(self, a, b):
        return self._out(self._add[np.asarray(a), np.asarray(b)])

    def neg(self, a):
        return self._out(self._neg[np.asarray(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return self._out(self._mul[np.asarray(a), np.asarray(b)])

    def times(self, k: int, a):
        """Multiply by a rational integer k (mod 4)."""
        return self.mul(int(k) % 4, a)

    def pow(self, a, e: int):
        a = np.asarray(a)
        result = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                result = self._mul[result, base]
            base = self._mul[base, base]
            e >>= 1
        return self._out(result)

    def reduce(self, a):
        return self._out(self._reduce[np.asarray(a)])

    def lift(self, u):
        return self._out(self._lift[np.asarray(u)])

    def decompose(self, x):
        x = np.asarray(x)
        return self._out(self._dec_a[x]), self._out(self._dec_b[x])

    def trace(self, x):
        return self._out(self._trace[np.asarray(x)])

    def phi(self, x):
        return self._out(self._phi[np.asarray(x)])

    def is_teichmuller(self, x):
        return self._out(self._is_teich[np.asarray(x)])

    def teich_sqrt(self, x):
        x = np.asarray(x)
        if not np.all(self._is_teich[x]):
            raise RingError("teich_sqrt needs a Teichmuller element")
        return self.pow(x, 2 ** (self.r - 1))

    def elem(self, coeffs) -> int:
        coeffs = list(coeffs) + [0] * (self.r - len(coeffs))
        return int(sum((int(c) % 4) * 4**k for k, c in enumerate(coeffs[: self.r])))

    def coeffs(self, x: int) -> list[int]:
        return [int(c) for c in self._digits[int(x)]]

    def elements(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def lifted_form(self, coeffs: dict, x, y):
        """Evaluate sum lift(c_ij) lift(x)^(2^i) lift(y)^(2^j) for field arrays x, y.

        Powers of Teichmuller elements are lifts of Frobenius images, so
        lift(x)^(2^i) = lift(x^(2^i)).
        """
        F = self.field
        x = np.asarray(x)
        y = np.asarray(y)
        acc = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        for (i, j), c in coeffs.items():
            if c == 0:
                continue
            term = self._mul[self._lift[F.frob(x, i)], self._lift[F.frob(y, j)]]
            term = self._mul[self._lift[c], term]
            acc = self._add[acc, term]
        return self._out(acc)


@functools.lru_cache(maxsize=None)
def make_ring(field: FieldCtx) -> RingCtx:
    return RingCtx(field)


def ring_for_degree(r: int) -> RingCtx:
    return make_ring(make_field(2, r))


@dataclass(frozen=True)
class RingElem:
    ctx: RingCtx
    value: int

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.coeffs(self.value)

    def _val(self, o):
        if isinstance(o, RingElem):
            return o.value
        return int(o) % 4

    def __add__(self, o):
        return RingElem(self.ctx, self.ctx.add(self.value, self._val(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return RingElem(self.ctx, self.ctx.sub(self.value, self._val(o)))

    def __mul__(self, o):
        return RingElem(self.ctx, self.ctx.mul(self.value, self._val(o)))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElem(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return RingElem(self.ctx, self.ctx.pow(self.value, e))

    def is_unit(self) -> bool:
        return self.ctx.reduce(self.value) != 0

    def __repr__(self):
        return f"RingElem({self.coeffs})"


def teichmuller_lift(u: FieldElem, ring: RingCtx | None = None) -> RingElem:
    ring = ring or make_ring(u.ctx)
    return RingElem(ring, ring.lift(u.value))


def decompose(x: RingElem) -> tuple[RingElem, RingElem]:
    a, b = x.ctx.decompose(x.value)
    return RingElem(x.ctx, a), RingElem(x.ctx, b)


def ring_trace(x: RingElem) -> int:
    return int(x.ctx.trace(x.value))


def teich_sqrt(x: RingElem) -> RingElem:
    return RingElem(x.ctx, x.ctx.teich_sqrt(x.value))


def lifted_product(x: FieldElem, y: FieldElem, mult) -> RingElem:
    """Lift of a presemifield product given in coefficient form over GF(2^r)."""
    coeffs = getattr(mult, "coeffs", None)
    if coeffs is None:
        raise RingError("lifted product needs a multiplication given by coefficients")
    ring = make_ring(x.ctx)
    return RingElem(ring, ring.lifted_form(coeffs, x.value, y.value))


def matrix_trace(ring: RingCtx, x) -> np.ndarray:
    """Trace of multiplication by x as an r x r matrix over Z_4.

    Independent of the Frobenius-sum table; used as its oracle.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.int64))
    basis = ring._w  # 1, X, ..., X^(r-1)
    prods = ring._mul[x[:, None], basis[None, :]]
    diag = ring._digits[prods, np.arange(ring.r)[None, :]]
    return diag.sum(axis=1) % 4


def verify_ring(ring: RingCtx) -> Report:
    """Exhaustive structural checks of the Teichmuller machinery."""
    F = ring.field
    rep = Report(f"galois_ring[r={ring.r}]", mode="exhaustive")
    u = F.elements()
    T = ring.lift(u)
    rep.tally("lift_reduces", F.q)
    if not np.array_equal(ring.reduce(T), u):
        rep.fail("lift_reduces")
    rep.tally("lift_fixed", F.q)
    if not np.array_equal(ring.pow(T, F.q), T):
        rep.fail("lift_fixed")

    x, y = np.meshgrid(u, u, indexing="ij")
    Tx, Ty = ring.lift(x), ring.lift(y)
    prod = ring.mul(Tx, Ty)
    rep.tally("multiplicative", prod.size)
    bad = prod != ring.lift(F.mul(x, y))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        rep.fail("multiplicative", int(bad.sum()), x=int(u[i]), y=int(u[j]))
    # lift(x + y) = lift(x) + lift(y) + 2 sqrt(lift(x) lift(y))
    rhs = ring.add(ring.add(Tx, Ty), ring.times(2, ring.teich_sqrt(prod)))
    rep.tally("sum_law", rhs.size)
    bad = rhs != ring.lift(F.add(x, y))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        rep.fail("sum_law", int(bad.sum()), x=int(u[i]), y=int(u[j]))

    z = ring.elements()
    a, b = ring.decompose(z)
    rep.tally("decomposition", z.size)
    back = ring.add(a, ring.times(2, b))
    if not (np.array_equal(back, z) and ring.is_teichmuller(a).all() and ring.is_teichmuller(b).all()):
        rep.fail("decomposition")
    rep.tally("decomposition_unique")
    if np.unique(ring.add(Tx, ring.times(2, Ty))).size != ring.size:
        rep.fail("decomposition_unique")

    tr = ring.trace(z)
    rep.tally("trace_vs_matrix", z.size)
    bad = tr != matrix_trace(ring, z)
    if bad.any():
        rep.fail("trace_vs_matrix", int(bad.sum()), x=int(z[np.argmax(bad)]))
    rep.tally("trace_reduces", F.q)
    if not np.array_equal(ring.trace(T) % 2, F.trace(u)):
        rep.fail("trace_reduces")

    zx, zy = np.meshgrid(z, z, indexing="ij")
    rep.tally("phi_automorphism", 2 * zx.size)
    if not (np.array_equal(ring.phi(ring.mul(zx, zy)), ring.mul(ring.phi(zx), ring.phi(zy)))
            and np.array_equal(ring.phi(ring.add(zx, zy)), ring.add(ring.phi(zx), ring.phi(zy)))):
        rep.fail("phi_automorphism")
    return rep
