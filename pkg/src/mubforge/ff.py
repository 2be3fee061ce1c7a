"""Arithmetic in GF(p^r) with integer-encoded elements.

An element is stored as the integer whose base-p digits are its polynomial
coefficients (constant term first).  That makes GF(p)-vector addition a
digitwise operation and lets every routine below accept either a Python int
or a numpy array of ints.  Multiplication goes through log/exp tables; they
are a lookup convenience only, the field itself is defined by the modulus.

The module also provides :class:`Space`, the point set V = F or V = F (+) F
used by presemifields, spreads, Pauli operators and MUB tables.  A point of
F (+) F is encoded as ``a + q*b`` so its base-p digits are the digits of ``a``
followed by the digits of ``b``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

MAX_ORDER = 3**10
_ADD_TABLE_LIMIT = 729


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over GF(p): lists of ints, constant term first
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        coef = a[-1] * inv_lead % p
        quot[shift] = coef
        for i, c in enumerate(b):
            a[i + shift] = (a[i + shift] - coef * c) % p
        a = _trim(a)
    return quot, a


def poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_mulmod(a, b, mod, p):
    return poly_divmod(poly_mul(a, b, p), mod, p)[1]


def poly_powmod(base, e: int, mod, p):
    result = [1]
    base = poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = poly_mulmod(result, base, mod, p)
        base = poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def poly_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    return a


def is_irreducible(f, p: int) -> bool:
    """Ben-Or test: f of degree r is irreducible iff gcd(f, x^(p^k) - x) = 1 for k <= r/2."""
    f = _trim([c % p for c in f])
    r = len(f) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    x = [0, 1]
    power = x
    for _ in range(r // 2):
        power = poly_powmod(power, p, f, p)
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        if len(poly_gcd(f, _trim(diff), p)) != 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def default_modulus(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r (low-degree coefficients compared first)."""
    for low in itertools.product(range(p), repeat=r):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {r} over GF({p})")


# ---------------------------------------------------------------------------
# field context
# ---------------------------------------------------------------------------

class FieldCtx:
    """GF(p^r) defined by a monic irreducible modulus.

    Immutable after construction.  All arithmetic methods are vectorised:
    they take ints or integer arrays and return the same kind.
    """

    def __init__(self, p: int, r: int, modulus: tuple[int, ...]):
        self.p = p
        self.r = r
        self.q = p**r
        self.modulus = tuple(int(c) for c in modulus)
        self.digit_weights = np.array([p**k for k in range(r)], dtype=np.int64)
        self._build_tables()

    # -- construction -----------------------------------------------------

    def _int_to_poly(self, x: int) -> list[int]:
        out = []
        for _ in range(self.r):
            out.append(x % self.p)
            x //= self.p
        return out

    def _poly_to_int(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)[: self.r]):
            v = v * self.p + (c % self.p)
        return v

    def _find_generator(self) -> int:
        q, p, mod = self.q, self.p, list(self.modulus)
        if q == 2:
            return 1
        factors = prime_factors(q - 1)
        for g in range(2 if p > 2 or self.r > 1 else 1, q):
            gp = self._int_to_poly(g)
            if all(_trim(poly_powmod(gp, (q - 1) // f, mod, p)) != [1] for f in factors):
                return g
        raise FieldError("no primitive element found (modulus not irreducible?)")

    def _build_tables(self):
        p, r, q = self.p, self.r, self.q
        g = self._find_generator()
        # multiplication by g as a GF(p)-linear map on coefficient vectors
        mod = list(self.modulus)
        gp = self._int_to_poly(g)
        cols = [self._int_to_poly(self._poly_to_int(poly_mulmod(gp, [0] * k + [1], mod, p)))
                for k in range(r)]
        exp = np.zeros(2 * (q - 1) + 1, dtype=np.int64)
        vec = [1] + [0] * (r - 1)
        for k in range(q - 1):
            exp[k] = self._poly_to_int(vec)
            nxt = [0] * r
            for j, c in enumerate(vec):
                if c:
                    col = cols[j]
                    for i in range(r):
                        nxt[i] += c * col[i]
            vec = [c % p for c in nxt]
        if exp[0] != 1 or len(set(exp[: q - 1].tolist())) != q - 1:
            raise FieldError("generator does not have full order")
        exp[q - 1: 2 * (q - 1)] = exp[: q - 1]
        exp[2 * (q - 1)] = exp[0]
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)
        self.generator = g
        self._exp = exp
        self._log = log
        # multiplication tables with a sentinel log for 0 so that no masking is needed
        self._mlog = log.copy()
        self._mlog[0] = 2 * q
        self._mexp = np.zeros(4 * q + 1, dtype=np.int64)
        self._mexp[: exp.size] = exp
        digits = (np.arange(q)[:, None] // self.digit_weights[None, :]) % p
        self._digits = digits
        self._neg = ((-digits) % p) @ self.digit_weights
        self._add_table = None
        if p > 2 and q <= _ADD_TABLE_LIMIT:
            s = (digits[:, None, :] + digits[None, :, :]) % p
            self._add_table = (s @ self.digit_weights).astype(np.int64)
        # frobenius tables x -> x^(p^i)
        el = np.arange(q)
        frob = np.zeros((r, q), dtype=np.int64)
        for i in range(r):
            e = (log * p**i) % (q - 1)
            frob[i] = np.where(el == 0, 0, exp[e])
        self._frob = frob
        acc = np.zeros(q, dtype=np.int64)
        for i in range(r):
            acc = self.add(acc, frob[i])
        if np.any(acc >= p):
            raise FieldError("trace left the prime field; modulus is not irreducible")
        self._trace = acc
        self._sq = np.zeros(q, dtype=bool)
        self._sq[0] = True
        if p > 2:
            self._sq[1:] = (log[1:] % 2) == 0
        else:
            self._sq[:] = True

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.r, self.modulus) == (
            other.p, other.r, other.modulus)

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, r={self.r}, modulus={list(self.modulus)})"

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    # -- element conversion ----------------------------------------------

    def elem(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.r:
            raise FieldError(f"too many coefficients for GF({self.p}^{self.r})")
        return self._poly_to_int(coeffs + [0] * (self.r - len(coeffs)))

    def coeffs(self, x: int) -> list[int]:
        return [int(c) for c in self._digits[int(x)]]

    def digits(self, x):
        return self._digits[np.asarray(x)]

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def scalar(self, c: int) -> int:
        return int(c) % self.p

    # -- arithmetic (vectorised) -----------------------------------------

    @staticmethod
    def _out(x):
        x = np.asarray(x)
        return int(x) if x.ndim == 0 else x

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return self._out(np.bitwise_xor(a, b))
        if self._add_table is not None:
            return self._out(self._add_table[a, b])
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self.digit_weights:
            out += (((a // w) % self.p + (b // w) % self.p) % self.p) * w
        return self._out(out)

    def neg(self, a):
        return self._out(self._neg[np.asarray(a, dtype=np.int64)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return self._out(self._mexp[self._mlog[a] + self._mlog[b]])

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._out(self._exp[(-self._log[a]) % (self.q - 1)])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return self._out(np.ones_like(a))
        if e < 0:
            a, e = np.asarray(self.inv(a)), -e
        out = self._exp[(self._log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return self._out(np.where(a == 0, 0, out))

    def frob(self, a, i: int):
        return self._out(self._frob[i % self.r][np.asarray(a, dtype=np.int64)])

    def trace(self, a):
        return self._out(self._trace[np.asarray(a, dtype=np.int64)])

    def smul(self, c: int, a):
        """Multiply by an integer interpreted in the prime field."""
        return self.mul(int(c) % self.p, a)

    def is_square(self, a):
        if self.p == 2:
            raise FieldError("is_square is meaningful only in odd characteristic")
        return self._out(self._sq[np.asarray(a, dtype=np.int64)])

    @functools.cached_property
    def half(self) -> int:
        if self.p == 2:
            raise FieldError("1/2 does not exist in characteristic 2")
        return self.inv(2)

    def first_nonsquare(self) -> int:
        return int(np.flatnonzero(~self._sq)[0])

    def sum(self, arrays):
        acc = 0
        for a in arrays:
            acc = self.add(acc, a)
        return acc


def make_field(p: int, r: int, modulus=None) -> FieldCtx:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if r < 1:
        raise FieldError("extension degree must be >= 1")
    if p**r > MAX_ORDER:
        raise FieldError(f"GF({p}^{r}) exceeds the supported order {MAX_ORDER}")
    if modulus is None:
        modulus = default_modulus(p, r)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {r}")
        if not is_irreducible(list(modulus), p):
            raise FieldError(f"modulus {list(modulus)} is reducible over GF({p})")
    return _cached_field(p, r, tuple(modulus))


@functools.lru_cache(maxsize=None)
def _cached_field(p, r, modulus):
    return FieldCtx(p, r, modulus)


def field_for_order(q: int, modulus=None) -> FieldCtx:
    for p in range(2, q + 1):
        if q % p == 0:
            r, t = 0, q
            while t % p == 0:
                t //= p
                r += 1
            if t != 1:
                break
            return make_field(p, r, modulus)
    raise FieldError(f"{q} is not a prime power")


def field_from_json(d: dict) -> FieldCtx:
    return make_field(int(d["p"]), int(d["r"]), d.get("modulus"))


# ---------------------------------------------------------------------------
# element wrappers for scalar use
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElem:
    ctx: FieldCtx
    value: int

    @classmethod
    def from_coeffs(cls, ctx: FieldCtx, coeffs) -> "FieldElem":
        return cls(ctx, ctx.elem(coeffs))

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.coeffs(self.value)

    def _wrap(self, v):
        return FieldElem(self.ctx, int(v))

    def _val(self, other):
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise FieldError("elements of different fields")
            return other.value
        return self.ctx.scalar(other)

    def __add__(self, o):
        return self._wrap(self.ctx.add(self.value, self._val(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.ctx.sub(self.value, self._val(o)))

    def __rsub__(self, o):
        return self._wrap(self.ctx.sub(self._val(o), self.value))

    def __mul__(self, o):
        return self._wrap(self.ctx.mul(self.value, self._val(o)))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.ctx.pow(self.value, e))

    def __truediv__(self, o):
        return self._wrap(self.ctx.div(self.value, self._val(o)))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElem({self.coeffs})"


@dataclass(frozen=True)
class PointVec:
    coords: tuple[FieldElem, ...]

    def __post_init__(self):
        if not 1 <= len(self.coords) <= 2:
            raise FieldError("points live in F or F (+) F")
        if len({c.ctx for c in self.coords}) != 1:
            raise FieldError("coordinates from different fields")

    def __add__(self, o: "PointVec") -> "PointVec":
        if len(o.coords) != len(self.coords):
            raise FieldError("shape mismatch")
        return PointVec(tuple(a + b for a, b in zip(self.coords, o.coords)))


def trace(x: FieldElem) -> int:
    return int(x.ctx.trace(x.value))


def frobenius_pow(x: FieldElem, i: int) -> FieldElem:
    return FieldElem(x.ctx, x.ctx.frob(x.value, i))


def dot(u: PointVec, v: PointVec) -> FieldElem:
    if len(u.coords) != len(v.coords):
        raise FieldError("dot product of points with different shapes")
    acc = u.coords[0] * v.coords[0]
    for a, b in zip(u.coords[1:], v.coords[1:]):
        acc = acc + a * b
    return acc


def is_square(x: FieldElem) -> bool:
    return bool(x.ctx.is_square(x.value))


# ---------------------------------------------------------------------------
# V = F or F (+) F
# ---------------------------------------------------------------------------

class Space:
    """The GF(p)-space V = F^dim (dim 1 or 2) with the usual dot product."""

    def __init__(self, ctx: FieldCtx, dim: int = 1):
        if dim not in (1, 2):
            raise FieldError("dim must be 1 or 2")
        self.ctx = ctx
        self.dim = dim
        self.n = ctx.q**dim
        self.p = ctx.p
        self.rdim = ctx.r * dim  # dimension over GF(p)

    def __eq__(self, other):
        return isinstance(other, Space) and (self.ctx, self.dim) == (other.ctx, other.dim)

    def __hash__(self):
        return hash((self.ctx, self.dim))

    def __repr__(self):
        return f"Space(q={self.ctx.q}, dim={self.dim})"

    def points(self) -> np.ndarray:
        return np.arange(self.n, dtype=np.int64)

    def split(self, x):
        x = np.asarray(x, dtype=np.int64)
        if self.dim == 1:
            return (x,)
        return x % self.ctx.q, x // self.ctx.q

    def join(self, parts):
        if self.dim == 1:
            return np.asarray(parts[0], dtype=np.int64)
        return np.asarray(parts[0], dtype=np.int64) + self.ctx.q * np.asarray(parts[1], dtype=np.int64)

    def add(self, x, y):
        return self.join([self.ctx.add(a, b) for a, b in zip(self.split(x), self.split(y))])

    def neg(self, x):
        return self.join([self.ctx.neg(a) for a in self.split(x)])

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, c, x):
        """Field scalar times vector."""
        return self.join([self.ctx.mul(c, a) for a in self.split(x)])

    def dot(self, x, y):
        parts = [self.ctx.mul(a, b) for a, b in zip(self.split(x), self.split(y))]
        return self.ctx.sum(parts)

    def trdot(self, x, y):
        """tr(x . y) in GF(p)."""
        return self.ctx.trace(self.dot(x, y))

    def digits(self, x):
        x = np.asarray(x, dtype=np.int64)
        w = self.p ** np.arange(self.rdim, dtype=np.int64)
        return (x[..., None] // w) % self.p

    def from_digits(self, d):
        w = self.p ** np.arange(np.shape(d)[-1], dtype=np.int64)
        return (np.asarray(d, dtype=np.int64) % self.p) @ w

    def unit_vectors(self) -> np.ndarray:
        return self.p ** np.arange(self.rdim, dtype=np.int64)

    def to_point(self, x: int) -> PointVec:
        return PointVec(tuple(FieldElem(self.ctx, int(a)) for a in self.split(x)))

    def from_point(self, v: PointVec) -> int:
        return int(self.join([c.value for c in v.coords]))
