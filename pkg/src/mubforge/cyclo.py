"""Exact arithmetic in Z[zeta_m] for m an odd prime or m = 4.

A :class:`CycloInt` keeps a canonical coefficient vector of length m:

* m prime: ``1 + zeta + ... + zeta^(m-1) = 0`` is used to clear the last
  coefficient.
* m = 4: ``zeta^2 = -1``, so only the first two coefficients survive.

The batch helpers at the bottom work on *count vectors*: an inner product
of two exponent vectors is ``sum_k c_k zeta^k`` where ``c_k`` counts the
positions whose exponent difference is k.  They are what the MUB verifier
uses; the scalar class is the reference they are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ff import is_prime

_INT64_SAFE = 2**62


class CycloError(ValueError):
    pass


def _check_m(m: int):
    if not (m == 4 or (m > 2 and is_prime(m))):
        raise CycloError(f"unsupported root order {m}")


def _canonical(m: int, coeffs) -> tuple[int, ...]:
    c = [0] * m
    for k, v in enumerate(coeffs):
        c[k % m] += int(v)
    if m == 4:
        return (c[0] - c[2], c[1] - c[3], 0, 0)
    last = c[m - 1]
    return tuple(v - last for v in c)


@dataclass(frozen=True)
class CycloInt:
    m: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _check_m(self.m)
        object.__setattr__(self, "coeffs", _canonical(self.m, self.coeffs))

    @classmethod
    def integer(cls, m: int, k: int) -> "CycloInt":
        return cls(m, (k,))

    @classmethod
    def root(cls, m: int, k: int = 1) -> "CycloInt":
        c = [0] * m
        c[k % m] = 1
        return cls(m, c)

    @classmethod
    def from_exponents(cls, m: int, exponents) -> "CycloInt":
        counts = np.bincount(np.asarray(exponents, dtype=np.int64) % m, minlength=m)
        return cls(m, counts.tolist())

    def __add__(self, o):
        return cyclo_add(self, o)

    def __mul__(self, o):
        return cyclo_mul(self, o)

    def __neg__(self):
        return CycloInt(self.m, [-c for c in self.coeffs])

    def __sub__(self, o):
        return cyclo_add(self, -o)

    def galois(self, a: int) -> "CycloInt":
        """Apply zeta -> zeta^a."""
        if np.gcd(a, self.m) != 1:
            raise CycloError("Galois action needs a unit exponent")
        c = [0] * self.m
        for k, v in enumerate(self.coeffs):
            c[(a * k) % self.m] += v
        return CycloInt(self.m, c)

    def to_complex(self) -> complex:
        z = np.exp(2j * np.pi * np.arange(self.m) / self.m)
        return complex(np.dot(self.coeffs, z))


def _same_m(x: CycloInt, y: CycloInt):
    if x.m != y.m:
        raise CycloError(f"mixed root orders {x.m} and {y.m}")


def cyclo_add(x: CycloInt, y: CycloInt) -> CycloInt:
    _same_m(x, y)
    return CycloInt(x.m, [a + b for a, b in zip(x.coeffs, y.coeffs)])


def cyclo_mul(x: CycloInt, y: CycloInt) -> CycloInt:
    _same_m(x, y)
    m = x.m
    out = [0] * m
    for i, a in enumerate(x.coeffs):
        if a:
            for j, b in enumerate(y.coeffs):
                out[(i + j) % m] += a * b
    if any(abs(v) >= _INT64_SAFE for v in out):
        raise OverflowError("cyclotomic coefficient exceeds 62 bits")
    return CycloInt(m, out)


def conj(x: CycloInt) -> CycloInt:
    c = [0] * x.m
    for k, v in enumerate(x.coeffs):
        c[(-k) % x.m] += v
    return CycloInt(x.m, c)


def is_integer(x: CycloInt) -> int | None:
    if any(x.coeffs[1:]):
        return None
    return x.coeffs[0]


def abs_squared(x: CycloInt) -> CycloInt:
    return cyclo_mul(x, conj(x))


# ---------------------------------------------------------------------------
# batch kernels on count vectors (last axis has length m)
# ---------------------------------------------------------------------------

def canonical_counts(counts: np.ndarray, m: int) -> np.ndarray:
    counts = np.asarray(counts, dtype=np.int64)
    if m == 4:
        out = np.zeros_like(counts)
        out[..., 0] = counts[..., 0] - counts[..., 2]
        out[..., 1] = counts[..., 1] - counts[..., 3]
        return out
    return counts - counts[..., m - 1: m]


def is_zero_counts(counts: np.ndarray, m: int) -> np.ndarray:
    """True where sum_k c_k zeta^k is exactly zero."""
    return ~np.any(canonical_counts(counts, m) != 0, axis=-1)


def abs_squared_counts(counts: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact |sum_k c_k zeta^k|^2 for a batch of count vectors.

    Returns ``(value, rational)``: the constant coefficient of the canonical
    form and a mask that is False wherever a non-constant coefficient
    survives (the value is then not a rational integer).
    """
    c = np.asarray(counts, dtype=np.int64)
    if c.size and int(np.abs(c).max()) ** 2 * m >= _INT64_SAFE:
        raise OverflowError("count vector too large for exact 64-bit norm")
    if m == 4:
        a = c[..., 0] - c[..., 2]
        b = c[..., 1] - c[..., 3]
        return a * a + b * b, np.ones(a.shape, dtype=bool)
    # d_t = sum_k c_{k+t} c_k, then reduce by d_{m-1}
    d = np.stack([np.sum(np.roll(c, -t, axis=-1) * c, axis=-1) for t in range(m)], axis=-1)
    red = d - d[..., m - 1: m]
    return red[..., 0], ~np.any(red[..., 1:] != 0, axis=-1)


def float_abs_squared(counts: np.ndarray, m: int) -> np.ndarray:
    """Floating-point |sum_k c_k zeta^k|^2 (fast path, non-authoritative)."""
    z = np.exp(2j * np.pi * np.arange(m) / m)
    return np.abs(np.asarray(counts, dtype=float) @ z) ** 2
