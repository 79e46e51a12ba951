"""Arithmetic over the prime field F_b and the polynomial ring F_b[x].

Polynomials are immutable :class:`GfPoly` values holding their coefficients
lowest degree first.  The integer ``k = k_0 + k_1 b + ...`` and the polynomial
``k(x) = k_0 + k_1 x + ...`` are identified throughout, see
:meth:`GfPoly.from_int` and :meth:`GfPoly.to_int`.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

#: degree of the zero polynomial
NEG_INF_DEGREE = float("-inf")


@functools.lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (bases are small)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def check_base(b: int) -> int:
    b = int(b)
    if not is_prime(b):
        raise ValueError(f"base must be a prime, got {b}")
    return b


def inverse(a: int, b: int) -> int:
    """Multiplicative inverse of a nonzero element of F_b."""
    a %= b
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in F_b")
    return pow(a, b - 2, b)


@dataclass(frozen=True)
class GfScalar:
    """An element of F_b."""

    value: int
    base: int

    def __post_init__(self):
        check_base(self.base)
        if not 0 <= self.value < self.base:
            raise ValueError(f"{self.value} is not an element of F_{self.base}")

    def __add__(self, other: GfScalar) -> GfScalar:
        _same_base(self, other)
        return GfScalar((self.value + other.value) % self.base, self.base)

    def __sub__(self, other: GfScalar) -> GfScalar:
        _same_base(self, other)
        return GfScalar((self.value - other.value) % self.base, self.base)

    def __mul__(self, other: GfScalar) -> GfScalar:
        _same_base(self, other)
        return GfScalar(self.value * other.value % self.base, self.base)

    def inverse(self) -> GfScalar:
        return GfScalar(inverse(self.value, self.base), self.base)


def _same_base(a, c):
    if a.base != c.base:
        raise ValueError(f"mismatched bases {a.base} and {c.base}")


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class GfPoly:
    """A polynomial over F_b in canonical form (no trailing zero coefficients).

    Parameters
    ----------
    base : int
        The prime b.
    coeffs : tuple of int
        Coefficients, lowest degree first.  Values are reduced mod b and
        trailing zeros are stripped on construction.
    """

    base: int
    coeffs: tuple = ()

    def __post_init__(self):
        check_base(self.base)
        b = self.base
        object.__setattr__(self, "coeffs", _strip(int(c) % b for c in self.coeffs))

    @classmethod
    def from_int(cls, k: int, base: int) -> GfPoly:
        """The polynomial whose coefficients are the base-b digits of k."""
        if k < 0:
            raise ValueError("k must be non-negative")
        digits = []
        while k:
            k, d = divmod(k, base)
            digits.append(d)
        return cls(base, tuple(digits))

    @classmethod
    def x_power(cls, n: int, base: int) -> GfPoly:
        return cls(base, (0,) * n + (1,))

    def to_int(self) -> int:
        k = 0
        for c in reversed(self.coeffs):
            k = k * self.base + c
        return k

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: GfPoly) -> GfPoly:
        _same_base(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        return GfPoly(self.base, (self[i] + other[i] for i in range(n)))

    def __neg__(self) -> GfPoly:
        return GfPoly(self.base, (-c for c in self.coeffs))

    def __sub__(self, other: GfPoly) -> GfPoly:
        return self + (-other)

    def __mul__(self, other: GfPoly) -> GfPoly:
        _same_base(self, other)
        if self.is_zero() or other.is_zero():
            return GfPoly(self.base)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, c in enumerate(other.coeffs):
                    out[i + j] += a * c
        return GfPoly(self.base, out)

    def scale(self, a: int) -> GfPoly:
        return GfPoly(self.base, (a * c for c in self.coeffs))

    def __divmod__(self, other: GfPoly):
        _same_base(self, other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        b = self.base
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        lead_inv = inverse(other.coeffs[-1], b)
        quot = [0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * lead_inv % b
            if c:
                quot[i - dq] = c
                for j, oc in enumerate(other.coeffs):
                    rem[i - dq + j] = (rem[i - dq + j] - c * oc) % b
        return GfPoly(b, quot), GfPoly(b, rem[:dq])

    def __mod__(self, other: GfPoly) -> GfPoly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: GfPoly) -> GfPoly:
        return divmod(self, other)[0]

    def __pow__(self, e: int) -> GfPoly:
        out = GfPoly(self.base, (1,))
        for _ in range(e):
            out = out * self
        return out

    def __repr__(self):
        if self.is_zero():
            return f"GfPoly(0 over F_{self.base})"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i else f"{c}" if i == 0 else f"{c}*{mono}")
        return f"GfPoly({' + '.join(terms)} over F_{self.base})"


def poly_mulmod(a: GfPoly, c: GfPoly, p: GfPoly) -> GfPoly:
    """Return ``(a * c) mod p``."""
    _same_base(a, c)
    _same_base(a, p)
    if p.is_zero():
        raise ZeroDivisionError("modulus must be nonzero")
    return (a * c) % p


def monic_polys(b: int, d: int):
    """All monic polynomials of degree exactly d, in increasing integer order."""
    for low in itertools.product(range(b), repeat=d):
        yield GfPoly(b, tuple(reversed(low)) + (1,))


def is_irreducible(p: GfPoly) -> bool:
    """Irreducibility by exhaustive trial division over monic divisors.

    Raises
    ------
    ValueError
        If ``p`` is constant.
    """
    if p.is_zero() or p.degree < 1:
        raise ValueError("irreducibility is undefined for constant polynomials")
    b = p.base
    for d in range(1, p.degree // 2 + 1):
        for q in monic_polys(b, d):
            if (p % q).is_zero():
                return False
    return True


def _digit_matrix(b: int, count: int, ndigits: int) -> np.ndarray:
    """Row i holds the base-b digits of i, lowest first."""
    k = np.arange(count, dtype=np.int64)
    out = np.empty((count, ndigits), dtype=np.int64)
    for i in range(ndigits):
        out[:, i] = k % b
        k //= b
    return out


@functools.lru_cache(maxsize=None)
def _irreducible_codes(b: int, m: int) -> tuple:
    # Sieve over monic degree-m polynomials: every product q*h with q a monic
    # irreducible of degree d <= m/2 and h monic of degree m-d is reducible.
    reducible = np.zeros(b**m, dtype=bool)
    powers = b ** np.arange(m + 1, dtype=np.int64)
    for d in range(1, m // 2 + 1):
        e = m - d
        h = _digit_matrix(b, b**e, e)
        h = np.hstack([h, np.ones((b**e, 1), dtype=np.int64)])
        for code in _irreducible_codes(b, d):
            q = GfPoly.from_int(code, b).coeffs
            prod = np.zeros((b**e, m + 1), dtype=np.int64)
            for i, qi in enumerate(q):
                if qi:
                    prod[:, i : i + e + 1] += qi * h
            prod %= b
            codes = prod @ powers
            reducible[codes - b**m] = True
    return tuple(int(c) + b**m for c in np.flatnonzero(~reducible))


@dataclass(frozen=True)
class ModulusSet:
    """All monic irreducible polynomials of degree m over F_b."""

    base: int
    degree: int
    members: tuple

    def __len__(self):
        return len(self.members)

    def sample(self, rng: np.random.Generator) -> GfPoly:
        return self.members[int(rng.integers(len(self.members)))]


@functools.lru_cache(maxsize=None)
def enumerate_moduli(b: int, m: int) -> ModulusSet:
    """Enumerate (and cache) the monic irreducibles of degree m over F_b."""
    check_base(b)
    if m < 1:
        raise ValueError("degree must be at least 1")
    members = tuple(GfPoly.from_int(c, b) for c in _irreducible_codes(b, m))
    return ModulusSet(b, m, members)


def sample_modulus(b: int, m: int, rng: np.random.Generator) -> GfPoly:
    """Draw uniformly from the monic irreducibles of degree m."""
    return enumerate_moduli(b, m).sample(rng)


@dataclass(frozen=True)
class GeneratorSet:
    """The nonzero polynomials of degree below m, indexed by 1..b^m-1."""

    base: int
    degree_bound: int

    def __len__(self):
        return self.base**self.degree_bound - 1

    def __iter__(self):
        for k in range(1, len(self) + 1):
            yield GfPoly.from_int(k, self.base)

    def sample(self, rng: np.random.Generator) -> GfPoly:
        return GfPoly.from_int(int(rng.integers(1, len(self) + 1)), self.base)


def laurent_digits(g: GfPoly, p: GfPoly, count: int) -> tuple:
    """First ``count`` coefficients u_1, u_2, ... of g/p = sum_i u_i x^{-i}.

    Computed by formal long division; requires deg(g) < deg(p).
    """
    _same_base(g, p)
    if p.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if g.degree >= p.degree:
        raise ValueError("laurent_digits requires deg(g) < deg(p)")
    if count < 1:
        raise ValueError("count must be positive")
    b = p.base
    m = p.degree
    pc = p.coeffs
    lead_inv = inverse(pc[-1], b)
    rem = list(g.coeffs) + [0] * (m - len(g.coeffs))
    out = []
    for _ in range(count):
        # multiply remainder by x, peel off the x^m coefficient
        rem = [0] + rem
        u = rem[m] * lead_inv % b
        out.append(u)
        if u:
            for j in range(m):
                rem[j] = (rem[j] - u * pc[j]) % b
        rem.pop()
    return tuple(out)
