"""Digit weights on non-negative integers: NRT, Dick, modified infinite Dick, and r~_b."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class DigitProfile:
    """Nonzero base-b digits of k: k = sum_i kappa_i b^(c_i - 1), c_1 > c_2 > ... > 0."""

    k: int
    base: int
    positions: tuple  # c_1 > c_2 > ... > c_v
    digits: tuple  # kappa_1, ..., kappa_v

    @classmethod
    def of(cls, k: int, b: int) -> DigitProfile:
        if k < 0:
            raise ValueError("k must be non-negative")
        pos, dig = [], []
        i, rest = 1, k
        while rest:
            rest, d = divmod(rest, b)
            if d:
                pos.append(i)
                dig.append(d)
            i += 1
        return cls(k, b, tuple(reversed(pos)), tuple(reversed(dig)))

    @property
    def v(self) -> int:
        return len(self.positions)

    def reconstruct(self) -> int:
        return sum(d * self.base ** (c - 1) for c, d in zip(self.positions, self.digits))


def mu1(k: int, b: int = 2) -> int:
    """NRT weight: position of the highest nonzero digit, 0 for k = 0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    c = 0
    while k:
        k //= b
        c += 1
    return c


def mu1_vec(ks, b: int = 2) -> int:
    return sum(mu1(int(k), b) for k in ks)


def mu_alpha(k: int, alpha: int, b: int = 2) -> int:
    """Dick weight: sum of the alpha largest nonzero digit positions."""
    if alpha < 2:
        raise ValueError("alpha must be at least 2; use mu1 for alpha = 1")
    return sum(DigitProfile.of(k, b).positions[:alpha])


def mu_alpha_vec(ks, alpha: int, b: int = 2) -> int:
    return sum(mu_alpha(int(k), alpha, b) for k in ks)


def mu_inf_a(k: int, a: float = 0.0, b: int = 2) -> float:
    """Modified infinite Dick weight sum_i (c_i + a) over all nonzero digits."""
    prof = DigitProfile.of(k, b)
    return sum(prof.positions) + a * prof.v


def mu_inf_a_vec(ks, a, b: int = 2) -> float:
    """Vector form with one shift a_j per coordinate."""
    if len(ks) != len(a):
        raise ValueError("k and a must have equal length")
    return sum(mu_inf_a(int(k), aj, b) for k, aj in zip(ks, a))


def rtilde(k: int, b: int = 2) -> float:
    """Star-discrepancy kernel: 1 at k = 0, else b^-a sin(pi kappa / b)^-2 with a = mu1(k)."""
    if k == 0:
        return 1.0
    a = mu1(k, b)
    lead = k // b ** (a - 1)
    return b**-a / math.sin(math.pi * lead / b) ** 2
