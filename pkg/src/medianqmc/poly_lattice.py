"""Polynomial lattice point sets P(p, g, w) and their random draws."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .digital_net import MAX_PACKED_PRECISION, GenMatrixSet, PointSet
from .gf_poly import GeneratorSet, GfPoly, check_base, enumerate_moduli, is_irreducible, laurent_digits

DEFAULT_PRECISION = 52


@dataclass(frozen=True)
class PlrSpec:
    """Modulus p (monic irreducible, degree m), generators g_j in G_m, precision w."""

    base: int
    modulus: GfPoly
    generators: tuple
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        check_base(self.base)
        p = self.modulus
        if p.base != self.base or not p.is_monic() or p.degree < 1:
            raise ValueError("modulus must be a monic polynomial of positive degree")
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.base != self.base or g.is_zero() or g.degree >= p.degree:
                raise ValueError(f"generator {g} must be nonzero with degree < m")
        if self.precision < p.degree:
            raise ValueError("precision must be at least m")

    @property
    def m(self) -> int:
        return int(self.modulus.degree)

    @property
    def s(self) -> int:
        return len(self.generators)

    def check_irreducible(self) -> bool:
        return is_irreducible(self.modulus)


def sample_plr(b: int, m: int, s: int, seed, w: int = DEFAULT_PRECISION) -> PlrSpec:
    """Draw p uniformly from the monic irreducibles of degree m and g uniformly from G_m^s.

    ``seed`` is anything accepted by ``numpy.random.default_rng``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    p = enumerate_moduli(b, m).sample(rng)
    gens = GeneratorSet(b, m)
    return PlrSpec(b, p, tuple(gens.sample(rng) for _ in range(s)), w)


def _nu_digits(spec: PlrSpec, k: int, j: int) -> tuple:
    # nu_w keeps only negative powers: reduce k(x) g_j(x) mod p first
    p = spec.modulus
    r = (GfPoly.from_int(k, spec.base) * spec.generators[j]) % p
    return laurent_digits(r, p, spec.precision)


def plr_points(spec: PlrSpec) -> PointSet:
    """Points nu_w(k(x) g(x) / p(x)) for k = 0, ..., b^m - 1, by direct long division.

    This is the slow reference path; :func:`plr_gen_matrices` followed by
    ``generate_points`` gives the same points much faster.
    """
    b, w, s = spec.base, spec.precision, spec.s
    N = b**spec.m
    digits = np.zeros((N, s, w), dtype=np.uint8)
    for k in range(1, N):
        for j in range(s):
            digits[k, j] = _nu_digits(spec, k, j)
    if b == 2 and w <= MAX_PACKED_PRECISION:
        weights = np.uint64(1) << np.arange(w - 1, -1, -1, dtype=np.uint64)
        words = (digits.astype(np.uint64) * weights).sum(axis=2, dtype=np.uint64)
        return PointSet(2, w, words)
    return PointSet(b, w, digits)


def plr_gen_matrices(spec: PlrSpec) -> GenMatrixSet:
    """Hankel generating matrices C_j[i, r] = u_{i+r-1} of shape w x m."""
    w, m = spec.precision, spec.m
    mats = np.zeros((spec.s, w, m), dtype=np.int64)
    idx = np.arange(w)[:, None] + np.arange(m)[None, :]
    for j, g in enumerate(spec.generators):
        u = np.asarray(laurent_digits(g, spec.modulus, w + m - 1), dtype=np.int64)
        mats[j] = u[idx]
    return GenMatrixSet(spec.base, mats)


def plr_dual_member(k, spec: PlrSpec) -> bool:
    """True iff sum_j k_j(x) g_j(x) = 0 mod p(x), using the untruncated k_j(x)."""
    if len(k) != spec.s:
        raise ValueError("k must have one entry per dimension")
    b = spec.base
    total = GfPoly(b)
    for kj, g in zip(k, spec.generators):
        total = total + GfPoly.from_int(int(kj), b) * g
    return (total % spec.modulus).is_zero()


def all_plr_specs(b: int, m: int, s: int, w: int = DEFAULT_PRECISION):
    """Every (p, g) in P_m x G_m^s; for exhaustive checks on tiny instances."""
    gens = list(GeneratorSet(b, m))
    for p in enumerate_moduli(b, m).members:
        for g in itertools.product(gens, repeat=s):
            yield PlrSpec(b, p, g, w)
