"""The median QMC estimator M_r(f) = median(Q_{P_1}(f), ..., Q_{P_r}(f))."""

from __future__ import annotations

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .digital_net import GenMatrixSet, PointSet, generate_points
from .gf_poly import check_base
from .poly_lattice import plr_gen_matrices, sample_plr
from .scramble import SeedSpec, draw_scrambled_net

DEFAULT_PRECISION = 52
DEFAULT_REPLICATES = 15

#: an integrand maps an (N, s) array of points to N values
Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class RuleSpec:
    """A random point-set family together with the median parameters.

    Parameters
    ----------
    family : {"net", "plr"}
        ``"net"`` scrambles the fixed ``base`` matrices, ``"plr"`` draws
        polynomial lattice point sets with irreducible moduli of degree m.
    b, m, s : int
        Base, log_b of the number of points, dimension.
    w : int
        Digit precision of the points.
    r : int
        Number of independent draws; must be odd.
    seed : int
        Master seed; replicate i uses streams derived from (seed, i).
    base : GenMatrixSet, optional
        Square m x m base matrices, required for the net family.
    """

    family: str
    b: int
    m: int
    s: int
    w: int = DEFAULT_PRECISION
    r: int = DEFAULT_REPLICATES
    seed: int = 0
    base: GenMatrixSet | None = None

    def __post_init__(self):
        check_base(self.b)
        if self.r < 1 or self.r % 2 == 0:
            raise ValueError("r must be an odd positive integer")
        if self.m < 1 or self.s < 1:
            raise ValueError("m and s must be positive")
        if self.w < self.m:
            raise ValueError("precision w must be at least m")
        if self.family == "net":
            G = self.base
            if G is None:
                raise ValueError("the net family needs base generating matrices")
            if (G.base, G.s, G.m, G.n) != (self.b, self.s, self.m, self.m):
                raise ValueError("base matrices must be square m x m, one per dimension, over F_b")
        elif self.family != "plr":
            raise ValueError(f"family must be 'net' or 'plr', got {self.family!r}")

    def draw(self, replicate: int) -> PointSet:
        """The point set P_{replicate + 1}."""
        if self.family == "net":
            G = draw_scrambled_net(self.base, SeedSpec(self.seed, replicate), self.w)
        else:
            seq = np.random.SeedSequence(self.seed, spawn_key=(replicate,))
            G = plr_gen_matrices(sample_plr(self.b, self.m, self.s, seq, self.w))
        return generate_points(G)


@dataclass(frozen=True)
class MedianEstimate:
    value: float
    replicate_values: tuple
    rule: RuleSpec


def qmc_mean(P, f: Integrand) -> float:
    """Equal-weight average of f over P with compensated summation.

    ``P`` is a :class:`PointSet` or an (N, s) array of points.

    Raises
    ------
    FloatingPointError
        If f returns a non-finite value; the message names the point.
    """
    X = P.points if isinstance(P, PointSet) else np.asarray(P, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    vals = np.asarray(f(X), dtype=np.float64).reshape(-1)
    if vals.shape[0] != X.shape[0]:
        raise ValueError(f"integrand returned {vals.shape[0]} values for {X.shape[0]} points")
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        k = int(bad[0])
        raise FloatingPointError(f"integrand is {vals[k]} at point k={k}: {X[k].tolist()}")
    return math.fsum(vals.tolist()) / len(vals)


def median_of(values) -> float:
    """Middle order statistic of an odd number of values."""
    v = sorted(values)
    if len(v) % 2 == 0:
        raise ValueError("the median rule needs an odd number of values")
    return v[len(v) // 2]


def median_estimate(rule: RuleSpec, f: Integrand, threads: int | None = None) -> MedianEstimate:
    """Draw r point sets, average f over each and return the median.

    Replicates run on a thread pool of ``threads`` workers (default: serial);
    the result does not depend on the number of threads.
    """
    def one(i):
        return qmc_mean(rule.draw(i), f)

    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            vals = list(ex.map(one, range(rule.r)))
    else:
        vals = [one(i) for i in range(rule.r)]
    return MedianEstimate(median_of(vals), tuple(vals), rule)
