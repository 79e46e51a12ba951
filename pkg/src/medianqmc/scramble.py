"""Random linear scrambling by non-singular lower-triangular matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digital_net import GenMatrixSet
from .gf_poly import check_base

DEFAULT_PRECISION = 52


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one independent random stream.

    Streams are derived from the master seed by hashing the replicate and
    dimension indices (``numpy.random.SeedSequence`` spawn keys).
    """

    master: int
    replicate: int = 0
    dimension: int = 0

    def rng(self, *extra: int) -> np.random.Generator:
        seq = np.random.SeedSequence(
            self.master, spawn_key=(self.replicate, self.dimension) + tuple(extra)
        )
        return np.random.default_rng(seq)


@dataclass(frozen=True, eq=False)
class LowerTriScramble:
    """A w x n lower-triangular matrix over F_b with nonzero diagonal."""

    base: int
    matrix: np.ndarray

    def __post_init__(self):
        L = np.asarray(self.matrix, dtype=np.int64)
        w, n = L.shape
        if w < n:
            raise ValueError("scrambling matrix needs w >= n")
        if np.triu(L, 1).any():
            raise ValueError("entries above the diagonal must be zero")
        if not np.diagonal(L).all():
            raise ValueError("diagonal entries must be nonzero")
        L = L.copy()
        L.setflags(write=False)
        object.__setattr__(self, "matrix", L)

    @property
    def shape(self):
        return self.matrix.shape


def sample_scramble(b: int, w: int, n: int, seed) -> LowerTriScramble:
    """Draw L uniformly from the lower-triangular w x n matrices with nonzero diagonal.

    ``seed`` is a :class:`SeedSpec` or an int (treated as a master seed).
    """
    check_base(b)
    if w < n or n < 1:
        raise ValueError(f"need w >= n >= 1, got w={w}, n={n}")
    if not isinstance(seed, SeedSpec):
        seed = SeedSpec(int(seed))
    rng = seed.rng()
    L = rng.integers(0, b, size=(w, n), dtype=np.int64)
    L = np.tril(L, -1)
    idx = np.arange(n)
    L[idx, idx] = rng.integers(1, b, size=n, dtype=np.int64)
    return LowerTriScramble(b, L)


def apply_scramble(L: LowerTriScramble, C) -> np.ndarray:
    """Return the w x m product L C over F_b."""
    C = np.asarray(C, dtype=np.int64)
    if C.ndim != 2 or C.shape[0] != L.shape[1]:
        raise ValueError(f"cannot multiply {L.shape} by {C.shape}")
    return (L.matrix @ C) % L.base


def draw_scrambled_net(
    base: GenMatrixSet, seed, w: int = DEFAULT_PRECISION, replicate: int | None = None
) -> GenMatrixSet:
    """Scramble each square base matrix with an independent L_j of shape w x m.

    ``seed`` is a master seed or a :class:`SeedSpec`; the replicate index comes
    from the ``SeedSpec`` unless given explicitly (default 0).
    """
    if base.n != base.m:
        raise ValueError("base generating matrices must be square")
    if isinstance(seed, SeedSpec):
        if replicate is not None and replicate != seed.replicate:
            raise ValueError("replicate disagrees with the SeedSpec")
        master, replicate = seed.master, seed.replicate
    else:
        master, replicate = int(seed), replicate or 0
    mats = [
        apply_scramble(sample_scramble(base.base, w, base.m, SeedSpec(master, replicate, j)), base[j])
        for j in range(base.s)
    ]
    return GenMatrixSet(base.base, np.stack(mats))


def enumerate_scrambles(b: int, w: int, n: int):
    """Every matrix of L_{w,n}; only sensible for tiny shapes."""
    free = [(i, j) for i in range(w) for j in range(min(i, n))]
    diag = list(range(n))
    for dvals in np.ndindex(*([b - 1] * n)):
        for fvals in np.ndindex(*([b] * len(free))):
            L = np.zeros((w, n), dtype=np.int64)
            for (i, j), v in zip(free, fvals):
                L[i, j] = v
            for i, v in zip(diag, dvals):
                L[i, i] = v + 1
            yield LowerTriScramble(b, L)
