"""Digital nets over F_b: generating matrices, points, t-values and dual nets.

A net is described by s generating matrices C_1, ..., C_s of shape n x m.
Point k is obtained by multiplying the base-b digit vector of k with each
C_j and reading the resulting n digits as a fraction.  For b = 2 the n digits
of a coordinate are packed into one unsigned 64-bit word (n <= 52 keeps the
conversion to double exact); other bases keep one digit per byte.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .gf_poly import GfPoly, check_base, enumerate_moduli, inverse, laurent_digits

MAX_PACKED_PRECISION = 52
DUAL_SCAN_LIMIT = 2**24
DEFAULT_DIRNUMS = "new-joe-kuo-6.64.txt"


class InstanceTooLarge(ValueError):
    """Raised instead of starting an enumeration that would not finish."""


@dataclass(frozen=True, eq=False)
class GenMatrixSet:
    """s generating matrices over F_b, stored as an int array of shape (s, n, m)."""

    base: int
    matrices: np.ndarray

    def __post_init__(self):
        check_base(self.base)
        mats = np.asarray(self.matrices, dtype=np.int64)
        if mats.ndim != 3:
            raise ValueError("matrices must have shape (s, n, m)")
        if mats.size and (mats.min() < 0 or mats.max() >= self.base):
            raise ValueError(f"entries must lie in F_{self.base}")
        mats = mats.copy()
        mats.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def s(self) -> int:
        return self.matrices.shape[0]

    @property
    def n(self) -> int:
        return self.matrices.shape[1]

    @property
    def m(self) -> int:
        return self.matrices.shape[2]

    def __getitem__(self, j):
        return self.matrices[j]

    def project(self, dims) -> GenMatrixSet:
        """Generating matrices of the projection onto the (0-based) dims."""
        return GenMatrixSet(self.base, self.matrices[list(dims)])

    def pad_rows(self, n: int) -> GenMatrixSet:
        """Zero-pad (or keep) to n rows."""
        if n < self.n:
            raise ValueError("cannot pad to fewer rows")
        out = np.zeros((self.s, n, self.m), dtype=np.int64)
        out[:, : self.n] = self.matrices
        return GenMatrixSet(self.base, out)

    def upper_nonsingular(self) -> bool:
        """True when every upper m x m block is invertible over F_b."""
        return all(
            rank_mod_b(self.matrices[j, : self.m], self.base) == self.m
            for j in range(self.s)
        )

    def __eq__(self, other):
        return (
            isinstance(other, GenMatrixSet)
            and self.base == other.base
            and np.array_equal(self.matrices, other.matrices)
        )


@dataclass(eq=False)
class PointSet:
    """b^m points in [0,1)^s at digit precision w.

    ``data`` holds uint64 words of shape (N, s) when b = 2, and uint8 digits
    of shape (N, s, w) otherwise.
    """

    base: int
    precision: int
    data: np.ndarray
    _coords: np.ndarray | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.data.shape[0]

    def __len__(self):
        return self.size

    @property
    def s(self) -> int:
        return self.data.shape[1]

    @property
    def packed(self) -> bool:
        return self.data.ndim == 2

    @property
    def points(self) -> np.ndarray:
        """Coordinates as a float array of shape (N, s)."""
        if self._coords is None:
            if self.packed:
                self._coords = self.data.astype(np.float64) * 2.0**-self.precision
            else:
                scale = float(self.base) ** -np.arange(1, self.precision + 1)
                self._coords = self.data.astype(np.float64) @ scale
        return self._coords

    def digits(self) -> np.ndarray:
        """Digits of every coordinate, shape (N, s, w), most significant first."""
        if not self.packed:
            return self.data
        shifts = np.arange(self.precision - 1, -1, -1, dtype=np.uint64)
        return ((self.data[..., None] >> shifts) & np.uint64(1)).astype(np.uint8)

    def same_as(self, other: PointSet) -> bool:
        """Bit-for-bit equality, including point order."""
        return (
            self.base == other.base
            and self.precision == other.precision
            and np.array_equal(self.digits(), other.digits())
        )


def psi(digits, b: int = 2) -> float:
    """Map a digit vector (y_1, ..., y_n) to sum_i y_i b^{-i}."""
    total = 0.0
    scale = 1.0
    for y in digits:
        if not 0 <= y < b:
            raise ValueError(f"digit {y} is not in F_{b}")
        scale /= b
        total += y * scale
    return total


def digit_matrix(b: int, count: int, ndigits: int) -> np.ndarray:
    """Row k holds the base-b digits (kappa_0, kappa_1, ...) of k."""
    k = np.arange(count, dtype=np.int64)
    out = np.empty((count, ndigits), dtype=np.int64)
    for i in range(ndigits):
        out[:, i] = k % b
        k //= b
    return out


def column_words(C: np.ndarray) -> np.ndarray:
    """Pack the columns of a binary n x m matrix; row 1 is the top bit."""
    n = C.shape[0]
    weights = np.uint64(1) << np.arange(n - 1, -1, -1, dtype=np.uint64)
    return (C.astype(np.uint64) * weights[:, None]).sum(axis=0, dtype=np.uint64)


def generate_points(G: GenMatrixSet) -> PointSet:
    """All b^m points of the digital net, in k-order, at precision n."""
    b, s, n, m = G.base, G.s, G.n, G.m
    N = b**m
    if b == 2 and n <= MAX_PACKED_PRECISION:
        words = np.empty((N, s), dtype=np.uint64)
        for j in range(s):
            cols = column_words(G[j])
            x = np.zeros(1, dtype=np.uint64)
            for c in range(m):
                x = np.concatenate([x, x ^ cols[c]])
            words[:, j] = x
        return PointSet(2, n, words)
    if b == 2:
        raise ValueError(f"binary precision above {MAX_PACKED_PRECISION} is not supported")
    K = digit_matrix(b, N, m)
    digits = np.empty((N, s, n), dtype=np.uint8)
    for j in range(s):
        digits[:, j, :] = (K @ G[j].T) % b
    return PointSet(b, n, digits)


def rank_mod_b(rows, b: int) -> int:
    """Rank of an integer matrix over F_b by Gaussian elimination."""
    A = np.array(rows, dtype=np.int64) % b
    if A.size == 0:
        return 0
    nrows, ncols = A.shape
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if A[r, col]), None)
        if pivot is None:
            continue
        A[[rank, pivot]] = A[[pivot, rank]]
        A[rank] = A[rank] * inverse(int(A[rank, col]), b) % b
        others = A[:, col].copy()
        others[rank] = 0
        A = (A - np.outer(others, A[rank])) % b
        rank += 1
        if rank == nrows:
            break
    return rank


class _Basis:
    """Incrementally maintained echelon basis of row vectors over F_b."""

    def __init__(self, b, pivots=None):
        self.b = b
        self.pivots = dict(pivots or {})

    def copy(self):
        return _Basis(self.b, self.pivots)

    def add(self, row) -> bool:
        b = self.b
        v = np.asarray(row, dtype=np.int64) % b
        for col in range(v.shape[0]):
            if not v[col]:
                continue
            if col in self.pivots:
                v = (v - v[col] * self.pivots[col]) % b
            else:
                self.pivots[col] = v * inverse(int(v[col]), b) % b
                return True
        return False


def _all_compositions_independent(G: GenMatrixSet, total: int) -> bool:
    # depth-first over a_1 + ... + a_s = total, adding rows incrementally
    s, n = G.s, G.n

    def rec(j, remaining, basis):
        if j == s - 1:
            if remaining > n:
                return True
            basis = basis.copy()
            for i in range(remaining):
                if not basis.add(G[j][i]):
                    return False
            return True
        basis = basis.copy()
        for a in range(0, min(remaining, n) + 1):
            if a > 0 and not basis.add(G[j][a - 1]):
                return False
            if not rec(j + 1, remaining - a, basis):
                return False
        return True

    return rec(0, total, _Basis(G.base))


def t_value_rank(G: GenMatrixSet) -> int:
    """Least t by the row-independence criterion over all compositions of m - t.

    Rows taken are the first a_j rows of C_j; a composition asking for more
    than n rows of a single matrix cannot occur when n >= m.
    """
    if G.n < G.m:
        raise ValueError("t_value_rank requires n >= m")
    for t in range(G.m + 1):
        if _all_compositions_independent(G, G.m - t):
            return t
    return G.m  # pragma: no cover - the empty composition is always independent


def mu1_array(k: np.ndarray, b: int) -> np.ndarray:
    """NRT weight of every entry of an integer array."""
    k = np.asarray(k, dtype=np.int64).copy()
    out = np.zeros(k.shape, dtype=np.int64)
    pos = 0
    while k.any():
        pos += 1
        out[k > 0] = pos
        k //= b
    return out


def dual_images(G: GenMatrixSet, count: int) -> np.ndarray:
    """C_j^T tr_n(k) for k < count, shape (s, count, m)."""
    b = G.base
    ndig = max(1, math.ceil(math.log(count, b))) if count > 1 else 1
    K = digit_matrix(b, count, ndig)[:, : G.n]
    out = np.empty((G.s, count, G.m), dtype=np.int64)
    for j in range(G.s):
        out[j] = (K @ G[j][: K.shape[1]]) % b
    return out


def is_dual_member(G: GenMatrixSet, k) -> bool:
    """True iff C_1^T tr_n(k_1) + ... + C_s^T tr_n(k_s) = 0 over F_b."""
    b = G.base
    total = np.zeros(G.m, dtype=np.int64)
    for j, kj in enumerate(k):
        digits = []
        kj = int(kj)
        while kj and len(digits) < G.n:
            kj, d = divmod(kj, b)
            digits.append(d)
        if digits:
            total += np.asarray(digits) @ G[j][: len(digits)]
    return not (total % b).any()


def t_value_dual(G: GenMatrixSet) -> int:
    """Least t from the minimum NRT weight of the dual net.

    Scans every k in [0, b^m)^s minus the origin; refuses instances with
    b^(ms) above 2^24.
    """
    b, s, m = G.base, G.s, G.m
    if G.n < m:
        raise ValueError("t_value_dual requires n >= m")
    if b ** (m * s) > DUAL_SCAN_LIMIT:
        raise InstanceTooLarge(f"dual scan of {b}^{m * s} vectors exceeds the 2^24 limit")
    N = b**m
    images = dual_images(G, N)
    codes_base = b ** np.arange(m, dtype=np.int64)
    w1 = mu1_array(np.arange(N), b)
    # partial sums over the trailing coordinates, encoded as integers
    tail_vec = np.zeros((1, m), dtype=np.int64)
    tail_w = np.zeros(1, dtype=np.int64)
    for j in range(s - 1, 0, -1):
        tail_vec = ((images[j][:, None, :] + tail_vec[None, :, :]) % b).reshape(-1, m)
        tail_w = (w1[:, None] + tail_w[None, :]).reshape(-1)
    tail_codes = tail_vec @ codes_base
    best = m + 1
    for k1 in range(N):
        need = (-images[0][k1]) % b
        hit = tail_codes == need @ codes_base
        if k1 == 0:
            hit[0] = False  # exclude the origin
        if hit.any():
            best = min(best, int(w1[k1] + tail_w[hit].min()))
    mu = min(best, m + 1)
    return m - mu + 1


def compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in compositions(total - a, parts - 1):
            yield (a,) + rest


def is_tms_net_geometric(P: PointSet, t: int) -> bool:
    """Check the (t, m, s)-net property by counting points in elementary boxes."""
    if t < 0:
        raise ValueError("t must be non-negative")
    b = P.base
    m = round(math.log(P.size, b))
    if b**m != P.size:
        raise ValueError("point count is not a power of the base")
    if t > m:
        return False
    digits = P.digits().astype(np.int64)
    need = b**t
    for a in compositions(m - t, P.s):
        if max(a) > P.precision:
            return False
        code = np.zeros(P.size, dtype=np.int64)
        for j, aj in enumerate(a):
            for i in range(aj):
                code = code * b + digits[:, j, i]
        counts = np.bincount(code, minlength=b ** (m - t))
        if counts.shape[0] != b ** (m - t) or not np.all(counts == need):
            return False
    return True


def niederreiter_tu_bound(u, b: int) -> float:
    """Upper bound sum_{j in u} (log_b j + log_b log_b(j+b) + 1) on t_u."""
    u = list(u)
    if not u:
        raise ValueError("u must be non-empty")
    lb = math.log(b)
    return sum(math.log(j) / lb + math.log(math.log(j + b) / lb) / lb + 1 for j in u)


def read_direction_numbers(path=None) -> dict:
    """Parse a Joe-Kuo direction-number file into {dim: (degree, a, m_list)}."""
    if path is None:
        text = resources.files("medianqmc").joinpath("data").joinpath(DEFAULT_DIRNUMS).read_text()
    else:
        text = Path(path).read_text()
    table = {}
    for line in text.splitlines()[1:]:
        parts = line.split()
        if not parts:
            continue
        d, deg, a = int(parts[0]), int(parts[1]), int(parts[2])
        ms = [int(v) for v in parts[3 : 3 + deg]]
        if len(ms) != deg:
            raise ValueError(f"malformed direction-number line for dimension {d}")
        table[d] = (deg, a, ms)
    return table


def _sobol_column_ints(deg: int, a: int, init: list, m: int) -> list:
    mk = list(init)
    for k in range(deg, m):
        new = mk[k - deg] ^ (mk[k - deg] << deg)
        for i in range(1, deg):
            if (a >> (deg - 1 - i)) & 1:
                new ^= mk[k - i] << i
        mk.append(new)
    return mk[:m]


def sobol_matrices(s: int, m: int, direction_file=None) -> GenMatrixSet:
    """Square m x m generating matrices of the Sobol' net in dimension s.

    Dimension 1 is the identity; higher dimensions use the direction numbers
    of the given (or bundled) Joe-Kuo file.
    """
    if m > MAX_PACKED_PRECISION:
        raise ValueError(f"m must be at most {MAX_PACKED_PRECISION}")
    table = read_direction_numbers(direction_file)
    mats = np.zeros((s, m, m), dtype=np.int64)
    mats[0] = np.eye(m, dtype=np.int64)
    for j in range(1, s):
        if j + 1 not in table:
            raise ValueError(f"direction file does not cover dimension {j + 1}")
        deg, a, init = table[j + 1]
        mk = _sobol_column_ints(deg, a, init, m)
        for k, v in enumerate(mk):
            # V_k = m_k / 2^(k+1): row i (1-based) holds bit (k+1-i) of m_k
            for i in range(1, k + 2):
                mats[j, i - 1, k] = (v >> (k + 1 - i)) & 1
    return GenMatrixSet(2, mats)


def _force_nonsingular_upper(C: np.ndarray, b: int) -> np.ndarray:
    # move the first rows that extend the span to the top, keep the rest in order
    m = C.shape[1]
    basis = _Basis(b)
    chosen, rest = [], []
    for i, row in enumerate(C):
        if len(chosen) < m and basis.add(row):
            chosen.append(i)
        else:
            rest.append(i)
    return C[chosen + rest]


def niederreiter_matrices(s: int, m: int, b: int = 2, n: int | None = None) -> GenMatrixSet:
    """Generating matrices of the Niederreiter net in base b.

    Dimension j uses the j-th monic irreducible p_j in (degree, integer code)
    order.  Row r (1-based) with r - 1 = Q e + u, e = deg p_j, holds the
    Laurent coefficients of x^(e-u-1) / p_j^(Q+1).
    """
    check_base(b)
    n = m if n is None else n
    if n < m:
        raise ValueError("need n >= m")
    polys = []
    d = 1
    while len(polys) < s:
        polys.extend(enumerate_moduli(b, d).members)
        d += 1
    mats = np.zeros((s, n, m), dtype=np.int64)
    for j, p in enumerate(polys[:s]):
        e = p.degree
        for r in range(n):
            Q, u = divmod(r, e)
            num = GfPoly.x_power(e - u - 1, b)
            mats[j, r] = laurent_digits(num, p ** (Q + 1), m)
        if rank_mod_b(mats[j, :m], b) < m:
            mats[j] = _force_nonsingular_upper(mats[j], b)
    return GenMatrixSet(b, mats)


def local_discrepancy(P, y) -> float:
    """Fraction of points in the anchored box [0, y) minus its volume."""
    pts = P.points if isinstance(P, PointSet) else np.asarray(P, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    inside = np.all(pts < y, axis=1)
    return inside.sum() / pts.shape[0] - float(np.prod(y))


def per_projection_t(G: GenMatrixSet, subsets=None) -> dict:
    """t_u for each requested (1-based) subset u; defaults to all non-empty u."""
    if subsets is None:
        subsets = [
            u for r in range(1, G.s + 1) for u in itertools.combinations(range(1, G.s + 1), r)
        ]
    return {tuple(u): t_value_rank(G.project([j - 1 for j in u])) for u in subsets}
