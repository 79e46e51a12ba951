"""Exhaustive checks of the combinatorial facts the error bounds rest on.

Every check enumerates a small instance completely and compares exact
frequencies or counts with the claimed value.  Each returns a
:class:`CheckResult`; :func:`run_all` runs the whole suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .digital_net import (
    DUAL_SCAN_LIMIT,
    GenMatrixSet,
    digit_matrix,
    is_dual_member,
    mu1_array,
    niederreiter_matrices,
    per_projection_t,
    sobol_matrices,
    t_value_dual,
    t_value_rank,
)
from .gf_poly import check_base
from .poly_lattice import all_plr_specs, plr_dual_member
from .scramble import SeedSpec, draw_scrambled_net, enumerate_scrambles
from .weights import mu1, mu1_vec

ENUMERATION_LIMIT = 2**20


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}: {self.cases} cases{extra}"


def _random_nets(rng, count, bases=(2, 3), max_m=4, max_s=3):
    nets = []
    while len(nets) < count:
        b = int(rng.choice(bases))
        m = int(rng.integers(1, max_m + 1))
        s = int(rng.integers(1, max_s + 1))
        if b ** (m * s) > DUAL_SCAN_LIMIT:
            continue
        nets.append(GenMatrixSet(b, rng.integers(0, b, size=(s, m, m))))
    return nets


def structured_nets(max_m: int = 4):
    """Named nets used by several checks: identities, Sobol' and Niederreiter."""
    out = []
    for m in range(1, max_m + 1):
        out.append((f"identity m={m}", GenMatrixSet(2, np.eye(m, dtype=np.int64)[None])))
    eye, anti = np.eye(2, dtype=np.int64), np.eye(2, dtype=np.int64)[::-1]
    out.append(("(I, anti-I) m=2", GenMatrixSet(2, np.stack([eye, anti]))))
    out.append(("(I, I) m=2", GenMatrixSet(2, np.stack([eye, eye]))))
    for m in range(1, max_m + 1):
        for s in (2, 3):
            out.append((f"sobol s={s} m={m}", sobol_matrices(s, m)))
            out.append((f"niederreiter b=2 s={s} m={m}", niederreiter_matrices(s, m, 2)))
    for m in range(1, min(max_m, 3) + 1):
        for s in (1, 2):
            out.append((f"niederreiter b=3 s={s} m={m}", niederreiter_matrices(s, m, 3)))
    return out


def check_t_methods(n_random: int = 50, seed: int = 0, max_m: int = 4) -> CheckResult:
    """Rank criterion and dual scan give the same t-value."""
    rng = np.random.default_rng(seed)
    cases = [G for _, G in structured_nets(max_m)] + _random_nets(rng, n_random, max_m=max_m)
    bad = [i for i, G in enumerate(cases) if t_value_rank(G) != t_value_dual(G)]
    return CheckResult("t-value rank test == dual scan", not bad, len(cases),
                       f"mismatch at {bad}" if bad else "")


def check_scramble_preserves_t(draws: int = 100, max_m: int = 4) -> CheckResult:
    """Linear scrambling never changes the t-value."""
    nets = [
        sobol_matrices(3, max_m),
        niederreiter_matrices(3, max_m, 2),
        niederreiter_matrices(2, min(max_m, 3), 3),
    ]
    bad = []
    for idx, G in enumerate(nets):
        t0 = t_value_rank(G)
        for i in range(draws):
            if t_value_rank(draw_scrambled_net(G, SeedSpec(i), w=2 * G.m + 3)) != t0:
                bad.append((idx, i))
    return CheckResult("scrambling preserves the t-value", not bad, len(nets) * draws,
                       f"changed at {bad[:5]}" if bad else "")


def _digits(k: int, b: int, n: int) -> np.ndarray:
    return digit_matrix(b, k + 1, n)[k]


def _to_int(vec, b: int) -> int:
    return int(sum(int(d) * b**i for i, d in enumerate(vec)))


def check_scrambling_probability(b: int = 2, max_c: int = 4) -> CheckResult:
    """P(L^T k = k') = 1/((b-1) b^(c-1)) over L in L_{c,c}, and mu_1 is preserved."""
    check_base(b)
    cases, bad = 0, []
    for c in range(1, max_c + 1):
        Ls = [L.matrix for L in enumerate_scrambles(b, c, c)]
        if len(Ls) > ENUMERATION_LIMIT:
            break
        expected = Fraction(len(Ls), (b - 1) * b ** (c - 1))
        for k in range(b ** (c - 1), b**c):
            kv = _digits(k, b, c)
            counts = {}
            for L in Ls:
                ell = _to_int((L.T @ kv) % b, b)
                if mu1(ell, b) != c:
                    bad.append(("mu1", c, k, ell))
                counts[ell] = counts.get(ell, 0) + 1
            cases += 1
            targets = range(b ** (c - 1), b**c)
            if any(counts.get(t, 0) != expected for t in targets) or len(counts) != len(targets):
                bad.append(("count", c, k))
    return CheckResult(f"scrambling probability 1/((b-1)b^(c-1)), b={b}", not bad, cases,
                       f"violations {bad[:5]}" if bad else "")


def _dual_members(G: GenMatrixSet) -> np.ndarray:
    """All k in [0, b^m)^s in the dual net, as rows."""
    N = G.base**G.m
    ks = np.array(list(itertools.product(range(N), repeat=G.s)), dtype=np.int64)
    keep = [i for i, k in enumerate(ks) if is_dual_member(G, k)]
    return ks[keep]


def gain_bound(b: int, m: int, t_u: int, size_u: int, c_sum: int) -> float:
    """The three-case bound on dual members with a given NRT profile."""
    if c_sum <= m - t_u:
        return 0
    if c_sum <= m - t_u + size_u:
        return (b - 1) ** (c_sum - (m - t_u))
    return (b - 1) ** size_u * b ** (c_sum - (m - t_u + size_u))


def check_gain_coefficients(b: int = 2, max_m: int = 4, s: int = 2, n_random: int = 10,
                            seed: int = 1) -> CheckResult:
    """Dual members with each NRT profile obey the three-case bound and its corollary."""
    rng = np.random.default_rng(seed)
    nets = []
    for m in range(1, max_m + 1):
        if b == 2:
            nets.append(sobol_matrices(s, m))
        nets.append(niederreiter_matrices(s, m, b))
        nets.extend(GenMatrixSet(b, rng.integers(0, b, size=(s, m, m))) for _ in range(n_random))
    cases, bad = 0, []
    for G in nets:
        m = G.m
        duals = _dual_members(G)
        weights = mu1_array(duals, b)
        t_u = per_projection_t(G)
        for u, tu in t_u.items():
            idx = [j - 1 for j in u]
            off = [j for j in range(s) if j not in idx]
            support = duals[:, off].sum(axis=1) == 0 if off else np.ones(len(duals), bool)
            for c_u in itertools.product(range(1, m + 1), repeat=len(u)):
                mask = support & np.all(weights[:, idx] == np.array(c_u), axis=1)
                count = int(mask.sum())
                c_sum = sum(c_u)
                cases += 1
                loose = (b - 1) / b * b ** (c_sum - (m - tu))
                if count > gain_bound(b, m, tu, len(u), c_sum) or count > loose:
                    bad.append((m, u, c_u, count))
    return CheckResult(f"gain-coefficient bound, b={b}, s={s}", not bad, cases,
                       f"violations {bad[:5]}" if bad else "")


def _scramble_dual_frequency(G: GenMatrixSet, k, rows: int) -> Fraction:
    """Exact P(k in dual of (L_1 C_1, ..., L_s C_s)) over L_j in L_{rows,m}."""
    b, m = G.base, G.m
    Ls = [L.matrix for L in enumerate_scrambles(b, rows, m)]
    if len(Ls) ** G.s > ENUMERATION_LIMIT:
        raise ValueError("enumeration too large")
    kv = [_digits(int(kj), b, rows) for kj in k]
    # per dimension, the image (L_j C_j)^T k_j for every L_j
    images = [
        [tuple(((L @ G[j]).T @ kv[j]) % b) for L in Ls] for j in range(G.s)
    ]
    hits = 0
    for combo in itertools.product(*images):
        if not (np.sum(combo, axis=0) % b).any():
            hits += 1
    return Fraction(hits, len(Ls) ** G.s)


def check_dual_probability(b: int = 2, max_m: int = 3) -> CheckResult:
    """Scrambled dual membership: the bound for k_j < b^m, and exactly b^-m otherwise."""
    cases, bad = 0, []
    for m in range(1, max_m + 1):
        for G in ([sobol_matrices(1, m), sobol_matrices(2, m)] if b == 2 else
                  [niederreiter_matrices(1, m, b), niederreiter_matrices(2, m, b)]):
            s = G.s
            if (b ** (m * (m - 1) // 2) * (b - 1) ** m) ** s > ENUMERATION_LIMIT:
                continue
            t_u = per_projection_t(G)
            N = b**m
            for k in itertools.product(range(N), repeat=s):
                if not any(k):
                    continue
                u = tuple(j + 1 for j in range(s) if k[j])
                bound = Fraction(b, b - 1) ** (len(u) - 1) * Fraction(1, b ** (m - t_u[u]))
                freq = _scramble_dual_frequency(G, k, m)
                cases += 1
                if freq > bound:
                    bad.append(("first", m, k, freq))
            # some coordinate at or beyond b^m: needs one more row of each L_j
            big = [(N,) + (0,) * (s - 1), (N + 1,) + (1,) * (s - 1), (2 * N - 1,) + (N - 1,) * (s - 1)]
            for k in big:
                try:
                    freq = _scramble_dual_frequency(G, k, m + 1)
                except ValueError:
                    continue
                cases += 1
                if freq != Fraction(1, N):
                    bad.append(("second", m, k, freq))
    return CheckResult(f"scrambled dual-membership probability, b={b}", not bad, cases,
                       f"violations {bad[:5]}" if bad else "")


def plr_dual_frequency(k, b: int, m: int) -> Fraction:
    """Exact P(k in dual of P(p, g)) over p in P_m and g in G_m^s."""
    hits = total = 0
    for spec in all_plr_specs(b, m, len(k), w=m):
        total += 1
        hits += plr_dual_member(k, spec)
    return Fraction(hits, total)


def check_plr_dual_probability(b: int = 2, max_m: int = 2) -> CheckResult:
    """Exact 1/3 for k=(1,1) at b=2, m=2, and the two general bounds."""
    cases, bad = 0, []
    if b == 2 and max_m >= 2:
        freq = plr_dual_frequency((1, 1), 2, 2)
        cases += 1
        if freq != Fraction(1, 3):
            bad.append(("(1,1)", freq))
        for k in ((4, 1), (5, 2)):
            freq = plr_dual_frequency(k, 2, 2)
            cases += 1
            if freq > Fraction(3 * mu1_vec(k, 2), 3):
                bad.append((k, freq))
    for m in range(1, max_m + 1):
        n_specs = len(list(all_plr_specs(b, m, 1, w=m))) * (b**m - 1)
        if n_specs * b ** (2 * m) > ENUMERATION_LIMIT:
            break
        N = b**m
        for k in itertools.product(range(N), repeat=2):
            if not any(k):
                continue
            freq = plr_dual_frequency(k, b, m)
            cases += 1
            if freq > Fraction(1, N - 1):
                bad.append(("small", m, k, freq))
        for k in ((N, 1), (N + 1, 2), (N * b - 1, N - 1)):
            freq = plr_dual_frequency(k, b, m)
            cases += 1
            if freq > Fraction(3 * mu1_vec(k, b), N - 1):
                bad.append(("large", m, k, freq))
    return CheckResult(f"polynomial lattice dual probability, b={b}", not bad, cases,
                       f"violations {bad[:5]}" if bad else "")


def run_all(base: int = 2, max_m: int = 3) -> list:
    """Every check at sizes bounded by ``max_m`` (capped where enumeration explodes)."""
    check_base(base)
    results = [
        check_t_methods(max_m=max_m),
        check_scramble_preserves_t(max_m=max_m),
        check_scrambling_probability(base, max_c=max_m + (1 if base == 2 else 0)),
        check_gain_coefficients(base, max_m=max_m),
        check_dual_probability(base, max_m=min(max_m, 3)),
        check_plr_dual_probability(base, max_m=min(max_m, 3 if base == 2 else 2)),
    ]
    return results
