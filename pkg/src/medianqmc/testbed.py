"""Test integrands with known integrals, convergence runs and slope fitting."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .digital_net import generate_points, sobol_matrices
from .median_qmc import DEFAULT_PRECISION, DEFAULT_REPLICATES, RuleSpec, median_estimate, qmc_mean

RULES = ("sobol", "median-scrambled-sobol", "median-plr")
FUNCTIONS = ("f1", "f2", "f3", "f4", "f5")
DEFAULT_DIMS = {"f1": 1, "f2": 1, "f3": 1, "f4": 20, "f5": 5}
FIT_MIN_M = 6
NOISE_FLOOR = 1e-13


@dataclass(frozen=True)
class TestFunction:
    """One of the integrands f1, ..., f5.

    f1 = sqrt(x), f2 = x^2 (log x + 1/3) and f3 = x e^x live on [0, 1].
    f4 = prod_j [1 + e^(-ceil(c) j) (x_j^c - 1/(1+c))] and
    f5 = exp(-sum_j x_j / 2^(j^c)) take a dimension s and a parameter c.
    """

    __test__ = False  # not a pytest class

    id: str
    s: int | None = None
    c: float | None = None

    def __post_init__(self):
        if self.id not in FUNCTIONS:
            raise ValueError(f"unknown test function {self.id!r}")
        s = DEFAULT_DIMS[self.id] if self.s is None else int(self.s)
        object.__setattr__(self, "s", s)
        if self.id in ("f1", "f2", "f3"):
            if s != 1:
                raise ValueError(f"{self.id} is one-dimensional")
            if self.c is not None:
                raise ValueError(f"{self.id} takes no parameter c")
        else:
            if self.c is None:
                raise ValueError(f"{self.id} needs the parameter c")
            if self.id == "f4" and self.c <= 0:
                raise ValueError("f4 needs c > 0")
            if self.id == "f5" and self.c < 0:
                raise ValueError("f5 needs c >= 0")
            if s < 1:
                raise ValueError("s must be positive")

    def __call__(self, X) -> np.ndarray:
        """Evaluate at the rows of an (N, s) array (or at a single point)."""
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim < 2
        X = X.reshape(-1, self.s)
        out = self._eval(X)
        return float(out[0]) if single and out.shape[0] == 1 else out

    def _eval(self, X):
        if self.id == "f1":
            return np.sqrt(X[:, 0])
        if self.id == "f2":
            x = X[:, 0]
            with np.errstate(divide="ignore", invalid="ignore"):
                v = x * x * (np.log(x) + 1 / 3)
            return np.where(x == 0, 0.0, v)  # continuous extension at 0
        if self.id == "f3":
            x = X[:, 0]
            return x * np.exp(x)
        j = np.arange(1, self.s + 1, dtype=np.float64)
        c = self.c
        if self.id == "f4":
            scale = np.exp(-math.ceil(c) * j)
            return np.prod(1 + scale * (X**c - 1 / (1 + c)), axis=1)
        return np.exp(-(X / 2.0 ** (j**c)).sum(axis=1))

    def exact_integral(self) -> float:
        if self.id == "f1":
            return 2 / 3
        if self.id == "f2":
            return 0.0
        if self.id in ("f3", "f4"):
            return 1.0
        # int_0^1 exp(-x t) dx = (1 - e^-t) / t with t = 2^(-j^c)
        t = [2.0 ** (-(j**self.c)) for j in range(1, self.s + 1)]
        return math.prod(-math.expm1(-tj) / tj for tj in t)

    @property
    def label(self) -> str:
        return self.id if self.c is None else f"{self.id}(c={self.c:g})"


def exact_integral(tf: TestFunction) -> float:
    return tf.exact_integral()


@dataclass(frozen=True)
class ConvergenceRecord:
    rule: str
    function: str
    c: float | None
    s: int
    b: int
    m: int
    N: int
    r: int
    w: int
    seed: int
    abs_error: float
    replicate_errors: tuple = field(default=(), compare=False)


def run_convergence(
    rule: str,
    tf: TestFunction,
    m_range,
    r: int = DEFAULT_REPLICATES,
    seed: int = 0,
    b: int = 2,
    w: int = DEFAULT_PRECISION,
    direction_file=None,
    threads: int | None = None,
) -> list:
    """One :class:`ConvergenceRecord` per m.

    ``rule`` is ``"sobol"`` (plain unscrambled Sobol' points, r is recorded as
    1), ``"median-scrambled-sobol"`` or ``"median-plr"``.
    """
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; choose from {', '.join(RULES)}")
    if rule != "median-plr" and b != 2:
        raise ValueError("Sobol' points are binary; use b=2")
    ms = list(m_range)
    if ms != sorted(ms):
        raise ValueError("m_range must be ascending")
    exact = tf.exact_integral()
    out = []
    for m in ms:
        if rule == "sobol":
            P = generate_points(sobol_matrices(tf.s, m, direction_file))
            err = abs(qmc_mean(P, tf) - exact)
            out.append(ConvergenceRecord(rule, tf.id, tf.c, tf.s, b, m, b**m, 1, m, seed, err, (err,)))
            continue
        if rule == "median-scrambled-sobol":
            spec = RuleSpec("net", b, m, tf.s, w, r, seed, sobol_matrices(tf.s, m, direction_file))
        else:
            spec = RuleSpec("plr", b, m, tf.s, w, r, seed)
        est = median_estimate(spec, tf, threads)
        reps = tuple(abs(v - exact) for v in est.replicate_values)
        out.append(
            ConvergenceRecord(rule, tf.id, tf.c, tf.s, b, m, b**m, r, w, seed, abs(est.value - exact), reps)
        )
    return out


def fit_slope(records, m_min: int = FIT_MIN_M, floor: float = NOISE_FLOOR) -> float:
    """Least-squares slope of log2(error) against m.

    Records with m < ``m_min`` or error below ``floor`` are skipped.  For
    b = 2 a slope of -alpha means a rate of N^-alpha.

    Raises
    ------
    ValueError
        If every error is zero or fewer than two records remain.
    """
    records = list(records)
    if records and all(rec.abs_error == 0 for rec in records):
        raise ValueError("all errors are zero; refusing to fit a slope")
    kept = [rec for rec in records if rec.m >= m_min and rec.abs_error >= floor]
    if len(kept) < 2:
        raise ValueError(f"need at least two records with m >= {m_min} and error >= {floor:g}")
    x = np.array([rec.m for rec in kept], dtype=np.float64)
    y = np.log2([rec.abs_error for rec in kept])
    return float(np.polyfit(x, y, 1)[0])


CSV_FIELDS = ("rule", "function", "c", "s", "b", "m", "N", "r", "w", "seed", "abs_error")


def write_records_csv(records, fh, config: dict | None = None) -> None:
    """Write records as CSV; ``config`` entries become leading ``# key=value`` lines.

    Floats are written with ``repr`` so that reading them back is lossless.
    """
    for key, val in (config or {}).items():
        fh.write(f"# {key}={val}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow([
            rec.rule, rec.function, "" if rec.c is None else repr(rec.c), rec.s, rec.b,
            rec.m, rec.N, rec.r, rec.w, rec.seed, repr(rec.abs_error),
        ])


def write_replicates_csv(records, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("rule", "function", "c", "m", "replicate", "abs_error"))
    for rec in records:
        for i, err in enumerate(rec.replicate_errors):
            writer.writerow([rec.rule, rec.function, "" if rec.c is None else repr(rec.c), rec.m, i, repr(err)])


def read_records_csv(fh) -> tuple:
    """Inverse of :func:`write_records_csv`; returns (records, config)."""
    config, body = {}, []
    for line in fh:
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            config[key] = val
        elif line.strip():
            body.append(line)
    rows = csv.DictReader(body)
    records = [
        ConvergenceRecord(
            row["rule"], row["function"], float(row["c"]) if row["c"] else None, int(row["s"]),
            int(row["b"]), int(row["m"]), int(row["N"]), int(row["r"]), int(row["w"]),
            int(row["seed"]), float(row["abs_error"]),
        )
        for row in rows
    ]
    return records, config
