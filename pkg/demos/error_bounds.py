"""
Probabilistic error bounds
==========================

Evaluate the worst-case error bounds for a single random draw and the
failure probability of the median of r draws.
"""

from medianqmc.error_bounds import (
    SmoothWeightSeq,
    WeightModel,
    amplify,
    bound_report,
    eps_inf,
    eps_sob1,
)

gammas = WeightModel.product([j**-2.0 for j in range(1, 21)])

# first-order Sobolev space, both random families
for m in (8, 12, 16, 20):
    net = eps_sob1(m, 20, 0.25, gammas, "net")
    plr = eps_sob1(m, 20, 0.25, gammas, "plr")
    print(f"m={m:2d}  net {net:.3e}  plr {plr:.3e}")

# order-2 space: the infimum over lambda is reported together with the constants
rep = bound_report("sob-alpha", "plr", m=14, s=5, alpha=2, delta=0.25, weights=gammas)
print(rep.value, rep.lam, rep.tau, rep.constants)

# infinitely smooth space with a_j = j^1.5
seq = SmoothWeightSeq.from_shifts([j**1.5 for j in range(1, 6)], 2)
print("inf, net:", eps_inf(12, 5, 0.25, seq, "net"))

# the median of r draws fails with probability binom(r, (r+1)/2) delta^((r+1)/2)
for r in (1, 5, 15, 31):
    print(f"r={r:2d}  failure probability {amplify(0.25, r):.3e}")
