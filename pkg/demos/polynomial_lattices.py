"""
Polynomial lattice point sets
=============================

Draw a random polynomial lattice rule, build its points by long division
and by Hankel generating matrices, and test dual membership exactly.
"""

from medianqmc.digital_net import generate_points
from medianqmc.gf_poly import GfPoly, enumerate_moduli
from medianqmc.poly_lattice import PlrSpec, plr_dual_member, plr_gen_matrices, plr_points, sample_plr

# the monic irreducibles of degree 4 over F_2
print([str(p) for p in enumerate_moduli(2, 4).members])

# the small worked example: p = x^2 + x + 1, g = 1, four digits of precision
spec = PlrSpec(2, GfPoly(2, (1, 1, 1)), (GfPoly(2, (1,)),), 4)
print(plr_points(spec).points[:, 0])  # 0, 0.375, 0.8125, 0.6875
print(plr_gen_matrices(spec)[0])

# a random rule in three dimensions; both constructions agree bit for bit
spec = sample_plr(2, 8, 3, seed=1)
print(spec.modulus, [str(g) for g in spec.generators])
print(plr_points(spec).same_as(generate_points(plr_gen_matrices(spec))))

# k is in the dual iff sum_j k_j(x) g_j(x) = 0 mod p(x)
print(plr_dual_member((0, 0, 0), spec), plr_dual_member((1, 2, 3), spec))
