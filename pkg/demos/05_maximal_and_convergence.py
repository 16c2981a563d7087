# Pointwise convergence u(t) -> u0 is controlled by maximal functions:
# the dyadic Hardy-Littlewood function and a sharp function of order lambda.
import numpy as np

from dyadic_schrodinger import BesovParams, HaarCoefficients, analyze, generate_besov_sample, maximal
from dyadic_schrodinger.grid import generate_lipschitz_sample

p = BesovParams(lam=0.7, beta=0.3)
f = generate_besov_sample(8, lambda_target=p.lam, seed=11, per_level=2)
c = analyze(f)
c = HaarCoefficients(c.resolution, c.domain_length, [0.0], c.detail)

md = maximal.hardy_littlewood_dyadic(f)
ms = maximal.sharp_maximal_dyadic(f, p.lam)
tg = maximal.default_t_grid(512)
star = maximal.star_maximal(c, p.beta, tg)
bound = p.c_max * ms + 2 * md
print("max S*/(C M# + 2M):", np.max(star / bound))

rate = maximal.convergence_rate_bound(f, p, tg)
print("rate bound violations:", rate.violations, " worst lhs/rhs:", rate.ratios.max())

# Lipschitz data: the level tails shrink like 2**-j and u(t) -> u0 at rate t
g, lip = generate_lipschitz_sample(8, slope_bound=1.0, seed=2)
print("Cauchy bound (violations, worst ratio):", maximal.lipschitz_cauchy_violations(g, lip, p.beta, tg[::8]))
cg = analyze(g)
for m in range(0, 25, 4):
    t = 2.0**-m
    # the partial sums carry the opposite phase, so u(t) is the full sum at -t
    diff = maximal.oscillatory_partial_sums(cg, p.beta, -t)[-1] - g.values
    print(f"t=2^-{m}: max|u(t) - u0| = {np.max(np.abs(diff)):.3e}")
