# Haar coefficients of a grid function, and the dyadic Besov seminorm
# computed two ways: by exact quadrature of the double integral and as a
# weighted sum of squared coefficients.
import numpy as np

from dyadic_schrodinger import analyze, besov, generate_besov_sample, synthesize
from dyadic_schrodinger.dyadic import DyadicInterval

f = generate_besov_sample(8, lambda_target=0.6, seed=7, per_level=3)
c = analyze(f)
print("coarse part (unit means):", c.coarse)
print("levels with nonzero coefficients:", [int(np.count_nonzero(d)) for d in c.detail])
print("round trip error:", np.max(np.abs(synthesize(c).values - f.values)))
print("Parseval:", c.energy(), f.l2_norm() ** 2)

for lam in (0.3, 0.5, 0.7):
    quad = besov.seminorm_sq_quadrature(f, lam)
    brute = besov.seminorm_sq_quadrature(f, lam, method="brute")
    coef = besov.seminorm_sq_coefficients(c, lam, atol=1e-12)
    print(f"lambda={lam}: quadrature {quad:.15g}  pairwise {brute:.15g}  coefficients {coef:.15g}")

# the weight of one coefficient: 2 on the unit interval, growing like |I|**(-2 lam)
for j in range(5):
    print(j, besov.besov_weight(DyadicInterval(j, 1), 0.5))

# norm equivalence with the plain coefficient norm
lo, hi = besov.equivalence_bracket(0.5)
print("ratio", besov.equivalence_ratio(f, 0.5), "bracket", (lo, hi))
