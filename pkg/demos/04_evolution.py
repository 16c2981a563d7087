# The semigroup u(t) = exp(-i t D^beta) u0 rotates each Haar level with its
# own frequency 2**(j beta).  L2 norm is conserved and the difference
# quotient converges to -i D^beta u at first order.
import numpy as np

from dyadic_schrodinger import BesovParams, analyze, evolution, generate_besov_sample, synthesize

p = BesovParams(lam=0.7, beta=0.3)
f0 = generate_besov_sample(8, lambda_target=p.lam, seed=3)
c0 = analyze(f0)

for t in (0.0, 0.5, 1.0, 4.0):
    u = synthesize(evolution.evolve(c0, p.beta, t, atol=1e-12))
    print(f"t={t}: ||u||_2 = {u.l2_norm():.15f}  max|u - u0| = {np.max(np.abs(u.values - f0.values)):.3e}")

hs = [1e-2 * 2.0**-m for m in range(7)]
res = [evolution.pde_residual(c0, p, 0.5, h) for h in hs]
for h, a, b in zip(hs, res, res[1:] + [np.nan]):
    print(f"h={h:.2e}  residual {a:.3e}  ratio {a / b:.4f}")

# continuity in the Besov norm of order lambda
for s in 2.0 ** -np.arange(0, 12, 2):
    print(f"||u(s) - u0|| = {evolution.besov_continuity_modulus(c0, p, s, 0.0):.3e}  (s={s:.1e})")
