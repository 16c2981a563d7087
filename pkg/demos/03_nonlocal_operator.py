# D^beta as a Haar multiplier and as a singular integral against the
# dyadic kernel delta**-(1+beta).  On Haar functions both give |I|**-beta.

from dyadic_schrodinger import generate_besov_sample, haar_function, nonlocal_op
from dyadic_schrodinger.dyadic import DyadicInterval, GridPoint

h = haar_function(DyadicInterval(1, 1), 10)
out = nonlocal_op.dbeta_integral(h, 0.5)
print("D^(1/2) h at x=0.1:", out.values[GridPoint.from_real(0.1, 10).cell].real)  # sqrt(2) * sqrt(2)

for beta in (0.25, 0.5, 0.75):
    I = DyadicInterval(3, 5)
    h = haar_function(I, 9)
    ratio = nonlocal_op.dbeta_integral(h, beta).values[h.values != 0] / h.values[h.values != 0]
    print(f"beta={beta}: eigenvalue {ratio.real.min():.15f} .. {ratio.real.max():.15f}, expected {I.length**-beta:.15f}")

f = generate_besov_sample(8, 4, lambda_target=0.8, seed=1)
spec = nonlocal_op.dbeta_via_spectrum(f, 0.5)
integ = nonlocal_op.dbeta_integral(f, 0.5)
print("spectral vs integral on [0,4):", (spec - integ).l2_norm() / spec.l2_norm())

# pairs at dyadic distance >= 2 form a bounded perturbation
near, far = nonlocal_op.dbeta_tail_split(f, 0.5)
print("far part norm", far.l2_norm(), "<=", nonlocal_op.far_field_operator_bound(0.5) * f.l2_norm())
