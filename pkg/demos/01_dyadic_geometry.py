# The dyadic distance between two points is the length of the smallest
# dyadic interval holding both.  It only takes power-of-two values.
import numpy as np

from dyadic_schrodinger.dyadic import DyadicInterval, GridPoint, delta_matrix, dyadic_distance, level_set_pairs, measure_B

J = 10
x, y = GridPoint.from_real(0.3, J), GridPoint.from_real(0.4, J)
print("delta(0.3, 0.4) =", dyadic_distance(x, y))  # both sit in [0, 1/2) but not in a quarter
print("delta(0.9, 1.1) =", dyadic_distance(GridPoint.from_real(0.9, J), GridPoint.from_real(1.1, J)))

# far from the Euclidean distance: neighbours across 1/2 are maximally far apart
left, right = GridPoint.from_real(0.5 - 2**-J, J), GridPoint.from_real(0.5, J)
print("neighbours across 1/2:", dyadic_distance(left, right))

# the matrix on a coarse grid shows the block structure
D = delta_matrix(8, 3)
print(D)

# ultrametric: every triangle is isosceles with the two longest sides equal
D = delta_matrix(64, 6)
ok = np.all(D[:, None, :] <= np.maximum(D[:, :, None], D[None, :, :]))
print("ultrametric inequality on 64 cells:", ok)

# the set delta = 2**-j is the union over level-j intervals of (left half x right half) and its mirror
pairs = list(level_set_pairs(2, 3))
print(len(pairs), "pairs at distance 1/4 on 8 cells")
print("area of that set over [0,1):", 4 * measure_B(DyadicInterval(2, 1)))
