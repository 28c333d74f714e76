# Monte Carlo sampling with reproducible parallel substreams.

from fractions import Fraction

import numpy as np

from lpptour import beta_tr, sample
from lpptour.percolation import coupled_increment_check, sample_values

half = Fraction(1, 2)

# %% E[X_n] / (n-1) settles near beta as n grows.
beta = float(beta_tr(half).value)
for n in (50, 100, 200, 500):
    r = sample(n, half, 2000, seed=1)
    print(n, round(r.normalized_mean, 5), "beta =", round(beta, 5))

# %% A report is a plain record and serializes to JSON.
print(sample(100, half, 1000, seed=3, workers=4).to_json())

# %% Same seed and worker count give identical draws.
a = sample_values(100, half, 1000, seed=3, workers=4)
b = sample_values(100, half, 1000, seed=3, workers=4)
print(np.array_equal(a, b))

# %% Adding a node changes the heaviest path by 0 or 1, never anything else.
print(coupled_increment_check(30, Fraction(1, 3), 20000, seed=5))
