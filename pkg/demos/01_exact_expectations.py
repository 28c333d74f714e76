# Exact expected heaviest-path weight on small tournaments.
#
# Nodes 1..n, an edge i -> j for every i < j, each edge weight 1 with
# probability p and 0 otherwise. X_n is the heaviest path weight from 1 to n.

from fractions import Fraction

from lpptour import distribution, expected_weight, moments_float
from lpptour.percolation import brute_force_distribution

half = Fraction(1, 2)

# %% The recurrence gives E[X_n] as an exact rational.
for n in range(1, 9):
    print(n, expected_weight(n, half))

# For n = 8 the denominator is 2**28.
f8 = expected_weight(8, half)
print(f8.denominator == 2**28, float(f8))

# %% Whole distributions, checked against enumerating every weighting.
for n in range(1, 6):
    d = distribution(n, Fraction(1, 3))
    assert d == brute_force_distribution(n, Fraction(1, 3))
    print(n, [str(x) for x in d.probs])

# %% Past n = 64 the exact fractions get huge, so switch to floats.
m1, m2 = moments_float(400, half)
print("E[X_400] =", m1[400], "  var(X_400) =", m2[400] - m1[400] ** 2)
