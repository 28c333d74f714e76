# Generating functions and composition sums.
#
# A(x) = sum q^C(n,2) x^n and B(x) = sum q^C(n+1,2) x^n determine everything:
# 1 + E[X_n] is the x^n coefficient of 1 + x / ((1-x)^2 B(x)).

from fractions import Fraction

from lpptour import series
from lpptour.recurrence import expected_weight, pgf

q = Fraction(1, 2)
A, B = series.series_A(q, 10), series.series_B(q, 10)

# %% 1 + x B(x) = A(x), coefficient by coefficient.
print((series.one(10) + B.shift()).truncate(10) == A)

# %% 1/B and the expected-weight series.
H = series.series_H(q, 6)
print("1/B:", [str(c) for c in H.coeffs])
G = series.series_G(q, 6)
print("G:  ", [str(c) for c in G.coeffs])
print([G[n] == 1 + expected_weight(n, 1 - q) for n in range(1, 7)])

# %% The same numbers from signed sums over integer compositions.
for n in range(1, 7):
    print(n, series.h_by_compositions(n, q), series.g_by_compositions(n, q), series.g_by_triangular_sum(n, q))

# %% The bivariate series carries the full law: [x^n] Z(x, t) is the PGF of X_n.
Z = series.series_Z(q, 6)
for n in range(1, 7):
    assert Z[n] == pgf(n, 1 - q)
print(Z[4])
