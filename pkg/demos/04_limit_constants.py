# Limit constants and which variance formula the data supports.

from fractions import Fraction

from lpptour import asymptotics

half = Fraction(1, 2)

# %% beta = 1 / B(1), with a rigorous error bound.
b = asymptotics.beta_tr(half)
print(b, b.digits())

# %% Three closed forms for lim var(X_n)/(n-1).
for f in asymptotics.FORMULAS:
    print(f, asymptotics.variance_constant(half, formula=f).digits())

# The exact variance slope at n = 400 sides with the "derived" form.
cmp = asymptotics.compare_variance_constants(400, half)
for f in asymptotics.FORMULAS:
    print(f, "relative gap {:.2%}".format(cmp[f]["relative_gap"]))

# %% Standardize simulated X_500 with each constant and compare to N(0, 1).
for f in ("theorem", "derived"):
    s = asymptotics.clt_diagnostic(500, half, 3000, seed=7, formula=f)
    print(f, "variance {:.3f}  KS {:.4f}  skew {:.3f}".format(s.variance, s.ks_statistic, s.skewness))
