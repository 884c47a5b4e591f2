"""
Fiducial inference on a sparse regression
=========================================

A response driven by two of 500 predictors, 80 observations. We fit the
whole procedure and look at what it recovers.
"""

import numpy as np

from fidreg import fiducial_fit

rng = np.random.default_rng(1)
n, p = 80, 500
x = rng.standard_normal((n, p))
y = 2.0 * x[:, 10] - 1.5 * x[:, 250] + rng.standard_normal(n)

# screen, walk the lasso path, weight the models, draw 10000 samples
fit = fiducial_fit(x, y, samples=10_000, seed=0)
rep = fit.report

# the model distribution concentrates on the planted support
for model, prob in rep.model_probs[:5]:
    print(f"{str(model):>12}  {prob:.4f}")

# coefficients that more than half the draws include
for c in rep.coefficients:
    if c.significant:
        lo, hi = c.ci[0.95]
        print(f"beta[{c.column}] = {c.estimate:+.3f}  95% [{lo:+.3f}, {hi:+.3f}]"
              f"  included in {c.inclusion_prob:.1%} of draws")

lo, hi = rep.sigma2_ci[0.95]
print(f"sigma^2 = {rep.sigma2_estimate:.3f}  95% [{lo:.3f}, {hi:.3f}]  (truth 1)")

# the mean response at a new point, averaged over models
x_new = rng.standard_normal(p)
mu = fit.sample.linear_predictor(x_new)
print(f"E(Y|x_new): {mu.mean():+.3f}, truth {2.0 * x_new[10] - 1.5 * x_new[250]:+.3f}")
