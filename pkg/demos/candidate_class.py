"""
Inside the candidate class
==========================

Screening keeps the predictors most correlated with y, the LARS path
over them proposes nested models, and each model gets a weight from
its residual sum of squares and size. Here we walk through each stage.
"""

import numpy as np

from fidreg import Dataset, build_candidates, lars_path, score_class, sis_screen

rng = np.random.default_rng(7)
n, p = 60, 300
x = rng.standard_normal((n, p))
y = 1.2 * x[:, 0] + 1.2 * x[:, 1] + 1.2 * x[:, 2] + rng.standard_normal(n)
d = Dataset(x, y)

screened = sis_screen(d)
print(f"SIS keeps {len(screened)} of {p}; first ten: {screened[:10]}")

path = lars_path(d.columns(screened))
print(f"LARS breakpoints: {path.steps}")

cand = build_candidates(d, screened)
sc = score_class(d, cand)

# the weight trades fit against size: bigger models fit better but pay
# log n / 2 per coefficient plus the log of the number of same-size supports
order = np.argsort(-sc.probs)
print(f"{'support':>32} {'size':>4} {'rss':>9} {'log score':>10} {'prob':>8}")
for i in order[:8]:
    m = sc.models[i]
    print(f"{str(m):>32} {len(m):>4} {sc.fits[i].rss:9.3f} {sc.log_scores[i]:10.3f} {sc.probs[i]:8.5f}")
