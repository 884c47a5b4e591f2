"""Independent reference computations used by the tests.

Nothing here imports the code under test.
"""

from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np


def cd_lasso_supports(x, y, grid=1500, lam_min_ratio=1e-3, tol=1e-13):
    """Support sequence of the lasso on unit-norm columns over a log lambda grid.

    Plain cyclic coordinate descent on 0.5 * ||y - Xb||^2 + lam * ||b||_1,
    warm-started down the grid. Consecutive duplicate supports are merged.
    """
    xs = x / np.linalg.norm(x, axis=0)
    gram = xs.T @ xs
    c0 = xs.T @ y
    lam_max = np.abs(c0).max()
    lams = lam_max * np.exp(np.linspace(0.0, np.log(lam_min_ratio), grid))
    p = x.shape[1]
    b = np.zeros(p)
    sets = [()]
    for lam in lams[1:]:
        for _ in range(20000):
            old = b.copy()
            for j in range(p):
                z = c0[j] - gram[j] @ b + b[j]
                b[j] = np.sign(z) * max(abs(z) - lam, 0.0)
            if np.abs(b - old).max() < tol:
                break
        s = tuple(int(i) for i in np.flatnonzero(b != 0))
        if s != sets[-1]:
            sets.append(s)
    return sets


def exact_ols(x_rows, y):
    """Solve the normal equations in rational arithmetic; returns (beta, rss)."""
    X = [[Fraction(v) for v in row] for row in x_rows]
    Y = [Fraction(v) for v in y]
    k = len(X[0])
    a = [[sum(X[i][r] * X[i][c] for i in range(len(X))) for c in range(k)] for r in range(k)]
    rhs = [sum(X[i][r] * Y[i] for i in range(len(X))) for r in range(k)]
    # Gauss-Jordan
    m = [row[:] + [rhs[r]] for r, row in enumerate(a)]
    for col in range(k):
        piv = next(r for r in range(col, k) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for r in range(k):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a_ - f * b_ for a_, b_ in zip(m[r], m[col])]
    beta = [m[r][k] for r in range(k)]
    resid = [Y[i] - sum(X[i][c] * beta[c] for c in range(k)) for i in range(len(X))]
    return beta, sum(r * r for r in resid)


def mp_rss(x, y, support, dps=50):
    """Residual sum of squares by normal equations in extended precision."""
    with mpmath.workdps(dps):
        if not support:
            return mpmath.fsum(mpmath.mpf(float(v)) ** 2 for v in y)
        xm = mpmath.matrix([[mpmath.mpf(float(x[i, j])) for j in support] for i in range(x.shape[0])])
        ym = mpmath.matrix([mpmath.mpf(float(v)) for v in y])
        beta = mpmath.lu_solve(xm.T * xm, xm.T * ym)
        r = ym - xm * beta
        return mpmath.fsum(v**2 for v in r)


def mp_log_R(n, p, m, rss, gamma=1, dps=50):
    """log of Gamma((n-m)/2) (pi RSS)^-((n-m-1)/2) n^-((m+1)/2) C(p,m)^-gamma."""
    with mpmath.workdps(dps):
        n_, m_ = mpmath.mpf(n), mpmath.mpf(m)
        return (mpmath.loggamma((n_ - m_) / 2)
                - (n_ - m_ - 1) / 2 * mpmath.log(mpmath.pi * rss)
                - (m_ + 1) / 2 * mpmath.log(n_)
                - gamma * mpmath.log(mpmath.binomial(p, m)))


def brute_force_probs(x, y, max_size, gamma=1, dps=50):
    """Exhaustive fiducial probabilities over all supports of size <= max_size.

    Returns a dict support-tuple -> probability (as float), normalized in
    extended precision.
    """
    n, p = x.shape
    supports = [s for k in range(max_size + 1) for s in combinations(range(p), k)]
    with mpmath.workdps(dps):
        logs = {s: mp_log_R(n, p, len(s), mp_rss(x, y, list(s), dps), gamma, dps) for s in supports}
        top = max(logs.values())
        w = {s: mpmath.exp(v - top) for s, v in logs.items()}
        z = mpmath.fsum(w.values())
        return {s: float(v / z) for s, v in w.items()}


def type7_quantile(values, q):
    """Hyndman-Fan type 7 quantile written out by hand."""
    v = sorted(values)
    h = (len(v) - 1) * q
    lo = int(np.floor(h))
    hi = min(lo + 1, len(v) - 1)
    return v[lo] + (h - lo) * (v[hi] - v[lo])
