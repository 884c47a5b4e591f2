"""Sure independence screening by absolute marginal correlation."""

from __future__ import annotations

import math

import numpy as np

from .core import Dataset


def default_keep(n: int, p: int) -> int:
    """``min(p, max(1, floor(n / log n)))``."""
    return min(p, max(1, int(math.floor(n / math.log(n)))))


def marginal_scores(d: Dataset) -> np.ndarray:
    """|corr(X_j, y)| for every column; zero-variance columns score 0."""
    xc = d.x - d.x.mean(axis=0)
    yc = d.y - d.y.mean()
    xnorm = np.sqrt(np.einsum("ij,ij->j", xc, xc))
    ynorm = math.sqrt(float(yc @ yc))
    scores = np.zeros(d.p)
    if ynorm == 0.0:
        return scores
    # columns constant up to rounding are treated as constant
    ok = xnorm > 1e-12 * np.maximum(1.0, np.abs(d.x).max(axis=0)) * math.sqrt(d.n)
    scores[ok] = np.abs(xc[:, ok].T @ yc) / (xnorm[ok] * ynorm)
    return np.minimum(scores, 1.0)


def sis_screen(d: Dataset, keep: int | None = None) -> list[int]:
    """Indices of the ``keep`` largest scores, best first, ties to the lower index."""
    if keep is None:
        keep = default_keep(d.n, d.p)
    if not 1 <= keep <= d.p:
        raise ValueError(f"keep must be in [1, {d.p}], got {keep}")
    scores = marginal_scores(d)
    # stable sort on -score keeps lower index first among ties
    order = np.argsort(-scores, kind="stable")
    return [int(j) for j in order[:keep]]
