"""Generalized fiducial model probabilities over a candidate class.

For a model of size m with residual sum of squares RSS the unnormalized
fiducial weight is

    R(M) = Gamma((n-m)/2) (pi RSS)^(-(n-m-1)/2) n^(-(m+1)/2) C(p, m)^(-gamma)

and r(M) = R(M) / sum R(M') over the class. Everything is kept in log space.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .core import Dataset, DegenerateFit, EmptyClass, FiducialError, ModelFit, ModelId, fit_model

log = logging.getLogger(__name__)


def log_binom(p: int, m: int) -> float:
    """log C(p, m)."""
    k = min(m, p - m)
    if k <= 1000:
        # direct sum avoids cancellation between huge log-gamma values
        return float(np.log(np.arange(p - k + 1, p + 1, dtype=float)).sum() - gammaln(k + 1))
    return float(gammaln(p + 1) - gammaln(m + 1) - gammaln(p - m + 1))


def log_penalty(p: int, m: int, n: int, gamma: float = 1.0) -> float:
    """MDL-style complexity cost ``(m/2) log n + gamma * log C(p, m)``."""
    if not 0 <= m <= p:
        raise ValueError(f"need 0 <= m <= p, got m={m}, p={p}")
    return 0.5 * m * math.log(n) + gamma * log_binom(p, m)


def log_fiducial_score(n: int, p: int, m: int, rss: float, gamma: float = 1.0) -> float:
    """log R(M) for a model of size ``m`` with residual sum of squares ``rss``."""
    if not (math.isfinite(rss) and rss > 0):
        raise DegenerateFit(f"rss must be positive and finite, got {rss}")
    if not 0 <= m <= n - 2:
        raise ValueError(f"need 0 <= m <= n - 2, got m={m}, n={n}")
    return (
        float(gammaln(0.5 * (n - m)))
        - 0.5 * (n - m - 1) * math.log(math.pi * rss)
        - 0.5 * (m + 1) * math.log(n)
        - gamma * log_binom(p, m)
    )


@dataclass(frozen=True)
class ScoredClass:
    models: list[ModelId]
    log_scores: np.ndarray
    probs: np.ndarray
    fits: list[ModelFit]
    dropped: int = 0

    def __len__(self) -> int:
        return len(self.models)

    def prob_of(self, m: ModelId) -> float:
        """Normalized probability of ``m``; zero if it is not in the class."""
        try:
            return float(self.probs[self.models.index(m)])
        except ValueError:
            return 0.0


def normalize_log_scores(log_scores) -> np.ndarray:
    ls = np.asarray(log_scores, dtype=float)
    return np.exp(ls - logsumexp(ls))


def score_class(d: Dataset, candidates, gamma: float = 1.0) -> ScoredClass:
    """Fit and score every candidate, drop degenerate ones, normalize.

    ``candidates`` is a CandidateClass or any iterable of ModelId.
    """
    models = getattr(candidates, "models", candidates)
    models = sorted(set(models), key=lambda m: m.support)
    if not models:
        raise EmptyClass("no candidate models")
    kept, fits, scores = [], [], []
    for m in models:
        try:
            fit = fit_model(d, m)
            s = log_fiducial_score(d.n, d.p, len(m), fit.rss, gamma)
        except FiducialError as exc:
            log.warning("dropping model %s: %s", m, exc)
            continue
        kept.append(m)
        fits.append(fit)
        scores.append(s)
    if not kept:
        raise EmptyClass("every candidate model was dropped")
    ls = np.array(scores)
    return ScoredClass(kept, ls, normalize_log_scores(ls), fits, len(models) - len(kept))


def with_models_removed(sc: ScoredClass, bad) -> ScoredClass:
    """Copy of ``sc`` without the models at positions ``bad``, renormalized."""
    keep = [i for i in range(len(sc)) if i not in set(bad)]
    if not keep:
        raise EmptyClass("every candidate model was dropped")
    ls = sc.log_scores[keep]
    return ScoredClass(
        [sc.models[i] for i in keep], ls, normalize_log_scores(ls),
        [sc.fits[i] for i in keep], sc.dropped + len(sc) - len(keep))
