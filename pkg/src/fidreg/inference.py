"""Point estimates, percentile intervals and significance calls from a fiducial sample."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ModelId, TooFewDraws
from .fiducial import ScoredClass
from .sampling import FiducialDraw, FiducialSample

MIN_DRAWS = 100
DEFAULT_LEVELS = (0.90, 0.95, 0.99)


def percentile_interval(values, level: float) -> tuple[float, float]:
    """Equal-tailed interval using linear interpolation between order statistics."""
    if not 0 < level < 1:
        raise ValueError(f"level must be in (0, 1), got {level}")
    alpha = 1.0 - level
    lo, hi = np.quantile(np.asarray(values, dtype=float), [alpha / 2, 1 - alpha / 2])
    return float(lo), float(hi)


def as_sample(draws) -> FiducialSample:
    """Accept a FiducialSample or a sequence of FiducialDraw."""
    if isinstance(draws, FiducialSample):
        return draws
    draws = list(draws)
    if not draws:
        raise TooFewDraws("no draws")
    if not all(isinstance(dr, FiducialDraw) for dr in draws):
        raise TypeError("expected FiducialSample or FiducialDraw items")
    models = sorted({dr.model for dr in draws}, key=lambda m: m.support)
    where = {m: i for i, m in enumerate(models)}
    p = len(draws[0].beta_dense)
    cols = np.array(sorted({j for m in models for j in m}), dtype=int)
    coef = np.array([dr.beta_dense[cols] for dr in draws]).reshape(len(draws), len(cols))
    return FiducialSample(
        models, np.array([where[dr.model] for dr in draws]),
        np.array([dr.sigma for dr in draws], dtype=float), cols, coef, p)


def _check_count(n: int) -> None:
    if n < MIN_DRAWS:
        raise TooFewDraws(f"need at least {MIN_DRAWS} draws, got {n}")


def summarize_sigma(draws, levels=DEFAULT_LEVELS):
    """Mean of sigma^2 draws and percentile intervals for sigma^2.

    Intervals for sigma itself are the square roots of these endpoints.
    """
    s = as_sample(draws)
    _check_count(len(s))
    s2 = s.sigma2
    return float(s2.mean()), {lv: percentile_interval(s2, lv) for lv in levels}


@dataclass
class CoefficientSummary:
    column: int
    inclusion_prob: float
    significant: bool
    estimate: float | None = None
    ci: dict = field(default_factory=dict)


def summarize_coefficient(draws, j: int, levels=DEFAULT_LEVELS) -> CoefficientSummary:
    """Significant iff more than half of the draws include ``j``; the estimate
    and intervals then use only the draws that include it."""
    s = as_sample(draws)
    _check_count(len(s))
    inc = s.inclusion(j)
    prob = float(inc.mean())
    if not prob > 0.5:
        return CoefficientSummary(j, prob, False)
    vals = s.column(j)[inc]
    return CoefficientSummary(
        j, prob, True, float(vals.mean()),
        {lv: percentile_interval(vals, lv) for lv in levels})


def summarize_mean(draws, x_row, levels=DEFAULT_LEVELS):
    """Estimate and intervals for the mean response ``x_row @ beta``."""
    s = as_sample(draws)
    _check_count(len(s))
    mu = s.linear_predictor(x_row)
    return float(mu.mean()), {lv: percentile_interval(mu, lv) for lv in levels}


def aggregate_model_probs(sc: ScoredClass) -> list[tuple[ModelId, float]]:
    """Exact normalized model probabilities, largest first."""
    pairs = [(m, float(p)) for m, p in zip(sc.models, sc.probs)]
    pairs.sort(key=lambda mp: (-mp[1], mp[0].support))
    return pairs


@dataclass
class InferenceReport:
    model_probs: list[tuple[ModelId, float]]
    sigma2_estimate: float
    sigma2_ci: dict
    coefficients: list[CoefficientSummary]
    n: int
    p: int
    draws: int
    gamma: float
    levels: tuple
    column_names: list[str] | None = None

    def to_dict(self, top_models: int | None = None) -> dict:
        names = self.column_names or [f"x{j}" for j in range(self.p)]

        def ci_map(ci):
            return {_level_key(lv): [lo, hi] for lv, (lo, hi) in ci.items()}

        probs = self.model_probs if top_models is None else self.model_probs[:top_models]
        return {
            "n": self.n,
            "p": self.p,
            "draws": self.draws,
            "gamma": self.gamma,
            "levels": list(self.levels),
            "model_probs": [
                {"support": list(m.support), "columns": [names[j] for j in m],
                 "probability": pr}
                for m, pr in probs
            ],
            "sigma2": {"estimate": self.sigma2_estimate, "ci": ci_map(self.sigma2_ci)},
            "coefficients": [
                {"column": c.column, "name": names[c.column],
                 "inclusion_prob": c.inclusion_prob, "significant": c.significant,
                 "estimate": c.estimate,
                 "ci": ci_map(c.ci) if c.significant else None}
                for c in self.coefficients
            ],
        }


def _level_key(level: float) -> str:
    return f"{level:g}"


def build_report(n: int, sc: ScoredClass, sample: FiducialSample, levels=DEFAULT_LEVELS,
                 gamma: float = 1.0, column_names=None) -> InferenceReport:
    """Assemble a full report: every column gets a coefficient summary."""
    levels = tuple(levels)
    est, ci = summarize_sigma(sample, levels)
    coefs = [summarize_coefficient(sample, j, levels) for j in range(sample.p)]
    return InferenceReport(
        aggregate_model_probs(sc), est, ci, coefs,
        n=n, p=sample.p, draws=len(sample),
        gamma=gamma, levels=levels, column_names=column_names)
