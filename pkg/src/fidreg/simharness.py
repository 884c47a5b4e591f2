"""Monte Carlo study of bias and interval coverage on synthetic sparse designs.

Data follow ``y = b * (x_1 + ... + x_d) + eps`` with standard normal AR(1)
predictors, ``cor(x_i, x_j) = rho**|i - j|`` and unit noise variance. Each
replicate runs the full pipeline and the true-model ("oracle") classical
fit side by side.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.linalg import solve_triangular

from .core import Dataset, FiducialError, ModelId, fit_model
from .fiducial import score_class
from .inference import (
    DEFAULT_LEVELS, percentile_interval, summarize_coefficient, summarize_sigma,
)
from .lasso_path import build_candidates
from .sampling import RngStream, fiducial_sample
from .screening import sis_screen

log = logging.getLogger(__name__)

DESIGN_POINTS = 50
QUANTITIES = ("sigma2", "beta1", "mean")


@dataclass(frozen=True)
class SimConfig:
    n: int
    p: int
    d: int
    b: float
    rho: float = 0.0
    reps: int = 100
    draws_per_rep: int = 10000
    gamma: float = 1.0
    levels: tuple = DEFAULT_LEVELS
    seed: int = 0
    keep: int | None = None
    size_cap: int | None = None
    max_steps: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(float(lv) for lv in self.levels))
        if not 1 <= self.d <= self.p:
            raise ValueError(f"need 1 <= d <= p, got d={self.d}, p={self.p}")
        if not self.d < self.n - 1:
            raise ValueError(f"need d < n - 1, got d={self.d}, n={self.n}")
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if not 0 <= self.rho < 1:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.draws_per_rep < 100:
            raise ValueError("draws_per_rep must be >= 100")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.levels or not all(0 < lv < 1 for lv in self.levels):
            raise ValueError("levels must lie in (0, 1)")

    @classmethod
    def from_dict(cls, raw: dict) -> "SimConfig":
        """Strict constructor: unknown keys are an error."""
        if not isinstance(raw, dict):
            raise ValueError("config must be a JSON object")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - names)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**raw)
        except TypeError as exc:
            raise ValueError(str(exc)) from None

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["levels"] = list(self.levels)
        return out

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class Truth:
    support: ModelId
    beta: np.ndarray
    sigma: float = 1.0


def generate_synthetic(cfg: SimConfig, rep: int, rng: RngStream | None = None):
    """Dataset and ground truth for replicate ``rep``."""
    if rng is None:
        rng = RngStream(cfg.seed, rep).child(0)
    z = rng.standard_normal((cfg.n, cfg.p))
    if cfg.rho == 0.0:
        x = z
    else:
        x = np.empty_like(z)
        x[:, 0] = z[:, 0]
        c = math.sqrt(1.0 - cfg.rho**2)
        for j in range(1, cfg.p):
            x[:, j] = cfg.rho * x[:, j - 1] + c * z[:, j]
    eps = rng.standard_normal(cfg.n)
    y = cfg.b * x[:, : cfg.d].sum(axis=1) + eps
    truth = Truth(ModelId(tuple(range(cfg.d))), np.full(cfg.d, float(cfg.b)), 1.0)
    return Dataset(x, y), truth


@dataclass
class OracleRow:
    sigma2: float
    sigma2_ci: dict
    beta1: float
    beta1_ci: dict
    mean: np.ndarray
    mean_ci: dict  # level -> (lower array, upper array)


def oracle_run(d: Dataset, truth: Truth, levels=DEFAULT_LEVELS, rows=None) -> OracleRow:
    """Classical least-squares inference on the true support.

    ``rows`` are the design-row indices for mean-function intervals
    (default: all rows).
    """
    fit = fit_model(d, truth.support)
    k = fit.size
    df = d.n - k
    s2 = fit.rss / df
    if rows is None:
        rows = np.arange(d.n)
    xm = d.x[np.ix_(np.asarray(rows), list(truth.support))]
    mean = xm @ fit.beta_ml
    # Var(x0' beta_hat) / sigma^2 = || R^-T x0 ||^2
    lev = solve_triangular(fit.r_factor, xm.T, trans="T", lower=False)
    se_mean = np.sqrt(s2 * np.einsum("ij,ij->j", lev, lev))
    rinv = solve_triangular(fit.r_factor, np.eye(k), lower=False)
    se_b1 = math.sqrt(s2 * float(rinv[0] @ rinv[0]))
    s2_ci, b1_ci, m_ci = {}, {}, {}
    for lv in levels:
        a = 1.0 - lv
        s2_ci[lv] = (fit.rss / stats.chi2.ppf(1 - a / 2, df), fit.rss / stats.chi2.ppf(a / 2, df))
        t = stats.t.ppf(1 - a / 2, df)
        b1 = float(fit.beta_ml[0])
        b1_ci[lv] = (b1 - t * se_b1, b1 + t * se_b1)
        m_ci[lv] = (mean - t * se_mean, mean + t * se_mean)
    return OracleRow(s2, s2_ci, float(fit.beta_ml[0]), b1_ci, mean, m_ci)


def _covers(ci, value) -> bool:
    return ci[0] <= value <= ci[1]


def run_rep(cfg: SimConfig, rep: int) -> dict:
    """One replicate: returns per-estimator coverage indicators and widths."""
    base = RngStream(cfg.seed, rep)
    d, truth = generate_synthetic(cfg, rep, base.child(0))
    rows = np.sort(base.child(2).choice(d.n, min(DESIGN_POINTS, d.n)))
    mu_true = d.x[np.ix_(rows, list(truth.support))] @ truth.beta
    levels = cfg.levels
    out = {"rep": rep, "excluded": False}

    orc = oracle_run(d, truth, levels, rows)
    out["oracle"] = {
        "sigma2": orc.sigma2,
        "sigma2_cov": [_covers(orc.sigma2_ci[lv], 1.0) for lv in levels],
        "sigma2_width": [orc.sigma2_ci[lv][1] - orc.sigma2_ci[lv][0] for lv in levels],
        "beta1_sig": True,
        "beta1_cov": [_covers(orc.beta1_ci[lv], truth.beta[0]) for lv in levels],
        "beta1_width": [orc.beta1_ci[lv][1] - orc.beta1_ci[lv][0] for lv in levels],
        "mean_cov": [float(np.mean((orc.mean_ci[lv][0] <= mu_true) & (mu_true <= orc.mean_ci[lv][1])))
                     for lv in levels],
        "mean_width": [float(np.mean(orc.mean_ci[lv][1] - orc.mean_ci[lv][0])) for lv in levels],
    }

    try:
        screened = sis_screen(d, cfg.keep)
        cand = build_candidates(d, screened, cfg.size_cap, cfg.max_steps)
        sc = score_class(d, cand, cfg.gamma)
        sample = fiducial_sample(d, sc, cfg.draws_per_rep, base.child(1))
    except FiducialError as exc:
        log.warning("rep %d excluded: %s", rep, exc)
        out["excluded"] = True
        return out

    s2_est, s2_ci = summarize_sigma(sample, levels)
    b1 = summarize_coefficient(sample, 0, levels)
    mu = sample.coef @ d.x[np.ix_(rows, sample.columns)].T  # draws x rows
    mean_cov, mean_width = [], []
    for lv in levels:
        a = 1.0 - lv
        lo, hi = np.quantile(mu, [a / 2, 1 - a / 2], axis=0)
        mean_cov.append(float(np.mean((lo <= mu_true) & (mu_true <= hi))))
        mean_width.append(float(np.mean(hi - lo)))
    out["proposed"] = {
        "sigma2": s2_est,
        "sigma2_cov": [_covers(s2_ci[lv], 1.0) for lv in levels],
        "sigma2_width": [s2_ci[lv][1] - s2_ci[lv][0] for lv in levels],
        "beta1_sig": b1.significant,
        "beta1_cov": [b1.significant and _covers(b1.ci[lv], truth.beta[0]) for lv in levels],
        "beta1_width": [b1.ci[lv][1] - b1.ci[lv][0] if b1.significant else math.nan
                        for lv in levels],
        "mean_cov": mean_cov,
        "mean_width": mean_width,
    }
    out["true_model_prob"] = sc.prob_of(truth.support)
    out["class_size"] = len(sc)
    return out


@dataclass
class SimResult:
    config: SimConfig
    rows: list[dict]
    excluded_reps: int
    beta1_not_significant_rate: float
    true_model_prob: list[float] = field(default_factory=list)

    @property
    def median_true_model_prob(self) -> float:
        return float(np.median(self.true_model_prob)) if self.true_model_prob else math.nan

    def get(self, estimator: str, quantity: str, level: float) -> dict:
        for r in self.rows:
            if r["estimator"] == estimator and r["quantity"] == quantity and r["level"] == level:
                return r
        raise KeyError((estimator, quantity, level))

    def bias(self, estimator: str = "proposed") -> tuple[float, float]:
        r = self.get(estimator, "sigma2", self.config.levels[0])
        return r["bias"], r["bias_se"]

    def to_dict(self) -> dict:
        return {
            "config_hash": self.config.config_hash(),
            "config": self.config.to_dict(),
            "excluded_reps": self.excluded_reps,
            "beta1_not_significant_rate": self.beta1_not_significant_rate,
            "median_true_model_prob": self.median_true_model_prob,
            "rows": self.rows,
        }


def _aggregate(cfg: SimConfig, outcomes: list[dict]) -> SimResult:
    kept = [o for o in outcomes if not o["excluded"]]
    excluded = len(outcomes) - len(kept)
    rows = []
    for est in ("proposed", "oracle"):
        recs = [o[est] for o in kept]
        if recs:
            s2 = np.array([r["sigma2"] for r in recs])
            bias = float(np.mean(s2 - 1.0))
            bias_se = float(np.std(s2, ddof=1) / math.sqrt(len(s2))) if len(s2) > 1 else math.nan
        else:
            bias = bias_se = math.nan
        for q in QUANTITIES:
            for k, lv in enumerate(cfg.levels):
                cov = [float(r[f"{q}_cov"][k]) for r in recs]
                width = [r[f"{q}_width"][k] for r in recs]
                width = [w for w in width if not math.isnan(w)]
                rows.append({
                    "estimator": est, "quantity": q, "level": lv,
                    "coverage": float(np.mean(cov)) if cov else math.nan,
                    "mean_width": float(np.mean(width)) if width else math.nan,
                    "bias": bias if q == "sigma2" else None,
                    "bias_se": bias_se if q == "sigma2" else None,
                    "excluded_reps": excluded,
                })
    ns_rate = (float(np.mean([not o["proposed"]["beta1_sig"] for o in kept]))
               if kept else math.nan)
    return SimResult(cfg, rows, excluded, ns_rate, [o["true_model_prob"] for o in kept])


def _run_rep_star(args):
    return run_rep(*args)


def run_experiment(cfg: SimConfig, threads: int = 1) -> SimResult:
    """Run every replicate and aggregate in replicate order.

    With ``threads > 1`` replicates run in worker processes; results do not
    depend on the worker count since each replicate owns its RNG stream.
    """
    jobs = [(cfg, r) for r in range(cfg.reps)]
    if threads > 1 and cfg.reps > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            outcomes = list(ex.map(_run_rep_star, jobs, chunksize=max(1, cfg.reps // (4 * threads))))
    else:
        outcomes = [run_rep(*j) for j in jobs]
    return _aggregate(cfg, outcomes)


CSV_HEADER = ("config_hash", "estimator", "quantity", "level", "coverage",
              "mean_width", "bias", "bias_se", "excluded_reps")


def csv_rows(result: SimResult) -> list[list[str]]:
    """Table rows (without header) in the CSV layout of ``CSV_HEADER``."""
    h = result.config.config_hash()

    def fmt(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return repr(v)
        return str(v)

    return [[h] + [fmt(r[k]) for k in CSV_HEADER[1:]] for r in result.rows]
