"""Hierarchical fiducial sampling of (model, sigma, beta)."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .core import Dataset, DegenerateFit, ModelFit, ModelId
from .fiducial import ScoredClass, with_models_removed

log = logging.getLogger(__name__)


class RngStream:
    """Reproducible random stream keyed by ``(seed, stream_id)``.

    Backed by numpy's PCG64 bit generator seeded through ``SeedSequence``;
    normals use numpy's ziggurat and chi-square draws are ``2 * Gamma(df/2)``,
    both fixed-table algorithms, so a given key yields the same sequence on
    every platform for a given numpy release.
    """

    def __init__(self, seed: int = 0, stream_id: int = 0, _path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._path = _path
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *_path))
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def child(self, k: int) -> "RngStream":
        """Independent sub-stream, e.g. one for data and one for sampling."""
        return RngStream(self.seed, self.stream_id, (*self._path, int(k)))

    def uniform(self, size=None):
        return self._gen.random(size)

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)

    def chisquare(self, df: float, size=None):
        return 2.0 * self._gen.standard_gamma(0.5 * df, size)

    def choice(self, n: int, k: int) -> np.ndarray:
        """``k`` distinct integers from ``range(n)``."""
        return self._gen.choice(n, size=k, replace=False)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, path={self._path})"


@dataclass(frozen=True)
class FiducialDraw:
    model: ModelId
    sigma: float
    beta_dense: np.ndarray


def sample_model(sc: ScoredClass, rng: RngStream, size=None):
    """Index (or array of indices) into ``sc.models`` by inverse CDF."""
    cdf = np.cumsum(sc.probs)
    u = rng.uniform(size) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, len(cdf) - 1)
    return int(idx) if size is None else idx


def sample_sigma(fit: ModelFit, n: int, rng: RngStream, size=None):
    """sigma with ``rss / sigma**2 ~ chi2(n - |M|)``."""
    if not fit.rss > 0:
        raise DegenerateFit(f"model {fit.model} has rss {fit.rss}")
    df = n - fit.size
    if df < 2:
        raise ValueError(f"need n - |M| >= 2, got {df}")
    v = rng.chisquare(df, size)
    return np.sqrt(fit.rss / v) if size is not None else float(np.sqrt(fit.rss / v))


def sample_beta(fit: ModelFit, sigma, rng: RngStream):
    """beta ~ N(beta_ml, sigma^2 (X_M' X_M)^-1) via the triangular factor.

    ``sigma`` may be a scalar (returns shape ``(|M|,)``) or a vector of
    length k (returns shape ``(k, |M|)``, one row per sigma).
    """
    k = fit.size
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim == 0:
        if k == 0:
            return np.zeros(0)
        z = rng.standard_normal(k)
        return fit.beta_ml + float(sigma) * solve_triangular(fit.r_factor, z, lower=False)
    if k == 0:
        return np.zeros((sigma.size, 0))
    z = rng.standard_normal((sigma.size, k))
    w = solve_triangular(fit.r_factor, z.T, lower=False).T
    return fit.beta_ml + sigma[:, None] * w


@dataclass(frozen=True)
class FiducialSample:
    """A fiducial sample stored column-wise.

    ``coef`` holds draws only for ``columns`` (the union of candidate
    supports); every other coefficient is exactly zero in every draw.
    """

    models: list[ModelId]
    model_index: np.ndarray
    sigma: np.ndarray
    columns: np.ndarray
    coef: np.ndarray
    p: int

    def __len__(self) -> int:
        return len(self.sigma)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __getitem__(self, i: int) -> FiducialDraw:
        return FiducialDraw(self.models[self.model_index[i]], float(self.sigma[i]), self.beta_dense(i))

    @property
    def sigma2(self) -> np.ndarray:
        return self.sigma**2

    def beta_dense(self, i: int) -> np.ndarray:
        b = np.zeros(self.p)
        b[self.columns] = self.coef[i]
        return b

    def inclusion(self, j: int) -> np.ndarray:
        """Boolean mask of draws whose model contains column ``j``."""
        has = np.array([j in m for m in self.models], dtype=bool)
        return has[self.model_index]

    def column(self, j: int) -> np.ndarray:
        """All draws of coefficient ``j`` (zeros where excluded)."""
        pos = np.searchsorted(self.columns, j)
        if pos < len(self.columns) and self.columns[pos] == j:
            return self.coef[:, pos]
        return np.zeros(len(self))

    def linear_predictor(self, x_row) -> np.ndarray:
        """``x_row @ beta`` for every draw."""
        x_row = np.asarray(x_row, dtype=float)
        return self.coef @ x_row[self.columns]


def fiducial_sample(d: Dataset, sc: ScoredClass, count: int, rng: RngStream) -> FiducialSample:
    """Draw ``count`` triples: model from ``sc.probs``, then sigma, then beta."""
    if count < 1:
        raise ValueError("count must be positive")
    bad = [i for i, f in enumerate(sc.fits) if not f.rss > 0]
    if bad:
        log.warning("dropping %d model(s) with zero rss before sampling", len(bad))
        sc = with_models_removed(sc, bad)

    cols = np.array(sorted({j for m in sc.models for j in m}), dtype=int)
    pos = {j: k for k, j in enumerate(cols)}
    idx = sample_model(sc, rng, size=count)
    sigma = np.empty(count)
    coef = np.zeros((count, len(cols)))
    for i in np.unique(idx):
        fit = sc.fits[i]
        rows = np.flatnonzero(idx == i)
        s = sample_sigma(fit, d.n, rng, size=rows.size)
        sigma[rows] = s
        if fit.size:
            b = sample_beta(fit, s, rng)
            coef[np.ix_(rows, [pos[j] for j in fit.model])] = b
    return FiducialSample(list(sc.models), idx, sigma, cols, coef, d.p)
