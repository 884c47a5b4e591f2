"""Data containers and dense least squares shared by the rest of the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.linalg import solve_triangular

# relative threshold on |R_ii| below which a submodel counts as collinear
RANK_TOL = 1e-10


class FiducialError(Exception):
    """Base class for recoverable numerical conditions in the pipeline."""


class RankDeficient(FiducialError):
    pass


class DegenerateFit(FiducialError):
    pass


class DegenerateStep(FiducialError):
    pass


class EmptyClass(FiducialError):
    pass


class TooFewDraws(FiducialError):
    pass


@dataclass(frozen=True)
class Dataset:
    """Design matrix ``x`` (n x p) and response ``y`` (n,)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float).ravel()
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2:
            raise ValueError("x must be a 2-d array")
        if x.shape[0] != y.shape[0]:
            raise ValueError(
                f"x has {x.shape[0]} rows but y has {y.shape[0]} entries")
        if x.shape[0] < 3:
            raise ValueError("need at least 3 observations")
        if x.shape[1] < 1:
            raise ValueError("need at least one predictor")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("x and y must be finite")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def columns(self, idx) -> "Dataset":
        """Dataset restricted to the given columns (in the given order)."""
        return Dataset(self.x[:, list(idx)], self.y)


@dataclass(frozen=True, order=True)
class ModelId:
    """A candidate model: the sorted tuple of active column indices."""

    support: tuple[int, ...] = ()

    def __post_init__(self):
        s = tuple(sorted(int(j) for j in self.support))
        if len(set(s)) != len(s):
            raise ValueError(f"duplicate indices in support {self.support}")
        if s and s[0] < 0:
            raise ValueError("column indices must be nonnegative")
        object.__setattr__(self, "support", s)

    @classmethod
    def of(cls, indices: Iterable[int]) -> "ModelId":
        return cls(tuple(indices))

    def __len__(self) -> int:
        return len(self.support)

    def __iter__(self):
        return iter(self.support)

    def __contains__(self, j) -> bool:
        return j in self.support

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.support)) + "}"


@dataclass(frozen=True)
class ModelFit:
    """Least-squares fit of one model.

    ``r_factor`` is the upper-triangular factor of the thin QR of X_M, so
    ``r_factor.T @ r_factor == X_M.T @ X_M``.
    """

    model: ModelId
    beta_ml: np.ndarray
    rss: float
    r_factor: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.model)


def fit_model(d: Dataset, m: ModelId) -> ModelFit:
    """Ordinary least squares of ``y`` on the columns in ``m`` via Householder QR.

    Raises
    ------
    RankDeficient
        If some |R_ii| falls below ``RANK_TOL`` times the largest one.
    """
    k = len(m)
    if k and m.support[-1] >= d.p:
        raise ValueError(f"support {m} out of range for p={d.p}")
    if k > d.n:
        raise RankDeficient(f"model {m} has more columns than rows")
    if k == 0:
        return ModelFit(m, np.zeros(0), float(d.y @ d.y), np.zeros((0, 0)))

    xm = d.x[:, list(m.support)]
    q, r = np.linalg.qr(xm, mode="reduced")
    diag = np.abs(np.diag(r))
    if diag.min() < RANK_TOL * diag.max() or diag.max() == 0.0:
        raise RankDeficient(f"model {m} is collinear")
    # fix signs so the factor is unique (positive diagonal)
    sgn = np.sign(np.diag(r))
    q = q * sgn
    r = r * sgn[:, None]

    qty = q.T @ d.y
    beta = solve_triangular(r, qty, lower=False)
    resid = d.y - xm @ beta
    rss = float(resid @ resid)
    beta.setflags(write=False)
    r.setflags(write=False)
    return ModelFit(m, beta, rss, r)


def mean_at(fit: ModelFit, x_row) -> float:
    """Fitted mean ``x_row @ beta`` with zeros off the support."""
    if fit.size == 0:
        return 0.0
    x_row = np.asarray(x_row, dtype=float)
    return float(x_row[list(fit.model.support)] @ fit.beta_ml)
