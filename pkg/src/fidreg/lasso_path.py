"""LASSO solution path via least angle regression with the lasso modification.

The active sets visited along the path, mapped back to original column
indices, form the candidate model class.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve

from .core import Dataset, DegenerateStep, ModelId

log = logging.getLogger(__name__)

CORR_TOL = 1e-12


@dataclass
class LarsPath:
    """Breakpoints of the LARS-LASSO path on unit-norm columns.

    ``active_sets[k]``, ``coefs[k]`` and ``correlations[k]`` describe the
    k-th breakpoint; ``active_sets[0]`` is always empty.
    """

    active_sets: list[tuple[int, ...]] = field(default_factory=list)
    coefs: list[np.ndarray] = field(default_factory=list)
    correlations: list[np.ndarray] = field(default_factory=list)
    truncated: bool = False

    @property
    def steps(self) -> int:
        return len(self.active_sets) - 1


def _record(path, active, beta, c):
    path.active_sets.append(tuple(sorted(active)))
    path.coefs.append(beta.copy())
    path.correlations.append(c.copy())


def lars_path(d: Dataset, max_steps: int | None = None) -> LarsPath:
    """Run LARS with lasso drops on ``d`` after scaling columns to unit norm.

    The path stops once ``min(max_steps, p, n - 2)`` variables are active,
    when the largest residual correlation drops below ``CORR_TOL``, or after
    ``2 * max_steps`` events. A singular active Gram matrix truncates the
    path at the last valid breakpoint.
    """
    x, y = d.x, d.y
    n, p = x.shape
    if max_steps is None:
        max_steps = min(p, n - 2)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    norms = np.sqrt(np.einsum("ij,ij->j", x, x))
    usable = norms > 0
    xs = np.zeros_like(x)
    xs[:, usable] = x[:, usable] / norms[usable]
    limit = min(max_steps, p, n - 2)

    beta = np.zeros(p)
    active: list[int] = []
    path = LarsPath()
    c = xs.T @ y
    _record(path, active, beta, c)
    # correlation scale for the stopping rule
    scale = max(1.0, float(np.abs(c).max()))
    if float(np.abs(c).max()) < CORR_TOL * scale:
        return path
    active.append(int(np.argmax(np.where(usable, np.abs(c), -1.0))))
    _record(path, active, beta, c)
    just_dropped = -1

    for _ in range(2 * max_steps - 1):
        if len(active) >= limit or not active:
            break
        act = np.array(active)
        s = np.sign(c[act])
        s[s == 0] = 1.0
        big_c = float(np.abs(c[act]).max())
        if big_c < CORR_TOL * scale:
            break
        xa = xs[:, act] * s
        try:
            aa, w = _equiangular(xa)
        except DegenerateStep as exc:
            log.debug("path truncated: %s", exc)
            path.truncated = True
            break
        a = xs.T @ (xa @ w)
        direction = s * w  # coefficient direction on the active set

        inactive = usable.copy()
        inactive[act] = False
        gamma_hat, enter = big_c / aa, -1
        idx = np.flatnonzero(inactive)
        if idx.size:
            num = np.stack([big_c - c[idx], big_c + c[idx]])
            with np.errstate(divide="ignore", invalid="ignore"):
                g = num / np.stack([aa - a[idx], aa + a[idx]])
            g[~np.isfinite(g) | (g <= 1e-15)] = np.inf
            if just_dropped >= 0:
                # a variable just dropped sits exactly at |c_j| = C; only the
                # opposite-sign crossing can bring it back
                k = int(np.searchsorted(idx, just_dropped))
                g[np.abs(num[:, k]) <= 1e-9 * big_c, k] = np.inf
            g = g.min(axis=0)
            g_min = float(g.min())
            if g_min < gamma_hat:
                gamma_hat = g_min
                # ties go to the lowest column index
                enter = int(idx[np.flatnonzero(g <= g_min * (1 + 1e-12))[0]])

        # lasso modification: first active coefficient to cross zero
        with np.errstate(divide="ignore", invalid="ignore"):
            g_cross = -beta[act] / direction
        g_cross[~np.isfinite(g_cross) | (g_cross <= 1e-15)] = np.inf
        k = int(np.argmin(g_cross))
        gamma_tilde = float(g_cross[k])

        just_dropped = -1
        if gamma_tilde < gamma_hat:
            beta[act] += gamma_tilde * direction
            drop = int(act[k])
            beta[drop] = 0.0
            active.remove(drop)
            just_dropped = drop
        else:
            beta[act] += gamma_hat * direction
            if enter >= 0:
                active.append(enter)
        c = xs.T @ (y - xs @ beta)
        if enter < 0 and just_dropped < 0:
            # reached the least-squares fit on the current active set
            break
        _record(path, active, beta, c)
    return path


def _equiangular(xa: np.ndarray) -> tuple[float, np.ndarray]:
    """Normalizing constant A_A and weights w with ``xa @ w`` equiangular."""
    gram = xa.T @ xa
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        raise DegenerateStep(f"active Gram of size {len(gram)} is singular") from None
    g1 = cho_solve((chol, True), np.ones(len(gram)))
    total = g1.sum()
    if not np.all(np.isfinite(g1)) or total <= 0:
        raise DegenerateStep("active Gram is numerically singular")
    aa = 1.0 / np.sqrt(total)
    return aa, aa * g1


@dataclass(frozen=True)
class CandidateClass:
    """Deduplicated candidate models in original column indices."""

    models: list[ModelId]
    screen_map: dict[int, int]

    def __len__(self) -> int:
        return len(self.models)


def default_size_cap(n: int) -> int:
    return n // 2


def build_candidates(
    d: Dataset,
    screened: list[int],
    size_cap: int | None = None,
    max_steps: int | None = None,
) -> CandidateClass:
    """Candidate class from the LASSO path over the screened columns.

    Always contains the empty model. Sets larger than
    ``min(size_cap, n - 2)`` are dropped.
    """
    if not screened:
        raise ValueError("screened index list is empty")
    if size_cap is None:
        size_cap = default_size_cap(d.n)
    if max_steps is None:
        max_steps = min(len(screened), d.n - 2)
    cap = min(size_cap, d.n - 2)
    path = lars_path(d.columns(screened), max_steps=max_steps)
    screen_map = {k: int(j) for k, j in enumerate(screened)}
    return candidates_from_path(path.active_sets, screen_map, cap)


def candidates_from_path(active_sets, screen_map: dict[int, int], cap: int) -> CandidateClass:
    seen = {ModelId()}
    models = [ModelId()]
    for s in active_sets:
        if len(s) > cap:
            continue
        m = ModelId.of(screen_map[k] for k in s)
        if m not in seen:
            seen.add(m)
            models.append(m)
    return CandidateClass(models, dict(screen_map))
