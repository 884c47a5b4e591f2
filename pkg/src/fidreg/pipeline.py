"""End-to-end convenience wrappers: screen, path, score, sample, summarize."""

from __future__ import annotations

from dataclasses import dataclass

from .core import Dataset
from .fiducial import ScoredClass, score_class
from .inference import DEFAULT_LEVELS, InferenceReport, build_report
from .lasso_path import CandidateClass, build_candidates
from .sampling import FiducialSample, RngStream, fiducial_sample
from .screening import sis_screen


def candidate_class(d: Dataset, keep=None, size_cap=None, max_steps=None) -> CandidateClass:
    return build_candidates(d, sis_screen(d, keep), size_cap, max_steps)


def scored_class(d: Dataset, gamma=1.0, keep=None, size_cap=None, max_steps=None) -> ScoredClass:
    return score_class(d, candidate_class(d, keep, size_cap, max_steps), gamma)


@dataclass
class FiducialFit:
    scored: ScoredClass
    sample: FiducialSample
    report: InferenceReport


def fiducial_fit(x, y, *, gamma=1.0, samples=10000, seed=0, keep=None, size_cap=None,
                 max_steps=None, levels=DEFAULT_LEVELS, column_names=None) -> FiducialFit:
    """Run the whole procedure on raw arrays."""
    d = Dataset(x, y)
    sc = scored_class(d, gamma, keep, size_cap, max_steps)
    sample = fiducial_sample(d, sc, samples, RngStream(seed, 0))
    report = build_report(d.n, sc, sample, levels, gamma, column_names)
    return FiducialFit(sc, sample, report)
