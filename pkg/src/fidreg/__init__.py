"""Generalized fiducial inference for sparse high-dimensional linear regression."""

from .core import (
    Dataset, DegenerateFit, DegenerateStep, EmptyClass, FiducialError, ModelFit, ModelId,
    RankDeficient, TooFewDraws, fit_model, mean_at,
)
from .fiducial import ScoredClass, log_fiducial_score, log_penalty, score_class
from .inference import (
    InferenceReport, aggregate_model_probs, build_report, summarize_coefficient,
    summarize_mean, summarize_sigma,
)
from .lasso_path import CandidateClass, build_candidates, lars_path
from .pipeline import fiducial_fit
from .sampling import (
    FiducialDraw, FiducialSample, RngStream, fiducial_sample, sample_beta, sample_model,
    sample_sigma,
)
from .screening import marginal_scores, sis_screen
from .simharness import SimConfig, SimResult, generate_synthetic, oracle_run, run_experiment

__version__ = "0.1.0"
