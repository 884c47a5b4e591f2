import math

import numpy as np
import pytest

from fidreg.core import Dataset
from fidreg.simharness import (
    CSV_HEADER, SimConfig, Truth, csv_rows, generate_synthetic, oracle_run, run_experiment,
)
from fidreg.core import ModelId


def test_independent_columns():
    cfg = SimConfig(n=10_000, p=4, d=1, b=1.0)
    d, _ = generate_synthetic(cfg, 0)
    r = np.corrcoef(d.x.T)
    off = r[~np.eye(4, dtype=bool)]
    assert np.all(np.abs(off) < 4 / math.sqrt(10_000))


def test_ar1_correlation():
    cfg = SimConfig(n=10_000, p=4, d=1, b=1.0, rho=0.5)
    d, _ = generate_synthetic(cfg, 0)
    r = np.corrcoef(d.x.T)
    assert r[0, 2] == pytest.approx(0.25, abs=4 / math.sqrt(10_000))
    assert r[0, 1] == pytest.approx(0.5, abs=4 / math.sqrt(10_000))
    assert np.allclose(d.x.var(axis=0), 1.0, atol=0.05)


def test_pure_noise():
    d, truth = generate_synthetic(SimConfig(n=10_000, p=3, d=2, b=0.0), 1)
    assert d.y.var() == pytest.approx(1.0, abs=0.05)
    assert truth.support == ModelId((0, 1)) and truth.sigma == 1.0


def test_generation_reproducible():
    cfg = SimConfig(n=20, p=30, d=2, b=1.0, seed=4)
    a, _ = generate_synthetic(cfg, 3)
    b, _ = generate_synthetic(cfg, 3)
    c, _ = generate_synthetic(cfg, 4)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
    assert not np.array_equal(a.y, c.y)


def test_oracle_noiseless():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((30, 8))
    truth = Truth(ModelId((0, 1, 2)), np.array([1.0, 1.0, 1.0]))
    d = Dataset(x, x[:, :3].sum(axis=1))
    row = oracle_run(d, truth)
    assert row.sigma2 == pytest.approx(0.0, abs=1e-25)
    assert row.beta1 == pytest.approx(1.0)


def test_oracle_sigma2_coverage_exact_theory():
    cfg = SimConfig(n=40, p=6, d=3, b=1.0, seed=11)
    hits = 0
    for rep in range(1000):
        d, truth = generate_synthetic(cfg, rep)
        lo, hi = oracle_run(d, truth, [0.95], rows=[0]).sigma2_ci[0.95]
        hits += lo <= 1.0 <= hi
    assert 0.93 <= hits / 1000 <= 0.97


def test_oracle_sigma2_coverage_desk_config():
    # published oracle 95% coverage at (200, 2000, 3), b = 3/sqrt(3), rho = 0: 0.943
    cfg = SimConfig(n=200, p=2000, d=3, b=3 / math.sqrt(3), seed=2)
    hits = 0
    for rep in range(300):
        d, truth = generate_synthetic(cfg, rep)
        lo, hi = oracle_run(d, truth, [0.95], rows=[0]).sigma2_ci[0.95]
        hits += lo <= 1.0 <= hi
    assert abs(hits / 300 - 0.943) <= 0.04


def test_oracle_intervals_match_classical_formulas():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((25, 4))
    y = x[:, :2] @ [1.0, -1.0] + rng.standard_normal(25)
    d = Dataset(x, y)
    row = oracle_run(d, Truth(ModelId((0, 1)), np.array([1.0, -1.0])), [0.9], rows=[3])
    xm = x[:, :2]
    beta = np.linalg.solve(xm.T @ xm, xm.T @ y)
    s2 = np.sum((y - xm @ beta) ** 2) / 23
    cov = s2 * np.linalg.inv(xm.T @ xm)
    from scipy import stats
    t = stats.t(23).ppf(0.95)
    assert row.beta1_ci[0.9] == pytest.approx((beta[0] - t * np.sqrt(cov[0, 0]), beta[0] + t * np.sqrt(cov[0, 0])))
    se = np.sqrt(xm[3] @ cov @ xm[3])
    lo, hi = row.mean_ci[0.9]
    assert (lo[0], hi[0]) == pytest.approx((xm[3] @ beta - t * se, xm[3] @ beta + t * se))


def small_cfg(**kw):
    base = dict(n=60, p=150, d=2, b=1.5, reps=4, draws_per_rep=300, seed=7)
    base.update(kw)
    return SimConfig(**base)


def test_run_experiment_reproducible():
    a = run_experiment(small_cfg(reps=1))
    b = run_experiment(small_cfg(reps=1))
    assert a.rows == b.rows and a.true_model_prob == b.true_model_prob


def test_result_structure():
    res = run_experiment(small_cfg())
    assert len(res.rows) == 2 * 3 * 3
    for r in res.rows:
        assert 0.0 <= r["coverage"] <= 1.0
        assert math.isnan(r["mean_width"]) or r["mean_width"] >= 0
    assert res.excluded_reps == 0
    assert 0.0 <= res.beta1_not_significant_rate <= 1.0
    rows = csv_rows(res)
    assert all(len(r) == len(CSV_HEADER) for r in rows)
    assert {r[0] for r in rows} == {res.config.config_hash()}


def test_parallel_matches_serial():
    cfg = small_cfg(reps=3)
    assert run_experiment(cfg, threads=2).rows == run_experiment(cfg, threads=1).rows


def test_width_shrinks_with_n():
    widths = []
    for n in (100, 200, 400):
        res = run_experiment(SimConfig(n=n, p=300, d=3, b=1.0, reps=10, draws_per_rep=400, seed=1))
        widths.append([res.get("proposed", q, 0.95)["mean_width"] for q in ("sigma2", "beta1", "mean")])
    widths = np.array(widths)
    assert np.all(np.diff(widths, axis=0) < 0)


def test_config_validation():
    with pytest.raises(ValueError, match="unknown config keys: bogus"):
        SimConfig.from_dict({"n": 50, "p": 10, "d": 2, "b": 1.0, "bogus": 1})
    with pytest.raises(ValueError):
        SimConfig.from_dict({"n": 50, "p": 10})
    with pytest.raises(ValueError):
        SimConfig(n=50, p=10, d=20, b=1.0)
    with pytest.raises(ValueError):
        SimConfig(n=50, p=10, d=2, b=1.0, rho=1.0)
    with pytest.raises(ValueError):
        SimConfig(n=50, p=10, d=2, b=1.0, draws_per_rep=10)


def test_config_hash_stable():
    a = SimConfig.from_dict({"n": 50, "p": 10, "d": 2, "b": 1.0, "levels": [0.9]})
    b = SimConfig(n=50, p=10, d=2, b=1.0, levels=(0.9,))
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != SimConfig(n=50, p=10, d=2, b=1.0, seed=1).config_hash()
