import math

import numpy as np
import pytest

import gpsieve.bandit as bandit_mod
from gpsieve.acquisition import AcquisitionKind, BetaSchedule
from gpsieve.bandit import (
    BanditConfig,
    Policy,
    RunRecord,
    bkb_inclusion_probability,
    regret_summary,
    run,
    run_bkb,
    run_dense,
)
from gpsieve.errors import ConfigError
from gpsieve.kernels import KernelSpec
from gpsieve.objectives import (
    CandidateSet,
    ObjectiveKind,
    Provenance,
    build_candidates,
    default_candidate_descriptor,
    example1d_objective,
)
from gpsieve.posterior import ADMIT_ALWAYS, GpPosterior

SPEC = KernelSpec(lengthscale=1.0)


def _candidates():
    return build_candidates(default_candidate_descriptor(ObjectiveKind.EXAMPLE_1D))


def _config(**kw):
    cands = kw.pop("candidates", _candidates())
    defaults = dict(
        horizon=60,
        kernel=SPEC,
        noise_variance=0.001,
        candidates=cands,
        beta_schedule=BetaSchedule.finite(len(cands)),
        acquisition=AcquisitionKind.UCB,
        epsilon=1e-4,
        seed=0,
    )
    defaults.update(kw)
    return BanditConfig(**defaults)


def _assert_traces_equal(a: RunRecord, b: RunRecord):
    # bitwise equality of everything except wall-clock fields
    assert np.array_equal(a.chosen_index, b.chosen_index)
    assert np.array_equal(a.score, b.score)
    assert np.array_equal(a.admitted, b.admitted)
    assert np.array_equal(a.sampled_y, b.sampled_y, equal_nan=True)
    assert np.array_equal(a.model_order, b.model_order)
    assert np.array_equal(a.cond_entropy, b.cond_entropy)
    assert np.array_equal(a.info_gain, b.info_gain)
    assert np.array_equal(a.regret, b.regret)
    assert np.array_equal(a.warm_indices, b.warm_indices)
    assert np.array_equal(a.final_posterior.points, b.final_posterior.points)
    assert np.array_equal(a.final_posterior.targets, b.final_posterior.targets)


def test_single_candidate_run():
    cands = CandidateSet(np.array([[1.0]]), Provenance.UNIFORM_GRID, np.array([[0.0, 2.0]]))
    cfg = _config(candidates=cands, horizon=1, init_count=1,
                  beta_schedule=BetaSchedule.finite(1))
    rec = run(cfg, example1d_objective())
    assert rec.chosen_index.tolist() == [0]
    assert rec.regret.tolist() == [0.0]
    assert rec.reg_total == 0.0


def test_seed_determinism_bitwise():
    cfg = _config(seed=17)
    obj = example1d_objective()
    _assert_traces_equal(run(cfg, obj), run(cfg, obj))


def test_sentinel_equals_dense_bitwise():
    obj = example1d_objective()
    sentinel = run(_config(epsilon=ADMIT_ALWAYS, seed=5), obj)
    dense = run_dense(_config(seed=5), obj)
    _assert_traces_equal(sentinel, dense)
    assert np.all(sentinel.admitted)


def test_sentinel_equals_low_epsilon_trace():
    # entropies are bounded below by the noise floor, so any epsilon beneath
    # it admits everything, matching the sentinel
    obj = example1d_objective()
    low = run(_config(epsilon=-10.0, seed=3), obj)
    sentinel = run(_config(epsilon=ADMIT_ALWAYS, seed=3), obj)
    _assert_traces_equal(low, sentinel)


def test_dense_model_order_is_step_count():
    cfg = _config(horizon=40, seed=2)
    rec = run_dense(cfg, example1d_objective())
    assert np.array_equal(rec.model_order, cfg.init_count + np.arange(1, 41))
    assert rec.final_model_order == 40 + cfg.init_count
    assert rec.reg_admitted == rec.reg_total


def test_model_order_monotone_and_bounded():
    cfg = _config(horizon=80, seed=9)
    rec = run(cfg, example1d_objective())
    orders = rec.model_order
    assert np.all(np.diff(orders) >= 0)
    assert np.all(orders <= np.arange(1, 81) + cfg.init_count)
    bound = min(
        math.ceil((rec.entropy_sum - rec.warm_entropy_sum) / cfg.epsilon) + 1,
        cfg.horizon,
    )
    assert rec.model_order_excl_warm <= bound


def test_sampled_iff_admitted_and_skip_semantics():
    rec = run(_config(horizon=100, seed=4), example1d_objective())
    nan_mask = np.isnan(rec.sampled_y)
    assert np.array_equal(~nan_mask, rec.admitted)
    # skipped steps leave the posterior untouched
    skipped = ~rec.admitted
    orders = np.concatenate([[rec.init_count], rec.model_order])
    gains = np.concatenate([[rec.info_gain[0] if rec.admitted[0] else 0.0], rec.info_gain])
    assert np.all(orders[1:][skipped] == orders[:-1][skipped])
    assert np.all(gains[1:][skipped] == gains[:-1][skipped])
    assert np.all(np.diff(rec.info_gain) >= 0)


def test_admission_replay_from_trace():
    # replay the dictionary prefix step by step; every admitted flag must be a
    # deterministic function of (D, x, eps, noise)
    cfg = _config(horizon=120, seed=21)
    rec = run(cfg, example1d_objective())
    pts, ys = rec.final_posterior.points, rec.final_posterior.targets
    gp = GpPosterior.empty(SPEC, cfg.noise_variance, 1)
    for i in range(cfg.init_count):
        gp = gp.append_point(pts[i], ys[i])
    cursor = cfg.init_count
    for t in range(rec.steps_completed):
        x_t = cfg.candidates.points[rec.chosen_index[t]]
        decision = gp.admission_test(x_t, cfg.epsilon)
        assert decision.admitted == rec.admitted[t]
        assert decision.conditional_entropy == rec.cond_entropy[t]
        if rec.admitted[t]:
            gp = gp.append_point(pts[cursor], ys[cursor])
            cursor += 1
    assert cursor == rec.final_model_order


def test_paired_warm_start_across_policies():
    obj = example1d_objective()
    seeds = [0, 1, 2]
    for seed in seeds:
        recs = [
            run(_config(seed=seed), obj),
            run_dense(_config(seed=seed), obj),
            run_bkb(_config(seed=seed), obj),
        ]
        warm = [r.warm_indices for r in recs]
        assert np.array_equal(warm[0], warm[1])
        assert np.array_equal(warm[0], warm[2])
        assert np.array_equal(
            recs[0].final_posterior.points[: recs[0].init_count],
            recs[1].final_posterior.points[: recs[1].init_count],
        )


class TestBkb:
    def test_forced_accept_matches_dense(self):
        obj = example1d_objective()
        forced = run_bkb(_config(seed=11, bkb_scale=math.inf), obj)
        dense = run_dense(_config(seed=11), obj)
        _assert_traces_equal(forced, dense)

    def test_vanishing_scale_never_admits(self):
        obj = example1d_objective()
        rec = run_bkb(_config(seed=6, init_count=0, bkb_scale=1e-12, horizon=50), obj)
        assert rec.final_model_order == 0
        assert not rec.admitted.any()
        assert np.all(rec.model_order == 0)

    def test_inclusion_probability_formula(self):
        assert bkb_inclusion_probability(0.5, 1.2) == pytest.approx(0.6)
        assert bkb_inclusion_probability(2.0, 1.0) == 1.0
        assert bkb_inclusion_probability(0.0, math.inf) == 1.0
        assert bkb_inclusion_probability(0.5, 4.0, inverse=True) == 1.0
        assert bkb_inclusion_probability(0.5, 0.1, inverse=True) == pytest.approx(0.2)

    def test_inclusion_frequency_monte_carlo(self):
        rng = np.random.default_rng(123)
        var, scale = 0.5, 1.2
        p = bkb_inclusion_probability(var, scale)
        n = 10_000
        hits = sum(rng.uniform() < p for _ in range(n))
        se = math.sqrt(p * (1 - p) / n)
        assert abs(hits / n - p) <= 3 * se


def test_regret_summary_hand_example():
    rec = run(_config(horizon=3, seed=0), example1d_objective())
    # overwrite the trace with the hand example r=[1,0,1], admitted=[T,F,T]
    rec.regret = np.array([1.0, 0.0, 1.0])
    rec.admitted = np.array([True, False, True])
    rec.reg_total = 2.0
    rec.reg_admitted = 2.0
    summary = regret_summary(rec)
    assert summary.reg_total == 2.0
    assert summary.reg_admitted == 2.0
    np.testing.assert_allclose(summary.mean_average_regret, [1.0, 0.5, 2.0 / 3.0])


def test_regret_summary_zero_and_subset_property():
    rec = run(_config(horizon=50, seed=13), example1d_objective())
    s = regret_summary(rec)
    assert s.reg_admitted <= s.reg_total + 1e-12
    assert np.all(rec.regret >= 0.0)
    # MAR reconstruction: mar[t]*t - mar[t-1]*(t-1) = r_t
    t = np.arange(1, rec.steps_completed + 1)
    recon = s.mean_average_regret * t
    np.testing.assert_allclose(np.diff(recon), rec.regret[1:], atol=1e-9)
    np.testing.assert_allclose(recon[0], rec.regret[0], atol=1e-9)


def test_r_diagnostic_finite():
    for seed in range(3):
        rec = run(_config(seed=seed, horizon=80), example1d_objective())
        assert math.isfinite(rec.r_diagnostic)
        assert rec.r_diagnostic >= 0.0


def test_objective_failure_flags_invalid(monkeypatch):
    calls = {"n": 0}
    real_observe = bandit_mod.observe

    def flaky(objective, x, rng):
        calls["n"] += 1
        if calls["n"] > 4:
            raise RuntimeError("objective exploded")
        return real_observe(objective, x, rng)

    monkeypatch.setattr(bandit_mod, "observe", flaky)
    rec = run(_config(horizon=60, seed=1), example1d_objective())
    assert rec.invalid
    assert "objective" in rec.error
    assert rec.steps_completed < 60
    with pytest.raises(Exception):
        regret_summary(rec)


def test_config_validation():
    cands = _candidates()
    with pytest.raises(ConfigError):
        _config(horizon=0)
    with pytest.raises(ConfigError):
        _config(init_count=len(cands) + 1)
    with pytest.raises(ConfigError):
        _config(epsilon=math.nan)
    with pytest.raises(ConfigError):
        _config(epsilon=math.inf)
    with pytest.raises(ConfigError):
        _config(beta_schedule=None)
    with pytest.raises(ConfigError):
        _config(policy=Policy.BKB, bkb_scale=0.0)
    # negative epsilon is legitimate (documented), as is the -inf sentinel
    _config(epsilon=-1.0)
    _config(epsilon=ADMIT_ALWAYS)


def test_init_count_defaults_to_two_to_the_d():
    cfg = _config()
    assert cfg.init_count == 2
    desc2 = default_candidate_descriptor(ObjectiveKind.ROSENBROCK_2D)
    cands2 = build_candidates(desc2)
    cfg2 = BanditConfig(
        horizon=5, kernel=SPEC, noise_variance=0.001, candidates=cands2,
        beta_schedule=BetaSchedule.finite(len(cands2)),
    )
    assert cfg2.init_count == 4


def test_model_order_saturates_on_long_run():
    # the qualitative claim behind the compression: the dictionary stops
    # growing once no candidate clears the entropy budget
    cfg = _config(horizon=200, seed=0)
    rec = run(cfg, example1d_objective())
    assert rec.final_model_order < 200
    assert np.all(rec.model_order[-50:] == rec.model_order[-1])
