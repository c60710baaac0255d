"""Online bandit loops over a finite candidate set.

Three admission policies share one loop:

* compressed  — sample and append only when conditional entropy > epsilon;
  the budget ``-inf`` is the admit-always sentinel used by the dense baseline.
* dense       — admit every step (the classic uncompressed GP bandit).
* bkb         — stochastic inclusion with probability min(1, scale * variance)
  (variance-proportional; an inverse-variance variant is available behind
  ``bkb_inverse`` because the two conventions coexist in the literature).

One master seed is split into independent streams for warm-start selection,
observation noise, and the stochastic-inclusion draws, so different policies
under the same seed share identical warm starts and are trace-comparable.
Per-step wall-clock covers selection + admission + update only; objective
evaluation is excluded.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from gpsieve.acquisition import (
    AcquisitionKind,
    BetaSchedule,
    beta,
    ei_from_moments,
    ucb_from_moments,
)
from gpsieve.errors import ConfigError, InputError
from gpsieve.kernels import KernelSpec, cross_matrix
from gpsieve.objectives import CandidateSet, Objective, observe
from gpsieve.posterior import ADMIT_ALWAYS, CHOL_JITTER, GpPosterior

_SD_FLOOR = math.sqrt(CHOL_JITTER)


class Policy(enum.Enum):
    COMPRESSED = "compressed"
    DENSE = "dense"
    BKB = "bkb"


@dataclass(frozen=True)
class BanditConfig:
    horizon: int
    kernel: KernelSpec
    noise_variance: float
    candidates: CandidateSet
    acquisition: AcquisitionKind = AcquisitionKind.UCB
    beta_schedule: BetaSchedule | None = None
    epsilon: float = 1e-4
    init_count: int | None = None
    seed: int = 0
    policy: Policy = Policy.COMPRESSED
    bkb_scale: float = 1.0
    bkb_inverse: bool = False

    def __post_init__(self):
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        if not (self.noise_variance > 0 and math.isfinite(self.noise_variance)):
            raise ConfigError(
                f"noise_variance must be positive, got {self.noise_variance}"
            )
        if self.init_count is None:
            object.__setattr__(self, "init_count", 2**self.candidates.dim)
        if not (0 <= self.init_count <= len(self.candidates)):
            raise ConfigError(
                f"init_count must lie in [0, {len(self.candidates)}], got {self.init_count}"
            )
        if self.policy is Policy.COMPRESSED:
            # -inf is the documented admit-always sentinel; NaN/+inf are rejected.
            if math.isnan(self.epsilon) or self.epsilon == math.inf:
                raise ConfigError(f"epsilon must be finite or -inf, got {self.epsilon}")
        if self.policy is Policy.BKB and not self.bkb_scale > 0:
            raise ConfigError(f"bkb_scale must be positive, got {self.bkb_scale}")
        if self.acquisition is AcquisitionKind.UCB and self.beta_schedule is None:
            raise ConfigError("UCB runs require a beta schedule")


@dataclass
class RunRecord:
    """Per-step traces plus run summary for one bandit run.

    Arrays are parallel over steps t = 1..horizon; ``sampled_y`` is NaN exactly
    where a step was not admitted. ``entropy_sum`` is the running estimate of
    the observation entropy accumulated by the posterior (warm start included;
    ``warm_entropy_sum`` isolates the warm contribution).
    """

    policy: Policy
    acquisition: AcquisitionKind
    seed: int
    epsilon: float
    bkb_scale: float
    horizon: int
    init_count: int
    warm_indices: np.ndarray
    chosen_index: np.ndarray
    score: np.ndarray
    admitted: np.ndarray
    sampled_y: np.ndarray
    model_order: np.ndarray
    cond_entropy: np.ndarray
    info_gain: np.ndarray
    regret: np.ndarray
    step_seconds: np.ndarray
    f_star: float
    reg_total: float
    reg_admitted: float
    final_model_order: int
    model_order_excl_warm: int
    entropy_sum: float
    warm_entropy_sum: float
    info_gain_final: float
    r_diagnostic: float
    total_seconds: float
    final_posterior: GpPosterior = field(repr=False)
    invalid: bool = False
    error: str | None = None

    @property
    def steps_completed(self) -> int:
        return len(self.chosen_index)


@dataclass(frozen=True)
class RegretSummary:
    reg_total: float
    reg_admitted: float
    mean_average_regret: np.ndarray


def bkb_inclusion_probability(
    variance: float, scale: float, inverse: bool = False
) -> float:
    """min(1, scale*variance); a non-finite scale forces acceptance."""
    if not math.isfinite(scale):
        return 1.0
    if inverse:
        return min(1.0, scale / max(variance, 1e-12))
    return min(1.0, scale * variance)


def _streams(seed_source) -> tuple:
    if isinstance(seed_source, np.random.SeedSequence):
        root = seed_source
    else:
        root = np.random.SeedSequence(int(seed_source))
    warm_ss, noise_ss, bkb_ss = root.spawn(3)
    return (
        np.random.Generator(np.random.PCG64(warm_ss)),
        np.random.Generator(np.random.PCG64(noise_ss)),
        np.random.Generator(np.random.PCG64(bkb_ss)),
    )


def _partial_record(config, message, arrays, summary_state) -> "RunRecord":
    done = len(arrays["chosen_index"])
    rec = RunRecord(
        policy=config.policy,
        acquisition=config.acquisition,
        seed=config.seed,
        epsilon=config.epsilon,
        bkb_scale=config.bkb_scale,
        horizon=config.horizon,
        init_count=config.init_count,
        warm_indices=summary_state["warm_indices"],
        chosen_index=np.asarray(arrays["chosen_index"], dtype=np.int64),
        score=np.asarray(arrays["score"]),
        admitted=np.asarray(arrays["admitted"], dtype=bool),
        sampled_y=np.asarray(arrays["sampled_y"]),
        model_order=np.asarray(arrays["model_order"], dtype=np.int64),
        cond_entropy=np.asarray(arrays["cond_entropy"]),
        info_gain=np.asarray(arrays["info_gain"]),
        regret=np.asarray(arrays["regret"]),
        step_seconds=np.asarray(arrays["step_seconds"]),
        f_star=summary_state["f_star"],
        reg_total=float(np.sum(arrays["regret"])) if done else 0.0,
        reg_admitted=0.0,
        final_model_order=summary_state["gp"].model_order,
        model_order_excl_warm=summary_state["gp"].model_order - config.init_count,
        entropy_sum=summary_state["gp"].entropy_sum,
        warm_entropy_sum=summary_state["warm_entropy_sum"],
        info_gain_final=summary_state["gp"].info_gain_sum,
        r_diagnostic=summary_state["r_diag"],
        total_seconds=float(np.sum(arrays["step_seconds"])) if done else 0.0,
        final_posterior=summary_state["gp"],
        invalid=True,
        error=message,
    )
    return rec


def run(config: BanditConfig, objective: Objective, rng=None) -> RunRecord:
    """Execute one bandit run under the configured admission policy."""
    if objective.dim != config.candidates.dim:
        raise InputError(
            f"objective dimension {objective.dim} != candidate dimension "
            f"{config.candidates.dim}"
        )
    warm_rng, noise_rng, bkb_rng = _streams(config.seed if rng is None else rng)
    cand_pts = config.candidates.points
    n = len(config.candidates)
    eps = config.epsilon if config.policy is Policy.COMPRESSED else ADMIT_ALWAYS

    gp = GpPosterior.empty(config.kernel, config.noise_variance, config.candidates.dim)
    arrays = {
        key: []
        for key in (
            "chosen_index", "score", "admitted", "sampled_y", "model_order",
            "cond_entropy", "info_gain", "regret", "step_seconds",
        )
    }
    state = {
        "gp": gp,
        "warm_indices": np.empty(0, dtype=np.int64),
        "warm_entropy_sum": 0.0,
        "f_star": math.nan,
        "r_diag": 0.0,
    }

    # Noiseless ground truth over the candidate set for regret accounting.
    try:
        values = np.array([objective.value(p) for p in cand_pts])
    except Exception as exc:
        return _partial_record(config, f"objective evaluation failed: {exc}", arrays, state)
    f_star = float(values.max())
    state["f_star"] = f_star

    # Warm start: uniformly random candidates, sampled with noise, always kept.
    warm_idx = (
        warm_rng.choice(n, size=config.init_count, replace=False)
        if config.init_count
        else np.empty(0, dtype=np.int64)
    )
    state["warm_indices"] = np.asarray(warm_idx, dtype=np.int64)
    for i in warm_idx:
        try:
            y = observe(objective, cand_pts[i], noise_rng)
        except Exception as exc:
            state["gp"] = gp
            return _partial_record(config, f"objective evaluation failed: {exc}", arrays, state)
        gp = gp.append_point(cand_pts[i], y)
    state["gp"] = gp
    state["warm_entropy_sum"] = gp.entropy_sum

    cross = (
        cross_matrix(config.kernel, cand_pts, gp.points)
        if gp.model_order
        else np.empty((n, 0))
    )
    r_diag = 0.0

    for t in range(1, config.horizon + 1):
        t0 = time.perf_counter()
        mean, var = gp.batch_mean_variance(cand_pts, cross)
        sd = np.sqrt(var)
        incumbent_y = float(gp.targets.max()) if gp.model_order else 0.0
        if config.acquisition is AcquisitionKind.UCB:
            scores = ucb_from_moments(mean, sd, beta(config.beta_schedule, t))
        elif config.acquisition is AcquisitionKind.EI:
            scores = ei_from_moments(mean, sd, incumbent_y)
        else:
            scores = ei_from_moments(mean, sd, float(mean.max()))
        idx = int(np.argmax(scores))
        x_t = cand_pts[idx]

        decision = gp.admission_test(x_t, eps)
        if config.policy is Policy.DENSE:
            admitted = True
        elif config.policy is Policy.BKB:
            p = bkb_inclusion_probability(
                decision.posterior_variance_at_x, config.bkb_scale, config.bkb_inverse
            )
            admitted = bool(bkb_rng.uniform() < p)
        else:
            admitted = decision.admitted

        z = abs(float(mean[idx]) - incumbent_y) / max(float(sd[idx]), _SD_FLOOR)
        r_diag = max(r_diag, z)
        t1 = time.perf_counter()

        step_secs = t1 - t0
        y_t = math.nan
        if admitted:
            try:
                y_t = observe(objective, x_t, noise_rng)
            except Exception as exc:
                state["gp"] = gp
                state["r_diag"] = r_diag
                return _partial_record(
                    config, f"objective evaluation failed: {exc}", arrays, state
                )
            t2 = time.perf_counter()
            gp = gp.append_point(x_t, y_t)
            col = cross_matrix(config.kernel, cand_pts, x_t[None, :])
            cross = np.concatenate([cross, col], axis=1)
            step_secs += time.perf_counter() - t2

        arrays["chosen_index"].append(idx)
        arrays["score"].append(float(scores[idx]))
        arrays["admitted"].append(admitted)
        arrays["sampled_y"].append(y_t)
        arrays["model_order"].append(gp.model_order)
        arrays["cond_entropy"].append(decision.conditional_entropy)
        arrays["info_gain"].append(gp.info_gain_sum)
        arrays["regret"].append(f_star - float(values[idx]))
        arrays["step_seconds"].append(step_secs)

    regret = np.asarray(arrays["regret"])
    admitted_mask = np.asarray(arrays["admitted"], dtype=bool)
    step_seconds = np.asarray(arrays["step_seconds"])
    return RunRecord(
        policy=config.policy,
        acquisition=config.acquisition,
        seed=config.seed,
        epsilon=config.epsilon,
        bkb_scale=config.bkb_scale,
        horizon=config.horizon,
        init_count=config.init_count,
        warm_indices=state["warm_indices"],
        chosen_index=np.asarray(arrays["chosen_index"], dtype=np.int64),
        score=np.asarray(arrays["score"]),
        admitted=admitted_mask,
        sampled_y=np.asarray(arrays["sampled_y"]),
        model_order=np.asarray(arrays["model_order"], dtype=np.int64),
        cond_entropy=np.asarray(arrays["cond_entropy"]),
        info_gain=np.asarray(arrays["info_gain"]),
        regret=regret,
        step_seconds=step_seconds,
        f_star=f_star,
        reg_total=float(regret.sum()),
        reg_admitted=float(regret[admitted_mask].sum()),
        final_model_order=gp.model_order,
        model_order_excl_warm=gp.model_order - config.init_count,
        entropy_sum=gp.entropy_sum,
        warm_entropy_sum=state["warm_entropy_sum"],
        info_gain_final=gp.info_gain_sum,
        r_diagnostic=r_diag,
        total_seconds=float(step_seconds.sum()),
        final_posterior=gp,
    )


def run_dense(config: BanditConfig, objective: Objective, rng=None) -> RunRecord:
    """Admit-always baseline: every step samples and appends."""
    return run(replace(config, policy=Policy.DENSE), objective, rng)


def run_bkb(config: BanditConfig, objective: Objective, rng=None) -> RunRecord:
    """Stochastic variance-proportional inclusion baseline."""
    return run(replace(config, policy=Policy.BKB), objective, rng)


def regret_summary(record: RunRecord) -> RegretSummary:
    """Total, admitted-only, and per-step mean average regret."""
    if record.invalid:
        raise InputError("cannot summarize an invalid (partial) run record")
    t = np.arange(1, record.steps_completed + 1, dtype=np.float64)
    mar = np.cumsum(record.regret) / t
    return RegretSummary(
        reg_total=record.reg_total,
        reg_admitted=record.reg_admitted,
        mean_average_regret=mar,
    )
