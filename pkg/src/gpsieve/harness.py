"""Experiment orchestration: config files, paired multi-seed batches, metric
aggregation, and CSV emission.

Config format: flat UTF-8 ``key = value`` lines with ``#`` comments and
section-prefixed keys. Only ``objective`` is required; every other key has a
declared default (see ``CONFIG_KEYS``/README). Policies are entries of the
form ``policy:acquisition[:param]`` where the optional third field is the
compression budget epsilon (compressed) or the inclusion scale (bkb).

Pairing is mandatory: policy p with seed s uses exactly the same warm-start
and noise streams as every other policy with seed s, so traces are directly
comparable. Aggregation is a deterministic fold over (policy index, seed
index), whatever order the workers finish in. Emitted numbers are fixed at 12
significant digits so repeated emission is byte-identical; wall-clock columns
are the only non-reproducible content.

Output tree under the configured directory:

    summary.txt                              batch summary + clock-time table
    traces/trace_<label>_seed<S>.csv         per-step rows:
        t,chosen_index,score,admitted,y,M_t,cond_entropy,info_gain,regret,step_seconds
    traces/summary_<label>_seed<S>.txt       flat per-run summary
    traces/posterior_<label>_seed<S>.csv     posterior snapshot sidecar:
        '#' metadata lines (noise variance, lengthscale, output scale, model
        order), then header x1,...,xd,y and the retained points/targets
    <label>/mar_vs_iteration.csv             t,mean,sd
    <label>/mar_vs_wallclock.csv             cumulative_seconds,mean_mar
    <label>/model_order_vs_iteration.csv     t,mean,sd
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from gpsieve.acquisition import AcquisitionKind, BetaKind, BetaSchedule
from gpsieve.bandit import BanditConfig, Policy, RunRecord, regret_summary, run
from gpsieve.errors import ConfigError
from gpsieve.kernels import KernelSpec
from gpsieve.objectives import (
    CandidateDescriptor,
    CandidateSet,
    Objective,
    ObjectiveKind,
    Provenance,
    build_candidates,
    default_candidate_descriptor,
    example1d_objective,
    load_tabulated,
    negated_rosenbrock_objective,
    table_candidates,
)

_POLICY_DISPLAY = {
    Policy.DENSE: "Uncompressed",
    Policy.COMPRESSED: "Compressed",
    Policy.BKB: "BKB",
}

CONFIG_KEYS = {
    "objective": "example1d | rosenbrock | tabulated (required)",
    "objective.table": "CSV path for tabulated objectives",
    "objective.rosenbrock_a": "valley parameter a (default 1.0)",
    "objective.rosenbrock_b": "valley parameter b (default 10.0)",
    "objective.noise_variance": "observation noise (default: noise.variance)",
    "candidates.kind": "grid | random (default grid)",
    "candidates.bounds": "per-dimension lo:hi, comma-separated",
    "candidates.per_dim": "grid points per dimension",
    "candidates.count": "random candidate count",
    "candidates.seed": "seed for random candidate draws (default 0)",
    "kernel.lengthscale": "SE lengthscale (default 1.0)",
    "kernel.output_scale": "SE output scale (default 1.0)",
    "noise.variance": "GP model noise variance (default 0.001)",
    "run.horizon": "steps per run (default 300)",
    "run.init_count": "warm-start size (default 2^d)",
    "run.seeds": "comma-separated seed list (default 0)",
    "beta.kind": "finite_set | continuous_set | constant (default finite_set)",
    "beta.delta_fail": "confidence failure probability in (0,1) (default 0.1)",
    "beta.constant": "constant schedule value",
    "beta.d": "continuous schedule dimension constant",
    "beta.a": "continuous schedule tail constant a",
    "beta.b": "continuous schedule tail constant b",
    "beta.r": "continuous schedule domain radius r",
    "policies": "policy:acquisition[:param] entries (default compressed:ucb)",
    "compressed.epsilon": "default compression budget (default 1e-4)",
    "bkb.scale": "default inclusion scale (default 1.0)",
    "bkb.inverse": "true for inverse-variance inclusion (default false)",
    "output.dir": "output directory (default gpsieve_runs)",
}


@dataclass(frozen=True)
class PolicyEntry:
    policy: Policy
    acquisition: AcquisitionKind
    epsilon: float | None = None
    bkb_scale: float | None = None
    label: str = ""


@dataclass(frozen=True)
class ExperimentSpec:
    objective_kind: ObjectiveKind
    policies: tuple
    seeds: tuple
    horizon: int = 300
    lengthscale: float = 1.0
    output_scale: float = 1.0
    noise_variance: float = 0.001
    observation_noise_variance: float | None = None
    epsilon: float = 1e-4
    bkb_scale: float = 1.0
    bkb_inverse: bool = False
    init_count: int | None = None
    beta_kind: BetaKind = BetaKind.FINITE_SET
    beta_delta_fail: float = 0.1
    beta_constant: float | None = None
    beta_d: float | None = None
    beta_a: float | None = None
    beta_b: float | None = None
    beta_r: float | None = None
    table_path: str | None = None
    rosenbrock_a: float = 1.0
    rosenbrock_b: float = 10.0
    candidate_descriptor: CandidateDescriptor | None = None
    candidate_seed: int = 0
    output_dir: str = "gpsieve_runs"


@dataclass
class PolicyAggregate:
    entry: PolicyEntry
    records: list
    failures: list
    mar_mean: np.ndarray
    mar_sd: np.ndarray
    model_order_mean: np.ndarray
    model_order_sd: np.ndarray
    cum_seconds_mean: np.ndarray
    mean_reg_total: float
    mean_reg_admitted: float
    mean_final_model_order: float
    mean_total_seconds: float


@dataclass
class AggregateReport:
    spec: ExperimentSpec
    policies: list
    seeds: tuple

    @property
    def failures(self):
        out = []
        for agg in self.policies:
            out.extend((agg.entry.label, seed, msg) for seed, msg in agg.failures)
        return out


def _fmt(x) -> str:
    """Fixed 12-significant-digit rendering so emission is byte-stable."""
    return f"{float(x):.12g}"


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_bounds(raw: str):
    out = []
    for part in raw.split(","):
        lo, _, hi = part.partition(":")
        out.append((float(lo), float(hi)))
    return tuple(out)


def _parse_policy_entry(raw: str):
    parts = [p.strip().lower() for p in raw.split(":")]
    if len(parts) not in (2, 3):
        raise ValueError(f"policy entry must be policy:acquisition[:param], got {raw!r}")
    policy = Policy(parts[0])
    acq = AcquisitionKind(parts[1])
    param = float(parts[2]) if len(parts) == 3 else None
    if policy is Policy.DENSE and param is not None:
        raise ValueError(f"dense policies take no parameter, got {raw!r}")
    return policy, acq, param


def parse_config(path) -> ExperimentSpec:
    """Parse and fully validate a key=value config file.

    All offending keys are reported in one error.
    """
    raw = {}
    problems = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            problems.append(f"line {lineno}: expected key = value, got {line.strip()!r}")
            continue
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            problems.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key in raw:
            problems.append(f"line {lineno}: duplicate key {key!r}")
            continue
        raw[key] = value

    def take(key, parse, default):
        if key not in raw:
            return default
        try:
            return parse(raw[key])
        except (ValueError, KeyError) as exc:
            problems.append(f"{key}: {exc}")
            return default

    objective_kind = take("objective", lambda v: ObjectiveKind(v.strip().lower()), None)
    if objective_kind is None and "objective" not in raw:
        problems.append("objective: missing required key")

    lengthscale = take("kernel.lengthscale", float, 1.0)
    output_scale = take("kernel.output_scale", float, 1.0)
    noise_variance = take("noise.variance", float, 0.001)
    obs_noise = take("objective.noise_variance", float, None)
    horizon = take("run.horizon", int, 300)
    init_count = take("run.init_count", int, None)
    seeds = take(
        "run.seeds", lambda v: tuple(int(s) for s in v.split(",") if s.strip()), (0,)
    )
    beta_kind = take("beta.kind", lambda v: BetaKind(v.strip().lower()), BetaKind.FINITE_SET)
    delta_fail = take("beta.delta_fail", float, 0.1)
    beta_constant = take("beta.constant", float, None)
    beta_d = take("beta.d", float, None)
    beta_a = take("beta.a", float, None)
    beta_b = take("beta.b", float, None)
    beta_r = take("beta.r", float, None)
    epsilon = take("compressed.epsilon", float, 1e-4)
    bkb_scale = take("bkb.scale", float, 1.0)
    bkb_inverse = take("bkb.inverse", _parse_bool, False)
    output_dir = raw.get("output.dir", "gpsieve_runs")
    table_path = raw.get("objective.table")
    rosen_a = take("objective.rosenbrock_a", float, 1.0)
    rosen_b = take("objective.rosenbrock_b", float, 10.0)
    candidate_seed = take("candidates.seed", int, 0)

    policy_specs = take(
        "policies",
        lambda v: tuple(_parse_policy_entry(e) for e in v.split(",") if e.strip()),
        ((Policy.COMPRESSED, AcquisitionKind.UCB, None),),
    )

    # Range validation, accumulated so every offending key is named at once.
    if not (0.0 < delta_fail < 1.0):
        problems.append(f"beta.delta_fail: must lie in (0,1), got {delta_fail}")
    if horizon < 1:
        problems.append(f"run.horizon: must be >= 1, got {horizon}")
    if not seeds:
        problems.append("run.seeds: at least one seed required")
    if lengthscale <= 0:
        problems.append(f"kernel.lengthscale: must be positive, got {lengthscale}")
    if output_scale <= 0:
        problems.append(f"kernel.output_scale: must be positive, got {output_scale}")
    if noise_variance <= 0:
        problems.append(f"noise.variance: must be positive, got {noise_variance}")
    if obs_noise is not None and obs_noise < 0:
        problems.append(f"objective.noise_variance: must be nonnegative, got {obs_noise}")
    if math.isnan(epsilon) or epsilon == math.inf:
        problems.append(f"compressed.epsilon: must be finite or -inf, got {epsilon}")
    if bkb_scale <= 0:
        problems.append(f"bkb.scale: must be positive, got {bkb_scale}")
    if objective_kind is ObjectiveKind.TABULATED and not table_path:
        problems.append("objective.table: required for tabulated objectives")
    if beta_kind is BetaKind.CONSTANT and raw.get("beta.constant") is None:
        problems.append("beta.constant: required for the constant schedule")
    if beta_kind is BetaKind.CONTINUOUS_SET:
        for name, val in (("d", beta_d), ("a", beta_a), ("b", beta_b), ("r", beta_r)):
            if val is None or val <= 0:
                problems.append(f"beta.{name}: must be positive, got {val}")

    descriptor = None
    if objective_kind in (ObjectiveKind.EXAMPLE_1D, ObjectiveKind.ROSENBROCK_2D):
        default_desc = default_candidate_descriptor(objective_kind)
        kind = take(
            "candidates.kind",
            lambda v: {"grid": Provenance.UNIFORM_GRID, "random": Provenance.RANDOM_UNIFORM}[
                v.strip().lower()
            ],
            default_desc.kind,
        )
        bounds = take("candidates.bounds", _parse_bounds, default_desc.bounds)
        per_dim = take("candidates.per_dim", int, default_desc.per_dim)
        count = take("candidates.count", int, None)
        descriptor = CandidateDescriptor(kind, bounds, per_dim=per_dim, count=count)
        if kind is Provenance.RANDOM_UNIFORM and count is None:
            problems.append("candidates.count: required for random candidate sets")

    if problems:
        raise ConfigError("invalid config:\n  " + "\n  ".join(problems))

    entries = []
    labels = {}
    for policy, acq, param in policy_specs:
        base = f"{policy.value}_{acq.value}"
        labels[base] = labels.get(base, 0) + 1
        label = base if labels[base] == 1 else f"{base}_{labels[base]}"
        entries.append(
            PolicyEntry(
                policy=policy,
                acquisition=acq,
                epsilon=param if policy is Policy.COMPRESSED else None,
                bkb_scale=param if policy is Policy.BKB else None,
                label=label,
            )
        )

    return ExperimentSpec(
        objective_kind=objective_kind,
        policies=tuple(entries),
        seeds=seeds,
        horizon=horizon,
        lengthscale=lengthscale,
        output_scale=output_scale,
        noise_variance=noise_variance,
        observation_noise_variance=obs_noise,
        epsilon=epsilon,
        bkb_scale=bkb_scale,
        bkb_inverse=bkb_inverse,
        init_count=init_count,
        beta_kind=beta_kind,
        beta_delta_fail=delta_fail,
        beta_constant=beta_constant,
        beta_d=beta_d,
        beta_a=beta_a,
        beta_b=beta_b,
        beta_r=beta_r,
        table_path=table_path,
        rosenbrock_a=rosen_a,
        rosenbrock_b=rosen_b,
        candidate_descriptor=descriptor,
        candidate_seed=candidate_seed,
        output_dir=output_dir,
    )


def build_environment(spec: ExperimentSpec):
    """Objective plus candidate set shared by every run of the experiment."""
    obs_noise = (
        spec.noise_variance
        if spec.observation_noise_variance is None
        else spec.observation_noise_variance
    )
    if spec.objective_kind is ObjectiveKind.EXAMPLE_1D:
        objective = example1d_objective(obs_noise)
    elif spec.objective_kind is ObjectiveKind.ROSENBROCK_2D:
        objective = negated_rosenbrock_objective(
            spec.rosenbrock_a, spec.rosenbrock_b, obs_noise
        )
    else:
        objective = load_tabulated(spec.table_path, obs_noise)
        return objective, table_candidates(objective)
    rng = np.random.default_rng(spec.candidate_seed)
    return objective, build_candidates(spec.candidate_descriptor, rng)


def _beta_schedule(spec: ExperimentSpec, candidates: CandidateSet) -> BetaSchedule:
    if spec.beta_kind is BetaKind.FINITE_SET:
        return BetaSchedule.finite(len(candidates), spec.beta_delta_fail)
    if spec.beta_kind is BetaKind.CONSTANT:
        return BetaSchedule.constant(spec.beta_constant)
    return BetaSchedule.continuous(
        spec.beta_d, spec.beta_a, spec.beta_b, spec.beta_r, spec.beta_delta_fail
    )


def make_bandit_config(
    spec: ExperimentSpec, entry: PolicyEntry, seed: int, candidates: CandidateSet
) -> BanditConfig:
    return BanditConfig(
        horizon=spec.horizon,
        kernel=KernelSpec(lengthscale=spec.lengthscale, output_scale=spec.output_scale),
        noise_variance=spec.noise_variance,
        candidates=candidates,
        acquisition=entry.acquisition,
        beta_schedule=_beta_schedule(spec, candidates),
        epsilon=spec.epsilon if entry.epsilon is None else entry.epsilon,
        init_count=spec.init_count,
        seed=seed,
        policy=entry.policy,
        bkb_scale=spec.bkb_scale if entry.bkb_scale is None else entry.bkb_scale,
        bkb_inverse=spec.bkb_inverse,
    )


def _run_cell(config: BanditConfig, objective: Objective):
    try:
        record = run(config, objective)
    except Exception as exc:  # recorded per-cell; the batch continues
        return None, f"{type(exc).__name__}: {exc}"
    if record.invalid:
        return record, record.error
    return record, None


def _aggregate_policy(entry, cells, horizon, seeds) -> PolicyAggregate:
    records = [rec for rec, err in cells if rec is not None and err is None]
    failures = [
        (seed, err) for (rec, err), seed in zip(cells, seeds) if err is not None
    ]
    if records:
        mar = np.stack([regret_summary(r).mean_average_regret for r in records])
        orders = np.stack([r.model_order.astype(np.float64) for r in records])
        secs = np.stack([np.cumsum(r.step_seconds) for r in records])
        mar_mean, mar_sd = mar.mean(axis=0), mar.std(axis=0)
        order_mean, order_sd = orders.mean(axis=0), orders.std(axis=0)
        cum_secs = secs.mean(axis=0)
        reg_total = float(np.mean([r.reg_total for r in records]))
        reg_adm = float(np.mean([r.reg_admitted for r in records]))
        final_m = float(np.mean([r.final_model_order for r in records]))
        total_secs = float(np.mean([r.total_seconds for r in records]))
    else:
        empty = np.empty(0)
        mar_mean = mar_sd = order_mean = order_sd = cum_secs = empty
        reg_total = reg_adm = final_m = total_secs = math.nan
    return PolicyAggregate(
        entry=entry,
        records=[rec if err is None else None for rec, err in cells],
        failures=failures,
        mar_mean=mar_mean,
        mar_sd=mar_sd,
        model_order_mean=order_mean,
        model_order_sd=order_sd,
        cum_seconds_mean=cum_secs,
        mean_reg_total=reg_total,
        mean_reg_admitted=reg_adm,
        mean_final_model_order=final_m,
        mean_total_seconds=total_secs,
    )


def run_experiment(
    spec: ExperimentSpec, workers: int = 1, write: bool = True
) -> AggregateReport:
    """Execute every (policy, seed) cell with paired seeding and aggregate.

    Cells may run in parallel; aggregation folds results in (policy index,
    seed index) order regardless of completion order. With ``write`` the
    output tree described in the module docstring is produced.
    """
    objective, candidates = build_environment(spec)
    cells = [
        (pi, si, make_bandit_config(spec, entry, seed, candidates))
        for pi, entry in enumerate(spec.policies)
        for si, seed in enumerate(spec.seeds)
    ]
    results = {}
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_run_cell, config, objective): (pi, si)
                for pi, si, config in cells
            }
            for fut in concurrent.futures.as_completed(futures):
                results[futures[fut]] = fut.result()
    else:
        for pi, si, config in cells:
            results[(pi, si)] = _run_cell(config, objective)

    aggregates = [
        _aggregate_policy(
            entry,
            [results[(pi, si)] for si in range(len(spec.seeds))],
            spec.horizon,
            spec.seeds,
        )
        for pi, entry in enumerate(spec.policies)
    ]
    report = AggregateReport(spec=spec, policies=aggregates, seeds=spec.seeds)
    if write:
        out = Path(spec.output_dir)
        _write_traces(report, out / "traces")
        emit_plot_data(report, out)
        (out / "summary.txt").write_text(render_summary(report), encoding="utf-8")
    return report


def _write_traces(report: AggregateReport, trace_dir: Path) -> None:
    trace_dir.mkdir(parents=True, exist_ok=True)
    for agg in report.policies:
        for seed, record in zip(report.seeds, agg.records):
            if record is None:
                continue
            stem = f"{agg.entry.label}_seed{seed}"
            _write_trace_csv(record, trace_dir / f"trace_{stem}.csv")
            _write_posterior_snapshot(record, trace_dir / f"posterior_{stem}.csv")
            (trace_dir / f"summary_{stem}.txt").write_text(
                _render_run_summary(record), encoding="utf-8"
            )


def _write_trace_csv(record: RunRecord, path: Path) -> None:
    lines = ["t,chosen_index,score,admitted,y,M_t,cond_entropy,info_gain,regret,step_seconds"]
    for i in range(record.steps_completed):
        y = "" if math.isnan(record.sampled_y[i]) else _fmt(record.sampled_y[i])
        lines.append(
            ",".join(
                [
                    str(i + 1),
                    str(int(record.chosen_index[i])),
                    _fmt(record.score[i]),
                    "true" if record.admitted[i] else "false",
                    y,
                    str(int(record.model_order[i])),
                    _fmt(record.cond_entropy[i]),
                    _fmt(record.info_gain[i]),
                    _fmt(record.regret[i]),
                    _fmt(record.step_seconds[i]),
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_posterior_snapshot(record: RunRecord, path: Path) -> None:
    gp = record.final_posterior
    lines = [
        f"# noise_variance = {gp.noise_variance:.17g}",
        f"# lengthscale = {gp.spec.lengthscale:.17g}",
        f"# output_scale = {gp.spec.output_scale:.17g}",
        f"# model_order = {gp.model_order}",
        ",".join([f"x{i + 1}" for i in range(gp.dim)] + ["y"]),
    ]
    for row, y in zip(gp.points, gp.targets):
        lines.append(",".join([f"{v:.17g}" for v in row] + [f"{y:.17g}"]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _render_run_summary(record: RunRecord) -> str:
    return "\n".join(
        [
            f"policy = {record.policy.value}",
            f"acquisition = {record.acquisition.value}",
            f"seed = {record.seed}",
            f"reg_total = {_fmt(record.reg_total)}",
            f"reg_admitted = {_fmt(record.reg_admitted)}",
            f"final_model_order = {record.final_model_order}",
            f"model_order_excl_warm = {record.model_order_excl_warm}",
            f"wallclock_seconds = {_fmt(record.total_seconds)}",
            f"r_diagnostic = {_fmt(record.r_diagnostic)}",
            f"info_gain = {_fmt(record.info_gain_final)}",
            f"entropy_sum = {_fmt(record.entropy_sum)}",
        ]
    ) + "\n"


def emit_plot_data(report: AggregateReport, out_dir) -> list:
    """Write the three per-policy aggregate series; returns written paths."""
    out = Path(out_dir)
    written = []
    for agg in report.policies:
        pol_dir = out / agg.entry.label
        pol_dir.mkdir(parents=True, exist_ok=True)
        n = len(agg.mar_mean)

        path = pol_dir / "mar_vs_iteration.csv"
        rows = ["t,mean,sd"] + [
            f"{t + 1},{_fmt(agg.mar_mean[t])},{_fmt(agg.mar_sd[t])}" for t in range(n)
        ]
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        written.append(path)

        path = pol_dir / "mar_vs_wallclock.csv"
        rows = ["cumulative_seconds,mean_mar"] + [
            f"{_fmt(agg.cum_seconds_mean[t])},{_fmt(agg.mar_mean[t])}" for t in range(n)
        ]
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        written.append(path)

        path = pol_dir / "model_order_vs_iteration.csv"
        rows = ["t,mean,sd"] + [
            f"{t + 1},{_fmt(agg.model_order_mean[t])},{_fmt(agg.model_order_sd[t])}"
            for t in range(n)
        ]
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        written.append(path)
    return written


def clock_time_table(report: AggregateReport) -> str:
    """Mean total algorithmic seconds, acquisitions as rows, policies as columns.

    Columns appear in configured policy order; when exactly the dense,
    compressed, and bkb variants are present they carry the conventional
    Uncompressed / Compressed / BKB headings.
    """
    policy_kinds = []
    for agg in report.policies:
        if agg.entry.policy not in policy_kinds:
            policy_kinds.append(agg.entry.policy)
    acqs = []
    for agg in report.policies:
        if agg.entry.acquisition not in acqs:
            acqs.append(agg.entry.acquisition)

    table = {}
    for agg in report.policies:
        key = (agg.entry.acquisition, agg.entry.policy)
        if key not in table:
            table[key] = agg.mean_total_seconds

    headers = ["Acquisition"] + [_POLICY_DISPLAY[p] for p in policy_kinds]
    rows = [headers]
    for acq in acqs:
        row = [acq.value.upper()]
        for pol in policy_kinds:
            val = table.get((acq, pol))
            row.append("-" if val is None or math.isnan(val) else f"{val:.3f}")
        rows.append(row)
    widths = [max(len(r[c]) for r in rows) for c in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines)


def render_summary(report: AggregateReport) -> str:
    spec = report.spec
    lines = [
        f"objective = {spec.objective_kind.value}",
        f"horizon = {spec.horizon}",
        f"seeds = {','.join(str(s) for s in report.seeds)}",
        "",
        "policy  mean_reg_total  mean_reg_admitted  mean_M_T  mean_seconds",
    ]
    for agg in report.policies:
        lines.append(
            f"{agg.entry.label}  {_fmt(agg.mean_reg_total)}  "
            f"{_fmt(agg.mean_reg_admitted)}  {_fmt(agg.mean_final_model_order)}  "
            f"{_fmt(agg.mean_total_seconds)}"
        )
    lines += ["", "clock times (seconds):", clock_time_table(report), "", "runs:"]
    for agg in report.policies:
        for seed, record in zip(report.seeds, agg.records):
            if record is None:
                continue
            lines.append(
                f"{agg.entry.label} seed={seed} reg_total={_fmt(record.reg_total)} "
                f"reg_admitted={_fmt(record.reg_admitted)} "
                f"M_T={record.final_model_order} "
                f"wallclock={_fmt(record.total_seconds)} "
                f"r_diagnostic={_fmt(record.r_diagnostic)}"
            )
    if report.failures:
        lines += ["", "failures:"]
        for label, seed, msg in report.failures:
            lines.append(f"{label} seed={seed}: {msg}")
    return "\n".join(lines) + "\n"


def filter_spec(spec: ExperimentSpec, policies=None, seeds=None) -> ExperimentSpec:
    """Restrict a spec to a policy-label subset and/or an overriding seed list."""
    out = spec
    if policies is not None:
        wanted = [p.strip() for p in policies.split(",") if p.strip()]
        by_label = {entry.label: entry for entry in spec.policies}
        missing = [w for w in wanted if w not in by_label]
        if missing:
            raise ConfigError(
                f"unknown policy labels {missing}; available: {sorted(by_label)}"
            )
        out = replace(out, policies=tuple(by_label[w] for w in wanted))
    if seeds is not None:
        parsed = tuple(int(s) for s in seeds.split(",") if s.strip())
        if not parsed:
            raise ConfigError("seed override must contain at least one seed")
        out = replace(out, seeds=parsed)
    return out
