"""Benchmark objectives, noisy observation sampling, and candidate sets.

The bandit always maximizes. The 2-d valley benchmark below is a minimization
surface, so its objective constructor negates it; regret then stays "distance
from the optimum" with unchanged machinery. Input domains are artifact
defaults (declared, not prescribed anywhere): the 1-d objective runs on a
101-point grid over [0, 10], the 2-d one on a 41x41 grid over [-2, 2]^2.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from gpsieve.errors import ConfigError, InputError


def example_function(x: float) -> float:
    """sin(x) + cos(x) + 0.1*x, the 1-d benchmark."""
    return math.sin(x) + math.cos(x) + 0.1 * x


def rosenbrock(x: float, y: float, a: float = 1.0, b: float = 10.0) -> float:
    """(a-x)^2 + b*(y-x^2)^2; nonnegative, zero only at (a, a^2)."""
    return (a - x) ** 2 + b * (y - x * x) ** 2


class ObjectiveKind(enum.Enum):
    EXAMPLE_1D = "example1d"
    ROSENBROCK_2D = "rosenbrock"
    TABULATED = "tabulated"


class Provenance(enum.Enum):
    UNIFORM_GRID = "uniform_grid"
    RANDOM_UNIFORM = "random_uniform"
    FROM_TABLE = "from_table"


@dataclass(frozen=True)
class CandidateSet:
    """Finite, deterministically ordered action points."""

    points: np.ndarray
    provenance: Provenance
    bounds: np.ndarray

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[0] == 0:
            raise InputError("candidate set must contain at least one point")

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class Objective:
    """A maximization target evaluable at candidate points.

    ``noise_variance`` is the observation noise used by ``observe``; zero gives
    noiseless access (used for regret ground truth).
    """

    kind: ObjectiveKind
    noise_variance: float
    rosen_a: float = 1.0
    rosen_b: float = 10.0
    table_points: np.ndarray | None = field(default=None, repr=False)
    table_values: np.ndarray | None = field(default=None, repr=False)
    _lookup: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.noise_variance < 0 or not math.isfinite(self.noise_variance):
            raise InputError(
                f"noise_variance must be nonnegative, got {self.noise_variance}"
            )
        if self.kind is ObjectiveKind.TABULATED:
            if self.table_points is None or len(self.table_points) == 0:
                raise InputError("tabulated objective requires a non-empty table")
            lookup = {}
            for row, val in zip(self.table_points, self.table_values):
                key = tuple(float(v) for v in row)
                if key in lookup:
                    raise InputError(f"duplicate table point {key}")
                lookup[key] = float(val)
            object.__setattr__(self, "_lookup", lookup)
        elif self.kind is ObjectiveKind.ROSENBROCK_2D:
            if not (math.isfinite(self.rosen_a) and math.isfinite(self.rosen_b)):
                raise InputError("valley parameters must be finite")

    @property
    def dim(self) -> int:
        if self.kind is ObjectiveKind.EXAMPLE_1D:
            return 1
        if self.kind is ObjectiveKind.ROSENBROCK_2D:
            return 2
        return self.table_points.shape[1]

    def value(self, x) -> float:
        """Noiseless objective value (maximization sign)."""
        xa = np.asarray(x, dtype=np.float64).reshape(-1)
        if xa.size != self.dim:
            raise InputError(f"point has dimension {xa.size}, expected {self.dim}")
        if self.kind is ObjectiveKind.EXAMPLE_1D:
            return example_function(float(xa[0]))
        if self.kind is ObjectiveKind.ROSENBROCK_2D:
            return -rosenbrock(float(xa[0]), float(xa[1]), self.rosen_a, self.rosen_b)
        key = tuple(float(v) for v in xa)
        try:
            return self._lookup[key]
        except KeyError:
            raise InputError(f"point {key} is not in the objective table") from None


def example1d_objective(noise_variance: float = 0.001) -> Objective:
    return Objective(kind=ObjectiveKind.EXAMPLE_1D, noise_variance=noise_variance)


def negated_rosenbrock_objective(
    a: float = 1.0, b: float = 10.0, noise_variance: float = 0.001
) -> Objective:
    """Maximization wrapper around the valley: value(x, y) = -rosenbrock."""
    return Objective(
        kind=ObjectiveKind.ROSENBROCK_2D, noise_variance=noise_variance,
        rosen_a=a, rosen_b=b,
    )


def observe(objective: Objective, x, rng: np.random.Generator) -> float:
    """One noisy observation value(x) + eta, eta ~ N(0, noise_variance)."""
    val = objective.value(x)
    if objective.noise_variance == 0.0:
        return val
    return val + rng.normal(0.0, math.sqrt(objective.noise_variance))


@dataclass(frozen=True)
class CandidateDescriptor:
    """How to build a candidate set: a uniform lattice or sorted random draws."""

    kind: Provenance
    bounds: tuple
    per_dim: int | None = None
    count: int | None = None


def _check_bounds(bounds) -> np.ndarray:
    arr = np.asarray(bounds, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ConfigError(f"bounds must be a (d, 2) array of [lo, hi], got {bounds}")
    if not np.all(arr[:, 0] < arr[:, 1]):
        raise ConfigError(f"each bound needs lo < hi, got {bounds}")
    return arr


def build_candidates(
    descriptor: CandidateDescriptor, rng: np.random.Generator | None = None
) -> CandidateSet:
    bounds = _check_bounds(descriptor.bounds)
    d = bounds.shape[0]
    if descriptor.kind is Provenance.UNIFORM_GRID:
        if descriptor.per_dim is None or descriptor.per_dim < 1:
            raise ConfigError(f"grid needs per_dim >= 1, got {descriptor.per_dim}")
        axes = [np.linspace(lo, hi, descriptor.per_dim) for lo, hi in bounds]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.reshape(-1) for m in mesh], axis=1)
        return CandidateSet(np.ascontiguousarray(pts), Provenance.UNIFORM_GRID, bounds)
    if descriptor.kind is Provenance.RANDOM_UNIFORM:
        if descriptor.count is None or descriptor.count < 1:
            raise ConfigError(f"random set needs count >= 1, got {descriptor.count}")
        if rng is None:
            raise ConfigError("random candidate construction requires an rng")
        pts = rng.uniform(bounds[:, 0], bounds[:, 1], size=(descriptor.count, d))
        # Lexicographic sort (first coordinate primary) keeps ordering stable.
        order = np.lexsort(tuple(pts[:, k] for k in range(d - 1, -1, -1)))
        return CandidateSet(
            np.ascontiguousarray(pts[order]), Provenance.RANDOM_UNIFORM, bounds
        )
    raise ConfigError(f"cannot build candidates with provenance {descriptor.kind}")


def default_candidate_descriptor(kind: ObjectiveKind) -> CandidateDescriptor:
    if kind is ObjectiveKind.EXAMPLE_1D:
        return CandidateDescriptor(
            Provenance.UNIFORM_GRID, ((0.0, 10.0),), per_dim=101
        )
    if kind is ObjectiveKind.ROSENBROCK_2D:
        return CandidateDescriptor(
            Provenance.UNIFORM_GRID, ((-2.0, 2.0), (-2.0, 2.0)), per_dim=41
        )
    raise ConfigError("tabulated objectives carry their own candidate set")


def table_candidates(objective: Objective) -> CandidateSet:
    """Candidate set of a tabulated objective: the table points in file order."""
    if objective.kind is not ObjectiveKind.TABULATED:
        raise InputError("only tabulated objectives carry a candidate table")
    pts = np.ascontiguousarray(objective.table_points)
    bounds = np.stack([pts.min(axis=0), pts.max(axis=0)], axis=1)
    return CandidateSet(pts, Provenance.FROM_TABLE, bounds)


def load_tabulated(path, noise_variance: float = 0.001) -> Objective:
    """Objective from a CSV of ``x1,...,xd,value`` rows (exact-match lookup).

    UTF-8, comma-separated, dot decimals, header required. Errors carry the
    offending line number; duplicates name the repeated point.
    """
    problems = []
    points, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file, expected header x1,...,xd,value")
        header = [h.strip() for h in header]
        d = len(header) - 1
        expected = [f"x{i + 1}" for i in range(d)] + ["value"]
        if d < 1 or header != expected:
            raise InputError(
                f"{path}: line 1: header must be x1,...,xd,value, got {','.join(header)}"
            )
        seen = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != d + 1:
                problems.append(f"line {lineno}: expected {d + 1} fields, got {len(row)}")
                continue
            try:
                nums = [float(v) for v in row]
            except ValueError:
                problems.append(f"line {lineno}: unparseable number in {row}")
                continue
            if not all(math.isfinite(v) for v in nums):
                problems.append(f"line {lineno}: non-finite value in {row}")
                continue
            key = tuple(nums[:d])
            if key in seen:
                problems.append(
                    f"line {lineno}: duplicate point {key} (first at line {seen[key]})"
                )
                continue
            seen[key] = lineno
            points.append(nums[:d])
            values.append(nums[d])
    if problems:
        raise InputError(f"{path}: " + "; ".join(problems))
    if not points:
        raise InputError(f"{path}: no data rows")
    return Objective(
        kind=ObjectiveKind.TABULATED,
        noise_variance=noise_variance,
        table_points=np.asarray(points, dtype=np.float64),
        table_values=np.asarray(values, dtype=np.float64),
    )


def save_tabulated(path, points, values) -> None:
    """Write a tabulated-objective CSV at full float precision."""
    pts = np.asarray(points, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i + 1}" for i in range(pts.shape[1])] + ["value"])
        for row, val in zip(pts, vals):
            writer.writerow([f"{v:.17g}" for v in row] + [f"{val:.17g}"])
