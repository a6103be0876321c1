"""Randomized success-fraction experiments for the exact solvers.

Scenarios are drawn with sensor coordinates uniform on [-0.5, 0.5] and source
coordinates uniform on the same cube shrunk by ``source_scale``. Each
instance runs the matching solver on noise-free forward-modelled range
differences and is scored by relative position error against one or more
thresholds. Failures are attributed to singular geometry, a wrong quadratic
root (the losing candidate matches truth), or plain numerical error.

Instances are seeded independently via a splittable hash of
(seed, scale index, instance index), so sweeps are reproducible bit-for-bit
regardless of execution order or worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateDeltasError,
    DegenerateSamplingError,
    InvalidConfigError,
    LocalizationError,
    SingularMatrixError,
)
from .measurement import Scenario, SensorArray, range_differences
from .result import LocalizationResult, Method
from .solver4 import solve_four_sensor
from .solver5 import solve_five_sensor

DEFAULT_THRESHOLDS = (1e-6, 1e-3)
DEFAULT_SCALE_GRID = tuple(float(s) for s in np.logspace(-6.0, 0.0, 13))
MAX_SAMPLE_ATTEMPTS = 100


class FailureCause(Enum):
    SINGULAR_GEOMETRY = "singular_geometry"
    WRONG_ROOT = "wrong_root"
    NUMERICAL_ERROR = "numerical_error"


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep parameters; validated on construction."""

    n_sensors: int = 5
    n_instances: int = 1000
    source_scale: float = 1.0
    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS
    seed: int = 0
    scale_grid: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))
        if self.scale_grid is not None:
            object.__setattr__(
                self, "scale_grid", tuple(float(s) for s in self.scale_grid)
            )
        if self.n_sensors not in (4, 5):
            raise InvalidConfigError(f"n_sensors must be 4 or 5, got {self.n_sensors}")
        if self.n_instances < 1:
            raise InvalidConfigError(f"n_instances must be >= 1, got {self.n_instances}")
        if not self.source_scale > 0.0:
            raise InvalidConfigError(
                f"source_scale must be positive, got {self.source_scale}"
            )
        if not self.thresholds or any(not t > 0.0 for t in self.thresholds):
            raise InvalidConfigError(f"thresholds must be positive, got {self.thresholds}")
        if self.scale_grid is not None and any(not s > 0.0 for s in self.scale_grid):
            raise InvalidConfigError(f"scales must be positive, got {self.scale_grid}")

    def scales(self) -> tuple[float, ...]:
        return self.scale_grid if self.scale_grid else (self.source_scale,)


@dataclass(frozen=True)
class InstanceResult:
    """Outcome of one scenario: estimate, error, per-threshold success."""

    scenario: Scenario
    estimate: LocalizationResult | None
    error: str | None
    rel_error: float | None
    success_at: tuple[bool, ...]  # aligned with the thresholds tuple
    failure_cause: FailureCause | None


@dataclass(frozen=True)
class SweepCell:
    """Aggregate for one (source scale, threshold) pair."""

    n_sensors: int
    source_scale: float
    threshold: float
    success_fraction: float
    n_singular: int
    n_wrong_root: int
    n_numerical: int
    n_instances: int


@dataclass(frozen=True)
class SweepSummary:
    """All cells of a sweep, ordered by (scale index, threshold index)."""

    config: ExperimentConfig
    cells: tuple[SweepCell, ...]


def instance_rng(seed: int, scale_index: int, instance_index: int) -> np.random.Generator:
    """Independent per-instance generator from a splittable seed hash."""
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(scale_index, instance_index))
    )


def sample_scenario(
    rng: np.random.Generator, n_sensors: int, source_scale: float
) -> Scenario:
    """Draw one random scenario; resample the rare invariant-violating draws.

    Sensor coordinates are uniform on [-0.5, 0.5]; source coordinates are the
    same shrunk by ``source_scale``. Sensors are drawn before the source.

    Raises:
        DegenerateSamplingError: after MAX_SAMPLE_ATTEMPTS rejected draws.
    """
    for _ in range(MAX_SAMPLE_ATTEMPTS):
        sensors = rng.random((n_sensors, 3)) - 0.5
        source = source_scale * (rng.random(3) - 0.5)
        try:
            return Scenario(sensors=SensorArray(sensors), source=source)
        except ValueError:
            continue
    raise DegenerateSamplingError(
        f"no valid scenario after {MAX_SAMPLE_ATTEMPTS} draws "
        f"(n_sensors={n_sensors}, source_scale={source_scale})"
    )


def run_instance(scenario: Scenario, thresholds) -> InstanceResult:
    """Forward-model, solve, and score one scenario against the thresholds."""
    thresholds = tuple(float(t) for t in thresholds)
    deltas = range_differences(scenario)
    solver = solve_five_sensor if scenario.sensors.n_sensors == 5 else solve_four_sensor
    try:
        estimate = solver(scenario.sensors, deltas)
    except (SingularMatrixError, DegenerateDeltasError) as err:
        return InstanceResult(
            scenario, None, str(err), None,
            (False,) * len(thresholds), FailureCause.SINGULAR_GEOMETRY,
        )
    except LocalizationError as err:
        return InstanceResult(
            scenario, None, str(err), None,
            (False,) * len(thresholds), FailureCause.NUMERICAL_ERROR,
        )

    truth = scenario.source
    truth_norm = float(np.linalg.norm(truth))
    rel_error = _rel_error(estimate.position, truth, truth_norm)
    success = tuple(rel_error < t for t in thresholds)

    cause = None
    if not all(success):
        cause = FailureCause.NUMERICAL_ERROR
        if estimate.method is Method.FOUR_SENSOR:
            tightest = min(thresholds)
            for cand in estimate.candidates:
                if np.array_equal(cand.position, estimate.position):
                    continue
                if _rel_error(cand.position, truth, truth_norm) < tightest:
                    cause = FailureCause.WRONG_ROOT
                    break
    return InstanceResult(scenario, estimate, None, rel_error, success, cause)


def _rel_error(position: np.ndarray, truth: np.ndarray, truth_norm: float) -> float:
    err = float(np.linalg.norm(position - truth))
    if truth_norm > 0.0:
        return err / truth_norm
    return 0.0 if err == 0.0 else math.inf


def run_sweep(config: ExperimentConfig, n_jobs: int = 1) -> SweepSummary:
    """Run every (scale, instance) cell of the sweep and aggregate.

    Instances are independent; with ``n_jobs > 1`` they execute on a thread
    pool. Per-instance seeding plus index-ordered aggregation makes the
    summary a pure function of the config, whatever the parallelism.
    """
    scales = config.scales()
    jobs = [(si, ii) for si in range(len(scales)) for ii in range(config.n_instances)]

    def work(job: tuple[int, int]) -> InstanceResult:
        si, ii = job
        rng = instance_rng(config.seed, si, ii)
        scenario = sample_scenario(rng, config.n_sensors, scales[si])
        return run_instance(scenario, config.thresholds)

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(job) for job in jobs]

    cells = []
    n = config.n_instances
    for si, scale in enumerate(scales):
        chunk = results[si * n : (si + 1) * n]
        for ti, threshold in enumerate(config.thresholds):
            failures = [r for r in chunk if not r.success_at[ti]]
            counts = {cause: 0 for cause in FailureCause}
            for r in failures:
                counts[r.failure_cause] += 1
            cells.append(
                SweepCell(
                    n_sensors=config.n_sensors,
                    source_scale=float(scale),
                    threshold=float(threshold),
                    success_fraction=(n - len(failures)) / n,
                    n_singular=counts[FailureCause.SINGULAR_GEOMETRY],
                    n_wrong_root=counts[FailureCause.WRONG_ROOT],
                    n_numerical=counts[FailureCause.NUMERICAL_ERROR],
                    n_instances=n,
                )
            )
    return SweepSummary(config=config, cells=tuple(cells))
