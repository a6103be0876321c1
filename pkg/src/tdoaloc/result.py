"""Shared localization result record for the 4- and 5-sensor solvers."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Method(Enum):
    FIVE_SENSOR = "five_sensor"
    FOUR_SENSOR = "four_sensor"


class AmbiguityResolution(Enum):
    RESIDUAL = "residual"          # two candidates scored, minimizer chosen
    SINGLE_ROOT = "single_root"    # only one admissible candidate existed
    NOT_APPLICABLE = "not_applicable"  # five-sensor solve, no ambiguity arises


@dataclass(frozen=True)
class Candidate:
    """One admissible source position with its range-difference residual."""

    reference_range: float  # distance source-to-reference-sensor, m
    position: np.ndarray    # absolute, m
    residual: float         # sum of squared range-difference mismatches, m^2


@dataclass(frozen=True)
class LocalizationResult:
    """Estimated source position plus everything needed to audit the choice.

    ``candidates`` retains every admissible position (four-sensor solves can
    produce two) so callers with prior knowledge can re-select; ``ambiguous``
    is set when the top two residuals tied within tolerance and the first
    root was kept by policy.
    """

    position: np.ndarray  # absolute, m
    method: Method
    candidates: tuple[Candidate, ...]
    ambiguity_resolved_by: AmbiguityResolution
    ambiguous: bool = False
    diagnostics: dict = field(default_factory=dict)
