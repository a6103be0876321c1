"""Exception types raised across the localization pipeline."""


class LocalizationError(Exception):
    """Base class for every failure this package reports."""


class SingularMatrixError(LocalizationError):
    """Pivoted elimination hit a pivot below the rank threshold."""


class DegenerateDeltasError(LocalizationError):
    """Every usable sensor pairing produced an identically zero equation.

    Happens when the source sits on a multi-sensor symmetry locus and all
    range differences for the paired sensors vanish.
    """


class NoRealSolutionError(LocalizationError):
    """The reference-range quadratic has no real root beyond round-off."""


class DegenerateLinearError(LocalizationError):
    """The quadratic degenerated to a linear equation with no unique root."""


class NoCandidatesError(LocalizationError):
    """No physically admissible (nonnegative-range) candidate was retained."""


class DegenerateSamplingError(LocalizationError):
    """Random scenario sampling kept violating the geometry invariants."""


class ScenarioFormatError(LocalizationError):
    """A scenario document is malformed or internally inconsistent."""


class InvalidConfigError(LocalizationError):
    """An experiment configuration contains out-of-range values."""
