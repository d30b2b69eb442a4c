"""Exception hierarchy. Every error carries a stable machine-readable code
that the CLI prints as ``error: <code>: <message>`` before exiting 1."""


class MagicTrapError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "domain-error"


class InvalidArgumentError(MagicTrapError):
    code = "invalid-argument"


class ConventionViolationError(MagicTrapError):
    """Signed-depth convention broken: trap depths are stored as the
    (negative) ground-state light shift in Hz."""

    code = "convention-violation"


class NoMagicPointError(MagicTrapError):
    """Quadratic coefficient is zero, the shift-vs-depth curve has no vertex."""

    code = "no-magic-point"


class NoZeroCrossingError(MagicTrapError):
    """Linear polarization: no bias field makes the magic depth vanish."""

    code = "no-zero-crossing"


class UnphysicalConfigurationError(MagicTrapError):
    code = "unphysical-configuration"


class OutOfRangeError(MagicTrapError):
    code = "out-of-range"


class NumericalFailureError(MagicTrapError):
    """Quadrature or root finding failed to converge; carries diagnostics."""

    code = "numerical-failure"

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class RankDeficiencyError(MagicTrapError):
    code = "rank-deficient"


class ConditioningError(MagicTrapError):
    code = "ill-conditioned"

    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class FitFailureError(MagicTrapError):
    code = "fit-failure"

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class FrequencyAmbiguityError(MagicTrapError):
    code = "frequency-ambiguity"


class TimelineError(MagicTrapError):
    code = "invalid-timeline"
