"""Exception hierarchy shared by all modules."""


class SphereDPPError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SphereDPPError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class PoleError(DomainError):
    """The requested value sits on (or beyond) a pole of the formula."""


class DivergentEnergyError(DomainError):
    """The expected energy is infinite for the requested exponent."""


class ComparisonError(DomainError):
    """Two kernels cannot be compared (different dimension or trace)."""


class NumericalError(SphereDPPError, ArithmeticError):
    """A numerical routine failed to reach its accuracy contract."""


class ConvergenceError(NumericalError):
    pass


class DegeneracyError(NumericalError):
    """The Gram factor of the sampler lost positive definiteness."""


class SingularConfigurationError(NumericalError):
    """Two points of a configuration coincide."""


class AccuracyError(NumericalError):
    pass


class SamplerStallError(SphereDPPError, RuntimeError):
    """Rejection sampling exceeded its proposal budget."""
