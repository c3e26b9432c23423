"""Exception hierarchy shared by all dmim modules."""


class DmimError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(DmimError, ValueError):
    """A parameter is outside the domain of the requested operation."""


class InvalidDomain(InvalidParams):
    """Integration interval with lower >= upper."""


class InvalidAlpha(InvalidParams):
    """Renyi order must be positive and different from one."""


class EmptySample(InvalidParams):
    pass


class NonFiniteSample(InvalidParams):
    pass


class InvalidCdf(InvalidParams):
    """A reference CDF returned a value outside [0, 1]."""


class MissingVariance(InvalidParams):
    pass


class UnsupportedFamily(InvalidParams):
    """Operation not available for this distribution family."""


class QuadratureFailure(DmimError, ArithmeticError):
    """Numerical integration did not produce a trustworthy value."""


class NonConvergent(QuadratureFailure):
    """Subdivision budget exhausted before meeting the tolerance."""


class NonFinite(QuadratureFailure):
    """Integrand produced NaN or infinity at an interior point."""


class DivergentIntegral(QuadratureFailure):
    pass


class SlowConvergence(DmimError, ArithmeticError):
    """A series needed more terms than allowed, or lost all precision."""


class DegenerateInput(DmimError, ArithmeticError):
    pass
