"""Exception hierarchy shared by the library and the CLI."""


class MomentMonoError(Exception):
    """Base class for all errors raised by momentmono."""


class DomainError(MomentMonoError, ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(MomentMonoError, RuntimeError):
    """An iterative scheme (quadrature, bisection) missed its tolerance."""


class BracketError(MomentMonoError, RuntimeError):
    """Bracket expansion could not straddle the requested target."""


class NonIdentifiableError(MomentMonoError, ValueError):
    """Sample moments sit at or below the ratio infimum; no finite shape fits."""
