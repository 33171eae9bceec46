"""Exception hierarchy shared by the numerical engine and the link models."""


class RffsoError(Exception):
    """Base class for every error raised by this package."""


class PoleError(RffsoError, ValueError):
    """Argument sits on (or numerically at) a pole of the gamma function."""


class DomainError(RffsoError, ValueError):
    """Argument outside the mathematical domain of the function."""


class ContourError(RffsoError, ValueError):
    """No admissible vertical contour separates the two pole families."""


class NonConvergenceError(RffsoError, ArithmeticError):
    """Truncation or refinement hit its ceiling before meeting the tolerance."""


class ImaginaryResidueError(RffsoError, ArithmeticError):
    """A quantity that must be real came back with a significant imaginary part."""


class CoincidentPoleError(RffsoError, ValueError):
    """Residue series needs simple poles but two lower parameters differ by an integer."""


class SeriesDivergenceError(RffsoError, ArithmeticError):
    """Residue series is outside the region where it can be summed accurately."""


class QuadratureError(RffsoError, ArithmeticError):
    """Integration failed to meet its tolerance.

    ``estimate`` and ``error_bound`` carry the best result obtained.
    """

    def __init__(self, message, estimate=float("nan"), error_bound=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class NonFiniteIntegrandError(RffsoError, ArithmeticError):
    """Integrand returned inf or nan at a quadrature node."""


def annotate(exc, note):
    """Attach context to an exception in flight (``add_note`` on 3.11+)."""
    if hasattr(exc, "add_note"):
        exc.add_note(note)
    elif exc.args and isinstance(exc.args[0], str):
        exc.args = (f"{exc.args[0]} [{note}]",) + exc.args[1:]
    return exc
