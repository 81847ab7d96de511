"""Exception and warning types shared across the package."""


class QdsymError(Exception):
    """Base class for all package-specific errors."""


class DegenerateInput(QdsymError):
    """Constant or identically-zero polynomial where a nontrivial one is required."""


class ConditioningError(QdsymError):
    """Interpolation matrix too ill-conditioned; try the exact backend."""


class InvalidFactor(QdsymError):
    """Blaschke-Potapov data violates its constraints (|a|>=1, P not a projection, v not unitary)."""


class IllPosedComposition(QdsymError):
    """den(t, B(t)) is singular identically; psi cannot be composed with B."""


class BoundaryPole(QdsymError):
    """A pole sits on (or within tolerance of) the unit circle."""


class BranchAmbiguity(QdsymError):
    """Eigenvalue branches could not be disentangled after maximal refinement."""

    def __init__(self, msg, theta_window=None):
        super().__init__(msg)
        self.theta_window = theta_window


class TooCloseToBoundary(QdsymError):
    """Winding number requested at a point too close to the eigenvalue curve."""


class PreconditionViolation(QdsymError):
    """Input does not satisfy a documented precondition of the operation."""


class FactorizationAmbiguous(QdsymError):
    """Hankel kernel rank detection was inconclusive."""

    def __init__(self, msg, singular_values=None):
        super().__init__(msg)
        self.singular_values = singular_values


class EmptyModelSpace(QdsymError):
    """Constant inner function: H^2 minus alpha*H^2 is trivial."""


class SymmetryViolation(QdsymError):
    """Real-type coefficient symmetry a_kj = conj(a_jk) broken beyond tolerance."""


class DegenerateCurve(QdsymError):
    """Repeated or circle-touching roots of the discriminant polynomial D."""


class DegreeBoundError(QdsymError):
    """Requested bivariate degrees cannot reproduce the evaluated function."""


class InvalidTestFunction(QdsymError):
    """Quadrature test function has a pole inside the domain."""


class NoData(QdsymError):
    """Nothing to emit (empty trace or report)."""


class LeadingDropWarning(Warning):
    """Sylvester leading coefficient vanished identically in the parameter."""
