"""Exception and warning types shared across the package."""


class CoopgaError(Exception):
    """Base class for all package errors."""


class DegeneratePoint(CoopgaError):
    """Conformal point has (numerically) zero origin coefficient, i.e. lies at infinity."""


class NonScalarNorm(CoopgaError):
    """X * reverse(X) has a non-scalar part, so norm-based formulas do not apply."""


class NullMultivector(CoopgaError):
    """X * reverse(X) is numerically zero; cannot normalize or invert."""


class RotationSingularity(CoopgaError):
    """Rotor logarithm at a rotation angle that is a multiple of pi."""


class DegeneratePrimitive(CoopgaError):
    """Outer-product blade degenerated (coincident/collinear/coplanar points)."""

    def __init__(self, kind, measure):
        self.kind = kind
        self.measure = measure
        super().__init__(f"degenerate {kind}: measure {measure:.3e}")


class AntipodalNormals(CoopgaError):
    """Rotor between exactly opposite unit vectors is not defined."""


class JointLimit(CoopgaError):
    """Joint value outside configured limits (enforcement enabled)."""


class SingularManipulability(CoopgaError):
    """Manipulability matrix not invertible; force manipulability unavailable."""


class SingularTaskInertia(CoopgaError):
    """J M^-1 J^T is numerically singular; task-space inertia undefined."""


class SingularMass(CoopgaError):
    """Joint-space mass matrix is not positive definite."""


class NotConverged(CoopgaError):
    """Iterative solver exhausted its budget; diagnostics attached by callers."""


class NearSingularWarning(UserWarning):
    """Damped least-squares fallback engaged near a singular Jacobian."""


class UncontrollableCommandWarning(UserWarning):
    """Commanded twist had components outside the controllable bivector space."""
