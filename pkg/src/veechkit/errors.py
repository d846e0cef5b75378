"""Exception types shared across the package."""


class VeechKitError(Exception):
    """Base class for all errors raised by veechkit."""


class UnsupportedField(VeechKitError):
    """Requested construction needs field elements outside Q(sqrt(d))."""


class UnsupportedAngle(VeechKitError):
    """A direction or corner is not an exact multiple of pi/12."""


class InvalidTriangle(VeechKitError):
    """Angle numerators are non-positive or do not sum to the denominator."""


class InvalidSurface(VeechKitError):
    """A polygon/gluing structure violates a translation-surface invariant."""


class NotUnimodular(VeechKitError):
    """Matrix determinant is not +1 or -1."""


class ZeroDirection(VeechKitError):
    """The zero vector does not define a direction."""


class BudgetExceeded(VeechKitError):
    """Separatrix tracing ran out of budget; periodicity is undetermined."""


class NotParallelDecomposable(VeechKitError):
    """No cylinder decomposition was found in the requested direction."""


class IncommensurableModuli(VeechKitError):
    """Cylinder moduli have an irrational ratio, so no parabolic exists."""


class NotAReflection(VeechKitError):
    """Operation requires a matrix of determinant -1."""


class NotAnInvolution(VeechKitError):
    """Operation requires a determinant -1, trace 0 matrix."""


class MembershipFailed(VeechKitError):
    """A candidate matrix is not an affine automorphism of the surface."""


class NonHyperbolic(VeechKitError):
    """Orbifold data has non-positive Gauss-Bonnet area."""


class RequiresExactRational(VeechKitError):
    """Decimal literals are rejected; coordinates must be exact."""


class SchemaError(VeechKitError):
    """A JSON document does not match the expected schema."""
