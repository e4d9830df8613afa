"""Exception hierarchy for the wjf package."""


class WjfError(Exception):
    """Base class for all package errors."""


class NotDivisible(WjfError):
    """Exact Laurent division has a nonzero remainder."""


class ExponentOverflow(WjfError):
    """A transformed exponent left the quarter-integer grid."""


class OffsetMismatch(WjfError):
    """q-series addition with offsets that do not differ by an integer."""


class OffsetResidue(WjfError):
    """An assembled expansion ended up with a nonzero fractional q-offset."""


class FractionalOffset(WjfError):
    """Operation requires a series with integer q-orders (offset 0)."""


class LatticeMismatch(WjfError):
    """Binary operation on series attached to different lattices."""


class InvalidForm(WjfError):
    """A series violates the dual-lattice or support-bound constraints."""


class NormalizationMismatch(WjfError):
    """A constructed expansion is not proportional to its pinned q^0 term."""


class ChevalleyMismatch(WjfError):
    """The two construction routes for an invariant pair disagree."""


class IdentityFailure(WjfError):
    """An expected exact series identity fails; carries the first bad term."""

    def __init__(self, message, order=None, exponent=None):
        super().__init__(message)
        self.order = order
        self.exponent = exponent


class ProportionalityFailure(WjfError):
    """A difference of series is not a single scalar multiple of the target."""


class SolverInconsistent(WjfError):
    """The order-by-order linear solver hit an unsatisfiable system."""

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class SolverUnderdetermined(WjfError):
    """The order-by-order linear solver has leftover degrees of freedom."""

    def __init__(self, message, order=None, nullity=None):
        super().__init__(message)
        self.order = order
        self.nullity = nullity


class NotInvariant(WjfError):
    """Input form is not invariant under the group of the generator set."""


class NoSolution(WjfError):
    """The decomposition system is inconsistent (nonzero residual)."""


class RankDeficient(WjfError):
    """Decomposition exists but is not unique at this truncation."""

    def __init__(self, message, nullity=None):
        super().__init__(message)
        self.nullity = nullity


class FormFileError(WjfError):
    """A serialized form file fails validation."""
