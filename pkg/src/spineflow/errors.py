"""Exception classes shared by all spineflow modules."""


class SpineflowError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(SpineflowError):
    """Malformed combinatorial data: bad darts, non-permutations, fixed
    points of the edge involution, and similar structural defects."""


class OrientabilityError(SpineflowError):
    """Surface invariants are inconsistent with a compact orientable
    surface (negative or non-integer genus)."""


class InputError(SpineflowError):
    """A well-formed request that refers to unknown ids, partial data or
    otherwise violates an operation's precondition.  Distinct from a
    condition *failing*: failures are reported, not raised."""


class CapacityError(SpineflowError):
    """A desk-scale enumeration limit was exceeded."""


class OrientationConflictError(SpineflowError):
    """No orientation assignment exists; carries an odd cycle witness.

    ``cycle`` is a list of vertex ids; a loop edge shows up as the
    one-element cycle ``[v]``.
    """

    def __init__(self, message, cycle):
        super().__init__(message)
        self.cycle = list(cycle)
