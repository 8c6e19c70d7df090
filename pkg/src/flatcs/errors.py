"""Exception hierarchy for flatcs."""


class FlatCSError(Exception):
    """Base class for all errors raised by flatcs."""


class GroupMismatchError(FlatCSError, ValueError):
    """Operands belong to different structure groups."""


class MembershipError(FlatCSError, ValueError):
    """A matrix is not an element of the requested group or algebra."""


class BranchCutError(FlatCSError, ArithmeticError):
    """Principal logarithm requested too close to the eigenvalue -1."""


class RetractionError(FlatCSError, ArithmeticError):
    """Matrix is too far from the group to be retracted."""


class CatalogError(FlatCSError, KeyError):
    """Group not present in the catalog."""


class FeasibilityError(FlatCSError, ValueError):
    """The commutator problem has no solutions."""


class SolverError(FlatCSError, RuntimeError):
    """Descent did not converge; ``best_defect`` holds the best value reached."""

    def __init__(self, message, best_defect=float("nan"), best_point=None):
        super().__init__(message)
        self.best_defect = best_defect
        self.best_point = best_point


class ContinuationError(FlatCSError, RuntimeError):
    """Re-projection failed at step ``step`` of a continuation path."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class FlatnessError(FlatCSError, ValueError):
    """A connection required to be flat is not."""


class ResolutionError(FlatCSError, ValueError):
    """Grid or loop resolution is too coarse for the requested computation."""


class StencilError(FlatCSError, ValueError):
    """Gauge map too rough for finite-difference stencils."""


class PreconditionError(FlatCSError, ValueError):
    """Generic violated precondition."""


class LedgerError(FlatCSError, ArithmeticError):
    """Gluing ledger identity violated beyond tolerance."""


class ConvergenceError(FlatCSError, RuntimeError):
    """Heat flow hit ``max_steps``; ``energy`` is the final Yang-Mills energy."""

    def __init__(self, message, energy=float("nan")):
        super().__init__(message)
        self.energy = energy


class ConnectivityError(FlatCSError, RuntimeError):
    """Heat flow failed at an interior point ``t`` of a straight-line path."""

    def __init__(self, message, t):
        super().__init__(message)
        self.t = t


class PlotError(FlatCSError, ValueError):
    """Record lacks the series needed for a plot."""


class UsageError(FlatCSError, ValueError):
    """Invalid experiment configuration; ``field`` names the offending path."""

    def __init__(self, message, field=""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
