"""Exception hierarchy.

Every error raised by the package derives from :class:`GBHError`.  The CLI
maps the three middle-level classes onto its exit codes.
"""


class GBHError(Exception):
    pass


class InputError(GBHError):
    """Malformed user input (graphs, families, files)."""


class ComputationError(GBHError):
    """A computation could not be carried out as requested."""


class ConfigError(GBHError):
    """Inconsistent run configuration."""


class VerificationError(GBHError):
    """A verification routine found a mismatch."""


# graph-model
class LoopEdge(InputError):
    pass


class ParallelEdge(InputError):
    pass


class UnknownEndpoint(InputError):
    pass


class DuplicateId(InputError):
    pass


class UnknownVertex(InputError):
    pass


class UnknownEdge(InputError):
    pass


class InvalidK(InputError):
    pass


class NotAdjacencyPreserving(InputError):
    pass


# swiatkowski-complex
class IsolatedVertexInReducedMode(ComputationError):
    pass


class SliceMismatch(ComputationError):
    pass


# integral-homology
class NotAComplex(ComputationError):
    pass


class DimensionMismatch(ComputationError):
    pass


class BadField(ConfigError):
    pass


# module-presentation
class TruncationTooSmall(ComputationError):
    pass


class IndexOutOfRange(ComputationError):
    pass


# fi-graph-families
class NBelowTail(ComputationError):
    pass


class NotInjective(InputError):
    pass


class NotEdgeLinear(ComputationError):
    pass


class WindowTooSmall(ConfigError):
    pass


# blowup-les
class ExactnessFailure(VerificationError):
    pass


class RegressionFailure(VerificationError):
    pass


# discrete-oracle
class InsufficientSubdivision(ComputationError):
    pass


class BudgetExceeded(ComputationError):
    pass
