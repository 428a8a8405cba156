"""Exceptions raised by hypack.

Everything derives from ValueError so callers can treat bad input and failed
verification the same way the command line does.
"""


class HypackError(ValueError):
    pass


class DomainError(HypackError):
    """Argument outside the domain of an operation (e.g. y <= 0, eps >= 1)."""


class ModeMismatchError(HypackError):
    """Hyperbolic and Euclidean objects were mixed."""


class UnsupportedPlacementError(HypackError):
    """Placement is not an isometry of the region's geometry."""


class ConfigurationError(HypackError):
    """Search or filling problem is misconfigured (e.g. empty candidate family)."""


class AlignmentError(HypackError):
    """Window is not a union of lattice cells."""


class HypothesisError(HypackError):
    """The input does not meet the conditions a check relies on."""


class InvalidPackingError(HypackError):
    """Periodic packing or window violates interior-disjointness."""


class OutOfWindowError(HypackError):
    """Query point lies outside the region where the packing is known."""


class TruncationError(HypackError):
    """Window is too small for the requested computation.

    Attributes:
        required: Radius (or region) the window must cover.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class ConstructionError(HypackError):
    """A construction produced an invalid object.

    Attributes:
        pair: The two placements whose copies overlap, when known.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class StageError(HypackError):
    """A reproduce stage failed.

    Attributes:
        stage: Name of the failing stage.
    """

    def __init__(self, stage, message):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
