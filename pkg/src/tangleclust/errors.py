"""Exception and warning types shared across the package."""


class TangleError(Exception):
    """Base class for all package errors."""


class EmptySideError(TangleError):
    """A bipartition side is empty (membership vector is constant)."""


class LengthMismatchError(TangleError):
    """Two vectors that must have equal length do not."""


class UniverseMismatchError(TangleError):
    """A cut and a dataset refer to different object universes."""


class TooLargeError(TangleError):
    """Input exceeds the configured brute-force limit."""


class TooFewNodesError(TangleError):
    """Graph has too few nodes for the requested operation."""


class BadParamsError(TangleError):
    """Generator or evaluator parameters are out of range."""


class NoDistinguishingCutsError(TangleError):
    """A splitting node has an empty distinguishing-cut set."""


class InvalidSelectionError(TangleError):
    """Node selection does not cover every root-leaf path exactly once."""


class MissingAxisMetadataError(TangleError):
    """A cut lacks the (axis, threshold) metadata required here."""


class DataFormatError(TangleError):
    """An input file could not be parsed in the declared format."""


class DegenerateCutWarning(UserWarning):
    """A constant column/axis was skipped during cut generation."""
