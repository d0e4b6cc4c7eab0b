"""Exception types shared across the pipeline."""


class SemflowError(Exception):
    """Base class for all semflow errors."""


class InvalidDocument(SemflowError):
    """Document body is empty or otherwise unusable."""


class ParseError(SemflowError):
    """A structured input file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DimensionMismatch(SemflowError):
    """An embedding row does not match the declared dimension."""


class ZeroNorm(SemflowError):
    """Cosine similarity is undefined for a zero vector."""


class InvalidK(SemflowError):
    """k is outside the valid range 1..S-1 for a k-NN graph."""


class PartitionMismatch(SemflowError):
    """A partition does not cover the nodes it is applied to."""


class EmptyChain(SemflowError):
    """A label sequence is too short to yield any transition."""


class InvalidThreshold(SemflowError):
    """Pruning threshold must lie in [0, 1]."""


class NotAMotif(SemflowError):
    """Edge set is not a loop-free weakly connected digraph on 2 or 3 nodes."""


class InvalidDataset(SemflowError):
    """Dataset cannot be used for classification (too few classes, empty, ...)."""


class InvalidArgument(SemflowError):
    """A numeric argument is outside its documented range."""


class ExportError(SemflowError):
    """Nothing to export, or the payload is malformed."""
