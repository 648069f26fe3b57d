"""Exception types shared across the package."""


class TrustBiasError(Exception):
    """Base class for all errors raised by this package."""


class EdgeListParseError(TrustBiasError):
    """A line of an edge-list file could not be parsed."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class EmptyGraphError(TrustBiasError):
    """No nodes or edges survive construction."""


class DimensionError(TrustBiasError, ValueError):
    """Vector length does not match the graph or a peer vector."""


class VariantMismatchError(TrustBiasError, ValueError):
    """A bias-function variant was applied to a graph of the wrong signedness."""


class DomainError(TrustBiasError, ValueError):
    """A parameter lies outside its valid domain."""


class UndefinedAucError(TrustBiasError, ValueError):
    """AUC is undefined because one label class is empty."""
