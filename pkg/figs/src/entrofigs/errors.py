class FigsError(Exception):
    """Base class for figure-generation errors."""


class SpecError(FigsError):
    """The figure spec file is missing, malformed, or inconsistent."""


class UnknownFigureKind(SpecError):
    """The spec names a figure kind this package does not implement."""


class MissingInput(FigsError):
    """An input CSV does not exist or cannot be read."""


class EmptyInput(FigsError):
    """An input CSV has a header but no data rows."""


class MissingColumn(FigsError):
    """An input CSV lacks a column the figure needs."""
