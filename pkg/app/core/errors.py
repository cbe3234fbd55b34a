"""
Domain exceptions.

All of them derive from ``ValueError`` so that callers treating bad input
generically keep working; the CLI maps them to exit code 1.
"""

__all__ = (
    "AnnotationParseError",
    "ConfigurationError",
    "CtrexError",
    "DegenerateAngleError",
    "DegeneratePolygonError",
    "GridFormatError",
    "ParameterError",
    "ShapeError",
)


class CtrexError(ValueError):
    """Root of every error raised by the library."""


class DegeneratePolygonError(CtrexError):
    """Polygon has too few vertices, zero area or zero perimeter."""


class DegenerateAngleError(DegeneratePolygonError):
    """A vertex is collinear with (or folds back onto) its neighbours."""

    def __init__(self, vertex_index: int, sine: float):
        self.vertex_index = vertex_index
        self.sine = sine
        super().__init__(f"degenerate angle at vertex {vertex_index} (sin={sine:.3g})")


class ParameterError(CtrexError):
    """An argument lies outside its documented range."""


class ShapeError(CtrexError):
    """Grid or mask dimensions do not match."""


class ConfigurationError(CtrexError):
    """Invalid configuration values."""


class AnnotationParseError(CtrexError):
    """Malformed annotation content."""

    def __init__(self, message: str, *, line: int | None = None, path: str | None = None):
        self.reason = message
        self.line = line
        self.path = path
        where = f"line {line}" if line is not None else (f"at {path}" if path else "")
        super().__init__(f"{message} ({where})" if where else message)


class GridFormatError(CtrexError):
    """Malformed F32G or PGM payload."""
