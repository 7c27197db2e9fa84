"""Figure rendering for pauliconj CSV/JSON result files."""

__version__ = "0.1.0"

from .figures import EXPECTED_SCHEMAS, FigureSpec, SchemaVersionError, render, render_batch

__all__ = ["EXPECTED_SCHEMAS", "FigureSpec", "SchemaVersionError", "render", "render_batch"]
