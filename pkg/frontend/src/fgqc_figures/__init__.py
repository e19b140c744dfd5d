"""Figure rendering for fgqc noise-sweep CSVs."""

from .figures import CSV_HEADER, FIGURES, FigureSpec, group_series, read_sweep, render

__version__ = "0.1.0"

__all__ = [
    "CSV_HEADER",
    "FIGURES",
    "FigureSpec",
    "group_series",
    "read_sweep",
    "render",
    "__version__",
]
