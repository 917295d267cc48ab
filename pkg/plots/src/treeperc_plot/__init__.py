"""Figures from treeperc result CSVs.

This package is a consumer of the results schema only: it reads the CSV
files the runner writes and knows nothing about how they were produced.
"""

__version__ = "0.1.0"

from .schema import COLUMNS, SchemaError, read_rows

__all__ = ["COLUMNS", "SchemaError", "read_rows"]
