"""Deterministic CSV output.

Floats are written in fixed 17-significant-digit scientific notation so
that a repeated run is byte-identical and goldens can be compared by hash.
"""
from __future__ import annotations

import os
from typing import Iterable, Sequence

import numpy as np


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    return str(value)


def write_csv(path: str, header: Sequence[str],
              rows: Iterable[Sequence]) -> str:
    """Write rows to ``path`` with a header line; returns the path."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
    return path


def write_summary(path: str, entries) -> str:
    """Key/value summary table; ``entries`` is a list of (key, value)."""
    return write_csv(path, ("key", "value"), entries)
