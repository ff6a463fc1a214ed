"""Utility functions."""

from pathlib import Path
from typing import List


def ensure_parent(path: str) -> None:
    """Ensure the parent directory of a file path exists."""
    parent = Path(path).parent
    if str(parent):
        parent.mkdir(parents=True, exist_ok=True)


def parse_grid(spec: str) -> List[float]:
    """
    Parse an inclusive ``start:stop:step`` grid.

    The number of points is rounded so that float steps such as 0.05
    do not drop the end point.
    """
    parts = spec.split(':')
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:step, got {spec!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise ValueError(f"empty grid {spec!r}")
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(count)]
