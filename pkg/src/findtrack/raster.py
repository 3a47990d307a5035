"""Analytic shape rasterization.

Shapes are rasterized at integer pixel centers: pixel (x, y) is foreground
exactly when the point (x, y) satisfies the shape inequality. Centers and
sizes may be fractional, so a shape translated by an integer offset yields
the same bit pattern translated. Both the synthetic scene generator and the
text-prototype renderer use these primitives, which is what makes rendered
objects and their prototypes agree.
"""

from __future__ import annotations

import math

import numpy as np


def _grid(width: int, height: int):
    ys, xs = np.mgrid[0:height, 0:width]
    return xs.astype(np.float64), ys.astype(np.float64)


def circle(width: int, height: int, cx: float, cy: float, radius: float) -> np.ndarray:
    xs, ys = _grid(width, height)
    return (xs - cx) ** 2 + (ys - cy) ** 2 <= radius ** 2


def square(width: int, height: int, cx: float, cy: float, half: float) -> np.ndarray:
    xs, ys = _grid(width, height)
    return (np.abs(xs - cx) <= half) & (np.abs(ys - cy) <= half)


def triangle(width: int, height: int, cx: float, cy: float, half: float) -> np.ndarray:
    """Isoceles triangle: apex at (cx, cy-half), base corners at (cx±half, cy+half)."""
    xs, ys = _grid(width, height)
    ax, ay = cx, cy - half
    bx, by = cx - half, cy + half
    tx, ty = cx + half, cy + half

    def cross(px, py, qx, qy, rx, ry):
        return (qx - px) * (ry - py) - (qy - py) * (rx - px)

    d1 = cross(ax, ay, bx, by, xs, ys)
    d2 = cross(bx, by, tx, ty, xs, ys)
    d3 = cross(tx, ty, ax, ay, xs, ys)
    return ((d1 >= 0) & (d2 >= 0) & (d3 >= 0)) | ((d1 <= 0) & (d2 <= 0) & (d3 <= 0))


def bar(width: int, height: int, axis: str, center: float, half: float) -> np.ndarray:
    """Full-length bar: vertical bars span all rows, horizontal bars all columns."""
    xs, ys = _grid(width, height)
    if axis == "vertical":
        return np.abs(xs - center) <= half
    if axis == "horizontal":
        return np.abs(ys - center) <= half
    raise ValueError(f"bar axis must be 'vertical' or 'horizontal', got {axis!r}")


_SHAPE_FUNCS = {"circle": circle, "square": square, "triangle": triangle}


def shape_mask(name: str, width: int, height: int, cx: float, cy: float, size: float) -> np.ndarray:
    """Rasterize a named shape onto a width x height canvas (clipped at borders)."""
    try:
        func = _SHAPE_FUNCS[name]
    except KeyError:
        raise ValueError(f"unknown shape {name!r}") from None
    return func(width, height, cx, cy, size)


def shape_area_unclipped(name: str, cx: float, cy: float, size: float) -> int:
    """Lattice-point count of the shape ignoring any canvas bounds."""
    pad = int(math.ceil(size)) + 2
    x0, y0 = int(math.floor(cx)) - pad, int(math.floor(cy)) - pad
    side = 2 * pad + 2
    local = shape_mask(name, side, side, cx - x0, cy - y0, size)
    return int(local.sum())
