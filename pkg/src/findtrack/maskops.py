"""Pixel-level mask operations shared by the metrics and backend modules.

Boundary extraction convention: a foreground pixel is a boundary pixel when
at least one 4-neighbor is background or lies outside the image (the border
counts as background). Connected components use 4-connectivity; size ties
break toward the component whose first row-major pixel comes first.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def boundary(bits: np.ndarray) -> np.ndarray:
    """Boolean map of boundary pixels of a (H, W) boolean array."""
    padded = np.pad(bits, 1, mode="constant", constant_values=False)
    interior = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    return bits & ~interior


def largest_component(bits: np.ndarray) -> np.ndarray:
    """Largest 4-connected component of a boolean array (all-False if empty)."""
    labels, count = ndimage.label(bits, structure=_CROSS)
    if count == 0:
        return np.zeros_like(bits)
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    best = sizes.max()
    candidates = np.flatnonzero(sizes == best)
    if len(candidates) > 1:
        flat = labels.ravel()
        firsts = [int(np.flatnonzero(flat == c)[0]) for c in candidates]
        chosen = int(candidates[int(np.argmin(firsts))])
    else:
        chosen = int(candidates[0])
    return labels == chosen


def dilate_disk(bits: np.ndarray, radius: int) -> np.ndarray:
    """Binary dilation with the exact Euclidean disk {(dx,dy): dx^2+dy^2 <= r^2}."""
    if radius < 1:
        return bits.copy()
    span = np.arange(-radius, radius + 1)
    dx, dy = np.meshgrid(span, span)
    footprint = dx ** 2 + dy ** 2 <= radius ** 2
    return ndimage.binary_dilation(bits, structure=footprint)
