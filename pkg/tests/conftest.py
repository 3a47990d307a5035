"""Shared test helpers: tiny mask/frame builders and independent oracles.

The oracle functions here deliberately avoid the library's own
implementations (no scipy, no vectorized shortcuts) so tests compare two
independent routes to the same answer.
"""

import numpy as np
import pytest

from findtrack.types import BinaryMask, Frame, VideoSequence


def mask_from_rows(rows):
    """Build a BinaryMask from strings like '.#.' (# = foreground)."""
    bits = np.array([[c == "#" for c in row] for row in rows], dtype=bool)
    return BinaryMask(bits)


def solid_frame(width, height, rgb, index=1):
    pixels = np.zeros((height, width, 3), dtype=np.uint8)
    pixels[:] = rgb
    return Frame(index=index, pixels=pixels)


def paint(frame_pixels, mask_bits, rgb):
    out = frame_pixels.copy()
    out[mask_bits] = rgb
    return out


def video_from_pixel_arrays(arrays, expression):
    frames = tuple(Frame(index=i + 1, pixels=a) for i, a in enumerate(arrays))
    return VideoSequence(frames=frames, expression=expression)


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

def oracle_components(bits):
    """4-connected components by BFS; returns list of pixel-index sets."""
    h, w = bits.shape
    seen = np.zeros_like(bits, dtype=bool)
    components = []
    for y in range(h):
        for x in range(w):
            if bits[y, x] and not seen[y, x]:
                stack = [(y, x)]
                seen[y, x] = True
                comp = []
                while stack:
                    cy, cx = stack.pop()
                    comp.append((cy, cx))
                    for ny, nx in ((cy - 1, cx), (cy + 1, cx), (cy, cx - 1), (cy, cx + 1)):
                        if 0 <= ny < h and 0 <= nx < w and bits[ny, nx] and not seen[ny, nx]:
                            seen[ny, nx] = True
                            stack.append((ny, nx))
                components.append(comp)
    return components


def oracle_boundary(bits):
    """Boundary pixels by explicit neighbor checks (border = background)."""
    h, w = bits.shape
    out = np.zeros_like(bits, dtype=bool)
    for y in range(h):
        for x in range(w):
            if not bits[y, x]:
                continue
            for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
                if not (0 <= ny < h and 0 <= nx < w) or not bits[ny, nx]:
                    out[y, x] = True
                    break
    return out


def oracle_boundary_f(pred_bits, gt_bits, radius):
    """All-pairs boundary matching F-measure."""
    pb = oracle_boundary(pred_bits)
    gb = oracle_boundary(gt_bits)
    p_pts = np.argwhere(pb)
    g_pts = np.argwhere(gb)
    if len(p_pts) == 0 and len(g_pts) == 0:
        return 1.0
    if len(p_pts) == 0 or len(g_pts) == 0:
        return 0.0
    r2 = radius * radius

    def hits(points, targets):
        count = 0
        for p in points:
            d2 = ((targets - p) ** 2).sum(axis=1)
            if d2.min() <= r2:
                count += 1
        return count

    precision = hits(p_pts, g_pts) / len(p_pts)
    recall = hits(g_pts, p_pts) / len(g_pts)
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def oracle_bilinear(soft, width, height, stride=4):
    """Per-pixel bilinear sampling with cell anchors at stride*i + 1.5."""
    gh, gw = soft.shape
    out = np.zeros((height, width))
    for y in range(height):
        for x in range(width):
            u = min(max((x - 1.5) / stride, 0.0), gw - 1.0)
            v = min(max((y - 1.5) / stride, 0.0), gh - 1.0)
            u0, v0 = int(np.floor(u)), int(np.floor(v))
            u1, v1 = min(u0 + 1, gw - 1), min(v0 + 1, gh - 1)
            fu, fv = u - u0, v - v0
            out[y, x] = (
                soft[v0, u0] * (1 - fv) * (1 - fu)
                + soft[v0, u1] * (1 - fv) * fu
                + soft[v1, u0] * fv * (1 - fu)
                + soft[v1, u1] * fv * fu
            )
    return out


def iou(a: BinaryMask, b: BinaryMask) -> float:
    union = np.logical_or(a.bits, b.bits).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(a.bits, b.bits).sum() / union)


@pytest.fixture
def rng():
    return np.random.RandomState(20250810)
