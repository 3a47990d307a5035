"""Built-in deterministic backends over the synthetic grammar.

The segmenter matches pixels by RGB distance to the named color and keeps
the largest 4-connected component. Its confidence is the kept component's
share of all matched pixels: 1.0 when the named color appears as a single
blob, lower when occlusion splits the object or a similarly colored region
competes with it.

The aligner embeds a masked region as a 125-bin joint RGB histogram plus a
3-value shape descriptor (128 dims total). Text embeds as the same
descriptor computed on an ideal rendered prototype of the named shape, so
alignment is high exactly when the masked region looks like what the
expression says. All constants below are fixed, not configurable; golden
values in tests depend on them.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .. import raster
from ..errors import EmptyMask
from ..grammar import COLORS, parse_expression
from ..maskops import boundary, largest_component
from ..types import BinaryMask, Frame, require_same_shape
from .base import AlignerPort, Embedding, SegmentationResult, SegmenterPort

COLOR_DISTANCE = 60.0          # Euclidean RGB match radius
HISTOGRAM_BINS = 5             # per channel; 125 joint bins
EMBED_DIM = HISTOGRAM_BINS ** 3 + 3
PROTOTYPE_CANVAS = 64          # prototype shapes render at 64x64
_PROTOTYPE_CENTER = (PROTOTYPE_CANVAS - 1) / 2.0
_PROTOTYPE_SIZES = {"circle": 24.0, "square": 23.5, "triangle": 23.5}


def color_segment(frame: Frame, text: str) -> SegmentationResult:
    """Segment the region whose color the expression names."""
    color, _shape = parse_expression(text)
    target = np.array(COLORS[color], dtype=np.float64)
    diff = frame.pixels.astype(np.float64) - target
    matched = (diff * diff).sum(axis=2) <= COLOR_DISTANCE ** 2
    total = int(matched.sum())
    if total == 0:
        return SegmentationResult(BinaryMask.empty(frame.width, frame.height), 0.0)
    component = largest_component(matched)
    confidence = float(component.sum()) / float(total)
    return SegmentationResult(BinaryMask(component), confidence)


def _shape_descriptor(bits: np.ndarray) -> np.ndarray:
    ys, xs = np.nonzero(bits)
    area = xs.size
    box_w = int(xs.max() - xs.min() + 1)
    box_h = int(ys.max() - ys.min() + 1)
    fill = area / (box_w * box_h)
    aspect = min(max(box_w / box_h, 0.0), 4.0) / 4.0
    perimeter = int(boundary(bits).sum())
    circularity = perimeter * perimeter / (4.0 * math.pi * area)
    return np.array([fill, aspect, circularity], dtype=np.float64)


def histogram_embed_masked(frame: Frame, mask: BinaryMask) -> Embedding:
    """Embed the masked region: joint RGB histogram (125) + shape descriptor (3)."""
    require_same_shape(frame, mask, "embed_masked_image")
    if mask.is_empty():
        raise EmptyMask("cannot embed an empty mask")
    pixels = frame.pixels[mask.bits].astype(np.int64)
    bins = pixels * HISTOGRAM_BINS // 256
    index = (bins[:, 0] * HISTOGRAM_BINS + bins[:, 1]) * HISTOGRAM_BINS + bins[:, 2]
    hist = np.bincount(index, minlength=HISTOGRAM_BINS ** 3).astype(np.float64)
    hist /= hist.sum()
    return Embedding(np.concatenate([hist, _shape_descriptor(mask.bits)]))


@lru_cache(maxsize=None)
def _prototype_embedding(color: str, shape: str) -> Embedding:
    bits = raster.shape_mask(
        shape, PROTOTYPE_CANVAS, PROTOTYPE_CANVAS,
        _PROTOTYPE_CENTER, _PROTOTYPE_CENTER, _PROTOTYPE_SIZES[shape],
    )
    pixels = np.zeros((PROTOTYPE_CANVAS, PROTOTYPE_CANVAS, 3), dtype=np.uint8)
    pixels[bits] = COLORS[color]
    return histogram_embed_masked(Frame(index=1, pixels=pixels), BinaryMask(bits))


def text_embed(text: str) -> Embedding:
    """Embed an expression as its rendered prototype's embedding."""
    color, shape = parse_expression(text)
    if shape == "any":
        stack = [_prototype_embedding(color, s).values for s in ("circle", "square", "triangle")]
        return Embedding(np.mean(stack, axis=0))
    return _prototype_embedding(color, shape)


class ColorSegmenter(SegmenterPort):
    def segment(self, frame: Frame, text: str) -> SegmentationResult:
        return color_segment(frame, text)


class HistogramAligner(AlignerPort):
    embed_dim = EMBED_DIM

    def embed_masked_image(self, frame: Frame, mask: BinaryMask) -> Embedding:
        return histogram_embed_masked(frame, mask)

    def embed_text(self, text: str) -> Embedding:
        return text_embed(text)
