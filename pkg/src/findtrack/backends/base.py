"""Backend contracts for per-frame segmentation and vision-text alignment.

Both ports must be deterministic for identical inputs within a session, and
segment() calls on distinct frames must be independent (no hidden
cross-frame state). Implementations are the built-in synthetic pair and the
remote wire-protocol client.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..errors import FindTrackError
from ..types import BinaryMask, Frame


@dataclass(frozen=True)
class SegmentationResult:
    """A predicted mask plus the segmenter's own quality estimate in [0, 1]."""

    mask: BinaryMask
    confidence: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise FindTrackError(f"confidence must be in [0,1], got {self.confidence}")


@dataclass(frozen=True, eq=False)
class Embedding:
    """A fixed-length real vector; dimension is constant per backend session."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if arr.ndim != 1 or arr.size < 1:
            raise FindTrackError(f"embedding must be a non-empty vector, got shape {arr.shape}")

    @property
    def dim(self) -> int:
        return int(self.values.size)

    def __eq__(self, other):
        if not isinstance(other, Embedding):
            return NotImplemented
        return np.array_equal(self.values, other.values)


class SegmenterPort(ABC):
    """Per-frame referring segmentation."""

    @abstractmethod
    def segment(self, frame: Frame, text: str) -> SegmentationResult:
        ...


class AlignerPort(ABC):
    """Embeddings for masked image regions and for expressions."""

    @abstractmethod
    def embed_masked_image(self, frame: Frame, mask: BinaryMask) -> Embedding:
        ...

    @abstractmethod
    def embed_text(self, text: str) -> Embedding:
        ...
