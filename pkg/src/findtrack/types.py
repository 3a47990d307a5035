"""Core domain types.

All types here are immutable after construction: array payloads are copied
and marked read-only, so instances can be shared freely between threads.
Validation happens at construction time and raises errors from
:mod:`findtrack.errors`, never later.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionMismatch, FindTrackError, LengthMismatch


def _frozen_array(data, dtype) -> np.ndarray:
    arr = np.array(data, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Frame:
    """One RGB video frame. `pixels` is (height, width, 3) uint8, row-major."""

    index: int
    pixels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pixels", _frozen_array(self.pixels, np.uint8))
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise FindTrackError(f"frame pixels must be (H, W, 3), got {self.pixels.shape}")
        if self.width < 1 or self.height < 1:
            raise FindTrackError("frame dimensions must be at least 1x1")
        if self.index < 1:
            raise FindTrackError(f"frame index must be 1-based, got {self.index}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.index == other.index and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """A boolean raster. `bits` is (height, width), row-major."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", _frozen_array(self.bits, bool))
        if self.bits.ndim != 2:
            raise FindTrackError(f"mask bits must be 2-D, got shape {self.bits.shape}")
        if self.width < 1 or self.height < 1:
            raise FindTrackError("mask dimensions must be at least 1x1")

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def area(self) -> int:
        return int(self.bits.sum())

    def is_empty(self) -> bool:
        return not self.bits.any()

    def __eq__(self, other):
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    @classmethod
    def empty(cls, width: int, height: int) -> "BinaryMask":
        return cls(np.zeros((height, width), dtype=bool))

    @classmethod
    def full(cls, width: int, height: int) -> "BinaryMask":
        return cls(np.ones((height, width), dtype=bool))


def require_same_shape(a, b, context: str = "") -> None:
    """Raise DimensionMismatch unless two frames/masks agree in width/height."""
    if a.width != b.width or a.height != b.height:
        where = f" ({context})" if context else ""
        raise DimensionMismatch(
            f"{a.width}x{a.height} vs {b.width}x{b.height}{where}"
        )


@dataclass(frozen=True)
class VideoSequence:
    """Ordered frames plus the language expression naming the target object."""

    frames: tuple[Frame, ...]
    expression: str

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        if not self.frames:
            raise FindTrackError("video must contain at least one frame")
        if not self.expression:
            raise FindTrackError("expression must be non-empty")
        first = self.frames[0]
        for t, frame in enumerate(self.frames, start=1):
            if frame.index != t:
                raise FindTrackError(
                    f"frame indices must run 1..T consecutively; position {t} has index {frame.index}"
                )
            require_same_shape(first, frame, f"frame {t}")

    @property
    def num_frames(self) -> int:
        return len(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height


@dataclass(frozen=True)
class ScoredMask:
    """A candidate segmentation with its confidence, alignment, and combined score."""

    frame_index: int
    mask: BinaryMask
    confidence: float
    alignment: float
    score: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise FindTrackError(f"confidence must be in [0,1], got {self.confidence}")
        if not -1.0 <= self.alignment <= 1.0:
            raise FindTrackError(f"alignment must be in [-1,1], got {self.alignment}")


@dataclass(frozen=True)
class MaskSequence:
    """One mask per frame, aligned with a video's 1..T indices."""

    masks: tuple[BinaryMask, ...]

    def __post_init__(self):
        object.__setattr__(self, "masks", tuple(self.masks))
        if not self.masks:
            raise FindTrackError("mask sequence must contain at least one mask")
        first = self.masks[0]
        for t, mask in enumerate(self.masks, start=1):
            require_same_shape(first, mask, f"mask {t}")

    def __len__(self) -> int:
        return len(self.masks)

    def __getitem__(self, i):
        return self.masks[i]

    def check_matches(self, video: VideoSequence) -> None:
        if len(self.masks) != video.num_frames:
            raise LengthMismatch(f"{len(self.masks)} masks for {video.num_frames} frames")
        require_same_shape(self.masks[0], video.frames[0], "masks vs video")


@dataclass(frozen=True)
class PipelineConfig:
    """Inference-time knobs; defaults are the representative configuration."""

    num_candidates: int = 5
    w1: float = 0.5
    w2: float = 0.5
    memory_interval: int = 3
    long_term_enabled: bool = False
    backend: str = "builtin:color"

    def __post_init__(self):
        if self.num_candidates < 1:
            raise ConfigError(f"num_candidates must be >= 1, got {self.num_candidates}")
        if self.w1 < 0 or self.w2 < 0:
            raise ConfigError("score weights must be non-negative")
        if self.w1 + self.w2 <= 0:
            raise ConfigError("at least one score weight must be positive")
        if self.memory_interval < 1:
            raise ConfigError(f"memory_interval must be >= 1, got {self.memory_interval}")

    def to_dict(self) -> dict:
        return {
            "num_candidates": self.num_candidates,
            "w1": self.w1,
            "w2": self.w2,
            "memory_interval": self.memory_interval,
            "long_term_enabled": self.long_term_enabled,
            "backend": self.backend,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        return cls(**{k: d[k] for k in (
            "num_candidates", "w1", "w2", "memory_interval", "long_term_enabled", "backend",
        ) if k in d})
