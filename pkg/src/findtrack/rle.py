"""Run-length codec for binary masks.

Convention: the mask is scanned row-major and encoded as alternating run
lengths starting with a background (zero) run, which may be 0 when the very
first cell is foreground. Counts always sum to width*height. Note this is
row-major, unlike the column-major convention some annotation tools use, so
adapters must convert rather than pass counts through.

The JSON document form is ``{"size": [H, W], "counts": [...]}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CountMismatch, FindTrackError
from .types import BinaryMask


@dataclass(frozen=True)
class RleMask:
    """Run-length encoded mask; `size` is (height, width)."""

    size: tuple[int, int]
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "size", (int(self.size[0]), int(self.size[1])))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    def to_json_obj(self) -> dict:
        return {"size": [self.size[0], self.size[1]], "counts": list(self.counts)}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RleMask":
        try:
            size = obj["size"]
            counts = obj["counts"]
        except (KeyError, TypeError) as e:
            raise FindTrackError(f"malformed RLE document: {e}") from e
        if len(size) != 2:
            raise FindTrackError(f"RLE size must be [H, W], got {size}")
        return cls((size[0], size[1]), counts)


def rle_encode(mask: BinaryMask) -> RleMask:
    """Encode a mask as alternating zero/one run lengths, zero run first."""
    flat = mask.bits.ravel()
    # Boundaries where the run value changes; prepend 0 so the first run is
    # measured from the start of the scan.
    change = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    edges = np.concatenate(([0], change, [flat.size]))
    counts = np.diff(edges).tolist()
    if flat[0]:
        counts.insert(0, 0)
    return RleMask((mask.height, mask.width), counts)


def rle_decode(rle: RleMask) -> BinaryMask:
    """Inverse of rle_encode; raises CountMismatch if the counts are inconsistent."""
    h, w = rle.size
    total = sum(rle.counts)
    if total != w * h:
        raise CountMismatch(f"counts sum to {total}, expected {w * h} for {w}x{h}")
    if any(c < 0 for c in rle.counts):
        raise CountMismatch("negative run length")
    flat = np.zeros(w * h, dtype=bool)
    pos = 0
    value = False
    for count in rle.counts:
        if value:
            flat[pos:pos + count] = True
        pos += count
        value = not value
    return BinaryMask(flat.reshape(h, w))
