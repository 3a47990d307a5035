"""Run-length codec for the wire protocol's mask documents.

Convention (shared with the pipeline side): row-major scan, alternating run
lengths starting with a background run that may be 0, counts summing to
width*height. Document form: {"size": [H, W], "counts": [...]}.
"""

from __future__ import annotations

import numpy as np


def encode(bits: np.ndarray) -> dict:
    """Encode an (H, W) boolean array into an RLE document."""
    h, w = bits.shape
    flat = bits.ravel()
    change = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    edges = np.concatenate(([0], change, [flat.size]))
    counts = np.diff(edges).tolist()
    if flat.size and flat[0]:
        counts.insert(0, 0)
    return {"size": [int(h), int(w)], "counts": [int(c) for c in counts]}


def decode(doc: dict) -> np.ndarray:
    """Decode an RLE document into an (H, W) boolean array."""
    h, w = (int(v) for v in doc["size"])
    counts = doc["counts"]
    if sum(counts) != w * h:
        raise ValueError(f"counts sum to {sum(counts)}, expected {w * h}")
    flat = np.zeros(w * h, dtype=bool)
    pos = 0
    value = False
    for count in counts:
        if value:
            flat[pos:pos + count] = True
        pos += count
        value = not value
    return flat.reshape(h, w)


def validate(doc: dict) -> bool:
    """True when the document is structurally sound and the counts add up."""
    try:
        h, w = (int(v) for v in doc["size"])
        counts = doc["counts"]
    except (KeyError, TypeError, ValueError):
        return False
    if h < 1 or w < 1 or not isinstance(counts, list) or not counts:
        return False
    if any((not isinstance(c, int)) or c < 0 for c in counts):
        return False
    return sum(counts) == w * h
