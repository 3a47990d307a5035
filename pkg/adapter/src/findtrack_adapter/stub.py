"""Deterministic fixed-function models for integration testing.

No weights, no network: segmentation is always a centered rectangle
covering a quarter of the frame at confidence 0.75, and embeddings are
SHA-256 expansions of the canonical input bytes, so identical inputs give
identical vectors.
"""

from __future__ import annotations

import hashlib

import numpy as np

STUB_EMBED_DIM = 512
STUB_CONFIDENCE = 0.75


def centered_square(height: int, width: int) -> np.ndarray:
    bits = np.zeros((height, width), dtype=bool)
    bits[height // 4:height // 4 + height // 2, width // 4:width // 4 + width // 2] = True
    return bits


def _hash_vector(payload: bytes, dim: int = STUB_EMBED_DIM) -> np.ndarray:
    blocks = []
    counter = 0
    while sum(len(b) for b in blocks) < dim:
        blocks.append(hashlib.sha256(payload + counter.to_bytes(4, "big")).digest())
        counter += 1
    raw = b"".join(blocks)[:dim]
    return np.frombuffer(raw, dtype=np.uint8).astype(np.float64) / 255.0


class StubSegmenter:
    def segment(self, rgb: np.ndarray, text: str):
        h, w = rgb.shape[:2]
        return centered_square(h, w), STUB_CONFIDENCE


class StubAligner:
    embed_dim = STUB_EMBED_DIM

    def embed_image(self, rgb: np.ndarray, mask: np.ndarray) -> np.ndarray:
        payload = (
            rgb.shape[1].to_bytes(4, "big")
            + rgb.shape[0].to_bytes(4, "big")
            + rgb.tobytes()
            + np.packbits(mask).tobytes()
        )
        return _hash_vector(payload)

    def embed_text(self, text: str) -> np.ndarray:
        return _hash_vector(text.encode("utf-8"))
