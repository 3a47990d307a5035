"""Segmentation and alignment backends.

`resolve_backend` turns a selector string into a (segmenter, aligner) pair:

    builtin:color        the deterministic synthetic pair (default)
    stdio:<command>      child process speaking the wire protocol
    tcp:<host>:<port>    TCP service speaking the wire protocol
"""

from __future__ import annotations

from ..errors import UnknownBackend
from .base import AlignerPort, Embedding, SegmentationResult, SegmenterPort
from .remote import RemoteBackend
from .synthetic import (
    ColorSegmenter,
    HistogramAligner,
    color_segment,
    histogram_embed_masked,
    text_embed,
)

__all__ = [
    "AlignerPort",
    "ColorSegmenter",
    "Embedding",
    "HistogramAligner",
    "RemoteBackend",
    "SegmentationResult",
    "SegmenterPort",
    "color_segment",
    "histogram_embed_masked",
    "resolve_backend",
    "text_embed",
]


def resolve_backend(selector: str, timeout: float | None = None):
    """Return (segmenter, aligner) for a selector string."""
    if selector == "builtin:color":
        return ColorSegmenter(), HistogramAligner()
    if selector.startswith(("stdio:", "tcp:")):
        kwargs = {} if timeout is None else {"timeout": timeout}
        backend = RemoteBackend.connect(selector, **kwargs)
        return backend, backend
    raise UnknownBackend(f"unknown backend selector {selector!r}")
