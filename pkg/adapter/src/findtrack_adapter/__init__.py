"""Model adapter for the findtrack wire protocol.

Exposes referring-segmentation and vision-text-alignment models (real or
stubbed) as a newline-delimited JSON service over standard I/O or TCP,
suitable for the pipeline's `stdio:` and `tcp:` backend selectors.
"""

from .protocol import AdapterConfig, ProtocolServer, serve_stream
from .stub import StubAligner, StubSegmenter

__version__ = "0.1.0"

__all__ = [
    "AdapterConfig",
    "ProtocolServer",
    "StubAligner",
    "StubSegmenter",
    "serve_stream",
]
