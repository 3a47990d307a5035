"""The serving side of the wire protocol.

Newline-delimited JSON requests arrive on a byte stream; each is answered
in order with a reply carrying the same id. A malformed line or a failing
handler produces a structured error reply and the loop continues; nothing a
client sends can kill the stream short of closing it. Every segment reply
is self-checked (RLE counts summing to the frame area) before it is sent.

Requests:
    {"id":0,"op":"hello"}
    {"id":n,"op":"segment","frame":{"w":W,"h":H,"rgb_b64":...},"text":...}
    {"id":n,"op":"embed_masked","frame":{...},"mask":{"size":[H,W],"counts":[...]}}
    {"id":n,"op":"embed_text","text":...}
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass

import numpy as np

from . import rlecodec


@dataclass
class AdapterConfig:
    segmenter_id: str = "stub"
    aligner_id: str = "stub"
    device: str = "cpu"


class RequestError(Exception):
    """Client-visible failure for one request; carries the error code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def decode_frame(payload) -> np.ndarray:
    """Wire frame object -> (H, W, 3) uint8 array."""
    try:
        width = int(payload["w"])
        height = int(payload["h"])
        raw = base64.b64decode(payload["rgb_b64"], validate=True)
    except (KeyError, TypeError, ValueError) as e:
        raise RequestError("bad_request", f"malformed frame payload: {e}") from e
    if width < 1 or height < 1:
        raise RequestError("bad_request", f"frame dimensions {width}x{height} invalid")
    if len(raw) != width * height * 3:
        raise RequestError(
            "bad_request",
            f"frame payload has {len(raw)} bytes, expected {width * height * 3}",
        )
    return np.frombuffer(raw, dtype=np.uint8).reshape(height, width, 3)


def decode_mask(payload) -> np.ndarray:
    if not isinstance(payload, dict) or not rlecodec.validate(payload):
        raise RequestError("bad_request", "malformed mask RLE document")
    return rlecodec.decode(payload)


class ProtocolServer:
    """Dispatches protocol requests to a segmenter/aligner model pair.

    The models are duck-typed: the segmenter needs segment(rgb, text) ->
    (bool mask, confidence), the aligner needs embed_dim, embed_image(rgb,
    mask) -> vector, and embed_text(text) -> vector.
    """

    def __init__(self, segmenter, aligner):
        self.segmenter = segmenter
        self.aligner = aligner

    def handle_line(self, line: bytes) -> bytes:
        try:
            request = json.loads(line)
        except json.JSONDecodeError as e:
            return self._encode({"id": None, "error": "bad_request",
                                 "message": f"invalid JSON: {e}"})
        if not isinstance(request, dict):
            return self._encode({"id": None, "error": "bad_request",
                                 "message": "request must be a JSON object"})
        request_id = request.get("id")
        try:
            reply = self._dispatch(request)
        except RequestError as e:
            return self._encode({"id": request_id, "error": e.code, "message": str(e)})
        except Exception as e:  # a model blew up; keep the stream alive
            return self._encode({"id": request_id, "error": "internal_error",
                                 "message": f"{type(e).__name__}: {e}"})
        reply["id"] = request_id
        return self._encode(reply)

    def _dispatch(self, request: dict) -> dict:
        op = request.get("op")
        if op == "hello":
            return {"embed_dim": int(self.aligner.embed_dim)}
        if op == "segment":
            rgb = decode_frame(request.get("frame") or {})
            text = request.get("text")
            if not isinstance(text, str) or not text:
                raise RequestError("bad_request", "segment needs a non-empty text field")
            bits, confidence = self.segmenter.segment(rgb, text)
            bits = np.asarray(bits, dtype=bool)
            if bits.shape != rgb.shape[:2]:
                raise RequestError("internal_error",
                                   f"segmenter produced {bits.shape}, frame is {rgb.shape[:2]}")
            doc = rlecodec.encode(bits)
            if not rlecodec.validate(doc):
                raise RequestError("internal_error", "mask failed self-validation")
            confidence = min(1.0, max(0.0, float(confidence)))
            return {"mask": doc, "confidence": confidence}
        if op == "embed_masked":
            rgb = decode_frame(request.get("frame") or {})
            mask = decode_mask(request.get("mask"))
            if mask.shape != rgb.shape[:2]:
                raise RequestError("bad_request",
                                   f"mask is {mask.shape}, frame is {rgb.shape[:2]}")
            return {"embedding": self._vector(self.aligner.embed_image(rgb, mask))}
        if op == "embed_text":
            text = request.get("text")
            if not isinstance(text, str) or not text:
                raise RequestError("bad_request", "embed_text needs a non-empty text field")
            return {"embedding": self._vector(self.aligner.embed_text(text))}
        raise RequestError("bad_request", f"unknown op {op!r}")

    def _vector(self, values) -> list:
        arr = np.asarray(values, dtype=np.float64).ravel()
        if arr.size != self.aligner.embed_dim or not np.all(np.isfinite(arr)):
            raise RequestError("internal_error", "embedding failed self-validation")
        return [float(v) for v in arr]

    @staticmethod
    def _encode(reply: dict) -> bytes:
        return json.dumps(reply).encode("utf-8") + b"\n"


def serve_stream(server: ProtocolServer, reader, writer) -> None:
    """Answer requests until the reader reaches end of stream."""
    for line in reader:
        if not line.strip():
            continue
        writer.write(server.handle_line(line))
        writer.flush()
