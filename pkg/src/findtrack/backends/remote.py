"""Client for remote segmentation/alignment backends.

Wire protocol: newline-delimited JSON over a byte stream, either the
standard I/O of a child process (`stdio:<command>`) or a TCP connection
(`tcp:<host>:<port>`). Requests carry monotonically increasing ids and are
answered in order; the session serializes calls, so callers wanting
parallel segmentation open multiple sessions.

Messages:
    {"id":0,"op":"hello"}                                -> {"id":0,"embed_dim":D}
    {"id":n,"op":"segment","frame":F,"text":S}           -> {"id":n,"mask":RLE,"confidence":c}
    {"id":n,"op":"embed_masked","frame":F,"mask":RLE}    -> {"id":n,"embedding":[...]}
    {"id":n,"op":"embed_text","text":S}                  -> {"id":n,"embedding":[...]}
    error replies: {"id":n,"error":code,"message":text}

where F = {"w":W,"h":H,"rgb_b64":base64(row-major RGB bytes)} and RLE =
{"size":[H,W],"counts":[...]} with the package's row-major zero-first
convention. Replies violating the schema or the value contracts (counts
summing wrong, confidence outside [0,1], embedding dimension drift) raise
ProtocolError rather than propagating bad data into the pipeline.
"""

from __future__ import annotations

import base64
import json
import queue
import shlex
import socket
import subprocess
import threading

import numpy as np

from ..errors import (
    BackendError,
    BackendTimeout,
    FindTrackError,
    HandshakeFailure,
    ProtocolError,
    UnknownBackend,
)
from ..rle import RleMask, rle_decode, rle_encode
from ..types import BinaryMask, Frame
from .base import AlignerPort, Embedding, SegmentationResult, SegmenterPort

DEFAULT_TIMEOUT = 30.0


def _frame_payload(frame: Frame) -> dict:
    return {
        "w": frame.width,
        "h": frame.height,
        "rgb_b64": base64.b64encode(frame.pixels.tobytes()).decode("ascii"),
    }


class _LineChannel:
    """Background reader over a binary stream pair, with per-read timeouts."""

    def __init__(self, reader, writer, on_close):
        self._reader = reader
        self._writer = writer
        self._on_close = on_close
        self._lines: queue.Queue = queue.Queue()
        self._thread = threading.Thread(target=self._pump, daemon=True)
        self._thread.start()

    def _pump(self):
        try:
            for line in self._reader:
                self._lines.put(line)
        except (OSError, ValueError):
            pass
        self._lines.put(None)

    def send_line(self, data: bytes) -> None:
        try:
            self._writer.write(data + b"\n")
            self._writer.flush()
        except (OSError, ValueError) as e:
            raise ProtocolError(f"backend connection lost while sending: {e}") from e

    def recv_line(self, timeout: float) -> bytes:
        try:
            line = self._lines.get(timeout=timeout)
        except queue.Empty:
            raise BackendTimeout(f"no reply within {timeout} s") from None
        if line is None:
            raise ProtocolError("backend closed the connection")
        return line

    def close(self):
        try:
            self._writer.close()
        except (OSError, ValueError):
            pass
        try:
            self._reader.close()
        except (OSError, ValueError):
            pass
        if self._on_close is not None:
            self._on_close()


def _open_channel(selector: str, timeout: float) -> _LineChannel:
    if selector.startswith("stdio:"):
        command = selector[len("stdio:"):].strip()
        if not command:
            raise UnknownBackend("stdio: selector needs a command")
        proc = subprocess.Popen(
            shlex.split(command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=None,
        )

        def stop():
            proc.terminate()
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()

        return _LineChannel(proc.stdout, proc.stdin, stop)
    if selector.startswith("tcp:"):
        rest = selector[len("tcp:"):]
        host, sep, port = rest.rpartition(":")
        if not sep or not port.isdigit():
            raise UnknownBackend(f"tcp selector must be tcp:<host>:<port>, got {selector!r}")
        sock = socket.create_connection((host, int(port)), timeout=timeout)
        sock.settimeout(None)
        reader = sock.makefile("rb")
        writer = sock.makefile("wb")
        return _LineChannel(reader, writer, sock.close)
    raise UnknownBackend(f"selector must start with stdio: or tcp:, got {selector!r}")


class RemoteBackend(SegmenterPort, AlignerPort):
    """One protocol session exposing both ports. Thread-safe; calls serialize."""

    def __init__(self, channel: _LineChannel, timeout: float = DEFAULT_TIMEOUT):
        self._channel = channel
        self._timeout = timeout
        self._lock = threading.Lock()
        self._next_id = 0
        self.embed_dim = self._handshake()

    @classmethod
    def connect(cls, selector: str, timeout: float = DEFAULT_TIMEOUT) -> "RemoteBackend":
        return cls(_open_channel(selector, timeout), timeout=timeout)

    def _handshake(self) -> int:
        try:
            reply = self._call({"op": "hello"})
        except BackendError as e:
            raise HandshakeFailure(f"hello failed: {e}") from e
        dim = reply.get("embed_dim")
        if not isinstance(dim, int) or dim < 1:
            raise HandshakeFailure(f"hello reply must carry a positive embed_dim, got {reply}")
        return dim

    def _call(self, payload: dict) -> dict:
        with self._lock:
            request_id = self._next_id
            self._next_id += 1
            message = dict(payload)
            message["id"] = request_id
            self._channel.send_line(json.dumps(message).encode("utf-8"))
            line = self._channel.recv_line(self._timeout)
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as e:
            raise ProtocolError(f"reply is not valid JSON: {e}") from e
        if not isinstance(reply, dict):
            raise ProtocolError(f"reply must be a JSON object, got {type(reply).__name__}")
        if reply.get("id") != request_id:
            raise ProtocolError(f"reply id {reply.get('id')!r} does not match request {request_id}")
        if "error" in reply:
            raise BackendError(f"{reply.get('error')}: {reply.get('message', '')}")
        return reply

    def segment(self, frame: Frame, text: str) -> SegmentationResult:
        reply = self._call({"op": "segment", "frame": _frame_payload(frame), "text": text})
        mask_obj = reply.get("mask")
        if not isinstance(mask_obj, dict):
            raise ProtocolError(f"segment reply missing mask object: {reply}")
        try:
            rle = RleMask.from_json_obj(mask_obj)
            mask = rle_decode(rle)
        except FindTrackError as e:
            raise ProtocolError(f"segment reply mask invalid: {e}") from e
        if mask.width != frame.width or mask.height != frame.height:
            raise ProtocolError(
                f"segment reply mask is {mask.width}x{mask.height}, frame is "
                f"{frame.width}x{frame.height}"
            )
        confidence = reply.get("confidence")
        if not isinstance(confidence, (int, float)) or not 0.0 <= float(confidence) <= 1.0:
            raise ProtocolError(f"segment reply confidence must be in [0,1], got {confidence!r}")
        return SegmentationResult(mask, float(confidence))

    def embed_masked_image(self, frame: Frame, mask: BinaryMask) -> Embedding:
        reply = self._call({
            "op": "embed_masked",
            "frame": _frame_payload(frame),
            "mask": rle_encode(mask).to_json_obj(),
        })
        return self._embedding_from(reply)

    def embed_text(self, text: str) -> Embedding:
        reply = self._call({"op": "embed_text", "text": text})
        return self._embedding_from(reply)

    def _embedding_from(self, reply: dict) -> Embedding:
        values = reply.get("embedding")
        if not isinstance(values, list) or len(values) != self.embed_dim:
            raise ProtocolError(
                f"embedding must be a list of {self.embed_dim} numbers, got "
                f"{type(values).__name__} of length {len(values) if isinstance(values, list) else 'n/a'}"
            )
        arr = np.asarray(values, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise ProtocolError("embedding contains non-finite values")
        return Embedding(arr)

    def close(self):
        self._channel.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
