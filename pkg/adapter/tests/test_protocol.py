import base64
import json

import numpy as np
import pytest

from findtrack_adapter import rlecodec
from findtrack_adapter.models import AlignerModel, SegmenterModel, masked_crop
from findtrack_adapter.protocol import ProtocolServer
from findtrack_adapter.stub import STUB_CONFIDENCE, STUB_EMBED_DIM, StubAligner, StubSegmenter


def _server():
    return ProtocolServer(StubSegmenter(), StubAligner())


def _ask(server, request):
    return json.loads(server.handle_line(json.dumps(request).encode()))


def _frame_payload(width, height, value=0):
    raw = bytes([value]) * (width * height * 3)
    return {"w": width, "h": height, "rgb_b64": base64.b64encode(raw).decode()}


def test_hello_reports_embed_dim():
    reply = _ask(_server(), {"id": 0, "op": "hello"})
    assert reply == {"embed_dim": STUB_EMBED_DIM, "id": 0}


def test_segment_returns_centered_square():
    reply = _ask(_server(), {"id": 1, "op": "segment",
                             "frame": _frame_payload(8, 8), "text": "anything"})
    assert reply["id"] == 1
    assert reply["confidence"] == STUB_CONFIDENCE
    bits = rlecodec.decode(reply["mask"])
    expected = np.zeros((8, 8), dtype=bool)
    expected[2:6, 2:6] = True
    assert np.array_equal(bits, expected)
    assert bits.sum() == 8 * 8 // 4


def test_mask_counts_always_sum_to_area():
    server = _server()
    for w, h in ((1, 1), (2, 3), (7, 5), (16, 9)):
        reply = _ask(server, {"id": 5, "op": "segment",
                              "frame": _frame_payload(w, h), "text": "x"})
        assert sum(reply["mask"]["counts"]) == w * h
        assert reply["mask"]["size"] == [h, w]


def test_embeddings_deterministic():
    server = _server()
    a = _ask(server, {"id": 2, "op": "embed_text", "text": "the red square"})
    b = _ask(server, {"id": 3, "op": "embed_text", "text": "the red square"})
    c = _ask(server, {"id": 4, "op": "embed_text", "text": "the blue square"})
    assert a["embedding"] == b["embedding"]
    assert a["embedding"] != c["embedding"]
    assert len(a["embedding"]) == STUB_EMBED_DIM


def test_embed_masked_uses_frame_and_mask():
    server = _server()
    mask_doc = rlecodec.encode(np.ones((4, 4), dtype=bool))
    base = {"op": "embed_masked", "frame": _frame_payload(4, 4), "mask": mask_doc}
    a = _ask(server, {"id": 1, **base})
    b = _ask(server, {"id": 2, **base})
    assert a["embedding"] == b["embedding"]
    other = _ask(server, {"id": 3, "op": "embed_masked",
                          "frame": _frame_payload(4, 4, value=9), "mask": mask_doc})
    assert other["embedding"] != a["embedding"]


def test_malformed_json_keeps_stream_alive():
    server = _server()
    bad = json.loads(server.handle_line(b"this is not json\n"))
    assert bad["error"] == "bad_request"
    assert bad["id"] is None
    good = _ask(server, {"id": 9, "op": "hello"})
    assert good["embed_dim"] == STUB_EMBED_DIM


def test_unknown_op_is_bad_request():
    reply = _ask(_server(), {"id": 4, "op": "explode"})
    assert reply["error"] == "bad_request"
    assert reply["id"] == 4


def test_wrong_frame_byte_count_rejected():
    payload = _frame_payload(4, 4)
    payload["rgb_b64"] = base64.b64encode(b"abc").decode()
    reply = _ask(_server(), {"id": 6, "op": "segment", "frame": payload, "text": "x"})
    assert reply["error"] == "bad_request"


def test_bad_mask_rejected():
    reply = _ask(_server(), {
        "id": 7, "op": "embed_masked",
        "frame": _frame_payload(4, 4),
        "mask": {"size": [4, 4], "counts": [3]},
    })
    assert reply["error"] == "bad_request"


def test_model_exception_becomes_internal_error():
    class Boom:
        def segment(self, rgb, text):
            raise RuntimeError("cuda exploded")

    server = ProtocolServer(Boom(), StubAligner())
    reply = _ask(server, {"id": 8, "op": "segment",
                          "frame": _frame_payload(2, 2), "text": "x"})
    assert reply["error"] == "internal_error"
    assert "cuda exploded" in reply["message"]
    assert _ask(server, {"id": 9, "op": "hello"})["embed_dim"] == STUB_EMBED_DIM


def test_rle_round_trip(tmp_path):
    rng = np.random.RandomState(4)
    for _ in range(200):
        bits = rng.rand(rng.randint(1, 12), rng.randint(1, 12)) < 0.5
        doc = rlecodec.encode(bits)
        assert rlecodec.validate(doc)
        assert np.array_equal(rlecodec.decode(doc), bits)


# ---------------------------------------------------------------------------
# real-model wrapper harness (injected fakes, no weights)
# ---------------------------------------------------------------------------

def test_blank_image_segments_empty_with_low_confidence():
    model = SegmenterModel(lambda rgb, text: np.full(rgb.shape[:2], 0.02))
    bits, confidence = model.segment(np.zeros((6, 6, 3), dtype=np.uint8), "the red square")
    assert not bits.any()
    assert confidence <= 0.05


def test_confident_region_segments_and_clamps():
    prob = np.zeros((6, 6))
    prob[2:4, 2:4] = 0.9
    model = SegmenterModel(lambda rgb, text: prob)
    bits, confidence = model.segment(np.zeros((6, 6, 3), dtype=np.uint8), "x")
    assert bits.sum() == 4
    assert confidence == pytest.approx(0.9)


def test_masked_crop_suppresses_background():
    rgb = np.full((6, 6, 3), 200, dtype=np.uint8)
    mask = np.zeros((6, 6), dtype=bool)
    mask[1:3, 2:5] = True
    crop = masked_crop(rgb, mask)
    assert crop.shape == (2, 3, 3)
    assert np.all(crop == 200)


def test_aligner_wrapper_shapes():
    aligner = AlignerModel(4, lambda rgb: np.arange(4), lambda text: np.ones(4))
    assert aligner.embed_dim == 4
    mask = np.ones((2, 2), dtype=bool)
    assert aligner.embed_image(np.zeros((2, 2, 3), dtype=np.uint8), mask).shape == (4,)
    assert aligner.embed_text("x").tolist() == [1, 1, 1, 1]
