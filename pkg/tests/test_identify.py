import json

import numpy as np
import pytest

import findtrack as ft
from findtrack.backends import resolve_backend
from findtrack.backends.base import Embedding
from findtrack.errors import AllCandidatesEmpty, DimensionMismatch, ZeroNormEmbedding
from findtrack.identify import (
    CandidateSet,
    alignment_score,
    identify_target,
    mask_score,
    sample_candidates,
    select_key_frame,
)
from findtrack.types import BinaryMask, PipelineConfig, ScoredMask

from conftest import mask_from_rows


# ---------------------------------------------------------------------------
# candidate sampling
# ---------------------------------------------------------------------------

def test_sampling_30_of_5():
    assert sample_candidates(30, 5) == [1, 8, 15, 22, 30]


def test_sampling_100_of_5():
    assert sample_candidates(100, 5) == [1, 25, 50, 75, 100]


def test_sampling_dense_grid_is_identity():
    assert sample_candidates(10, 10) == list(range(1, 11))


def test_sampling_more_candidates_than_frames():
    assert sample_candidates(3, 5) == [1, 2, 3]


def test_sampling_single_candidate_is_middle():
    assert sample_candidates(30, 1) == [15]
    assert sample_candidates(31, 1) == [16]
    assert sample_candidates(1, 1) == [1]


def test_sampling_grid_properties():
    for num_frames in range(2, 80):
        for num_candidates in range(2, 20):
            out = sample_candidates(num_frames, num_candidates)
            assert out[0] == 1 and out[-1] == num_frames
            assert all(b > a for a, b in zip(out, out[1:]))
            assert all(1 <= j <= num_frames for j in out)
            assert len(out) == min(num_candidates, num_frames)


# ---------------------------------------------------------------------------
# scoring
# ---------------------------------------------------------------------------

def test_alignment_self_similarity():
    v = Embedding(np.array([0.2, -1.5, 3.0]))
    assert alignment_score(v, v) == pytest.approx(1.0, abs=1e-9)


def test_alignment_orthogonal():
    assert alignment_score(Embedding(np.array([1.0, 0.0])), Embedding(np.array([0.0, 2.0]))) == 0.0


def test_alignment_hand_value():
    # (3,4)·(4,3) / (5·5) = 24/25
    got = alignment_score(Embedding(np.array([3.0, 4.0])), Embedding(np.array([4.0, 3.0])))
    assert got == pytest.approx(0.96, abs=1e-12)


def test_alignment_errors():
    with pytest.raises(ZeroNormEmbedding):
        alignment_score(Embedding(np.zeros(3)), Embedding(np.ones(3)))
    with pytest.raises(DimensionMismatch):
        alignment_score(Embedding(np.ones(3)), Embedding(np.ones(4)))


def test_mask_score_arithmetic():
    assert mask_score(0.9, 0.5, 0.5, 0.5) == 0.7
    assert mask_score(0.8, -0.3, 0.5, 0.5) == 0.4  # negative alignment clamps to 0
    assert mask_score(0.6, 0.9, 1.0, 0.0) == 0.6   # confidence-only
    assert mask_score(0.6, 0.9, 0.0, 1.0) == pytest.approx(0.9)


def test_weight_extremes_rank_like_single_criterion(rng):
    rows = [
        ScoredMask(frame_index=j + 1, mask=BinaryMask.full(2, 2),
                   confidence=float(c), alignment=float(a),
                   score=0.0)
        for j, (c, a) in enumerate(zip(rng.rand(12), rng.rand(12) * 2 - 1))
    ]
    conf_only = [ScoredMask(s.frame_index, s.mask, s.confidence, s.alignment,
                            mask_score(s.confidence, s.alignment, 1.0, 0.0)) for s in rows]
    align_only = [ScoredMask(s.frame_index, s.mask, s.confidence, s.alignment,
                             mask_score(s.confidence, s.alignment, 0.0, 1.0)) for s in rows]
    by_conf = max(conf_only, key=lambda s: (s.score, -s.frame_index)).frame_index
    assert select_key_frame(CandidateSet(
        indices=tuple(s.frame_index for s in conf_only), scored=tuple(conf_only)
    )).key_frame == by_conf
    by_align = max(align_only, key=lambda s: (s.score, -s.frame_index)).frame_index
    assert select_key_frame(CandidateSet(
        indices=tuple(s.frame_index for s in align_only), scored=tuple(align_only)
    )).key_frame == by_align


def test_scaling_weights_preserves_selection(rng):
    for _ in range(50):
        confidences = rng.rand(5)
        alignments = rng.rand(5) * 2 - 1
        picked = []
        for c in (0.1, 1.0, 10.0):
            rows = tuple(
                ScoredMask(j + 1, BinaryMask.full(2, 2), float(pi), float(rho),
                           mask_score(float(pi), float(rho), 0.5 * c, 0.5 * c))
                for j, (pi, rho) in enumerate(zip(confidences, alignments))
            )
            result = select_key_frame(CandidateSet(indices=tuple(range(1, 6)), scored=rows))
            picked.append(result.key_frame)
        assert len(set(picked)) == 1


# ---------------------------------------------------------------------------
# selection
# ---------------------------------------------------------------------------

def _scored(frame, score, empty=False):
    mask = BinaryMask.empty(2, 2) if empty else BinaryMask.full(2, 2)
    return ScoredMask(frame, mask, 0.5, 0.0, score)


def test_argmax_selection():
    rows = (_scored(1, 0.3), _scored(15, 0.9), _scored(30, 0.5))
    result = select_key_frame(CandidateSet(indices=(1, 15, 30), scored=rows))
    assert result.key_frame == 15


def test_tie_breaks_to_lowest_index():
    rows = (_scored(1, 0.7), _scored(30, 0.7))
    assert select_key_frame(CandidateSet(indices=(1, 30), scored=rows)).key_frame == 1


def test_empty_winner_falls_back():
    rows = (_scored(1, 0.9, empty=True), _scored(15, 0.5), _scored(30, 0.2))
    assert select_key_frame(CandidateSet(indices=(1, 15, 30), scored=rows)).key_frame == 15


def test_all_empty_raises():
    rows = (_scored(1, 0.9, empty=True), _scored(30, 0.5, empty=True))
    with pytest.raises(AllCandidatesEmpty):
        select_key_frame(CandidateSet(indices=(1, 30), scored=rows))


# ---------------------------------------------------------------------------
# full identification on synthetic scenes
# ---------------------------------------------------------------------------

def test_static_scene_ties_break_to_first_candidate():
    scene = ft.generate(ft.scenario("static", 5))
    seg, ali = resolve_backend("builtin:color")
    result = identify_target(scene.video, PipelineConfig(), seg, ali)
    assert result.key_frame == 1
    assert result.key_mask == scene.gt.masks[0]


def test_enter_late_skips_absent_frames():
    seg, ali = resolve_backend("builtin:color")
    for seed in range(5):
        scene = ft.generate(ft.scenario("enter_late", seed))
        entry = scene.spec.objects[0].entry_frame
        result = identify_target(scene.video, PipelineConfig(), seg, ali)
        assert result.key_frame >= entry
        assert result.key_frame in (15, 22, 30)
        # brute-force: candidates before entry have zero score and empty masks
        for row in result.diagnostics:
            if row.frame_index < entry:
                assert row.mask.is_empty() and row.score == 0.0 and row.alignment == 0.0


def test_distractor_confidence_only_is_misled():
    seg, ali = resolve_backend("builtin:color")
    scene = ft.generate(ft.scenario("distractor", 0))
    balanced = identify_target(scene.video, PipelineConfig(w1=0.5, w2=0.5), seg, ali)
    conf_only = identify_target(scene.video, PipelineConfig(w1=1.0, w2=0.0), seg, ali)
    gt_at = scene.gt.masks
    def overlaps_target(result):
        gt = gt_at[result.key_frame - 1]
        inter = np.logical_and(result.key_mask.bits, gt.bits).sum()
        union = np.logical_or(result.key_mask.bits, gt.bits).sum()
        return union > 0 and inter / union >= 0.5
    assert overlaps_target(balanced)
    assert not overlaps_target(conf_only)
    # the misleading frame has the higher raw confidence
    by_frame = {r.frame_index: r for r in conf_only.diagnostics}
    assert by_frame[conf_only.key_frame].confidence == 1.0


def test_identification_deterministic():
    scene = ft.generate(ft.scenario("distractor", 3))
    seg, ali = resolve_backend("builtin:color")
    a = identify_target(scene.video, PipelineConfig(), seg, ali)
    b = identify_target(scene.video, PipelineConfig(), seg, ali)
    assert a.key_frame == b.key_frame
    assert a.key_mask == b.key_mask
    assert [s.score for s in a.diagnostics] == [s.score for s in b.diagnostics]


def test_diagnostics_json_shape():
    scene = ft.generate(ft.scenario("static", 9))
    seg, ali = resolve_backend("builtin:color")
    result = identify_target(scene.video, PipelineConfig(), seg, ali)
    doc = json.loads(json.dumps(result.to_json_obj()))
    assert set(doc) == {"key_frame", "candidates"}
    assert [c["frame"] for c in doc["candidates"]] == [1, 8, 15, 22, 30]
    assert all(set(c) == {"frame", "confidence", "alignment", "score", "empty"}
               for c in doc["candidates"])


def test_empty_scene_raises_all_candidates_empty():
    scene = ft.generate(ft.scenario("static", 2))
    seg, ali = resolve_backend("builtin:color")
    # ask for a color that is not in the scene
    video = ft.VideoSequence(frames=scene.video.frames, expression="the yellow circle")
    with pytest.raises(AllCandidatesEmpty):
        identify_target(video, PipelineConfig(), seg, ali)
