"""Key-frame identification.

Candidate frames are sampled on a uniform grid over 1..T, each candidate is
segmented and scored, and the best-scoring frame becomes the reference for
propagation. A candidate's score combines the segmenter's confidence with
the cosine alignment between the masked region's embedding and the
expression's embedding:

    score = w1 * confidence + w2 * clamp(alignment, 0, 1)

Alignment is clamped into [0, 1] inside the score so both terms share a
scale under the default weights; diagnostics keep the raw cosine value.
Candidates whose mask came back empty score 0 (the aligner is not called
for them) and are skipped at selection time in favor of the next-best
non-empty candidate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .backends.base import AlignerPort, Embedding, SegmenterPort
from .errors import (
    AllCandidatesEmpty,
    BackendError,
    DimensionMismatch,
    ExpressionParseError,
    ZeroNormEmbedding,
)
from .types import BinaryMask, PipelineConfig, ScoredMask, VideoSequence


@dataclass(frozen=True)
class CandidateSet:
    """Sampled candidate indices and their scored masks, index-aligned."""

    indices: tuple[int, ...]
    scored: tuple[ScoredMask, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "scored", tuple(self.scored))
        assert len(self.indices) == len(self.scored)


def candidates_json(scored) -> list[dict]:
    """Per-candidate diagnostics rows in the documented JSON order."""
    return [
        {
            "frame": s.frame_index,
            "confidence": s.confidence,
            "alignment": s.alignment,
            "score": s.score,
            "empty": s.mask.is_empty(),
        }
        for s in scored
    ]


@dataclass(frozen=True)
class IdentificationResult:
    """The selected key frame, its mask, and per-candidate diagnostics."""

    key_frame: int
    key_mask: BinaryMask
    diagnostics: tuple[ScoredMask, ...]

    def to_json_obj(self) -> dict:
        return {
            "key_frame": self.key_frame,
            "candidates": candidates_json(self.diagnostics),
        }


def sample_candidates(num_frames: int, num_candidates: int) -> list[int]:
    """Uniformly sample candidate frame indices from 1..num_frames.

    For two or more candidates the grid is
    ``floor((i-1)(T-1)/(N-1)) + 1`` for i = 1..N, duplicates removed in
    order (duplicates appear when N > T). A single candidate is the middle
    frame ceil(T/2).
    """
    if num_frames < 1 or num_candidates < 1:
        raise ValueError("num_frames and num_candidates must be positive")
    if num_candidates == 1:
        return [math.ceil(num_frames / 2)]
    indices = []
    for i in range(1, num_candidates + 1):
        j = (i - 1) * (num_frames - 1) // (num_candidates - 1) + 1
        if not indices or indices[-1] != j:
            indices.append(j)
    return indices


def alignment_score(image_embedding: Embedding, text_embedding: Embedding) -> float:
    """Cosine similarity of two embeddings, in [-1, 1]."""
    u = image_embedding.values
    v = text_embedding.values
    if u.size != v.size:
        raise DimensionMismatch(f"embedding dims differ: {u.size} vs {v.size}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroNormEmbedding("cannot compute cosine of a zero vector")
    value = float(np.dot(u, v) / (nu * nv))
    return min(1.0, max(-1.0, value))


def mask_score(confidence: float, alignment: float, w1: float, w2: float) -> float:
    """Weighted combination of confidence and clamped alignment."""
    return w1 * confidence + w2 * min(1.0, max(0.0, alignment))


def select_key_frame(candidates: CandidateSet) -> IdentificationResult:
    """Pick the best-scoring candidate, preferring non-empty masks.

    Ties break toward the lowest frame index. If the top-scoring mask is
    empty, the next-best non-empty candidate wins; if every candidate is
    empty, AllCandidatesEmpty is raised and the caller should emit an
    all-empty mask sequence.
    """
    if not candidates.scored:
        raise AllCandidatesEmpty("no candidates were scored")
    ranked = sorted(candidates.scored, key=lambda s: (-s.score, s.frame_index))
    for entry in ranked:
        if not entry.mask.is_empty():
            return IdentificationResult(
                key_frame=entry.frame_index,
                key_mask=entry.mask,
                diagnostics=candidates.scored,
            )
    error = AllCandidatesEmpty("every candidate segmentation is empty")
    error.diagnostics = candidates.scored
    raise error


def _score_candidate(
    video: VideoSequence,
    frame_index: int,
    config: PipelineConfig,
    segmenter: SegmenterPort,
    aligner: AlignerPort,
    text_embedding: Embedding,
) -> ScoredMask:
    frame = video.frames[frame_index - 1]
    try:
        result = segmenter.segment(frame, video.expression)
        if result.mask.is_empty():
            alignment = 0.0
        else:
            image_embedding = aligner.embed_masked_image(frame, result.mask)
            alignment = alignment_score(image_embedding, text_embedding)
    except ExpressionParseError:
        raise
    except BackendError as e:
        raise type(e)(f"frame {frame_index}: {e}") from e
    except Exception as e:
        raise BackendError(f"frame {frame_index}: {e}") from e
    return ScoredMask(
        frame_index=frame_index,
        mask=result.mask,
        confidence=result.confidence,
        alignment=alignment,
        score=mask_score(result.confidence, alignment, config.w1, config.w2),
    )


def identify_target(
    video: VideoSequence,
    config: PipelineConfig,
    segmenter: SegmenterPort,
    aligner: AlignerPort,
) -> IdentificationResult:
    """Run the full identification stage on a video.

    Candidates are evaluated concurrently (remote sessions serialize
    internally) and joined in frame order, so the result does not depend on
    scheduling.
    """
    indices = sample_candidates(video.num_frames, config.num_candidates)
    text_embedding = aligner.embed_text(video.expression)
    if len(indices) == 1:
        scored = [_score_candidate(video, indices[0], config, segmenter, aligner, text_embedding)]
    else:
        with ThreadPoolExecutor(max_workers=min(4, len(indices))) as pool:
            scored = list(pool.map(
                lambda j: _score_candidate(video, j, config, segmenter, aligner, text_embedding),
                indices,
            ))
    return select_key_frame(CandidateSet(indices=tuple(indices), scored=tuple(scored)))
