"""Referring video object segmentation by decoupled find-then-track.

Given a video and a natural-language expression naming one object, the
pipeline first identifies a key frame whose predicted mask best balances
segmentation confidence with vision-text alignment, then propagates that
mask bidirectionally through the rest of the video with a memory-based
tracker. Segmentation and alignment are pluggable backends; the built-in
synthetic pair plus the scene generator in `synthgen` make the whole
pipeline runnable and testable without any pretrained model.
"""

from .backends import (
    AlignerPort,
    ColorSegmenter,
    Embedding,
    HistogramAligner,
    RemoteBackend,
    SegmentationResult,
    SegmenterPort,
    resolve_backend,
)
from .errors import FindTrackError
from .identify import (
    CandidateSet,
    IdentificationResult,
    alignment_score,
    identify_target,
    mask_score,
    sample_candidates,
    select_key_frame,
)
from .io import read_frame_dir, read_mask, write_mask
from .metrics import EvalReport, build_report, contour_f, evaluate_sequence, region_j
from .pipeline import PipelineResult, run_pipeline
from .propagate import ClipPair, propagate, split_sequence, track_clip
from .rle import RleMask, rle_decode, rle_encode
from .synthgen import GeneratedScene, SceneSpec, generate, scenario
from .types import (
    BinaryMask,
    Frame,
    MaskSequence,
    PipelineConfig,
    ScoredMask,
    VideoSequence,
)

__version__ = "0.1.0"

__all__ = [
    "AlignerPort",
    "BinaryMask",
    "CandidateSet",
    "ClipPair",
    "ColorSegmenter",
    "Embedding",
    "EvalReport",
    "FindTrackError",
    "Frame",
    "GeneratedScene",
    "HistogramAligner",
    "IdentificationResult",
    "MaskSequence",
    "PipelineConfig",
    "PipelineResult",
    "RemoteBackend",
    "RleMask",
    "SceneSpec",
    "ScoredMask",
    "SegmentationResult",
    "SegmenterPort",
    "VideoSequence",
    "alignment_score",
    "build_report",
    "contour_f",
    "evaluate_sequence",
    "generate",
    "identify_target",
    "mask_score",
    "propagate",
    "read_frame_dir",
    "read_mask",
    "region_j",
    "resolve_backend",
    "rle_decode",
    "rle_encode",
    "run_pipeline",
    "sample_candidates",
    "scenario",
    "select_key_frame",
    "split_sequence",
    "track_clip",
    "write_mask",
]
