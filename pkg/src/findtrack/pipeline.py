"""End-to-end convenience wrapper: identify, then propagate.

Thin glue over the two stages so library callers and the CLI share one code
path. When every candidate segmentation is empty there is nothing to track;
the result carries an all-empty mask sequence and no identification.
"""

from __future__ import annotations

from dataclasses import dataclass

from .backends import resolve_backend
from .backends.base import AlignerPort, SegmenterPort
from .errors import AllCandidatesEmpty
from .identify import IdentificationResult, identify_target
from .propagate import propagate
from .types import BinaryMask, MaskSequence, PipelineConfig, VideoSequence


@dataclass(frozen=True)
class PipelineResult:
    masks: MaskSequence
    identification: IdentificationResult | None
    diagnostics: tuple = ()

    @property
    def empty_target(self) -> bool:
        return self.identification is None


def run_pipeline(
    video: VideoSequence,
    config: PipelineConfig | None = None,
    segmenter: SegmenterPort | None = None,
    aligner: AlignerPort | None = None,
    debug_dir=None,
) -> PipelineResult:
    """Identify the key frame and propagate its mask across the video.

    Backends default to whatever `config.backend` selects. Raises the
    underlying errors for bad inputs; an all-empty identification is not an
    error and yields all-empty masks.
    """
    config = config or PipelineConfig()
    if segmenter is None or aligner is None:
        segmenter, aligner = resolve_backend(config.backend)
    try:
        identification = identify_target(video, config, segmenter, aligner)
    except AllCandidatesEmpty as e:
        empty = BinaryMask.empty(video.width, video.height)
        return PipelineResult(
            masks=MaskSequence(masks=tuple(empty for _ in video.frames)),
            identification=None,
            diagnostics=getattr(e, "diagnostics", ()),
        )
    masks = propagate(
        video, identification.key_frame, identification.key_mask, config, debug_dir=debug_dir
    )
    return PipelineResult(
        masks=masks, identification=identification, diagnostics=identification.diagnostics
    )
