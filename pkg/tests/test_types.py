import numpy as np
import pytest

from findtrack.errors import ConfigError, FindTrackError
from findtrack.types import (
    BinaryMask,
    Frame,
    MaskSequence,
    PipelineConfig,
    ScoredMask,
    VideoSequence,
)

from conftest import solid_frame


def test_frame_validates_shape_and_index():
    with pytest.raises(FindTrackError):
        Frame(index=0, pixels=np.zeros((2, 2, 3), dtype=np.uint8))
    with pytest.raises(FindTrackError):
        Frame(index=1, pixels=np.zeros((2, 2), dtype=np.uint8))


def test_frame_pixels_frozen():
    frame = solid_frame(2, 2, (1, 2, 3))
    with pytest.raises(ValueError):
        frame.pixels[0, 0, 0] = 9


def test_video_requires_consecutive_indices():
    frames = (solid_frame(2, 2, (0, 0, 0), index=1), solid_frame(2, 2, (0, 0, 0), index=3))
    with pytest.raises(FindTrackError):
        VideoSequence(frames=frames, expression="x")


def test_video_requires_same_dims():
    frames = (solid_frame(2, 2, (0, 0, 0), index=1), solid_frame(3, 2, (0, 0, 0), index=2))
    with pytest.raises(FindTrackError):
        VideoSequence(frames=frames, expression="x")


def test_video_requires_expression():
    with pytest.raises(FindTrackError):
        VideoSequence(frames=(solid_frame(2, 2, (0, 0, 0)),), expression="")


def test_mask_equality_is_bitwise():
    a = BinaryMask(np.eye(3, dtype=bool))
    b = BinaryMask(np.eye(3, dtype=bool))
    assert a == b and not (a == BinaryMask.empty(3, 3))


def test_scored_mask_validates_ranges():
    mask = BinaryMask.full(2, 2)
    with pytest.raises(FindTrackError):
        ScoredMask(1, mask, confidence=1.2, alignment=0.0, score=0.0)
    with pytest.raises(FindTrackError):
        ScoredMask(1, mask, confidence=0.5, alignment=-1.5, score=0.0)


def test_mask_sequence_checks_dims():
    with pytest.raises(FindTrackError):
        MaskSequence(masks=(BinaryMask.full(2, 2), BinaryMask.full(3, 2)))


def test_config_defaults_and_validation():
    config = PipelineConfig()
    assert config.num_candidates == 5
    assert config.w1 == config.w2 == 0.5
    assert config.memory_interval == 3
    assert config.long_term_enabled is False
    assert config.backend == "builtin:color"
    with pytest.raises(ConfigError):
        PipelineConfig(num_candidates=0)
    with pytest.raises(ConfigError):
        PipelineConfig(w1=0.0, w2=0.0)
    with pytest.raises(ConfigError):
        PipelineConfig(w1=-0.1)
    with pytest.raises(ConfigError):
        PipelineConfig(memory_interval=0)


def test_config_round_trips_through_dict():
    config = PipelineConfig(num_candidates=7, w1=0.2, w2=0.8, memory_interval=5,
                            long_term_enabled=True, backend="tcp:localhost:9")
    assert PipelineConfig.from_dict(config.to_dict()) == config
