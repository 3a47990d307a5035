"""Procedural generator of referring-VOS scenes with analytic ground truth.

Scenes are flat-colored shapes on a dark gray background, moved along
analytic trajectories and optionally crossed by occluder bars, so the
ground-truth mask of the target is known exactly at every frame (the same
rasterizer produces both the frame pixels and the ground truth). The
catalogue in `scenario` covers the stress cases the pipeline is meant to
survive: late-entering targets, heavy occlusion, and distractor objects
that transiently fool a confidence-only or alignment-only selector.

Randomness comes from a 64-bit linear congruential generator with fixed
constants (a=6364136223846793005, c=1442695040888963407, state wrapping
mod 2^64; draws take the top 53 bits), so a seed reproduces the same scene
byte-for-byte in any implementation of this scheme, not just this process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import raster
from .errors import SceneSpecError, UnknownScenario
from .grammar import BACKGROUND_RGB, COLORS, expression_for
from .types import BinaryMask, Frame, MaskSequence, VideoSequence

LCG_A = 6364136223846793005
LCG_C = 1442695040888963407
_MASK64 = (1 << 64) - 1


class Lcg:
    """Deterministic 64-bit LCG; scalar and vectorized draws share one stream."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (LCG_A * self.state + LCG_C) & _MASK64
        return self.state

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both inclusive."""
        return lo + int(self.next_float() * (hi - lo + 1))

    def choice(self, items):
        return items[self.randint(0, len(items) - 1)]

    def fill_u64(self, count: int) -> np.ndarray:
        """The next `count` raw states, vectorized; advances the stream."""
        mult = np.empty(count, dtype=np.uint64)
        add = np.empty(count, dtype=np.uint64)
        mult[0] = LCG_A
        add[0] = LCG_C
        have = 1
        while have < count:
            take = min(have, count - have)
            step_mult = mult[have - 1]
            step_add = add[have - 1]
            mult[have:have + take] = mult[:take] * step_mult
            add[have:have + take] = mult[:take] * step_add + add[:take]
            have += take
        states = mult * np.uint64(self.state) + add
        self.state = int(states[-1])
        return states

    def fill_ints(self, count: int, lo: int, hi: int) -> np.ndarray:
        span = hi - lo + 1
        floats = (self.fill_u64(count) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
        return lo + np.floor(floats * span).astype(np.int64)


@dataclass(frozen=True)
class Trajectory:
    """Analytic per-frame position: linear drift plus optional vertical sine."""

    start: tuple[float, float]
    velocity: tuple[float, float] = (0.0, 0.0)
    kind: str = "linear"
    amplitude: float = 0.0
    period: float = 10.0

    def position(self, frame_index: int) -> tuple[float, float]:
        dt = frame_index - 1
        x = self.start[0] + self.velocity[0] * dt
        y = self.start[1] + self.velocity[1] * dt
        if self.kind == "sinusoidal":
            y += self.amplitude * math.sin(2.0 * math.pi * dt / self.period)
        return x, y


@dataclass(frozen=True)
class ObjectSpec:
    """A flat-colored shape; color is a palette name or a raw RGB triple."""

    color: str | tuple[int, int, int]
    shape: str
    size: float
    trajectory: Trajectory
    entry_frame: int = 1
    exit_frame: int | None = None

    def rgb(self) -> tuple[int, int, int]:
        if isinstance(self.color, str):
            return COLORS[self.color]
        return tuple(self.color)


@dataclass(frozen=True)
class OccluderSpec:
    """A full-length bar sweeping across the canvas, drawn above every object."""

    axis: str                      # "vertical" or "horizontal"
    center_start: float
    velocity: float
    half_width: float
    color: tuple[int, int, int] = (255, 255, 255)

    def center(self, frame_index: int) -> float:
        return self.center_start + self.velocity * (frame_index - 1)


@dataclass(frozen=True)
class SceneSpec:
    seed: int
    objects: tuple[ObjectSpec, ...]
    target_index: int
    width: int = 128
    height: int = 128
    num_frames: int = 30
    occluders: tuple[OccluderSpec, ...] = ()
    noise: int = 0
    allow_color_overlap: bool = False
    name: str = "scene"


@dataclass(frozen=True)
class GeneratedScene:
    video: VideoSequence
    gt: MaskSequence
    visibility: tuple[float, ...]
    spec: SceneSpec

    @property
    def expression(self) -> str:
        return self.video.expression


def _validate(spec: SceneSpec) -> ObjectSpec:
    if not spec.objects:
        raise SceneSpecError("scene needs at least one object")
    if not 0 <= spec.target_index < len(spec.objects):
        raise SceneSpecError(f"target_index {spec.target_index} out of range")
    if not 0 <= spec.noise <= 16:
        raise SceneSpecError(f"noise amplitude must be in [0, 16], got {spec.noise}")
    target = spec.objects[spec.target_index]
    if not isinstance(target.color, str) or target.color not in COLORS:
        raise SceneSpecError(f"target color must be a palette name, got {target.color!r}")
    if target.shape not in ("circle", "square", "triangle"):
        raise SceneSpecError(f"target shape must be renderable, got {target.shape!r}")
    for obj in spec.objects:
        exit_frame = obj.exit_frame if obj.exit_frame is not None else spec.num_frames
        if not 1 <= obj.entry_frame <= exit_frame <= spec.num_frames:
            raise SceneSpecError(
                f"entry/exit [{obj.entry_frame}, {exit_frame}] invalid for T={spec.num_frames}"
            )
    return target


def generate(spec: SceneSpec) -> GeneratedScene:
    """Render a scene spec into frames, exact ground truth, and visibility meta."""
    target = _validate(spec)
    w, h, num_frames = spec.width, spec.height, spec.num_frames
    rng = Lcg(spec.seed)
    background = np.empty((h, w, 3), dtype=np.uint8)
    background[:] = BACKGROUND_RGB

    # Target drawn above other objects so ground truth is exactly its raster
    # minus occluders; draw order elsewhere follows the object list.
    order = [i for i in range(len(spec.objects)) if i != spec.target_index]
    order.append(spec.target_index)

    frames = []
    gt_masks = []
    visibility = []
    for t in range(1, num_frames + 1):
        canvas = background.copy()
        rasters: dict[int, np.ndarray] = {}
        for i in order:
            obj = spec.objects[i]
            exit_frame = obj.exit_frame if obj.exit_frame is not None else num_frames
            if not obj.entry_frame <= t <= exit_frame:
                continue
            cx, cy = obj.trajectory.position(t)
            bits = raster.shape_mask(obj.shape, w, h, cx, cy, obj.size)
            rasters[i] = bits
            canvas[bits] = obj.rgb()
        if not spec.allow_color_overlap:
            present = sorted(rasters)
            for a in range(len(present)):
                for b in range(a + 1, len(present)):
                    i, j = present[a], present[b]
                    if spec.objects[i].rgb() == spec.objects[j].rgb() and np.any(
                        rasters[i] & rasters[j]
                    ):
                        raise SceneSpecError(
                            f"objects {i} and {j} share a color and overlap at frame {t}"
                        )
        occluded = np.zeros((h, w), dtype=bool)
        for occ in spec.occluders:
            bits = raster.bar(w, h, occ.axis, occ.center(t), occ.half_width)
            occluded |= bits
            canvas[bits] = occ.color

        if spec.target_index in rasters:
            gt_bits = rasters[spec.target_index] & ~occluded
            cx, cy = target.trajectory.position(t)
            ideal = raster.shape_area_unclipped(target.shape, cx, cy, target.size)
            visibility.append(float(gt_bits.sum()) / ideal if ideal else 0.0)
        else:
            gt_bits = np.zeros((h, w), dtype=bool)
            visibility.append(0.0)
        gt_masks.append(BinaryMask(gt_bits))

        if spec.noise > 0:
            jitter = rng.fill_ints(h * w * 3, -spec.noise, spec.noise).reshape(h, w, 3)
            canvas = np.clip(canvas.astype(np.int64) + jitter, 0, 255).astype(np.uint8)
        frames.append(Frame(index=t, pixels=canvas))

    video = VideoSequence(
        frames=tuple(frames),
        expression=expression_for(target.color, target.shape),
    )
    return GeneratedScene(
        video=video,
        gt=MaskSequence(masks=tuple(gt_masks)),
        visibility=tuple(visibility),
        spec=spec,
    )


SCENARIO_NAMES = (
    "static", "translate", "enter_late", "occlusion", "distractor", "exit_and_similar",
)

_BASIC_COLORS = ("red", "green", "blue")


def _dimmed(color: str, level: int) -> tuple[int, int, int]:
    """The palette color with its full channels lowered to `level`."""
    return tuple(level if c == 255 else 0 for c in COLORS[color])


def _tinted(color: str) -> tuple[int, int, int]:
    """A near-canonical tint: full channels at 230, empty channels at 20."""
    return tuple(230 if c == 255 else 20 for c in COLORS[color])


def scenario(name: str, seed: int) -> SceneSpec:
    """Canonical scene spec for a named stress case."""
    rng = Lcg(seed)
    if name == "static":
        # Sides and corners on multiples of 4 so the square has no fractional
        # stride-4 boundary cells; tracking such a scene is loss-free, which
        # is the point of the conservation oracle this scenario backs.
        color = rng.choice(_BASIC_COLORS)
        side = 4 * rng.randint(12, 16)
        half = (side - 1) / 2.0
        left = 4 * rng.randint(2, (124 - side) // 4)
        top = 4 * rng.randint(2, (124 - side) // 4)
        obj = ObjectSpec(color, "square", half, Trajectory(start=(left + half, top + half)))
        return SceneSpec(seed=seed, objects=(obj,), target_index=0, name=f"static-{seed}")

    if name == "translate":
        color = rng.choice(_BASIC_COLORS)
        side = 4 * rng.randint(11, 12)
        half = (side - 1) / 2.0
        left = 4 * rng.randint(3, (66 - side) // 4)
        top = 4 * rng.randint(8, (124 - side) // 4)
        obj = ObjectSpec(
            color, "square", half,
            Trajectory(start=(left + half, top + half), velocity=(2.0, 0.0)),
        )
        return SceneSpec(seed=seed, objects=(obj,), target_index=0, name=f"translate-{seed}")

    if name == "enter_late":
        color = rng.choice(_BASIC_COLORS)
        half = rng.randint(13, 17)
        cx = rng.randint(34, 94)
        cy = rng.randint(34, 94)
        entry = rng.randint(10, 20)
        obj = ObjectSpec(color, "square", half, Trajectory(start=(cx, cy)), entry_frame=entry)
        return SceneSpec(seed=seed, objects=(obj,), target_index=0, name=f"enter_late-{seed}")

    if name == "occlusion":
        color = rng.choice(_BASIC_COLORS)
        half = rng.randint(12, 16)
        cx = rng.randint(40, 88)
        cy = rng.randint(40, 88)
        obj = ObjectSpec(color, "square", half, Trajectory(start=(cx, cy)))
        # Vertical bar crossing the target around mid-sequence; at 4 px/frame
        # with this width the visibility dip below 0.5 lasts well over three
        # frames, centered on frame 15.
        bar = OccluderSpec(
            axis="vertical",
            center_start=float(cx) - 4.0 * 14,
            velocity=4.0,
            half_width=half + 3.0,
        )
        return SceneSpec(
            seed=seed, objects=(obj,), target_index=0, occluders=(bar,),
            name=f"occlusion-{seed}",
        )

    if name == "distractor":
        color = rng.choice(_BASIC_COLORS)
        # Target: a square near the top-right, fully visible except while the
        # sweeping bar crosses it around frame 15.
        half = rng.randint(15, 16)
        tx = rng.randint(78, 88)
        ty = rng.randint(16, 24)
        target = ObjectSpec(color, "square", half, Trajectory(start=(tx, ty)))
        # Same-shape companion in a dimmed tint of the target color: inside
        # the segmenter's color threshold but in a different histogram bin,
        # so a mask of it aligns poorly with the expression. It sits in the
        # opposite corner so the two objects' descriptor positions are close
        # to orthogonal and neither hijacks the other's memory readout.
        dim_half = rng.randint(7, 8)
        dim = ObjectSpec(
            _dimmed(color, 200), "square", dim_half,
            Trajectory(start=(rng.randint(16, 22), rng.randint(96, 104))),
        )
        # Transient near-canonical tint sized exactly like the rendered text
        # prototype: a mask of it aligns perfectly while it lasts.
        look_cx = rng.randint(91, 93) + 0.5
        look_cy = rng.randint(78, 79) + 0.5
        lookalike = ObjectSpec(
            _tinted(color), "square", 23.5,
            Trajectory(start=(look_cx, look_cy)),
            entry_frame=21, exit_frame=23,
        )
        # Fast vertical bar hiding the target completely at frame 15; it is
        # off-canvas at every other candidate frame, so frame 15 segments the
        # companion alone at full confidence.
        bar = OccluderSpec(
            axis="vertical",
            center_start=float(tx) - 16.0 * 14,
            velocity=16.0,
            half_width=half + 2.0,
        )
        return SceneSpec(
            seed=seed,
            objects=(target, dim, lookalike),
            target_index=0,
            occluders=(bar,),
            name=f"distractor-{seed}",
        )

    if name == "exit_and_similar":
        color = rng.choice(_BASIC_COLORS)
        radius = rng.randint(11, 14)
        cy = rng.randint(40, 88)
        target = ObjectSpec(
            color, "circle", radius,
            Trajectory(start=(rng.randint(28, 36), cy), velocity=(5.0, 0.0)),
        )
        similar = ObjectSpec(
            _dimmed(color, 200), "circle", radius,
            Trajectory(start=(rng.randint(24, 40), rng.randint(30, 98))),
            entry_frame=24,
        )
        return SceneSpec(
            seed=seed, objects=(target, similar), target_index=0,
            name=f"exit_and_similar-{seed}",
        )

    raise UnknownScenario(f"unknown scenario {name!r} (have {', '.join(SCENARIO_NAMES)})")
