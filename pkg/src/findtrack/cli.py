"""Command-line interface.

Subcommands:
    run       full pipeline: frames + expression -> masks/ + manifest.json
    identify  key-frame selection only; prints diagnostics JSON
    eval      region/contour report for a prediction dir vs a ground-truth dir
    synth     generate a named synthetic scenario into a scene directory

Exit codes: 0 success, 2 I/O or configuration error, 3 backend or protocol
error. Outputs are written to a temporary sibling directory and renamed
into place on success, so an interrupted run never leaves a partial output
directory. The backend selector comes from --backend, falling back to the
FINDTRACK_BACKEND environment variable, then the built-in default.
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import io as ftio
from .backends import resolve_backend
from .errors import BackendError, FindTrackError
from .identify import candidates_json, identify_target
from .metrics import build_report
from .pipeline import run_pipeline
from .synthgen import SCENARIO_NAMES, generate, scenario
from .types import MaskSequence, PipelineConfig

EXIT_OK = 0
EXIT_IO_OR_CONFIG = 2
EXIT_BACKEND = 3


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--frames", required=True, help="directory of <%%05d>.ppm frames")
    parser.add_argument("--text", required=True, help="referring expression")
    parser.add_argument("--out", required=True, help="output directory (created on success)")
    parser.add_argument("--n", type=int, default=5, help="number of candidate key frames")
    parser.add_argument("--w1", type=float, default=0.5, help="segmentation-confidence weight")
    parser.add_argument("--w2", type=float, default=0.5, help="vision-text-alignment weight")
    parser.add_argument("--mem-interval", type=int, default=3, help="memory write interval in frames")
    parser.add_argument("--long-term", action="store_true", help="enable long-term memory consolidation")
    parser.add_argument("--backend", default=None, help="builtin:color | stdio:<command> | tcp:<host>:<port>")


def _config_from_args(args) -> PipelineConfig:
    backend = args.backend or os.environ.get("FINDTRACK_BACKEND") or "builtin:color"
    return PipelineConfig(
        num_candidates=args.n,
        w1=args.w1,
        w2=args.w2,
        memory_interval=args.mem_interval,
        long_term_enabled=args.long_term,
        backend=backend,
    )


def _atomic_output_dir(out: Path):
    """Context: yields a temp dir that is renamed to `out` if the body succeeds."""
    if out.exists():
        if not out.is_dir() or any(out.iterdir()):
            raise FindTrackError(f"output path exists and is not an empty directory: {out}")
        out.rmdir()
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.parent / f".{out.name}.tmp-{os.getpid()}"
    if tmp.exists():
        raise FindTrackError(f"temporary output path already exists: {tmp}")
    tmp.mkdir()
    return tmp


def _finish_output_dir(tmp: Path, out: Path) -> None:
    os.replace(tmp, out)


def cmd_run(args) -> int:
    config = _config_from_args(args)
    video = ftio.read_frame_dir(args.frames, expression=args.text)
    segmenter, aligner = resolve_backend(config.backend)

    out = Path(args.out)
    tmp = _atomic_output_dir(out)
    try:
        t0 = time.perf_counter()
        result = run_pipeline(video, config, segmenter, aligner)
        t1 = time.perf_counter()
        mask_paths = ftio.write_mask_dir(result.masks.masks, tmp / "masks")
        t2 = time.perf_counter()

        manifest = {
            "config": config.to_dict(),
            "inputs": {"frames": str(Path(args.frames)), "text": args.text},
            "key_frame": None if result.empty_target else result.identification.key_frame,
            "empty_target": result.empty_target,
            "candidates": candidates_json(result.diagnostics),
            "timings": {
                "pipeline_s": t1 - t0,
                "write_s": t2 - t1,
            },
            "outputs": {
                "masks_dir": str(out / "masks"),
                "num_masks": len(mask_paths),
            },
        }
        (tmp / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    _finish_output_dir(tmp, out)
    return EXIT_OK


def cmd_identify(args) -> int:
    config = _config_from_args(args)
    video = ftio.read_frame_dir(args.frames, expression=args.text)
    segmenter, aligner = resolve_backend(config.backend)

    out = Path(args.out)
    tmp = _atomic_output_dir(out)
    try:
        result = identify_target(video, config, segmenter, aligner)
        ftio.write_mask(result.key_mask, tmp / "key_mask.pgm")
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    _finish_output_dir(tmp, out)
    print(json.dumps(result.to_json_obj()))
    return EXIT_OK


def cmd_eval(args) -> int:
    pred_dir = Path(args.pred)
    gt_dir = Path(args.gt)
    pred = MaskSequence(masks=tuple(ftio.read_mask_dir(pred_dir)))
    gt = MaskSequence(masks=tuple(ftio.read_mask_dir(gt_dir)))
    report = build_report([(pred_dir.name or str(pred_dir), pred, gt)])
    print(json.dumps(report.to_json_obj()))
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = scenario(args.scenario, args.seed)
    scene = generate(spec)
    out = Path(args.out)
    tmp = _atomic_output_dir(out)
    try:
        ftio.write_frame_dir(scene.video.frames, tmp / "frames")
        for t, mask in enumerate(scene.gt.masks, start=1):
            ftio.write_mask(mask, tmp / "gt" / ftio.MASK_PATTERN.format(t))
        scene_doc = {
            "scenario": args.scenario,
            "seed": args.seed,
            "expression": scene.expression,
            "spec": asdict(spec),
            "visibility": list(scene.visibility),
        }
        (tmp / "scene.json").write_text(json.dumps(scene_doc, indent=2) + "\n")
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    _finish_output_dir(tmp, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="findtrack",
        description="Referring video object segmentation: find the key frame, then track it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="segment a frame directory end to end")
    _add_pipeline_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_id = sub.add_parser("identify", help="select the key frame only")
    _add_pipeline_flags(p_id)
    p_id.set_defaults(func=cmd_identify)

    p_eval = sub.add_parser("eval", help="score predictions against ground truth")
    p_eval.add_argument("--pred", required=True, help="directory of predicted .pgm masks")
    p_eval.add_argument("--gt", required=True, help="directory of ground-truth .pgm masks")
    p_eval.set_defaults(func=cmd_eval)

    p_synth = sub.add_parser("synth", help="generate a synthetic scenario")
    p_synth.add_argument("--scenario", required=True, choices=SCENARIO_NAMES)
    p_synth.add_argument("--seed", type=int, required=True)
    p_synth.add_argument("--out", required=True)
    p_synth.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BackendError as e:
        print(f"backend error: {e}", file=sys.stderr)
        return EXIT_BACKEND
    except (FindTrackError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO_OR_CONFIG


if __name__ == "__main__":
    sys.exit(main())
