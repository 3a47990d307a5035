"""Frame and mask file I/O.

Only the binary netpbm formats are supported: P6 (PPM) for RGB frames and
P5 (PGM) for masks, both with maxval 255. These are codec-free and byte
exact, which keeps round-trip tests honest. Masks are stored with
foreground=255 / background=0 and thresholded at >=128 on read, so a mask
survives a trip through external tools that slightly perturb gray levels.

On-disk layout used by the CLI:
    frames/<%05d>.ppm   input frames, numbered 1..T with no gaps
    masks/<%05d>.pgm    output masks, same numbering
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, MissingFrame, UnsupportedFormat
from .types import BinaryMask, Frame, VideoSequence

FRAME_PATTERN = "{:05d}.ppm"
MASK_PATTERN = "{:05d}.pgm"


def _read_pnm_header(data: bytes, path) -> tuple[bytes, int, int, int, int]:
    """Parse a binary netpbm header; returns (magic, width, height, maxval, offset)."""
    if len(data) < 2 or data[:1] != b"P":
        raise UnsupportedFormat(f"{path}: not a netpbm file")
    magic = data[:2]
    pos = 2
    fields = []
    while len(fields) < 3:
        if pos >= len(data):
            raise UnsupportedFormat(f"{path}: truncated header")
        c = data[pos:pos + 1]
        if c in b" \t\r\n":
            pos += 1
        elif c == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise UnsupportedFormat(f"{path}: truncated comment")
            pos = nl + 1
        elif c.isdigit():
            m = re.match(rb"\d+", data[pos:])
            fields.append(int(m.group(0)))
            pos += m.end()
        else:
            raise UnsupportedFormat(f"{path}: unexpected byte {c!r} in header")
    # Exactly one whitespace byte separates the header from the raster.
    if pos >= len(data) or data[pos:pos + 1] not in b" \t\r\n":
        raise UnsupportedFormat(f"{path}: missing raster separator")
    width, height, maxval = fields
    return magic, width, height, maxval, pos + 1


def read_frame(path, index: int = 1) -> Frame:
    """Read a single P6 frame file."""
    data = Path(path).read_bytes()
    magic, width, height, maxval, offset = _read_pnm_header(data, path)
    if magic != b"P6":
        raise UnsupportedFormat(f"{path}: expected P6, got {magic.decode(errors='replace')}")
    if maxval != 255:
        raise UnsupportedFormat(f"{path}: maxval must be 255, got {maxval}")
    expected = width * height * 3
    raster = data[offset:offset + expected]
    if len(raster) != expected:
        raise UnsupportedFormat(f"{path}: raster has {len(raster)} bytes, expected {expected}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return Frame(index=index, pixels=pixels)


def write_frame(frame: Frame, path) -> None:
    """Write a frame as binary PPM (P6, maxval 255)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode()
    path.write_bytes(header + frame.pixels.tobytes())


def read_mask(path) -> BinaryMask:
    """Read a single P5 mask file; gray levels >= 128 count as foreground."""
    data = Path(path).read_bytes()
    magic, width, height, maxval, offset = _read_pnm_header(data, path)
    if magic != b"P5":
        raise UnsupportedFormat(f"{path}: expected P5, got {magic.decode(errors='replace')}")
    if maxval != 255:
        raise UnsupportedFormat(f"{path}: maxval must be 255, got {maxval}")
    expected = width * height
    raster = data[offset:offset + expected]
    if len(raster) != expected:
        raise UnsupportedFormat(f"{path}: raster has {len(raster)} bytes, expected {expected}")
    gray = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return BinaryMask(gray >= 128)


def write_mask(mask: BinaryMask, path) -> None:
    """Write a mask as binary PGM (P5), foreground=255, background=0."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode()
    gray = np.where(mask.bits, 255, 0).astype(np.uint8)
    path.write_bytes(header + gray.tobytes())


def _numbered_files(directory: Path, suffix: str) -> dict[int, Path]:
    found = {}
    for p in directory.iterdir():
        if p.suffix.lower() == suffix and p.stem.isdigit():
            found[int(p.stem)] = p
    return found


def read_frame_dir(path, expression: str) -> VideoSequence:
    """Read a frames/ directory of numbered PPM files into a video.

    Files must be numbered 1..T with no gaps; a gap or a missing frame 1
    raises MissingFrame. All frames must share one resolution.
    """
    directory = Path(path)
    if not directory.is_dir():
        raise MissingFrame(f"not a directory: {directory}")
    found = _numbered_files(directory, ".ppm")
    if not found:
        raise MissingFrame(f"no numbered .ppm frames in {directory}")
    count = len(found)
    for t in range(1, count + 1):
        if t not in found:
            raise MissingFrame(f"{directory}: frame {t} missing (have {sorted(found)})")
    frames = []
    for t in range(1, count + 1):
        frame = read_frame(found[t], index=t)
        if frames and (frame.width != frames[0].width or frame.height != frames[0].height):
            raise DimensionMismatch(
                f"{found[t]}: {frame.width}x{frame.height} differs from frame 1 "
                f"{frames[0].width}x{frames[0].height}"
            )
        frames.append(frame)
    return VideoSequence(frames=tuple(frames), expression=expression)


def read_mask_dir(path) -> list[BinaryMask]:
    """Read a masks/ directory of numbered PGM files, ordered 1..T; gaps raise MissingFrame."""
    directory = Path(path)
    if not directory.is_dir():
        raise MissingFrame(f"not a directory: {directory}")
    found = _numbered_files(directory, ".pgm")
    if not found:
        raise MissingFrame(f"no numbered .pgm masks in {directory}")
    masks = []
    for t in range(1, len(found) + 1):
        if t not in found:
            raise MissingFrame(f"{directory}: mask {t} missing (have {sorted(found)})")
        masks.append(read_mask(found[t]))
    return masks


def write_mask_dir(masks, directory) -> list[Path]:
    """Write masks as masks/<%05d>.pgm starting at 1; returns the paths written."""
    directory = Path(directory)
    paths = []
    for t, mask in enumerate(masks, start=1):
        p = directory / MASK_PATTERN.format(t)
        write_mask(mask, p)
        paths.append(p)
    return paths


def write_frame_dir(frames, directory) -> list[Path]:
    """Write frames as frames/<%05d>.ppm starting at 1; returns the paths written."""
    directory = Path(directory)
    paths = []
    for t, frame in enumerate(frames, start=1):
        p = directory / FRAME_PATTERN.format(t)
        write_frame(frame, p)
        paths.append(p)
    return paths
