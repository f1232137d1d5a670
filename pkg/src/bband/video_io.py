"""Reading video luma planes from YUV4MPEG2 and raw planar YUV files.

Only the luma plane is kept; chroma is parsed for sizing and discarded.
Decoding is pure: the same bytes always produce the same frames and the
source file is never modified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np


class VideoFormatError(ValueError):
    """Raised when an input stream cannot be parsed as video."""


@dataclass
class LumaFrame:
    """A single 8-bit luma plane.

    Attributes:
        width: Frame width in pixels.
        height: Frame height in pixels.
        data: (height, width) uint8 array of intensity values.
        frame_index: Position of the frame within its source stream.
    """

    width: int
    height: int
    data: np.ndarray
    frame_index: int = 0

    def __post_init__(self) -> None:
        self.data = np.asarray(self.data)
        if self.data.shape != (self.height, self.width):
            raise ValueError(
                f"frame data shape {self.data.shape} does not match "
                f"geometry {self.height}x{self.width}"
            )
        if self.data.dtype != np.uint8:
            raise ValueError(f"frame data must be uint8, got {self.data.dtype}")

    def as_float(self) -> np.ndarray:
        """Return the plane as float64 for numeric processing."""
        return self.data.astype(np.float64)


@dataclass
class VideoStream:
    """An ordered sequence of luma frames plus source metadata."""

    frames: list[LumaFrame] = field(default_factory=list)
    frame_rate: float | None = None

    @property
    def frame_count(self) -> int:
        return len(self.frames)


# Chroma plane dimensions as (x divisor, y divisor) per subsampling mode.
_SUBSAMPLING = {
    "420": (2, 2),
    "422": (2, 1),
    "444": (1, 1),
}


def _chroma_plane_size(width: int, height: int, subsampling: str) -> int:
    sx, sy = _SUBSAMPLING[subsampling]
    return ((width + sx - 1) // sx) * ((height + sy - 1) // sy)


def _parse_colour_tag(tag: str) -> tuple[str, int]:
    """Split a Y4M colourspace tag into (subsampling, bit depth).

    Accepts the common 4:2:0 aliases (C420jpeg, C420mpeg2, C420paldv) and
    pNN suffixes for deeper samples, e.g. C420p10.
    """
    body = tag[1:]  # strip leading 'C'
    depth = 8
    if "p" in body:
        prefix, _, suffix = body.partition("p")
        if suffix.isdigit():
            depth = int(suffix)
            body = prefix
    for mode in _SUBSAMPLING:
        if body.startswith(mode):
            rest = body[len(mode):]
            if rest in ("", "jpeg", "mpeg2", "paldv"):
                return mode, depth
    raise VideoFormatError(f"unsupported colourspace tag {tag!r}")


def read_y4m(
    path: str | Path,
    rescale_high_bit_depth: bool = False,
) -> VideoStream:
    """Decode a YUV4MPEG2 file into a stream of luma frames.

    Args:
        path: File to read.
        rescale_high_bit_depth: Allow >8-bit streams by right-shifting
            samples down to 8 bits.  Without it such streams are rejected.

    Returns:
        VideoStream with every frame of the file, in order.

    Raises:
        VideoFormatError: On any malformed header, truncated payload,
            unsupported colourspace, or (without the rescale flag) a bit
            depth above 8.
    """
    raw = Path(path).read_bytes()
    newline = raw.find(b"\n")
    if newline < 0:
        raise VideoFormatError("missing end of stream header")
    header = raw[:newline].decode("ascii", errors="replace")
    tokens = header.split(" ")
    if tokens[0] != "YUV4MPEG2":
        raise VideoFormatError(f"not a YUV4MPEG2 stream (got {tokens[0]!r})")

    width = height = 0
    frame_rate: float | None = None
    subsampling, depth = "420", 8
    for token in tokens[1:]:
        if not token:
            continue
        kind, value = token[0], token[1:]
        if kind == "W":
            width = int(value)
        elif kind == "H":
            height = int(value)
        elif kind == "F":
            num, _, den = value.partition(":")
            frame_rate = float(Fraction(int(num), int(den)))
        elif kind == "C":
            subsampling, depth = _parse_colour_tag(token)
        elif kind in ("I", "A", "X"):
            continue  # interlacing, aspect and extensions are irrelevant here
        else:
            raise VideoFormatError(f"unrecognised header token {token!r}")
    if width <= 0 or height <= 0:
        raise VideoFormatError("stream header must declare positive W and H")

    if depth > 8 and not rescale_high_bit_depth:
        raise VideoFormatError(
            f"{depth}-bit samples need rescale_high_bit_depth=True"
        )
    if depth < 8 or depth > 16:
        raise VideoFormatError(f"unsupported bit depth {depth}")

    bytes_per_sample = 1 if depth == 8 else 2
    luma_samples = width * height
    chroma_samples = 2 * _chroma_plane_size(width, height, subsampling)
    frame_bytes = (luma_samples + chroma_samples) * bytes_per_sample

    frames: list[LumaFrame] = []
    pos = newline + 1
    while pos < len(raw):
        marker_end = raw.find(b"\n", pos)
        if marker_end < 0:
            raise VideoFormatError("truncated FRAME marker")
        marker = raw[pos:marker_end].decode("ascii", errors="replace")
        if marker != "FRAME" and not marker.startswith("FRAME "):
            raise VideoFormatError(f"expected FRAME marker, got {marker!r}")
        start = marker_end + 1
        end = start + frame_bytes
        if end > len(raw):
            raise VideoFormatError(
                f"frame {len(frames)} truncated: expected {frame_bytes} bytes, "
                f"got {len(raw) - start}"
            )
        luma_raw = raw[start:start + luma_samples * bytes_per_sample]
        if depth == 8:
            plane = np.frombuffer(luma_raw, dtype=np.uint8)
        else:
            wide = np.frombuffer(luma_raw, dtype="<u2")
            plane = (wide >> (depth - 8)).astype(np.uint8)
        frames.append(
            LumaFrame(
                width=width,
                height=height,
                data=plane.reshape(height, width).copy(),
                frame_index=len(frames),
            )
        )
        pos = end

    stream = VideoStream(frames=frames, frame_rate=frame_rate)
    return stream


def read_raw_yuv(
    path: str | Path,
    width: int,
    height: int,
    subsampling: str = "420",
) -> VideoStream:
    """Decode a headerless planar YUV file with caller-supplied geometry.

    Args:
        path: File to read.
        width: Luma width in pixels.
        height: Luma height in pixels.
        subsampling: One of "420", "422", "444".

    Returns:
        VideoStream with frame_rate=None (raw files carry no timing).

    Raises:
        VideoFormatError: If geometry is invalid or the file size is not a
            whole number of frames.
    """
    if width <= 0 or height <= 0:
        raise VideoFormatError(f"invalid geometry {width}x{height}")
    if subsampling not in _SUBSAMPLING:
        raise VideoFormatError(f"unsupported subsampling {subsampling!r}")
    raw = Path(path).read_bytes()
    luma_samples = width * height
    frame_bytes = luma_samples + 2 * _chroma_plane_size(width, height, subsampling)
    if len(raw) == 0 or len(raw) % frame_bytes != 0:
        raise VideoFormatError(
            f"file size {len(raw)} is not a multiple of the "
            f"{frame_bytes}-byte frame size for {width}x{height} {subsampling}"
        )
    frames = []
    for index in range(len(raw) // frame_bytes):
        start = index * frame_bytes
        plane = np.frombuffer(raw[start:start + luma_samples], dtype=np.uint8)
        frames.append(
            LumaFrame(
                width=width,
                height=height,
                data=plane.reshape(height, width).copy(),
                frame_index=index,
            )
        )
    return VideoStream(frames=frames, frame_rate=None)


def write_y4m(stream: VideoStream, path: str | Path, frame_rate: float | None = None) -> None:
    """Write a luma-only stream as an 8-bit 4:2:0 Y4M file.

    Chroma planes are filled with the neutral value 128 so any standard
    player shows the grayscale content.  read_y4m(write_y4m(s)) recovers
    every luma plane bit-exactly.
    """
    if stream.frame_count == 0:
        raise ValueError("cannot write an empty stream")
    first = stream.frames[0]
    rate = frame_rate if frame_rate is not None else (stream.frame_rate or 30.0)
    fraction = Fraction(rate).limit_denominator(1001 * 1000)
    header = (
        f"YUV4MPEG2 W{first.width} H{first.height} "
        f"F{fraction.numerator}:{fraction.denominator} Ip A1:1 C420jpeg\n"
    )
    chroma = bytes([128]) * _chroma_plane_size(first.width, first.height, "420")
    with open(path, "wb") as handle:
        handle.write(header.encode("ascii"))
        for frame in stream.frames:
            if (frame.width, frame.height) != (first.width, first.height):
                raise ValueError("all frames in a stream must share geometry")
            handle.write(b"FRAME\n")
            handle.write(frame.data.tobytes())
            handle.write(chroma)
            handle.write(chroma)
