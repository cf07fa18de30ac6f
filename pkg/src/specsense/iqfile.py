"""Raw sample file I/O: little-endian float32, real or interleaved I/Q.

Frame layout for M channels: each frame holds the channels in order, one
float per channel for real recordings or an (I, Q) pair per channel for
complex ones. A JSON sidecar at ``<path>.meta.json`` carries the sample
rate, channel count, layout, and frame count so files are
self-describing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .signals import SampleBlock

LAYOUT_REAL = "real"
LAYOUT_IQ = "iq"


@dataclass(frozen=True)
class IqFormat:
    """Descriptor for a raw float32 sample file."""

    layout: str
    channels: int = 1
    sample_rate: Optional[float] = None

    def __post_init__(self):
        if self.layout not in (LAYOUT_REAL, LAYOUT_IQ):
            raise ValueError(f"layout must be '{LAYOUT_REAL}' or '{LAYOUT_IQ}', got {self.layout!r}")
        if self.channels < 1:
            raise ValueError(f"channels must be >= 1, got {self.channels}")

    @property
    def floats_per_frame(self) -> int:
        return self.channels * (2 if self.layout == LAYOUT_IQ else 1)


def sidecar_path(path: Union[str, Path]) -> Path:
    return Path(str(path) + ".meta.json")


def write_iq(block: SampleBlock, path: Union[str, Path]) -> IqFormat:
    """Write a block as float32 frames plus a JSON sidecar.

    Complex blocks use the interleaved I/Q layout; real blocks store one
    float per channel per frame. Values are cast to float32.
    """
    path = Path(path)
    layout = LAYOUT_IQ if block.is_complex else LAYOUT_REAL
    if block.is_complex:
        frames = np.empty((block.num_samples, 2 * block.channels), dtype=np.float32)
        frames[:, 0::2] = block.samples.T.real.astype(np.float32)
        frames[:, 1::2] = block.samples.T.imag.astype(np.float32)
    else:
        frames = block.samples.T.astype(np.float32)
    frames.astype("<f4").tofile(path)
    fmt = IqFormat(layout=layout, channels=block.channels, sample_rate=block.sample_rate)
    sidecar = {
        "layout": fmt.layout,
        "channels": fmt.channels,
        "sample_rate": fmt.sample_rate,
        "frames": block.num_samples,
    }
    sidecar_path(path).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return fmt


def read_format(path: Union[str, Path]) -> IqFormat:
    """Load the sidecar descriptor for a sample file."""
    meta_file = sidecar_path(path)
    if not meta_file.exists():
        raise ValueError(f"no sidecar metadata at {meta_file}; pass an explicit format")
    meta = json.loads(meta_file.read_text())
    try:
        fmt = IqFormat(
            layout=meta["layout"],
            channels=int(meta["channels"]),
            sample_rate=None if meta.get("sample_rate") is None else float(meta["sample_rate"]),
        )
    except KeyError as exc:
        raise ValueError(f"sidecar {meta_file} is missing field {exc}") from exc
    frames = meta.get("frames")
    if frames is not None:
        actual = Path(path).stat().st_size // (4 * fmt.floats_per_frame)
        if actual != int(frames):
            raise ValueError(
                f"sidecar declares {frames} frames but {path} holds {actual}"
            )
    return fmt


def ingest_iq(path: Union[str, Path], fmt: Optional[IqFormat] = None) -> SampleBlock:
    """Read a raw float32 sample file into a SampleBlock.

    With no explicit format the sidecar is consulted. Truncated files
    (sizes that do not divide into whole frames) are rejected.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    if fmt is None:
        fmt = read_format(path)
    size = path.stat().st_size
    frame_bytes = 4 * fmt.floats_per_frame
    if size == 0 or size % frame_bytes != 0:
        raise ValueError(
            f"{path} has {size} bytes, not a whole number of {frame_bytes}-byte frames"
        )
    raw = np.fromfile(path, dtype="<f4")
    frames = raw.reshape(-1, fmt.floats_per_frame)
    if fmt.layout == LAYOUT_IQ:
        data = (frames[:, 0::2] + 1j * frames[:, 1::2]).T.astype(np.complex64)
    else:
        data = frames.T.copy()
    return SampleBlock(data, sample_rate=fmt.sample_rate)
