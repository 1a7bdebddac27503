"""Frame-sequence I/O and the binary operator (LUT) format.

LUT layout, little-endian::

    b"MEBW"  u32 version=1  u8 role  u32 t_in  u32 t_out
    f64 alpha  f64 w1  f64 w2  f64[t_in * t_out] row-major
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import cv2
import numpy as np

from .errors import ClipIOError, FormatError
from .magnify import MagnifyParams
from .numcore import Clip
from .operators import ROLES, OperatorMatrix

LUT_MAGIC = b"MEBW"
LUT_VERSION = 1
_HEADER = struct.Struct("<4sIBIIddd")
LUMA = np.array([0.299, 0.587, 0.114])


@dataclass
class ClipManifest:
    """Where a clip's frames live.

    ``pattern`` takes a printf-style index, e.g. ``"frame_%04d.png"``;
    frame ``k`` (0-based) is read from ``pattern % (start + k)``.
    """

    directory: Path
    pattern: str = "frame_%04d.png"
    channels: str = "gray"
    frames: Optional[int] = None
    fps: Optional[float] = None
    start: int = 1
    bit_depth: int = 8

    def __post_init__(self):
        self.directory = Path(self.directory)
        if self.channels not in ("gray", "rgb"):
            raise FormatError(f"channels must be 'gray' or 'rgb', got {self.channels!r}")
        if self.bit_depth not in (8, 16):
            raise FormatError(f"bit depth must be 8 or 16, got {self.bit_depth}")

    def path(self, k):
        return self.directory / (self.pattern % (self.start + k))

    def discover(self):
        """Count consecutive frames on disk when ``frames`` was not declared."""
        if self.frames is None:
            n = 0
            while self.path(n).exists():
                n += 1
            self.frames = n
        return self.frames


def _read_image(path, k):
    if not path.exists():
        raise ClipIOError(f"frame {k + 1} missing: {path}")
    img = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if img is None:
        raise FormatError(f"frame {k + 1} could not be decoded: {path}")
    if img.dtype == np.uint8:
        scale = 255.0
    elif img.dtype == np.uint16:
        scale = 65535.0
    else:
        raise FormatError(f"frame {k + 1} has unsupported sample type {img.dtype}")
    if img.ndim == 3:
        if img.shape[2] == 4:
            img = img[:, :, :3]
        img = img[:, :, ::-1]  # BGR -> RGB
    return img.astype(np.float64) / scale


def load_clip(manifest: ClipManifest) -> Clip:
    n = manifest.discover()
    if n < 1:
        raise ClipIOError(f"no frames matching {manifest.pattern} in {manifest.directory}")
    frames = []
    shape = None
    for k in range(n):
        img = _read_image(manifest.path(k), k)
        if manifest.channels == "gray" and img.ndim == 3:
            img = img @ LUMA
        elif manifest.channels == "rgb" and img.ndim == 2:
            img = np.repeat(img[:, :, None], 3, axis=2)
        if shape is None:
            shape = img.shape
        elif img.shape != shape:
            raise FormatError(f"frame {k + 1} has shape {img.shape}, expected {shape}")
        frames.append(img)
    return Clip.from_frames(frames)


def quantize(values, bit_depth=8):
    """Clamp to [0, 1] and round to integer samples; the only clamp in the pipeline."""
    top = 255 if bit_depth == 8 else 65535
    dtype = np.uint8 if bit_depth == 8 else np.uint16
    return np.round(np.clip(values, 0.0, 1.0) * top).astype(dtype)


def save_clip(clip: Clip, manifest: ClipManifest) -> None:
    try:
        manifest.directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ClipIOError(f"cannot create {manifest.directory}: {exc}") from exc
    for t in range(clip.frames):
        img = quantize(clip.frame(t), manifest.bit_depth)
        if img.ndim == 3:
            img = np.ascontiguousarray(img[:, :, ::-1])
        path = manifest.path(t)
        try:
            ok = cv2.imwrite(str(path), img)
        except cv2.error as exc:
            raise ClipIOError(f"cannot write frame {t + 1} to {path}: {exc}") from exc
        if not ok:
            raise ClipIOError(f"cannot write frame {t + 1} to {path}")


def lut_bytes(w: OperatorMatrix) -> bytes:
    m = w.params if isinstance(w.params, MagnifyParams) else None
    alpha, w1, w2 = (m.alpha, m.w1, m.w2) if m is not None else (0.0, 0.0, 0.0)
    header = _HEADER.pack(
        LUT_MAGIC, LUT_VERSION, ROLES.index(w.role), w.t_in, w.t_out, alpha, w1, w2
    )
    return header + np.ascontiguousarray(w.matrix, dtype="<f8").tobytes()


def write_lut(w: OperatorMatrix, path) -> None:
    if not np.all(np.isfinite(w.matrix)):
        raise FormatError("refusing to write non-finite operator")
    try:
        Path(path).write_bytes(lut_bytes(w))
    except OSError as exc:
        raise ClipIOError(f"cannot write LUT {path}: {exc}") from exc


def parse_lut(raw: bytes) -> OperatorMatrix:
    if len(raw) < _HEADER.size:
        if raw[:4] != LUT_MAGIC[: len(raw[:4])]:
            raise FormatError(f"bad magic {raw[:4]!r}, expected MEBW")
        raise ClipIOError(f"truncated LUT header: {len(raw)} bytes")
    magic, version, role, t_in, t_out, alpha, w1, w2 = _HEADER.unpack_from(raw)
    if magic != LUT_MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected MEBW")
    if version != LUT_VERSION:
        raise FormatError(f"unsupported MEBW version {version}")
    if role >= len(ROLES):
        raise FormatError(f"unknown MEBW role code {role}")
    expected = t_in * t_out * 8
    payload = raw[_HEADER.size:]
    if len(payload) > expected:
        raise FormatError(f"MEBW payload has {len(payload) - expected} trailing bytes")
    if len(payload) < expected:
        raise ClipIOError(
            f"truncated MEBW payload: {len(payload) // 8} doubles, expected {t_in * t_out}"
        )
    matrix = np.frombuffer(payload, dtype="<f8").reshape(t_in, t_out).astype(np.float64)
    params = None
    if ROLES[role] != "interpolate":
        try:
            params = MagnifyParams(alpha, w1, w2)
        except ValueError as exc:
            raise FormatError(f"MEBW header carries invalid parameters: {exc}") from exc
    return OperatorMatrix(matrix, ROLES[role], params, t_in, t_out)


def read_lut(path) -> OperatorMatrix:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ClipIOError(f"cannot read LUT {path}: {exc}") from exc
    return parse_lut(raw)
