"""Fused magnify-then-interpolate operator and the clip pipeline built on it."""
from __future__ import annotations

import hashlib
import struct
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateLengthError, RangeError, ShapeError, ValidationError
from .interpolate import build_interpolation_matrix
from .magnify import MagnifyParams, build_magnification_matrix
from .numcore import Clip, matmul
from .operators import OperatorMatrix
from .pyramid import PyramidStack, build_pyramid, check_depth, collapse_pyramid

DISPLACEMENT_BOUND_PX = 1.0


@dataclass(frozen=True)
class BoosterParams:
    magnify: MagnifyParams = field(default_factory=MagnifyParams)
    out_len: int = 10
    levels: int = 1
    alpha_caps: Optional[Sequence[float]] = None
    min_dim: int = 16

    def __post_init__(self):
        if self.out_len < 1:
            raise ValidationError(f"out_len must be >= 1, got {self.out_len}")
        if self.levels < 1:
            raise ValidationError(f"levels must be >= 1, got {self.levels}")
        if self.alpha_caps is not None:
            caps = tuple(float(c) for c in self.alpha_caps)
            if len(caps) != self.levels or any(not c >= 0 for c in caps):
                raise ValidationError(
                    f"alpha_caps needs {self.levels} non-negative entries, got {caps}"
                )
            object.__setattr__(self, "alpha_caps", caps)


def fuse(wm: OperatorMatrix, wi: OperatorMatrix, threads=1) -> OperatorMatrix:
    """Compose magnification then interpolation into one ``T x T'`` operator."""
    if wm.role != "magnify" or wi.role != "interpolate":
        raise ShapeError(f"expected (magnify, interpolate), got ({wm.role}, {wi.role})")
    if wm.t_out != wi.t_in:
        raise ShapeError(f"magnify emits {wm.t_out} frames, interpolate expects {wi.t_in}")
    w = matmul(wm.matrix, wi.matrix, threads=threads)
    return OperatorMatrix(w, "fused", wm.params, wm.t_in, wi.t_out)


def apply_operator(clip: Clip, w: OperatorMatrix, threads=1) -> Clip:
    if clip.frames != w.t_in:
        raise ShapeError(f"clip has {clip.frames} frames, operator expects {w.t_in}")
    return clip.with_values(matmul(clip.values, w.matrix, threads=threads))


def truncate_alpha(p: BoosterParams, level: int) -> float:
    """Magnification factor for one pyramid level.

    With a single level there is no pyramid and only an explicit cap
    applies. Otherwise the residual gets 0, explicit caps win when given,
    and the default keeps ``(1 + alpha) * delta < lambda / 8`` for a
    level wavelength of ``4 * 2**level`` px.
    """
    if not 0 <= level < p.levels:
        raise RangeError(f"level {level} outside 0..{p.levels - 1}")
    alpha = p.magnify.alpha
    if p.levels > 1 and level == p.levels - 1:
        return 0.0
    if p.alpha_caps is not None:
        return min(alpha, p.alpha_caps[level])
    if p.levels == 1:
        return alpha
    wavelength = 4.0 * 2**level
    return min(alpha, max(0.0, wavelength / (8.0 * DISPLACEMENT_BOUND_PX) - 1.0))


def _key_digest(t_in, t_out, m: MagnifyParams):
    raw = struct.pack("<IIddd", t_in, t_out, m.alpha, m.w1, m.w2)
    return hashlib.sha256(raw).hexdigest()[:16]


class OperatorCache:
    """Fused operators keyed by ``(T, T', alpha, w1, w2)``.

    Kept in memory and, when ``directory`` is given, persisted as LUT
    files so later runs load instead of rebuilding.
    """

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory is not None else None
        self._store = {}
        self._interp = {}
        self._lock = threading.Lock()

    def interpolation(self, t_in, t_out):
        key = (t_in, t_out)
        with self._lock:
            if key not in self._interp:
                self._interp[key] = build_interpolation_matrix(t_in, t_out)
            return self._interp[key]

    def fused(self, t_in, t_out, m: MagnifyParams):
        from .clipio import read_lut, write_lut

        key = (t_in, t_out, m.alpha, m.w1, m.w2)
        with self._lock:
            hit = self._store.get(key)
        if hit is not None:
            return hit
        path = None
        if self.directory is not None:
            path = self.directory / f"W_{t_in}x{t_out}_{_key_digest(t_in, t_out, m)}.mebw"
            if path.exists():
                w = read_lut(path)
                with self._lock:
                    self._store[key] = w
                return w
        w = fuse(build_magnification_matrix(m, t_in), self.interpolation(t_in, t_out))
        if path is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            write_lut(w, path)
        with self._lock:
            self._store[key] = w
        return w

    def __len__(self):
        return len(self._store)


def _clip_levels(clip, levels, min_dim):
    """Per-level ``d_s x T`` matrices plus the image shapes to rebuild frames."""
    stacks = [build_pyramid(clip.frame(t), levels, min_dim) for t in range(clip.frames)]
    per_level = []
    shapes = []
    for s in range(levels):
        imgs = [st.level(s) for st in stacks]
        shapes.append(imgs[0].shape)
        per_level.append(np.stack([im.reshape(-1) for im in imgs], axis=1))
    return per_level, shapes


def boost_pyramid(clip: Clip, operators: Sequence[OperatorMatrix], min_dim=1, threads=1):
    """Apply ``operators[s]`` across time at pyramid level ``s``; last is the residual."""
    levels = len(operators)
    if levels == 1:
        return apply_operator(clip, operators[0], threads)
    check_depth((clip.height, clip.width), levels, min_dim)
    t_out = operators[0].t_out
    if any(w.t_in != clip.frames or w.t_out != t_out for w in operators):
        raise ShapeError("all level operators must map the clip's T frames to the same T'")
    per_level, shapes = _clip_levels(clip, levels, min_dim)
    outs = [matmul(v, w.matrix, threads=threads) for v, w in zip(per_level, operators)]
    frames = []
    for j in range(t_out):
        bands = [outs[s][:, j].reshape(shapes[s]) for s in range(levels - 1)]
        stack = PyramidStack(bands, outs[-1][:, j].reshape(shapes[-1]))
        frames.append(collapse_pyramid(stack))
    return Clip.from_frames(frames)


def level_operators(t_in, p: BoosterParams, cache=None):
    cache = cache if cache is not None else OperatorCache()
    return [
        cache.fused(t_in, p.out_len, p.magnify.with_alpha(truncate_alpha(p, s)))
        for s in range(p.levels)
    ]


def boost_clip(clip: Clip, p: BoosterParams, cache=None, threads=1) -> Clip:
    """Magnify subtle motion and resample the clip to ``p.out_len`` frames."""
    if clip.frames < 2:
        raise DegenerateLengthError(f"need at least 2 frames, got {clip.frames}")
    if p.levels > 1:
        check_depth((clip.height, clip.width), p.levels, p.min_dim)
    ops = level_operators(clip.frames, p, cache)
    return boost_pyramid(clip, ops, min_dim=p.min_dim, threads=threads)
