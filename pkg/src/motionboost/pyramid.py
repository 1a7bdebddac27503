"""Laplacian pyramid with a separable 5-tap binomial kernel.

Reduction blurs with (1, 4, 6, 4, 1)/16 under half-sample symmetric
padding and keeps every other sample, so each level has ``ceil(n/2)``
rows and columns. Expansion zero-stuffs and blurs with twice the kernel
under whole-sample symmetric padding.
Band-pass levels are defined as ``level - expand(next)`` and collapse adds
the same expansion back, so round trips are exact up to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import convolve1d

from .errors import PyramidDepthError

KERNEL = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0


@dataclass
class PyramidStack:
    bands: list  # finest first
    residual: np.ndarray

    @property
    def levels(self):
        return len(self.bands) + 1

    def level(self, s):
        return self.bands[s] if s < len(self.bands) else self.residual


def _blur(img, kernel, mode):
    out = convolve1d(img, kernel, axis=0, mode=mode)
    return convolve1d(out, kernel, axis=1, mode=mode)


def reduce(img):
    return _blur(img, KERNEL, "reflect")[::2, ::2]


def expand(img, shape):
    up = np.zeros(tuple(shape[:2]) + img.shape[2:])
    up[::2, ::2] = img
    # whole-sample mirroring keeps the zero-stuffed samples in phase at the borders
    return _blur(up, 2.0 * KERNEL, "mirror")


def level_shapes(shape, levels):
    h, w = shape[:2]
    out = [(h, w)]
    for _ in range(levels - 1):
        h, w = -(-h // 2), -(-w // 2)
        out.append((h, w))
    return out


def check_depth(shape, levels, min_dim):
    if levels < 1:
        raise PyramidDepthError(f"levels must be >= 1, got {levels}")
    if levels == 1:
        return
    coarse = level_shapes(shape, levels)[-1]
    if min(coarse) < min_dim:
        raise PyramidDepthError(
            f"{levels} levels on a {shape[0]}x{shape[1]} frame leave a "
            f"{coarse[0]}x{coarse[1]} residual, below min_dim={min_dim}"
        )


def build_pyramid(frame, levels, min_dim=1):
    frame = np.asarray(frame, dtype=np.float64)
    check_depth(frame.shape, levels, min_dim)
    bands = []
    current = frame
    for _ in range(levels - 1):
        smaller = reduce(current)
        bands.append(current - expand(smaller, current.shape))
        current = smaller
    return PyramidStack(bands, current.copy() if levels == 1 else current)


def collapse_pyramid(stack):
    img = stack.residual
    for band in reversed(stack.bands):
        img = band + expand(img, band.shape)
    return img
