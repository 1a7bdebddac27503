"""Eulerian magnification as a precomputed upper-triangular matrix.

Each pixel's time series is run through two recursive exponential
smoothers with weights ``w1 > w2``; their difference is the band of
"historical" motion that gets scaled by ``alpha`` and added back. Because
the recursion is linear, the whole thing collapses to ``V @ W_M``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyClipError, RangeError, ValidationError
from .numcore import Clip
from .operators import OperatorMatrix


@dataclass(frozen=True)
class MagnifyParams:
    alpha: float = 16.0
    w1: float = 0.4
    w2: float = 0.05

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ValidationError(f"alpha must be finite and >= 0, got {self.alpha}")
        if not 0 < self.w2 < self.w1 < 1:
            raise ValidationError(
                f"weights must satisfy 0 < w2 < w1 < 1, got w1={self.w1}, w2={self.w2}"
            )

    def with_alpha(self, alpha):
        return MagnifyParams(alpha, self.w1, self.w2)


def _power_table(base, n):
    # base**a for a = 0..n-1 by repeated multiplication
    table = np.empty(n)
    acc = 1.0
    for a in range(n):
        table[a] = acc
        acc *= base
    return table


def magnification_matrix(p: MagnifyParams, t_len: int) -> np.ndarray:
    """The raw ``T x T`` magnification matrix.

    Column ``j`` holds the coefficients of every input frame in output frame
    ``j``. Entry (0, 0) is exactly 1: the first output frame has no history
    to amplify.
    """
    if t_len < 1:
        raise EmptyClipError("magnification needs at least one frame")
    q1 = _power_table(1.0 - p.w1, t_len)
    q2 = _power_table(1.0 - p.w2, t_len)
    w = np.zeros((t_len, t_len))
    for i in range(t_len):
        # first frame seeds both smoothers with weight 1, later frames with w_k
        g1, g2 = (1.0, 1.0) if i == 0 else (p.w1, p.w2)
        a = np.arange(1, t_len - i)
        w[i, i + 1:] = p.alpha * q1[a] * g1 - p.alpha * q2[a] * g2
        w[i, i] = 1.0 if i == 0 else p.alpha * (p.w1 - p.w2) + 1.0
    return w


def build_magnification_matrix(p: MagnifyParams, t_len: int) -> OperatorMatrix:
    return OperatorMatrix(magnification_matrix(p, t_len), "magnify", p, t_len, t_len)


def oracle_magnify(clip: Clip, p: MagnifyParams) -> Clip:
    """Reference magnification by running the recursive smoothers frame by frame."""
    v = clip.values
    if v.shape[1] < 1:
        raise EmptyClipError("clip has no frames")
    out = np.empty_like(v)
    low1 = v[:, 0].copy()
    low2 = v[:, 0].copy()
    out[:, 0] = v[:, 0]
    for t in range(1, v.shape[1]):
        low1 = p.w1 * v[:, t] + (1.0 - p.w1) * low1
        low2 = p.w2 * v[:, t] + (1.0 - p.w2) * low2
        out[:, t] = v[:, t] + p.alpha * (low1 - low2)
    return clip.with_values(out)


def filter_gain(p: MagnifyParams, omega: float) -> float:
    """Steady-state amplitude gain for a temporal sinusoid of ``omega`` rad/frame."""
    if not 0.0 <= omega <= math.pi:
        raise RangeError(f"omega must lie in [0, pi], got {omega}")
    if omega == 0.0:
        return 1.0
    z = cmath.exp(-1j * omega)
    h1 = p.w1 / (1.0 - (1.0 - p.w1) * z)
    h2 = p.w2 / (1.0 - (1.0 - p.w2) * z)
    return abs(1.0 + p.alpha * (h1 - h2))
