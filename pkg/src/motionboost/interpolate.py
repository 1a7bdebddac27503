"""Temporal interpolation by resampling latent sine curves.

A clip of ``T`` frames is embedded on ``T - 1`` curves

    f_k(t) = sin(pi*k*t + pi*(T - k) / (2T)),   k = 1..T-1

sampled at ``t = i/T``. These are the path-graph Laplacian eigenvectors
``cos(pi*k*(2i - 1) / (2T))`` in sine phase, so the sample matrix has
orthogonal zero-mean rows. Resampling the curves on ``j/T'`` gives a
video-independent ``T x T'`` operator.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateLengthError, RangeError
from .numcore import Clip, matmul, solve_spd
from .operators import OperatorMatrix


def latent_curve(k: int, t: float, t_len: int) -> float:
    if not 1 <= k <= t_len - 1:
        raise RangeError(f"curve index {k} outside 1..{t_len - 1}")
    if not 0.0 < t <= 1.0:
        raise RangeError(f"normalized time {t} outside (0, 1]")
    return math.sin(math.pi * k * t + math.pi * (t_len - k) / (2 * t_len))


def build_curve_matrix(t_len: int, n_samples: int) -> np.ndarray:
    """``(T-1) x n_samples`` matrix of curve values on the grid ``j/n_samples``."""
    if t_len < 2:
        raise DegenerateLengthError(f"need at least 2 source frames, got {t_len}")
    if n_samples < 1:
        raise RangeError(f"need at least one sample, got {n_samples}")
    k = np.arange(1, t_len)[:, None]
    s = (np.arange(1, n_samples + 1) / n_samples)[None, :]
    return np.sin(np.pi * k * s + np.pi * (t_len - k) / (2 * t_len))


def interpolation_matrix(t_len: int, out_len: int) -> np.ndarray:
    if t_len < 2:
        raise DegenerateLengthError(f"need at least 2 source frames, got {t_len}")
    if out_len < 1:
        raise RangeError(f"output length must be >= 1, got {out_len}")
    y = build_curve_matrix(t_len, t_len)
    y_out = build_curve_matrix(t_len, out_len)
    gram = matmul(y, y.T)
    coef = solve_spd(gram, y_out)
    centred = y.T - y.T.mean(axis=0)  # (I - 1/T) @ Y.T
    return matmul(centred, coef) + 1.0 / t_len


def build_interpolation_matrix(t_len: int, out_len: int) -> OperatorMatrix:
    return OperatorMatrix(
        interpolation_matrix(t_len, out_len), "interpolate", None, t_len, out_len
    )


def oracle_interpolate(clip: Clip, out_len: int) -> Clip:
    """Reference interpolation by fitting the curve loadings per pixel.

    Solves the least-squares problem ``min ||A Y - (V - mean)||`` through
    the normal equations and evaluates ``A Y' + mean`` directly, without
    ever forming the ``T x T'`` operator.
    """
    t_len = clip.frames
    if t_len < 2:
        raise DegenerateLengthError(f"need at least 2 frames, got {t_len}")
    v = clip.values
    mean = v.mean(axis=1, keepdims=True)
    y = build_curve_matrix(t_len, t_len)
    y_out = build_curve_matrix(t_len, out_len)
    loadings = solve_spd(y @ y.T, y @ (v - mean).T).T
    return clip.with_values(loadings @ y_out + mean)
