"""Dense matrix kernels and the clip value type.

Matrices are plain 2-D ``float64`` numpy arrays. The two kernels here fix
their summation order so results are bit-identical regardless of how many
worker threads share the work.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np
import scipy.linalg

from .errors import EmptyClipError, ShapeError, SingularMatrixError

SYMMETRY_RTOL = 1e-12
PIVOT_RTOL = 1e-14


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite, non-empty 2-D float64 array."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


@numba.njit(nogil=True, cache=True)
def _matmul_rows(a, b, out):
    # out[i, j] = a[i, 0]*b[0, j] + a[i, 1]*b[1, j] + ... in ascending p;
    # no fastmath, so the compiler may not reassociate the sum
    m, k = a.shape
    n = b.shape[1]
    for i in range(m):
        for j in range(n):
            out[i, j] = a[i, 0] * b[0, j]
        for p in range(1, k):
            aip = a[i, p]
            for j in range(n):
                out[i, j] += aip * b[p, j]


def matmul(a, b, threads=1):
    """Matrix product with a fixed ascending summation order.

    Rows of the output are split into contiguous blocks when ``threads > 1``;
    each entry is accumulated identically either way, so the result does not
    depend on ``threads``.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    a = np.ascontiguousarray(a)
    b = np.ascontiguousarray(b)
    m = a.shape[0]
    out = np.empty((m, b.shape[1]), dtype=np.float64)
    threads = max(1, min(int(threads), m))
    if threads == 1:
        _matmul_rows(a, b, out)
        return out
    bounds = np.linspace(0, m, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        jobs = [
            pool.submit(_matmul_rows, a[lo:hi], b, out[lo:hi])
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for job in jobs:
            job.result()
    return out


def solve_spd(a, b):
    """Solve ``a @ x = b`` for symmetric positive-definite ``a``.

    Uses an unpivoted Cholesky factorization. A pivot ``l_ii**2`` at or
    below ``1e-14 * trace(a)`` is treated as singular.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    n = a.shape[0]
    if a.shape[1] != n:
        raise ShapeError(f"a must be square, got {a.shape}")
    if b.shape[0] != n:
        raise ShapeError(f"b has {b.shape[0]} rows, expected {n}")
    scale = np.max(np.abs(a))
    if np.max(np.abs(a - a.T)) > SYMMETRY_RTOL * scale:
        raise ShapeError("a is not symmetric")
    threshold = PIVOT_RTOL * np.trace(a)
    try:
        low = scipy.linalg.cholesky(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("a is not positive definite") from exc
    if threshold <= 0 or np.min(np.diag(low) ** 2) <= threshold:
        raise SingularMatrixError("a is not positive definite (pivot below tolerance)")
    y = scipy.linalg.solve_triangular(low, b, lower=True, check_finite=False)
    return scipy.linalg.solve_triangular(low.T, y, lower=False, check_finite=False)


@dataclass(frozen=True)
class Clip:
    """A short video held as a ``d x T`` matrix.

    Each column is one frame flattened in (row, column, channel) order, so
    ``d = width * height * channels``. Values nominally live in [0, 1] but
    are never clamped here.
    """

    width: int
    height: int
    channels: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] < 1 or v.size == 0:
            raise EmptyClipError("clip must have at least one frame and one pixel")
        if self.channels not in (1, 3):
            raise ShapeError(f"channels must be 1 or 3, got {self.channels}")
        if v.shape[0] != self.width * self.height * self.channels:
            raise ShapeError(
                f"values have {v.shape[0]} rows, expected "
                f"{self.width}*{self.height}*{self.channels}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("clip values must be finite")
        v = v.view()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def frames(self):
        return self.values.shape[1]

    @property
    def pixels(self):
        return self.values.shape[0]

    def frame(self, t):
        """Frame ``t`` (0-based) as an (h, w) or (h, w, 3) image."""
        img = self.values[:, t].reshape(self.height, self.width, self.channels)
        return img[:, :, 0] if self.channels == 1 else img

    @classmethod
    def from_frames(cls, frames):
        """Build a clip from a sequence of equally sized images."""
        frames = [np.asarray(f, dtype=np.float64) for f in frames]
        if not frames:
            raise EmptyClipError("no frames given")
        shape = frames[0].shape
        for k, f in enumerate(frames):
            if f.shape != shape:
                raise ShapeError(f"frame {k} has shape {f.shape}, expected {shape}")
        channels = 1 if len(shape) == 2 else shape[2]
        values = np.stack([f.reshape(-1) for f in frames], axis=1)
        return cls(shape[1], shape[0], channels, values)

    @classmethod
    def from_signal(cls, series):
        """A one-pixel clip from a 1-D time series."""
        return cls(1, 1, 1, np.asarray(series, dtype=np.float64).reshape(1, -1))

    def with_values(self, values):
        return Clip(self.width, self.height, self.channels, values)
