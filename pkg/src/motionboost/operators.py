from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ShapeError

ROLES = ("magnify", "interpolate", "fused")


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A ``t_in x t_out`` temporal operator applied as ``V @ matrix``.

    ``params`` records what produced it: a ``MagnifyParams`` for the
    magnify and fused roles, ``None`` for pure interpolation.
    """

    matrix: np.ndarray
    role: str
    params: Any
    t_in: int
    t_out: int

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if self.role not in ROLES:
            raise ShapeError(f"unknown operator role {self.role!r}")
        if self.t_in < 1 or self.t_out < 1:
            raise ShapeError(f"operator must be at least 1x1, got {self.t_in}x{self.t_out}")
        if m.shape != (self.t_in, self.t_out):
            raise ShapeError(f"matrix shape {m.shape} != ({self.t_in}, {self.t_out})")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def column_sums(self):
        return self.matrix.sum(axis=0)
