"""Fused-versus-separate timing harness.

The fused path looks the ``T x T'`` operator up in a warm cache and does
one matrix product. The separate path runs the recursive magnifier and
then the least-squares interpolator, the way a two-stage pipeline would.
"""
from __future__ import annotations

import csv
import statistics
import sys
import time
from dataclasses import dataclass

import numpy as np

from .booster import OperatorCache, apply_operator
from .interpolate import oracle_interpolate
from .magnify import MagnifyParams, oracle_magnify
from .numcore import Clip

COLUMNS = ["case", "w", "h", "t_in", "t_out", "pipeline", "reps", "median_s", "speedup", "flag"]


@dataclass(frozen=True)
class BenchCase:
    width: int = 170
    height: int = 140
    t_in: int = 100
    t_out: int = 10

    @property
    def name(self):
        return f"{self.width}x{self.height}x{self.t_in}x{self.t_out}"

    @classmethod
    def parse(cls, text):
        """Parse ``WxHxTxT'``, e.g. ``170x140x100x10``."""
        parts = [int(v) for v in text.lower().split("x")]
        if len(parts) != 4 or min(parts) < 1:
            raise ValueError(f"case must look like WxHxTxT', got {text!r}")
        return cls(*parts)


def _median_time(fn, reps, warmup):
    for _ in range(warmup):
        fn()
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return max(statistics.median(times), 1e-9)


def run_case(case: BenchCase, params=None, reps=5, warmup=1, threads=1, seed=0):
    """Time both pipelines on a random grayscale clip; returns two report rows."""
    params = params or MagnifyParams()
    rng = np.random.default_rng(seed)
    clip = Clip(case.width, case.height, 1, rng.random((case.width * case.height, case.t_in)))
    cache = OperatorCache()

    def fused():
        w = cache.fused(case.t_in, case.t_out, params)
        return apply_operator(clip, w, threads=threads)

    def separate():
        return oracle_interpolate(oracle_magnify(clip, params), case.t_out)

    t_fused = _median_time(fused, reps, max(warmup, 1))
    t_sep = _median_time(separate, reps, warmup)
    speedup = t_sep / t_fused
    flag = "low-confidence" if reps < 5 else ""
    base = dict(case=case.name, w=case.width, h=case.height, t_in=case.t_in,
                t_out=case.t_out, reps=reps, speedup=speedup, flag=flag)
    return [
        dict(base, pipeline="fused", median_s=t_fused),
        dict(base, pipeline="separate", median_s=t_sep),
    ]


def write_report(rows, stream=None):
    out = csv.DictWriter(stream or sys.stdout, fieldnames=COLUMNS, lineterminator="\n")
    out.writeheader()
    for row in rows:
        out.writerow({k: (f"{v:.6g}" if isinstance(v, float) else v) for k, v in row.items()})
