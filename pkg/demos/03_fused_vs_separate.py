"""
Fused operator versus the two-stage pipeline
============================================

The two-stage pipeline runs the recursive smoothers over every pixel and
then fits sine-curve loadings per pixel. The fused pipeline does a single
``(pixels x T) @ (T x T')`` product with a cached operator. Both give the
same frames; only the cost differs.
"""

import sys

import numpy as np

from motionboost import Clip, MagnifyParams, OperatorCache, apply_operator
from motionboost.bench import BenchCase, run_case, write_report
from motionboost.interpolate import oracle_interpolate
from motionboost.magnify import oracle_magnify

params = MagnifyParams()

# Same answer first.
rng = np.random.default_rng(0)
clip = Clip(40, 30, 1, rng.random((1200, 30)))
fused = apply_operator(clip, OperatorCache().fused(30, 10, params))
separate = oracle_interpolate(oracle_magnify(clip, params), 10)
print("max |fused - separate| =", np.abs(fused.values - separate.values).max())

# Then the clock.
rows = []
for case in (BenchCase(170, 140, 100, 10), BenchCase(170, 140, 30, 10), BenchCase(64, 64, 200, 60)):
    rows.extend(run_case(case, params, reps=5))
write_report(rows, sys.stdout)
