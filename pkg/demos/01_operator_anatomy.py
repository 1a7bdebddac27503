"""
What the fused operator looks like
==================================

Magnification and temporal resampling are both linear in the input
frames, so each is a matrix acting on the time axis. This script builds
the two factors for a tiny clip, multiplies them, and checks a few of the
properties that make the product safe to precompute.
"""

import numpy as np

from motionboost import (MagnifyParams, build_interpolation_matrix,
                         build_magnification_matrix, fuse)

np.set_printoptions(precision=4, suppress=True, linewidth=110)

# The magnification factor: upper triangular because an output frame only
# depends on the frames before it.
params = MagnifyParams(alpha=16.0, w1=0.4, w2=0.05)
wm = build_magnification_matrix(params, 5)
print("W_M (5 x 5):")
print(wm.matrix)

# The interpolation factor resamples 5 frames onto 8. It never looks at
# pixel values, only at the two frame counts.
wi = build_interpolation_matrix(5, 8)
print("\nW_I (5 x 8):")
print(wi.matrix)

w = fuse(wm, wi)
print("\nW = W_M @ W_I (5 x 8):")
print(w.matrix)

# Every column sums to one, so a static scene stays static.
print("\ncolumn sums of W:", w.column_sums())

# Both grids end at t = 1, so the last output frame is a copy of the
# magnified last input frame.
print("last column of W_I:", wi.matrix[:, -1])

# With alpha = 0 and no change in length the whole thing is the identity.
ident = fuse(build_magnification_matrix(params.with_alpha(0.0), 5),
             build_interpolation_matrix(5, 5))
print("\nmax |W - I| at alpha=0, T'=T:", np.abs(ident.matrix - np.eye(5)).max())
