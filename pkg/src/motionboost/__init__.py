"""Reveal subtle motion in short clips with one precomputed temporal operator.

The operator ``W = W_M @ W_I`` combines Eulerian magnification (``W_M``,
upper triangular) with sine-curve temporal resampling (``W_I``). Both
factors depend only on the frame counts and the magnification parameters,
so ``W`` is built once and applied to any clip as ``V @ W``.
"""
from .booster import (BoosterParams, OperatorCache, apply_operator, boost_clip,
                      boost_pyramid, fuse, truncate_alpha)
from .clipio import ClipManifest, load_clip, read_lut, save_clip, write_lut
from .errors import BoostError
from .interpolate import (build_curve_matrix, build_interpolation_matrix,
                          latent_curve, oracle_interpolate)
from .magnify import (MagnifyParams, build_magnification_matrix, filter_gain,
                      oracle_magnify)
from .numcore import Clip, matmul, solve_spd
from .operators import OperatorMatrix
from .pyramid import PyramidStack, build_pyramid, collapse_pyramid
from .synthlab import SynthSpec, make_clip, measure_displacement

__version__ = "0.1.0"
