"""Randomized invariant suites behind ``motionboost verify``.

Each suite draws its instances from ``numpy.random.default_rng([seed, i])``
so a failure can be replayed from the ``seed:i`` tag it reports.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .booster import BoosterParams, apply_operator, boost_clip, fuse
from .interpolate import (build_curve_matrix, build_interpolation_matrix,
                          oracle_interpolate)
from .magnify import MagnifyParams, build_magnification_matrix, oracle_magnify
from .numcore import Clip
from .pyramid import build_pyramid, collapse_pyramid

FUSED_TOL = 1e-8
IDENTITY_TOL = 1e-9
PIPELINE_IDENTITY_TOL = 1e-6
COLUMN_SUM_TOL = 1e-9
GRAM_TOL = 1e-9
PYRAMID_TOL = 1e-6


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def check(self, ok, tag, detail):
        self.checked += 1
        if not ok:
            self.failures.append(f"{tag}: {detail}")


def random_params(rng, alpha_max=32.0):
    while True:
        w1, w2 = sorted(rng.uniform(0.0, 1.0, 2), reverse=True)
        if 0.0 < w2 < w1 < 1.0:
            return MagnifyParams(float(rng.uniform(0.0, alpha_max)), float(w1), float(w2))


def random_instance(rng):
    d = int(rng.integers(1, 65))
    t_in = int(rng.integers(3, 41))
    t_out = int(rng.integers(2, 41))
    clip = Clip(d, 1, 1, rng.random((d, t_in)))
    return clip, t_out, random_params(rng)


def oracle_equivalence(seed=0, instances=200):
    res = SuiteResult("oracle-equivalence")
    for i in range(instances):
        rng = np.random.default_rng([seed, i])
        clip, t_out, p = random_instance(rng)
        wm = build_magnification_matrix(p, clip.frames)
        w = fuse(wm, build_interpolation_matrix(clip.frames, t_out))
        fused = apply_operator(clip, w).values
        separate = oracle_interpolate(oracle_magnify(clip, p), t_out).values
        err = np.max(np.abs(fused - separate))
        res.check(err <= FUSED_TOL, f"{seed}:{i}", f"fused vs separate max diff {err:.3e}")
    return res


def identity_degeneration(seed=0, t_max=64, threads=1):
    res = SuiteResult("identity-degeneration")
    for t in range(2, t_max + 1):
        wm = build_magnification_matrix(MagnifyParams(0.0, 0.4, 0.05), t).matrix
        res.check(np.array_equal(wm, np.eye(t)), f"T={t}", "W_M(alpha=0) is not exactly I")
        err = np.max(np.abs(build_interpolation_matrix(t, t).matrix - np.eye(t)))
        res.check(err <= IDENTITY_TOL, f"T={t}", f"W_I(T, T) deviates from I by {err:.3e}")
    rng = np.random.default_rng([seed, 0])
    frames = int(rng.integers(3, 17))
    clip = Clip(40, 36, 1, rng.random((40 * 36, frames)))
    for levels in (1, 3):
        p = BoosterParams(MagnifyParams(0.0, 0.4, 0.05), out_len=frames, levels=levels, min_dim=4)
        err = np.max(np.abs(boost_clip(clip, p, threads=threads).values - clip.values))
        res.check(err <= PIPELINE_IDENTITY_TOL, f"{seed}:levels={levels}",
                  f"pipeline identity off by {err:.3e}")
    return res


def _column_sum_error(w):
    return float(np.max(np.abs(w.column_sums() - 1.0)))


def column_sums(seed=0, instances=50, extra=()):
    res = SuiteResult("column-sum")
    for i in range(instances):
        rng = np.random.default_rng([seed, i])
        t_in = int(rng.integers(2, 65))
        t_out = int(rng.integers(1, 65))
        p = random_params(rng)
        wm = build_magnification_matrix(p, t_in)
        wi = build_interpolation_matrix(t_in, t_out)
        for w in (wm, wi, fuse(wm, wi)):
            err = _column_sum_error(w)
            res.check(err <= COLUMN_SUM_TOL, f"{seed}:{i}:{w.role}",
                      f"column sums off by {err:.3e}")
    for label, w in extra:
        err = _column_sum_error(w)
        res.check(err <= COLUMN_SUM_TOL, label, f"column sums off by {err:.3e}")
    return res


def orthogonality(t_max=256):
    res = SuiteResult("orthogonality")
    for t in range(2, t_max + 1):
        y = build_curve_matrix(t, t)
        err = np.max(np.abs(y @ y.T - 0.5 * t * np.eye(t - 1)))
        res.check(err <= GRAM_TOL, f"T={t}", f"Y Y^T deviates from (T/2) I by {err:.3e}")
        if t <= 64:
            last = build_interpolation_matrix(t, int(t * 1.5)).matrix[:, -1]
            e = np.zeros(t)
            e[-1] = 1.0
            err = np.max(np.abs(last - e))
            res.check(err <= GRAM_TOL, f"T={t}", f"last W_I column deviates from e_T by {err:.3e}")
    return res


def pyramid_round_trip(seed=0, instances=100):
    res = SuiteResult("pyramid-round-trip")
    for i in range(instances):
        rng = np.random.default_rng([seed, i])
        h, w = (int(v) for v in rng.integers(8, 97, 2))
        levels = int(rng.integers(1, 4))
        shape = (h, w) if rng.random() < 0.7 else (h, w, 3)
        img = rng.random(shape)
        err = np.max(np.abs(collapse_pyramid(build_pyramid(img, levels)) - img))
        res.check(err <= PYRAMID_TOL, f"{seed}:{i}", f"round trip error {err:.3e}")
    return res


def run_all(seed=0, instances=200, luts=(), threads=1):
    return [
        oracle_equivalence(seed, instances),
        identity_degeneration(seed, threads=threads),
        column_sums(seed, extra=luts),
        orthogonality(),
        pyramid_round_trip(seed),
    ]


def format_table(results):
    lines = [f"{'suite':<24}{'checks':>8}  result"]
    for r in results:
        lines.append(f"{r.name:<24}{r.checked:>8}  {'PASS' if r.passed else 'FAIL'}")
        lines.extend(f"    {msg}" for msg in r.failures)
    return "\n".join(lines)
