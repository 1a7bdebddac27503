"""Exit criteria. Each test records one PASS/FAIL line in the terminal summary."""
import math
import subprocess
import sys
import time

import numpy as np

from motionboost import verify
from motionboost.bench import BenchCase, run_case
from motionboost.booster import BoosterParams, OperatorCache, boost_clip, fuse
from motionboost.clipio import lut_bytes, parse_lut
from motionboost.interpolate import build_curve_matrix, interpolation_matrix, oracle_interpolate
from motionboost.magnify import (MagnifyParams, build_magnification_matrix, filter_gain,
                                 magnification_matrix, oracle_magnify)
from motionboost.numcore import Clip
from motionboost.operators import OperatorMatrix
from motionboost.pyramid import build_pyramid, collapse_pyramid
from motionboost.synthlab import (SynthSpec, make_clip, measure_displacement,
                                  sinusoid_amplitude, steady_state_start)

PAPER_PARAMS = MagnifyParams(alpha=16.0, w1=0.4, w2=0.05)


def test_oracle_equivalence_suite(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(200):
        r = np.random.default_rng([2024, i])
        clip, t_out, p = verify.random_instance(r)
        out = boost_clip(clip, BoosterParams(p, out_len=t_out))
        ref = oracle_interpolate(oracle_magnify(clip, p), t_out)
        worst = max(worst, float(np.max(np.abs(out.values - ref.values))))
    elapsed = time.perf_counter() - t0
    criterion("oracle equivalence (200 instances, <=1e-8, <30 s)",
              worst <= 1e-8 and elapsed < 30, f"max diff {worst:.2e}, {elapsed:.1f} s")


def test_identity_degenerations(criterion):
    mag_exact = all(
        np.array_equal(magnification_matrix(MagnifyParams(0.0, 0.4, 0.05), t), np.eye(t))
        for t in range(1, 65)
    )
    interp = max(float(np.max(np.abs(interpolation_matrix(t, t) - np.eye(t))))
                 for t in range(2, 65))
    rng = np.random.default_rng(5)
    clip = Clip(96, 80, 1, rng.random((96 * 80, 9)))
    p = BoosterParams(MagnifyParams(0.0, 0.4, 0.05), out_len=9, levels=3)
    pipe = float(np.max(np.abs(boost_clip(clip, p).values - clip.values)))
    criterion("identity degenerations", mag_exact and interp <= 1e-9 and pipe <= 1e-6,
              f"W_M exact={mag_exact}, W_I err {interp:.1e}, pyramid pipeline err {pipe:.1e}")


def test_structural_invariants(criterion):
    upper = True
    colsum = 0.0
    for i in range(100):
        r = np.random.default_rng([99, i])
        t_in, t_out = int(r.integers(2, 65)), int(r.integers(1, 65))
        p = verify.random_params(r)
        wm = build_magnification_matrix(p, t_in)
        wi = OperatorCache().interpolation(t_in, t_out)
        upper &= bool(np.all(wm.matrix[np.tril_indices(t_in, -1)] == 0.0))
        for w in (wm, wi, fuse(wm, wi)):
            colsum = max(colsum, float(np.max(np.abs(w.column_sums() - 1.0))))
    gram = max(float(np.max(np.abs((y := build_curve_matrix(t, t)) @ y.T - 0.5 * t * np.eye(t - 1))))
               for t in range(2, 257))
    last = 0.0
    for t in range(2, 65):
        for t_out in (1, t - 1 or 1, 2 * t + 3):
            e = np.zeros(t)
            e[-1] = 1.0
            last = max(last, float(np.max(np.abs(interpolation_matrix(t, t_out)[:, -1] - e))))
    ok = upper and colsum <= 1e-9 and gram <= 1e-9 and last <= 1e-9
    criterion("structural invariants", ok,
              f"upper={upper}, colsum {colsum:.1e}, gram {gram:.1e}, last col {last:.1e}")


def test_closed_form_vs_recursion(criterion):
    w = magnification_matrix(MagnifyParams(1.0, 0.5, 0.25), 3)
    expected = np.array([[1, -0.25, -0.3125], [0, 1.25, 0.0625], [0, 0, 1.25]])
    criterion("closed form T=3 matrix (exact)", np.array_equal(w, expected), f"{w.tolist()}")


def test_interpolation_anchor(criterion):
    w = interpolation_matrix(2, 3)
    expected = np.array([[1.18301, 0.68301, 0.0], [-0.18301, 0.31699, 1.0]])
    err = float(np.max(np.abs(w - expected)))
    criterion("W_I(2, 3) anchor (<=1e-5)", err <= 1e-5, f"max diff {err:.1e}")


def test_amplification_law(criterion):
    t0 = time.perf_counter()
    omega = math.pi / 4
    spec = SynthSpec(width=64, height=64, frames=240, wavelength=16.0, amplitude=0.1, omega=omega)
    clip, _ = make_clip(spec)
    out = boost_clip(clip, BoosterParams(PAPER_PARAMS, out_len=spec.frames, levels=1))
    shift = measure_displacement(out, 0, spec.wavelength)
    measured = sinusoid_amplitude(shift, omega, start=steady_state_start(PAPER_PARAMS.w2))
    ratio = measured / (filter_gain(PAPER_PARAMS, omega) * spec.amplitude)
    elapsed = time.perf_counter() - t0
    criterion("amplification law ratio in [0.85, 1.15], <10 s",
              0.85 <= ratio <= 1.15 and elapsed < 10, f"ratio {ratio:.4f}, {elapsed:.2f} s")


def test_performance(criterion):
    t0 = time.perf_counter()
    rows = run_case(BenchCase(170, 140, 100, 10), PAPER_PARAMS, reps=5, warmup=1)
    fused, separate = (r["median_s"] for r in rows)
    elapsed = time.perf_counter() - t0
    criterion("fused median <= 0.5 x separate (170x140, 100->10, 5 reps)",
              fused <= 0.5 * separate and elapsed < 120,
              f"fused {fused * 1e3:.1f} ms, separate {separate * 1e3:.1f} ms, "
              f"speedup {separate / fused:.1f}x")


def _cli(*args):
    res = subprocess.run([sys.executable, "-m", "motionboost", *args],
                         capture_output=True, check=False)
    return res.returncode, res.stdout


def _tree(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


def test_determinism(criterion, tmp_path):
    verify_runs = [_cli("verify", "--instances", "50", "--threads", n) for n in ("1", "4", "1")]
    verify_same = verify_runs[0][0] == 0 and all(v == verify_runs[0] for v in verify_runs)
    clip_dir = tmp_path / "clip"
    code, _ = _cli("synth", "--output", str(clip_dir), "--frames", "12")
    assert code == 0
    outs = []
    for k, n in enumerate(("1", "4", "1")):
        dst = tmp_path / f"out{k}"
        code, _ = _cli("boost", "--input", str(clip_dir), "--output", str(dst),
                       "--threads", n, "--levels", "2", "--bit-depth", "16")
        assert code == 0
        outs.append(_tree(dst))
    boost_same = all(o == outs[0] for o in outs)
    criterion("determinism across threads {1,4} and cold runs", verify_same and boost_same,
              f"verify identical={verify_same}, boost identical={boost_same}")


def test_round_trips(criterion):
    lut_ok = True
    for i in range(1000):
        r = np.random.default_rng([31, i])
        t_in, t_out = int(r.integers(1, 40)), int(r.integers(1, 40))
        w1 = float(r.uniform(0.01, 0.99))
        w = OperatorMatrix(r.standard_normal((t_in, t_out)), "fused",
                           MagnifyParams(float(r.uniform(0, 32)), w1, w1 * float(r.uniform(0.01, 0.99))),
                           t_in, t_out)
        back = parse_lut(lut_bytes(w))
        lut_ok &= back.matrix.tobytes() == w.matrix.tobytes() and back.params == w.params
    pyr = 0.0
    for i in range(100):
        r = np.random.default_rng([37, i])
        h, wd = (int(v) for v in r.integers(16, 129, 2))
        img = r.random((h, wd))
        pyr = max(pyr, float(np.max(np.abs(collapse_pyramid(build_pyramid(img, 4)) - img))))
    criterion("LUT bit-exact x1000, pyramid round trip <=1e-6 x100", lut_ok and pyr <= 1e-6,
              f"lut exact={lut_ok}, pyramid err {pyr:.1e}")
