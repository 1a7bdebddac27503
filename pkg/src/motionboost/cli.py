"""Command-line entry point: ``motionboost {boost,lut,synth,verify,bench}``.

Exit codes: 0 success, 1 processing or verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import bench, verify
from .booster import BoosterParams, OperatorCache, boost_clip, fuse
from .clipio import ClipManifest, load_clip, read_lut, save_clip, write_lut
from .errors import BoostError, ValidationError
from .interpolate import build_interpolation_matrix
from .magnify import MagnifyParams, build_magnification_matrix
from .synthlab import SynthSpec, make_clip, write_ground_truth

log = logging.getLogger("motionboost")

# defaults used in the reference experiments: T' = 10, alpha = 16, w1 = 0.4, w2 = 0.05
DEFAULT_OUT_FRAMES = 10
DEFAULT_ALPHA = 16.0
DEFAULT_W1 = 0.4
DEFAULT_W2 = 0.05


class StageError(Exception):
    def __init__(self, stage, cause):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (BoostError, ValueError, OSError) as exc:
        raise StageError(name, exc) from exc


def _caps(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_magnify_flags(p):
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--w1", type=float, default=DEFAULT_W1)
    p.add_argument("--w2", type=float, default=DEFAULT_W2)


def cmd_boost(args):
    src = ClipManifest(args.input, args.pattern, args.channels, start=args.start)
    m = _stage("params", MagnifyParams, args.alpha, args.w1, args.w2)
    params = _stage("params", BoosterParams, m, args.frames, args.levels,
                    args.alpha_caps, args.min_dim)
    clip = _stage("load", load_clip, src)
    cache = OperatorCache(args.lut_cache)
    out = _stage("boost", boost_clip, clip, params, cache, args.threads)
    dst = ClipManifest(args.output, args.output_pattern or args.pattern, args.channels,
                       start=args.start, bit_depth=args.bit_depth)
    _stage("save", save_clip, out, dst)
    log.info("wrote %d frames to %s", out.frames, args.output)
    return 0


def _build_operator(role, t_in, t_out, m):
    if role == "magnify":
        return build_magnification_matrix(m, t_in)
    wi = build_interpolation_matrix(t_in, t_out)
    if role == "interpolate":
        return wi
    return fuse(build_magnification_matrix(m, t_in), wi)


def cmd_lut(args):
    if args.lut_cmd == "build":
        m = _stage("params", MagnifyParams, args.alpha, args.w1, args.w2)
        w = _stage("build", _build_operator, args.role, args.t_in, args.t_out, m)
        _stage("write", write_lut, w, args.path)
        return 0
    try:
        w = read_lut(args.path)
    except (BoostError, OSError) as exc:
        raise StageError("dump", f"invalid MEBW file {args.path}: {exc}") from exc
    m = w.params
    print(f"magic: MEBW  version: 1  role: {w.role}")
    print(f"t_in: {w.t_in}  t_out: {w.t_out}")
    if m is not None:
        print(f"alpha: {m.alpha!r}  w1: {m.w1!r}  w2: {m.w2!r}")
    print("column sums:")
    for j, s in enumerate(w.column_sums(), start=1):
        print(f"  {j:4d}  {s:.9f}")
    return 0


def cmd_synth(args):
    try:
        spec = SynthSpec(args.width, args.height, args.frames, args.kind, args.wavelength,
                         args.motion, args.amplitude, args.omega, args.step_size,
                         args.step_frame, args.contrast)
    except ValidationError as exc:
        print(f"motionboost synth: invalid spec: {exc}", file=sys.stderr)
        return 2
    clip, truth = make_clip(spec)
    _stage("save", save_clip, clip,
           ClipManifest(args.output, args.pattern, "gray", bit_depth=args.bit_depth))
    truth_path = Path(args.truth) if args.truth else Path(args.output) / "ground_truth.csv"
    _stage("save", write_ground_truth, truth, truth_path)
    return 0


def cmd_verify(args):
    luts = []
    for path in args.lut or ():
        luts.append((f"lut:{path}", _stage("load", read_lut, path)))
    results = verify.run_all(args.seed, args.instances, luts, threads=args.threads)
    print(verify.format_table(results))
    ok = all(r.passed for r in results)
    print("ALL PASS" if ok else "FAILED")
    return 0 if ok else 1


def cmd_bench(args):
    cases = args.case or [bench.BenchCase()]
    m = _stage("params", MagnifyParams, args.alpha, args.w1, args.w2)
    rows = []
    for case in cases:
        rows.extend(bench.run_case(case, m, args.reps, args.warmup, args.threads, args.seed))
    if args.output:
        with open(args.output, "w", newline="") as fh:
            bench.write_report(rows, fh)
    else:
        bench.write_report(rows)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="motionboost", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("boost", help="magnify and resample a frame sequence")
    p.add_argument("--input", required=True, help="directory of input frames")
    p.add_argument("--output", required=True, help="directory for output frames")
    p.add_argument("--pattern", default="frame_%04d.png", help="printf-style frame filename")
    p.add_argument("--output-pattern", default=None)
    p.add_argument("--start", type=int, default=1, help="index of the first frame file")
    p.add_argument("--channels", choices=("gray", "rgb"), default="gray")
    p.add_argument("--bit-depth", type=int, choices=(8, 16), default=8)
    p.add_argument("--frames", type=int, default=DEFAULT_OUT_FRAMES, help="output length T'")
    _add_magnify_flags(p)
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--alpha-caps", type=_caps, default=None)
    p.add_argument("--min-dim", type=int, default=16)
    p.add_argument("--lut-cache", default=None, help="directory for persisted operators")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_boost)

    p = sub.add_parser("lut", help="build or inspect operator LUT files")
    lsub = p.add_subparsers(dest="lut_cmd", required=True)
    b = lsub.add_parser("build")
    b.add_argument("path")
    b.add_argument("--t-in", type=int, required=True)
    b.add_argument("--t-out", type=int, required=True)
    b.add_argument("--role", choices=("magnify", "interpolate", "fused"), default="fused")
    _add_magnify_flags(b)
    d = lsub.add_parser("dump")
    d.add_argument("path")
    p.set_defaults(func=cmd_lut)

    p = sub.add_parser("synth", help="render a synthetic clip with known motion")
    p.add_argument("--output", required=True)
    p.add_argument("--pattern", default="frame_%04d.png")
    p.add_argument("--truth", default=None, help="ground-truth CSV (default OUTPUT/ground_truth.csv)")
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--frames", type=int, default=64)
    p.add_argument("--kind", choices=("plaid", "gaussian-blob"), default="plaid")
    p.add_argument("--wavelength", type=float, default=16.0)
    p.add_argument("--motion", choices=("sine", "step"), default="sine")
    p.add_argument("--amplitude", type=float, default=0.1)
    p.add_argument("--omega", type=float, default=math.pi / 4)
    p.add_argument("--step-size", type=float, default=0.0)
    p.add_argument("--step-frame", type=int, default=1)
    p.add_argument("--contrast", type=float, default=0.25)
    p.add_argument("--bit-depth", type=int, choices=(8, 16), default=16)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="run the randomized invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--lut", action="append", help="also check this LUT file (repeatable)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time fused against separate pipelines")
    p.add_argument("--case", action="append", type=bench.BenchCase.parse,
                   help="WxHxTxT' (repeatable; default 170x140x100x10)")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", default=None, help="CSV path (default stdout)")
    _add_magnify_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except StageError as exc:
        print(f"motionboost {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
