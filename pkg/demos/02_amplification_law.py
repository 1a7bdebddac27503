"""
How much does a sub-pixel wiggle get amplified?
===============================================

Render a plaid that moves by a tenth of a pixel, push it through the
operator, and read the motion back from the phase of the plaid's
fundamental. In the small-motion regime the measured amplitude should
track the steady-state gain of the temporal filter.
"""

import math

from motionboost import BoosterParams, MagnifyParams, boost_clip, filter_gain
from motionboost.synthlab import (SynthSpec, make_clip, measure_displacement,
                                  sinusoid_amplitude, steady_state_start)

params = MagnifyParams(alpha=16.0, w1=0.4, w2=0.05)
skip = steady_state_start(params.w2)

print(f"{'omega':>8} {'expected':>10} {'measured':>10} {'ratio':>7}")
for omega in (0.05, 0.2, math.pi / 4, 1.5, 2.5):
    spec = SynthSpec(width=64, height=64, frames=240, wavelength=16.0,
                     amplitude=0.1, omega=omega)
    clip, truth = make_clip(spec)
    out = boost_clip(clip, BoosterParams(params, out_len=spec.frames))
    shift = measure_displacement(out, 0, spec.wavelength)
    measured = sinusoid_amplitude(shift, omega, start=skip)
    expected = filter_gain(params, omega) * spec.amplitude
    print(f"{omega:8.3f} {expected:10.4f} {measured:10.4f} {measured / expected:7.3f}")

# The difference of two smoothers is a band-pass: gain is exactly 1 at DC,
# peaks at low frequencies and falls back toward Nyquist.
