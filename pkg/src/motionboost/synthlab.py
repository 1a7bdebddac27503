"""Synthetic clips with known sub-pixel motion, and a phase-based displacement probe.

Patterns are evaluated in closed form at each frame's displacement, so the
ground truth carries no resampling error.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NoSignalError, ValidationError
from .numcore import Clip

PATTERNS = ("plaid", "gaussian-blob")
MOTIONS = ("sine", "step")


@dataclass(frozen=True)
class SynthSpec:
    """A pattern translating along x.

    Frames are numbered from 1. Sine motion is ``amplitude * sin(omega * t)``;
    step motion is 0 before ``step_frame`` and ``step_size`` from it on.
    """

    width: int = 64
    height: int = 64
    frames: int = 64
    pattern: str = "plaid"
    wavelength: float = 16.0
    motion: str = "sine"
    amplitude: float = 0.1
    omega: float = math.pi / 4
    step_size: float = 0.0
    step_frame: int = 1
    contrast: float = 0.25
    bias: float = 0.5

    def __post_init__(self):
        if self.width < 1 or self.height < 1 or self.frames < 1:
            raise ValidationError("width, height and frames must all be >= 1")
        if self.pattern not in PATTERNS:
            raise ValidationError(f"pattern must be one of {PATTERNS}, got {self.pattern!r}")
        if self.motion not in MOTIONS:
            raise ValidationError(f"motion must be one of {MOTIONS}, got {self.motion!r}")
        if not self.wavelength > 0:
            raise ValidationError(f"wavelength must be positive, got {self.wavelength}")
        if not 0.0 <= self.contrast <= 0.5:
            raise ValidationError(f"contrast must lie in [0, 0.5], got {self.contrast}")
        if self.amplitude < 0:
            raise ValidationError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.pattern == "plaid":
            bound = self.wavelength / 8.0
            worst = self.amplitude if self.motion == "sine" else abs(self.step_size)
            if worst > bound:
                raise ValidationError(
                    f"displacement {worst} px exceeds the first-order regime bound "
                    f"wavelength/8 = {bound} px"
                )

    def displacement(self):
        t = np.arange(1, self.frames + 1, dtype=np.float64)
        if self.motion == "sine":
            return self.amplitude * np.sin(self.omega * t)
        return np.where(t >= self.step_frame, self.step_size, 0.0)


def render(spec: SynthSpec, shift: float) -> np.ndarray:
    """One ``height x width`` frame with the pattern moved ``shift`` px along +x."""
    y, x = np.mgrid[0:spec.height, 0:spec.width].astype(np.float64)
    if spec.pattern == "plaid":
        k = 2.0 * math.pi / spec.wavelength
        wave = np.cos(k * (x - shift)) + np.cos(k * y)
        return spec.bias + 0.5 * spec.contrast * wave
    cx = (spec.width - 1) / 2.0 + shift
    cy = (spec.height - 1) / 2.0
    sigma = spec.wavelength / 4.0
    blob = np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2.0 * sigma**2))
    return spec.bias - spec.contrast + 2.0 * spec.contrast * blob


def make_clip(spec: SynthSpec):
    """Return ``(clip, ground_truth)`` where ground truth is per-frame displacement in px."""
    truth = spec.displacement()
    clip = Clip.from_frames([render(spec, d) for d in truth])
    return clip, truth


def fundamental_phase(clip: Clip, wavelength: float):
    """Per-frame phase and amplitude of the x-fundamental at ``wavelength``.

    Fits ``c + a cos(kx) + b sin(kx) + e cos(ky) + f sin(ky)`` to every
    frame by least squares, which stays exact when the image size is not a
    whole number of periods.
    """
    k = 2.0 * math.pi / wavelength
    h, w = clip.height, clip.width
    y, x = np.mgrid[0:h, 0:w].astype(np.float64)
    design = np.stack(
        [np.ones(h * w), np.cos(k * x).ravel(), np.sin(k * x).ravel(),
         np.cos(k * y).ravel(), np.sin(k * y).ravel()],
        axis=1,
    )
    values = clip.values
    if clip.channels == 3:
        values = values.reshape(h * w, 3, -1).mean(axis=1)
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    a, b = coef[1], coef[2]
    return np.arctan2(b, a), np.hypot(a, b)


def measure_displacement(clip: Clip, reference_frame: int, wavelength: float) -> np.ndarray:
    """Per-frame x displacement (px) relative to ``reference_frame`` (0-based)."""
    phase, amp = fundamental_phase(clip, wavelength)
    if np.min(amp) < 1e-6:
        raise NoSignalError(
            f"fundamental amplitude {np.min(amp):.3g} below 1e-6 at wavelength {wavelength}"
        )
    phase = np.unwrap(phase)
    return (phase - phase[reference_frame]) * wavelength / (2.0 * math.pi)


def sinusoid_amplitude(series, omega, start=0):
    """Amplitude of the ``omega`` component of ``series[start:]`` by least squares."""
    series = np.asarray(series, dtype=np.float64)
    t = np.arange(1, series.size + 1, dtype=np.float64)[start:]
    design = np.stack([np.ones_like(t), np.cos(omega * t), np.sin(omega * t)], axis=1)
    coef, *_ = np.linalg.lstsq(design, series[start:], rcond=None)
    return float(np.hypot(coef[1], coef[2]))


def steady_state_start(w2):
    """Frames to discard before the recursive smoothers settle."""
    return int(math.ceil(max(20.0, 4.0 / w2)))


def write_ground_truth(truth, path) -> None:
    with open(Path(path), "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["frame", "displacement_px"])
        for k, d in enumerate(truth, start=1):
            out.writerow([k, repr(float(d))])


def read_ground_truth(path):
    with open(Path(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([float(r["displacement_px"]) for r in rows])
