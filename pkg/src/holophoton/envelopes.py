"""Envelope functions Omega(z) and the cyclicity condition.

Every built-in shape is evaluated on a uniform grid and then multiplied by a
single constant so that its trapezoid integral is exactly pi.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from os import PathLike
from typing import Callable

import numpy as np

from .core import DomainError, EnvelopeProfile

DEFAULT_SAMPLES_PER_CM = 1000
SHAPE_KINDS = ("constant", "full-cosine", "sandwich", "raised-gaussian", "custom")
BUILTIN_KINDS = SHAPE_KINDS[:4]
CSV_HEADER = ("z_cm", "omega_per_cm")


class DegenerateEnvelopeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EnvelopeShape:
    """Recipe for an envelope on ``[0, total_length]`` (cm).

    ``ramp_len``/``flat_len`` are used by ``sandwich``; when ``flat_len`` is
    omitted the plateau fills whatever the two ramps leave.  A sandwich
    shorter than ``total_length`` is centred with zero padding.  ``width`` is
    the standard deviation of ``raised-gaussian``.  ``samples`` are envelope
    values at equispaced positions spanning the length (``custom``).
    """

    kind: str
    total_length: float = 1.0
    samples_per_cm: float = DEFAULT_SAMPLES_PER_CM
    ramp_len: float | None = None
    flat_len: float | None = None
    width: float | None = None
    samples: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise DomainError(f"unknown envelope kind {self.kind!r}")
        if not self.total_length > 0:
            raise DomainError("total_length must be positive")
        if not self.samples_per_cm > 0:
            raise DomainError("samples_per_cm must be positive")
        if self.kind == "sandwich":
            if self.ramp_len is None or self.ramp_len <= 0:
                raise DomainError("sandwich needs a positive ramp_len")
            if 2 * self.ramp_len > self.total_length * (1 + 1e-12):
                raise DomainError("sandwich requires 2*ramp_len <= total_length")
            if self.flat_len is not None:
                if self.flat_len < 0:
                    raise DomainError("flat_len must be non-negative")
                if 2 * self.ramp_len + self.flat_len > self.total_length * (1 + 1e-12):
                    raise DomainError("ramps plus plateau exceed total_length")
        if self.kind == "raised-gaussian" and not (self.width and self.width > 0):
            raise DomainError("raised-gaussian needs a positive width")
        if self.kind == "custom":
            if self.samples is None or len(self.samples) < 2:
                raise DomainError("custom shape needs at least two samples")
            object.__setattr__(self, "samples", tuple(float(s) for s in self.samples))

    @classmethod
    def constant(cls, length=1.0, **kw):
        return cls("constant", length, **kw)

    @classmethod
    def full_cosine(cls, length=1.0, **kw):
        return cls("full-cosine", length, **kw)

    @classmethod
    def sandwich(cls, ramp_len, flat_len=None, length=1.0, **kw):
        return cls("sandwich", length, ramp_len=ramp_len, flat_len=flat_len, **kw)

    @classmethod
    def raised_gaussian(cls, width, length=1.0, **kw):
        return cls("raised-gaussian", length, width=width, **kw)

    @classmethod
    def custom(cls, samples, length=1.0, **kw):
        return cls("custom", length, samples=tuple(samples), **kw)

    def grid(self) -> np.ndarray:
        n = max(int(round(self.total_length * self.samples_per_cm)), 1) + 1
        return np.linspace(0.0, self.total_length, n)


def default_shapes(length: float = 1.0, samples_per_cm: float = DEFAULT_SAMPLES_PER_CM):
    """The four built-in shapes at their canonical parameters."""
    kw = dict(samples_per_cm=samples_per_cm)
    return [
        EnvelopeShape.constant(length, **kw),
        EnvelopeShape.full_cosine(length, **kw),
        EnvelopeShape.sandwich(0.25 * length, 0.5 * length, length, **kw),
        EnvelopeShape.raised_gaussian(0.2 * length, length, **kw),
    ]


def _sandwich(z, L, ramp, flat):
    if flat is None:
        flat = L - 2 * ramp
    start = 0.5 * (L - 2 * ramp - flat)
    s = z - start
    out = np.zeros_like(z)
    up = (s >= 0) & (s < ramp)
    out[up] = 0.5 * (1 - np.cos(np.pi * s[up] / ramp))
    top = (s >= ramp) & (s <= ramp + flat)
    out[top] = 1.0
    s_down = s - ramp - flat
    down = (s_down > 0) & (s_down <= ramp)
    out[down] = 0.5 * (1 + np.cos(np.pi * s_down[down] / ramp))
    return out


def _evaluate(shape: EnvelopeShape, z: np.ndarray) -> np.ndarray:
    L = shape.total_length
    if shape.kind == "constant":
        return np.ones_like(z)
    if shape.kind == "full-cosine":
        return 1 - np.cos(2 * np.pi * z / L)
    if shape.kind == "sandwich":
        return _sandwich(z, L, shape.ramp_len, shape.flat_len)
    if shape.kind == "raised-gaussian":
        w = shape.width
        g = np.exp(-((z - L / 2) ** 2) / (2 * w * w))
        return np.clip(g - np.exp(-(L / 2) ** 2 / (2 * w * w)), 0.0, None)
    vals = np.asarray(shape.samples)
    if np.any(vals < 0):
        raise DomainError("custom envelope samples must be non-negative")
    return np.interp(z, np.linspace(0.0, L, vals.size), vals)


def normalize(z_grid, omega, target: float = np.pi) -> EnvelopeProfile:
    """Scale ``omega`` by one constant so its trapezoid integral is ``target``."""
    omega = np.asarray(omega, dtype=float)
    area = np.trapezoid(omega, z_grid)
    if not area > 0:
        raise DomainError("cannot normalize an identically zero envelope")
    omega = omega * (target / area)
    return EnvelopeProfile(z_grid, omega, cyclic=(target == np.pi))


def build_envelope(shape: EnvelopeShape) -> EnvelopeProfile:
    """Sample ``shape`` and normalize it to the cyclic integral pi."""
    z = shape.grid()
    return normalize(z, _evaluate(shape, z))


def check_cyclicity(profile: EnvelopeProfile) -> tuple[float, float]:
    """Return ``(delta_final, delta_final - pi)`` from the trapezoid rule."""
    if not isinstance(profile, EnvelopeProfile):
        z, om = profile
        profile = EnvelopeProfile(z, om)
    if not profile.length > 0:
        raise DomainError("profile has zero length")
    delta = profile.integral
    return delta, delta - np.pi


def reparametrize(profile: EnvelopeProfile,
                  warp: Callable[[np.ndarray], np.ndarray]) -> EnvelopeProfile:
    """Rearrange an envelope along z without changing its integral.

    With ``s = (z - z_i) / length`` the new envelope is
    ``Omega(z_i + length * warp(s)) * warp'(s)`` on the original grid.  The
    derivative is a finite difference, so the result is rescaled by one
    factor to reproduce the input integral exactly.
    """
    z = profile.z_grid
    s = (z - z[0]) / profile.length
    g = np.asarray(warp(s), dtype=float)
    if g.shape != s.shape or not np.all(np.isfinite(g)):
        raise DomainError("warp must map the grid to finite values")
    if abs(g[0]) > 1e-12 or abs(g[-1] - 1.0) > 1e-12:
        raise DomainError("warp must satisfy warp(0) = 0 and warp(1) = 1")
    if np.any(np.diff(g) <= 0):
        raise DomainError("warp must be strictly increasing")
    dg = np.gradient(g, s)
    omega = np.interp(z[0] + profile.length * g, z, profile.omega) * dg
    area = np.trapezoid(omega, z)
    if area > 0:
        omega = omega * (profile.integral / area)
    return EnvelopeProfile(z, omega, cyclic=profile.cyclic)


def scale_to_cyclicity_error(profile: EnvelopeProfile, epsilon: float) -> EnvelopeProfile:
    """Scale the envelope so its integral becomes ``pi + epsilon``."""
    factor = (np.pi + epsilon) / np.pi
    if factor < 0:
        raise DomainError("epsilon < -pi would make the envelope negative")
    if factor == 0:
        warnings.warn("epsilon = -pi gives a zero envelope", DegenerateEnvelopeWarning,
                      stacklevel=2)
    return EnvelopeProfile(profile.z_grid, profile.omega * factor,
                           cyclic=profile.cyclic and epsilon == 0)


def load_envelope_csv(source: str | PathLike | io.TextIOBase,
                      normalize_to_pi: bool = False) -> EnvelopeProfile:
    """Read ``z_cm, omega_per_cm`` columns (header row required)."""
    if isinstance(source, io.TextIOBase):
        text = source.read()
    else:
        with open(source, newline="") as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(c.strip() for c in rows[0]) != CSV_HEADER:
        raise DomainError(f"envelope CSV must start with header {','.join(CSV_HEADER)}")
    data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    if data.ndim != 2 or data.shape[0] < 2:
        raise DomainError("envelope CSV needs at least two data rows")
    if normalize_to_pi:
        return normalize(data[:, 0], data[:, 1])
    return EnvelopeProfile(data[:, 0], data[:, 1])


def envelope_to_csv(profile: EnvelopeProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for z, om in zip(profile.z_grid, profile.omega):
        w.writerow([f"{z:.12g}", f"{om:.12g}"])
    return buf.getvalue()
