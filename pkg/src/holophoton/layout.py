"""Compile coupling profiles into planar waveguide trajectories.

Coupling and separation are linked by the exponential law
``kappa = a * exp(-b * delta)`` with ``a`` in 1/cm and ``b`` in 1/um.
Layout positions are in mm along the chip and um transversally, profiles
use cm.  The central waveguide is straight at x = 0.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from os import PathLike

import numpy as np

from .core import CouplingProfile, DomainError

DEFAULT_DECOUPLED_SEPARATION = 40.0  # um
DEFAULT_MIN_SEPARATION = 7.0  # um
DEFAULT_BLEND_WIDTH = 2.0  # um
FIBER_PITCH = 82.0  # um
FAN_COUPLING_BOUND = 0.01  # rad
SAMPLE_LENGTHS_MM = (100.0, 150.0)
SEGMENTS = ("gate", "fanning", "decoupled")
CSV_COLUMNS = ("z_mm", "x_L_um", "x_C_um", "x_R_um", "segment")
SCAN_HEADER = ("delta_um", "kappa_per_cm")


class ChipLengthWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ScanPoint:
    delta: float
    kappa: float

    def __post_init__(self):
        if not self.delta >= 0:
            raise DomainError("scan separation must be non-negative")
        if not self.kappa > 0:
            raise DomainError("scan coupling must be positive")


@dataclass(frozen=True)
class CouplingFit:
    a: float
    b: float
    residual: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError("coupling fit needs a > 0 and b > 0")

    def kappa(self, delta):
        return self.a * np.exp(-self.b * np.asarray(delta, dtype=float))

    def scaled(self, a_factor: float = 1.0, b_factor: float = 1.0) -> "CouplingFit":
        return CouplingFit(self.a * a_factor, self.b * b_factor)


def fit_coupling_curve(points) -> CouplingFit:
    """Least-squares fit of ``ln kappa = ln a - b * delta``."""
    pts = [p if isinstance(p, ScanPoint) else ScanPoint(*p) for p in points]
    delta = np.array([p.delta for p in pts])
    kappa = np.array([p.kappa for p in pts])
    if np.unique(delta).size < 2:
        raise DomainError("need at least two distinct separations to fit")
    A = np.column_stack([np.ones_like(delta), -delta])
    coef, *_ = np.linalg.lstsq(A, np.log(kappa), rcond=None)
    resid = float(np.linalg.norm(A @ coef - np.log(kappa)))
    return CouplingFit(float(np.exp(coef[0])), float(coef[1]), resid)


def load_scan_csv(source: str | PathLike | io.TextIOBase) -> list[ScanPoint]:
    if isinstance(source, io.TextIOBase):
        text = source.read()
    else:
        with open(source, newline="") as fh:
            text = fh.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows or tuple(c.strip() for c in rows[0]) != SCAN_HEADER:
        raise DomainError(f"scan CSV must start with header {','.join(SCAN_HEADER)}")
    return [ScanPoint(float(d), float(k)) for d, k in rows[1:]]


def distance_from_coupling(kappa, fit: CouplingFit):
    """Separation (um) that produces ``kappa`` (1/cm)."""
    k = np.asarray(kappa, dtype=float)
    if np.any(k <= 0):
        raise DomainError("non-positive coupling has no finite separation")
    if np.any(k > fit.a):
        raise DomainError(
            f"coupling {k.max():.6g}/cm exceeds the fit prefactor a={fit.a:.6g}/cm")
    d = -np.log(k / fit.a) / fit.b
    return float(d) if d.ndim == 0 else d


@dataclass(frozen=True, eq=False)
class ChipLayout:
    """Planar trajectories of the three waveguides.

    ``flagged`` marks samples allowed to violate ``min_separation``.
    """

    z_grid: np.ndarray
    x_L: np.ndarray
    x_C: np.ndarray
    x_R: np.ndarray
    segment_labels: tuple[str, ...]
    flagged: np.ndarray | None = None
    min_separation: float = DEFAULT_MIN_SEPARATION
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        z = np.asarray(self.z_grid, dtype=float)
        if z.ndim != 1 or z.size < 2:
            raise DomainError("layout needs at least two samples")
        if np.any(np.diff(z) <= 0):
            raise DomainError("layout z must be strictly increasing")
        arrs = [np.asarray(getattr(self, k), dtype=float) for k in ("x_L", "x_C", "x_R")]
        if any(a.shape != z.shape for a in arrs):
            raise DomainError("trajectories must match the z grid")
        xl, xc, xr = arrs
        if not (np.all(xl < xc) and np.all(xc < xr)):
            raise DomainError("waveguides cross: need x_L < x_C < x_R everywhere")
        labels = tuple(str(s) for s in self.segment_labels)
        if len(labels) != z.size or not set(labels) <= set(SEGMENTS):
            raise DomainError(f"segment labels must be one of {SEGMENTS} per sample")
        flagged = (np.zeros(z.size, bool) if self.flagged is None
                   else np.asarray(self.flagged, dtype=bool))
        tight = (np.minimum(xc - xl, xr - xc) < self.min_separation) & ~flagged
        if np.any(tight):
            raise DomainError(
                f"separation below {self.min_separation} um at unflagged samples")
        for k, v in zip(("z_grid", "x_L", "x_C", "x_R", "flagged"), (z, xl, xc, xr, flagged)):
            object.__setattr__(self, k, v)
        object.__setattr__(self, "segment_labels", labels)

    @property
    def separations(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x_C - self.x_L, self.x_R - self.x_C

    @property
    def length_mm(self) -> float:
        return float(self.z_grid[-1] - self.z_grid[0])

    def is_mirror_symmetric(self, tol: float = 1e-9) -> bool:
        return bool(np.allclose(self.x_L, -self.x_R, rtol=0, atol=tol))


def _check_chip_length(length_mm: float):
    short, long = SAMPLE_LENGTHS_MM
    if length_mm > long:
        warnings.warn(f"layout is {length_mm:.1f} mm, longer than the {long:.0f} mm sample",
                      ChipLengthWarning, stacklevel=3)
    elif length_mm > short:
        warnings.warn(f"layout is {length_mm:.1f} mm and only fits the {long:.0f} mm sample",
                      ChipLengthWarning, stacklevel=3)


def _clamped_separation(kappa, fit, decoupled_separation, blend_width):
    """Raw separation, blended by a cosine ramp into the decoupled value.

    Samples with raw separation below ``decoupled_separation - blend_width``
    are untouched; beyond ``decoupled_separation`` (including zero coupling)
    the separation is exactly the decoupled value.
    """
    k = np.asarray(kappa, dtype=float)
    if np.any(k > fit.a):
        raise DomainError(
            f"coupling {k.max():.6g}/cm exceeds the fit prefactor a={fit.a:.6g}/cm")
    with np.errstate(divide="ignore"):
        raw = np.where(k > 0, -np.log(np.where(k > 0, k, 1.0) / fit.a) / fit.b, np.inf)
    if blend_width <= 0:
        return np.minimum(raw, decoupled_separation), raw >= decoupled_separation
    t = np.clip((raw - (decoupled_separation - blend_width)) / blend_width, 0.0, 1.0)
    s = 0.5 * (1 - np.cos(np.pi * t))
    # capping before blending keeps the map monotone in the raw separation
    capped = np.minimum(raw, decoupled_separation)
    return capped * (1 - s) + decoupled_separation * s, t > 0


def _decoupled_runs(zero: np.ndarray) -> np.ndarray:
    """Mark samples that belong to runs of at least two zero-coupling samples."""
    out = np.zeros_like(zero)
    pair = zero[:-1] & zero[1:]
    out[:-1] |= pair
    out[1:] |= pair
    return out


def trajectories_from_profile(profile: CouplingProfile, fit: CouplingFit,
                              decoupled_separation: float = DEFAULT_DECOUPLED_SEPARATION,
                              blend_width: float = DEFAULT_BLEND_WIDTH,
                              min_separation: float = DEFAULT_MIN_SEPARATION) -> ChipLayout:
    """Place L and R so the exponential law reproduces the profile's couplings."""
    kl, kr = profile.kappa_L, profile.kappa_R
    scale = max(np.abs(kl).max(), np.abs(kr).max(), 1e-300)
    if np.abs(kl.imag).max() > 1e-12 * scale or np.abs(kr.imag).max() > 1e-12 * scale:
        raise DomainError("complex couplings cannot be realized in a planar layout (phi != 0)")
    kl, kr = kl.real, kr.real
    if kl.min() < -1e-12 * scale or kr.min() < -1e-12 * scale:
        raise DomainError("negative couplings cannot be realized in a planar layout")
    kl, kr = np.clip(kl, 0, None), np.clip(kr, 0, None)
    d_l, _ = _clamped_separation(kl, fit, decoupled_separation, blend_width)
    d_r, _ = _clamped_separation(kr, fit, decoupled_separation, blend_width)
    flagged = np.minimum(d_l, d_r) < min_separation
    if np.any(flagged):
        warnings.warn(f"{flagged.sum()} samples closer than {min_separation} um; flagged",
                      stacklevel=2)
    labels = np.where(_decoupled_runs((kl == 0) & (kr == 0)), "decoupled", "gate")
    z_mm = profile.z_grid * 10.0
    _check_chip_length(float(z_mm[-1] - z_mm[0]))
    return ChipLayout(z_mm, -d_l, np.zeros_like(d_l), d_r, tuple(labels), flagged,
                      min_separation, {"fit": {"a": fit.a, "b": fit.b},
                                       "decoupled_separation_um": decoupled_separation})


def profile_from_layout(layout: ChipLayout, fit: CouplingFit) -> CouplingProfile:
    """Couplings implied by a layout's separations (z converted to cm)."""
    d_l, d_r = layout.separations
    return CouplingProfile(layout.z_grid / 10.0, fit.kappa(d_l), fit.kappa(d_r))


def _fan_curve(start: float, end: float, n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)
    return start + (end - start) * 0.5 * (1 - np.cos(np.pi * t))


def fan_coupling_integral(start_sep: float, pitch: float, fan_length: float,
                          fit: CouplingFit, n: int = 2001) -> float:
    """Integrated coupling (rad) accumulated along one half-cosine fan (mm)."""
    sep = _fan_curve(start_sep, pitch, n)
    z_cm = np.linspace(0.0, fan_length / 10.0, n)
    return float(np.trapezoid(fit.kappa(sep), z_cm))


def add_fanning(layout: ChipLayout, fit: CouplingFit, pitch: float = FIBER_PITCH,
                fan_length: float = 5.0, ends: str = "both",
                bound: float = FAN_COUPLING_BOUND) -> ChipLayout:
    """Append half-cosine ramps taking the outer waveguides to +-``pitch``.

    Each fan must accumulate at most ``bound`` rad of coupling per waveguide
    pair.  The accumulated coupling grows linearly with the fan length, so
    on failure the error names the longest fan that would pass.
    """
    if ends not in ("front", "back", "both"):
        raise DomainError("ends must be 'front', 'back' or 'both'")
    if fan_length <= 0:
        raise DomainError("fan_length must be positive")
    dz = float(np.median(np.diff(layout.z_grid)))
    n = max(int(np.ceil(fan_length / dz)), 2) + 1

    def fan(idx):
        seps = (layout.x_C[idx] - layout.x_L[idx], layout.x_R[idx] - layout.x_C[idx])
        if min(seps) >= pitch:
            raise DomainError(
                f"pitch {pitch} um must exceed the gate separation ({max(seps):.3f} um)")
        for s in seps:
            acc = fan_coupling_integral(s, pitch, fan_length, fit)
            if acc > bound:
                raise DomainError(
                    f"fan accumulates {acc:.4g} rad of coupling (bound {bound}); "
                    f"use fan_length <= {fan_length * bound / acc:.4g} mm or start "
                    "the fan from a wider separation")
        return _fan_curve(seps[0], pitch, n), _fan_curve(seps[1], pitch, n)

    z = layout.z_grid
    xl, xc, xr = layout.x_L, layout.x_C, layout.x_R
    labels = list(layout.segment_labels)
    flagged = layout.flagged
    if ends in ("front", "both"):
        dl, dr = fan(0)
        zf = z[0] - fan_length + np.linspace(0.0, fan_length, n)
        z = np.concatenate([zf[:-1], z])
        xl = np.concatenate([xc[0] - dl[::-1][:-1], xl])
        xr = np.concatenate([xc[0] + dr[::-1][:-1], xr])
        xc = np.concatenate([np.full(n - 1, xc[0]), xc])
        labels = ["fanning"] * (n - 1) + labels
        flagged = np.concatenate([np.zeros(n - 1, bool), flagged])
    if ends in ("back", "both"):
        dl, dr = fan(-1)
        zb = z[-1] + np.linspace(0.0, fan_length, n)
        z = np.concatenate([z, zb[1:]])
        xl = np.concatenate([xl, xc[-1] - dl[1:]])
        xr = np.concatenate([xr, xc[-1] + dr[1:]])
        xc = np.concatenate([xc, np.full(n - 1, xc[-1])])
        labels = labels + ["fanning"] * (n - 1)
        flagged = np.concatenate([flagged, np.zeros(n - 1, bool)])
    z = z - z[0]
    _check_chip_length(float(z[-1]))
    meta = dict(layout.metadata, fanning={"pitch_um": pitch, "fan_length_mm": fan_length,
                                          "ends": ends})
    return ChipLayout(z, xl, xc, xr, tuple(labels), flagged, layout.min_separation, meta)


# serialization -------------------------------------------------------------

def _g(x: float) -> str:
    return f"{x:.12g}"


def export_layout(layout: ChipLayout, fmt: str = "csv", metadata: dict | None = None) -> bytes:
    """Serialize a layout as CSV or JSON (same columns; JSON adds metadata)."""
    if layout is None or layout.z_grid.size == 0:
        raise DomainError("cannot export an empty layout")
    cols = (layout.z_grid, layout.x_L, layout.x_C, layout.x_R)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for i, seg in enumerate(layout.segment_labels):
            w.writerow([_g(c[i]) for c in cols] + [seg])
        return buf.getvalue().encode()
    if fmt == "json":
        doc = {
            "columns": {name: [float(_g(v)) for v in c] for name, c in zip(CSV_COLUMNS, cols)},
            "metadata": _plain(dict(layout.metadata, **(metadata or {}))),
        }
        doc["columns"]["segment"] = list(layout.segment_labels)
        doc["columns"]["flagged"] = [bool(f) for f in layout.flagged]
        doc["min_separation_um"] = layout.min_separation
        return (json.dumps(doc, sort_keys=True, indent=1) + "\n").encode()
    raise DomainError(f"unknown layout format {fmt!r}")


def import_layout(data: bytes, fmt: str = "csv") -> ChipLayout:
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(data.decode())))
        if not rows or tuple(rows[0]) != CSV_COLUMNS:
            raise DomainError("layout CSV header mismatch")
        body = [r for r in rows[1:] if r]
        if not body:
            raise DomainError("layout CSV has no rows")
        num = np.array([[float(v) for v in r[:4]] for r in body])
        labels = tuple(r[4] for r in body)
        xl, xc, xr = num[:, 1], num[:, 2], num[:, 3]
        tight = np.minimum(xc - xl, xr - xc) < DEFAULT_MIN_SEPARATION
        return ChipLayout(num[:, 0], xl, xc, xr, labels, tight)
    if fmt == "json":
        doc = json.loads(data.decode())
        c = doc["columns"]
        return ChipLayout(np.array(c["z_mm"]), np.array(c["x_L_um"]), np.array(c["x_C_um"]),
                          np.array(c["x_R_um"]), tuple(c["segment"]), np.array(c["flagged"]),
                          doc.get("min_separation_um", DEFAULT_MIN_SEPARATION),
                          doc.get("metadata", {}))
    raise DomainError(f"unknown layout format {fmt!r}")


def _plain(obj):
    """Make metadata JSON-safe with 12-significant-digit floats."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(_g(float(obj)))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj
