"""Measurement statistics: counts, fidelities, leakage and robustness sweeps."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import gaussian_filter1d

from .core import C, L, R, CouplingProfile, DomainError, EnvelopeProfile, GateSpec, Unitary3
from .holonomy import analytic_holonomy
from .layout import CouplingFit, profile_from_layout, trajectories_from_profile
from .propagate import PropagationConfig, evolve_unitary

OUTCOUPLING_VARIATION = 0.01
PERTURBATION_KINDS = ("weight-jitter", "envelope-jitter", "wavelength-shift")


def _renormalize_rows(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (2, 2):
        raise DomainError("probability tables are 2x2 (input k, output j)")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise DomainError("probabilities must be finite and non-negative")
    rows = p.sum(axis=1, keepdims=True)
    if np.any(rows <= 0):
        raise DomainError("every input needs some probability on the logical outputs")
    return p / rows


def average_fidelity(p_theo, p_exp) -> float:
    """Average over inputs k of (sum_j sqrt(p_theo[k,j] * p_exp[k,j]))**2.

    Rows are renormalized over the two logical outcomes first, so photons
    lost to the central waveguide do not enter the fidelity.
    """
    a, b = _renormalize_rows(p_theo), _renormalize_rows(p_exp)
    overlap = np.sqrt(a * b).sum(axis=1)
    return float(np.clip(np.mean(overlap ** 2), 0.0, 1.0))


def ideal_table(gate: GateSpec) -> np.ndarray:
    return analytic_holonomy(gate).probability_table()


def count_uncertainty(n, total):
    """One Poisson standard deviation plus 1 % of the total counts."""
    return np.sqrt(n) + OUTCOUPLING_VARIATION * np.asarray(total)


@dataclass(frozen=True)
class NoiseModel:
    shots_per_input: int = 10_000
    outcoupling_variation: float = OUTCOUPLING_VARIATION
    rng_seed: int = 0

    def __post_init__(self):
        if self.shots_per_input <= 0:
            raise DomainError("shots_per_input must be positive")
        if not 0.0 <= self.outcoupling_variation < 1.0:
            raise DomainError("outcoupling_variation must lie in [0, 1)")


@dataclass(frozen=True, eq=False)
class CountTable:
    counts: np.ndarray          # [input k, logical output j]
    central_counts: np.ndarray  # [input k]
    total_launched: np.ndarray  # [input k]

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        central = np.asarray(self.central_counts, dtype=np.int64)
        total = np.asarray(self.total_launched, dtype=np.int64)
        if counts.shape != (2, 2) or central.shape != (2,) or total.shape != (2,):
            raise DomainError("count table shape mismatch")
        if np.any(counts < 0) or np.any(central < 0):
            raise DomainError("counts must be non-negative")
        if np.any(counts.sum(axis=1) + central > total):
            raise DomainError("more photons detected than launched")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "central_counts", central)
        object.__setattr__(self, "total_launched", total)

    def probabilities(self) -> np.ndarray:
        """Logical table renormalized over detected L/R photons."""
        return _renormalize_rows(self.counts)

    def probability_uncertainties(self) -> np.ndarray:
        det = self.counts.sum(axis=1, keepdims=True)
        return count_uncertainty(self.counts, det) / det

    def central_fraction(self) -> np.ndarray:
        det = self.counts.sum(axis=1) + self.central_counts
        return self.central_counts / det


def simulate_counts(u: Unitary3, noise: NoiseModel) -> CountTable:
    """Draw detection counts for both logical inputs.

    Photons are distributed multinomially over (L, C, R).  Each output port
    then gets an efficiency drawn once per run with relative spread
    ``outcoupling_variation`` (scaled so the best port has efficiency 1) and
    detected counts are thinned binomially.
    """
    rng = np.random.default_rng(noise.rng_seed)
    eta = np.clip(rng.normal(1.0, noise.outcoupling_variation, 3), 0.0, None)
    eta = eta / eta.max()
    counts = np.zeros((2, 2), dtype=np.int64)
    central = np.zeros(2, dtype=np.int64)
    for k, mode in enumerate((L, R)):
        p = np.abs(u.matrix[:, mode]) ** 2
        n = rng.multinomial(noise.shots_per_input, p / p.sum())
        det = rng.binomial(n, eta)
        counts[k] = det[L], det[R]
        central[k] = det[C]
    total = np.full(2, noise.shots_per_input)
    return CountTable(counts, central, total)


def fidelity_uncertainty(p_theo, table: CountTable) -> float:
    """First-order propagation of the per-entry count uncertainties to F."""
    p = table.probabilities()
    sig = table.probability_uncertainties()
    f0 = average_fidelity(p_theo, p)
    var = 0.0
    h = 1e-7
    for k in range(2):
        for j in range(2):
            q = p.copy()
            q[k, j] += h
            var += ((average_fidelity(p_theo, q) - f0) / h * sig[k, j]) ** 2
    return float(np.sqrt(var))


def leakage(u: Unitary3) -> tuple[float, float]:
    """Central-waveguide probability for inputs |0> (L) and |1> (R)."""
    m = u.matrix
    return float(abs(m[C, L]) ** 2), float(abs(m[C, R]) ** 2)


# robustness ----------------------------------------------------------------

@dataclass(frozen=True)
class PerturbationModel:
    """Fabrication perturbation applied to a coupling profile.

    * ``weight-jitter``: independent relative noise ``sigma`` on kappa_L and
      kappa_R (changes the weight ratio).
    * ``envelope-jitter``: one relative noise ``sigma`` shared by both
      couplings (the weight ratio is kept).
    * ``wavelength-shift``: the profile is compiled to a layout with
      ``fit`` and re-read with ``a`` and ``b`` scaled by ``1 + sigma_a * N``
      and ``1 + sigma_b * N``.  With ``preserve_integral`` the result is
      rescaled to an envelope integral of exactly pi.

    ``correlation_length`` (cm) smooths the jitter noise; 0 means
    independent per sample.
    """

    kind: str
    sigma: float = 0.0
    correlation_length: float = 0.0
    sigma_a: float = 0.0
    sigma_b: float = 0.0
    preserve_integral: bool = False
    fit: CouplingFit = field(default_factory=lambda: CouplingFit(20.0, 0.2))
    trials: int = 100
    rng_seed: int = 0

    def __post_init__(self):
        if self.kind not in PERTURBATION_KINDS:
            raise DomainError(f"unknown perturbation {self.kind!r}")
        if min(self.sigma, self.sigma_a, self.sigma_b, self.correlation_length) < 0:
            raise DomainError("perturbation strengths must be non-negative")
        if self.trials < 1:
            raise DomainError("need at least one trial")


def _noise(rng, z, sigma, corr_len):
    n = rng.standard_normal(z.size)
    if corr_len > 0:
        width = corr_len / float(np.median(np.diff(z)))
        n = gaussian_filter1d(n, width, mode="nearest")
        std = n.std()
        n = n / std if std > 0 else n
    return sigma * n


def perturb_profile(profile: CouplingProfile, model: PerturbationModel,
                    rng: np.random.Generator) -> tuple[CouplingProfile, dict]:
    z = profile.z_grid
    if model.kind == "weight-jitter":
        fl = np.clip(1 + _noise(rng, z, model.sigma, model.correlation_length), 0, None)
        fr = np.clip(1 + _noise(rng, z, model.sigma, model.correlation_length), 0, None)
        draw = {"rms_L": float(np.std(fl - 1)), "rms_R": float(np.std(fr - 1))}
        return CouplingProfile(z, profile.kappa_L * fl, profile.kappa_R * fr), draw
    if model.kind == "envelope-jitter":
        f = np.clip(1 + _noise(rng, z, model.sigma, model.correlation_length), 0, None)
        draw = {"rms": float(np.std(f - 1))}
        return CouplingProfile(z, profile.kappa_L * f, profile.kappa_R * f), draw
    sa = 1 + model.sigma_a * rng.standard_normal()
    sb = 1 + model.sigma_b * rng.standard_normal()
    shifted = profile_from_layout(trajectories_from_profile(profile, model.fit),
                                  model.fit.scaled(sa, sb))
    kl, kr = shifted.kappa_L, shifted.kappa_R
    if model.preserve_integral:
        c = np.pi / np.trapezoid(shifted.magnitude, z)
        sa *= c
        kl, kr = kl * c, kr * c
    return CouplingProfile(z, kl, kr), {"a_scale": float(sa), "b_scale": float(sb)}


@dataclass
class SweepResult:
    mean_fidelity: float
    std_fidelity: float
    min_fidelity: float
    records: list[dict]

    def to_dict(self) -> dict:
        return {"summary": {"mean_fidelity": self.mean_fidelity,
                            "std_fidelity": self.std_fidelity,
                            "min_fidelity": self.min_fidelity,
                            "trials": len(self.records)},
                "trials": self.records}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def _trial(i, gate, profile, model, config, target):
    rng = np.random.default_rng([model.rng_seed, i])
    perturbed, draw = perturb_profile(profile, model, rng)
    u = evolve_unitary(perturbed, config)
    f = average_fidelity(target, u.probability_table())
    l0, l1 = leakage(u)
    return {"trial": i, "fidelity": f, "leakage": [l0, l1], "perturbation": draw}


def robustness_sweep(gate: GateSpec, envelope: EnvelopeProfile, model: PerturbationModel,
                     config: PropagationConfig | None = None,
                     workers: int = 1) -> SweepResult:
    """Monte Carlo over perturbed profiles; fidelity is against the ideal table.

    Trial ``i`` draws from its own stream seeded by ``(rng_seed, i)``, so the
    result does not depend on ``workers`` or execution order.
    """
    config = config or PropagationConfig()
    profile = CouplingProfile.from_gate(gate, envelope)
    target = ideal_table(gate)
    args = [(i, gate, profile, model, config, target) for i in range(model.trials)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            records = list(ex.map(lambda a: _trial(*a), args))
    else:
        records = [_trial(*a) for a in args]
    records.sort(key=lambda r: r["trial"])
    f = np.array([r["fidelity"] for r in records])
    return SweepResult(float(f.mean()), float(f.std()), float(f.min()), records)
