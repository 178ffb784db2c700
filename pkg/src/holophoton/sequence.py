"""Gate sequences, the commutator experiment and the penny flipover game.

Sequences are listed in propagation order: the first element acts first,
so ``[H, X, H]`` corresponds to the operator product ``U_H @ U_X @ U_H``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .analysis import NoiseModel, simulate_counts
from .core import (HADAMARD, IDENTITY2, PAULI_X, ZERO, CouplingProfile, DomainError,
                   GateSpec, Holonomy2, QubitState, Unitary3)
from .envelopes import EnvelopeShape, build_envelope
from .holonomy import analytic_holonomy
from .propagate import PropagationConfig, evolve_unitary

DEFAULT_GAP = 0.5  # cm of decoupled waveguide between elements
# width of the cell that joins segments whose boundary couplings differ
JOIN_WIDTH = 1e-9  # cm
INERT_SAMPLES_PER_CM = 100


def default_gate_shape() -> EnvelopeShape:
    return EnvelopeShape.sandwich(0.25, 0.5, 1.0)


@dataclass(frozen=True)
class GateElement:
    gate: GateSpec
    shape: EnvelopeShape = field(default_factory=default_gate_shape)


@dataclass(frozen=True)
class InertElement:
    length: float

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError("inert section needs a positive length")


Element = Union[GateElement, InertElement]


@dataclass(frozen=True)
class GateSequence:
    elements: tuple[Element, ...]
    gap_length: float = DEFAULT_GAP

    def __post_init__(self):
        els = tuple(self.elements)
        if not els:
            raise DomainError("a sequence needs at least one element")
        if any(not isinstance(e, (GateElement, InertElement)) for e in els):
            raise DomainError("sequence elements must be gates or inert sections")
        if self.gap_length < 0:
            raise DomainError("gap_length must be non-negative")
        object.__setattr__(self, "elements", els)

    @classmethod
    def of(cls, *items, shape: EnvelopeShape | None = None, gap_length: float = DEFAULT_GAP):
        """Build from GateSpecs (gates) and floats (inert lengths in cm)."""
        shape = shape or default_gate_shape()
        els = [GateElement(i, shape) if isinstance(i, GateSpec)
               else i if isinstance(i, (GateElement, InertElement))
               else InertElement(float(i)) for i in items]
        return cls(tuple(els), gap_length)

    @property
    def gates(self) -> list[GateSpec]:
        return [e.gate for e in self.elements if isinstance(e, GateElement)]


def compose_analytic(seq: GateSequence) -> Holonomy2:
    """Ordered product of the ideal gates; inert sections are the identity."""
    U = IDENTITY2
    for e in seq.elements:
        if isinstance(e, GateElement):
            U = analytic_holonomy(e.gate) @ U
    return U


def _element_profile(e: Element) -> CouplingProfile:
    if isinstance(e, GateElement):
        return CouplingProfile.from_gate(e.gate, build_envelope(e.shape))
    return _zero(e.length)


def _zero(length: float) -> CouplingProfile:
    n = max(int(round(length * INERT_SAMPLES_PER_CM)), 1) + 1
    return CouplingProfile(np.linspace(0.0, length, n), np.zeros(n), np.zeros(n))


def concatenate_profiles(parts: list[CouplingProfile]) -> CouplingProfile:
    """Join profiles end to end on one strictly increasing grid.

    Where the couplings at a boundary differ, the next segment starts
    ``JOIN_WIDTH`` after the previous one ends.
    """
    z, kl, kr = [parts[0].z_grid - parts[0].z_grid[0]], [parts[0].kappa_L], [parts[0].kappa_R]
    for p in parts[1:]:
        end = z[-1][-1]
        pz = p.z_grid - p.z_grid[0]
        if p.kappa_L[0] == kl[-1][-1] and p.kappa_R[0] == kr[-1][-1]:
            z.append(end + pz[1:])
            kl.append(p.kappa_L[1:])
            kr.append(p.kappa_R[1:])
        else:
            z.append(end + JOIN_WIDTH + pz)
            kl.append(p.kappa_L)
            kr.append(p.kappa_R)
    return CouplingProfile(np.concatenate(z), np.concatenate(kl), np.concatenate(kr))


def build_sequence_profile(seq: GateSequence) -> CouplingProfile:
    """Concatenate element profiles, separated and padded by decoupled gaps."""
    parts = []
    gap = _zero(seq.gap_length) if seq.gap_length > 0 else None
    if gap:
        parts.append(gap)
    for e in seq.elements:
        parts.append(_element_profile(e))
        if gap:
            parts.append(gap)
    return concatenate_profiles(parts)


def propagate_sequence(seq: GateSequence, config: PropagationConfig | None = None) -> Unitary3:
    return evolve_unitary(build_sequence_profile(seq), config)


def _table(u: Unitary3) -> np.ndarray:
    return u.probability_table()


def commutator_experiment(shape: EnvelopeShape | None = None,
                          gap_length: float = DEFAULT_GAP,
                          config: PropagationConfig | None = None) -> dict:
    """Simulate H-X-H against X-H-H (propagation order) from both inputs."""
    hxh = propagate_sequence(GateSequence.of(HADAMARD, PAULI_X, HADAMARD, shape=shape,
                                             gap_length=gap_length), config)
    xhh = propagate_sequence(GateSequence.of(PAULI_X, HADAMARD, HADAMARD, shape=shape,
                                             gap_length=gap_length), config)
    p1, p2 = _table(hxh), _table(xhh)
    return {"probs_HXH": p1, "probs_HHX": p2,
            "max_difference": float(np.max(np.abs(p1 - p2)))}


def penny_sequence(p_flips: bool, shape: EnvelopeShape | None = None,
                   gap_length: float = DEFAULT_GAP) -> GateSequence:
    """Q plays Hadamard twice; P either flips (Pauli-X) or leaves an inert section."""
    shape = shape or default_gate_shape()
    middle = GateElement(PAULI_X, shape) if p_flips else InertElement(shape.total_length)
    return GateSequence((GateElement(HADAMARD, shape), middle, GateElement(HADAMARD, shape)),
                        gap_length)


def penny_flipover(p_flips: bool, shape: EnvelopeShape | None = None,
                   gap_length: float = DEFAULT_GAP,
                   config: PropagationConfig | None = None) -> dict:
    """Play the game from heads (|0>) by propagating the full chip.

    Q wins when the penny is measured in |0>.
    """
    u = propagate_sequence(penny_sequence(p_flips, shape, gap_length), config)
    amps = u.logical_block @ ZERO.vector
    return {"q_win_probability": float(abs(amps[0]) ** 2),
            "final_state": QubitState.from_vector(amps / np.linalg.norm(amps)),
            "unitary": u}


def penny_win_from_counts(p_flips: bool, noise: NoiseModel,
                          shape: EnvelopeShape | None = None,
                          gap_length: float = DEFAULT_GAP,
                          unitary: Unitary3 | None = None) -> float:
    """Q's win fraction estimated from simulated detector counts.

    Pass the chip ``unitary`` from :func:`penny_flipover` to reuse it across
    many noise draws.
    """
    u = unitary if unitary is not None else penny_flipover(p_flips, shape, gap_length)["unitary"]
    counts = simulate_counts(u, noise).counts[0]
    return float(counts[0] / counts.sum())


# sequence files ------------------------------------------------------------

def _shape_from_record(env, length) -> EnvelopeShape:
    if env is None:
        env = "sandwich"
    if isinstance(env, str):
        env = {"kind": env}
    env = dict(env)
    kind = env.pop("kind")
    total = float(env.pop("length", length if length is not None else 1.0))
    if kind == "sandwich":
        env.setdefault("ramp_len", 0.25 * total)
    if kind == "raised-gaussian":
        env.setdefault("width", 0.2 * total)
    return EnvelopeShape(kind, total, **env)


def sequence_from_records(records, gap_length: float = DEFAULT_GAP) -> GateSequence:
    """Build a sequence from ``{type, theta, phi, envelope, length}`` records."""
    els = []
    for r in records:
        t = r.get("type")
        if t == "gate":
            if "theta" not in r:
                raise DomainError("gate record needs theta")
            gate = GateSpec(float(r["theta"]), float(r.get("phi", 0.0)))
            els.append(GateElement(gate, _shape_from_record(r.get("envelope"), r.get("length"))))
        elif t == "inert":
            els.append(InertElement(float(r["length"])))
        else:
            raise DomainError(f"record type must be 'gate' or 'inert', got {t!r}")
    return GateSequence(tuple(els), gap_length)


def load_sequence(text: str) -> GateSequence:
    """Parse a sequence file: a record list or ``{"elements": [...], "gap_length": x}``."""
    doc = json.loads(text)
    if isinstance(doc, dict):
        return sequence_from_records(doc.get("elements", []),
                                     float(doc.get("gap_length", DEFAULT_GAP)))
    return sequence_from_records(doc)
