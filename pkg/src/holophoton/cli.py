"""Command-line front end.

Every command writes a JSON report (or CSV with ``--format csv``) to
standard output or ``--out``.  Exit codes: 0 success, 1 computation error,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .analysis import (NoiseModel, PerturbationModel, average_fidelity, leakage,
                       robustness_sweep, simulate_counts)
from .core import CouplingProfile, DomainError, GateSpec, Unitary3
from .envelopes import EnvelopeShape, build_envelope, load_envelope_csv
from .holonomy import analytic_full_unitary, analytic_holonomy
from .layout import (CouplingFit, add_fanning, export_layout, fit_coupling_curve,
                     load_scan_csv, trajectories_from_profile)
from .propagate import (PropagationConfig, PropagationError, evolve_unitary,
                        hom_coincidence, hom_visibility)
from .sequence import (GateSequence, build_sequence_profile, commutator_experiment,
                       compose_analytic, load_sequence, penny_flipover, penny_sequence)

DEFAULT_SEED = 20230815
HOM_REFERENCE = {"visibility": 0.95, "uncertainty": 0.046}


def _num(x):
    return float(f"{x:.12g}")


def canonical(obj):
    """Convert to JSON-ready data with 12-significant-digit floats."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_num(obj.real) + 0.0, _num(obj.imag) + 0.0]
    if isinstance(obj, (float, np.floating)):
        return _num(obj) + 0.0
    return obj


def dumps(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=1) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in r])
    return buf.getvalue()


# argument helpers ----------------------------------------------------------

def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _gate(args) -> GateSpec:
    return GateSpec(_angle(args, args.theta), _angle(args, args.phi))


def _shape(args) -> EnvelopeShape:
    kw = dict(samples_per_cm=args.samples_per_cm)
    if args.envelope == "sandwich":
        ramp = args.ramp if args.ramp is not None else 0.25 * args.length
        return EnvelopeShape.sandwich(ramp, args.flat, args.length, **kw)
    if args.envelope == "raised-gaussian":
        width = args.width if args.width is not None else 0.2 * args.length
        return EnvelopeShape.raised_gaussian(width, args.length, **kw)
    return EnvelopeShape(args.envelope, args.length, **kw)


def _envelope(args):
    if getattr(args, "envelope_csv", None):
        return load_envelope_csv(args.envelope_csv, normalize_to_pi=True)
    return build_envelope(_shape(args))


def _config(args) -> PropagationConfig:
    return PropagationConfig(args.steps, args.method)


def _resolved(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "show_config")}


def _probability_rows(table):
    return [(k, j, float(table[k, j])) for k in range(2) for j in range(2)]


# commands ------------------------------------------------------------------

def cmd_gate(args):
    gate = _gate(args)
    env = _envelope(args)
    u = evolve_unitary(CouplingProfile.from_gate(gate, env), _config(args))
    ideal = analytic_full_unitary(gate)
    table = u.probability_table()
    report = {
        "gate": {"theta": gate.theta, "phi": gate.phi},
        "analytic_gate": analytic_holonomy(gate).matrix,
        "analytic_unitary": ideal.matrix,
        "simulated_unitary": u.matrix,
        "max_deviation": float(np.max(np.abs(u.matrix - ideal.matrix))),
        "fidelity": average_fidelity(analytic_holonomy(gate).probability_table(), table),
        "leakage": leakage(u),
        "probability_table": table,
        "cyclicity_residual": env.integral - math.pi,
        "config": _resolved(args),
    }
    if args.format == "csv":
        return _csv(("input", "output", "probability"), _probability_rows(table))
    return dumps(report)


def _builtin_sequences(name, args):
    if name == "commutator":
        return None
    if name == "penny-flip":
        return [("penny-flip", penny_sequence(True, gap_length=args.gap))]
    if name == "penny-noflip":
        return [("penny-noflip", penny_sequence(False, gap_length=args.gap))]
    raise DomainError(f"unknown builtin sequence {name!r}")


def cmd_sequence(args):
    if args.file is None and args.builtin is None:
        raise UsageError("give a sequence file or --builtin")
    if args.builtin == "commutator":
        res = commutator_experiment(gap_length=args.gap, config=_config(args))
        report = {"commutator": res, "config": _resolved(args)}
        rows = [(name, k, j, float(res[key][k, j]))
                for name, key in (("HXH", "probs_HXH"), ("XHH", "probs_HHX"))
                for k in range(2) for j in range(2)]
    else:
        if args.builtin:
            seqs = _builtin_sequences(args.builtin, args)
        else:
            with open(args.file) as fh:
                text = fh.read()
            try:
                seqs = [(args.file, load_sequence(text))]
            except (DomainError, ValueError, KeyError) as exc:
                raise UsageError(f"invalid sequence file: {exc}") from exc
        report = {"sequences": {}, "config": _resolved(args)}
        rows = []
        for name, seq in seqs:
            report["sequences"][name] = _sequence_report(seq, args)
            t = report["sequences"][name]["probability_table"]
            rows += [(name, k, j, float(t[k][j])) for k in range(2) for j in range(2)]
        if args.builtin and args.builtin.startswith("penny"):
            game = penny_flipover(args.builtin == "penny-flip", gap_length=args.gap,
                                  config=_config(args))
            report["q_win_probability"] = game["q_win_probability"]
    if args.format == "csv":
        return _csv(("sequence", "input", "output", "probability"), rows)
    return dumps(report)


def _sequence_report(seq: GateSequence, args) -> dict:
    u = evolve_unitary(build_sequence_profile(seq), _config(args))
    analytic = compose_analytic(seq)
    elements = []
    for e in seq.elements:
        if hasattr(e, "gate"):
            elements.append({"type": "gate", "theta": e.gate.theta, "phi": e.gate.phi,
                             "envelope": e.shape.kind, "length": e.shape.total_length,
                             "analytic_gate": analytic_holonomy(e.gate).matrix})
        else:
            elements.append({"type": "inert", "length": e.length})
    return {
        "elements": elements,
        "analytic_product": analytic.matrix,
        "simulated_unitary": u.matrix,
        "logical_deviation": float(np.max(np.abs(u.logical_block - analytic.matrix))),
        "probability_table": u.probability_table(),
        "leakage": leakage(u),
    }


def cmd_layout(args):
    if args.scan:
        fit = fit_coupling_curve(load_scan_csv(args.scan))
    else:
        fit = CouplingFit(args.a, args.b)
    if args.sequence:
        with open(args.sequence) as fh:
            seq = load_sequence(fh.read())
        profile = build_sequence_profile(seq)
        gates = [{"theta": g.theta, "phi": g.phi} for g in seq.gates]
        residual = None
    else:
        gate = _gate(args)
        env = _envelope(args)
        profile = CouplingProfile.from_gate(gate, env)
        gates = [{"theta": gate.theta, "phi": gate.phi}]
        residual = env.integral - math.pi
    layout = trajectories_from_profile(profile, fit, args.decoupled_separation)
    if args.fan_ends != "none":
        layout = add_fanning(layout, fit, args.pitch, args.fan_length, args.fan_ends)
    meta = {"fit": {"a": fit.a, "b": fit.b, "residual": fit.residual},
            "gates": gates, "cyclicity_residual": residual, "config": _resolved(args)}
    return export_layout(layout, args.format, meta).decode()


def _q_grid(text: str) -> np.ndarray:
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            q = np.linspace(float(start), float(stop), int(num))
        else:
            q = np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"malformed q grid {text!r}") from exc
    if q.size == 0 or np.any(q < 0) or np.any(q > 1) or not np.all(np.isfinite(q)):
        raise argparse.ArgumentTypeError("q values must lie in [0, 1]")
    return q


def cmd_hom(args):
    gate = _gate(args)
    u = evolve_unitary(CouplingProfile.from_gate(gate, _envelope(args)), _config(args))
    curve = [(float(q), hom_coincidence(u, q)) for q in args.q_grid]
    if args.format == "csv":
        return _csv(("q", "coincidence"), curve)
    return dumps({
        "gate": {"theta": gate.theta, "phi": gate.phi},
        "coincidence": [{"q": q, "p": p} for q, p in curve],
        "visibility": hom_visibility(u),
        "experimental_reference": HOM_REFERENCE,
        "config": _resolved(args),
    })


def cmd_robustness(args):
    gate = _gate(args)
    model = PerturbationModel(args.kind, sigma=args.sigma,
                              correlation_length=args.correlation_length,
                              sigma_a=args.sigma_a, sigma_b=args.sigma_b,
                              preserve_integral=args.preserve_integral,
                              fit=CouplingFit(args.a, args.b),
                              trials=args.trials, rng_seed=args.seed)
    res = robustness_sweep(gate, _envelope(args), model, _config(args), args.workers)
    if args.format == "csv":
        return _csv(("trial", "fidelity", "leak_0", "leak_1"),
                    [(r["trial"], r["fidelity"], *r["leakage"]) for r in res.records])
    return dumps(dict(res.to_dict(), config=_resolved(args)))


def cmd_fit(args):
    fit = fit_coupling_curve(load_scan_csv(args.scan))
    if args.format == "csv":
        return _csv(("a_per_cm", "b_per_um", "residual"), [(fit.a, fit.b, fit.residual)])
    return dumps({"a": fit.a, "b": fit.b, "residual": fit.residual, "config": _resolved(args)})


def cmd_counts(args):
    gate = _gate(args)
    u = evolve_unitary(CouplingProfile.from_gate(gate, _envelope(args)), _config(args))
    table = simulate_counts(u, NoiseModel(args.shots, args.variation, args.seed))
    p = table.probabilities()
    if args.format == "csv":
        return _csv(("input", "output", "probability"), _probability_rows(p))
    return dumps({"counts": table.counts, "central_counts": table.central_counts,
                  "total_launched": table.total_launched, "probabilities": p,
                  "fidelity": average_fidelity(analytic_holonomy(gate).probability_table(), p),
                  "config": _resolved(args)})


# parser --------------------------------------------------------------------

class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("global")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--samples-per-cm", type=float, default=1000.0)
    g.add_argument("--steps", type=int, default=None, help="total propagation steps")
    g.add_argument("--method", choices=("rk4", "piecewise-exponential"), default="rk4")
    g.add_argument("--out", default=None, help="output path (default: stdout)")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--degrees", action="store_true", help="angles given in degrees")
    g.add_argument("--show-config", action="store_true",
                   help="print the resolved configuration and exit")


def _gate_args(p, theta_default=None):
    p.add_argument("--theta", type=float, required=theta_default is None, default=theta_default)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--envelope", default="sandwich",
                   choices=("constant", "full-cosine", "sandwich", "raised-gaussian"))
    p.add_argument("--envelope-csv", default=None, help="z_cm,omega_per_cm file")
    p.add_argument("--length", type=float, default=1.0, help="gate length in cm")
    p.add_argument("--ramp", type=float, default=None)
    p.add_argument("--flat", type=float, default=None)
    p.add_argument("--width", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holophoton", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gate", help="simulate one holonomic gate")
    _gate_args(p)
    _common(p)
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("sequence", help="simulate a gate sequence")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--builtin", choices=("commutator", "penny-flip", "penny-noflip"))
    p.add_argument("--gap", type=float, default=0.5, help="decoupled gap between gates (cm)")
    _common(p)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("layout", help="compile a gate into waveguide trajectories")
    _gate_args(p, theta_default=math.pi / 2)
    p.add_argument("--sequence", default=None, help="sequence JSON instead of one gate")
    p.add_argument("--a", type=float, default=20.0, help="coupling prefactor (1/cm)")
    p.add_argument("--b", type=float, default=0.2, help="decay constant (1/um)")
    p.add_argument("--scan", default=None, help="coupling scan CSV (delta_um,kappa_per_cm)")
    p.add_argument("--decoupled-separation", type=float, default=40.0)
    p.add_argument("--fan-ends", choices=("none", "front", "back", "both"), default="none")
    p.add_argument("--pitch", type=float, default=82.0)
    p.add_argument("--fan-length", type=float, default=5.0, help="mm")
    _common(p)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("hom", help="two-photon coincidence curve and visibility")
    _gate_args(p)
    p.add_argument("--q-grid", type=_q_grid, default=_q_grid("0:1:11"),
                   help="comma list or start:stop:num")
    _common(p)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("robustness", help="Monte Carlo fabrication-noise sweep")
    _gate_args(p)
    p.add_argument("--kind", choices=("weight-jitter", "envelope-jitter", "wavelength-shift"),
                   default="envelope-jitter")
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--correlation-length", type=float, default=0.0, help="cm")
    p.add_argument("--sigma-a", type=float, default=0.0)
    p.add_argument("--sigma-b", type=float, default=0.0)
    p.add_argument("--preserve-integral", action="store_true")
    p.add_argument("--a", type=float, default=20.0)
    p.add_argument("--b", type=float, default=0.2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("fit", help="fit the exponential coupling law to a scan")
    p.add_argument("scan")
    _common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("counts", help="simulate detector counts for one gate")
    _gate_args(p)
    p.add_argument("--shots", type=int, default=10_000)
    p.add_argument("--variation", type=float, default=0.01)
    _common(p)
    p.set_defaults(func=cmd_counts)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.show_config:
        sys.stdout.write(dumps(_resolved(args)))
        return 0
    try:
        text = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"holophoton: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, PropagationError, OSError) as exc:
        print(f"holophoton: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
