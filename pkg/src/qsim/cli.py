"""``qsim`` command line: exact, Langevin and Metropolis runs on circuit files.

A single JSON report goes to stdout; a readable summary goes to stderr.
Exit codes: 0 ok, 1 parse/validation error, 2 impossible prescription,
3 Langevin convergence failure, 64 usage error.
"""
import argparse
import hashlib
import json
import sys
import time

import numpy as np

from .circuit import fft_demo_problem
from .errors import (
    ConvergenceFailure,
    ImpossiblePrescription,
    ParseError,
    ValidationError,
    ZeroSignal,
)
from .oracle import exact_expectations
from .samplers import (
    LangevinConfig,
    MetropolisConfig,
    observable_labels,
    run_parallel_walkers,
)
from .textformat import format_circuit, parse_circuit

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_IMPOSSIBLE, EXIT_CONVERGENCE, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(name, value, minimum=1):
    if value < minimum:
        raise UsageError(f"--{name} must be at least {minimum}")
    return value


def build_parser():
    p = _Parser(prog="qsim", description="Auxiliary-field Monte Carlo simulation of quantum circuits.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ex = sub.add_parser("exact", help="dense state-vector expectation values")
    ex.add_argument("file")

    def langevin_flags(sp):
        sp.add_argument("--dt", type=float, default=0.01)
        sp.add_argument("--burn-in", type=int, default=10_000)
        sp.add_argument("--samples", type=int, default=100_000)
        sp.add_argument("--walkers", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--init", choices=("fixed-point", "zeros"), default="fixed-point")
        sp.add_argument("--drift-cap", type=float, default=50.0)
        sp.add_argument("--regulator", type=float, default=0.0)

    lg = sub.add_parser("langevin", help="complex Langevin estimate")
    lg.add_argument("file")
    langevin_flags(lg)

    mp = sub.add_parser("metropolis", help="Metropolis estimate with phase reweighting")
    mp.add_argument("file")
    mp.add_argument("--width", type=float, default=0.1)
    mp.add_argument("--burn-in", type=int, default=10_000)
    mp.add_argument("--samples", type=int, default=100_000)
    mp.add_argument("--walkers", type=int, default=1)
    mp.add_argument("--seed", type=int, default=0)
    mp.add_argument("--regulator", type=float, default=0.0)

    demo = sub.add_parser("demo-fft", help="FFT of a constant function: exact vs Langevin")
    demo.add_argument("--qubits", type=int, default=2)
    langevin_flags(demo)
    return p


def circuit_digest(circuit):
    text = format_circuit(circuit)
    return {
        "n_qubits": circuit.n_qubits,
        "n_two_bit_gates": circuit.n_fields,
        "n_gates": len(circuit.gates),
        "sha256": hashlib.sha256(text.encode()).hexdigest(),
    }


def _exact_block(circuit, spec):
    values, prob = exact_expectations(circuit, spec)
    return {
        "estimates": {
            lab: {"value": [float(v), 0.0], "stderr": 0.0, "stderr_imag": 0.0}
            for lab, v in zip(observable_labels(spec), values)
        },
        "prescription_probability": prob,
    }


def _langevin_config(args):
    _positive_int("samples", args.samples)
    _positive_int("burn-in", args.burn_in, 0)
    _positive_int("walkers", args.walkers)
    try:
        return LangevinConfig(
            dt=args.dt, burn_in_steps=args.burn_in, sample_steps=args.samples, seed=args.seed,
            drift_cap=args.drift_cap, init=args.init, regulator=args.regulator,
        )
    except ValidationError as exc:
        raise UsageError(str(exc)) from None


def _langevin_echo(args):
    return {
        "dt": args.dt, "burn_in": args.burn_in, "samples": args.samples, "walkers": args.walkers,
        "seed": args.seed, "init": args.init, "drift_cap": args.drift_cap, "regulator": args.regulator,
    }


def _load(path):
    with open(path) as fh:
        return parse_circuit(fh.read())


def _summary(report):
    lines = [f"qsim {report['method']}: L={report['circuit']['n_qubits']} G={report['circuit']['n_two_bit_gates']}"]
    blocks = [("", report.get("estimates"))]
    if "exact" in report:
        blocks = [("exact    ", report["exact"]["estimates"]), ("langevin ", report.get("estimates"))]
    for prefix, est in blocks:
        for lab, e in (est or {}).items():
            lines.append(f"  {prefix}{lab:>6}: {e['value'][0]: .6f} {e['value'][1]:+.6f}i  +/- {e['stderr']:.2e}")
    if "signal_magnitude" in report:
        lines.append(f"  signal |<phase>| = {report['signal_magnitude']:.3e} +/- {report['signal_stderr']:.1e}"
                     + ("  (sign-problem dominated)" if report["sign_problem_dominated"] else ""))
    if "error" in report:
        lines.append(f"  error: {report['error']}")
    return "\n".join(lines)


def run(argv):
    """Execute a command; returns ``(exit_code, report_or_None)``."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    if args.command == "demo-fft":
        _positive_int("qubits", args.qubits)
        circuit, spec = fft_demo_problem(args.qubits)
    else:
        circuit, spec = _load(args.file)
    report = {"schema": SCHEMA, "method": args.command, "circuit": circuit_digest(circuit)}
    code = EXIT_OK

    if args.command == "exact":
        report["config"] = {}
        report.update(_exact_block(circuit, spec))
    elif args.command in ("langevin", "demo-fft"):
        cfg = _langevin_config(args)
        report["config"] = _langevin_echo(args)
        if args.command == "demo-fft":
            report["config"]["qubits"] = args.qubits
            report["exact"] = _exact_block(circuit, spec)
        try:
            est = run_parallel_walkers("langevin", circuit, spec, cfg, args.walkers)
            report.update(est.to_dict())
            report["diagnostics"] = est.diagnostics
        except ConvergenceFailure as exc:
            report["error"] = str(exc)
            report["diagnostics"] = exc.diagnostics
            code = EXIT_CONVERGENCE
        except Exception as exc:
            cause = getattr(exc, "cause", None)
            if isinstance(cause, ConvergenceFailure):
                report["error"] = str(exc)
                report["diagnostics"] = dict(cause.diagnostics, walker=exc.walker)
                code = EXIT_CONVERGENCE
            else:
                raise
    else:
        _positive_int("samples", args.samples)
        _positive_int("burn-in", args.burn_in, 0)
        _positive_int("walkers", args.walkers)
        try:
            cfg = MetropolisConfig(proposal_width=args.width, burn_in=args.burn_in,
                                   samples=args.samples, seed=args.seed, regulator=args.regulator)
        except ValidationError as exc:
            raise UsageError(str(exc)) from None
        report["config"] = {"width": args.width, "burn_in": args.burn_in, "samples": args.samples,
                            "walkers": args.walkers, "seed": args.seed, "regulator": args.regulator}
        try:
            est = run_parallel_walkers("metropolis", circuit, spec, cfg, args.walkers)
        except ZeroSignal as exc:
            est = exc.estimate
        report.update(est.to_dict())
        report["diagnostics"] = est.diagnostics
    report["wall_time_seconds"] = time.perf_counter() - start
    return code, report


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, report = run(argv)
    except UsageError as exc:
        print(f"qsim: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError, OSError) as exc:
        print(f"qsim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ImpossiblePrescription as exc:
        print(f"qsim: ImpossiblePrescription: {exc}", file=sys.stderr)
        return EXIT_IMPOSSIBLE
    sys.stdout.write(json.dumps(report, sort_keys=True, default=_default) + "\n")
    print(_summary(report), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
