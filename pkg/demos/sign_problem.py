"""
Sign problem along the FFT family
=================================

Metropolis samples real field paths with weight |exp(-iS)| and carries the
phase exp(-i Re S) into both numerator and denominator averages. The
denominator average, the "signal", measures how much the phases cancel. It
shrinks as two-bit gates are added to the circuit.

The bare real-field weight is only conditionally integrable (the one-bit
brackets are periodic in the fields), so the walk here uses a Gaussian damping
exp(-eps * sum x^2) of the weight, the same device that makes the field
integral of a single gate converge.

    python demos/sign_problem.py [samples] [eps]
"""
import sys
import time

from qsim.circuit import fft_demo_problem
from qsim.samplers import MetropolisConfig, metropolis_run

samples = int(sys.argv[1]) if len(sys.argv) > 1 else 50_000
eps = float(sys.argv[2]) if len(sys.argv) > 2 else 0.5

print(f"{'L':>2} {'G':>3} {'signal':>9} {'stderr':>8} {'accept':>7} {'tau':>7} {'time':>6}")
for L in (2, 3, 4, 5):
    circuit, spec = fft_demo_problem(L)
    cfg = MetropolisConfig(proposal_width=0.5, burn_in=samples // 10, samples=samples, regulator=eps)
    t0 = time.perf_counter()
    est = metropolis_run(circuit, spec, cfg, check_signal=False)
    print(
        f"{L:>2} {circuit.n_fields:>3} {est.signal_magnitude:9.5f} {est.signal_stderr:8.5f}"
        f" {est.diagnostics['acceptance_rate']:7.3f} {est.autocorrelation_time:7.1f}"
        f" {time.perf_counter() - t0:5.1f}s" + ("  sign-problem dominated" if est.sign_problem_dominated else "")
    )

# without damping the signal is lost in the noise already at L = 2
circuit, spec = fft_demo_problem(2)
est = metropolis_run(circuit, spec, MetropolisConfig(samples=samples), check_signal=False)
print(f"\nundamped, L=2: signal {est.signal_magnitude:.5f} +/- {est.signal_stderr:.5f}")
