"""
Complex Langevin with a damped weight
=====================================

The undamped walk on the two-qubit FFT drifts away (see fft_demo.py). Adding
-eps * x to every drift damps the weight by exp(-eps * sum x^2) and keeps the
walk bounded. The damped problem still has an exact answer: for the FFT demo
the qubit-0 expectation becomes

    (1 + g)^2 / (2 (1 + g^2)),   g = exp(-w^2 / (4c)),   c = eps + w^2 / (4 eps)

with w = pi/2 (integrate tau and tau' first, then sigma and sigma'). Metropolis
samples exactly this damped real integral and reproduces the formula. The
Langevin walk settles, but not on it: the poles of the drift, where the
qubit-0 bracket vanishes, bias the stationary distribution.

    python demos/langevin_regulator.py [steps]
"""
import math
import sys

import numpy as np

from qsim.circuit import fft_demo_problem
from qsim.samplers import LangevinConfig, MetropolisConfig, langevin_run, metropolis_run

steps = int(sys.argv[1]) if len(sys.argv) > 1 else 50_000
w = math.pi / 2
circuit, spec = fft_demo_problem(2)


def damped_exact(eps):
    c = eps + w * w / (4 * eps)
    g = math.exp(-w * w / (4 * c))
    return (1 + g) ** 2 / (2 * (1 + g * g))


print(f"{'eps':>5} {'damped exact':>13} {'Metropolis':>18} {'Langevin':>18}")
for eps in (1.0, 0.5, 0.25):
    m = metropolis_run(circuit, spec, MetropolisConfig(proposal_width=0.5, samples=steps, regulator=eps), check_signal=False)
    cl = langevin_run(circuit, spec, LangevinConfig(sample_steps=steps, burn_in_steps=5_000, regulator=eps))
    mv, ms = m["q0"]
    lv, ls = cl["q0"]
    print(f"{eps:5.2f} {damped_exact(eps):13.4f} {mv.real:10.4f} +/- {ms:.4f} {lv.real:10.4f} +/- {ls:.4f}")
print("\nundamped exact value: 1.0")
