"""
Two-qubit quantum FFT by auxiliary fields
=========================================

The FFT of a constant function is the zero-frequency state, so after a
Hadamard preparation layer the FFT circuit returns |00> and <|0><0|> = 1 on
both qubits. This script walks through the field representation of that
circuit and then runs the complex Langevin walk on it.

    python demos/fft_demo.py [n_steps]
"""
import cmath
import math
import sys

import numpy as np

from qsim.action import action, drift, estimator
from qsim.circuit import fft_demo_problem
from qsim.errors import ConvergenceFailure
from qsim.oracle import exact_expectations
from qsim.samplers import LangevinConfig, find_fixed_point, langevin_run

n_steps = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
omega = math.pi / 2

circuit, spec = fft_demo_problem(2)
print(circuit)
values, _ = exact_expectations(circuit, spec)
print("exact <O_0>, <O_1>, joint:", values)

# one gate, so one path is four numbers (sigma, tau, sigma', tau')
fp = find_fixed_point(circuit, spec)
print("fixed point of the drift:", fp.ravel().round(12))
print("action there:", action(circuit, spec, fp).S)

# the action only couples sigma and sigma' through the qubit-0 bracket
path = np.array([[0.2 + 0.1j, 0.4, -0.3, 0.6 - 0.2j]])
s, t, sc, tc = path[0]
closed = omega * (s * t - sc * tc) + 1j * cmath.log((1 + cmath.exp(1j * omega * (s - sc))) / 2)
print("S at a sample path:", action(circuit, spec, path).S, " closed form:", closed)
print("drift there:", drift(circuit, spec, path).ravel().round(6))
print("estimator there:", estimator(circuit, spec, path))

# The linearised flow around the fixed point has eigenvalues +-i*omega/2:
# an undamped oscillation, which real noise turns into a random walk of
# growing amplitude. The estimator is a ratio with a pole wherever the
# qubit-0 bracket vanishes, so even a short run scatters widely, and the full
# run carries the fields far into the complex plane.
for steps in (2_000, n_steps):
    cfg = LangevinConfig(burn_in_steps=0 if steps < 10_000 else 10_000, sample_steps=steps, seed=0)
    try:
        est = langevin_run(circuit, spec, cfg)
    except ConvergenceFailure as exc:
        print(f"{steps:>7} steps: walk failed: {exc}")
        print("          diagnostics:", exc.diagnostics)
        continue
    for lab in est.labels:
        v, err = est[lab]
        print(f"{steps:>7} steps: {lab:>5} = {v.real: .4f} {v.imag:+.4f}i +/- {err:.4f}")
    print("          diagnostics:", est.diagnostics)
