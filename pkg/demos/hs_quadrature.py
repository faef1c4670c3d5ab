"""
Checking the auxiliary-field identity by quadrature
===================================================

A two-bit gate exp(-i alpha A x B) equals a Gaussian integral over two real
fields of one-bit factors V(sigma) x W(tau). The bare integral is oscillatory
and only conditionally convergent; with a damping exp(-eps (sigma^2 + tau^2))
it converges, and the result approaches the gate as eps -> 0.
"""
import math

import numpy as np

from qsim.circuit import cnot, controlled_phase
from qsim.oracle import hs_identity_sweep, hs_quadrature_matrix, hs_regularized_closed_form, two_bit_matrix

epsilons = (0.04, 0.02, 0.01)
for name, gate in [("cphase(pi/2)", controlled_phase(0, 1, math.pi / 2)), ("cnot", cnot(0, 1))]:
    dists, extrapolated = hs_identity_sweep(gate, epsilons)
    print(name)
    for e, d in zip(epsilons, dists):
        print(f"  eps = {e:<5} distance to gate = {d:.5f}")
    print(f"  Richardson limit distance = {extrapolated:.2e}")

# the grid sum against the Gaussian closed form of the damped integral
gate = controlled_phase(0, 1, math.pi / 2)
grid = hs_quadrature_matrix(gate, 0.02)
print("\ngrid vs closed form at eps = 0.02:", np.max(np.abs(grid - hs_regularized_closed_form(gate, 0.02))))
print("damped integral at eps = 0.02 (diagonal):", np.round(np.diag(grid), 4))
print("exact gate (diagonal):                    ", np.round(np.diag(two_bit_matrix(gate).reshape(4, 4)), 4))
