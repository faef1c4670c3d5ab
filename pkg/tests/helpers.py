"""Random circuits, observables and paths shared by the test modules."""
import numpy as np

from qsim.algebra import PROJ0, Generator
from qsim.circuit import (
    TRACED,
    Circuit,
    Measured,
    ObservableSpec,
    Prescribed,
    cnot,
    controlled_phase,
    hadamard,
    one_bit,
    two_bit,
)


def random_hermitian(rng, scale=1.0):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return scale * (m + m.conj().T) / 2


def random_unitary(rng):
    return Generator(random_hermitian(rng)).exp(rng.uniform(-np.pi, np.pi))


def random_circuit(rng, max_qubits=6, max_gates=8, min_qubits=1, one_bit_rate=0.5):
    """Random mix of generic and library two-bit gates with one-bit gates in between."""
    L = int(rng.integers(min_qubits, max_qubits + 1))
    G = int(rng.integers(0, max_gates + 1)) if L > 1 else 0
    gates = []
    for _ in range(G):
        while rng.random() < one_bit_rate:
            q = int(rng.integers(L))
            gates.append(hadamard(q) if rng.random() < 0.5 else one_bit(q, random_unitary(rng)))
        a, b = (int(x) for x in rng.choice(L, size=2, replace=False))
        kind = rng.integers(3)
        if kind == 0:
            gates.append(cnot(a, b))
        elif kind == 1:
            gates.append(controlled_phase(a, b, rng.uniform(-np.pi, np.pi)))
        else:
            gates.append(two_bit(a, b, rng.uniform(-1, 1), random_hermitian(rng), random_hermitian(rng)))
    for q in range(L):
        if rng.random() < 0.5:
            gates.append(one_bit(q, random_unitary(rng)))
    return Circuit(L, gates)


def random_spec(rng, n_qubits, allow_prescribed=True):
    roles = []
    for _ in range(n_qubits):
        r = rng.integers(4 if allow_prescribed else 3)
        if r == 0:
            roles.append(Measured(PROJ0))
        elif r == 1:
            roles.append(Measured(random_hermitian(rng)))
        elif r == 2:
            roles.append(TRACED)
        else:
            roles.append(Prescribed(int(rng.integers(2))))
    return ObservableSpec(roles)


def random_path(rng, circuit, real_scale=1.0, imag_scale=0.0):
    shape = (circuit.n_fields, 4)
    path = rng.uniform(-real_scale, real_scale, size=shape).astype(complex)
    if imag_scale:
        path += 1j * rng.uniform(-imag_scale, imag_scale, size=shape)
    return path
