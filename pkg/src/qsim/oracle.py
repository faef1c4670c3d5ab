"""Exact dense state-vector simulation for small registers.

Used as ground truth for the stochastic estimators. Gate matrices here come
from ``numpy.linalg.eigh`` and ``scipy.linalg.expm``, never from the
closed-form one-bit exponentials in :mod:`qsim.algebra`, so the two routes
check each other.

Amplitude index ``i`` of a state has qubit ``q`` in bit ``q`` of ``i``.
"""
from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg

from .circuit import OneBitGate, TwoBitGate
from .errors import (
    DimensionMismatch,
    ImpossiblePrescription,
    QuadratureDiverged,
    QubitCountExceeded,
)

MAX_QUBITS = 24
PRESCRIPTION_FLOOR = 1e-14


def _guard(n_qubits):
    if n_qubits > MAX_QUBITS:
        raise QubitCountExceeded(f"{n_qubits} qubits exceeds the dense-vector guard of {MAX_QUBITS}")


def basis_state(n_qubits, index=0):
    _guard(n_qubits)
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[index] = 1.0
    return psi


def product_state(kets):
    """Tensor product with ``kets[0]`` as qubit 0 (least significant)."""
    psi = np.ones(1, dtype=complex)
    for k in kets:
        psi = np.kron(np.asarray(k, dtype=complex), psi)
    return psi


def two_bit_matrix(gate):
    """``exp(-i alpha A(x)B)`` as a ``(2, 2, 2, 2)`` tensor ``[a', b', a, b]``.

    ``A`` and ``B`` commute (different qubits), so the exponential is diagonal
    in the joint eigenbasis: one phase per pair of eigenvalues.
    """
    ea, va = np.linalg.eigh(gate.A.matrix)
    eb, vb = np.linalg.eigh(gate.B.matrix)
    phase = np.exp(-1j * gate.alpha * np.outer(ea, eb))
    return np.einsum("ai,bj,ij,ci,dj->abcd", va, vb, phase, va.conj(), vb.conj())


def _apply1(psi, n, q, m):
    t = psi.reshape((2,) * n)
    ax = n - 1 - q
    t = np.tensordot(m, t, axes=([1], [ax]))
    return np.moveaxis(t, 0, ax).reshape(-1)


def _apply2(psi, n, qa, qb, m4):
    t = psi.reshape((2,) * n)
    axa, axb = n - 1 - qa, n - 1 - qb
    t = np.tensordot(m4, t, axes=([2, 3], [axa, axb]))
    return np.moveaxis(t, (0, 1), (axa, axb)).reshape(-1)


def exact_evolve(circuit, psi):
    n = circuit.n_qubits
    _guard(n)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2**n,):
        raise DimensionMismatch(f"state of shape {psi.shape} does not fit {n} qubits")
    for gate in circuit.gates:
        if isinstance(gate, TwoBitGate):
            psi = _apply2(psi, n, gate.a, gate.b, two_bit_matrix(gate))
        else:
            psi = _apply1(psi, n, gate.q, gate.U)
    return psi


def circuit_unitary(circuit):
    n = circuit.n_qubits
    cols = [exact_evolve(circuit, basis_state(n, i)) for i in range(2**n)]
    return np.stack(cols, axis=1)


def _apply_roles(psi, n, spec, observable=True):
    for l in range(n):
        psi = _apply1(psi, n, l, spec.projector(l))
        if observable:
            psi = _apply1(psi, n, l, spec.observable(l))
    return psi


def exact_expectation(circuit, spec):
    """``<O>`` with prescriptions, from the full state.

    Returns ``(value, probability)`` where ``probability`` is the weight of the
    prescribed outcome, ``<psi|P|psi>``.
    """
    spec.check_against(circuit)
    n = circuit.n_qubits
    psi = exact_evolve(circuit, basis_state(n))
    prob = np.vdot(psi, _apply_roles(psi, n, spec, observable=False)).real
    if prob <= PRESCRIPTION_FLOOR:
        raise ImpossiblePrescription(f"prescribed outcome has probability {prob:.3e}")
    value = np.vdot(psi, _apply_roles(psi, n, spec)).real / prob
    return float(value), float(prob)


def exact_expectations(circuit, spec):
    """Per measured qubit ``<O_m>`` (each on its own) plus the joint product.

    Returns ``(values, probability)`` with ``values`` ordered like
    :func:`qsim.samplers.observable_labels`.
    """
    vals = [exact_expectation(circuit, spec.only(l))[0] for l in spec.measured]
    joint, prob = exact_expectation(circuit, spec)
    return np.array(vals + [joint]), prob


def _field_unitary_state(circuit, fields):
    """``U[sigma]|0...0>`` with each two-bit gate replaced by ``V (x) W``."""
    n = circuit.n_qubits
    psi = basis_state(n)
    g = 0
    for gate in circuit.gates:
        if isinstance(gate, TwoBitGate):
            s, t = fields[g]
            v = scipy.linalg.expm(-1j * gate.alpha * s * gate.A.matrix)
            w = scipy.linalg.expm(-1j * gate.alpha * t * gate.B.matrix)
            psi = _apply1(_apply1(psi, n, gate.a, v), n, gate.b, w)
            g += 1
        else:
            psi = _apply1(psi, n, gate.q, gate.U)
    return psi


def fixed_field_bracket(circuit, spec, path, with_observable=True):
    """Full-register ``<0|U^dag[sigma'] O P U[sigma]|0>`` for a real path."""
    path = np.asarray(path)
    if np.any(np.imag(path) != 0):
        raise ValueError("fixed_field_bracket needs a real field path")
    path = np.real(path).astype(float)
    _guard(circuit.n_qubits)
    n = circuit.n_qubits
    psi = _field_unitary_state(circuit, path[:, :2])
    psi_c = _field_unitary_state(circuit, path[:, 2:])
    return complex(np.vdot(psi_c, _apply_roles(psi, n, spec, observable=with_observable)))


# --- Hubbard-Stratonovich identity by quadrature ------------------------------

@dataclass(frozen=True)
class QuadratureGrid:
    half_width: float = 40.0
    step: float = 0.02

    @property
    def nodes(self):
        n = int(round(self.half_width / self.step))
        return np.arange(-n, n + 1) * self.step


def _hs_pair_integrals(alpha, ea, eb, epsilon, grid, chunk=512):
    """Regularized ``(|a|/2pi) int int e^{i a s t} e^{-i a s x} e^{-i a t y} e^{-eps(s^2+t^2)}``
    for every eigenvalue pair ``(x, y)`` in ``ea x eb``."""
    x = grid.nodes
    h = grid.step
    damp = np.exp(-epsilon * x * x)
    f = np.exp(-1j * alpha * np.outer(x, ea)) * damp[:, None]   # (N, 2) over sigma
    gv = np.exp(-1j * alpha * np.outer(x, eb)) * damp[:, None]  # (N, 2) over tau
    kg = np.empty_like(gv)
    for start in range(0, len(x), chunk):
        rows = x[start:start + chunk]
        kg[start:start + chunk] = np.exp(1j * alpha * np.outer(rows, x)) @ gv
    return abs(alpha) * h * h / (2 * math.pi) * (f.T @ kg)


def _assemble(gate, pair):
    ea, va = np.linalg.eigh(gate.A.matrix)
    eb, vb = np.linalg.eigh(gate.B.matrix)
    return np.einsum("ai,bj,ij,ci,dj->abcd", va, vb, pair, va.conj(), vb.conj()).reshape(4, 4), (ea, eb)


def hs_quadrature_matrix(gate, epsilon, grid=QuadratureGrid()):
    """The regularized auxiliary-field integral of ``gate`` as a 4x4 matrix."""
    ea, _ = np.linalg.eigh(gate.A.matrix)
    eb, _ = np.linalg.eigh(gate.B.matrix)
    if gate.alpha == 0.0:
        return np.eye(4, dtype=complex)
    pair = _hs_pair_integrals(gate.alpha, ea, eb, epsilon, grid)
    return _assemble(gate, pair)[0]


def hs_identity_quadrature(gate, epsilon, grid=QuadratureGrid()):
    """Max-norm distance between the regularized field integral and the gate.

    The grid is also evaluated at twice the step; ``QuadratureDiverged`` is
    raised when refining the grid moves the distance away from the gate.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    exact = two_bit_matrix(gate).reshape(4, 4)
    if gate.alpha == 0.0:
        return 0.0
    fine = float(np.max(np.abs(hs_quadrature_matrix(gate, epsilon, grid) - exact)))
    coarse_grid = QuadratureGrid(grid.half_width, 2 * grid.step)
    coarse = float(np.max(np.abs(hs_quadrature_matrix(gate, epsilon, coarse_grid) - exact)))
    if fine > coarse + 1e-6:
        raise QuadratureDiverged(f"distance grew from {coarse:.3e} to {fine:.3e} on grid refinement")
    return fine


def hs_identity_sweep(gate, epsilons=(0.04, 0.02, 0.01), grid=QuadratureGrid()):
    """Distances for a halving sequence of ``epsilon`` plus the Richardson limit.

    Returns ``(distances, extrapolated_distance)``. The regularization error
    is a power series in ``epsilon``, so the Neville table over halvings
    removes it order by order.
    """
    exact = two_bit_matrix(gate).reshape(4, 4)
    if gate.alpha == 0.0:
        return np.zeros(len(epsilons)), 0.0
    mats = [hs_quadrature_matrix(gate, e, grid) for e in epsilons]
    dists = np.array([np.max(np.abs(m - exact)) for m in mats])
    table = list(mats)
    for k in range(1, len(table)):
        for i in range(len(table) - 1, k - 1, -1):
            fac = (epsilons[i - 1] / epsilons[i]) ** k
            table[i] = (fac * table[i] - table[i - 1]) / (fac - 1)
    return dists, float(np.max(np.abs(table[-1] - exact)))


def hs_regularized_closed_form(gate, epsilon):
    """Gaussian closed form of the regularized integral (quadrature cross-check)."""
    a = gate.alpha
    ea, _ = np.linalg.eigh(gate.A.matrix)
    eb, _ = np.linalg.eigh(gate.B.matrix)
    x, y = np.meshgrid(ea, eb, indexing="ij")
    det = a * a + 4 * epsilon * epsilon
    pair = abs(a) / np.sqrt(det) * np.exp((-epsilon * a * a * (x * x + y * y) - 1j * a**3 * x * y) / det)
    return _assemble(gate, pair)[0]
