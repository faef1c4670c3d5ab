"""Hubbard-Stratonovich decoupling of two-bit gates into one-bit propagators.

A field path is a complex array of shape ``(G, 4)`` whose columns are
``(sigma, tau, sigma', tau')`` for each two-bit gate: the forward fields of
``U`` and the conjugate-path fields of ``U^dagger``.

For a fixed path every qubit evolves on its own. Qubit ``l`` sees the ordered
product of the factors that touch it: ``V_g = exp(-i alpha_g sigma_g A_g)``
when it is the ``A`` side of gate ``g``, ``W_g = exp(-i alpha_g tau_g B_g)``
when it is the ``B`` side, and any field-free one-bit gates in between.

The conjugate path is the analytic continuation of the real-field adjoint:
the factor order is reversed and each field factor becomes
``exp(+i alpha_g sigma'_g A_g)`` without complex conjugating the field, so that
every bracket is holomorphic in all four fields.
"""
from dataclasses import dataclass

import numpy as np

from .algebra import I2, KET0
from .errors import InsertionMismatch, ValidationError

SIGMA, TAU, SIGMA_C, TAU_C = range(4)
_ROW0 = np.array([1, 0], dtype=complex)


def zero_path(circuit):
    return np.zeros((circuit.n_fields, 4), dtype=complex)


def as_path(circuit, path):
    path = np.asarray(path, dtype=complex)
    if path.shape != (circuit.n_fields, 4):
        raise ValidationError(f"field path shape {path.shape} does not match (G, 4) = ({circuit.n_fields}, 4)")
    return path


@dataclass(frozen=True)
class InsertionPoint:
    """Replace one field factor by its derivative.

    ``side`` is ``"A"`` (derivative in sigma) or ``"B"`` (in tau);
    ``conjugate`` selects the conjugate-path factor (sigma' or tau').
    """

    gate: int
    side: str
    conjugate: bool = False

    def __post_init__(self):
        if self.side not in ("A", "B"):
            raise ValueError(f"insertion side must be 'A' or 'B', got {self.side!r}")

    @property
    def column(self):
        return (SIGMA if self.side == "A" else TAU) + (2 if self.conjugate else 0)


def one_bit_factors(gate, sigma, tau):
    """The pair ``(V, W)`` replacing ``gate`` at fields ``(sigma, tau)``."""
    return gate.A.exp(gate.alpha * sigma), gate.B.exp(gate.alpha * tau)


def _check_insertion(circuit, l, insertion):
    if insertion is None:
        return
    if not 0 <= insertion.gate < circuit.n_fields:
        raise InsertionMismatch(f"no two-bit gate with index {insertion.gate}")
    gate = circuit.two_bit_gates[insertion.gate]
    target = gate.a if insertion.side == "A" else gate.b
    if target != l:
        raise InsertionMismatch(
            f"gate {insertion.gate} side {insertion.side} acts on qubit {target}, not {l}"
        )


def per_qubit_propagator(circuit, fields, l, insertion=None):
    """Ordered product of the one-bit factors acting on qubit ``l``.

    ``fields`` is a ``(G, 2)`` array of ``(sigma, tau)``. With an insertion at
    ``(g, "A")`` the factor ``V_g`` becomes ``-i alpha_g A_g V_g``.
    """
    if not 0 <= l < circuit.n_qubits:
        raise ValidationError(f"qubit index {l} outside [0, {circuit.n_qubits})")
    if insertion is not None and insertion.conjugate:
        raise InsertionMismatch("forward propagator takes forward-path insertions only")
    _check_insertion(circuit, l, insertion)
    fields = np.asarray(fields, dtype=complex)
    u = I2
    for kind, g, payload in circuit.schedule[l]:
        if kind == "U":
            f = payload
        else:
            alpha = circuit.two_bit_gates[g].alpha
            f = payload.exp(alpha * fields[g, 0 if kind == "A" else 1])
            if insertion is not None and insertion.gate == g and insertion.side == kind:
                f = -1j * alpha * payload.matrix @ f
        u = f @ u
    return u


def per_qubit_adjoint_propagator(circuit, fields, l, insertion=None):
    """Continuation of ``U^[l][sigma']^dagger`` to complex ``sigma'``.

    ``fields`` holds ``(sigma', tau')``. An insertion at ``(g, side)`` marked
    ``conjugate`` multiplies that factor by ``+i alpha_g`` times its generator.
    """
    if insertion is not None and not insertion.conjugate:
        raise InsertionMismatch("adjoint propagator takes conjugate-path insertions only")
    _check_insertion(circuit, l, insertion)
    fields = np.asarray(fields, dtype=complex)
    u = I2
    for kind, g, payload in circuit.schedule[l]:
        if kind == "U":
            f = payload.conj().T
        else:
            alpha = circuit.two_bit_gates[g].alpha
            f = payload.exp(-alpha * fields[g, 0 if kind == "A" else 1])
            if insertion is not None and insertion.gate == g and insertion.side == kind:
                f = 1j * alpha * payload.matrix @ f
        u = u @ f
    return u


def qubit_bracket(circuit, spec, path, l, with_observable=False, insertion=None):
    """``<0| U^dag[l][sigma'] X P[l] U[l][sigma] |0>`` for one qubit.

    ``X`` is the measured operator when ``with_observable`` is set and the
    qubit is measured, identity otherwise. Computed from explicit propagators;
    :func:`bracket_sweep` is the fast path used by the samplers.
    """
    path = np.asarray(path, dtype=complex)
    fwd = conj = None
    if insertion is not None:
        if insertion.conjugate:
            conj = insertion
        else:
            fwd = insertion
        _check_insertion(circuit, l, insertion)
    u = per_qubit_propagator(circuit, path[:, :2], l, fwd)
    ud = per_qubit_adjoint_propagator(circuit, path[:, 2:], l, conj)
    x = spec.observable(l) if with_observable else I2
    return complex(_ROW0 @ ud @ x @ spec.projector(l) @ u @ KET0)


@dataclass
class Sweep:
    """All brackets of one qubit at one path.

    ``forward`` / ``conjugate`` map a field index ``g`` to the bracket with the
    derivative inserted at that gate's factor on this qubit.
    """

    qubit: int
    denominator: complex
    numerator: complex
    forward: dict
    conjugate: dict


def bracket_sweep(circuit, spec, path, l, insertions=True):
    """Denominator, numerator and every insertion bracket of qubit ``l``.

    One pass forward and one backward over the qubit's factor list, so the
    cost is linear in the number of factors touching ``l``.
    """
    sched = circuit.schedule[l]
    gates = circuit.two_bit_gates
    n = len(sched)
    fwd = [None] * n
    cnj = [None] * n
    for k, (kind, g, payload) in enumerate(sched):
        if kind == "U":
            fwd[k] = payload
            cnj[k] = payload.conj().T
        else:
            col = SIGMA if kind == "A" else TAU
            alpha = gates[g].alpha
            fwd[k] = payload.exp(alpha * path[g, col])
            cnj[k] = payload.exp(-alpha * path[g, col + 2])

    r = [KET0] * (n + 1)
    for k in range(n):
        r[k + 1] = fwd[k] @ r[k]
    c = [_ROW0] * (n + 1)
    for k in range(n):
        c[k + 1] = c[k] @ cnj[k]
    proj = spec.projector(l)
    pr = proj @ r[n]
    den = complex(c[n] @ pr)
    num = complex(c[n] @ spec.observable(l) @ pr)

    ins_f, ins_c = {}, {}
    if insertions and n:
        b = c[n] @ proj
        d = pr
        # b: row vector left of forward factor k; d: column right of conjugate factor k
        for k in range(n - 1, -1, -1):
            kind, g, payload = sched[k]
            if kind != "U":
                alpha = gates[g].alpha
                gm = payload.matrix
                ins_f[g] = -1j * alpha * complex(b @ gm @ r[k + 1])
                ins_c[g] = 1j * alpha * complex(c[k + 1] @ gm @ d)
            b = b @ fwd[k]
            d = cnj[k] @ d
    return Sweep(l, den, num, ins_f, ins_c)
