"""Circuit intermediate representation and standard gates.

Qubit 0 is the least significant bit of a basis-state index. ``Circuit.gates``
is stored in execution order (first element acts first).

Every two-bit gate is kept in the canonical form ``exp(-i*alpha*A(x)B)``; a
gate naturally written with a positive exponent, like the controlled phase
``exp(+i*omega*A(x)B)``, is stored with ``alpha = -omega``.
"""
from dataclasses import dataclass
import math

import numpy as np

from .algebra import (
    HADAMARD,
    I2,
    PROJ0,
    SIGMA_X,
    SIGMA_Z,
    Generator,
    check_hermitian,
    is_unitary,
)
from .errors import NonHermitianInput, ValidationError


def _frozen(m):
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class TwoBitGate:
    """``exp(-i*alpha*A(x)B)`` with ``A`` acting on qubit ``a`` and ``B`` on ``b``."""

    a: int
    b: int
    alpha: float
    A: Generator
    B: Generator
    name: str = "gate2"

    def __post_init__(self):
        if self.a == self.b:
            raise ValidationError(f"two-bit gate acts twice on qubit {self.a}")
        if not math.isfinite(self.alpha):
            raise ValidationError(f"coupling alpha must be finite, got {self.alpha}")

    @property
    def qubits(self):
        return (self.a, self.b)

    def __eq__(self, other):
        if not isinstance(other, TwoBitGate):
            return NotImplemented
        return (self.a, self.b, self.alpha, self.A, self.B) == (
            other.a, other.b, other.alpha, other.A, other.B
        )

    def __hash__(self):
        return hash((self.a, self.b, self.alpha, self.A, self.B))


@dataclass(frozen=True, eq=False)
class OneBitGate:
    q: int
    U: np.ndarray
    name: str = "u1"

    def __post_init__(self):
        object.__setattr__(self, "U", _frozen(self.U))
        if not is_unitary(self.U):
            raise ValidationError(f"one-bit gate on qubit {self.q} is not unitary")

    @property
    def qubits(self):
        return (self.q,)

    def __eq__(self, other):
        if not isinstance(other, OneBitGate):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.U, other.U)

    def __hash__(self):
        return hash((self.q, self.U.tobytes()))


class Circuit:
    """An ordered gate list over ``n_qubits`` qubits.

    The per-qubit factor schedule used by the auxiliary-field propagators is
    precomputed here. Each schedule entry is ``(kind, g, payload)`` with
    ``kind`` one of ``"U"`` (field-free matrix), ``"A"`` or ``"B"`` (side of
    the two-bit gate with field index ``g``).
    """

    def __init__(self, n_qubits, gates=()):
        if int(n_qubits) != n_qubits or n_qubits < 1:
            raise ValidationError(f"qubit count must be a positive integer, got {n_qubits}")
        self.n_qubits = int(n_qubits)
        self.gates = tuple(gates)
        two_bit = []
        schedule = [[] for _ in range(self.n_qubits)]
        for gate in self.gates:
            for q in gate.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValidationError(f"qubit index {q} outside [0, {self.n_qubits})")
            if isinstance(gate, TwoBitGate):
                g = len(two_bit)
                two_bit.append(gate)
                schedule[gate.a].append(("A", g, gate.A))
                schedule[gate.b].append(("B", g, gate.B))
            elif isinstance(gate, OneBitGate):
                schedule[gate.q].append(("U", None, gate.U))
            else:
                raise ValidationError(f"unknown gate type {type(gate).__name__}")
        self.two_bit_gates = tuple(two_bit)
        self.schedule = tuple(tuple(s) for s in schedule)

    @property
    def n_fields(self):
        """Number of two-bit gates G (each carries four auxiliary fields)."""
        return len(self.two_bit_gates)

    def prepended(self, gates):
        return Circuit(self.n_qubits, tuple(gates) + self.gates)

    def permuted(self, perm):
        """Relabel qubit ``q`` as ``perm[q]``."""
        out = []
        for gate in self.gates:
            if isinstance(gate, TwoBitGate):
                out.append(TwoBitGate(perm[gate.a], perm[gate.b], gate.alpha, gate.A, gate.B, gate.name))
            else:
                out.append(OneBitGate(perm[gate.q], gate.U, gate.name))
        return Circuit(self.n_qubits, out)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.gates == other.gates

    def __hash__(self):
        return hash((self.n_qubits, self.gates))

    def __repr__(self):
        return f"Circuit(n_qubits={self.n_qubits}, gates={len(self.gates)}, G={self.n_fields})"


# --- observable roles -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Measured:
    op: np.ndarray

    def __post_init__(self):
        try:
            object.__setattr__(self, "op", _frozen(check_hermitian(self.op)))
        except NonHermitianInput as exc:
            raise ValidationError(str(exc)) from None

    def __eq__(self, other):
        return isinstance(other, Measured) and np.array_equal(self.op, other.op)

    def __hash__(self):
        return hash(self.op.tobytes())


@dataclass(frozen=True)
class Prescribed:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValidationError(f"prescribed value must be 0 or 1, got {self.value}")

    @property
    def projector(self):
        p = np.zeros((2, 2), dtype=complex)
        p[self.value, self.value] = 1.0
        return p


@dataclass(frozen=True)
class Traced:
    pass


TRACED = Traced()


class ObservableSpec:
    """Per-qubit roles: measured, prescribed or traced over."""

    def __init__(self, roles):
        self.roles = tuple(roles)
        for r in self.roles:
            if not isinstance(r, (Measured, Prescribed, Traced)):
                raise ValidationError(f"unknown observable role {r!r}")

    @classmethod
    def traced(cls, n_qubits):
        return cls([TRACED] * n_qubits)

    @classmethod
    def measure_all(cls, n_qubits, op=PROJ0):
        return cls([Measured(op) for _ in range(n_qubits)])

    @property
    def n_qubits(self):
        return len(self.roles)

    @property
    def measured(self):
        return tuple(l for l, r in enumerate(self.roles) if isinstance(r, Measured))

    @property
    def prescribed(self):
        return tuple(l for l, r in enumerate(self.roles) if isinstance(r, Prescribed))

    def observable(self, l):
        r = self.roles[l]
        return r.op if isinstance(r, Measured) else I2

    def projector(self, l):
        r = self.roles[l]
        return r.projector if isinstance(r, Prescribed) else I2

    def only(self, l):
        """Copy in which only qubit ``l`` stays measured; prescriptions are kept."""
        roles = [r if (k == l or not isinstance(r, Measured)) else TRACED for k, r in enumerate(self.roles)]
        return ObservableSpec(roles)

    def permuted(self, perm):
        roles = [TRACED] * len(self.roles)
        for q, r in enumerate(self.roles):
            roles[perm[q]] = r
        return ObservableSpec(roles)

    def check_against(self, circuit):
        if self.n_qubits != circuit.n_qubits:
            raise ValidationError(
                f"observable spec covers {self.n_qubits} qubits, circuit has {circuit.n_qubits}"
            )

    def __eq__(self, other):
        return isinstance(other, ObservableSpec) and self.roles == other.roles

    def __hash__(self):
        return hash(self.roles)

    def __repr__(self):
        return f"ObservableSpec({self.roles!r})"


# --- gate library ----------------------------------------------------------

def hadamard(q):
    return OneBitGate(q, HADAMARD, "h")


def one_bit(q, u):
    return OneBitGate(q, u, "u1")


def two_bit(a, b, alpha, A, B):
    try:
        return TwoBitGate(a, b, float(alpha), Generator(A), Generator(B))
    except NonHermitianInput as exc:
        raise ValidationError(str(exc)) from None


_CNOT_A = Generator(I2 - SIGMA_Z)
_CNOT_B = Generator(I2 - SIGMA_X)
_PHASE_GEN = Generator((I2 - SIGMA_Z) / 2)


def cnot(control, target):
    """CNOT as ``exp(-i*(pi/4)*(1 - Z)(x)(1 - X))``; equal to the textbook gate
    up to a global phase."""
    return TwoBitGate(control, target, math.pi / 4, _CNOT_A, _CNOT_B, "cnot")


def controlled_phase(a, b, omega):
    """``exp(+i*omega*A(x)B)`` with ``A = B = (1 - Z)/2``: phase ``e^{i omega}`` on |11>."""
    return TwoBitGate(a, b, -float(omega), _PHASE_GEN, _PHASE_GEN, "cphase")


def build_fft_circuit(n_qubits):
    """Quantum Fourier transform without the final bit reversal.

    Most significant qubit first: a Hadamard on qubit ``j``, then controlled
    phases ``pi / 2**(j - k)`` coupling ``j`` with every less significant
    ``k``. The less significant qubit is the ``A`` side of each phase gate.
    The output amplitudes come out bit-reversed.
    """
    if int(n_qubits) != n_qubits or n_qubits < 1:
        raise ValidationError(f"FFT needs at least one qubit, got {n_qubits}")
    gates = []
    for j in range(n_qubits - 1, -1, -1):
        gates.append(hadamard(j))
        for k in range(j - 1, -1, -1):
            gates.append(controlled_phase(k, j, math.pi / 2 ** (j - k)))
    return Circuit(n_qubits, gates)


def uniform_layer(n_qubits):
    return [hadamard(q) for q in range(n_qubits)]


def fft_demo_problem(n_qubits):
    """FFT of a constant function: Hadamard preparation layer, then the FFT,
    with ``|0><0|`` measured on every qubit. Exact answer: 1 per qubit."""
    circuit = build_fft_circuit(n_qubits).prepended(uniform_layer(n_qubits))
    return circuit, ObservableSpec.measure_all(n_qubits, PROJ0)


def fft_fixed_point_guess(circuit):
    """Starting guess for the minimum-action path of an FFT-type circuit:
    zero on the ``A`` side, one half on the ``B`` side."""
    G = circuit.n_fields
    path = np.zeros((G, 4), dtype=complex)
    path[:, 1] = 0.5
    path[:, 3] = 0.5
    return path
