"""Line-oriented circuit description format.

::

    qubits <L>
    h <q>
    u1 <q> <8 floats>              # row-major (re, im) pairs
    cnot <control> <target>
    cphase <a> <b> <omega>
    gate2 <a> <b> <alpha> <4 floats A> <4 floats B>
    obs measure <q> p0|p1|<4 floats>
    obs prescribe <q> 0|1
    obs trace <q>

A Hermitian generator is written as ``m00 re(m01) im(m01) m11``. Keywords are
case-insensitive, ``#`` starts a comment, and qubits without an ``obs`` line
are traced over.
"""
import numpy as np

from .algebra import PROJ0, PROJ1
from .circuit import (
    TRACED,
    Circuit,
    Measured,
    ObservableSpec,
    OneBitGate,
    Prescribed,
    TwoBitGate,
    Traced,
    cnot,
    controlled_phase,
    hadamard,
    one_bit,
    two_bit,
)
from .errors import ParseError, ValidationError


def _hermitian_from(vals):
    m00, re01, im01, m11 = vals
    return np.array([[m00, re01 + 1j * im01], [re01 - 1j * im01, m11]], dtype=complex)


def _hermitian_to(m):
    return [float(m[0, 0].real), float(m[0, 1].real), float(m[0, 1].imag), float(m[1, 1].real)]


def _int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {tok!r}") from None


def _float(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(lineno, f"expected a number, got {tok!r}") from None


def _expect(args, n, lineno, usage):
    if len(args) != n:
        raise ParseError(lineno, f"expected `{usage}`")


def parse_circuit(text):
    """Parse circuit text into ``(Circuit, ObservableSpec)``.

    Raises ``ParseError`` on malformed syntax and ``ValidationError`` on
    semantically invalid content (bad indices, non-unitary gates, ...).
    """
    n_qubits = None
    gates = []
    roles = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        key, args = toks[0].lower(), toks[1:]
        if key == "qubits":
            _expect(args, 1, lineno, "qubits <L>")
            if n_qubits is not None:
                raise ParseError(lineno, "qubit count declared twice")
            n_qubits = _int(args[0], lineno)
            if n_qubits < 1:
                raise ValidationError(f"line {lineno}: qubit count must be positive")
            continue
        if n_qubits is None:
            raise ParseError(lineno, "`qubits <L>` must come first")
        try:
            if key == "h":
                _expect(args, 1, lineno, "h <q>")
                gates.append(hadamard(_int(args[0], lineno)))
            elif key == "u1":
                _expect(args, 9, lineno, "u1 <q> <8 floats>")
                v = [_float(t, lineno) for t in args[1:]]
                u = np.array(v[0::2], dtype=float) + 1j * np.array(v[1::2], dtype=float)
                gates.append(one_bit(_int(args[0], lineno), u.reshape(2, 2)))
            elif key == "cnot":
                _expect(args, 2, lineno, "cnot <control> <target>")
                gates.append(cnot(_int(args[0], lineno), _int(args[1], lineno)))
            elif key == "cphase":
                _expect(args, 3, lineno, "cphase <a> <b> <omega>")
                gates.append(controlled_phase(
                    _int(args[0], lineno), _int(args[1], lineno), _float(args[2], lineno)))
            elif key == "gate2":
                _expect(args, 11, lineno, "gate2 <a> <b> <alpha> <4 floats A> <4 floats B>")
                v = [_float(t, lineno) for t in args[2:]]
                gates.append(two_bit(_int(args[0], lineno), _int(args[1], lineno), v[0],
                                     _hermitian_from(v[1:5]), _hermitian_from(v[5:9])))
            elif key == "obs":
                q, role = _parse_obs(args, lineno)
                if not 0 <= q < n_qubits:
                    raise ValidationError(f"qubit index {q} outside [0, {n_qubits})")
                if q in roles:
                    raise ValidationError(f"qubit {q} given two observable roles")
                roles[q] = role
            else:
                raise ParseError(lineno, f"unknown keyword {toks[0]!r}")
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    if n_qubits is None:
        raise ParseError(0, "missing `qubits <L>` declaration")
    circuit = Circuit(n_qubits, gates)
    spec = ObservableSpec([roles.get(q, TRACED) for q in range(n_qubits)])
    return circuit, spec


def _parse_obs(args, lineno):
    if not args:
        raise ParseError(lineno, "expected `obs measure|prescribe|trace <q> ...`")
    kind, rest = args[0].lower(), args[1:]
    if kind == "measure":
        if len(rest) == 2 and rest[1].lower() in ("p0", "p1"):
            op = PROJ0 if rest[1].lower() == "p0" else PROJ1
            return _int(rest[0], lineno), Measured(op)
        _expect(rest, 5, lineno, "obs measure <q> p0|p1|<4 floats>")
        v = [_float(t, lineno) for t in rest[1:]]
        return _int(rest[0], lineno), Measured(_hermitian_from(v))
    if kind == "prescribe":
        _expect(rest, 2, lineno, "obs prescribe <q> 0|1")
        if rest[1] not in ("0", "1"):
            raise ParseError(lineno, f"prescribed value must be 0 or 1, got {rest[1]!r}")
        return _int(rest[0], lineno), Prescribed(int(rest[1]))
    if kind == "trace":
        _expect(rest, 1, lineno, "obs trace <q>")
        return _int(rest[0], lineno), TRACED
    raise ParseError(lineno, f"unknown obs kind {args[0]!r}")


def format_circuit(circuit, spec=None):
    """Inverse of :func:`parse_circuit`; floats are written with ``repr``."""
    lines = [f"qubits {circuit.n_qubits}"]
    for gate in circuit.gates:
        if isinstance(gate, OneBitGate):
            if gate.name == "h" and gate == hadamard(gate.q):
                lines.append(f"h {gate.q}")
            else:
                vals = " ".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in gate.U.ravel())
                lines.append(f"u1 {gate.q} {vals}")
        elif isinstance(gate, TwoBitGate):
            if gate.name == "cnot" and gate == cnot(gate.a, gate.b):
                lines.append(f"cnot {gate.a} {gate.b}")
            elif gate.name == "cphase" and gate == controlled_phase(gate.a, gate.b, -gate.alpha):
                lines.append(f"cphase {gate.a} {gate.b} {-gate.alpha!r}")
            else:
                A = " ".join(repr(x) for x in _hermitian_to(gate.A.matrix))
                B = " ".join(repr(x) for x in _hermitian_to(gate.B.matrix))
                lines.append(f"gate2 {gate.a} {gate.b} {gate.alpha!r} {A} {B}")
    if spec is not None:
        for q, role in enumerate(spec.roles):
            if isinstance(role, Measured):
                if np.array_equal(role.op, PROJ0):
                    lines.append(f"obs measure {q} p0")
                elif np.array_equal(role.op, PROJ1):
                    lines.append(f"obs measure {q} p1")
                else:
                    lines.append(f"obs measure {q} " + " ".join(repr(x) for x in _hermitian_to(role.op)))
            elif isinstance(role, Prescribed):
                lines.append(f"obs prescribe {q} {role.value}")
            elif isinstance(role, Traced):
                lines.append(f"obs trace {q}")
    return "\n".join(lines) + "\n"
