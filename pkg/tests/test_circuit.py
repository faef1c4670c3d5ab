import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsim.algebra import HADAMARD, I2, PROJ0, SIGMA_X, SIGMA_Z, Generator
from qsim.circuit import (
    TRACED,
    Circuit,
    Measured,
    ObservableSpec,
    OneBitGate,
    Prescribed,
    TwoBitGate,
    build_fft_circuit,
    cnot,
    controlled_phase,
    hadamard,
    one_bit,
    two_bit,
)
from qsim.errors import ParseError, ValidationError
from qsim.oracle import basis_state, circuit_unitary, exact_evolve, two_bit_matrix
from qsim.textformat import format_circuit, parse_circuit

FFT2_TEXT = "qubits 2\nh 1\ncphase 0 1 1.5707963267948966\nh 0\nobs measure 0 p0\nobs measure 1 p0"


def equal_up_to_phase(u, v, tol=1e-12):
    k = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    phase = u[k] / v[k]
    return abs(abs(phase) - 1) < tol and np.max(np.abs(u - phase * v)) < tol


def bit_reverse(x, n):
    return int(format(x, f"0{n}b")[::-1], 2)


# --- gates -------------------------------------------------------------------

def test_cnot_fields():
    g = cnot(0, 1)
    assert g.alpha == pytest.approx(math.pi / 4)
    assert np.allclose(g.A.matrix, I2 - SIGMA_Z)
    assert np.allclose(g.B.matrix, I2 - SIGMA_X)


def test_cnot_matrix_is_permutation():
    # basis index = q0 + 2*q1, control is qubit 0: swap |q1 q0> = |01> and |11>
    perm = np.eye(4)[[0, 3, 2, 1]]
    assert equal_up_to_phase(circuit_unitary(Circuit(2, [cnot(0, 1)])), perm)


def test_cnot_on_basis_states():
    c = Circuit(2, [cnot(0, 1)])
    out = exact_evolve(c, basis_state(2, 0b01))  # control set
    assert equal_up_to_phase(out, basis_state(2, 0b11))
    out = exact_evolve(c, basis_state(2, 0))
    assert equal_up_to_phase(out, basis_state(2, 0))


def test_controlled_phase_matrix():
    g = controlled_phase(0, 1, math.pi / 2)
    assert g.alpha == pytest.approx(-math.pi / 2)
    u = circuit_unitary(Circuit(2, [g]))
    assert np.allclose(u, np.diag([1, 1, 1, 1j]), atol=1e-15)
    out = exact_evolve(Circuit(2, [g]), basis_state(2, 3))
    assert np.allclose(out, 1j * basis_state(2, 3), atol=1e-15)


@pytest.mark.parametrize("omega", [0.3, -2.0, 7.1])
def test_controlled_phase_leaves_00(omega):
    out = exact_evolve(Circuit(2, [controlled_phase(1, 0, omega)]), basis_state(2, 0))
    assert np.allclose(out, basis_state(2, 0), atol=1e-15)


def test_gate_validation():
    with pytest.raises(ValidationError):
        cnot(1, 1)
    with pytest.raises(ValidationError):
        controlled_phase(2, 2, 1.0)
    with pytest.raises(ValidationError):
        two_bit(0, 1, 1.0, np.array([[0, 1], [0, 0]]), I2)
    with pytest.raises(ValidationError):
        one_bit(0, 2 * I2)
    with pytest.raises(ValidationError):
        Circuit(2, [hadamard(2)])
    with pytest.raises(ValidationError):
        Circuit(0)


def test_two_bit_matrix_tensor_layout():
    g = two_bit(0, 1, 0.7, SIGMA_Z, SIGMA_X)
    m = two_bit_matrix(g).reshape(4, 4)
    # rows and columns indexed by (a, b) with a the more significant index
    h = np.kron(SIGMA_Z, SIGMA_X)
    w, v = np.linalg.eigh(h)
    assert np.allclose(m, v @ np.diag(np.exp(-0.7j * w)) @ v.conj().T, atol=1e-14)


# --- FFT --------------------------------------------------------------------

def test_fft_two_qubits_structure():
    c = build_fft_circuit(2)
    assert c.n_fields == 1
    assert [g.name for g in c.gates] == ["h", "cphase", "h"]
    assert c.gates[0].q == 1 and c.gates[2].q == 0
    u = circuit_unitary(c)
    h0 = np.kron(I2, HADAMARD)
    h1 = np.kron(HADAMARD, I2)
    assert np.allclose(u, h0 @ np.diag([1, 1, 1, 1j]) @ h1, atol=1e-14)


@pytest.mark.parametrize("L", range(1, 9))
def test_fft_gate_count(L):
    c = build_fft_circuit(L)
    assert c.n_fields == L * (L - 1) // 2
    assert sum(isinstance(g, OneBitGate) for g in c.gates) == L


@pytest.mark.parametrize("L", range(1, 6))
def test_fft_is_dft_in_bit_reversed_order(L):
    n = 2**L
    u = circuit_unitary(build_fft_circuit(L))
    for a in range(n):
        out = u[:, a]
        for c in range(n):
            expected = np.exp(2j * np.pi * a * c / n) / math.sqrt(n)
            assert abs(out[bit_reverse(c, L)] - expected) < 1e-12


def test_fft_gates_validate():
    for g in build_fft_circuit(6).two_bit_gates:
        assert g.a != g.b
        assert np.allclose(g.A.matrix, g.A.matrix.conj().T, atol=1e-12)
        assert np.allclose(g.B.matrix, g.B.matrix.conj().T, atol=1e-12)


# --- observables --------------------------------------------------------------

def test_observable_spec_counts():
    spec = ObservableSpec([Measured(PROJ0), Prescribed(1), TRACED])
    assert spec.measured == (0,)
    assert spec.prescribed == (1,)
    assert np.allclose(spec.projector(1), np.diag([0, 1]))
    assert np.allclose(spec.projector(2), I2)
    with pytest.raises(ValidationError):
        Prescribed(2)
    with pytest.raises(ValidationError):
        Measured(np.array([[0, 1], [0, 0]]))


# --- text format --------------------------------------------------------------

def test_parse_fft_example():
    c, spec = parse_circuit(FFT2_TEXT)
    assert c == build_fft_circuit(2)
    assert spec == ObservableSpec.measure_all(2, PROJ0)


def test_parse_single_hadamard():
    c, spec = parse_circuit("qubits 1\nh 0")
    assert c.n_fields == 0 and len(c.gates) == 1
    assert spec.roles == (TRACED,)


def test_parse_cnot():
    c, _ = parse_circuit("qubits 2\ncnot 0 1")
    assert c.gates == (cnot(0, 1),)


def test_parse_comments_case_and_generic_gates():
    text = """
    # a comment
    QUBITS 3
    H 0   # trailing
    u1 1 0 0 1 0 1 0 0 0
    gate2 2 0 0.25 1 0 0 -1 0 0.5 -0.5 0
    obs MEASURE 0 p1
    obs prescribe 1 0
    obs measure 2 0 0 1 0
    """
    c, spec = parse_circuit(text)
    assert c.n_qubits == 3 and c.n_fields == 1
    assert np.allclose(c.gates[1].U, SIGMA_X)
    g = c.gates[2]
    assert np.allclose(g.B.matrix, np.array([[0, 0.5 - 0.5j], [0.5 + 0.5j, 0]]))
    assert spec.prescribed == (1,)
    # (m00, re m01, im m01, m11) = (0, 0, 1, 0) is -Y
    assert np.allclose(spec.observable(2), np.array([[0, 1j], [-1j, 0]]))


@pytest.mark.parametrize(
    "text, line",
    [
        ("h 0", 1),
        ("qubits 2\nfoo 1", 2),
        ("qubits 2\ncnot 0", 2),
        ("qubits 2\ncphase 0 1 abc", 2),
        ("qubits x", 1),
        ("qubits 2\nobs measure 0 p7", 2),
        ("qubits 2\nobs frob 0", 2),
        ("qubits 2\nqubits 2", 2),
        ("qubits 2\nobs prescribe 0 2", 2),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_circuit(text)
    assert info.value.line == line


@pytest.mark.parametrize(
    "text",
    [
        "qubits 2\ncnot 0 2",
        "qubits 2\ncnot 1 1",
        "qubits 2\ncphase 0 5 1.0",
        "qubits 1\nu1 0 1 0 1 0 0 0 1 0",
        "qubits 2\nobs measure 0 p0\nobs trace 0",
        "qubits 2\nobs measure 2 p0",
    ],
)
def test_parse_validation_errors(text):
    with pytest.raises(ValidationError):
        parse_circuit(text)


# --- round trip -----------------------------------------------------------------

real = st.floats(-4, 4, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian(draw):
    a, b, c, d = (draw(real) for _ in range(4))
    return np.array([[a, c + 1j * d], [c - 1j * d, b]])


@st.composite
def unitary(draw):
    h = draw(hermitian())
    return Generator(h).exp(draw(real))


@st.composite
def circuits(draw):
    L = draw(st.integers(1, 5))
    gates = []
    for _ in range(draw(st.integers(0, 8))):
        kind = draw(st.sampled_from(["h", "u1", "cnot", "cphase", "gate2"]))
        q = draw(st.integers(0, L - 1))
        if kind == "h":
            gates.append(hadamard(q))
        elif kind == "u1":
            gates.append(one_bit(q, draw(unitary())))
        elif L > 1:
            r = draw(st.integers(0, L - 1).filter(lambda x: x != q))
            if kind == "cnot":
                gates.append(cnot(q, r))
            elif kind == "cphase":
                gates.append(controlled_phase(q, r, draw(real)))
            else:
                gates.append(two_bit(q, r, draw(real), draw(hermitian()), draw(hermitian())))
    roles = [
        draw(st.sampled_from([Measured(PROJ0), Prescribed(0), Prescribed(1), TRACED, Measured(SIGMA_X)]))
        for _ in range(L)
    ]
    return Circuit(L, gates), ObservableSpec(roles)


@settings(max_examples=150, deadline=None)
@given(circuits())
def test_format_parse_round_trip(problem):
    c, spec = problem
    c2, spec2 = parse_circuit(format_circuit(c, spec))
    assert c2 == c
    assert spec2 == spec
    assert format_circuit(c2, spec2) == format_circuit(c, spec)
