import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsim.algebra import (
    HADAMARD,
    I2,
    KET0,
    KET1,
    KET_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Generator,
    adjoint,
    exp_scaled_hermitian,
    is_hermitian,
    mat2,
    mat2_mul,
    matrix_element,
    pauli_decompose,
)
from qsim.errors import NonHermitianInput

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@st.composite
def hermitians(draw, scale=1.0):
    a, b, c, d = (draw(finite) * scale for _ in range(4))
    return mat2(a, c + 1j * d, c - 1j * d, b)


def taylor_exp(m, terms=30):
    out = np.zeros((2, 2), dtype=complex)
    term = np.eye(2, dtype=complex)
    for k in range(terms):
        out += term
        term = term @ m / (k + 1)
    return out


def test_mat2_mul_examples():
    assert np.array_equal(mat2_mul(I2, I2), I2)
    assert np.array_equal(mat2_mul(SIGMA_X, SIGMA_X), I2)
    got = HADAMARD @ np.diag([1, 1j]) @ HADAMARD
    expected = 0.5 * mat2(1 + 1j, 1 - 1j, 1 - 1j, 1 + 1j)
    assert np.allclose(got, expected, atol=1e-15)


def test_exp_zero_angle_is_identity():
    assert np.allclose(exp_scaled_hermitian(0.0, SIGMA_Z), I2, atol=0)


def test_exp_cnot_control_generator():
    # eigenvalues 0 and 2 of 1 - Z, angle pi/4
    got = exp_scaled_hermitian(math.pi / 4, I2 - SIGMA_Z)
    assert np.allclose(got, np.diag([1, -1j]), atol=1e-15)


def test_exp_phase_generator():
    got = exp_scaled_hermitian(math.pi / 2, (I2 - SIGMA_Z) / 2)
    assert np.allclose(got, np.diag([1, cmath.exp(-1j * math.pi / 2)]), atol=1e-15)


def test_exp_of_scalar_generator():
    got = exp_scaled_hermitian(0.3 + 0.2j, 2.5 * I2)
    assert np.allclose(got, cmath.exp(-1j * (0.3 + 0.2j) * 2.5) * I2, atol=1e-15)


def test_non_hermitian_rejected():
    with pytest.raises(NonHermitianInput):
        exp_scaled_hermitian(1.0, mat2(0, 1, 0, 0))
    with pytest.raises(NonHermitianInput):
        Generator(mat2(1j, 0, 0, 0))
    # within tolerance is accepted
    Generator(mat2(1 + 1e-13j, 0, 0, 1))


def test_matrix_element_examples():
    assert matrix_element(KET0, I2, KET0) == 1
    assert matrix_element(KET0, SIGMA_X, KET0) == 0
    phi = 0.7
    got = matrix_element(KET_PLUS, np.diag([1, cmath.exp(1j * phi)]), KET_PLUS)
    assert abs(got - (1 + cmath.exp(1j * phi)) / 2) < 1e-15
    assert matrix_element(KET1, SIGMA_Y, KET0) == 1j


def test_pauli_decompose_roundtrip():
    h = mat2(0.3, 0.2 - 0.7j, 0.2 + 0.7j, -1.1)
    c, (x, y, z) = pauli_decompose(h)
    assert np.allclose(c * I2 + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z, h, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(hermitians(), finite)
def test_exp_is_unitary_for_real_angle(h, theta):
    u = exp_scaled_hermitian(theta, h)
    assert np.max(np.abs(u @ adjoint(u) - I2)) < 1e-12
    assert np.all(np.isfinite(u))


@settings(max_examples=200, deadline=None)
@given(hermitians(), finite, finite)
def test_group_law(h, t1, t2):
    g = Generator(h)
    assert np.max(np.abs(g.exp(t1 + t2) - g.exp(t1) @ g.exp(t2))) < 1e-12


@settings(max_examples=200, deadline=None)
@given(hermitians(), finite, finite)
def test_matches_taylor_series_complex_angle(h, re, im):
    theta = complex(re, im)
    norm = np.linalg.norm(h, 2)
    if abs(theta) * norm > 3:
        theta *= 3 / (abs(theta) * norm)
    got = exp_scaled_hermitian(theta, h)
    ref = taylor_exp(-1j * theta * h)
    assert np.max(np.abs(got - ref)) < 1e-10


@settings(max_examples=100, deadline=None)
@given(hermitians())
def test_generator_keeps_hermitian_canonical(h):
    assert is_hermitian(Generator(h).matrix, tol=0.0)
