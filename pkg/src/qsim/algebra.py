"""Closed-form complex 2x2 linear algebra.

A one-bit operator is a ``(2, 2)`` complex128 ndarray and a one-bit state is a
length-2 complex128 ndarray. Everything here is pure and allocation-light
because the samplers call it ~4G times per step.
"""
import cmath
import math

import numpy as np

from .errors import NonHermitianInput

HERMITIAN_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PROJ0 = np.array([[1, 0], [0, 0]], dtype=complex)
PROJ1 = np.array([[0, 0], [0, 1]], dtype=complex)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)


def mat2(m00, m01, m10, m11):
    return np.array([[m00, m01], [m10, m11]], dtype=complex)


def mat2_mul(a, b):
    """Product ``a @ b``: ``b`` acts first when composing right to left."""
    return a @ b


def adjoint(m):
    return m.conj().T


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m)
    return (
        m.shape == (2, 2)
        and bool(np.all(np.isfinite(m)))
        and abs(m[0, 1] - np.conj(m[1, 0])) <= tol
        and abs(m[0, 0].imag) <= tol
        and abs(m[1, 1].imag) <= tol
    )


def check_hermitian(m, tol=HERMITIAN_TOL):
    if not is_hermitian(m, tol):
        raise NonHermitianInput(f"matrix is not Hermitian within {tol:g}: {np.asarray(m).tolist()}")
    return np.asarray(m, dtype=complex)


def is_unitary(m, tol=HERMITIAN_TOL):
    m = np.asarray(m, dtype=complex)
    return m.shape == (2, 2) and float(np.max(np.abs(m @ adjoint(m) - I2))) < tol


def pauli_decompose(h):
    """Split a Hermitian ``h`` into ``c*I + nx*X + ny*Y + nz*Z`` (all real).

    Returns ``(c, (nx, ny, nz))``.
    """
    c = 0.5 * (h[0, 0].real + h[1, 1].real)
    nz = 0.5 * (h[0, 0].real - h[1, 1].real)
    nx = 0.5 * (h[0, 1].real + h[1, 0].real)
    ny = 0.5 * (h[1, 0].imag - h[0, 1].imag)
    return c, (nx, ny, nz)


class Generator:
    """A validated Hermitian one-bit generator with its Pauli split cached.

    ``exp(theta)`` returns ``exp(-i*theta*H)`` for real or complex ``theta``.
    """

    __slots__ = ("matrix", "shift", "radius", "unit")

    def __init__(self, matrix):
        m = check_hermitian(matrix)
        self.matrix = mat2(m[0, 0].real, m[0, 1], np.conj(m[0, 1]), m[1, 1].real)
        self.matrix.setflags(write=False)
        c, (nx, ny, nz) = pauli_decompose(self.matrix)
        r = math.sqrt(nx * nx + ny * ny + nz * nz)
        self.shift = c
        self.radius = r
        if r > 0.0:
            self.unit = (nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z) / r
        else:
            self.unit = np.zeros((2, 2), dtype=complex)

    def exp(self, theta):
        phase = cmath.exp(-1j * theta * self.shift)
        if self.radius == 0.0:
            return phase * I2
        x = theta * self.radius
        return phase * (cmath.cos(x) * I2 - 1j * cmath.sin(x) * self.unit)

    def __eq__(self, other):
        return isinstance(other, Generator) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        return f"Generator({self.matrix.tolist()})"


def exp_scaled_hermitian(theta, h):
    """``exp(-i*theta*h)`` for Hermitian ``h`` via the Pauli closed form.

    ``theta`` may be complex; the same analytic formula is used with complex
    trigonometric functions, so the result is holomorphic in ``theta``.
    """
    return Generator(h).exp(theta)


def matrix_element(bra, m, ket):
    """``conj(bra) . m . ket``."""
    return complex(np.conj(bra) @ m @ ket)
