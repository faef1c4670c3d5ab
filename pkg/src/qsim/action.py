"""Complex action, observable estimator and Langevin drift of a field path.

With per-qubit brackets ``b_l = <0|U^dag[l][sigma'] P[l] U[l][sigma]|0>``::

    S = -sum_g alpha_g (sigma_g tau_g - sigma'_g tau'_g) + i sum_l ln b_l

so that ``exp(-i S)`` is the path weight. The drift of a field ``x`` is
``-(i/2) dS/dx``. Only the bracket of the qubit the field's factor acts on
depends on ``x``, so the log-derivative of the bracket product collapses to a
single ratio (insertion bracket over plain bracket) and no logarithm is ever
taken on the way to the dynamics.
"""
import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DriftOverflow, SingularBracket
from .hs import SIGMA, SIGMA_C, TAU, TAU_C, as_path, bracket_sweep

SINGULAR_FLOOR = 1e-12


def quadratic_term(circuit, path):
    """``sum_g alpha_g (sigma_g tau_g - sigma'_g tau'_g)``."""
    if circuit.n_fields == 0:
        return 0j
    alpha = np.array([g.alpha for g in circuit.two_bit_gates])
    return complex(np.sum(alpha * (path[:, SIGMA] * path[:, TAU] - path[:, SIGMA_C] * path[:, TAU_C])))


@dataclass(frozen=True)
class ActionValue:
    """``S`` with the principal log per qubit; ``logw = -i S``.

    ``brackets`` are the per-qubit denominator brackets. ``weight`` rebuilds
    ``exp(-i S)`` as a product, free of any branch choice.
    """

    S: complex
    logw: complex
    brackets: np.ndarray
    quadratic: complex

    @property
    def weight(self):
        return cmath.exp(1j * self.quadratic) * complex(np.prod(self.brackets))

    @property
    def log_abs_weight(self):
        return float(-self.quadratic.imag + np.sum(np.log(np.abs(self.brackets))))

    @property
    def phase(self):
        """``exp(-i Re S)``, the unimodular part of the weight."""
        w = self.weight
        return w / abs(w)


@dataclass
class PathEvaluation:
    """Everything a sampler step needs from one pass over the qubits."""

    denominators: np.ndarray
    numerators: np.ndarray
    drift: np.ndarray | None

    @property
    def ratios(self):
        return self.numerators / self.denominators


def _check(l, b):
    if not abs(b) >= SINGULAR_FLOOR:
        raise SingularBracket(l, b)


def evaluate(circuit, spec, path, with_drift=True):
    """Brackets, per-qubit estimator ratios and (optionally) the drift."""
    L = circuit.n_qubits
    den = np.empty(L, dtype=complex)
    num = np.empty(L, dtype=complex)
    sweeps = []
    for l in range(L):
        sw = bracket_sweep(circuit, spec, path, l, insertions=with_drift)
        _check(l, sw.denominator)
        den[l] = sw.denominator
        num[l] = sw.numerator
        sweeps.append(sw)
    if not with_drift:
        return PathEvaluation(den, num, None)
    d = np.empty((circuit.n_fields, 4), dtype=complex)
    for g, gate in enumerate(circuit.two_bit_gates):
        sa, sb = sweeps[gate.a], sweeps[gate.b]
        half_ia = 0.5j * gate.alpha
        d[g, SIGMA] = half_ia * path[g, TAU] + 0.5 * sa.forward[g] / sa.denominator
        d[g, TAU] = half_ia * path[g, SIGMA] + 0.5 * sb.forward[g] / sb.denominator
        d[g, SIGMA_C] = -half_ia * path[g, TAU_C] + 0.5 * sa.conjugate[g] / sa.denominator
        d[g, TAU_C] = -half_ia * path[g, SIGMA_C] + 0.5 * sb.conjugate[g] / sb.denominator
    return PathEvaluation(den, num, d)


def action(circuit, spec, path):
    path = as_path(circuit, path)
    ev = evaluate(circuit, spec, path, with_drift=False)
    quad = quadratic_term(circuit, path)
    logs = sum(cmath.log(b) for b in ev.denominators)
    return ActionValue(S=-quad + 1j * logs, logw=1j * quad + logs, brackets=ev.denominators, quadratic=quad)


def estimator_components(circuit, spec, path):
    """Per-qubit ratios ``numerator_l / denominator_l`` (1 for unmeasured qubits)."""
    return evaluate(circuit, spec, as_path(circuit, path), with_drift=False).ratios


def estimator(circuit, spec, path):
    """``O[sigma, sigma']``: the product of the per-qubit ratios."""
    return complex(np.prod(estimator_components(circuit, spec, path)))


def drift(circuit, spec, path, cap=None):
    """Deterministic Langevin velocities, shaped like the path ``(G, 4)``.

    Raises ``DriftOverflow`` when ``cap`` is given and exceeded.
    """
    d = evaluate(circuit, spec, as_path(circuit, path)).drift
    if cap is not None and d.size and not np.max(np.abs(d)) <= cap:
        raise DriftOverflow(f"drift magnitude {np.max(np.abs(d)):.3e} exceeds cap {cap:g}")
    return d
