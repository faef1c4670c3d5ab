"""Stochastic estimation of circuit observables over auxiliary-field paths.

Two samplers share one output type, :class:`Estimate`:

* complex Langevin: Euler-Maruyama integration of ``dx/dt = -(i/2) dS/dx + eta``
  for every field, with real white noise, and a time average of the
  estimator along the walk;
* Metropolis: a real-field random walk with weight ``|exp(-iS)|`` and the
  phase ``exp(-i Re S)`` folded into numerator and denominator averages.

Every estimate carries one entry per measured qubit (that qubit's one-bit
observable on its own) followed by the joint product observable.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import logging
import math
import os

import numpy as np

from .action import SINGULAR_FLOOR, evaluate, quadratic_term
from .circuit import fft_fixed_point_guess
from .errors import ConvergenceFailure, SingularBracket, ValidationError, WalkerError, ZeroSignal
from .hs import as_path, zero_path
from .stats import binning_analysis, blocked_jackknife_ratio

logger = logging.getLogger(__name__)

MAX_HALVINGS = 10
MAX_REJECTIONS = 1000


def observable_labels(spec):
    return tuple(f"q{l}" for l in spec.measured) + ("joint",)


def _observables(spec, ratios):
    """Per measured qubit ratio, then the full product."""
    return np.append(ratios[list(spec.measured)], np.prod(ratios))


@dataclass
class Estimate:
    """A Monte Carlo result.

    ``value`` is complex, one entry per label. ``stderr`` is the standard error
    of the real part and ``stderr_imag`` that of the imaginary part.
    ``signal_magnitude`` (Metropolis only) is ``|<exp(-i Re S)>|``.
    """

    labels: tuple
    value: np.ndarray
    stderr: np.ndarray
    stderr_imag: np.ndarray
    n_samples: int
    autocorrelation_time: float
    signal_magnitude: float | None = None
    signal_stderr: float | None = None
    sign_problem_dominated: bool = False
    diagnostics: dict = field(default_factory=dict)

    def __getitem__(self, label):
        i = self.labels.index(label)
        return self.value[i], self.stderr[i]

    def to_dict(self):
        out = {
            "estimates": {
                lab: {
                    "value": [float(v.real), float(v.imag)],
                    "stderr": float(s),
                    "stderr_imag": float(si),
                }
                for lab, v, s, si in zip(self.labels, self.value, self.stderr, self.stderr_imag)
            },
            "n_samples": int(self.n_samples),
            "autocorrelation_time": float(self.autocorrelation_time),
        }
        if self.signal_magnitude is not None:
            out["signal_magnitude"] = float(self.signal_magnitude)
            out["signal_stderr"] = float(self.signal_stderr)
            out["sign_problem_dominated"] = bool(self.sign_problem_dominated)
        return out


def _summarize(labels, samples, **extra):
    re = [binning_analysis(samples[:, k].real) for k in range(samples.shape[1])]
    im = [binning_analysis(samples[:, k].imag) for k in range(samples.shape[1])]
    return Estimate(
        labels=labels,
        value=samples.mean(axis=0),
        stderr=np.array([b.stderr for b in re]),
        stderr_imag=np.array([b.stderr for b in im]),
        n_samples=len(samples),
        autocorrelation_time=max(b.tau for b in re + im),
        **extra,
    )


# --- complex Langevin --------------------------------------------------------

@dataclass(frozen=True)
class LangevinConfig:
    """Langevin run parameters.

    ``init`` is ``"fixed-point"``, ``"zeros"`` or an explicit ``(G, 4)`` path.
    ``regulator`` adds ``-regulator * x`` to every drift, i.e. the Gaussian
    damping ``exp(-regulator * sum x^2)`` on the weight; 0 keeps the weight
    untouched. ``noise=False`` integrates the deterministic flow only.
    """

    dt: float = 0.01
    burn_in_steps: int = 10_000
    sample_steps: int = 100_000
    seed: int = 0
    drift_cap: float = 50.0
    init: object = "fixed-point"
    regulator: float = 0.0
    escape_radius: float = 1e3
    escape_patience: int = 100
    noise: bool = True

    def __post_init__(self):
        if not self.dt > 0:
            raise ValidationError("dt must be positive")
        if self.sample_steps < 1:
            raise ValidationError("sample_steps must be at least 1")
        if self.burn_in_steps < 0:
            raise ValidationError("burn_in_steps must be non-negative")
        if not self.drift_cap > 0:
            raise ValidationError("drift_cap must be positive")
        if self.regulator < 0:
            raise ValidationError("regulator must be non-negative")
        if isinstance(self.init, str) and self.init not in ("fixed-point", "zeros"):
            raise ValidationError(f"unknown init {self.init!r}")


def find_fixed_point(circuit, spec, guess=None, tol=1e-13, max_iter=50):
    """Newton iteration for a zero of the (holomorphic) drift.

    Returns the path, or ``None`` if Newton does not converge.
    """
    path = fft_fixed_point_guess(circuit) if guess is None else np.array(guess, dtype=complex)
    n = path.size
    if n == 0:
        return path
    h = 1e-7
    for _ in range(max_iter):
        try:
            d = evaluate(circuit, spec, path).drift.ravel()
        except SingularBracket:
            return None
        if np.max(np.abs(d)) < tol:
            return path
        jac = np.empty((n, n), dtype=complex)
        flat = path.ravel()
        for j in range(n):
            step = np.zeros(n, dtype=complex)
            step[j] = h
            try:
                dp = evaluate(circuit, spec, (flat + step).reshape(path.shape)).drift.ravel()
                dm = evaluate(circuit, spec, (flat - step).reshape(path.shape)).drift.ravel()
            except SingularBracket:
                return None
            jac[:, j] = (dp - dm) / (2 * h)
        try:
            delta = np.linalg.solve(jac, -d)
        except np.linalg.LinAlgError:
            return None
        path = (flat + delta).reshape(path.shape)
    d = evaluate(circuit, spec, path).drift
    return path if np.max(np.abs(d)) < 1e3 * tol else None


def initial_path(circuit, spec, init):
    if isinstance(init, str):
        if init == "zeros":
            return zero_path(circuit)
        fp = find_fixed_point(circuit, spec)
        if fp is None:
            logger.info("no fixed point found; starting from zero fields")
            return zero_path(circuit)
        return fp
    return as_path(circuit, init).copy()


class _Walker:
    """One Langevin trajectory: owns its path and its random stream."""

    def __init__(self, circuit, spec, cfg):
        self.circuit = circuit
        self.spec = spec
        self.cfg = cfg
        self.rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
        self.path = initial_path(circuit, spec, cfg.init)
        self.rejections = 0
        self.halved_steps = 0
        self.max_field = float(np.max(np.abs(self.path))) if self.path.size else 0.0
        self.escaped_run = 0
        self.step_index = 0
        try:
            self.current = self._eval(self.path)
        except SingularBracket as exc:
            raise ConvergenceFailure(f"initial path is singular: {exc}", self.diagnostics()) from None

    def _eval(self, path):
        ev = evaluate(self.circuit, self.spec, path)
        if self.cfg.regulator:
            ev.drift = ev.drift - self.cfg.regulator * path
        return ev

    def diagnostics(self):
        return {
            "steps": self.step_index,
            "rejections": self.rejections,
            "halved_steps": self.halved_steps,
            "max_abs_field": self.max_field,
        }

    def _fail(self, msg):
        d = self.diagnostics()
        d["escape_radius"] = self.cfg.escape_radius
        raise ConvergenceFailure(f"step {self.step_index}: {msg}", d)

    def advance(self):
        cfg = self.cfg
        d = self.current.drift
        h, substeps = cfg.dt, 1
        if d.size and np.max(np.abs(d)) > cfg.drift_cap:
            self.halved_steps += 1
            while np.max(np.abs(d)) * (h / cfg.dt) > cfg.drift_cap and substeps < 2**MAX_HALVINGS:
                h *= 0.5
                substeps *= 2
        scale = math.sqrt(h)
        for _ in range(substeps):
            for attempt in range(MAX_REJECTIONS):
                new = self.path + self.current.drift * h
                if cfg.noise:
                    new = new + scale * self.rng.standard_normal(self.path.shape)
                if not np.all(np.isfinite(new)):
                    self._fail("non-finite field")
                try:
                    ev = self._eval(new)
                except SingularBracket:
                    self.rejections += 1
                    if not cfg.noise:
                        self._fail("deterministic step lands on a singular bracket")
                    continue
                break
            else:
                self._fail(f"{MAX_REJECTIONS} consecutive rejected steps")
            if not (np.all(np.isfinite(ev.drift)) and np.all(np.isfinite(ev.numerators))):
                self._fail("non-finite drift or estimator")
            self.path, self.current = new, ev
        self.step_index += 1
        m = float(np.max(np.abs(self.path))) if self.path.size else 0.0
        self.max_field = max(self.max_field, m)
        if m > cfg.escape_radius:
            self.escaped_run += 1
            if self.escaped_run > cfg.escape_patience:
                self._fail(f"fields beyond escape radius {cfg.escape_radius:g} for {self.escaped_run} steps")
        else:
            self.escaped_run = 0


def langevin_trajectory(circuit, spec, cfg, n_steps):
    """Deterministic-or-noisy path history, shape ``(n_steps + 1, G, 4)``."""
    spec.check_against(circuit)
    w = _Walker(circuit, spec, cfg)
    out = [w.path.copy()]
    for _ in range(n_steps):
        w.advance()
        out.append(w.path.copy())
    return np.array(out)


def langevin_run(circuit, spec, cfg=LangevinConfig()):
    """Time-averaged estimator along one complex Langevin walk.

    At each step the estimator is recorded at the current fields, then all
    fields move by ``drift * dt + sqrt(dt) * N(0, 1)`` (real noise).
    """
    spec.check_against(circuit)
    labels = observable_labels(spec)
    w = _Walker(circuit, spec, cfg)
    for _ in range(cfg.burn_in_steps):
        w.advance()
    samples = np.empty((cfg.sample_steps, len(labels)), dtype=complex)
    for k in range(cfg.sample_steps):
        samples[k] = _observables(spec, w.current.ratios)
        if k + 1 < cfg.sample_steps:
            w.advance()
    if not np.all(np.isfinite(samples)):
        w._fail("non-finite estimator samples")
    return _summarize(labels, samples, diagnostics=w.diagnostics())


# --- Metropolis ----------------------------------------------------------------

@dataclass(frozen=True)
class MetropolisConfig:
    proposal_width: float = 0.1
    burn_in: int = 10_000
    samples: int = 100_000
    seed: int = 0
    regulator: float = 0.0

    def __post_init__(self):
        if not self.proposal_width > 0:
            raise ValidationError("proposal_width must be positive")
        if self.samples < 1:
            raise ValidationError("samples must be at least 1")
        if self.burn_in < 0:
            raise ValidationError("burn_in must be non-negative")
        if self.regulator < 0:
            raise ValidationError("regulator must be non-negative")


def _real_weight(circuit, spec, path, regulator):
    """``(log|w|, phase, ratios)`` at a real path; ``None`` if singular."""
    try:
        ev = evaluate(circuit, spec, path, with_drift=False)
    except SingularBracket:
        return None
    quad = quadratic_term(circuit, path)
    b = ev.denominators
    logabs = float(-quad.imag + np.sum(np.log(np.abs(b))))
    if regulator:
        logabs -= regulator * float(np.sum(path.real**2))
    phase = complex(np.exp(1j * quad.real) * np.prod(b / np.abs(b)))
    return logabs, phase, ev.ratios


def metropolis_run(circuit, spec, cfg=MetropolisConfig(), check_signal=True):
    """Importance sampling of real paths with weight ``|exp(-iS)|``.

    ``<O> ~ <exp(-i Re S) O> / <exp(-i Re S)>``. ``signal_magnitude`` is the
    modulus of the denominator average; when it is below ten of its own
    standard errors the result is flagged and, with ``check_signal``,
    ``ZeroSignal`` is raised carrying the estimate.
    """
    spec.check_against(circuit)
    labels = observable_labels(spec)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    path = zero_path(circuit).real
    state = _real_weight(circuit, spec, path, cfg.regulator)
    tries = 0
    while state is None:
        tries += 1
        if tries > MAX_REJECTIONS:
            raise ConvergenceFailure("no non-singular starting path found")
        path = rng.standard_normal(path.shape)
        state = _real_weight(circuit, spec, path, cfg.regulator)
    accepted = 0
    total = cfg.burn_in + cfg.samples
    phases = np.empty(cfg.samples, dtype=complex)
    weighted = np.empty((cfg.samples, len(labels)), dtype=complex)
    for step in range(total):
        if path.size:
            prop = path + cfg.proposal_width * rng.standard_normal(path.shape)
            new = _real_weight(circuit, spec, prop, cfg.regulator)
            if new is not None:
                delta = new[0] - state[0]
                if delta >= 0 or rng.random() < math.exp(delta):
                    path, state = prop, new
                    accepted += 1
        else:
            accepted += 1
        k = step - cfg.burn_in
        if k >= 0:
            phases[k] = state[1]
            weighted[k] = state[1] * _observables(spec, state[2])

    re = binning_analysis(phases.real)
    im = binning_analysis(phases.imag)
    signal = float(abs(phases.mean()))
    signal_err = float(math.hypot(re.stderr, im.stderr))
    block = max(re.block_size, im.block_size)
    ratio, err_re, err_im = blocked_jackknife_ratio(weighted, phases, block)
    dominated = signal < 10 * signal_err
    est = Estimate(
        labels=labels,
        value=np.asarray(ratio),
        stderr=np.asarray(err_re),
        stderr_imag=np.asarray(err_im),
        n_samples=cfg.samples,
        autocorrelation_time=max(re.tau, im.tau),
        signal_magnitude=signal,
        signal_stderr=signal_err,
        sign_problem_dominated=bool(dominated),
        diagnostics={"acceptance_rate": accepted / total},
    )
    if dominated and check_signal:
        raise ZeroSignal(
            f"phase average {signal:.3e} is below ten standard errors ({signal_err:.3e})", est
        )
    return est


# --- parallel walkers --------------------------------------------------------

def walker_seed(base_seed, index):
    """Seed of walker ``index``; walker 0 keeps ``base_seed`` itself."""
    if index == 0:
        return int(base_seed)
    state = np.random.SeedSequence(int(base_seed), spawn_key=(int(index),)).generate_state(2, np.uint64)
    return int(state[0]) << 64 | int(state[1])


def _max_workers(n_walkers):
    cap = os.environ.get("QSIM_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(n_walkers, limit))


def _one_walker(args):
    method, circuit, spec, cfg, index = args
    try:
        if method == "langevin":
            return langevin_run(circuit, spec, cfg)
        return metropolis_run(circuit, spec, cfg, check_signal=False)
    except Exception as exc:  # re-raised with the walker index below
        return WalkerError(index, exc)


def pool_estimates(estimates):
    """Combine independent equal-length runs into one estimate."""
    n = len(estimates)
    first = estimates[0]
    value = np.mean([e.value for e in estimates], axis=0)
    stderr = np.sqrt(np.sum([e.stderr**2 for e in estimates], axis=0)) / n
    stderr_im = np.sqrt(np.sum([e.stderr_imag**2 for e in estimates], axis=0)) / n
    extra = {}
    if first.signal_magnitude is not None:
        sig = float(np.mean([e.signal_magnitude for e in estimates]))
        sig_err = float(np.sqrt(np.sum([e.signal_stderr**2 for e in estimates])) / n)
        extra = dict(signal_magnitude=sig, signal_stderr=sig_err, sign_problem_dominated=sig < 10 * sig_err)
    return Estimate(
        labels=first.labels,
        value=value,
        stderr=stderr,
        stderr_imag=stderr_im,
        n_samples=sum(e.n_samples for e in estimates),
        autocorrelation_time=float(np.mean([e.autocorrelation_time for e in estimates])),
        diagnostics={"walkers": [dict(e.diagnostics, seed_index=i) for i, e in enumerate(estimates)]},
        **extra,
    )


def run_parallel_walkers(method, circuit, spec, cfg, n_walkers, base_seed=None):
    """Run ``n_walkers`` independent walkers and pool them.

    Walker ``i`` uses :func:`walker_seed` of ``base_seed`` (default
    ``cfg.seed``). Results depend only on the configuration and seeds; the
    worker count comes from ``QSIM_THREADS`` (default: CPU count).
    """
    if method not in ("langevin", "metropolis"):
        raise ValueError(f"unknown method {method!r}")
    if n_walkers < 1:
        raise ValidationError("n_walkers must be at least 1")
    base = cfg.seed if base_seed is None else base_seed
    if n_walkers == 1:
        cfg1 = replace(cfg, seed=base)
        if method == "langevin":
            return langevin_run(circuit, spec, cfg1)
        return metropolis_run(circuit, spec, cfg1)
    jobs = [(method, circuit, spec, replace(cfg, seed=walker_seed(base, i)), i) for i in range(n_walkers)]
    workers = _max_workers(n_walkers)
    if workers == 1:
        results = [_one_walker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_one_walker, jobs))
    for r in results:
        if isinstance(r, WalkerError):
            raise r
    pooled = pool_estimates(results)
    if method == "metropolis" and pooled.sign_problem_dominated:
        raise ZeroSignal("pooled phase average is below ten standard errors", pooled)
    return pooled
