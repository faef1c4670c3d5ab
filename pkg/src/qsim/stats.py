"""Error analysis for correlated Monte Carlo series."""
from dataclasses import dataclass

import numpy as np

MIN_BLOCKS = 32
PLATEAU_TOL = 0.05


@dataclass(frozen=True)
class Binning:
    mean: float
    stderr: float
    tau: float
    block_size: int
    errors: np.ndarray


def binning_analysis(x, min_blocks=MIN_BLOCKS, tol=PLATEAU_TOL):
    """Blocking analysis of a real series.

    Block sizes double until the error estimate stops growing by more than
    ``tol`` (relative) or fewer than ``min_blocks`` blocks remain. The error
    at that level is the standard error; ``tau = (err / naive_err)**2 / 2``
    is the integrated autocorrelation time in steps.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n == 0:
        raise ValueError("empty series")
    mean = float(x.mean())
    if n < 2:
        return Binning(mean, 0.0, 0.5, 1, np.zeros(1))
    errors = []
    blocks = x
    while len(blocks) >= min_blocks or not errors:
        m = len(blocks)
        errors.append(float(blocks.std(ddof=1) / np.sqrt(m)) if m > 1 else 0.0)
        if m < 2 * min_blocks:
            break
        blocks = 0.5 * (blocks[: m // 2 * 2 : 2] + blocks[1 : m // 2 * 2 : 2])
    errors = np.array(errors)
    level = len(errors) - 1
    for k in range(len(errors) - 1):
        if errors[k + 1] <= errors[k] * (1 + tol):
            level = k + 1
            break
    err = float(errors[level])
    tau = 0.5 * (err / errors[0]) ** 2 if errors[0] > 0 else 0.5
    return Binning(mean, err, float(tau), 2**level, errors)


def blocked_jackknife_ratio(num, den, block_size):
    """Ratio of means ``mean(num) / mean(den)`` with a blocked-jackknife error.

    ``num`` may carry trailing axes (several observables sharing one
    denominator). Returns ``(ratio, stderr_real, stderr_imag)``.
    """
    num = np.asarray(num)
    den = np.asarray(den)
    n = len(den)
    nb = max(2, n // max(1, block_size))
    nb = min(nb, n)
    size = n // nb
    used = nb * size
    num_b = num[:used].reshape((nb, size) + num.shape[1:]).mean(axis=1)
    den_b = den[:used].reshape(nb, size).mean(axis=1)
    total_num = num_b.sum(axis=0)
    total_den = den_b.sum()
    ratio = total_num / total_den
    loo = (total_num[None] - num_b) / (total_den - den_b).reshape((nb,) + (1,) * (num.ndim - 1))
    dev = loo - loo.mean(axis=0)
    var_re = (nb - 1) / nb * np.sum(dev.real**2, axis=0)
    var_im = (nb - 1) / nb * np.sum(dev.imag**2, axis=0)
    return ratio, np.sqrt(var_re), np.sqrt(var_im)
