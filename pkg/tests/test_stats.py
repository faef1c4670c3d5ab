import numpy as np
import pytest

from qsim.stats import binning_analysis, blocked_jackknife_ratio


def ar1(rng, n, rho):
    x = np.empty(n)
    x[0] = rng.standard_normal()
    noise = rng.standard_normal(n) * np.sqrt(1 - rho**2)
    for i in range(1, n):
        x[i] = rho * x[i - 1] + noise[i]
    return x


def test_white_noise():
    rng = np.random.default_rng(0)
    b = binning_analysis(rng.standard_normal(2**16))
    assert b.stderr == pytest.approx(2**-8, rel=0.15)
    assert b.tau == pytest.approx(0.5, rel=0.3)


@pytest.mark.parametrize("rho", [0.5, 0.9])
def test_ar1_autocorrelation_time(rho):
    rng = np.random.default_rng(1)
    b = binning_analysis(ar1(rng, 2**17, rho))
    tau = 0.5 * (1 + rho) / (1 - rho)
    assert b.tau == pytest.approx(tau, rel=0.3)
    assert b.stderr == pytest.approx(np.sqrt(2 * tau / 2**17), rel=0.3)


def test_constant_series():
    b = binning_analysis(np.full(1000, 3.0))
    assert b.mean == 3.0 and b.stderr == 0.0


def test_single_sample():
    b = binning_analysis([2.0])
    assert b.mean == 2.0 and b.stderr == 0.0


def test_jackknife_ratio():
    rng = np.random.default_rng(2)
    den = 1 + 0.1 * rng.standard_normal(4000)
    num = np.stack([2 * den, den + 0.1 * rng.standard_normal(4000)], axis=1)
    ratio, se_re, se_im = blocked_jackknife_ratio(num, den, 16)
    assert ratio[0] == pytest.approx(2.0)
    assert se_re[0] < 1e-12
    assert ratio[1] == pytest.approx(num[:, 1].mean() / den.mean())
    assert 0.5 * 0.1 / np.sqrt(4000) < se_re[1] < 2 * 0.1 / np.sqrt(4000)
    assert np.all(se_im == 0)
