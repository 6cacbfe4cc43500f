import numpy as np
import pytest

from scfab.noise import (
    NoiseParams,
    classical_flip,
    draw_single_qubit_faults,
    draw_two_qubit_faults,
    single_qubit_fault,
    two_qubit_fault,
)


def test_noise_params_validation():
    with pytest.raises(ValueError):
        NoiseParams(-0.1)
    with pytest.raises(ValueError):
        NoiseParams(1.5)
    n = NoiseParams(0.0075)
    assert n.p_single == pytest.approx(0.006)
    assert n.p_flip == 0.0075


def test_two_qubit_fault_degenerate():
    rng = np.random.default_rng(0)
    assert all(two_qubit_fault(0.0, rng) == (0, 0) for _ in range(100))
    n = 100_000
    pairs = draw_two_qubit_faults(1.0, n, rng)
    assert not np.any((pairs[:, 0] == 0) & (pairs[:, 1] == 0))
    codes = pairs[:, 0] * 4 + pairs[:, 1]
    exp = n / 15
    sigma = np.sqrt(exp * (1 - 1 / 15))
    for k in range(1, 16):
        c = int(np.count_nonzero(codes == k))
        assert abs(c - exp) < 3 * sigma, (k, c)


def test_two_qubit_marginal_is_four_fifths():
    rng = np.random.default_rng(1)
    p = 0.006
    n = 400_000
    pairs = draw_two_qubit_faults(p, n, rng)
    marginal = np.count_nonzero(pairs[:, 0]) / n
    expect = 0.8 * p
    sigma = np.sqrt(expect * (1 - expect) / n)
    assert abs(marginal - expect) < 3 * sigma
    marginal2 = np.count_nonzero(pairs[:, 1]) / n
    assert abs(marginal2 - expect) < 3 * sigma


def test_single_qubit_fault_rates():
    rng = np.random.default_rng(2)
    assert all(single_qubit_fault(0.0, rng) == 0 for _ in range(50))
    p = 0.0075
    n = 400_000
    codes = draw_single_qubit_faults(p, n, rng)
    rate = np.count_nonzero(codes) / n
    expect = 0.8 * p
    assert abs(rate - expect) < 3 * np.sqrt(expect / n)
    # X, Y, Z equiprobable (chi-square at 3 sigma)
    ns = [np.count_nonzero(codes == c) for c in (1, 2, 3)]
    total = sum(ns)
    chi2 = sum((c - total / 3) ** 2 / (total / 3) for c in ns)
    assert chi2 < 2 + 3 * 2.0  # df = 2


def test_classical_flip():
    rng = np.random.default_rng(3)
    assert not any(classical_flip(0.0, rng) for _ in range(100))
    assert all(classical_flip(1.0, rng) for _ in range(100))
    n = 100_000
    mean = sum(classical_flip(0.5, rng) for _ in range(n)) / n
    assert abs(mean - 0.5) < 3 * np.sqrt(0.25 / n)
