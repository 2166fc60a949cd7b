"""Smoke tests for the Python bindings; numpy doubles as an independent
eigensolver oracle."""

import numpy as np
import pytest

import qmc


def test_special_functions():
    assert qmc.poch(3.0, 2) == 12.0
    assert qmc.poch(1.0, 5) == 120.0
    assert qmc.qpoch(2.0, 0.5, 2) == 0.0
    assert qmc.binom(4, 2) == 6.0
    assert qmc.qbinom(2, 1, 0.5) == 1.5
    assert qmc.hyp_terminating([-1.0, -1.0], [-2.0], 3.0) == -0.5
    with pytest.raises(Exception):
        qmc.binom(4, 5)


def test_krawtchouk_closed_forms_vs_numpy():
    spec = qmc.KrawtchoukSpec(8, 0.3, 0.6)
    sys = qmc.build(spec)
    assert sys.size == 9
    assert sys.source == "analytic"
    assert sys.validate(1e-12)["passed"]

    kappa = np.array(sys.kappa)
    expected = (0.7 * 0.6) ** np.arange(9)
    assert np.abs(kappa - expected).max() < 1e-12

    # numpy as the numerical oracle for the Hamiltonian spectrum
    energies, vectors = np.linalg.eigh(sys.hamiltonian())
    assert np.abs(np.sort(energies) - np.array(sys.energies)).max() < 1e-10
    del vectors


def test_eigendecompose_matches_numpy():
    rng = np.random.default_rng(42)
    a = rng.normal(size=(12, 12))
    sym = (a + a.T) / 2
    energies, vectors = qmc.eigendecompose(sym)
    np_vals, _ = np.linalg.eigh(sym)
    assert np.abs(np.array(energies) - np_vals).max() < 1e-11
    v = np.asarray(vectors)
    assert np.abs(v.T @ v - np.eye(12)).max() < 1e-12


def test_evolution_and_unitarity():
    sys = qmc.build(qmc.HahnSpec(6, 1.5, 0.7, 2.0))
    m = sys.size

    p0 = [0.0] * m
    p0[0] = 1.0
    p64 = sys.classical_evolve(p0, 64)
    stepped = p0
    for _ in range(64):
        stepped = sys.classical_step(stepped)
    assert np.abs(np.array(p64) - np.array(stepped)).max() < 1e-9

    for steps in (0, 1, 10, 100, 1000):
        probs = np.array(sys.measurement_distribution(0, steps))
        assert abs(probs.sum() - 1.0) < 1e-10

    lta = np.array([sys.long_time_average(x, 0) for x in range(m)])
    assert abs(lta.sum() - 1.0) < 1e-10
    assert sys.long_time_average(2, 4) == sys.long_time_average(4, 2)


def test_truncated_family_reports_its_budget():
    sys = qmc.build(qmc.CharlierSpec(0.4, 0.5, 1e-12))
    assert sys.source == "numerical"
    assert sys.n_valid >= 8
    closed = np.array(sys.kappa_closed)[: sys.n_valid]
    numerical = np.array(sys.kappa)[: sys.n_valid]
    assert np.abs(closed - numerical).max() < 1e-9


def test_simple_random_walk_star():
    sys = qmc.simple_random_walk([(0, 1), (0, 2), (0, 3)])
    assert np.allclose(sys.pi, [0.5, 1 / 6, 1 / 6, 1 / 6])
    back = sys.reconstruct_kernel()
    assert np.abs(back - sys.kernel).max() < 1e-9


def test_kernel_reconstruction():
    sys = qmc.build(qmc.QHahnSpec(6, 0.3, 0.4, 0.2, 0.5))
    assert np.abs(sys.reconstruct_kernel() - sys.kernel).max() < 1e-9


def test_invalid_parameters_raise():
    with pytest.raises(Exception, match="0 < a < 1"):
        qmc.build(qmc.KrawtchoukSpec(4, 1.2, 0.5))
