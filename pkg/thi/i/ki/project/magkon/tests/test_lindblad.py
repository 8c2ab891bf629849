import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from core.errors import ContractViolationError, InvalidArgumentError, InvalidDimensionError
from core.fock_core import FockConfig, OperatorMatrix, annihilation, basis_state
from core.hamiltonians import build_effective
from core.lindblad import (
    DecayRates,
    DensityMatrix,
    Richtung,
    collapse_effective,
    dissipator,
    evolve_master,
    period_peaks,
    state_fidelity,
    trace_distance,
    unitary_reference,
)

ZWEI_MODEN = FockConfig((3, 3))


def test_density_matrix_contracts():
    with pytest.raises(ContractViolationError):
        DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(ContractViolationError):
        DensityMatrix(np.eye(2))
    with pytest.raises(ContractViolationError):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidDimensionError):
        DensityMatrix(np.ones(3) / 3)
    assert DensityMatrix.maximally_mixed(4).dim == 4


@given(st.integers(0, 2**16))
def test_dissipator_is_traceless(seed):
    rng = np.random.default_rng(seed)
    op = OperatorMatrix(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = DensityMatrix(x @ x.conj().T / np.trace(x @ x.conj().T).real)
    assert abs(np.trace(dissipator(op, rho))) < 1e-12


def test_dissipator_dimension_mismatch():
    with pytest.raises(InvalidDimensionError):
        dissipator(annihilation(3), DensityMatrix.maximally_mixed(2))


def test_state_fidelity_pure_states():
    hin = basis_state((1, 0), ZWEI_MODEN)
    weg = basis_state((0, 1), ZWEI_MODEN)
    rho = DensityMatrix.pure(hin)
    assert state_fidelity(rho, hin) == pytest.approx(1.0)
    assert state_fidelity(rho, weg) == 0.0
    assert state_fidelity(DensityMatrix.maximally_mixed(9), hin) == pytest.approx(1 / 3)


def test_zero_rates_match_unitary_propagation():
    h = build_effective(0.05, ZWEI_MODEN)
    rho0 = DensityMatrix.pure(basis_state((1, 0), ZWEI_MODEN))
    t = np.arange(0.0, 20.0 + 1e-9, 0.5)
    traj = evolve_master(h, collapse_effective(ZWEI_MODEN, DecayRates()), rho0, t)
    for rho, referenz in zip(traj.states, unitary_reference(h, rho0, t)):
        assert trace_distance(rho, referenz) <= 1e-6
    assert traj.max_trace_drift <= 1e-12


def test_amplitude_damping_oracle():
    config = FockConfig((2, 2))
    h = build_effective(0.0, config)
    rho0 = DensityMatrix.pure(basis_state((1, 0), config))
    traj = evolve_master(h, collapse_effective(config, DecayRates(kappa_a=0.1)), rho0, [0.0, 5.0, 10.0])
    besetzung = [rho.entries[2, 2].real for rho in traj.states]
    assert_allclose(besetzung, np.exp(-0.1 * np.array([0.0, 5.0, 10.0])), atol=1e-8)
    assert traj.fidelities(basis_state((1, 0), config))[-1] == pytest.approx(math.exp(-0.5), abs=1e-8)


def test_decay_reduces_transfer_fidelity():
    h = build_effective(0.05, ZWEI_MODEN)
    start, ziel = Richtung.PHOTON_ZU_PHONON.labels(2)
    rho0 = DensityMatrix.pure(basis_state(start, ZWEI_MODEN))
    t = np.linspace(0.0, math.pi / 0.1, 41)
    ideal = evolve_master(h, collapse_effective(ZWEI_MODEN, DecayRates()), rho0, t)
    gedaempft = evolve_master(h, collapse_effective(ZWEI_MODEN, DecayRates.uniform(1e-2)), rho0, t)
    f_ideal = ideal.fidelities(basis_state(ziel, ZWEI_MODEN))
    f_gedaempft = gedaempft.fidelities(basis_state(ziel, ZWEI_MODEN))
    assert f_ideal[-1] == pytest.approx(1.0, abs=1e-6)
    assert f_gedaempft[-1] < f_ideal[-1]
    assert np.all(f_gedaempft <= f_ideal + 1e-9)


def test_evolve_master_argument_checks():
    h = build_effective(0.05, ZWEI_MODEN)
    rho0 = DensityMatrix.maximally_mixed(9)
    with pytest.raises(ContractViolationError):
        evolve_master(OperatorMatrix(h.entries), [], rho0, [0.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        evolve_master(h, [], rho0, [0.0, 1.0], dt=0.0)
    with pytest.raises(InvalidArgumentError):
        evolve_master(h, [], rho0, [1.0, 0.0])
    with pytest.raises(InvalidDimensionError):
        evolve_master(h, [], DensityMatrix.maximally_mixed(4), [0.0, 1.0])


def test_decay_rates():
    raten = DecayRates.uniform(1e-3)
    assert raten.kappa_a == raten.kappa_m == 1e-3
    assert raten.gamma_b == pytest.approx(1e-5)
    with pytest.raises(InvalidArgumentError):
        DecayRates(kappa_a=-1.0)


def test_direction_labels():
    assert Richtung("photon-phonon").labels(3) == ((1, 0, 0), (0, 0, 1))
    assert Richtung.PHONON_ZU_PHOTON.labels(2) == ((0, 1), (1, 0))


def test_period_peaks():
    t = np.linspace(0.0, 3 * math.pi, 3001)
    spitzen = period_peaks(t, np.abs(np.sin(t)), math.pi)
    assert len(spitzen) == 3
    assert_allclose(spitzen, 1.0, atol=1e-5)
    with pytest.raises(InvalidArgumentError):
        period_peaks(t, t, 0.0)
