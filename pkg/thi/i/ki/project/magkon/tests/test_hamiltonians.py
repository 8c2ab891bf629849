import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy import linalg

from core.errors import CapacityError, InvalidArgumentError, InvalidDimensionError
from core.fock_core import FockConfig, basis_index
from core.hamiltonians import (
    SubspaceKind,
    SubspaceSpec,
    SystemParams,
    build_effective,
    build_free,
    build_interaction,
    build_linearized,
    build_rotating,
    dark_state,
    double_exciton_propagator,
    effective_block,
    kerr_detuning,
    kerr_params,
    linearization_amplitude,
    restrict,
    restrict_two_mode,
    single_excitation_indices,
    spin_chain,
    spin_sx_block,
    subspace,
)

st_gt = st.floats(-0.2, 0.2, allow_nan=False).filter(lambda x: abs(x) > 1e-4)


def test_from_detunings_roundtrip():
    p = SystemParams.from_detunings(0.98, 1.7, 0.1, 0.05, M=2.0)
    assert p.delta_a == pytest.approx(0.98)
    assert p.delta_m == pytest.approx(1.7)
    assert p.g == 0.1
    assert p.G == pytest.approx(0.05)
    assert p.g_mb == pytest.approx(0.025)


def test_params_validation():
    with pytest.raises(InvalidArgumentError):
        SystemParams(omega_b=0.0)
    with pytest.raises(InvalidArgumentError):
        SystemParams.from_detunings(1.0, 1.7, 0.1, 0.1, M=0.0)


def test_regime(params):
    assert params.is_perturbative()
    assert not params.with_couplings(g=0.2).is_perturbative()
    assert not SystemParams.from_detunings(1.0, 1.1, 0.1, 0.1).is_perturbative()


def test_subspace_bases():
    doppel = subspace(2)
    assert doppel.kind is SubspaceKind.DOUBLE
    assert doppel.basis == ((2, 0, 0), (1, 0, 1), (0, 0, 2))
    assert subspace(1, l=1).basis == ((1, 1, 0), (0, 1, 1))
    assert subspace(4).kind is SubspaceKind.N_EXCITON
    with pytest.raises(InvalidArgumentError):
        SubspaceSpec(SubspaceKind.SINGLE, ((1, 0, 0), (0, 1, 1)))
    with pytest.raises(InvalidArgumentError):
        subspace(0)


def test_rotating_frame_is_hermitian_with_drive(config):
    p = SystemParams.from_detunings(1.0, 1.7, 0.1, 0.1, Omega_d=0.3)
    h = build_rotating(p, config)
    assert h.hermitian_hint
    assert np.max(np.abs(h.entries - h.entries.conj().T)) == 0.0


def test_linearized_is_free_plus_interaction(params, config):
    h = build_linearized(params, config).entries
    assert_allclose(h, build_free(params, config).entries + build_interaction(params, config).entries)
    i = basis_index((1, 2, 3), config)
    assert h[i, i].real == pytest.approx(params.delta_a + 2 * params.delta_m + 3 * params.omega_b)


def test_single_exciton_block_has_no_direct_coupling(params, config):
    block = restrict(build_linearized(params, config), subspace(1), config).entries
    assert_allclose(np.diag(block).real, [params.delta_a, params.omega_b])
    assert block[0, 1] == 0.0


def test_build_requires_three_modes(params):
    with pytest.raises(InvalidDimensionError):
        build_linearized(params, FockConfig((3, 3)))
    with pytest.raises(InvalidDimensionError):
        build_effective(0.1, FockConfig((3, 3, 3)))


@given(st.integers(1, 6), st_gt)
def test_effective_block_is_spin_rotation(N, gt):
    assert_allclose(effective_block(N, gt).entries, spin_sx_block(N, gt), atol=1e-12)


@given(st.integers(1, 4), st_gt)
def test_effective_block_restricts_two_mode_hamiltonian(N, gt):
    config_ab = FockConfig((N + 1, N + 1))
    block = restrict_two_mode(build_effective(gt, config_ab), subspace(N), config_ab)
    assert_allclose(block.entries, effective_block(N, gt).entries, atol=1e-12)


@pytest.mark.parametrize("N", range(1, 7))
def test_spin_chain_single_excitation_sector(N):
    gt = 0.03
    kette = spin_chain(N, gt).entries
    idx = single_excitation_indices(N)
    assert_allclose(kette[np.ix_(idx, idx)], effective_block(N, gt).entries, atol=1e-12)
    assert np.max(np.abs(kette - kette.T)) == 0.0


def test_spin_chain_capacity():
    with pytest.raises(CapacityError):
        spin_chain(12, 0.1)
    with pytest.raises(CapacityError):
        spin_chain(3, 0.1, cap=8)


@given(st_gt, st.floats(0.0, 50.0))
def test_double_exciton_propagator_closed_form(gt, t):
    u = linalg.expm(-1j * t * effective_block(2, gt).entries)
    assert_allclose(double_exciton_propagator(gt, t), u, atol=1e-10)


def test_dark_state_is_decoupled():
    h = effective_block(2, 0.07).entries
    assert_allclose(h @ dark_state().amplitudes, 0.0, atol=1e-15)


def test_kerr_shift(params):
    p = SystemParams.from_detunings(1.0, 1.7, 0.1, 0.1, K=1e-3)
    assert kerr_detuning(p, 50.0) == pytest.approx(1.8)
    assert kerr_params(p, 50.0).delta_m == pytest.approx(1.8)
    assert kerr_params(params, 50.0).delta_m == pytest.approx(params.delta_m)
    with pytest.raises(InvalidArgumentError):
        kerr_params(p, -1.0)


def test_linearization_amplitude():
    assert linearization_amplitude(4.0) == 2.0
    assert linearization_amplitude(0.0) == 0.0
    with pytest.raises(InvalidArgumentError):
        linearization_amplitude(-1.0)


def test_spin_chain_propagates_end_to_end():
    # Perfekter Transfer nach t = π/(2G̃) im Einzelanregungssektor
    N, gt = 4, 0.05
    idx = single_excitation_indices(N)
    u = linalg.expm(-1j * (math.pi / (2 * gt)) * spin_chain(N, gt).entries)
    assert abs(u[idx[-1], idx[0]]) == pytest.approx(1.0, abs=1e-10)
