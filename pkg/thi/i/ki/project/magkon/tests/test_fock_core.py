import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from core.errors import ContractViolationError, InvalidDimensionError, ModeIndexError
from core.fock_core import (
    MAGNON,
    PHONON,
    FockConfig,
    OperatorMatrix,
    StateVector,
    annihilation,
    basis_index,
    basis_state,
    commutator,
    embed,
    hermitian_eigs,
    mode_operators,
    number_operator,
)

st_dim = st.integers(2, 8)


def test_annihilation_two_level():
    assert_array_equal(annihilation(2).entries, [[0, 1], [0, 0]])


def test_annihilation_rejects_dim_one():
    with pytest.raises(InvalidDimensionError):
        annihilation(1)


@given(st_dim)
def test_number_operator_spectrum(dim):
    werte, _ = hermitian_eigs(number_operator(dim))
    assert_allclose(werte, np.arange(dim), atol=1e-12)


@given(st_dim)
def test_truncated_commutator(dim):
    a = annihilation(dim)
    erwartet = np.ones(dim)
    erwartet[-1] = -(dim - 1)
    assert_allclose(commutator(a, a.dagger()), np.diag(erwartet), atol=1e-12)


def test_embed_matches_kron():
    config = FockConfig((2, 3, 4))
    a = annihilation(3)
    erwartet = np.kron(np.kron(np.eye(2), a.entries), np.eye(4))
    assert_array_equal(embed(a, MAGNON, config).entries, erwartet)


def test_embedded_modes_commute(config):
    a, m, b = mode_operators(config)
    assert np.max(np.abs(commutator(a, m))) == 0.0
    assert np.max(np.abs(commutator(m.dagger(), b))) == 0.0


def test_embed_errors(config):
    with pytest.raises(ModeIndexError):
        embed(annihilation(4), 3, config)
    with pytest.raises(InvalidDimensionError):
        embed(annihilation(3), PHONON, config)


@given(st.integers(2, 6), st.integers(0, 2**16))
def test_hermitian_eigs_reconstructs(dim, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    op = OperatorMatrix(0.5 * (x + x.conj().T), hermitian_hint=True)
    werte, vektoren = hermitian_eigs(op)
    assert np.all(np.diff(werte) >= 0.0)
    assert_allclose(vektoren @ np.diag(werte) @ vektoren.conj().T, op.entries, atol=1e-10)
    assert_allclose(vektoren.conj().T @ vektoren, np.eye(dim), atol=1e-10)


def test_hermitian_eigs_requires_hint():
    with pytest.raises(ContractViolationError):
        hermitian_eigs(OperatorMatrix(np.eye(2)))


def test_operator_contracts():
    with pytest.raises(ContractViolationError):
        OperatorMatrix(np.array([[0, 1], [0, 0]]), hermitian_hint=True)
    with pytest.raises(InvalidDimensionError):
        OperatorMatrix(np.zeros((2, 3)))


def test_operator_entries_are_read_only():
    op = annihilation(3)
    with pytest.raises(ValueError):
        op.entries[0, 1] = 5.0


def test_basis_index_row_major(config):
    assert basis_index((0, 0, 1), config) == 1
    assert basis_index((1, 0, 0), config) == 16
    with pytest.raises(InvalidDimensionError):
        basis_index((4, 0, 0), config)


def test_basis_state_is_unit_vector(config):
    psi = basis_state((1, 2, 3), config)
    assert psi.amplitudes[basis_index((1, 2, 3), config)] == 1.0
    assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0)


def test_state_vector_norm():
    with pytest.raises(ContractViolationError):
        StateVector(np.array([1.0, 1.0]))
    with pytest.raises(ContractViolationError):
        StateVector.normalized(np.zeros(3))
    assert StateVector.normalized([3.0, 4.0]).amplitudes[1] == pytest.approx(0.8)


def test_fock_config_validation():
    with pytest.raises(InvalidDimensionError):
        FockConfig((4, 1, 4))
    assert FockConfig((2, 3, 4)).total_dim == 24
