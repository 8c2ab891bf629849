import logging
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy import linalg

from core.errors import BracketError, DegenerateDetuningError, InvalidArgumentError, RegimeError
from core.fock_core import FockConfig
from core.hamiltonians import SystemParams, effective_block, subspace
from core.perturbation import (
    CrossingResult,
    crossing_shift,
    effective_coupling,
    energy_shifts,
    gtilde,
    scan_crossing,
    transfer_amplitude,
    waehle_zweige,
)

st_label = st.integers(0, 4)

STANDARD = SystemParams.from_detunings(1.0, 1.7, 0.1, 0.1)


def _fixpunkt(params: SystemParams, schritte: int = 40) -> float:
    """δ = ε2 − ε1 mit Δ_a = ω_b + δ im Photon-Magnon-Nenner."""
    delta = 0.0
    for _ in range(schritte):
        e1, e2 = energy_shifts(params, 1, 0, 0, delta_a=params.omega_b + delta)
        delta = e2 - e1
    return delta


def test_reference_values(params):
    assert crossing_shift(params) == pytest.approx(-0.01 / 2.7)
    assert gtilde(params) == pytest.approx(0.01 / -0.7)


@given(st.integers(1, 4), st_label, st_label)
def test_shift_difference_is_label_independent(n, l, k):
    e1, e2 = energy_shifts(STANDARD, n, l, k, delta_a=STANDARD.omega_b)
    assert e2 - e1 == pytest.approx(crossing_shift(STANDARD), abs=1e-14)


def test_consistent_shift_matches_fixed_point(params):
    exakt = _fixpunkt(params)
    naiv = crossing_shift(params)
    konsistent = crossing_shift(params, konsistent=True)
    b = params.g**2 / (params.omega_b - params.delta_m) ** 2
    assert konsistent == pytest.approx(naiv / (1.0 - b))
    assert abs(konsistent - exakt) < 1e-6
    assert abs(konsistent - exakt) < abs(naiv - exakt)


@given(st.integers(1, 4), st_label, st_label)
def test_two_path_coupling_at_resonance(n, k, l):
    standard = effective_coupling(STANDARD, n, k, l)
    zwei = effective_coupling(STANDARD, n, k, l, zwei_pfade=True, delta_a=STANDARD.omega_b)
    assert standard == pytest.approx(math.sqrt(n * (k + 1)) * gtilde(STANDARD))
    assert zwei == pytest.approx(standard, rel=1e-12)


def test_effective_coupling_labels(params):
    with pytest.raises(InvalidArgumentError):
        effective_coupling(params, 0, 0)


def test_degenerate_detuning():
    p = SystemParams.from_detunings(1.0, 1.0, 0.1, 0.1)
    with pytest.raises(DegenerateDetuningError):
        gtilde(p)
    with pytest.raises(RegimeError):
        gtilde(p, strict=True)


def test_regime_warning(params, caplog):
    stark = params.with_couplings(g=0.2)
    with caplog.at_level(logging.WARNING, logger="core.perturbation"):
        crossing_shift(stark)
    assert "störungstheoretischen" in caplog.text
    with pytest.raises(RegimeError):
        crossing_shift(stark, strict=True)


@pytest.mark.parametrize("N", range(1, 6))
def test_transfer_amplitude_matches_block_propagator(N):
    gt, t = 0.05, 13.0
    u = linalg.expm(-1j * t * effective_block(N, gt).entries)
    assert transfer_amplitude(N, gt, t) == pytest.approx(u[N, 0], abs=1e-12)


def test_transfer_amplitude_site_exponent():
    assert transfer_amplitude(3, 1.0, math.pi / 4, plaetze=True) == pytest.approx(-0.5)
    werte = transfer_amplitude(1, 0.02, np.array([0.0, math.pi / 0.04]))
    assert_allclose(werte, [0.0, -1j], atol=1e-15)


def test_crossing_single_exciton(schwach, config):
    ergebnis = scan_crossing(schwach, config=config)
    assert ergebnis.gtilde_num == pytest.approx(abs(gtilde(schwach)), rel=0.05)
    assert ergebnis.delta_num == pytest.approx(crossing_shift(schwach), rel=0.10)
    assert len(ergebnis.branch_indices) == 2


def test_crossing_default_couplings(params, config):
    ergebnis = scan_crossing(params, config=config)
    assert ergebnis.gtilde_num == pytest.approx(abs(gtilde(params)), rel=0.05)


def test_crossing_double_exciton(schwach, config):
    ergebnis = scan_crossing(schwach, spec=subspace(2), config=config)
    gt = abs(gtilde(schwach))
    assert ergebnis.gtilde_num == pytest.approx(gt, rel=0.10)
    assert ergebnis.halbe_spreizung == pytest.approx(2 * gt, rel=0.10)
    assert len(ergebnis.branch_indices) == 3


def test_crossing_converged_in_truncation(params):
    vier = scan_crossing(params, config=FockConfig((4, 4, 4)))
    fuenf = scan_crossing(params, config=FockConfig((5, 5, 5)))
    assert fuenf.gtilde_num == pytest.approx(vier.gtilde_num, rel=1e-2)
    assert fuenf.delta_num == pytest.approx(vier.delta_num, abs=1e-4)


@pytest.mark.parametrize("kopplung, untergrenze, obergrenze", [(0.15, 0.02, 0.30), (0.01, 0.0, 0.005)])
def test_crossing_deviation_grows_with_coupling(config, kopplung, untergrenze, obergrenze):
    p = SystemParams.from_detunings(1.0, 1.7, kopplung, kopplung)
    analytisch = abs(gtilde(p))
    abweichung = abs(scan_crossing(p, config=config).gtilde_num - analytisch) / analytisch
    assert untergrenze <= abweichung <= obergrenze


def test_branch_tie_prefers_previous_energy():
    gewichte = np.array([0.9, 0.6, 0.6 + 1e-12, 0.1])
    energien = np.array([0.0, 1.0, 2.0, 3.0])
    assert list(waehle_zweige(gewichte, energien, 2)) == [0, 2]
    assert list(waehle_zweige(gewichte, energien, 2, np.array([0.0, 1.1]))) == [0, 1]
    assert list(waehle_zweige(gewichte, energien, 2, np.array([0.0, 1.9]))) == [0, 2]
    assert list(waehle_zweige(np.array([0.9, 0.2, 0.7]), energien[:3], 2, np.array([1.0]))) == [0, 2]


def test_crossing_bracket(params):
    with pytest.raises(BracketError):
        scan_crossing(params, np.linspace(1.01, 1.1, 31), config=FockConfig((3, 3, 3)))


def test_crossing_result_contract():
    with pytest.raises(InvalidArgumentError):
        CrossingResult(0.0, -1e-3, (0, 1))
    with pytest.raises(InvalidArgumentError):
        CrossingResult(0.6, 1e-3, (0, 1))
