from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Final

import numpy as np
from numpy.typing import NDArray

from util.mathematik import MathFunctions

from .errors import CapacityError, InvalidArgumentError, InvalidDimensionError
from .fock_core import (
    MAGNON,
    PHONON,
    PHOTON,
    FockConfig,
    OperatorMatrix,
    StateVector,
    annihilation,
    basis_index,
    embed,
)

"""
Hamiltonoperatoren der magnonengestützten Photon-Phonon-Konversion.

Inhalt
- Typen: SystemParams, SubspaceKind, SubspaceSpec
- Vollmodell: build_rotating (rotierendes Bezugssystem), build_linearized (H0 + V)
- Effektives Modell: build_effective, effective_block, spin_chain,
  double_exciton_propagator, dark_state
- Kerr-Effekt: kerr_detuning, kerr_params, linearization_amplitude
- Unterräume: subspace, restrict

Konventionen
- Einheiten ω_b = 1; Modenreihenfolge (a, m, b) bzw. (a, b).
- Unterraumbasis absteigend in der Photonenzahl {|N00⟩, …, |00N⟩}.
- Lineare Verschiebungsterme entfallen im linearisierten Modell; M ist
  Eingabegröße, keine Selbstkonsistenz aus Ω_d.
"""

logger = logging.getLogger(__name__)

DEFAULT_OMEGA_D: Final[float] = 100.0      # Treiberfrequenz [ω_b], nur Referenz des Bezugssystems
REGIME_MAX_KOPPLUNG: Final[float] = 0.15   # g, G ≤ 0.15 ω_b
REGIME_ABSTAND_FAKTOR: Final[float] = 3.0  # |ω_b − Δ_m| ≥ 3·max(g, G)
SPIN_CHAIN_CAP: Final[int] = 2 ** 12


# ====================== PARAMETER ======================

@dataclass(slots=True, frozen=True)
class SystemParams:
    """
    Physikalische Parameter, alle Frequenzen in Einheiten von ω_b.

    Felder
    - omega_a, omega_m, omega_b, omega_d [ω_b] : Kavität, Kittel-Mode, Phonon, Treiber.
    - g_ma [ω_b]  : Photon-Magnon-Kopplung.
    - g_mb [ω_b]  : nackte magnomechanische Kopplung.
    - Omega_d [ω_b]: Treiberamplitude (nur rotierendes Bezugssystem).
    - M [1]       : Linearisierungsamplitude |⟨m⟩| ≥ 0.
    - K [ω_b]     : Kerr-Koeffizient.

    Abgeleitet
    - delta_a = omega_a − omega_d, delta_m = omega_m − omega_d
    - g = g_ma, G = M·g_mb
    """

    omega_a: float = DEFAULT_OMEGA_D + 1.0
    omega_m: float = DEFAULT_OMEGA_D + 1.7
    omega_b: float = 1.0
    omega_d: float = DEFAULT_OMEGA_D
    g_ma: float = 0.1
    g_mb: float = 0.1
    Omega_d: float = 0.0
    M: float = 1.0
    K: float = 0.0

    def __post_init__(self) -> None:
        for name in ("omega_a", "omega_m", "omega_b", "omega_d"):
            wert = getattr(self, name)
            if not math.isfinite(wert) or wert <= 0.0:
                raise InvalidArgumentError(f"{name} muss endlich und > 0 sein, erhalten: {wert}")
        if not math.isfinite(self.M) or self.M < 0.0:
            raise InvalidArgumentError(f"M muss ≥ 0 sein, erhalten: {self.M}")
        for name in ("g_ma", "g_mb", "Omega_d", "K"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"{name} muss endlich sein")

    @classmethod
    def from_detunings(
            cls,
            delta_a: float,
            delta_m: float,
            g: float,
            G: float,
            *,
            omega_b: float = 1.0,
            omega_d: float = DEFAULT_OMEGA_D,
            M: float = 1.0,
            K: float = 0.0,
            Omega_d: float = 0.0,
    ) -> SystemParams:
        """Parametersatz aus Verstimmungen und effektiven Kopplungen (G = M·g_mb)."""
        if M == 0.0 and G != 0.0:
            raise InvalidArgumentError("G ≠ 0 verlangt M > 0")
        g_mb: float = G / M if M > 0.0 else 0.0
        return cls(
            omega_a=delta_a + omega_d,
            omega_m=delta_m + omega_d,
            omega_b=omega_b,
            omega_d=omega_d,
            g_ma=g,
            g_mb=g_mb,
            Omega_d=Omega_d,
            M=M,
            K=K,
        )

    @property
    def delta_a(self) -> float:
        return self.omega_a - self.omega_d

    @property
    def delta_m(self) -> float:
        return self.omega_m - self.omega_d

    @property
    def g(self) -> float:
        return self.g_ma

    @property
    def G(self) -> float:
        return self.M * self.g_mb

    def with_delta_a(self, delta_a: float) -> SystemParams:
        return replace(self, omega_a=delta_a + self.omega_d)

    def with_couplings(self, g: float | None = None, G: float | None = None) -> SystemParams:
        neu = self
        if g is not None:
            neu = replace(neu, g_ma=g)
        if G is not None:
            if self.M == 0.0:
                raise InvalidArgumentError("G ≠ 0 verlangt M > 0")
            neu = replace(neu, g_mb=G / self.M)
        return neu

    def is_perturbative(self) -> bool:
        """g, G ≤ 0.15·ω_b und |ω_b − Δ_m| ≥ 3·max(g, G)."""
        kopplung: float = max(abs(self.g), abs(self.G))
        return (
            kopplung <= REGIME_MAX_KOPPLUNG * self.omega_b
            and abs(self.omega_b - self.delta_m) >= REGIME_ABSTAND_FAKTOR * kopplung
        )


class SubspaceKind(Enum):
    SINGLE = "single-exciton"
    DOUBLE = "double-exciton"
    N_EXCITON = "n-exciton"


@dataclass(slots=True, frozen=True)
class SubspaceSpec:
    """
    Konversionsunterraum mit geordneter Fock-Basis (n, l, k).

    Alle Zustände teilen n + k und das Magnonlabel l.
    """

    kind: SubspaceKind
    basis: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        basis = tuple(tuple(int(x) for x in z) for z in self.basis)
        if len(basis) < 2 or any(len(z) != 3 for z in basis):
            raise InvalidArgumentError("Unterraum braucht ≥ 2 Labels der Form (n, l, k)")
        if any(min(z) < 0 for z in basis):
            raise InvalidArgumentError(f"negative Fock-Labels: {basis}")
        if len({z[0] + z[2] for z in basis}) != 1 or len({z[1] for z in basis}) != 1:
            raise InvalidArgumentError(f"Labels teilen nicht dieselbe Anregungszahl: {basis}")
        object.__setattr__(self, "basis", basis)

    @property
    def excitations(self) -> int:
        n, _, k = self.basis[0]
        return n + k


def subspace(N: int, l: int = 0) -> SubspaceSpec:
    """N-Exzitonen-Unterraum {|N l 0⟩, |N−1 l 1⟩, …, |0 l N⟩}."""
    if N < 1:
        raise InvalidArgumentError(f"N muss ≥ 1 sein, erhalten: {N}")
    kind = {1: SubspaceKind.SINGLE, 2: SubspaceKind.DOUBLE}.get(N, SubspaceKind.N_EXCITON)
    return SubspaceSpec(kind, tuple((N - i, l, i) for i in range(N + 1)))


# ====================== VOLLMODELL ======================

def _drei_moden(config: FockConfig) -> None:
    if config.modes != 3:
        raise InvalidDimensionError(f"drei Moden (a, m, b) erwartet, erhalten: {config.dims}")


def build_rotating(params: SystemParams, config: FockConfig) -> OperatorMatrix:
    """
    H' = Δ_a a†a + Δ_m m†m + ω_b b†b + g_mb m†m(b + b†)
         + g_ma(a m† + a† m) + iΩ_d(m† − m).
    """
    _drei_moden(config)
    a = embed(annihilation(config.dims[PHOTON]), PHOTON, config).entries
    m = embed(annihilation(config.dims[MAGNON]), MAGNON, config).entries
    b = embed(annihilation(config.dims[PHONON]), PHONON, config).entries
    ad, md, bd = a.conj().T, m.conj().T, b.conj().T

    h = (
        params.delta_a * (ad @ a)
        + params.delta_m * (md @ m)
        + params.omega_b * (bd @ b)
        + params.g_mb * (md @ m @ (b + bd))
        + params.g_ma * (a @ md + ad @ m)
        + 1j * params.Omega_d * (md - m)
    )
    return OperatorMatrix(h, hermitian_hint=True)


def build_free(params: SystemParams, config: FockConfig) -> OperatorMatrix:
    """H0 = Δ_a a†a + Δ_m m†m + ω_b b†b."""
    _drei_moden(config)
    n = [np.arange(d, dtype=np.float64) for d in config.dims]
    diagonale = (
        params.delta_a * n[PHOTON][:, None, None]
        + params.delta_m * n[MAGNON][None, :, None]
        + params.omega_b * n[PHONON][None, None, :]
    )
    return OperatorMatrix(np.diag(diagonale.ravel()), hermitian_hint=True)


def build_interaction(params: SystemParams, config: FockConfig) -> OperatorMatrix:
    """V = G(m† + m)(b + b†) + g(a m† + a† m)."""
    _drei_moden(config)
    a = embed(annihilation(config.dims[PHOTON]), PHOTON, config).entries
    m = embed(annihilation(config.dims[MAGNON]), MAGNON, config).entries
    b = embed(annihilation(config.dims[PHONON]), PHONON, config).entries
    v = params.G * ((m + m.conj().T) @ (b + b.conj().T)) + params.g * (a @ m.conj().T + a.conj().T @ m)
    return OperatorMatrix(v, hermitian_hint=True)


def build_linearized(params: SystemParams, config: FockConfig) -> OperatorMatrix:
    """H = H0 + V des linearisierten Modells."""
    return (build_free(params, config) + build_interaction(params, config)).as_hermitian()


# ====================== EFFEKTIVES MODELL ======================

def build_effective(gtilde: float, config_ab: FockConfig) -> OperatorMatrix:
    """H_eff = G̃(a b† + b a†) auf dem Zwei-Moden-Raum (Photon, Phonon)."""
    if config_ab.modes != 2:
        raise InvalidDimensionError(f"zwei Moden (a, b) erwartet, erhalten: {config_ab.dims}")
    a = embed(annihilation(config_ab.dims[0]), 0, config_ab).entries
    b = embed(annihilation(config_ab.dims[1]), 1, config_ab).entries
    return OperatorMatrix(gtilde * (a @ b.conj().T + b @ a.conj().T), hermitian_hint=True)


def block_couplings(N: int) -> NDArray[np.float64]:
    """
    Nebendiagonale L_n = √(n(N + 1 − n)), n = 1..N, des N-Exzitonen-Blocks.

    Das ist √(n(N' − n)) mit der Platzzahl N' = N + 1 der äquivalenten Kette.
    """
    if N < 1:
        raise InvalidArgumentError(f"N muss ≥ 1 sein, erhalten: {N}")
    n = np.arange(1, N + 1, dtype=np.float64)
    return np.sqrt(n * (N + 1 - n))


def effective_block(N: int, gtilde: float) -> OperatorMatrix:
    """
    (N+1)×(N+1)-Tridiagonalblock von H_eff im Unterraum {|N00⟩, …, |00N⟩}.

    Identisch mit 2G̃·S_x für Spin S = N/2.
    """
    neben = gtilde * block_couplings(N)
    return OperatorMatrix(np.diag(neben, 1) + np.diag(neben, -1), hermitian_hint=True)


def spin_chain(N: int, gtilde: float, cap: int = SPIN_CHAIN_CAP) -> OperatorMatrix:
    """
    Offene XY-Kette mit N + 1 Plätzen:
    Σ_n (G̃ L_n / 2)(σ^x_n σ^x_{n+1} + σ^y_n σ^y_{n+1}).

    Platz 0 ist das höchstwertige Bit; |1⟩ = angeregt (Spin auf).
    """
    if N < 1:
        raise InvalidArgumentError(f"N muss ≥ 1 sein, erhalten: {N}")
    plaetze: int = N + 1
    dim: int = 2 ** plaetze
    if dim > cap:
        raise CapacityError(f"2^{plaetze} = {dim} übersteigt die Obergrenze {cap}")

    # σxσx + σyσy = 2(σ+σ− + σ−σ+), reell
    sigma_plus = np.array([[0.0, 0.0], [1.0, 0.0]])
    sigma_minus = sigma_plus.T
    h = np.zeros((dim, dim), dtype=np.float64)
    for n, l_n in enumerate(block_couplings(N)):
        links = np.eye(2 ** n)
        rechts = np.eye(2 ** (plaetze - n - 2))
        hop = np.kron(sigma_plus, sigma_minus) + np.kron(sigma_minus, sigma_plus)
        h += gtilde * l_n * np.kron(np.kron(links, hop), rechts)
    return OperatorMatrix(h, hermitian_hint=True)


def single_excitation_indices(N: int) -> NDArray[np.int64]:
    """Basisindizes der Zustände mit genau einem angeregten Platz, nach Platz geordnet."""
    plaetze = N + 1
    return np.array([2 ** (plaetze - 1 - i) for i in range(plaetze)], dtype=np.int64)


def double_exciton_propagator(gtilde: float, t: float) -> NDArray[np.complex128]:
    """
    Geschlossene Form von exp(−i·effective_block(2, G̃)·t) in {|200⟩, |101⟩, |002⟩}
    mit c = cos 2G̃t, s = sin 2G̃t.
    """
    c = math.cos(2.0 * gtilde * t)
    s = math.sin(2.0 * gtilde * t)
    r = -1j * s * math.sqrt(2.0)
    return 0.5 * np.array(
        [[c + 1.0, r, c - 1.0],
         [r, 2.0 * c, r],
         [c - 1.0, r, c + 1.0]],
        dtype=np.complex128,
    )


def dark_state() -> StateVector:
    """(|002⟩ − |200⟩)/√2 in der Basis {|200⟩, |101⟩, |002⟩}; Eigenwert 0."""
    return StateVector(np.array([-1.0, 0.0, 1.0], dtype=np.complex128) / math.sqrt(2.0))


# ====================== KERR-EFFEKT ======================

def kerr_detuning(params: SystemParams, magnon_occupation: float) -> float:
    """Δ̃_m = Δ_m + 2K⟨m†m⟩."""
    return params.delta_m + 2.0 * params.K * magnon_occupation


def kerr_params(params: SystemParams, magnon_occupation: float) -> SystemParams:
    """Parametersatz mit Kerr-verschobener Magnonverstimmung für alle Folgeformeln."""
    if magnon_occupation < 0.0:
        raise InvalidArgumentError(f"⟨m†m⟩ muss ≥ 0 sein, erhalten: {magnon_occupation}")
    delta_m = kerr_detuning(params, magnon_occupation)
    logger.debug("Kerr-Verstimmung: Δ_m = %.6g → %.6g", params.delta_m, delta_m)
    return replace(params, omega_m=delta_m + params.omega_d)


def linearization_amplitude(magnon_occupation: float) -> float:
    """M = √⟨m†m⟩."""
    if magnon_occupation < 0.0:
        raise InvalidArgumentError(f"⟨m†m⟩ muss ≥ 0 sein, erhalten: {magnon_occupation}")
    return math.sqrt(magnon_occupation)


# ====================== UNTERRÄUME ======================

def restrict(op: OperatorMatrix, spec: SubspaceSpec, config: FockConfig) -> OperatorMatrix:
    """Matrix von `op` in der Unterraumbasis (Zeilen/Spalten in spec.basis-Reihenfolge)."""
    indizes = [basis_index(labels, config) for labels in spec.basis]
    return OperatorMatrix(op.entries[np.ix_(indizes, indizes)], hermitian_hint=op.hermitian_hint)


def restrict_two_mode(op: OperatorMatrix, spec: SubspaceSpec, config_ab: FockConfig) -> OperatorMatrix:
    """Wie `restrict`, für Zwei-Moden-Operatoren (Magnonlabel entfällt)."""
    indizes = [basis_index((n, k), config_ab) for n, _, k in spec.basis]
    return OperatorMatrix(op.entries[np.ix_(indizes, indizes)], hermitian_hint=op.hermitian_hint)


def spin_sx_block(N: int, gtilde: float) -> NDArray[np.float64]:
    """2G̃·S_x mit S = N/2 als Vergleichsmatrix zu effective_block."""
    return 2.0 * gtilde * MathFunctions.spin_x(N + 1)


__all__: Final[tuple[str, ...]] = (
    "SystemParams",
    "SubspaceKind",
    "SubspaceSpec",
    "subspace",
    "build_rotating",
    "build_free",
    "build_interaction",
    "build_linearized",
    "build_effective",
    "block_couplings",
    "effective_block",
    "spin_chain",
    "single_excitation_indices",
    "double_exciton_propagator",
    "dark_state",
    "kerr_detuning",
    "kerr_params",
    "linearization_amplitude",
    "restrict",
    "restrict_two_mode",
    "spin_sx_block",
)
