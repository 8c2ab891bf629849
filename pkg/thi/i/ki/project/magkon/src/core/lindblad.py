from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Final

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from dtypes import DriftCheck
from util.evaluation import TypeUtils

from .errors import ContractViolationError, InvalidArgumentError, InvalidDimensionError, StepSizeError
from .fock_core import MAGNON, PHONON, PHOTON, FockConfig, OperatorMatrix, StateVector, annihilation, embed

"""
Markovsche Propagation (Lindblad) für Voll- und effektives Modell.

Inhalt
- Typen: DensityMatrix, DecayRates, Richtung, MasterTrajectory
- Operationen: dissipator, evolve_master, state_fidelity
- Hilfen: trace_distance, unitary_reference, period_peaks,
  collapse_full, collapse_effective

Integrator
- Klassisches RK4 mit fester Schrittweite (Standard dt = 1e-2) auf
  ρ̇ = −i(H_nh ρ − ρ H_nh†) + Σ κ_i O_i ρ O_i†, H_nh = H − (i/2) Σ κ_i O_i†O_i.
- Spurdrift > 1e-6 → StepSizeError.
"""

logger = logging.getLogger(__name__)

HERMITE_EXP10: Final[int] = 10
SPUR_EXP10: Final[int] = 8
POSITIV_EXP10: Final[int] = 8
DEFAULT_DT: Final[float] = 1e-2
DEFAULT_SPUR_TOLERANZ: Final[float] = 1e-6
PHONON_ANTEIL: Final[float] = 1e-2       # γ_b = 1e-2·κ


# ====================== TYPEN ======================

@dataclass(slots=True, frozen=True)
class DensityMatrix:
    """
    Dichtematrix; hermitesch (1e-10), Spur 1 (1e-8), kleinster Eigenwert ≥ −1e-8.
    """

    entries: NDArray[np.complex128]

    def __post_init__(self) -> None:
        try:
            rho = TypeUtils.als_komplexmatrix(self.entries)
        except ValueError as exc:
            raise InvalidDimensionError(str(exc)) from exc
        if not TypeUtils.ist_hermitesch(rho, HERMITE_EXP10):
            raise ContractViolationError(f"ρ nicht hermitesch: {TypeUtils.hermitizitaet_defekt(rho):.3e}")
        spur = complex(np.trace(rho))
        if abs(spur - 1.0) > float(TypeUtils.eps(SPUR_EXP10)):
            raise ContractViolationError(f"Spur ρ = {spur:.12f} ≠ 1")
        minimum = float(linalg.eigvalsh(rho)[0])
        if minimum < -float(TypeUtils.eps(POSITIV_EXP10)):
            raise ContractViolationError(f"ρ nicht positiv: kleinster Eigenwert {minimum:.3e}")
        rho.flags.writeable = False
        object.__setattr__(self, "entries", rho)

    @classmethod
    def pure(cls, state: StateVector) -> DensityMatrix:
        return cls(state.projector())

    @classmethod
    def maximally_mixed(cls, dim: int) -> DensityMatrix:
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])


@dataclass(slots=True, frozen=True)
class DecayRates:
    kappa_a: float = 0.0       # Kavität [ω_b]
    kappa_m: float = 0.0       # Magnon [ω_b]
    gamma_b: float = 0.0       # Phonon [ω_b]

    def __post_init__(self) -> None:
        for name in ("kappa_a", "kappa_m", "gamma_b"):
            wert = getattr(self, name)
            if not (math.isfinite(wert) and wert >= 0.0):
                raise InvalidArgumentError(f"{name} muss ≥ 0 sein, erhalten: {wert}")

    @classmethod
    def uniform(cls, kappa: float, phonon_anteil: float = PHONON_ANTEIL) -> DecayRates:
        """κ_a = κ_m = κ, γ_b = phonon_anteil·κ."""
        return cls(kappa, kappa, phonon_anteil * kappa)


class Richtung(Enum):
    """Konversionsrichtung im Einzel-Exzitonen-Unterraum."""

    PHOTON_ZU_PHONON = "photon-phonon"
    PHONON_ZU_PHOTON = "phonon-photon"

    def labels(self, moden: int = 3) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(Start, Ziel) als Fock-Labels für drei (a, m, b) oder zwei (a, b) Moden."""
        photon, phonon = ((1, 0, 0), (0, 0, 1)) if moden == 3 else ((1, 0), (0, 1))
        if self is Richtung.PHOTON_ZU_PHONON:
            return photon, phonon
        return phonon, photon


@dataclass(slots=True, frozen=True)
class MasterTrajectory:
    t_grid: NDArray[np.float64]
    states: tuple[DensityMatrix, ...]
    max_trace_drift: float

    def fidelities(self, target: StateVector) -> NDArray[np.float64]:
        return np.array([state_fidelity(rho, target) for rho in self.states])


# ====================== OPERATIONEN ======================

def _gleiche_dimension(*dims: int) -> None:
    if len(set(dims)) != 1:
        raise InvalidDimensionError(f"Dimensionen passen nicht: {dims}")


def dissipator(op: OperatorMatrix, rho: DensityMatrix) -> NDArray[np.complex128]:
    """L[O]ρ = (2OρO† − O†Oρ − ρO†O)/2."""
    _gleiche_dimension(op.dim, rho.dim)
    o, r = op.entries, rho.entries
    od = o.conj().T
    odo = od @ o
    return o @ r @ od - 0.5 * (odo @ r + r @ odo)


def state_fidelity(rho: DensityMatrix, target: StateVector) -> float:
    """F = √⟨φ|ρ|φ⟩ ∈ [0, 1]."""
    _gleiche_dimension(rho.dim, target.dim)
    phi = target.amplitudes
    wert = float(np.real(phi.conj() @ rho.entries @ phi))
    return math.sqrt(min(max(wert, 0.0), 1.0))


def trace_distance(rho: DensityMatrix | NDArray, sigma: DensityMatrix | NDArray) -> float:
    """½·Σ|λ_i(ρ − σ)|."""
    a = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.entries if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    _gleiche_dimension(a.shape[0], b.shape[0])
    differenz = a - b
    return 0.5 * float(np.sum(np.abs(linalg.eigvalsh(0.5 * (differenz + differenz.conj().T)))))


def _pruefe_zeitgitter(t_grid: ArrayLike) -> NDArray[np.float64]:
    t = np.asarray(t_grid, dtype=np.float64)
    if t.ndim != 1 or t.size < 1 or np.any(np.diff(t) <= 0.0):
        raise InvalidArgumentError("t_grid muss streng aufsteigend sein")
    return t


def evolve_master(
        H: OperatorMatrix,
        collapse: Sequence[tuple[OperatorMatrix, float]],
        rho0: DensityMatrix,
        t_grid: ArrayLike,
        *,
        dt: float = DEFAULT_DT,
        trace_tol: float = DEFAULT_SPUR_TOLERANZ,
) -> MasterTrajectory:
    """
    RK4-Propagation von ρ̇ = −i[H, ρ] + Σ κ_i L[O_i]ρ, abgetastet auf `t_grid`
    (t_grid[0] ist der Startzeitpunkt von ρ0).

    Jedes Intervall zwischen zwei Abtastpunkten wird in ⌈Δt/dt⌉ gleiche
    Teilschritte zerlegt.

    Fehler:
        InvalidDimensionError, InvalidArgumentError (κ < 0, dt ≤ 0),
        StepSizeError bei Spurdrift > trace_tol.
    """
    if not H.hermitian_hint:
        raise ContractViolationError("H muss als hermitesch markiert sein")
    _gleiche_dimension(H.dim, rho0.dim, *(o.dim for o, _ in collapse))
    if any(kappa < 0.0 for _, kappa in collapse):
        raise InvalidArgumentError("Raten müssen ≥ 0 sein")
    if dt <= 0.0:
        raise InvalidArgumentError(f"dt muss > 0 sein, erhalten: {dt}")
    t = _pruefe_zeitgitter(t_grid)

    aktiv = [(o.entries, kappa) for o, kappa in collapse if kappa > 0.0]
    h_nh = H.entries - 0.5j * sum((kappa * (o.conj().T @ o) for o, kappa in aktiv), np.zeros_like(H.entries))
    h_nh_d = h_nh.conj().T
    sprung = [(math.sqrt(kappa) * o, math.sqrt(kappa) * o.conj().T) for o, kappa in aktiv]

    def rechte_seite(r: NDArray[np.complex128]) -> NDArray[np.complex128]:
        d = -1j * (h_nh @ r - r @ h_nh_d)
        for l_op, l_dag in sprung:
            d += l_op @ r @ l_dag
        return d

    rho = rho0.entries.copy()
    spur = DriftCheck(lambda: float(np.trace(rho).real), trace_tol, referenz=1.0)
    zustaende: list[DensityMatrix] = [rho0]
    schritte_gesamt = 0
    for t_links, t_rechts in zip(t[:-1], t[1:]):
        n = max(1, math.ceil((t_rechts - t_links) / dt - 1e-9))
        h = (t_rechts - t_links) / n
        for _ in range(n):
            k1 = rechte_seite(rho)
            k2 = rechte_seite(rho + 0.5 * h * k1)
            k3 = rechte_seite(rho + 0.5 * h * k2)
            k4 = rechte_seite(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        schritte_gesamt += n
        if not spur():
            raise StepSizeError(
                f"Spurdrift {spur.max_abweichung:.3e} > {trace_tol:.1e} bei t = {t_rechts:.4g}; dt verkleinern"
            )
        rho = 0.5 * (rho + rho.conj().T)
        zustaende.append(DensityMatrix(rho))

    logger.debug(
        "Mastergleichung: dim %d, %d Kollapsoperatoren, %d RK4-Schritte, max. Spurdrift %.2e",
        H.dim, len(aktiv), schritte_gesamt, spur.max_abweichung,
    )
    return MasterTrajectory(t, tuple(zustaende), spur.max_abweichung)


def unitary_reference(H: OperatorMatrix, rho0: DensityMatrix, t_grid: ArrayLike) -> list[NDArray[np.complex128]]:
    """e^(−iHt)·ρ0·e^(iHt) je Abtastzeit (relativ zu t_grid[0])."""
    _gleiche_dimension(H.dim, rho0.dim)
    t = _pruefe_zeitgitter(t_grid)
    ergebnisse = []
    for zeit in t - t[0]:
        u = linalg.expm(-1j * zeit * H.entries)
        ergebnisse.append(u @ rho0.entries @ u.conj().T)
    return ergebnisse


def period_peaks(t: ArrayLike, werte: ArrayLike, periode: float) -> tuple[float, ...]:
    """Maximum je Fenster [j·P, (j+1)·P) ab t[0]; nur vollständig abgedeckte Fenster."""
    zeiten = np.asarray(t, dtype=np.float64)
    f = np.asarray(werte, dtype=np.float64)
    if periode <= 0.0:
        raise InvalidArgumentError(f"periode muss > 0 sein, erhalten: {periode}")
    relativ = zeiten - zeiten[0]
    anzahl = int(np.floor(relativ[-1] / periode + 1e-9))
    spitzen = []
    for j in range(anzahl):
        maske = (relativ >= j * periode - 1e-12) & (relativ <= (j + 1) * periode + 1e-12)
        spitzen.append(float(np.max(f[maske])))
    return tuple(spitzen)


# ====================== MODELLE ======================

def collapse_full(config: FockConfig, rates: DecayRates) -> list[tuple[OperatorMatrix, float]]:
    """Kollapsoperatoren a, m, b mit κ_a, κ_m, γ_b (Vakuumbäder)."""
    return [
        (embed(annihilation(config.dims[PHOTON]), PHOTON, config), rates.kappa_a),
        (embed(annihilation(config.dims[MAGNON]), MAGNON, config), rates.kappa_m),
        (embed(annihilation(config.dims[PHONON]), PHONON, config), rates.gamma_b),
    ]


def collapse_effective(config_ab: FockConfig, rates: DecayRates) -> list[tuple[OperatorMatrix, float]]:
    """Kollapsoperatoren a, b des effektiven Zwei-Moden-Modells."""
    return [
        (embed(annihilation(config_ab.dims[0]), 0, config_ab), rates.kappa_a),
        (embed(annihilation(config_ab.dims[1]), 1, config_ab), rates.gamma_b),
    ]


__all__: Final[tuple[str, ...]] = (
    "DensityMatrix",
    "DecayRates",
    "Richtung",
    "MasterTrajectory",
    "dissipator",
    "state_fidelity",
    "trace_distance",
    "evolve_master",
    "unitary_reference",
    "period_peaks",
    "collapse_full",
    "collapse_effective",
)
