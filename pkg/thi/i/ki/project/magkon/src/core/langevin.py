from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Final, Literal, TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import signal

from dtypes import DriftCheck
from util.mathematik import MathFunctions

from .environments import (
    CorrelationKernel,
    Markovian,
    SpectralDensity,
    frequency_nodes,
    spectral_density,
    uniform_step,
)
from .errors import DivergenceError, GridError, InvalidArgumentError

"""
Nicht-markovsche Heisenberg-Langevin-Dynamik des effektiven Zwei-Moden-Modells.

Gleichung (Zeilen/Spalten: Photon a, Phonon b)
    U̇(t) = −iM·U(t) − ∫_0^t F̄(t − τ)·U(τ) dτ,   U(0) = I,
    M = [[0, G̃], [G̃, 0]],  F̄ = diag(f_a, f_b) zeilenweise.

Diskretisierung
- Gleichmäßiges Gitter, Trapez-Faltungsquadratur für das Gedächtnisintegral,
  Heun-Schritt (Prädiktor + ein Korrektor).
- Markovsche Kanäle ersetzen das Gedächtnisintegral ihrer Zeile durch
  den lokalen Term (κ/2)·U; Markovian(0) ist der kernlose Kanal.

Rauschkanal
- [V2, V2†](t) = Σ_x ∫dω J_x(ω)·|∫_0^t U_2x(s)e^{i(ω − ω_ref)s} ds|²
  (Maß dω; konvention="zwei_pi" teilt durch 2π).
- Zeitbereich: d/dt [V2, V2†] = Σ_x 2 Re[U_2x*(t)·(f_x ⋆ U_2x)(t)].
"""

logger = logging.getLogger(__name__)

DEFAULT_DT: Final[float] = 5e-3
DIVERGENZ_SCHRANKE: Final[float] = 1.05
BETRAG_TOLERANZ: Final[float] = 1e-6
_MAX_BLOCK: Final[int] = 2_000_000

Kanal: TypeAlias = CorrelationKernel | Markovian
Methode: TypeAlias = Literal["frequenz", "zeit"]
Konvention: TypeAlias = Literal["kernel", "zwei_pi"]


# ====================== TYPEN ======================

@dataclass(slots=True, frozen=True)
class GreenTrajectory:
    """
    Abgetastete Green-Funktion U(t), Form (n, 2, 2); U(0) = I.

    |U_ij| ≤ 1 + BETRAG_TOLERANZ ist ein Hinweis: Überschreitungen werden nur
    protokolliert. Hart abgebrochen wird erst oberhalb der Divergenzschranke.

    kernels: (Photon-Kanal, Phonon-Kanal) auf dem Lösungsgitter.
    """

    t_grid: NDArray[np.float64]
    U: NDArray[np.complex128]
    kernels: tuple[Kanal, Kanal]
    gtilde: float

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    @property
    def U21(self) -> NDArray[np.complex128]:
        return self.U[:, 1, 0]

    @property
    def U22(self) -> NDArray[np.complex128]:
        return self.U[:, 1, 1]


@dataclass(slots=True, frozen=True)
class NoiseChannelStats:
    """
    Rauschkanal der Phononmode.

    Felder
    - commutator        : [V2, V2†](t) = kanal_a + kanal_b.
    - occupation        : ⟨V2†V2⟩(t) mit n̄_a = 0 und flachem n̄_b.
    - sum_rule_residual : |U21|² + |U22|² + [V2, V2†] − 1.
    """

    t_grid: NDArray[np.float64]
    commutator: NDArray[np.float64]
    occupation: NDArray[np.float64]
    sum_rule_residual: NDArray[np.float64]
    kanal_a: NDArray[np.float64]
    kanal_b: NDArray[np.float64]
    methode: str = "frequenz"
    konvention: str = "kernel"

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.sum_rule_residual)))


# ====================== HILFEN ======================

def _pruefe_gitter(t_grid: ArrayLike) -> tuple[NDArray[np.float64], float]:
    t = np.asarray(t_grid, dtype=np.float64)
    dt = uniform_step(t)
    if abs(t[0]) > 1e-12:
        raise GridError(f"Zeitgitter muss bei t = 0 beginnen, beginnt bei {t[0]}")
    return t, dt


def _kern_auf_gitter(kanal: Kanal, t: NDArray[np.float64], dt: float) -> NDArray[np.complex128] | None:
    """Kernwerte f(t_n) auf dem Lösungsgitter; None für Markovian."""
    if isinstance(kanal, Markovian):
        return None
    faktor_roh = dt / kanal.dt
    faktor = round(faktor_roh)
    if faktor < 1 or abs(faktor_roh - faktor) > 1e-9 * faktor_roh or abs(kanal.t_grid[0]) > 1e-12:
        raise GridError(
            f"Kerngitter (dt = {kanal.dt:.6g}) ist keine ganzzahlige Verfeinerung des Lösungsgitters (dt = {dt:.6g})"
        )
    werte = kanal.values[::faktor]
    if werte.size < t.size:
        raise GridError(f"Kern deckt nur t ≤ {kanal.t_grid[-1]:.6g} ab, benötigt {t[-1]:.6g}")
    return werte[: t.size]


def rabi_period(gtilde: float) -> float:
    """π/|G̃|."""
    if gtilde == 0.0:
        raise InvalidArgumentError("G̃ = 0 hat keine Rabi-Periode")
    return math.pi / abs(gtilde)


def kalibrier_kappa(gtilde: float) -> float:
    """Kalibrierrate mit κ·π/(2|G̃|) = 1."""
    return 2.0 * abs(gtilde) / math.pi


def gedaempfte_spitze(gtilde: float, kappa: float) -> float:
    """
    max_t |U21(t)| bei lokaler Photondämpfung κ und ungedämpftem Phonon.

    U21 = −i(G̃/Ω)·e^(−κt/4)·sin(Ωt) mit Ω² = G̃² − κ²/16; überdämpft sinh statt sin.

    Beispiele:
        gedaempfte_spitze(0.02, 0.08) → 1/e
    """
    if gtilde == 0.0:
        raise InvalidArgumentError("G̃ = 0 überträgt nicht")
    if kappa < 0.0:
        raise InvalidArgumentError(f"kappa muss ≥ 0 sein, erhalten: {kappa}")
    g, a = abs(gtilde), 0.25 * kappa
    if a == 0.0:
        return 1.0
    diskriminante = g * g - a * a
    if diskriminante > 0.0:
        omega = math.sqrt(diskriminante)
        t = math.atan2(omega, a) / omega
        return g / omega * math.exp(-a * t) * math.sin(omega * t)
    if diskriminante < 0.0:
        omega = math.sqrt(-diskriminante)
        t = math.atanh(omega / a) / omega
        return g / omega * math.exp(-a * t) * math.sinh(omega * t)
    return g / (a * math.e)


# ====================== DYSON-LÖSER ======================

def solve_dyson(
        gtilde: float,
        kernel_a: Kanal,
        kernel_b: Kanal,
        t_grid: ArrayLike,
        *,
        schranke: float = DIVERGENZ_SCHRANKE,
) -> GreenTrajectory:
    """
    Löst U̇ = −iMU − F̄ ⋆ U auf `t_grid` (gleichmäßig, Start bei 0).

    Fehler:
        GridError (Gitter/Kerne passen nicht), DivergenceError (|U_ij| > schranke).
        max |U_ij| − 1 > BETRAG_TOLERANZ ergibt nur eine Warnung.
    """
    t, h = _pruefe_gitter(t_grid)
    n_punkte = t.size
    m = np.array([[0.0, gtilde], [gtilde, 0.0]], dtype=np.complex128)
    kerne = [_kern_auf_gitter(kanal, t, h) for kanal in (kernel_a, kernel_b)]
    lokal = np.array([kanal.kappa / 2.0 if isinstance(kanal, Markovian) else 0.0 for kanal in (kernel_a, kernel_b)])

    u = np.zeros((n_punkte, 2, 2), dtype=np.complex128)
    u[0] = np.eye(2)
    schritt = 0
    betrag = DriftCheck(lambda: float(np.max(np.abs(u[schritt]))), schranke - 1.0, referenz=1.0, einseitig=True)

    def geschichte(n: int) -> NDArray[np.complex128]:
        """h·Σ_{j=1}^{n−1} f[n−j]·U_j + (h/2)·f[n]·U_0, zeilenweise."""
        g = np.zeros((2, 2), dtype=np.complex128)
        for x, f in enumerate(kerne):
            if f is None:
                continue
            zeile = 0.5 * f[n] * u[0, x]
            if n > 1:
                zeile = zeile + f[1:n][::-1] @ u[1:n, x]
            g[x] = h * zeile
        return g

    def ableitung(u_n: NDArray[np.complex128], hist: NDArray[np.complex128]) -> NDArray[np.complex128]:
        gedaechtnis = hist.copy()
        for x, f in enumerate(kerne):
            if f is None:
                gedaechtnis[x] = lokal[x] * u_n[x]
            else:
                gedaechtnis[x] += 0.5 * h * f[0] * u_n[x]
        return -1j * (m @ u_n) - gedaechtnis

    hist_n = np.zeros((2, 2), dtype=np.complex128)
    for n in range(n_punkte - 1):
        r_n = ableitung(u[n], hist_n)
        praediktor = u[n] + h * r_n
        hist_n1 = geschichte(n + 1)
        u[n + 1] = u[n] + 0.5 * h * (r_n + ableitung(praediktor, hist_n1))
        hist_n = hist_n1
        schritt = n + 1
        if not betrag():
            raise DivergenceError(
                f"|U_ij| = {betrag.letzter_wert:.4f} > {schranke} bei t = {t[n + 1]:.4g}; dt verkleinern"
            )

    if betrag.max_abweichung > BETRAG_TOLERANZ:
        logger.warning("max |U_ij| − 1 = %.2e über Toleranz %.0e", betrag.max_abweichung, BETRAG_TOLERANZ)
    logger.debug("Dyson-Löser: %d Schritte, dt = %.3g, G̃ = %.4g", n_punkte - 1, h, gtilde)
    return GreenTrajectory(t, u, (kernel_a, kernel_b), gtilde)


def transfer_fidelity(traj: GreenTrajectory) -> NDArray[np.float64]:
    """F(t) = |U21(t)|."""
    return np.abs(traj.U21)


# ====================== RAUSCHKANAL ======================

def _quelle(kanal: Kanal) -> SpectralDensity:
    return kanal if isinstance(kanal, Markovian) else kanal.source


def _kanal_zeit(kanal: Kanal, u2x: NDArray[np.complex128], h: float) -> NDArray[np.float64]:
    """∫_0^t 2 Re[U_2x*·(f_x ⋆ U_2x)] dt′ per Trapez-Faltung; Markovian: κ∫|U_2x|²."""
    if isinstance(kanal, Markovian):
        return kanal.kappa * MathFunctions.trapez_kumulativ(np.abs(u2x) ** 2, h)
    f = _kern_auf_gitter(kanal, h * np.arange(u2x.size), h)
    faltung = signal.fftconvolve(f, u2x)[: u2x.size]
    faltung = h * (faltung - 0.5 * f * u2x[0] - 0.5 * f[0] * u2x)
    return MathFunctions.trapez_kumulativ(2.0 * np.real(np.conj(u2x) * faltung), h)


def _kanal_frequenz(
        kanal: Kanal,
        J: SpectralDensity,
        u2x: NDArray[np.complex128],
        t: NDArray[np.float64],
        h: float,
        knoten: int,
) -> NDArray[np.float64]:
    """∫dω J(ω)|∫_0^t U_2x(s)e^{i(ω − ω_ref)s}ds|² mit geometrisch verdichteten Knoten."""
    if isinstance(J, Markovian):
        return J.kappa * MathFunctions.trapez_kumulativ(np.abs(u2x) ** 2, h)
    omega_ref = 0.0 if isinstance(kanal, Markovian) else kanal.omega_ref
    omega, gewichte = frequency_nodes(J, knoten, zentrum=omega_ref)
    jw = gewichte * spectral_density(J, omega)
    ergebnis = np.zeros(t.size, dtype=np.float64)
    block = max(1, _MAX_BLOCK // t.size)
    for start in range(0, omega.size, block):
        w = omega[start:start + block] - omega_ref
        y = MathFunctions.trapez_kumulativ(u2x[:, None] * np.exp(1j * np.outer(t, w)), h, axis=0)
        ergebnis += np.abs(y) ** 2 @ jw[start:start + block]
    return ergebnis


def noise_stats(
        traj: GreenTrajectory,
        J_a: SpectralDensity | None = None,
        J_b: SpectralDensity | None = None,
        nbar_b: float = 0.0,
        *,
        methode: Methode = "frequenz",
        konvention: Konvention = "kernel",
        knoten: int = 400,
) -> NoiseChannelStats:
    """
    Kommutator, Besetzung und Summenregel des Phonon-Rauschkanals.

    J_a/J_b: Spektraldichten der Kanäle; None übernimmt die Quelle der
    Trajektorienkerne. methode="zeit" nutzt die Zeitbereichsidentität
    (nur J der Trajektorie).
    """
    if nbar_b < 0.0:
        raise InvalidArgumentError(f"nbar_b muss ≥ 0 sein, erhalten: {nbar_b}")
    t, h = traj.t_grid, traj.dt
    spektren = (
        _quelle(traj.kernels[0]) if J_a is None else J_a,
        _quelle(traj.kernels[1]) if J_b is None else J_b,
    )

    kanaele = []
    for x, (kanal, J) in enumerate(zip(traj.kernels, spektren)):
        u2x = traj.U[:, 1, x]
        match methode:
            case "zeit":
                kanaele.append(_kanal_zeit(kanal, u2x, h))
            case "frequenz":
                kanaele.append(_kanal_frequenz(kanal, J, u2x, t, h, knoten))
            case _:
                raise InvalidArgumentError(f"unbekannte Methode {methode!r}")
    match konvention:
        case "kernel":
            skala = 1.0
        case "zwei_pi":
            skala = 1.0 / (2.0 * math.pi)
        case _:
            raise InvalidArgumentError(f"unbekannte Konvention {konvention!r}")

    kanal_a, kanal_b = skala * kanaele[0], skala * kanaele[1]
    kommutator = kanal_a + kanal_b
    residuum = np.abs(traj.U21) ** 2 + np.abs(traj.U22) ** 2 + kommutator - 1.0
    if np.min(kommutator) < -BETRAG_TOLERANZ:
        logger.warning("[V2, V2†] negativ: min = %.2e", np.min(kommutator))
    logger.debug(
        "Rauschkanal (%s, %s): max Summenregel-Residuum %.2e",
        methode, konvention, float(np.max(np.abs(residuum))),
    )
    return NoiseChannelStats(
        t_grid=t,
        commutator=kommutator,
        occupation=nbar_b * kanal_b,
        sum_rule_residual=residuum,
        kanal_a=kanal_a,
        kanal_b=kanal_b,
        methode=methode,
        konvention=konvention,
    )


def phonon_number(traj: GreenTrajectory, n_a0: float, n_b0: float, stats: NoiseChannelStats) -> NDArray[np.float64]:
    """⟨b†b⟩(t) = |U21|²·n_a0 + |U22|²·n_b0 + ⟨V2†V2⟩(t)."""
    if n_a0 < 0.0 or n_b0 < 0.0:
        raise InvalidArgumentError(f"Besetzungen müssen ≥ 0 sein: n_a0 = {n_a0}, n_b0 = {n_b0}")
    if stats.t_grid.shape != traj.t_grid.shape or not np.allclose(stats.t_grid, traj.t_grid, rtol=0.0, atol=1e-12):
        raise GridError("Rauschstatistik und Trajektorie auf verschiedenen Gittern")
    return np.abs(traj.U21) ** 2 * n_a0 + np.abs(traj.U22) ** 2 * n_b0 + stats.occupation


__all__: Final[tuple[str, ...]] = (
    "GreenTrajectory",
    "NoiseChannelStats",
    "solve_dyson",
    "transfer_fidelity",
    "noise_stats",
    "phonon_number",
    "rabi_period",
    "kalibrier_kappa",
    "gedaempfte_spitze",
)
