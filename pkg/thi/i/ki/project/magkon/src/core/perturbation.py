from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Final

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from util.evaluation import TypeUtils
from util.mathematik import MathFunctions

from .errors import (
    BracketError,
    DegenerateDetuningError,
    IdentificationError,
    InvalidArgumentError,
    RegimeError,
)
from .fock_core import PHOTON, FockConfig, basis_index, embed, number_operator
from .hamiltonians import SystemParams, SubspaceSpec, build_linearized, subspace

"""
Störungstheorie zweiter Ordnung und numerische Validierung an der
vermiedenen Kreuzung des linearisierten Vollmodells.

Inhalt
- Analytisch: energy_shifts, crossing_shift, effective_coupling, gtilde
- Numerisch: scan_crossing (Zweigverfolgung + goldener Schnitt)
- Transfer: transfer_amplitude

Hinweise
- Im letzten Term von ε2 wird die symmetrische Lesart (k + l + 2)G²/(Δ_m + ω_b)
  verwendet; δ und G̃ hängen davon nicht ab.
- Außerhalb des störungstheoretischen Bereichs wird gewarnt, mit
  `strict=True` stattdessen RegimeError geworfen.
"""

logger = logging.getLogger(__name__)

NENNER_EXP10: Final[int] = 12         # |Nenner| < 1e-12 gilt als entartet
MIN_UEBERLAPP: Final[float] = 0.5
ZWEIG_TOLERANZ: Final[float] = 1e-6      # Gewichte näher als dies gelten als gleich
DEFAULT_SCAN: Final[tuple[float, float, int]] = (0.9, 1.1, 401)
DEFAULT_XTOL: Final[float] = 1e-6
MAX_ABS_DELTA: Final[float] = 0.5


# ====================== HILFEN ======================

def _pruefe_regime(params: SystemParams, strict: bool) -> None:
    if params.is_perturbative():
        return
    meldung = (
        f"außerhalb des störungstheoretischen Bereichs: g = {params.g:.4g}, G = {params.G:.4g}, "
        f"|ω_b − Δ_m| = {abs(params.omega_b - params.delta_m):.4g}"
    )
    if strict:
        raise RegimeError(meldung)
    logger.warning(meldung)


def _nenner(wert: float, name: str) -> float:
    if abs(wert) < float(TypeUtils.eps(NENNER_EXP10)):
        raise DegenerateDetuningError(f"verschwindender Nenner {name} = {wert:.3e}")
    return wert


# ====================== ANALYTISCH ======================

def energy_shifts(
        params: SystemParams,
        n: int,
        l: int,
        k: int,
        *,
        delta_a: float | None = None,
        strict: bool = False,
) -> tuple[float, float]:
    """
    Energieverschiebungen zweiter Ordnung (ε1, ε2) der fast entarteten
    Zustände |n l k⟩ und |(n−1) l (k+1)⟩.

    ε1 = (n−l)g²/(Δ_a−Δ_m) + (k−l)G²/(ω_b−Δ_m) − (l+k+1)G²/(Δ_m+ω_b)
    ε2 = (n−l−1)g²/(Δ_a−Δ_m) + (k−l+1)G²/(ω_b−Δ_m) − (k+l+2)G²/(Δ_m+ω_b)

    `delta_a` überschreibt params.delta_a im Photon-Magnon-Nenner.
    """
    _pruefe_regime(params, strict)
    da = params.delta_a if delta_a is None else delta_a
    g2, G2 = params.g ** 2, params.G ** 2
    d_am = _nenner(da - params.delta_m, "Δ_a − Δ_m")
    d_bm = _nenner(params.omega_b - params.delta_m, "ω_b − Δ_m")
    s_bm = _nenner(params.delta_m + params.omega_b, "Δ_m + ω_b")

    eps1 = (n - l) * g2 / d_am + (k - l) * G2 / d_bm - (l + k + 1) * G2 / s_bm
    eps2 = (n - l - 1) * g2 / d_am + (k - l + 1) * G2 / d_bm - (k + l + 2) * G2 / s_bm
    return eps1, eps2


def crossing_shift(params: SystemParams, *, konsistent: bool = False, strict: bool = False) -> float:
    """
    δ = (G² − g²)/(ω_b − Δ_m) − G²/(ω_b + Δ_m).

    `konsistent=True` löst δ = A + Bδ mit B = g²/(ω_b − Δ_m)² (Δ_a = ω_b + δ
    im Photon-Magnon-Nenner, erste Taylor-Ordnung) und liefert A/(1 − B).
    """
    _pruefe_regime(params, strict)
    g2, G2 = params.g ** 2, params.G ** 2
    d_bm = _nenner(params.omega_b - params.delta_m, "ω_b − Δ_m")
    s_bm = _nenner(params.omega_b + params.delta_m, "ω_b + Δ_m")
    a = (G2 - g2) / d_bm - G2 / s_bm
    if not konsistent:
        return a
    b = g2 / d_bm ** 2
    return a / _nenner(1.0 - b, "1 − B")


def gtilde(params: SystemParams, *, strict: bool = False) -> float:
    """G̃ = Gg/(ω_b − Δ_m), vorzeichenbehaftet."""
    _pruefe_regime(params, strict)
    return params.G * params.g / _nenner(params.omega_b - params.delta_m, "ω_b − Δ_m")


def effective_coupling(
        params: SystemParams,
        n: int,
        k: int,
        l: int = 0,
        *,
        zwei_pfade: bool = False,
        delta_a: float | None = None,
        strict: bool = False,
) -> float:
    """
    Kopplung zwischen |n l k⟩ und |(n−1) l (k+1)⟩.

    Standard: g_eff = √(n(k+1))·G̃ (unabhängig von l).
    `zwei_pfade=True`: (l+1)√(n(k+1))Gg/(Δ_a−Δ_m) − l√(n(k+1))Gg/(ω_b−Δ_m)
    mit Δ_a aus `delta_a` bzw. params.
    """
    if n < 1 or k < 0 or l < 0:
        raise InvalidArgumentError(f"Fock-Labels ungültig: n = {n}, k = {k}, l = {l}")
    faktor = math.sqrt(n * (k + 1))
    if not zwei_pfade:
        return faktor * gtilde(params, strict=strict)

    _pruefe_regime(params, strict)
    da = params.delta_a if delta_a is None else delta_a
    gG = params.G * params.g
    d_am = _nenner(da - params.delta_m, "Δ_a − Δ_m")
    d_bm = _nenner(params.omega_b - params.delta_m, "ω_b − Δ_m")
    return (l + 1) * faktor * gG / d_am - l * faktor * gG / d_bm


def transfer_amplitude(N: int, gtilde: float, t: ArrayLike, *, plaetze: bool = False) -> complex | NDArray[np.complex128]:
    """
    Übergangsamplitude ⟨0 0 N|exp(−i H^(N) t)|N 0 0⟩ = [−i sin(G̃t)]^N.

    `plaetze=True` verwendet den Exponenten N − 1 (Platzzahl der Kette minus zwei).

    Beispiele:
        transfer_amplitude(3, 1.0, π/4, plaetze=True) → −0.5
    """
    if N < 1:
        raise InvalidArgumentError(f"N muss ≥ 1 sein, erhalten: {N}")
    exponent = N - 1 if plaetze else N
    basis = -1j * np.sin(gtilde * np.asarray(t, dtype=np.float64))
    werte = np.power(basis, exponent)
    return complex(werte) if werte.ndim == 0 else werte


# ====================== NUMERISCH ======================

@dataclass(slots=True, frozen=True)
class CrossingResult:
    """
    Ergebnis des Kreuzungsscans.

    Felder
    - delta_num [ω_b]       : Δ_a* − ω_b.
    - gtilde_num [ω_b]      : halbe minimale Lücke benachbarter verfolgter Zweige.
    - branch_indices        : Eigenwertindizes der verfolgten Zweige bei Δ_a*.
    - halbe_spreizung [ω_b] : halber Abstand äußerster Zweige bei Δ_a* (N·|G̃|).
    """

    delta_num: float
    gtilde_num: float
    branch_indices: tuple[int, ...]
    halbe_spreizung: float = 0.0

    def __post_init__(self) -> None:
        if self.gtilde_num < 0.0:
            raise InvalidArgumentError(f"gtilde_num muss ≥ 0 sein, erhalten: {self.gtilde_num}")
        if abs(self.delta_num) >= MAX_ABS_DELTA:
            raise InvalidArgumentError(f"|delta_num| = {abs(self.delta_num):.3g} ≥ {MAX_ABS_DELTA}")


def default_scan_grid() -> NDArray[np.float64]:
    links, rechts, punkte = DEFAULT_SCAN
    return np.linspace(links, rechts, punkte)


def waehle_zweige(
        gewichte: NDArray[np.float64],
        energien: NDArray[np.float64],
        anzahl: int,
        vorher: NDArray[np.float64] | None = None,
) -> NDArray[np.int64]:
    """
    Indizes der `anzahl` Zweige mit größtem Unterraumgewicht, aufsteigend.

    Liegen Gewichte an der Auswahlgrenze innerhalb ZWEIG_TOLERANZ, entscheidet
    der Energieabstand zu den zuletzt gewählten Zweigen `vorher`.
    """
    ordnung = np.argsort(gewichte, kind="stable")[::-1]
    if vorher is None or ordnung.size <= anzahl:
        return np.sort(ordnung[:anzahl])
    grenze = gewichte[ordnung[anzahl - 1]]
    sicher = ordnung[gewichte[ordnung] > grenze + ZWEIG_TOLERANZ]
    offen = ordnung[np.abs(gewichte[ordnung] - grenze) <= ZWEIG_TOLERANZ]
    abstand = np.min(np.abs(energien[offen, None] - np.asarray(vorher)[None, :]), axis=1)
    rest = offen[np.argsort(abstand, kind="stable")][: anzahl - sicher.size]
    return np.sort(np.concatenate([sicher, rest]))


class _ZweigVerfolgung:
    """Diagonalisiert H(Δ_a) = H_rest + Δ_a·a†a und verfolgt die Zweige mit größtem Unterraumgewicht."""

    __slots__ = ("_h_rest", "_n_a", "_indizes", "_anzahl", "_vorher")

    def __init__(self, params: SystemParams, spec: SubspaceSpec, config: FockConfig) -> None:
        self._indizes = np.array([basis_index(z, config) for z in spec.basis], dtype=np.int64)
        self._anzahl = len(spec.basis)
        self._n_a = embed(number_operator(config.dims[PHOTON]), PHOTON, config).entries
        voll = build_linearized(params, config).entries
        self._h_rest = voll - params.delta_a * self._n_a
        self._vorher: NDArray[np.float64] | None = None

    def zweige(self, delta_a: float) -> tuple[NDArray[np.float64], NDArray[np.int64]]:
        werte, vektoren = linalg.eigh(self._h_rest + delta_a * self._n_a)
        gewichte = np.sum(np.abs(vektoren[self._indizes, :]) ** 2, axis=0)
        auswahl = waehle_zweige(gewichte, werte, self._anzahl, self._vorher)
        if np.min(gewichte[auswahl]) < MIN_UEBERLAPP:
            raise IdentificationError(
                f"Zweigzuordnung bei Δ_a = {delta_a:.6g} fehlgeschlagen: "
                f"minimales Unterraumgewicht {np.min(gewichte[auswahl]):.3f} < {MIN_UEBERLAPP}"
            )
        self._vorher = werte[auswahl]
        return werte[auswahl], auswahl

    def luecke(self, delta_a: float) -> float:
        energien, _ = self.zweige(delta_a)
        return float(np.min(np.diff(energien)))


def scan_crossing(
        params: SystemParams,
        delta_a_grid: ArrayLike | None = None,
        spec: SubspaceSpec | None = None,
        config: FockConfig | None = None,
        *,
        xtol: float = DEFAULT_XTOL,
) -> CrossingResult:
    """
    Numerische Bestimmung von δ und |G̃| an der vermiedenen Kreuzung.

    Ablauf
    1. Für jedes Δ_a des Gitters: Diagonalisierung des linearisierten H,
       Auswahl der Eigenzweige mit maximalem Gewicht auf dem Unterraum,
       bei Gleichstand der energetisch nächsten zum vorigen Punkt.
    2. Gitter-Minimum der kleinsten benachbarten Lücke; Randlage → BracketError.
    3. Verfeinerung per goldenem Schnitt bis `xtol` (in ω_b).

    Fehler:
        BracketError, IdentificationError, InvalidDimensionError (Trunkierung zu klein).
    """
    gitter = default_scan_grid() if delta_a_grid is None else np.asarray(delta_a_grid, dtype=np.float64)
    spec = subspace(1) if spec is None else spec
    config = FockConfig() if config is None else config
    if gitter.ndim != 1 or gitter.size < 3 or np.any(np.diff(gitter) <= 0.0):
        raise InvalidArgumentError("Δ_a-Gitter muss streng aufsteigend sein (≥ 3 Punkte)")

    verfolgung = _ZweigVerfolgung(params, spec, config)
    luecken = np.array([verfolgung.luecke(float(x)) for x in gitter])
    i_min = int(np.argmin(luecken))
    if i_min == 0 or i_min == gitter.size - 1:
        raise BracketError(
            f"Lückenminimum am Gitterrand Δ_a = {gitter[i_min]:.6g}; Gitter [{gitter[0]:.4g}, {gitter[-1]:.4g}] erweitern"
        )

    x_stern, luecke_min = MathFunctions.golden_minimum(
        verfolgung.luecke, float(gitter[i_min - 1]), float(gitter[i_min]), float(gitter[i_min + 1]), xtol=xtol
    )
    energien, auswahl = verfolgung.zweige(x_stern)
    ergebnis = CrossingResult(
        delta_num=x_stern - params.omega_b,
        gtilde_num=0.5 * luecke_min,
        branch_indices=tuple(int(i) for i in auswahl),
        halbe_spreizung=0.5 * float(energien[-1] - energien[0]),
    )
    logger.debug(
        "Kreuzung (%s, %d Gitterpunkte): Δ_a* = %.8f, halbe Lücke = %.6e",
        spec.kind.value, gitter.size, x_stern, ergebnis.gtilde_num,
    )
    return ergebnis


__all__: Final[tuple[str, ...]] = (
    "CrossingResult",
    "energy_shifts",
    "crossing_shift",
    "gtilde",
    "effective_coupling",
    "transfer_amplitude",
    "default_scan_grid",
    "scan_crossing",
    "waehle_zweige",
)
