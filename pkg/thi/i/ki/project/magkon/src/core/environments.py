from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Final, Literal, TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from util.mathematik import MathFunctions

from .errors import DomainError, GridError, InvalidArgumentError, VariantError

"""
Umgebungsmodelle: Spektraldichten, Korrelationskerne, thermische Besetzung,
Weisskopf-Wigner-Raten.

Varianten
- Ohmic(eta, omega0, s)     : J(ω) = η·ω·(ω/ω0)^(s−1)·e^(−ω/ω0), ω ≥ 0
- BandPowerLaw(C, k, …)     : J(ω) = C·ω^k auf [omega_min, omega_max], sonst 0
- Markovian(kappa)          : strukturlos; nur als lokale Dämpfung verwendbar

Konventionen
- f(t) = ∫dω J(ω)·e^(−i(ω − ω_ref)t), ω_ref = 0 (Standard, kein Frame-Shift).
- Alle Frequenzen in ω_b, Temperaturen in Energieeinheiten ħω_b/k_B.
"""

logger = logging.getLogger(__name__)

OHMIC_OBERGRENZE: Final[float] = 40.0          # Quadratur bis 40·ω0
DEFAULT_BAND: Final[tuple[float, float]] = (0.1, 2.0)
DEFAULT_BAND_KNOTEN: Final[int] = 2000
KNOTEN_PRO_PANEL: Final[int] = 20
DEFAULT_FREQUENZ_KNOTEN: Final[int] = 400
GITTER_REL_TOL: Final[float] = 1e-9
_MAX_BLOCK: Final[int] = 2_000_000               # Zeit × Knoten je Auswertungsblock

RateRegel: TypeAlias = Literal["halb", "pi"]


# ====================== VARIANTEN ======================

@dataclass(slots=True, frozen=True)
class Ohmic:
    """Ohmsche Familie; s < 1 sub-, s = 1 ohmsch, s > 1 super-ohmsch."""

    eta: float                 # Kopplungsstärke [1]
    omega0: float              # Abschneidefrequenz [ω_b]
    s: float = 1.0             # Exponent [1]

    def __post_init__(self) -> None:
        if not (self.eta >= 0.0 and self.omega0 > 0.0 and self.s > 0.0):
            raise InvalidArgumentError(f"Ohmic verlangt eta ≥ 0, omega0 > 0, s > 0: {self}")


@dataclass(slots=True, frozen=True)
class BandPowerLaw:
    """Bandbegrenztes Potenzgesetz, 1/f-artig für k ≈ −1."""

    C: float                                   # [ω_b^(1−k)]
    k: float = -1.0
    omega_min: float = DEFAULT_BAND[0]         # [ω_b]
    omega_max: float = DEFAULT_BAND[1]         # [ω_b]
    knoten: int = DEFAULT_BAND_KNOTEN

    def __post_init__(self) -> None:
        if not (self.C > 0.0 and 0.0 < self.omega_min < self.omega_max):
            raise InvalidArgumentError(f"BandPowerLaw verlangt C > 0 und 0 < omega_min < omega_max: {self}")
        if self.knoten < KNOTEN_PRO_PANEL:
            raise InvalidArgumentError(f"knoten muss ≥ {KNOTEN_PRO_PANEL} sein, erhalten: {self.knoten}")


@dataclass(slots=True, frozen=True)
class Markovian:
    kappa: float               # Zerfallsrate [ω_b]

    def __post_init__(self) -> None:
        if not self.kappa >= 0.0:
            raise InvalidArgumentError(f"kappa muss ≥ 0 sein, erhalten: {self.kappa}")


SpectralDensity: TypeAlias = Ohmic | BandPowerLaw | Markovian


def variant_name(model: SpectralDensity) -> str:
    return type(model).__name__.lower()


# ====================== KERN ======================

@dataclass(slots=True, frozen=True)
class CorrelationKernel:
    """
    Abgetasteter Korrelationskern f(t) auf gleichmäßigem Gitter.

    f(0) ist reell und gleich ∫J(ω)dω (Quadraturtoleranz).
    """

    t_grid: NDArray[np.float64]
    values: NDArray[np.complex128]
    source: SpectralDensity
    omega_ref: float = 0.0

    def __post_init__(self) -> None:
        if self.t_grid.shape != self.values.shape:
            raise GridError(f"Formen verschieden: {self.t_grid.shape} vs {self.values.shape}")

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])


def uniform_step(t_grid: ArrayLike) -> float:
    """Schrittweite eines gleichmäßigen, aufsteigenden Gitters; sonst GridError."""
    t = np.asarray(t_grid, dtype=np.float64)
    if t.ndim != 1 or t.size < 2:
        raise GridError("Zeitgitter braucht mindestens zwei Punkte")
    schritte = np.diff(t)
    dt = float(schritte[0])
    if dt <= 0.0 or np.max(np.abs(schritte - dt)) > GITTER_REL_TOL * max(1.0, abs(float(t[-1]))):
        raise GridError("Zeitgitter nicht gleichmäßig aufsteigend")
    return dt


def _pruefe_frequenz(omega: NDArray[np.float64]) -> None:
    if np.any(omega < 0.0) or not np.all(np.isfinite(omega)):
        raise DomainError("ω muss endlich und ≥ 0 sein")


def spectral_density(model: SpectralDensity, omega: ArrayLike) -> float | NDArray[np.float64]:
    """
    J(ω) der Variante; 0 außerhalb des Bandes.

    Fehler:
        DomainError für ω < 0, VariantError für Markovian.
    """
    w = np.asarray(omega, dtype=np.float64)
    _pruefe_frequenz(w)
    match model:
        case Ohmic(eta=eta, omega0=w0, s=s):
            # η·ω0·(ω/ω0)^s statt η·ω·(ω/ω0)^(s−1): endlich bei ω = 0
            werte = eta * w0 * np.power(w / w0, s) * np.exp(-w / w0)
        case BandPowerLaw(C=c, k=k, omega_min=lo, omega_max=hi):
            im_band = (w >= lo) & (w <= hi)
            werte = np.where(im_band, c * np.power(np.where(im_band, w, 1.0), k), 0.0)
        case Markovian():
            raise VariantError("Markovian hat keine bandbegrenzte Spektraldichte")
        case _:
            raise VariantError(f"unbekannte Variante {type(model).__name__}")
    return float(werte) if werte.ndim == 0 else werte


def spectral_support(model: SpectralDensity) -> tuple[float, float]:
    match model:
        case Ohmic(omega0=w0):
            return 0.0, OHMIC_OBERGRENZE * w0
        case BandPowerLaw(omega_min=lo, omega_max=hi):
            return lo, hi
        case _:
            raise VariantError(f"{variant_name(model)} hat keinen Träger")


def spectral_integral(model: SpectralDensity) -> float:
    """∫J(ω)dω, entspricht f(0)."""
    match model:
        case Ohmic(eta=eta, omega0=w0, s=s):
            return float(eta * special.gamma(s + 1.0) * w0 ** 2)
        case BandPowerLaw(C=c, k=k, omega_min=lo, omega_max=hi):
            if abs(k + 1.0) < 1e-14:
                return c * math.log(hi / lo)
            return c * (hi ** (k + 1.0) - lo ** (k + 1.0)) / (k + 1.0)
        case _:
            raise VariantError(f"{variant_name(model)} hat kein endliches Spektralintegral")


def correlation_kernel(
        model: SpectralDensity,
        t_grid: ArrayLike,
        *,
        omega_ref: float = 0.0,
) -> CorrelationKernel:
    """
    f(t) = ∫dω J(ω)e^(−i(ω − ω_ref)t) auf `t_grid`.

    - Ohmic: geschlossene Form η·Γ(s+1)·ω0²·(1 + iω0t)^(−(s+1)).
    - BandPowerLaw: zusammengesetzte Gauß-Legendre-Quadratur (model.knoten Knoten).
    - Markovian: VariantError (lokaler Dämpfungsterm beim Verbraucher).
    """
    t = np.asarray(t_grid, dtype=np.float64)
    uniform_step(t)
    match model:
        case Ohmic(eta=eta, omega0=w0, s=s):
            werte = eta * special.gamma(s + 1.0) * w0 ** 2 * np.power(1.0 + 1j * w0 * t, -(s + 1.0))
        case BandPowerLaw():
            werte = _band_kern(model, t)
        case Markovian():
            raise VariantError("Markovian liefert keine Kernabtastung; lokale Dämpfung verwenden")
        case _:
            raise VariantError(f"unbekannte Variante {type(model).__name__}")
    if omega_ref != 0.0:
        werte = werte * np.exp(1j * omega_ref * t)
    logger.debug("Kern %s: %d Stützstellen, f(0) = %.6e", variant_name(model), t.size, werte[0].real)
    return CorrelationKernel(t, np.asarray(werte, dtype=np.complex128), model, omega_ref)


def _band_kern(model: BandPowerLaw, t: NDArray[np.float64]) -> NDArray[np.complex128]:
    omega, gewichte = MathFunctions.gauss_legendre_gleichmaessig(
        model.omega_min, model.omega_max, model.knoten, KNOTEN_PRO_PANEL
    )
    jw = gewichte * model.C * np.power(omega, model.k)
    werte = np.empty(t.size, dtype=np.complex128)
    block = max(1, _MAX_BLOCK // omega.size)
    for start in range(0, t.size, block):
        stueck = t[start:start + block]
        werte[start:start + block] = np.exp(-1j * np.outer(stueck, omega)) @ jw
    return werte


def frequency_nodes(
        model: SpectralDensity,
        knoten: int = DEFAULT_FREQUENZ_KNOTEN,
        *,
        zentrum: float = 0.0,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Quadraturknoten über den Träger von J mit geometrischer Verdichtung zur
    Systemresonanz `zentrum` (im Bezugssystem des Kerns).
    """
    lo, hi = spectral_support(model)
    panele = max(2, knoten // KNOTEN_PRO_PANEL)
    if lo < zentrum < hi:
        links = max(1, round(panele * (zentrum - lo) / (hi - lo)))
        rechts = max(1, panele - links)
        w_l, g_l = MathFunctions.gauss_legendre_geometrisch(zentrum, lo, links, KNOTEN_PRO_PANEL)
        w_r, g_r = MathFunctions.gauss_legendre_geometrisch(zentrum, hi, rechts, KNOTEN_PRO_PANEL)
        return np.concatenate((w_l, w_r)), np.concatenate((g_l, g_r))
    anker, ende = (lo, hi) if zentrum <= lo else (hi, lo)
    return MathFunctions.gauss_legendre_geometrisch(anker, ende, panele, KNOTEN_PRO_PANEL)


# ====================== RATEN & BESETZUNG ======================

def markov_rate(model: SpectralDensity, omega_res: float, *, regel: RateRegel = "halb") -> float:
    """
    Weisskopf-Wigner-Rate: J(ω_res)/2 (regel="halb") oder πJ(ω_res) (regel="pi").
    Für Markovian die gespeicherte Rate.
    """
    if not omega_res > 0.0:
        raise DomainError(f"omega_res muss > 0 sein, erhalten: {omega_res}")
    if isinstance(model, Markovian):
        return model.kappa
    j = float(spectral_density(model, omega_res))
    match regel:
        case "halb":
            return 0.5 * j
        case "pi":
            return math.pi * j
        case _:
            raise InvalidArgumentError(f"unbekannte Ratenregel {regel!r}")


def markovian_from(model: SpectralDensity, omega_res: float, *, regel: RateRegel = "halb") -> Markovian:
    return Markovian(markov_rate(model, omega_res, regel=regel))


def thermal_occupation(omega: ArrayLike, temperature: float) -> float | NDArray[np.float64]:
    """
    Bose-Einstein-Besetzung 1/(e^(ω/T) − 1); 0 bei T = 0.

    Beispiele:
        thermal_occupation(1.0, 1.0) → 0.58198
    """
    w = np.asarray(omega, dtype=np.float64)
    if np.any(w <= 0.0) or not np.all(np.isfinite(w)):
        raise DomainError("ω muss endlich und > 0 sein")
    if temperature < 0.0:
        raise DomainError(f"Temperatur muss ≥ 0 sein, erhalten: {temperature}")
    if temperature == 0.0:
        werte = np.zeros_like(w)
    else:
        x = w / temperature
        werte = np.exp(-x) / -np.expm1(-x)
    return float(werte) if werte.ndim == 0 else werte


__all__: Final[tuple[str, ...]] = (
    "Ohmic",
    "BandPowerLaw",
    "Markovian",
    "SpectralDensity",
    "CorrelationKernel",
    "variant_name",
    "uniform_step",
    "spectral_density",
    "spectral_support",
    "spectral_integral",
    "correlation_kernel",
    "frequency_nodes",
    "markov_rate",
    "markovian_from",
    "thermal_occupation",
)
