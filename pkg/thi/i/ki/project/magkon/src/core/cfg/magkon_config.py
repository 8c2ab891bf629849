from __future__ import annotations

import logging
import os
import sys
from collections.abc import Mapping
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from types import MappingProxyType
from typing import Any, Final, Literal, TypeAlias

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from ..environments import BandPowerLaw, Markovian, Ohmic
from ..errors import ConfigError, MagkonError
from ..fock_core import FockConfig
from ..hamiltonians import SystemParams, subspace
from ..lindblad import Richtung

"""
Laufkonfiguration
=================

Zweck
- Unveränderliche Konfiguration `RunConfig` je Experiment (eigs,
  coupling-scan, lindblad, transfer) mit Numerik-Block `NumerikCfg`.
- Eingebettete Parametersätze `FIGUREN` für die Abbildungen 3 bis 9.
- TOML-Lader mit Abschnitten [lauf], [system], [zerfall],
  [spektren.photon], [spektren.phonon], [numerik].

Normative Hinweise
- Einheiten in eckigen Klammern; Frequenzen und Raten in ω_b, Zeiten in 1/ω_b.
- Vorrang: Abbildungs-Standard < TOML-Datei < CLI-Optionen.
- Unbekannte Schlüssel → ConfigError.
"""

logger = logging.getLogger(__name__)

Experiment: TypeAlias = Literal["eigs", "coupling-scan", "lindblad", "transfer"]
EXPERIMENTE: Final[tuple[str, ...]] = ("eigs", "coupling-scan", "lindblad", "transfer")
AUSGABE_ENV: Final[str] = "MAGKON_OUT"
AUSGABE_STANDARD: Final[str] = "magkon_out"


# ====================== KANALSPEZIFIKATION ======================

@dataclass(slots=True, frozen=True)
class MarkovAus:
    """Markovscher Kanal mit Rate aus J(ω_b) der Quelle (Regel aus NumerikCfg.rate_regel)."""

    quelle: Ohmic | BandPowerLaw


@dataclass(slots=True, frozen=True)
class Kalibriert:
    """Markovscher Kanal mit κ·π/(2|G̃|) = 1."""


KanalSpec: TypeAlias = Ohmic | BandPowerLaw | Markovian | MarkovAus | Kalibriert


@dataclass(slots=True, frozen=True)
class Szenario:
    name: str
    photon: KanalSpec
    phonon: KanalSpec


# ====================== NUMERIK ======================

@dataclass(slots=True, frozen=True)
class NumerikCfg:
    """
    Numerische Einstellungen aller Experimente.

    Felder
    - dims [1]                : Trunkierung (a, m, b).
    - scan_links/rechts [ω_b] : Δ_a-Scanbereich; scan_punkte Gitterpunkte.
    - xtol [ω_b]              : Toleranz des goldenen Schnitts.
    - exzitonen [1]           : N des Unterraums für eigs.
    - kopplungen [ω_b]        : Werte für coupling-scan.
    - scan_variablen          : variierte Kopplungen ("g", "G").
    - dt_master [1/ω_b]       : RK4-Schritt der Mastergleichung.
    - abtastung [1/ω_b]       : Ausgabeabstand der Mastergleichung.
    - dt_langevin [1/ω_b]     : Schritt des Dyson-Lösers.
    - perioden [1]            : Laufzeit in Rabi-Perioden π/|G̃|.
    - frequenz_knoten [1]     : Knoten der Rauschkanal-Quadratur.
    - rauschmethode           : "frequenz" | "zeit".
    - kernel_shift [ω_b]      : ω_ref des Kernbezugssystems (0 = aus).
    - rate_regel              : "halb" (J/2) | "pi" (πJ).
    - richtung                : Konversionsrichtung der Mastergleichung.
    """

    dims: tuple[int, int, int] = (4, 4, 4)
    scan_links: float = 0.9
    scan_rechts: float = 1.1
    scan_punkte: int = 401
    xtol: float = 1e-6
    exzitonen: int = 1
    kopplungen: tuple[float, ...] = (0.01, 0.02, 0.05, 0.1, 0.15)
    scan_variablen: tuple[str, ...] = ("g", "G")
    dt_master: float = 1e-2
    abtastung: float = 0.5
    dt_langevin: float = 5e-3
    perioden: int = 3
    frequenz_knoten: int = 400
    rauschmethode: str = "frequenz"
    kernel_shift: float = 0.0
    rate_regel: str = "halb"
    richtung: str = Richtung.PHOTON_ZU_PHONON.value


DEFAULT_NUMERIK: Final[NumerikCfg] = NumerikCfg()
DEFAULT_PARAMS: Final[SystemParams] = SystemParams.from_detunings(1.0, 1.7, 0.1, 0.1)


def standard_ausgabe() -> Path:
    return Path(os.getenv(AUSGABE_ENV, AUSGABE_STANDARD))


# ====================== LAUF ======================

@dataclass(slots=True, frozen=True)
class RunConfig:
    """
    Vollständige Konfiguration eines Laufs.

    Felder
    - experiment             : eigs | coupling-scan | lindblad | transfer.
    - params                 : Systemparameter (Δ_a, Δ_m, g, G, M, K).
    - magnon_besetzung [1]   : ⟨m†m⟩ für die Kerr-Verschiebung (0 = aus).
    - kappas [ω_b]           : κ-Szenarien der Mastergleichung (κ_a = κ_m = κ).
    - phonon_anteil [1]      : γ_b = phonon_anteil·κ.
    - gtilde [ω_b]           : G̃ des Transfers; None → aus params.
    - szenarien              : Umgebungsszenarien des Transfers.
    - figure                 : Abbildungsnummer des Basissatzes oder None.
    """

    experiment: str
    params: SystemParams = DEFAULT_PARAMS
    magnon_besetzung: float = 0.0
    kappas: tuple[float, ...] = (0.0,)
    phonon_anteil: float = 1e-2
    gtilde: float | None = None
    szenarien: tuple[Szenario, ...] = ()
    numerik: NumerikCfg = DEFAULT_NUMERIK
    output_dir: Path = field(default_factory=standard_ausgabe)
    figure: int | None = None

    def validiere(self) -> None:
        """Prüft alle Felder gegen die Vorbedingungen der Module; ConfigError bei Verstoß."""
        n = self.numerik
        fehler: list[str] = []
        if self.experiment not in EXPERIMENTE:
            fehler.append(f"experiment {self.experiment!r} nicht in {EXPERIMENTE}")
        try:
            config = FockConfig(n.dims)
            if len(config.dims) != 3:
                fehler.append(f"dims braucht drei Einträge, erhalten: {n.dims}")
            elif self.experiment == "eigs":
                subspace(n.exzitonen)
                if min(config.dims[0], config.dims[2]) <= n.exzitonen:
                    fehler.append(f"dims {n.dims} zu klein für {n.exzitonen} Exzitonen")
            Richtung(n.richtung)
        except (MagkonError, ValueError) as exc:
            fehler.append(str(exc))
        if not (n.scan_links < n.scan_rechts and n.scan_punkte >= 3):
            fehler.append("Scanbereich muss aufsteigend sein mit ≥ 3 Punkten")
        if not n.xtol > 0.0:
            fehler.append(f"xtol muss > 0 sein: {n.xtol}")
        if not (n.dt_master > 0.0 and n.dt_langevin > 0.0 and n.abtastung > 0.0):
            fehler.append("dt_master, dt_langevin und abtastung müssen > 0 sein")
        if n.abtastung < n.dt_master:
            fehler.append("abtastung muss ≥ dt_master sein")
        if n.perioden < 1:
            fehler.append(f"perioden muss ≥ 1 sein: {n.perioden}")
        if n.frequenz_knoten < 40:
            fehler.append(f"frequenz_knoten muss ≥ 40 sein: {n.frequenz_knoten}")
        if n.rauschmethode not in ("frequenz", "zeit"):
            fehler.append(f"rauschmethode {n.rauschmethode!r} unbekannt")
        if n.rate_regel not in ("halb", "pi"):
            fehler.append(f"rate_regel {n.rate_regel!r} unbekannt")
        if not n.kopplungen or any(not 0.0 < w <= 0.5 for w in n.kopplungen):
            fehler.append(f"kopplungen müssen in (0, 0.5] liegen: {n.kopplungen}")
        if not n.scan_variablen or any(v not in ("g", "G") for v in n.scan_variablen):
            fehler.append(f"scan_variablen nur aus ('g', 'G'): {n.scan_variablen}")
        if any(k < 0.0 for k in self.kappas) or not self.kappas:
            fehler.append(f"kappas müssen ≥ 0 sein: {self.kappas}")
        if self.phonon_anteil < 0.0:
            fehler.append(f"phonon_anteil muss ≥ 0 sein: {self.phonon_anteil}")
        if self.magnon_besetzung < 0.0:
            fehler.append(f"magnon_besetzung muss ≥ 0 sein: {self.magnon_besetzung}")
        if self.experiment == "transfer":
            if self.gtilde is not None and self.gtilde == 0.0:
                fehler.append("gtilde = 0 erlaubt keinen Transfer")
            if not self.szenarien:
                fehler.append("transfer braucht mindestens ein Szenario")
            if len({s.name for s in self.szenarien}) != len(self.szenarien):
                fehler.append("Szenarionamen müssen eindeutig sein")
        if fehler:
            raise ConfigError("; ".join(fehler))


# ====================== ABBILDUNGEN ======================

_OHMSCH: Final[Ohmic] = Ohmic(eta=1e-4, omega0=5.0, s=1.0)
_EINS_DURCH_F: Final[BandPowerLaw] = BandPowerLaw(C=1e-4, k=-1.0)
_GT_TRANSFER: Final[float] = 0.02
_TRANSFER_NUMERIK: Final[NumerikCfg] = NumerikCfg(perioden=3)


def _transfer(figure: int, szenarien: tuple[Szenario, ...]) -> RunConfig:
    return RunConfig(
        "transfer", gtilde=_GT_TRANSFER, szenarien=szenarien, numerik=_TRANSFER_NUMERIK, figure=figure,
    )


FIGUREN: Final[Mapping[int, RunConfig]] = MappingProxyType({
    3: RunConfig("eigs", numerik=NumerikCfg(exzitonen=1), figure=3),
    4: RunConfig("eigs", numerik=NumerikCfg(exzitonen=2), figure=4),
    5: RunConfig("coupling-scan", figure=5),
    6: RunConfig("lindblad", kappas=(0.0, 1e-3), numerik=NumerikCfg(dims=(3, 3, 3)), figure=6),
    7: _transfer(7, (
        Szenario("strukturiert", _OHMSCH, _EINS_DURCH_F),
        Szenario("markov_photon", MarkovAus(_OHMSCH), _EINS_DURCH_F),
        Szenario("markov_phonon", _OHMSCH, MarkovAus(_EINS_DURCH_F)),
        Szenario("kalibriert", Kalibriert(), _EINS_DURCH_F),
    )),
    8: _transfer(8, tuple(
        Szenario(f"s={s:g}", Ohmic(eta=1e-4, omega0=5.0, s=s), _EINS_DURCH_F) for s in (0.5, 1.0, 2.0)
    )),
    9: _transfer(9, tuple(
        Szenario(f"k={k:g}", _OHMSCH, BandPowerLaw(C=1e-4, k=k)) for k in (-0.5, -1.0, -1.5)
    )),
})

STANDARD_FIGUR: Final[Mapping[str, int]] = MappingProxyType(
    {"eigs": 3, "coupling-scan": 5, "lindblad": 6, "transfer": 7}
)


def figur_config(experiment: str, figure: int | None = None) -> RunConfig:
    """Basissatz der Abbildung; passt die Abbildung nicht zum Experiment → ConfigError."""
    nummer = STANDARD_FIGUR.get(experiment) if figure is None else figure
    if nummer not in FIGUREN:
        raise ConfigError(f"keine Abbildung {nummer} hinterlegt (3..9)")
    basis = FIGUREN[nummer]
    if basis.experiment != experiment:
        raise ConfigError(f"Abbildung {nummer} gehört zu {basis.experiment!r}, nicht zu {experiment!r}")
    return replace(basis, output_dir=standard_ausgabe())


# ====================== TOML ======================

_SYSTEM_SCHLUESSEL: Final[frozenset[str]] = frozenset(
    {"delta_a", "delta_m", "g", "G", "M", "K", "omega_b", "omega_d", "Omega_d", "magnon_besetzung", "gtilde"}
)
_ZERFALL_SCHLUESSEL: Final[frozenset[str]] = frozenset({"kappas", "phonon_anteil"})
_LAUF_SCHLUESSEL: Final[frozenset[str]] = frozenset({"experiment", "figur", "ausgabe"})
_NUMERIK_SCHLUESSEL: Final[frozenset[str]] = frozenset(f.name for f in fields(NumerikCfg))
_VARIANTEN_SCHLUESSEL: Final[Mapping[str, frozenset[str]]] = MappingProxyType({
    "ohmic": frozenset({"eta", "omega0", "s"}),
    "bandpowerlaw": frozenset({"C", "k", "omega_min", "omega_max", "knoten"}),
    "markovian": frozenset({"kappa", "aus", "eta", "omega0", "s", "C", "k", "omega_min", "omega_max"}),
    "kalibriert": frozenset(),
})


def _unbekannt(abschnitt: str, daten: Mapping[str, Any], erlaubt: frozenset[str]) -> None:
    fremd = sorted(set(daten) - erlaubt)
    if fremd:
        raise ConfigError(f"unbekannte Schlüssel in [{abschnitt}]: {', '.join(fremd)}")


def kanal_aus_toml(abschnitt: str, daten: Mapping[str, Any]) -> KanalSpec:
    """
    Kanalspezifikation aus einem [spektren.*]-Abschnitt.

    variante = "ohmic" | "bandpowerlaw" | "markovian" | "kalibriert";
    markovian mit `kappa` oder mit `aus = "ohmic"|"bandpowerlaw"` und deren Parametern.
    """
    werte = dict(daten)
    variante = str(werte.pop("variante", "")).lower()
    if variante not in _VARIANTEN_SCHLUESSEL:
        raise ConfigError(f"[{abschnitt}] variante {variante!r} unbekannt")
    _unbekannt(abschnitt, werte, _VARIANTEN_SCHLUESSEL[variante])
    try:
        match variante:
            case "ohmic":
                return Ohmic(**werte)
            case "bandpowerlaw":
                return BandPowerLaw(**werte)
            case "kalibriert":
                return Kalibriert()
            case _:
                if "kappa" in werte:
                    if len(werte) != 1:
                        raise ConfigError(f"[{abschnitt}] kappa schließt weitere Schlüssel aus")
                    return Markovian(float(werte["kappa"]))
                quelle = werte.pop("aus", None)
                if quelle not in ("ohmic", "bandpowerlaw"):
                    raise ConfigError(f"[{abschnitt}] markovian braucht kappa oder aus = 'ohmic'|'bandpowerlaw'")
                return MarkovAus(Ohmic(**werte) if quelle == "ohmic" else BandPowerLaw(**werte))
    except TypeError as exc:
        raise ConfigError(f"[{abschnitt}] {exc}") from exc
    except MagkonError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[{abschnitt}] {exc}") from exc


def aus_toml(daten: Mapping[str, Any], basis: RunConfig | None = None) -> RunConfig:
    """RunConfig aus bereits geparstem TOML, überlagert auf `basis`."""
    _unbekannt("", daten, frozenset({"lauf", "system", "zerfall", "spektren", "numerik"}))
    lauf = dict(daten.get("lauf", {}))
    _unbekannt("lauf", lauf, _LAUF_SCHLUESSEL)
    if basis is None:
        experiment = lauf.get("experiment")
        if experiment is None:
            raise ConfigError("[lauf] experiment fehlt")
        basis = figur_config(str(experiment), lauf.get("figur"))
    elif "experiment" in lauf and lauf["experiment"] != basis.experiment:
        raise ConfigError(f"[lauf] experiment {lauf['experiment']!r} widerspricht {basis.experiment!r}")

    cfg = basis
    if "ausgabe" in lauf:
        cfg = replace(cfg, output_dir=Path(lauf["ausgabe"]))

    system = dict(daten.get("system", {}))
    _unbekannt("system", system, _SYSTEM_SCHLUESSEL)
    if system:
        p = cfg.params
        try:
            params = SystemParams.from_detunings(
                delta_a=float(system.get("delta_a", p.delta_a)),
                delta_m=float(system.get("delta_m", p.delta_m)),
                g=float(system.get("g", p.g)),
                G=float(system.get("G", p.G)),
                omega_b=float(system.get("omega_b", p.omega_b)),
                omega_d=float(system.get("omega_d", p.omega_d)),
                M=float(system.get("M", p.M)),
                K=float(system.get("K", p.K)),
                Omega_d=float(system.get("Omega_d", p.Omega_d)),
            )
        except MagkonError as exc:
            raise ConfigError(f"[system] {exc}") from exc
        cfg = replace(
            cfg,
            params=params,
            magnon_besetzung=float(system.get("magnon_besetzung", cfg.magnon_besetzung)),
            gtilde=float(system["gtilde"]) if "gtilde" in system else cfg.gtilde,
        )

    zerfall = dict(daten.get("zerfall", {}))
    _unbekannt("zerfall", zerfall, _ZERFALL_SCHLUESSEL)
    if "kappas" in zerfall:
        cfg = replace(cfg, kappas=tuple(float(k) for k in zerfall["kappas"]))
    if "phonon_anteil" in zerfall:
        cfg = replace(cfg, phonon_anteil=float(zerfall["phonon_anteil"]))

    spektren = dict(daten.get("spektren", {}))
    _unbekannt("spektren", spektren, frozenset({"photon", "phonon"}))
    if spektren:
        if set(spektren) != {"photon", "phonon"}:
            raise ConfigError("[spektren] braucht beide Abschnitte photon und phonon")
        szenario = Szenario(
            "konfiguriert",
            kanal_aus_toml("spektren.photon", spektren["photon"]),
            kanal_aus_toml("spektren.phonon", spektren["phonon"]),
        )
        cfg = replace(cfg, szenarien=(szenario,))

    numerik = dict(daten.get("numerik", {}))
    _unbekannt("numerik", numerik, _NUMERIK_SCHLUESSEL)
    if numerik:
        for name in ("dims", "kopplungen", "scan_variablen"):
            if name in numerik:
                numerik[name] = tuple(numerik[name])
        try:
            cfg = replace(cfg, numerik=replace(cfg.numerik, **numerik))
        except TypeError as exc:
            raise ConfigError(f"[numerik] {exc}") from exc
    return cfg


def lese_toml(pfad: Path | str) -> dict[str, Any]:
    """Liest eine TOML-Datei; Syntax- und Lesefehler → ConfigError."""
    pfad = Path(pfad)
    try:
        with pfad.open("rb") as datei:
            daten = tomllib.load(datei)
    except OSError as exc:
        raise ConfigError(f"Konfiguration {pfad} nicht lesbar: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"Konfiguration {pfad} fehlerhaft: {exc}") from exc
    logger.debug("Konfiguration gelesen: %s", pfad)
    return daten


def lade_toml(pfad: Path | str, basis: RunConfig | None = None) -> RunConfig:
    return aus_toml(lese_toml(pfad), basis)


__all__ = [
    "Experiment",
    "EXPERIMENTE",
    "MarkovAus",
    "Kalibriert",
    "KanalSpec",
    "Szenario",
    "NumerikCfg",
    "DEFAULT_NUMERIK",
    "DEFAULT_PARAMS",
    "RunConfig",
    "FIGUREN",
    "STANDARD_FIGUR",
    "figur_config",
    "standard_ausgabe",
    "kanal_aus_toml",
    "aus_toml",
    "lese_toml",
    "lade_toml",
]
