from __future__ import annotations

import csv
import json
import logging
import math
import time
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field, fields, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Final

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from util.evaluation import TypeUtils

from .cfg import FIGUREN, Kalibriert, MarkovAus, RunConfig
from .cfg.magkon_config import KanalSpec, Szenario
from .environments import BandPowerLaw, Markovian, Ohmic, correlation_kernel, markovian_from
from .errors import MagkonError
from .fock_core import FockConfig, basis_state
from .hamiltonians import SystemParams, build_effective, build_linearized, kerr_params, subspace
from .langevin import (
    Kanal,
    gedaempfte_spitze,
    kalibrier_kappa,
    noise_stats,
    rabi_period,
    solve_dyson,
    transfer_fidelity,
)
from .lindblad import (
    DecayRates,
    DensityMatrix,
    Richtung,
    collapse_effective,
    collapse_full,
    evolve_master,
    period_peaks,
)
from .perturbation import crossing_shift, gtilde, scan_crossing

"""
Experimentläufe der CLI
=======================

Zweck
- run_eigs, run_coupling_scan, run_lindblad, run_transfer: je ein Lauf
  schreibt CSV-Daten (12 signifikante Stellen, Kopfzeile) in `output_dir`.
- `fuehre_aus` misst die Laufzeit und schreibt immer genau ein Manifest
  (`manifest.json`) mit Konfigurationsecho, Prüfergebnissen und ggf. Fehler.

Hinweise
- Prüfungen mit Literaturschranken sind an die Abbildungssätze gebunden
  (cfg.figure); freie Konfigurationen prüfen nur Solver-Invarianten.
"""

logger = logging.getLogger(__name__)

VERSION: Final[str] = "0.01.000.00"
MANIFEST: Final[str] = "manifest.json"
STELLEN: Final[int] = 12
SUMMENREGEL_SCHRANKE: Final[float] = 1e-3
SPURDRIFT_SCHRANKE: Final[float] = 1e-6
KALIBRIER_TOLERANZ: Final[float] = 0.02


# ====================== ERGEBNISTYPEN ======================

@dataclass(slots=True, frozen=True)
class Check:
    name: str
    wert: float
    schranke: str
    bestanden: bool


@dataclass(slots=True)
class RunErgebnis:
    dateien: list[Path] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    kennzahlen: dict[str, Any] = field(default_factory=dict)

    def pruefe(self, name: str, wert: float, *, hoechstens: float | None = None, mindestens: float | None = None) -> None:
        """Vergleicht `wert` mit den Schranken; Verstöße werden als WARNING protokolliert."""
        teile = []
        ok = math.isfinite(wert)
        if mindestens is not None:
            teile.append(f"≥ {mindestens:g}")
            ok = ok and wert >= mindestens
        if hoechstens is not None:
            teile.append(f"≤ {hoechstens:g}")
            ok = ok and wert <= hoechstens
        self.checks.append(Check(name, float(wert), ", ".join(teile), ok))
        if not ok:
            logger.warning("Prüfung %s fehlgeschlagen: %.6g (%s)", name, wert, ", ".join(teile))


@dataclass(slots=True, frozen=True)
class RunManifest:
    experiment: str
    version: str
    config: Mapping[str, Any]
    dauer_s: float
    checks: tuple[Check, ...]
    dateien: tuple[str, ...]
    kennzahlen: Mapping[str, Any]
    fehler: str | None = None

    @property
    def alle_bestanden(self) -> bool:
        return self.fehler is None and all(c.bestanden for c in self.checks)

    def als_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "version": self.version,
            "dauer_s": round(self.dauer_s, 3),
            "bestanden": self.alle_bestanden,
            "fehler": self.fehler,
            "checks": [_echo(c) for c in self.checks],
            "dateien": list(self.dateien),
            "kennzahlen": _echo(self.kennzahlen),
            "config": self.config,
        }


def _echo(obj: Any) -> Any:
    """JSON-taugliches Abbild; Datenklassen mit Typname."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return {"typ": type(obj).__name__, **{f.name: _echo(getattr(obj, f.name)) for f in fields(obj)}}
    if isinstance(obj, Mapping):
        return {str(k): _echo(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_echo(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


# ====================== AUSGABE ======================

def _zahl(wert: float | str) -> str:
    return wert if isinstance(wert, str) else f"{float(wert):.{STELLEN}g}"


def schreibe_csv(pfad: Path, kopf: Sequence[str], zeilen: Iterable[Sequence[float | str]]) -> Path:
    pfad.parent.mkdir(parents=True, exist_ok=True)
    with pfad.open("w", newline="", encoding="utf-8") as datei:
        writer = csv.writer(datei, lineterminator="\n")
        writer.writerow(kopf)
        for zeile in zeilen:
            writer.writerow([_zahl(w) for w in zeile])
    logger.debug("CSV geschrieben: %s", pfad)
    return pfad


def _spalten(t: NDArray[np.float64], spalten: Sequence[NDArray[np.float64]]) -> Iterable[list[float]]:
    matrix = np.column_stack([t, *spalten])
    return (list(zeile) for zeile in matrix)


# ====================== HILFEN ======================

def wirksame_params(cfg: RunConfig) -> SystemParams:
    """Systemparameter mit Kerr-Verschiebung, falls K ≠ 0 und ⟨m†m⟩ > 0."""
    if cfg.params.K != 0.0 and cfg.magnon_besetzung > 0.0:
        return kerr_params(cfg.params, cfg.magnon_besetzung)
    return cfg.params


def _relativ(numerisch: float, analytisch: float) -> float:
    return abs(numerisch - analytisch) / abs(analytisch) if analytisch != 0.0 else abs(numerisch)


def _spitze(spitzen: Sequence[float], i: int) -> float:
    """i-te Periodenspitze; NaN lässt die Prüfung scheitern, wenn Periode i fehlt."""
    return spitzen[i] if i < len(spitzen) else math.nan


def _hoechste(spitzen: Sequence[float]) -> float:
    return max(spitzen, default=math.nan)


def zeitgitter(perioden: int, periode: float, schritt: float) -> NDArray[np.float64]:
    """Gleichmäßiges Gitter ab 0, dessen letzter Punkt perioden·periode erreicht oder überschreitet."""
    schritte = math.ceil(perioden * periode / schritt - 1e-9)
    return schritt * np.arange(schritte + 1, dtype=np.float64)


def _scan_gitter(cfg: RunConfig) -> NDArray[np.float64]:
    n = cfg.numerik
    return np.linspace(n.scan_links, n.scan_rechts, n.scan_punkte)


# ====================== LÄUFE ======================

def run_eigs(cfg: RunConfig) -> RunErgebnis:
    """Eigenwerte über dem Δ_a-Gitter und Kreuzungsannotation (δ, |G̃|)."""
    ergebnis = RunErgebnis()
    params = wirksame_params(cfg)
    config = FockConfig(cfg.numerik.dims)
    gitter = _scan_gitter(cfg)
    spec = subspace(cfg.numerik.exzitonen)

    spektren = []
    defekt = 0.0
    for delta_a in gitter:
        h = build_linearized(params.with_delta_a(float(delta_a)), config)
        defekt = max(defekt, TypeUtils.hermitizitaet_defekt(h.entries))
        spektren.append(linalg.eigvalsh(h.entries))
    kopf = ["delta_a_over_wb", *(f"E_{i + 1}" for i in range(config.total_dim))]
    ergebnis.dateien.append(schreibe_csv(cfg.output_dir / "eigs.csv", kopf, _spalten(gitter, np.array(spektren).T)))
    ergebnis.pruefe("hermitesch", defekt, hoechstens=1e-12)

    kreuzung = scan_crossing(params, gitter, spec, config, xtol=cfg.numerik.xtol)
    delta_ana = crossing_shift(params)
    gt_ana = abs(gtilde(params))
    ergebnis.dateien.append(schreibe_csv(
        cfg.output_dir / "eigs_annotation.csv",
        ["n_exzitonen", "delta_numeric", "delta_analytic", "gtilde_numeric", "gtilde_analytic", "halbe_spreizung"],
        [[spec.excitations, kreuzung.delta_num, delta_ana, kreuzung.gtilde_num, gt_ana, kreuzung.halbe_spreizung]],
    ))
    ergebnis.kennzahlen.update(
        delta_numeric=kreuzung.delta_num, delta_analytic=delta_ana,
        gtilde_numeric=kreuzung.gtilde_num, gtilde_analytic=gt_ana,
        halbe_spreizung=kreuzung.halbe_spreizung, zweige=list(kreuzung.branch_indices),
    )
    if cfg.figure in (3, 4):
        ergebnis.pruefe("gtilde_rel", _relativ(kreuzung.gtilde_num, gt_ana), hoechstens=0.05)
        ergebnis.pruefe("delta_rel", _relativ(kreuzung.delta_num, delta_ana), hoechstens=0.10)
    return ergebnis


def run_coupling_scan(cfg: RunConfig) -> RunErgebnis:
    """Analytisches gegen numerisches G̃ und δ über g bzw. G."""
    ergebnis = RunErgebnis()
    basis = wirksame_params(cfg)
    config = FockConfig(cfg.numerik.dims)
    gitter = _scan_gitter(cfg)
    zeilen = []
    for variable in cfg.numerik.scan_variablen:
        for wert in cfg.numerik.kopplungen:
            params = basis.with_couplings(g=wert) if variable == "g" else basis.with_couplings(G=wert)
            kreuzung = scan_crossing(params, gitter, subspace(1), config, xtol=cfg.numerik.xtol)
            gt_ana, delta_ana = abs(gtilde(params)), crossing_shift(params)
            zeilen.append([variable, wert, gt_ana, kreuzung.gtilde_num, delta_ana, kreuzung.delta_num])
            abw = _relativ(kreuzung.gtilde_num, gt_ana)
            if cfg.figure == 5:
                if wert <= 0.1 + 1e-12:
                    ergebnis.pruefe(f"gtilde_rel[{variable}={wert:g}]", abw, hoechstens=0.05)
                    ergebnis.pruefe(
                        f"delta_rel[{variable}={wert:g}]", _relativ(kreuzung.delta_num, delta_ana), hoechstens=0.10
                    )
                else:
                    ergebnis.pruefe(f"gtilde_rel[{variable}={wert:g}]", abw, hoechstens=0.30)
    ergebnis.dateien.append(schreibe_csv(
        cfg.output_dir / "coupling_scan.csv",
        ["variable", "g_or_G", "gtilde_analytic", "gtilde_numeric", "delta_analytic", "delta_numeric"],
        zeilen,
    ))
    ergebnis.kennzahlen["punkte"] = len(zeilen)
    return ergebnis


def run_lindblad(cfg: RunConfig) -> RunErgebnis:
    """Zustandsfidelität von Voll- und effektivem Modell je κ-Szenario."""
    ergebnis = RunErgebnis()
    n = cfg.numerik
    params = wirksame_params(cfg)
    resonant = params.with_delta_a(params.omega_b + crossing_shift(params))
    gt = gtilde(resonant)
    periode = rabi_period(gt)
    t = zeitgitter(n.perioden, periode, n.abtastung)
    richtung = Richtung(n.richtung)

    config = FockConfig(n.dims)
    config_ab = FockConfig((n.dims[0], n.dims[2]))
    start, ziel = richtung.labels(3)
    start_ab, ziel_ab = richtung.labels(2)
    h_voll = build_linearized(resonant, config)
    h_eff = build_effective(gt, config_ab)
    rho_voll = DensityMatrix.pure(basis_state(start, config))
    rho_eff = DensityMatrix.pure(basis_state(start_ab, config_ab))

    spalten, kopf = [], ["t_omega_b"]
    for kappa in cfg.kappas:
        rates = DecayRates.uniform(kappa, cfg.phonon_anteil)
        voll = evolve_master(h_voll, collapse_full(config, rates), rho_voll, t, dt=n.dt_master)
        eff = evolve_master(h_eff, collapse_effective(config_ab, rates), rho_eff, t, dt=n.dt_master)
        f_voll = voll.fidelities(basis_state(ziel, config))
        f_eff = eff.fidelities(basis_state(ziel_ab, config_ab))
        spalten += [f_voll, f_eff]
        kopf += [f"F_full_kappa={kappa:g}", f"F_eff_kappa={kappa:g}"]

        spitzen_voll = period_peaks(t, f_voll, periode)
        spitzen_eff = period_peaks(t, f_eff, periode)
        ergebnis.kennzahlen[f"kappa={kappa:g}"] = {"spitzen_voll": spitzen_voll, "spitzen_eff": spitzen_eff}
        ergebnis.pruefe(
            f"spurdrift[kappa={kappa:g}]", max(voll.max_trace_drift, eff.max_trace_drift), hoechstens=SPURDRIFT_SCHRANKE
        )
        if cfg.figure != 6:
            continue
        if kappa == 0.0:
            ergebnis.pruefe("spitze_voll[kappa=0]", _hoechste(spitzen_voll), mindestens=0.97)
            erste = t <= periode
            ergebnis.pruefe("abstand_voll_eff[kappa=0]", float(np.max(np.abs(f_voll - f_eff)[erste])), hoechstens=0.05)
        elif math.isclose(kappa, 1e-3):
            ergebnis.pruefe("spitze_1[kappa=1e-3]", _spitze(spitzen_voll, 0), mindestens=0.90)
            ergebnis.pruefe("spitze_3[kappa=1e-3]", _spitze(spitzen_voll, 2), mindestens=0.82, hoechstens=0.88)

    ergebnis.kennzahlen.update(delta=resonant.delta_a - resonant.omega_b, gtilde=gt, periode=periode)
    ergebnis.dateien.append(schreibe_csv(cfg.output_dir / "lindblad.csv", kopf, _spalten(t, spalten)))
    return ergebnis


@dataclass(slots=True, frozen=True)
class _Kurve:
    fidelitaet: NDArray[np.float64]
    residuum: NDArray[np.float64]
    spitzen: tuple[float, ...]


def _kanal(spec: KanalSpec, t: NDArray[np.float64], gt: float, cfg: RunConfig) -> Kanal:
    match spec:
        case Ohmic() | BandPowerLaw():
            return correlation_kernel(spec, t, omega_ref=cfg.numerik.kernel_shift)
        case Markovian():
            return spec
        case MarkovAus(quelle=quelle):
            return markovian_from(quelle, cfg.params.omega_b, regel=cfg.numerik.rate_regel)
        case Kalibriert():
            return Markovian(kalibrier_kappa(gt))
    raise MagkonError(f"unbekannte Kanalspezifikation {spec!r}")


def _transfer_kurve(szenario: Szenario, t: NDArray[np.float64], gt: float, periode: float, cfg: RunConfig) -> _Kurve:
    kanal_a = _kanal(szenario.photon, t, gt, cfg)
    kanal_b = _kanal(szenario.phonon, t, gt, cfg)
    traj = solve_dyson(gt, kanal_a, kanal_b, t)
    stats = noise_stats(
        traj, methode=cfg.numerik.rauschmethode, knoten=cfg.numerik.frequenz_knoten,  # type: ignore[arg-type]
    )
    fidelitaet = transfer_fidelity(traj)
    return _Kurve(fidelitaet, stats.sum_rule_residual, period_peaks(t, fidelitaet, periode))


def _figur_checks(figure: int | None, kurven: Mapping[str, _Kurve], gt: float, ergebnis: RunErgebnis) -> None:
    if figure not in FIGUREN or set(kurven) != {s.name for s in FIGUREN[figure].szenarien}:
        logger.info("Szenarien weichen vom Abbildungssatz ab; Literaturprüfungen entfallen")
        return
    match figure:
        case 7:
            ref = kurven["strukturiert"]
            ergebnis.pruefe("spitze_1[strukturiert]", _spitze(ref.spitzen, 0), mindestens=0.96, hoechstens=1.0)
            ergebnis.pruefe("spitze_3[strukturiert]", _spitze(ref.spitzen, 2), mindestens=0.88)
            ergebnis.pruefe(
                "abstand[markov_phonon]",
                float(np.max(np.abs(kurven["markov_phonon"].fidelitaet - ref.fidelitaet))), hoechstens=0.02,
            )
            ergebnis.pruefe(
                "ordnung[markov_photon]",
                _hoechste(kurven["markov_photon"].spitzen) - _hoechste(ref.spitzen), hoechstens=0.0,
            )
            kalibriert = _hoechste(kurven["kalibriert"].spitzen)
            erwartet = gedaempfte_spitze(gt, kalibrier_kappa(gt))
            ergebnis.pruefe(
                "spitze[kalibriert]", kalibriert,
                mindestens=erwartet - KALIBRIER_TOLERANZ, hoechstens=erwartet + KALIBRIER_TOLERANZ,
            )
            ergebnis.pruefe(
                "ordnung[kalibriert]", kalibriert - _hoechste(kurven["markov_photon"].spitzen), hoechstens=0.0,
            )
        case 8:
            sub = kurven["s=0.5"].spitzen
            ergebnis.pruefe("spitze_1[s=0.5]", _spitze(sub, 0), mindestens=0.97)
            ergebnis.pruefe("spitze_3[s=0.5]", _spitze(sub, 2), mindestens=0.87)
            erste = [_spitze(kurven[f"s={s:g}"].spitzen, 0) for s in (0.5, 1.0, 2.0)]
            ergebnis.pruefe("ordnung[s]", max(erste[1] - erste[0], erste[2] - erste[1]), hoechstens=0.0)
            ergebnis.pruefe("spitze_3[s=2]", _spitze(kurven["s=2"].spitzen, 2), hoechstens=0.85)
        case 9:
            dritte = [_spitze(kurven[f"k={k:g}"].spitzen, 2) for k in (-0.5, -1.0, -1.5)]
            ergebnis.pruefe("spreizung[k]", max(dritte) - min(dritte), hoechstens=0.05)
            ergebnis.pruefe("ordnung[k]", max(dritte[1] - dritte[0], dritte[2] - dritte[1]), hoechstens=0.0)
        case _:
            pass


def run_transfer(cfg: RunConfig) -> RunErgebnis:
    """Transferfidelität |U21| und Summenregel je Umgebungsszenario."""
    ergebnis = RunErgebnis()
    n = cfg.numerik
    gt = cfg.gtilde if cfg.gtilde is not None else gtilde(wirksame_params(cfg))
    periode = rabi_period(gt)
    t = zeitgitter(n.perioden, periode, n.dt_langevin)
    schritte = t.size - 1

    kurven: dict[str, _Kurve] = {}
    for szenario in cfg.szenarien:
        logger.info("Szenario %s: %d Schritte", szenario.name, schritte)
        kurve = _transfer_kurve(szenario, t, gt, periode, cfg)
        kurven[szenario.name] = kurve
        residuum = float(np.max(np.abs(kurve.residuum)))
        ergebnis.pruefe(f"summenregel[{szenario.name}]", residuum, hoechstens=SUMMENREGEL_SCHRANKE)
        ergebnis.kennzahlen[szenario.name] = {"spitzen": kurve.spitzen, "max_residuum": residuum}
    _figur_checks(cfg.figure, kurven, gt, ergebnis)

    kopf, spalten = ["t_omega_b"], []
    for name, kurve in kurven.items():
        kopf += [f"F_{name}", f"residuum_{name}"]
        spalten += [kurve.fidelitaet, kurve.residuum]
    ergebnis.kennzahlen.update(gtilde=gt, periode=periode)
    ergebnis.dateien.append(schreibe_csv(cfg.output_dir / "transfer.csv", kopf, _spalten(t, spalten)))
    return ergebnis


LAEUFE: Final[Mapping[str, Callable[[RunConfig], RunErgebnis]]] = {
    "eigs": run_eigs,
    "coupling-scan": run_coupling_scan,
    "lindblad": run_lindblad,
    "transfer": run_transfer,
}


def schreibe_manifest(manifest: RunManifest, output_dir: Path) -> Path:
    output_dir.mkdir(parents=True, exist_ok=True)
    pfad = output_dir / MANIFEST
    pfad.write_text(json.dumps(manifest.als_dict(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return pfad


def fuehre_aus(cfg: RunConfig) -> RunManifest:
    """
    Validiert, führt den Lauf aus und schreibt das Manifest.

    Fehler:
        Jede Ausnahme wird im Manifest vermerkt und danach weitergereicht.
    """
    start = time.perf_counter()
    ergebnis = RunErgebnis()
    fehler: Exception | None = None
    logger.info("Lauf %s (Abbildung %s) → %s", cfg.experiment, cfg.figure, cfg.output_dir)
    try:
        cfg.validiere()
        ergebnis = LAEUFE[cfg.experiment](cfg)
    except Exception as exc:
        fehler = exc
    dauer = time.perf_counter() - start

    manifest = RunManifest(
        experiment=cfg.experiment,
        version=VERSION,
        config=_echo(cfg),
        dauer_s=dauer,
        checks=tuple(ergebnis.checks),
        dateien=tuple(p.name for p in ergebnis.dateien),
        kennzahlen=ergebnis.kennzahlen,
        fehler=None if fehler is None else f"{type(fehler).__name__}: {fehler}",
    )
    schreibe_manifest(manifest, cfg.output_dir)
    logger.info(
        "Lauf %s beendet nach %.2f s: %d/%d Prüfungen bestanden",
        cfg.experiment, dauer, sum(c.bestanden for c in manifest.checks), len(manifest.checks),
    )
    if fehler is not None:
        raise fehler
    return manifest


__all__: Final[tuple[str, ...]] = (
    "VERSION",
    "Check",
    "RunErgebnis",
    "RunManifest",
    "schreibe_csv",
    "schreibe_manifest",
    "wirksame_params",
    "zeitgitter",
    "run_eigs",
    "run_coupling_scan",
    "run_lindblad",
    "run_transfer",
    "LAEUFE",
    "fuehre_aus",
)
