# thi/i/ki/project/magkon/src/core/magkon_main.py
from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path
from typing import Any, Final

from .cfg import RunConfig, aus_toml, figur_config
from .cfg.magkon_config import EXPERIMENTE, lese_toml
from .errors import ConfigError, MagkonError
from .magkon_runs import fuehre_aus

"""
Kommandozeile `magkon`
======================

    magkon <eigs|coupling-scan|lindblad|transfer> [--config DATEI] [--figure N]
           [--out VERZ] [--dt DT] [--dims A,M,B] [--kernel-shift W] [-v|-q]

Vorrang: Abbildungssatz < TOML-Datei < Kommandozeile.
Exit-Codes: 0 Lauf fertig und alle Prüfungen bestanden, 1 Prüfung
fehlgeschlagen oder unerwarteter Fehler, 2 Konfigurations- oder Fachfehler.
"""

logger = logging.getLogger("magkon")

LOG_FORMAT: Final[str] = "[%(name)-22s] %(levelname)-7s %(message)s"
EXIT_OK: Final[int] = 0
EXIT_PRUEFUNG: Final[int] = 1
EXIT_FEHLER: Final[int] = 2


def _dims(text: str) -> tuple[int, int, int]:
    try:
        werte = tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--dims erwartet A,M,B, erhalten: {text!r}") from exc
    if len(werte) != 3:
        raise argparse.ArgumentTypeError(f"--dims erwartet drei Werte, erhalten: {text!r}")
    return werte  # type: ignore[return-value]


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="magkon", description="Magnonengestützte Photon-Phonon-Konversion")
    p.add_argument("experiment", choices=EXPERIMENTE, help="auszuführendes Experiment")
    p.add_argument("--config", type=Path, default=None, help="TOML-Konfiguration")
    p.add_argument("--figure", type=int, default=None, help="Abbildungssatz 3..9 als Basis")
    p.add_argument("--out", type=Path, default=None, help="Ausgabeverzeichnis (sonst $MAGKON_OUT)")
    p.add_argument("--dt", type=float, default=None, help="Zeitschritt des Lösers [1/ω_b]")
    p.add_argument("--dims", type=_dims, default=None, help="Trunkierung A,M,B")
    p.add_argument("--kernel-shift", type=float, default=None, help="ω_ref des Kernbezugssystems [ω_b]")
    laut = p.add_mutually_exclusive_group()
    laut.add_argument("-v", "--verbose", action="store_true", help="DEBUG-Ausgabe")
    laut.add_argument("-q", "--quiet", action="store_true", help="nur Warnungen und Fehler")
    return p


def baue_config(args: argparse.Namespace) -> RunConfig:
    """Abbildungssatz, dann TOML, dann Kommandozeile."""
    daten: dict[str, Any] = lese_toml(args.config) if args.config is not None else {}
    figur = args.figure if args.figure is not None else daten.get("lauf", {}).get("figur")
    cfg = aus_toml(daten, figur_config(args.experiment, figur))
    if args.figure is not None:
        cfg = replace(cfg, figure=args.figure)

    numerik = cfg.numerik
    if args.dt is not None:
        feld = "dt_langevin" if cfg.experiment == "transfer" else "dt_master"
        numerik = replace(numerik, **{feld: args.dt})
    if args.dims is not None:
        numerik = replace(numerik, dims=args.dims)
    if args.kernel_shift is not None:
        numerik = replace(numerik, kernel_shift=args.kernel_shift)
    cfg = replace(cfg, numerik=numerik)
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    args = parser().parse_args(argv)
    stufe = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=stufe, format=LOG_FORMAT)

    try:
        cfg = baue_config(args)
    except ConfigError as exc:
        logger.error("Konfiguration: %s", exc)
        return EXIT_FEHLER
    try:
        manifest = fuehre_aus(cfg)
    except MagkonError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_FEHLER
    except Exception:
        logger.exception("unerwarteter Fehler")
        return EXIT_PRUEFUNG
    if not manifest.alle_bestanden:
        logger.warning("nicht alle Prüfungen bestanden, siehe %s", cfg.output_dir / "manifest.json")
        return EXIT_PRUEFUNG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
