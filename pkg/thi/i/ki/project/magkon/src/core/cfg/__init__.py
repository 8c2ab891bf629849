# core/cfg/__init__.py
from .magkon_config import (
    DEFAULT_NUMERIK,
    DEFAULT_PARAMS,
    FIGUREN,
    Kalibriert,
    MarkovAus,
    NumerikCfg,
    RunConfig,
    Szenario,
    aus_toml,
    figur_config,
    lade_toml,
    standard_ausgabe,
)

__all__ = [
    "DEFAULT_NUMERIK",
    "DEFAULT_PARAMS",
    "FIGUREN",
    "Kalibriert",
    "MarkovAus",
    "NumerikCfg",
    "RunConfig",
    "Szenario",
    "aus_toml",
    "figur_config",
    "lade_toml",
    "standard_ausgabe",
]
