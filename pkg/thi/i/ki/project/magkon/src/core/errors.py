from __future__ import annotations

from typing import Final

"""
Fehlerklassen des magkon-Projekts
=================================

Zweck
- Einheitliche Basisklasse `MagkonError` für alle fachlichen Fehler.
- Jede Klasse erbt zusätzlich von der nächstliegenden eingebauten Ausnahme,
  damit Aufrufer wahlweise `ValueError`, `RuntimeError` … abfangen können.

Hinweise
- Meldungen sind deutsch und nennen den auslösenden Wert.
- Die CLI bildet `MagkonError` auf Exit-Code 2 ab.
"""


class MagkonError(Exception):
    """Basisklasse aller fachlichen Fehler."""


class InvalidDimensionError(MagkonError, ValueError):
    """Trunkierungsdimension oder Matrixform unzulässig."""


class ModeIndexError(MagkonError, IndexError):
    """Modenindex außerhalb von config.dims."""


class ContractViolationError(MagkonError, ValueError):
    """Vertragsverletzung (Hermitizität, Spur, Positivität, Norm)."""


class InvalidArgumentError(MagkonError, ValueError):
    """Argument außerhalb des zulässigen Bereichs."""


class CapacityError(MagkonError, ValueError):
    """Dichte Speicherung überschreitet die konfigurierte Obergrenze."""


class DegenerateDetuningError(MagkonError, ZeroDivisionError):
    """Verschwindender Nenner in den Störungsformeln."""


class RegimeError(MagkonError, ValueError):
    """Störungstheoretischer Gültigkeitsbereich verlassen (nur strict)."""


class BracketError(MagkonError, RuntimeError):
    """Kein Lückenminimum im Inneren des Scan-Gitters."""


class IdentificationError(MagkonError, RuntimeError):
    """Zweigverfolgung: Überlapp mit dem Unterraum < 0.5."""


class StepSizeError(MagkonError, RuntimeError):
    """Spurdrift über Toleranz; Schrittweite verkleinern."""


class DivergenceError(MagkonError, RuntimeError):
    """Volterra-Löser instabil (|U_ij| > Schranke)."""


class GridError(MagkonError, ValueError):
    """Zeitgitter passen nicht zusammen oder sind nicht gleichmäßig."""


class VariantError(MagkonError, TypeError):
    """Operation für diese Spektralvariante nicht definiert."""


class DomainError(MagkonError, ValueError):
    """Argument außerhalb des Definitionsbereichs (z.B. ω < 0)."""


class ConfigError(MagkonError, ValueError):
    """Konfigurationsdatei oder RunConfig ungültig."""


__all__: Final[tuple[str, ...]] = (
    "MagkonError",
    "InvalidDimensionError",
    "ModeIndexError",
    "ContractViolationError",
    "InvalidArgumentError",
    "CapacityError",
    "DegenerateDetuningError",
    "RegimeError",
    "BracketError",
    "IdentificationError",
    "StepSizeError",
    "DivergenceError",
    "GridError",
    "VariantError",
    "DomainError",
    "ConfigError",
)
