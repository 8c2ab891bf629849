"""
evaluation – Toleranzen und Matrixverträge

ZWECK
-----
Bündelt die Prüf- und Präzisionsfunktionen des Moduls `type_utils`. Stellt
die öffentlichen Schnittstellen des Pakets bereit.

INHALT
------
- `eps`              10**(-n) als NumPy-Skalar
- `TypeUtils`        Namespace mit Matrixprüfungen (Quadrat, Hermitizität,
                     Normierung)

HINWEIS
-------
Dieses Modul exportiert ausschließlich die für Konsumenten vorgesehenen
Funktionen. Interne Hilfsfunktionen bleiben verborgen.
"""

from .type_utils import TypeUtils

# Paket-API: bereitstellen eines funktionsartigen Aliases
eps = TypeUtils.eps

__all__ = ["TypeUtils", "eps"]
