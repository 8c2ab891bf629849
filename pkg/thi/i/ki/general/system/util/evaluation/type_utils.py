from __future__ import annotations
from typing import overload, final
import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = ["TypeUtils"]

@final
class TypeUtils:
    """
    Numerik‑Utilities
    =================

    Zweck
    -----
    Präzisionsgerechte Hilfsfunktionen und Vertragsprüfungen für dichte,
    komplexe Matrizen (Operatoren, Dichtematrizen).

    Gestaltungsregeln
    -----------------
    - Reiner Namespace: keine Instanzen, nur `@staticmethod`‑Methoden.
    - Rückgaben sind NumPy‑Skalare bzw. ‑Arrays mit wohldefiniertem Dtype.
    - Überladungen sichern die statische Typprüfung.
    - Prüfungen werfen `ValueError`; projektspezifische Fehlerklassen werden
      von den Aufrufern ergänzt.
    """

    __slots__ = ()

    def __new__(cls, *args, **kwargs):  # pragma: no cover
        raise TypeError("TypeUtils ist ein reiner Namespace und nicht instanziierbar")

    # ── Überladungen für präzise Rückgabetypen ────────────────────────────────
    @overload
    @staticmethod
    def eps(exp10: int, *, dtype: type[np.float32]) -> np.float32: ...

    @overload
    @staticmethod
    def eps(exp10: int, *, dtype: type[np.float64] = ...) -> np.float64: ...

    @staticmethod
    def eps(exp10: int, *, dtype: type[np.floating] = np.float64) -> np.floating:
        """
        Liefert 10**(-n) als NumPy‑Skalar.

        Parameter
        ---------
        exp10 : int
            Basis‑10‑Exponent `n` (n ≥ 0).
        dtype : type[np.floating], optional
            Ziel‑Dtype; Standard np.float64, da alle Toleranzen der
            Operatorprüfungen unterhalb der float32‑Auflösung liegen.

        Ausnahmen
        ---------
        TypeError
            Falls `exp10` kein int ist.
        ValueError
            Falls `exp10 < 0`.
        """
        if isinstance(exp10, bool) or not isinstance(exp10, int):
            raise TypeError("exp10 muss int sein")
        if exp10 < 0:
            raise ValueError("exp10 darf nicht negativ sein")
        return dtype(10.0 ** (-exp10))

    @staticmethod
    def als_komplexmatrix(werte: ArrayLike) -> NDArray[np.complex128]:
        """
        Wandelt `werte` in eine quadratische complex128‑Matrix (Kopie).

        Ausnahmen
        ---------
        ValueError
            Falls das Array nicht zweidimensional und quadratisch ist oder
            nicht‑endliche Einträge enthält.
        """
        matrix = np.array(werte, dtype=np.complex128, copy=True)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"quadratische Matrix erwartet, erhalten: Form {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("Matrix enthält NaN/±Inf")
        return matrix

    @staticmethod
    def hermitizitaet_defekt(matrix: NDArray[np.complexfloating]) -> float:
        """max |A − A†| (absolut, in den Einheiten der Einträge)."""
        result: float = 0.0
        if matrix.size:
            result = float(np.max(np.abs(matrix - matrix.conj().T)))
        return result

    @staticmethod
    def ist_hermitesch(matrix: NDArray[np.complexfloating], exp10: int = 12) -> bool:
        """
        Prüft max |A − A†| ≤ 10**(-exp10).

        Beispiele
        ---------
            >>> TypeUtils.ist_hermitesch(np.array([[0, 1], [1, 0]]))
            True
            >>> TypeUtils.ist_hermitesch(np.array([[0, 1], [0, 0]]))
            False
        """
        return TypeUtils.hermitizitaet_defekt(matrix) <= float(TypeUtils.eps(exp10))

    @staticmethod
    def normiert(vektor: ArrayLike) -> NDArray[np.complex128]:
        """
        Normiert einen komplexen Vektor auf Länge 1.

        Ausnahmen
        ---------
        ValueError
            Falls der Vektor nicht eindimensional ist oder Norm 0 hat.
        """
        v = np.array(vektor, dtype=np.complex128, copy=True)
        if v.ndim != 1:
            raise ValueError(f"eindimensionaler Vektor erwartet, erhalten: Form {v.shape}")
        norm = float(np.linalg.norm(v))
        if norm == 0.0 or not np.isfinite(norm):
            raise ValueError("Nullvektor lässt sich nicht normieren")
        return v / norm
