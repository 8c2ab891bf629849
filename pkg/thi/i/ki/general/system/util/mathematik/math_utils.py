# math_utils.py
from __future__ import annotations

from collections.abc import Callable, Sequence
from functools import reduce
from typing import Final, final

import numpy as np
from numpy.typing import NDArray
from scipy import optimize
from scipy.special import roots_legendre

__all__: Final[tuple[str, ...]] = ("MathFunctions",)

@final
class MathFunctions:
    """
    Sammlung projektweit genutzter Numerik-Bausteine für dichte
    Operatoren, Quadraturen und eindimensionale Minimierung.

    Alle Methoden sind rein (keine Seiteneffekte) und deterministisch.
    """

    __slots__ = ()

    def __new__(cls, *_, **__):  # pragma: no cover
        raise TypeError("MathFunctions ist ein reiner Namespace und nicht instanziierbar")

    @staticmethod
    def kron_kette(faktoren: Sequence[NDArray[np.complexfloating]]) -> NDArray[np.complex128]:
        """
        Kronecker-Produkt F_0 ⊗ F_1 ⊗ … ⊗ F_{n-1} in der gegebenen Reihenfolge.

        Beispiele:
            >>> MathFunctions.kron_kette([np.eye(2), np.eye(3)]).shape
            (6, 6)
        """
        if len(faktoren) == 0:
            raise ValueError("mindestens ein Faktor erforderlich")
        return np.asarray(reduce(np.kron, faktoren), dtype=np.complex128)

    @staticmethod
    def spin_x(dim: int) -> NDArray[np.float64]:
        """
        S_x für Spin S = (dim − 1)/2 in der Basis m = S, S−1, …, −S.

        Nebendiagonale: ½·√(S(S+1) − m(m−1)) zwischen m und m−1.
        """
        if dim < 1:
            raise ValueError("dim muss ≥ 1 sein")
        spin: float = (dim - 1) / 2.0
        m = spin - np.arange(dim - 1, dtype=np.float64)
        neben = 0.5 * np.sqrt(spin * (spin + 1.0) - m * (m - 1.0))
        return np.diag(neben, 1) + np.diag(neben, -1)

    @staticmethod
    def trapez_kumulativ(werte: NDArray, dt: float, axis: int = 0) -> NDArray:
        """
        Kumulatives Trapezintegral ∫_0^{t_n} auf gleichmäßigem Gitter,
        Startwert 0 (gleiche Länge wie `werte`).
        """
        w = np.moveaxis(np.asarray(werte), axis, 0)
        result = np.zeros_like(w, dtype=np.result_type(w, np.float64))
        if w.shape[0] > 1:
            result[1:] = np.cumsum(0.5 * dt * (w[1:] + w[:-1]), axis=0)
        return np.moveaxis(result, 0, axis)

    @staticmethod
    def gauss_legendre_panele(
            grenzen: NDArray[np.float64] | Sequence[float],
            knoten_pro_panel: int,
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """
        Zusammengesetzte Gauß-Legendre-Regel über die Panele
        [grenzen[i], grenzen[i+1]].

        Returns:
            (knoten, gewichte), aufsteigend sortiert.
        """
        g = np.asarray(grenzen, dtype=np.float64)
        if g.ndim != 1 or g.size < 2 or np.any(np.diff(g) <= 0.0):
            raise ValueError("Panelgrenzen müssen streng aufsteigend sein (≥ 2 Werte)")
        if knoten_pro_panel < 1:
            raise ValueError("knoten_pro_panel muss ≥ 1 sein")

        x, w = roots_legendre(knoten_pro_panel)
        mitte = 0.5 * (g[1:] + g[:-1])
        halb = 0.5 * (g[1:] - g[:-1])
        knoten = (mitte[:, None] + halb[:, None] * x[None, :]).ravel()
        gewichte = (halb[:, None] * w[None, :]).ravel()
        return knoten, gewichte

    @staticmethod
    def gauss_legendre_gleichmaessig(
            a: float, b: float, knoten: int, knoten_pro_panel: int = 20
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Zusammengesetzte Regel mit ⌈knoten/knoten_pro_panel⌉ gleich breiten Panelen."""
        panele = max(1, -(-knoten // knoten_pro_panel))
        return MathFunctions.gauss_legendre_panele(np.linspace(a, b, panele + 1), knoten_pro_panel)

    @staticmethod
    def gauss_legendre_geometrisch(
            anker: float,
            ende: float,
            panele: int,
            knoten_pro_panel: int = 20,
            erste_breite: float = 1e-3,
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """
        Panele mit geometrisch wachsender Breite ab `anker` in Richtung `ende`
        (erste Breite `erste_breite`), z.B. zur Verdichtung um eine Resonanz.
        """
        spanne: float = abs(ende - anker)
        if spanne <= 0.0 or panele < 1:
            raise ValueError("leeres Intervall oder panele < 1")
        if panele == 1:
            abstaende = np.array([0.0, spanne])
        else:
            erste: float = min(erste_breite, spanne / (panele + 1))
            abstaende = np.concatenate(([0.0], np.geomspace(erste, spanne, panele)))
        grenzen = anker + np.sign(ende - anker) * abstaende
        return MathFunctions.gauss_legendre_panele(np.sort(grenzen), knoten_pro_panel)

    @staticmethod
    def golden_minimum(
            funktion: Callable[[float], float],
            links: float,
            mitte: float,
            rechts: float,
            xtol: float = 1e-6,
    ) -> tuple[float, float]:
        """
        Goldener Schnitt auf dem Klammertripel links < mitte < rechts mit
        f(mitte) ≤ min(f(links), f(rechts)).

        Bricht ab, sobald das Klammerintervall kürzer als `xtol` ist
        (absolut; `tol` von scipy ist relativ zu |x1| + |x2|).

        Returns:
            (x_min, f(x_min)).
        """
        if not (links < mitte < rechts):
            raise ValueError("Klammer muss links < mitte < rechts erfüllen")
        skala: float = max(abs(mitte), 1.0)
        ergebnis = optimize.minimize_scalar(
            funktion,
            bracket=(links, mitte, rechts),
            method="golden",
            tol=xtol / (2.0 * skala),
        )
        return float(ergebnis.x), float(ergebnis.fun)
