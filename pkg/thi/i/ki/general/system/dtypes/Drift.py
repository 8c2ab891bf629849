from dataclasses import dataclass, field
from typing import Callable

@dataclass(slots=True)
class DriftCheck:
    """
    Driftprüfung für Zeitschrittverfahren.

    Zweck:
        Bei Aufruf liefert das Objekt (Callable) True, solange die gemessene
        Größe innerhalb der Toleranz um den Referenzwert liegt. Die größte
        beobachtete Abweichung wird mitgeführt.

    Parameter:
        messung: Funktion, die den aktuellen Messwert liefert (z.B.: Spur ρ).
        toleranz: zulässige Abweichung |messung() − referenz|.
        referenz: Sollwert; None → erster Messwert bei Initialisierung.
        einseitig: True → nur Überschreitung (messung() > referenz + toleranz)
                   zählt, z.B. für Schranken |U_ij| ≤ 1.

    Rückgabe (__call__):
        True = „im Rahmen“, False = Toleranz verletzt.
    """

    messung: Callable[[], float]
    toleranz: float
    referenz: float | None = None
    einseitig: bool = False
    max_abweichung: float = field(init=False, default=0.0)
    letzter_wert: float = field(init=False, default=0.0)

    def __post_init__(self) -> None:
        """Setzt die Referenz aus der ersten Messung, falls nicht vorgegeben."""
        if self.toleranz < 0.0:
            raise ValueError("toleranz darf nicht negativ sein")
        self.letzter_wert = self.messung()
        if self.referenz is None:
            self.referenz = self.letzter_wert

    def __call__(self) -> bool:
        """
        Misst erneut und prüft die Abweichung gegen `toleranz`.
        """
        wert = self.messung()
        self.letzter_wert = wert
        abweichung = (wert - self.referenz) if self.einseitig else abs(wert - self.referenz)
        self.max_abweichung = max(self.max_abweichung, abweichung)
        return abweichung <= self.toleranz
