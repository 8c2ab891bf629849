from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Final

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from util.evaluation import TypeUtils
from util.mathematik import MathFunctions

from .errors import ContractViolationError, InvalidDimensionError, ModeIndexError

"""
Fock-Raum-Grundlagen: Leiteroperatoren, Tensoreinbettung, hermitesche Eigenzerlegung.

Inhalt
- Typen: FockConfig, OperatorMatrix, StateVector
- Operationen: annihilation, embed, hermitian_eigs
- Hilfen: number_operator, basis_state, commutator

Konventionen
- Modenreihenfolge fest (Photon a, Magnon m, Phonon b); Zwei-Moden-Räume
  des effektiven Modells in der Reihenfolge (Photon a, Phonon b).
- Alle Energien in Einheiten von ω_b.
- Dichte Speicherung; Arrays werden nach Konstruktion schreibgeschützt.
"""

logger = logging.getLogger(__name__)

PHOTON: Final[int] = 0
MAGNON: Final[int] = 1
PHONON: Final[int] = 2

HERMITE_EXP10: Final[int] = 12     # max |A − A†| ≤ 1e-12
NORM_EXP10: Final[int] = 10        # | ‖ψ‖ − 1 | ≤ 1e-10

DEFAULT_DIMS: Final[tuple[int, int, int]] = (4, 4, 4)


def _eingefroren(matrix: NDArray) -> NDArray:
    matrix.flags.writeable = False
    return matrix


# ====================== TYPEN ======================

@dataclass(slots=True, frozen=True)
class FockConfig:
    """
    Trunkierter Mehrmoden-Fockraum.

    Felder
    - dims [1] : Trunkierungsdimension je Mode, jede ≥ 2.

    Hinweise
    - total_dim ist das Produkt der dims.
    - Drei Moden: (a, m, b); zwei Moden (effektives Modell): (a, b).
    """

    dims: tuple[int, ...] = DEFAULT_DIMS

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if len(dims) == 0:
            raise InvalidDimensionError("dims darf nicht leer sein")
        if any(d < 2 for d in dims):
            raise InvalidDimensionError(f"jede Dimension muss ≥ 2 sein, erhalten: {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def modes(self) -> int:
        return len(self.dims)


@dataclass(slots=True, frozen=True)
class OperatorMatrix:
    """
    Dichter komplexer Operator dim×dim.

    Ist `hermitian_hint` gesetzt, wird max |A − A†| ≤ 1e-12 bei der
    Konstruktion geprüft (ContractViolationError).
    """

    entries: NDArray[np.complex128]
    hermitian_hint: bool = False

    def __post_init__(self) -> None:
        try:
            matrix = TypeUtils.als_komplexmatrix(self.entries)
        except ValueError as exc:
            raise InvalidDimensionError(str(exc)) from exc
        if self.hermitian_hint and not TypeUtils.ist_hermitesch(matrix, HERMITE_EXP10):
            raise ContractViolationError(
                f"Operator nicht hermitesch: max|A − A†| = {TypeUtils.hermitizitaet_defekt(matrix):.3e}"
            )
        object.__setattr__(self, "entries", _eingefroren(matrix))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def dagger(self) -> OperatorMatrix:
        return OperatorMatrix(self.entries.conj().T, hermitian_hint=self.hermitian_hint)

    def __add__(self, other: OperatorMatrix) -> OperatorMatrix:
        return OperatorMatrix(self.entries + other.entries)

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        return OperatorMatrix(self.entries @ other.entries)

    def scaled(self, faktor: complex) -> OperatorMatrix:
        return OperatorMatrix(faktor * self.entries)

    def as_hermitian(self) -> OperatorMatrix:
        """Setzt den Hinweis nach Prüfung; Summen hermitescher Terme bleiben hermitesch."""
        return OperatorMatrix(self.entries, hermitian_hint=True)


@dataclass(slots=True, frozen=True)
class StateVector:
    """Normierter Zustandsvektor; Norm 1 innerhalb 1e-10."""

    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        v = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if v.ndim != 1 or v.size == 0:
            raise InvalidDimensionError(f"Zustandsvektor muss eindimensional sein, Form {v.shape}")
        if abs(float(np.linalg.norm(v)) - 1.0) > float(TypeUtils.eps(NORM_EXP10)):
            raise ContractViolationError(f"Norm ≠ 1: ‖ψ‖ = {np.linalg.norm(v):.12f}")
        object.__setattr__(self, "amplitudes", _eingefroren(v))

    @classmethod
    def normalized(cls, amplitudes: ArrayLike) -> StateVector:
        try:
            return cls(TypeUtils.normiert(amplitudes))
        except ValueError as exc:
            if isinstance(exc, ContractViolationError):
                raise
            raise ContractViolationError(str(exc)) from exc

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def projector(self) -> NDArray[np.complex128]:
        return np.outer(self.amplitudes, self.amplitudes.conj())


# ====================== OPERATIONEN ======================

def annihilation(dim: int) -> OperatorMatrix:
    """
    Vernichter mit Einträgen (n, n+1) = √(n+1), n = 0..dim−2.

    Beispiele:
        annihilation(2).entries → [[0, 1], [0, 0]]
    """
    if dim < 2:
        raise InvalidDimensionError(f"dim muss ≥ 2 sein, erhalten: {dim}")
    return OperatorMatrix(np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), 1))


def number_operator(dim: int) -> OperatorMatrix:
    """a†a mit Spektrum {0, …, dim−1}."""
    a = annihilation(dim)
    return (a.dagger() @ a).as_hermitian()


def embed(op: OperatorMatrix, mode_index: int, config: FockConfig) -> OperatorMatrix:
    """
    Einbettung I ⊗ … ⊗ op ⊗ … ⊗ I mit op an Position `mode_index`.

    Fehler:
        ModeIndexError bei Index außerhalb von config.dims,
        InvalidDimensionError bei op.dim ≠ config.dims[mode_index].
    """
    if not 0 <= mode_index < config.modes:
        raise ModeIndexError(f"mode_index {mode_index} außerhalb von 0..{config.modes - 1}")
    if op.dim != config.dims[mode_index]:
        raise InvalidDimensionError(
            f"op.dim = {op.dim} passt nicht zu dims[{mode_index}] = {config.dims[mode_index]}"
        )
    faktoren = [
        op.entries if i == mode_index else np.eye(d, dtype=np.complex128)
        for i, d in enumerate(config.dims)
    ]
    return OperatorMatrix(MathFunctions.kron_kette(faktoren), hermitian_hint=op.hermitian_hint)


def mode_operators(config: FockConfig) -> tuple[OperatorMatrix, ...]:
    """Eingebettete Vernichter aller Moden in config-Reihenfolge."""
    return tuple(embed(annihilation(d), i, config) for i, d in enumerate(config.dims))


def hermitian_eigs(op: OperatorMatrix) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """
    Eigenwerte (aufsteigend) und orthonormale Eigenvektoren (Spalten).

    Fehler:
        ContractViolationError, falls `op` nicht als hermitesch markiert ist
        oder die Prüfung max|A − A†| ≤ 1e-12 verfehlt.
    """
    if not op.hermitian_hint or not TypeUtils.ist_hermitesch(op.entries, HERMITE_EXP10):
        raise ContractViolationError(
            f"hermitian_eigs verlangt hermiteschen Operator "
            f"(max|A − A†| = {TypeUtils.hermitizitaet_defekt(op.entries):.3e})"
        )
    werte, vektoren = linalg.eigh(op.entries)
    return np.asarray(werte, dtype=np.float64), np.asarray(vektoren, dtype=np.complex128)


def basis_index(labels: tuple[int, ...], config: FockConfig) -> int:
    """Linearer Index von |n_0 n_1 …⟩ (zeilenweise, letzte Mode am schnellsten)."""
    if len(labels) != config.modes:
        raise InvalidDimensionError(f"{len(labels)} Labels für {config.modes} Moden")
    for i, (n, d) in enumerate(zip(labels, config.dims)):
        if not 0 <= n < d:
            raise InvalidDimensionError(f"Label {n} der Mode {i} außerhalb 0..{d - 1}")
    return int(np.ravel_multi_index(labels, config.dims))


def basis_state(labels: tuple[int, ...], config: FockConfig) -> StateVector:
    """Fock-Basiszustand |n_a l_m k_b⟩."""
    v = np.zeros(config.total_dim, dtype=np.complex128)
    v[basis_index(labels, config)] = 1.0
    return StateVector(v)


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> NDArray[np.complex128]:
    if a.dim != b.dim:
        raise InvalidDimensionError(f"Dimensionen {a.dim} und {b.dim} verschieden")
    return a.entries @ b.entries - b.entries @ a.entries


__all__: Final[tuple[str, ...]] = (
    "PHOTON",
    "MAGNON",
    "PHONON",
    "FockConfig",
    "OperatorMatrix",
    "StateVector",
    "annihilation",
    "number_operator",
    "embed",
    "mode_operators",
    "hermitian_eigs",
    "basis_index",
    "basis_state",
    "commutator",
)
