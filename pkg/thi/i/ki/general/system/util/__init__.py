from __future__ import annotations
from typing import Final

from .evaluation import TypeUtils, eps
from .mathematik import MathFunctions

__all__: Final[tuple[str, ...]] = ("TypeUtils", "eps", "MathFunctions")
