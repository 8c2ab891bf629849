from .Drift import DriftCheck

__all__ = ["DriftCheck"]
