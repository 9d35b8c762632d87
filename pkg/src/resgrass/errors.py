"""Exception types raised across the package."""

from __future__ import annotations


class ResGrassError(Exception):
    """Base class for all package errors."""


class SpaceMismatch(ResGrassError):
    pass


class ShapeMismatch(ResGrassError):
    pass


class NotSkewHermitian(ResGrassError):
    pass


class NotHermitian(ResGrassError):
    pass


class NotUnitary(ResGrassError):
    pass


class SingularInput(ResGrassError):
    pass


class NonFiniteEvaluation(ResGrassError):
    pass


class RankDeficient(ResGrassError):
    pass


class ZeroGamma(ResGrassError):
    pass


class NotTransverse(ResGrassError):
    pass


class DimensionMismatch(ResGrassError):
    pass


class NotReachable(ResGrassError):
    pass


class GapViolation(ResGrassError):
    pass


class NoConvergence(ResGrassError):
    pass


class BadParameters(ResGrassError):
    pass


class RankTooLarge(ResGrassError):
    pass


class BadStructure(ResGrassError):
    pass


__all__ = [
    "ResGrassError",
    "SpaceMismatch",
    "ShapeMismatch",
    "NotSkewHermitian",
    "NotHermitian",
    "NotUnitary",
    "SingularInput",
    "NonFiniteEvaluation",
    "RankDeficient",
    "ZeroGamma",
    "NotTransverse",
    "DimensionMismatch",
    "NotReachable",
    "GapViolation",
    "NoConvergence",
    "BadParameters",
    "RankTooLarge",
    "BadStructure",
]
