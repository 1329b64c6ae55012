"""Spectral theory of normal quaternionic matrices.

The main entry points are :func:`qspectral.measure.build_measure`, which
returns the spectral measure of a normal :class:`~qspectral.qoperator.QMatrix`,
and :func:`qspectral.slice_spectral.spectral_decompose`.
"""
__version__ = "0.1.0"

from .errors import CommutationError, ComplexStructureError, NotNormalError, NotPositiveError
from .measure import (
    Full,
    Points,
    QSpectralMeasure,
    Rectangle,
    build_measure,
    evaluate,
    functional_calculus,
    integrate_representation,
    reconstruct_operator,
    scalar_measure,
)
from .qoperator import QMatrix, classify, complex_embed, inverse_z_transform, operator_norm, z_transform
from .qspace import HilbertBasis, QVector, gram_schmidt, inner
from .quaternion import Quaternion, SliceComplex, SliceFrame, UnitImaginary
from .slice_spectral import (
    construct_J,
    extend_operator,
    induce_complex,
    slice_basis,
    spectral_decompose,
    spherical_spectrum,
    split,
)
from .unbounded import DiagonalSymbol, build_tower, measure_consistency, unboundedness_signature

__all__ = [
    "CommutationError",
    "ComplexStructureError",
    "DiagonalSymbol",
    "Full",
    "HilbertBasis",
    "NotNormalError",
    "NotPositiveError",
    "Points",
    "QMatrix",
    "QSpectralMeasure",
    "QVector",
    "Quaternion",
    "Rectangle",
    "SliceComplex",
    "SliceFrame",
    "UnitImaginary",
    "build_measure",
    "build_tower",
    "classify",
    "complex_embed",
    "construct_J",
    "evaluate",
    "extend_operator",
    "functional_calculus",
    "gram_schmidt",
    "induce_complex",
    "inner",
    "integrate_representation",
    "inverse_z_transform",
    "measure_consistency",
    "operator_norm",
    "reconstruct_operator",
    "scalar_measure",
    "slice_basis",
    "spectral_decompose",
    "spherical_spectrum",
    "split",
    "unboundedness_signature",
    "z_transform",
]
