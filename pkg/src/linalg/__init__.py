"""Linear algebra and Gaussian primitives."""

from .core import (
    Matrix,
    as_matrix,
    as_vector,
    as_spd,
    symmetrize,
    expm,
    pinv,
    psd_sqrt,
    spectral_norm,
    norm_cdf,
    norm_pdf,
    norm_quantile,
)

__all__ = [
    'Matrix',
    'as_matrix',
    'as_vector',
    'as_spd',
    'symmetrize',
    'expm',
    'pinv',
    'psd_sqrt',
    'spectral_norm',
    'norm_cdf',
    'norm_pdf',
    'norm_quantile',
]
