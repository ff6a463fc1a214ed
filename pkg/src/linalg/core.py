"""Dense real linear algebra and scalar Gaussian primitives."""

from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg as sla
from scipy import special

from ..config import Config
from ..utils.errors import DimensionError, DomainError

Matrix = NDArray[np.float64]


def as_matrix(X: ArrayLike, name: str = "matrix") -> Matrix:
    """Coerce to a finite 2-D float array with both dimensions >= 1."""
    arr = np.array(X, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def as_vector(x: ArrayLike, name: str = "vector") -> NDArray[np.float64]:
    arr = np.array(x, dtype=np.float64).reshape(-1)
    if arr.size < 1:
        raise DimensionError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def _require_square(X: Matrix, name: str) -> None:
    if X.shape[0] != X.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {X.shape}")


def symmetrize(X: Matrix) -> Matrix:
    return 0.5 * (X + X.T)


def as_spd(X: ArrayLike, name: str = "matrix", definite: bool = False) -> Matrix:
    """
    Validate a symmetric positive (semi)definite matrix.

    Symmetry is checked in relative Frobenius norm; eigenvalues may dip to
    -PSD_TOL * ||X||_2 before the matrix counts as indefinite. With
    ``definite=True`` the smallest eigenvalue must be strictly positive.
    """
    arr = as_matrix(X, name)
    _require_square(arr, name)
    scale = np.linalg.norm(arr)
    if scale > 0 and np.linalg.norm(arr - arr.T) > Config.SYMMETRY_TOL * scale:
        raise DomainError(f"{name} is not symmetric")
    arr = symmetrize(arr)
    eigs = sla.eigvalsh(arr)
    floor = -Config.PSD_TOL * max(abs(eigs[-1]), abs(eigs[0]))
    if eigs[0] < floor:
        raise DomainError(f"{name} is indefinite (min eigenvalue {eigs[0]:.3e})")
    if definite and eigs[0] <= 0:
        raise DomainError(f"{name} must be positive definite (min eigenvalue {eigs[0]:.3e})")
    return arr


def expm(X: ArrayLike) -> Matrix:
    """Matrix exponential (scaling-and-squaring, order-13 Padé)."""
    arr = as_matrix(X, "expm argument")
    _require_square(arr, "expm argument")
    return sla.expm(arr)


def pinv(X: ArrayLike, rank_tol: Optional[float] = None) -> Matrix:
    """
    Moore-Penrose pseudoinverse via SVD.

    Singular values below ``rank_tol * sigma_max`` are treated as zero.
    The default relative tolerance is ``max(rows, cols) * eps``.
    """
    arr = as_matrix(X, "pinv argument")
    if rank_tol is None:
        rank_tol = max(arr.shape) * np.finfo(np.float64).eps
    if rank_tol < 0:
        raise DomainError("rank_tol must be >= 0")

    U, s, Vt = sla.svd(arr, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((arr.shape[1], arr.shape[0]))
    cutoff = rank_tol * s[0]
    s_inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (Vt.T * s_inv) @ U.T


def psd_sqrt(X: ArrayLike) -> Matrix:
    """Return L with L @ L.T == X (Cholesky when PD, eigen square root otherwise)."""
    arr = as_spd(X, "psd_sqrt argument")
    try:
        return sla.cholesky(arr, lower=True)
    except sla.LinAlgError:
        eigs, vecs = sla.eigh(arr)
        return vecs * np.sqrt(np.clip(eigs, 0.0, None))


def spectral_norm(X: ArrayLike) -> float:
    """Largest singular value."""
    arr = as_matrix(X, "spectral_norm argument")
    return float(sla.svdvals(arr)[0])


def norm_cdf(x):
    return special.ndtr(x)


def norm_pdf(x):
    return np.exp(-0.5 * np.square(x)) / np.sqrt(2.0 * np.pi)


def norm_quantile(p):
    """Standard normal quantile; p must lie strictly inside (0, 1)."""
    arr = np.asarray(p, dtype=np.float64)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    return special.ndtri(arr)
