"""Dense complex linear algebra sized for two-qudit operators (up to 144x144).

Everything is a plain ``numpy.ndarray``; matrices are small enough that dense
storage wins on clarity and cache locality.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .constants import HERMITICITY_TOL


class NotHermitianError(ValueError):
    """Raised when an operation requires a Hermitian matrix and gets none."""


class HermitianSpectrum(NamedTuple):
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix."""

    values: np.ndarray
    vectors: np.ndarray


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b."""
    return np.kron(a, b)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def hermitian_eig(m: np.ndarray) -> HermitianSpectrum:
    """Spectral decomposition of a Hermitian matrix.

    Raises NotHermitianError if the symmetry check fails; the decomposition
    satisfies m = V diag(w) V^dag up to RECON_TOL.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {m.shape}")
    if np.abs(m - m.conj().T).max() > HERMITICITY_TOL:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    values, vectors = np.linalg.eigh(m)
    return HermitianSpectrum(values, vectors)


def singular_values_3x3(t: np.ndarray) -> np.ndarray:
    """Singular values of a real 3x3 matrix, descending.

    Their sum equals the trace of the principal square root of t^T t.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {t.shape}")
    return np.linalg.svd(t, compute_uv=False)


def ginibre(dim: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Complex Ginibre matrix (i.i.d. standard complex Gaussian entries)."""
    shape = (dim, dim) if size is None else (size, dim, dim)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_unitary(dim: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed random unitary, via QR of a Ginibre matrix.

    The diagonal of the triangular factor is phase-corrected; plain QR output
    is not Haar-distributed.
    """
    z = ginibre(dim, rng, size=size)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phase = diag / np.abs(diag)
    return q * phase[..., None, :]


def haar_state(dim: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-random pure state vector(s): normalised complex Gaussian vectors.

    Identical in distribution to applying a Haar unitary to any fixed
    reference vector.
    """
    shape = (dim,) if size is None else (size, dim)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)
