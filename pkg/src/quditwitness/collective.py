"""Two-copy collective extraction of the correlation matrix R with 10 settings.

Two copies of a two-qubit state are arranged as (a, b, a', b'); the (b, b')
pair is projected onto the singlet observable S = 1 - 4 |Psi-><Psi-| while
(a, a') sees either Pauli operators or the minimal tetrahedral basis.  Since
the copies are identical, pi_ij = pi_ji, so the minimal-basis route needs only
10 distinct settings.  The resulting R equals T T^T; the witness only uses
its eigenvalues, which match those of T^T T.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import kron
from .states import DensityMatrix
from .witness import PAULI, WitnessOutcome, outcome_from_score

# Bloch-vector scale of the transformation-matrix rows (1, s, s, s): with the
# tetrahedral projectors Pi_i = (1 + b_i . sigma)/2 and |b_i| = 1, the rows
# (1, b_i) reproduce pi = (1/4) M G M^T exactly when s = 1/sqrt(3).
S_PARAM = 1.0 / np.sqrt(3.0)

# pi = (1/4) M G M^T, with G the (1, sigma) x (1, sigma) two-copy correlation
# block; inverting the congruence therefore carries a factor 4.
CALIBRATION = 4.0

_SIGNS = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)


@dataclass(frozen=True)
class MinimalBasis:
    """Tetrahedral rank-1 projectors with even-sign-product Bloch vectors."""

    projectors: np.ndarray  # (4, 2, 2)
    bloch: np.ndarray       # (4, 3)
    s: float


@dataclass(frozen=True)
class CollectiveData:
    """Measured two-copy moments pi_ij; symmetric, 10 independent settings."""

    pi_matrix: np.ndarray
    settings_count: int


def minimal_basis(s: float = S_PARAM) -> MinimalBasis:
    bloch = _SIGNS / np.sqrt(3.0)
    projectors = np.array([(np.eye(2) + sum(b[k] * PAULI[k] for k in range(3))) / 2.0
                           for b in bloch])
    return MinimalBasis(projectors=projectors, bloch=bloch, s=s)


def transformation_matrix(s: float = S_PARAM) -> np.ndarray:
    """Rows (1, +-s, +-s, +-s) following the tetrahedral sign pattern."""
    return np.hstack([np.ones((4, 1)), s * _SIGNS])


def singlet_projector_op() -> np.ndarray:
    """S = 1 - 4 |Psi-><Psi-|; Hermitian with eigenvalues {1, 1, 1, -3}."""
    psi_minus = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2.0)
    return np.eye(4, dtype=complex) - 4.0 * np.outer(psi_minus, psi_minus.conj())


def _as_matrix(rho2) -> np.ndarray:
    mat = rho2.mat if isinstance(rho2, DensityMatrix) else np.asarray(rho2)
    if mat.shape != (4, 4):
        raise ValueError(f"expected a two-qubit (4x4) state, got shape {mat.shape}")
    return mat


def _two_copy_expectation(rho4: np.ndarray, op_a: np.ndarray, op_a2: np.ndarray) -> float:
    """Tr[rho x rho . S_bb' (op_a x op_a2)_aa'] in the (a, b, a', b') order.

    Uses S = sum_k sigma_k x sigma_k, the Pauli expansion of the singlet
    observable.
    """
    val = 0.0
    for k in range(3):
        op = kron(kron(op_a, PAULI[k]), kron(op_a2, PAULI[k]))
        val += np.trace(rho4 @ op).real
    return val


def collective_R_pauli(rho2) -> np.ndarray:
    """R_ij from two-copy expectations with Pauli settings on (a, a')."""
    mat = _as_matrix(rho2)
    rho4 = kron(mat, mat)
    r = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            r[i, j] = _two_copy_expectation(rho4, PAULI[i], PAULI[j])
    return r


def pi_matrix(rho2, basis: MinimalBasis | None = None) -> CollectiveData:
    """The 10 independent two-copy moments of the minimal-basis settings."""
    basis = basis or minimal_basis()
    mat = _as_matrix(rho2)
    rho4 = kron(mat, mat)
    pi = np.empty((4, 4))
    settings = 0
    for i in range(4):
        for j in range(i, 4):
            pi[i, j] = _two_copy_expectation(rho4, basis.projectors[i], basis.projectors[j])
            pi[j, i] = pi[i, j]
            settings += 1
    return CollectiveData(pi_matrix=pi, settings_count=settings)


def collective_R_minimal(rho2, basis: MinimalBasis | None = None) -> np.ndarray:
    """R recovered from the minimal-basis moments via the congruence inverse.

    The identity component sits in row/column 0 of the recovered block; R is
    its lower-right 3x3 part.
    """
    basis = basis or minimal_basis()
    data = pi_matrix(rho2, basis)
    m_inv = np.linalg.inv(transformation_matrix(basis.s))
    g = CALIBRATION * m_inv @ data.pi_matrix @ m_inv.T
    return g[1:, 1:]


def fef_from_collective(rho2) -> WitnessOutcome:
    """Witness outcome computed from the 10-setting collective R."""
    r = collective_R_minimal(rho2)
    eig = np.clip(np.linalg.eigvalsh(r), 0.0, None)
    return outcome_from_score(float(np.sqrt(eig).sum() - 1.0))
