"""Local unitaries and the level-selection map from two qudits to two qubits.

A level selection keeps two levels per subsystem; only the first two images of
the underlying permutations matter, so selections are stored as the ordered
pairs (a0, a1) and (b0, b1).  That collapses the (d!)^2 permutation space to
the d^2 (d-1)^2 selection classes that actually drive the statistics.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import HERMITICITY_TOL, ZERO_PROB_TOL
from .linalg import haar_unitary
from .states import DensityMatrix


class ZeroProbabilityError(ValueError):
    """Raised when a selection carries (numerically) no weight."""


@dataclass(frozen=True)
class LevelSelection:
    """Qudit levels mapped onto qubit levels 0 and 1, per subsystem."""

    a0: int
    a1: int
    b0: int
    b1: int

    def __post_init__(self):
        if self.a0 == self.a1 or self.b0 == self.b1:
            raise ValueError("selected levels must be distinct on each side")

    def swapped(self) -> "LevelSelection":
        """Flip both qubits simultaneously (a0<->a1, b0<->b1)."""
        return LevelSelection(self.a1, self.a0, self.b1, self.b0)

    def indices(self, d: int) -> np.ndarray:
        """Row indices of the selected two-qubit block in the d*d product basis."""
        return np.array([self.a0 * d + self.b0, self.a0 * d + self.b1,
                         self.a1 * d + self.b0, self.a1 * d + self.b1])


class LutKind(str, Enum):
    """Local unitary applied before the level selection."""

    IDENTITY = "identity"
    HADAMARD_B = "hadamard_b"
    HADAMARD_BOTH = "hadamard_both"
    RANDOM_BOTH = "random_both"


@dataclass(frozen=True)
class LutStrategy:
    """A LutKind tag plus, for RANDOM_BOTH, optionally pinned unitaries."""

    kind: LutKind
    u_a: np.ndarray | None = None
    v_b: np.ndarray | None = None

    def __post_init__(self):
        for m in (self.u_a, self.v_b):
            if m is not None and np.abs(m.conj().T @ m - np.eye(m.shape[0])).max() > HERMITICITY_TOL:
                raise ValueError("stored local unitary is not unitary within tolerance")

    @classmethod
    def identity(cls) -> "LutStrategy":
        return cls(LutKind.IDENTITY)

    @classmethod
    def hadamard_b(cls) -> "LutStrategy":
        return cls(LutKind.HADAMARD_B)

    @classmethod
    def hadamard_both(cls) -> "LutStrategy":
        return cls(LutKind.HADAMARD_BOTH)

    @classmethod
    def random_both(cls, u_a: np.ndarray | None = None, v_b: np.ndarray | None = None) -> "LutStrategy":
        return cls(LutKind.RANDOM_BOTH, u_a=u_a, v_b=v_b)


def qudit_hadamard(d: int) -> np.ndarray:
    """d-level Hadamard gate H[k,l] = omega^(k l)/sqrt(d), omega = exp(2 pi i/d)."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


def _local_unitaries(d: int, s: LutStrategy, rng: np.random.Generator | None) -> tuple[np.ndarray | None, np.ndarray | None]:
    if s.kind is LutKind.IDENTITY:
        return None, None
    if s.kind is LutKind.HADAMARD_B:
        return None, qudit_hadamard(d)
    if s.kind is LutKind.HADAMARD_BOTH:
        h = qudit_hadamard(d)
        return h, h
    u, v = s.u_a, s.v_b
    if u is None or v is None:
        if rng is None:
            raise ValueError("random_both without stored unitaries needs an rng")
        u = haar_unitary(d, rng) if u is None else u
        v = haar_unitary(d, rng) if v is None else v
    return u, v


def apply_lut(rho: DensityMatrix, s: LutStrategy, rng: np.random.Generator | None = None) -> DensityMatrix:
    """Conjugate by U_A (x) V_B.  Trace and the pure-plus-noise cache are preserved."""
    if rho.dim_a != rho.dim_b:
        raise ValueError("local unitary strategies assume equal local dimensions")
    d = rho.dim_a
    u, v = _local_unitaries(d, s, rng)
    if u is None and v is None:
        return rho
    u = np.eye(d, dtype=complex) if u is None else u
    v = np.eye(d, dtype=complex) if v is None else v
    if rho.pure is not None and rho.visibility is not None:
        # (U (x) V) psi, via the d x d amplitude matrix
        psi = (u @ rho.pure.reshape(d, d) @ v.T).reshape(d * d)
        return DensityMatrix.from_pure(psi, d, d, visibility=rho.visibility)
    w = np.kron(u, v)
    return DensityMatrix(d, d, w @ rho.mat @ w.conj().T)


def random_selection(d: int, rng: np.random.Generator) -> LevelSelection:
    """Uniform over ordered distinct level pairs, independently per subsystem."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    a0, b0 = rng.integers(0, d, size=2)
    a1, b1 = rng.integers(0, d - 1, size=2)
    a1 += a1 >= a0
    b1 += b1 >= b0
    return LevelSelection(int(a0), int(a1), int(b0), int(b1))


def reduce_to_two_qubits(rho: DensityMatrix, sel: LevelSelection) -> tuple[DensityMatrix, float]:
    """Project onto the selected levels and renormalise.

    Returns the 4x4 state in the basis |00>, |01>, |10>, |11> (qubit level 0 of
    A is qudit level a0, etc.) together with the post-selection probability
    Tr[M rho M^dag].  Raises ZeroProbabilityError when that probability is
    below ZERO_PROB_TOL.
    """
    for level, dim in ((sel.a0, rho.dim_a), (sel.a1, rho.dim_a), (sel.b0, rho.dim_b), (sel.b1, rho.dim_b)):
        if not 0 <= level < dim:
            raise ValueError(f"level {level} out of range for dimension {dim}")
    idx = sel.indices(rho.dim_b)
    block = rho.mat[np.ix_(idx, idx)]
    prob = float(block.trace().real)
    if prob < ZERO_PROB_TOL:
        raise ZeroProbabilityError(f"selection weight {prob:.3e} below {ZERO_PROB_TOL}")
    return DensityMatrix(2, 2, block / prob), prob
