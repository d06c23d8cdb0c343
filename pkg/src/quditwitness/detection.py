"""The end-to-end detection protocol on a single state copy.

A trial applies each configured local-unitary strategy, picks levels at
random, reduces to two qubits and evaluates the witness.  Parallel mode
partitions the levels of each subsystem into floor(d/2) disjoint pairs and
evaluates all of them in one shot; one global unitary per strategy precedes
the partitioning.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .states import DensityMatrix
from .transforms import (LevelSelection, LutStrategy, ZeroProbabilityError,
                         apply_lut, random_selection, reduce_to_two_qubits)
from .witness import WitnessOutcome, fef_witness, outcome_from_score


class Mode(str, Enum):
    SINGLE = "single"
    PARALLEL = "parallel"


class CombinedSelection(str, Enum):
    """Whether strategies within one trial share the level selection."""

    FRESH = "fresh"
    SHARED = "shared"


def default_strategies() -> tuple[LutStrategy, ...]:
    """The fixed strategy order: identity, one-sided Hadamard, two-sided Hadamard."""
    return (LutStrategy.identity(), LutStrategy.hadamard_b(), LutStrategy.hadamard_both())


@dataclass(frozen=True)
class DetectionConfig:
    strategies: tuple[LutStrategy, ...] = field(default_factory=default_strategies)
    mode: Mode = Mode.SINGLE
    combined_selection: CombinedSelection = CombinedSelection.FRESH

    def __post_init__(self):
        if not self.strategies:
            raise ValueError("at least one strategy is required")


@dataclass(frozen=True)
class TrialResult:
    """detected is the OR over all outcomes of the trial."""

    detected: bool
    outcomes: tuple[WitnessOutcome, ...]


def evaluate_selection(rho: DensityMatrix, sel: LevelSelection,
                       strategy: LutStrategy | None = None) -> WitnessOutcome:
    """Reduce on one selection and run the witness.

    Zero-probability selections count as not detected: they carry no
    correlations, so the outcome is recorded with the minimal score -1.
    """
    kind = strategy.kind if strategy is not None else None
    try:
        rho2, _ = reduce_to_two_qubits(rho, sel)
    except ZeroProbabilityError:
        return outcome_from_score(-1.0, selection=sel, strategy=kind)
    return fef_witness(rho2, selection=sel, strategy=kind)


def disjoint_selections(d: int, rng: np.random.Generator) -> list[LevelSelection]:
    """floor(d/2) disjoint selections from one random permutation per side.

    The i-th pair of A's permutation is coupled with the i-th pair of B's;
    for odd d the leftover level is dropped for this trial.
    """
    perm_a = rng.permutation(d)
    perm_b = rng.permutation(d)
    return [LevelSelection(int(perm_a[2 * k]), int(perm_a[2 * k + 1]),
                           int(perm_b[2 * k]), int(perm_b[2 * k + 1]))
            for k in range(d // 2)]


def single_trial(rho: DensityMatrix, cfg: DetectionConfig, rng: np.random.Generator) -> TrialResult:
    """One protocol round: per strategy, one random selection and one witness call."""
    d = rho.dim_a
    shared = random_selection(d, rng) if cfg.combined_selection is CombinedSelection.SHARED else None
    outcomes = []
    for strat in cfg.strategies:
        transformed = apply_lut(rho, strat, rng)
        sel = shared if shared is not None else random_selection(d, rng)
        outcomes.append(evaluate_selection(transformed, sel, strat))
    return TrialResult(detected=any(o.detected for o in outcomes), outcomes=tuple(outcomes))


def parallel_trial(rho: DensityMatrix, cfg: DetectionConfig, rng: np.random.Generator) -> TrialResult:
    """One round of the disjoint-pair protocol over all floor(d/2) selections."""
    d = rho.dim_a
    shared = disjoint_selections(d, rng) if cfg.combined_selection is CombinedSelection.SHARED else None
    outcomes = []
    for strat in cfg.strategies:
        transformed = apply_lut(rho, strat, rng)
        sels = shared if shared is not None else disjoint_selections(d, rng)
        outcomes.extend(evaluate_selection(transformed, sel, strat) for sel in sels)
    return TrialResult(detected=any(o.detected for o in outcomes), outcomes=tuple(outcomes))


def run_trial(rho: DensityMatrix, cfg: DetectionConfig, rng: np.random.Generator) -> TrialResult:
    return (single_trial if cfg.mode is Mode.SINGLE else parallel_trial)(rho, cfg, rng)
