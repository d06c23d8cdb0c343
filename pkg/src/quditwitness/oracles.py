"""Ground-truth oracles: PPT test, exact thresholds, closed-form scores and
exhaustive selection enumeration.

These routines are deliberately independent of the sampling pipeline so that
Monte Carlo results can be checked against them.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .constants import NPT_TOL, WITNESS_TOL
from .states import DensityMatrix, IcpsParams
from .transforms import LevelSelection, LutStrategy, apply_lut
from .witness import scores_from_submatrices


class Scenario(Enum):
    """Reduction classes of a Schmidt-form state under a level selection.

    BOTH_IN_CORE: matched selection with both levels among the r-1 repeated
    Schmidt levels.  CORE_AND_EDGE: matched selection pairing one repeated
    level with the last Schmidt level r-1.  The VIOLATED classes are the
    non-matched (or out-of-support) selections, split by whether the A-side
    pair stays inside the repeated-level core.
    """

    BOTH_IN_CORE = "both_in_core"
    CORE_AND_EDGE = "core_and_edge"
    VIOLATED_CORE = "violated_core"
    VIOLATED_EDGE = "violated_edge"


class InvalidScenarioError(ValueError):
    """Raised when a closed form is requested for a non-detecting scenario."""


def partial_transpose(mat: np.ndarray, dim_a: int, dim_b: int, sys: str = "b") -> np.ndarray:
    """Partial transpose of a bipartite matrix over subsystem 'a' or 'b'."""
    t = np.asarray(mat).reshape(dim_a, dim_b, dim_a, dim_b)
    axes = (0, 3, 2, 1) if sys == "b" else (2, 1, 0, 3)
    return t.transpose(axes).reshape(dim_a * dim_b, dim_a * dim_b)


def is_npt(rho: DensityMatrix, sys: str = "b") -> bool:
    """True iff the partial transpose has an eigenvalue below -NPT_TOL."""
    eig_min = np.linalg.eigvalsh(partial_transpose(rho.mat, rho.dim_a, rho.dim_b, sys)).min()
    return bool(eig_min < -NPT_TOL)


def icps_thresholds(p: IcpsParams) -> tuple[float, float]:
    """The two visibility thresholds (v_a, v_b).

    v_a = 1/(1 + d^2 alpha^2) is the boundary for matched core-core
    selections; v_b = 1/(1 + d^2 alpha alpha_r) for matched core-edge
    selections.  The state is entangled (equivalently NPT, equivalently
    detectable by the best selection) iff v exceeds the applicable minimum,
    see icps_entanglement_threshold.
    """
    d2 = p.d * p.d
    v_a = 1.0 / (1.0 + d2 * p.alpha ** 2)
    v_b = 1.0 / (1.0 + d2 * p.alpha * p.alpha_r)
    return v_a, v_b


def icps_entanglement_threshold(p: IcpsParams) -> float:
    """Exact entanglement boundary in v.

    Equals the smallest visibility at which some partial-transpose eigenvalue
    turns negative: the noise floor (1-v)/d^2 against the largest product of
    two distinct Schmidt coefficients.  For r >= 3 this is min(v_a, v_b); for
    r = 2 only the core-edge pair exists, so the boundary is v_b for every
    alpha.
    """
    v_a, v_b = icps_thresholds(p)
    return min(v_a, v_b) if p.r >= 3 else v_b


def icps_is_entangled(p: IcpsParams) -> bool:
    return p.v > icps_entanglement_threshold(p)


def classify_selection(sel: LevelSelection, r: int) -> Scenario:
    """Total classification of a selection for a rank-r Schmidt-form state."""
    matched = (sel.a0, sel.a1) in ((sel.b0, sel.b1), (sel.b1, sel.b0))
    a_levels = {sel.a0, sel.a1}
    core = a_levels <= set(range(r - 1))
    edge_pair = (r - 1) in a_levels and len(a_levels & set(range(r - 1))) == 1
    if matched and core:
        return Scenario.BOTH_IN_CORE
    if matched and edge_pair:
        return Scenario.CORE_AND_EDGE
    return Scenario.VIOLATED_CORE if core else Scenario.VIOLATED_EDGE


def analytic_fef_score(p: IcpsParams, scenario: Scenario) -> float:
    """Closed-form witness score of the two detecting reduction classes.

    Normalisation note: these are scores (Tr sqrt(R) - 1), not the clipped and
    halved witness value; a pure maximally entangled reduction scores 2.
    Positivity is equivalent to v exceeding the matching threshold from
    icps_thresholds.
    """
    d2 = p.d * p.d
    a2 = p.alpha ** 2
    v = p.v
    if scenario is Scenario.BOTH_IN_CORE:
        if p.r < 3:
            raise InvalidScenarioError("core-core selections require r >= 3")
        return 3.0 * d2 * v * a2 / (2.0 + v * (d2 * a2 - 2.0)) - 1.0
    if scenario is Scenario.CORE_AND_EDGE:
        num = d2 * v * (4.0 * p.alpha * p.alpha_r + 1.0 - (p.r - 2) * a2)
        den = 4.0 + v * ((d2 - 4.0) - (p.r - 2) * d2 * a2)
        return num / den - 1.0
    raise InvalidScenarioError(f"no closed form for scenario {scenario.value}: it never detects")


def all_selections(d: int) -> list[LevelSelection]:
    """All d^2 (d-1)^2 selection classes, lexicographic in (a0, a1, b0, b1)."""
    return [LevelSelection(a0, a1, b0, b1)
            for a0 in range(d) for a1 in range(d) if a1 != a0
            for b0 in range(d) for b1 in range(d) if b1 != b0]


@dataclass(frozen=True)
class BruteForceCounts:
    """Exhaustive enumeration result: detections per scenario class."""

    total: int
    detected: int
    by_scenario: dict | None = None

    @property
    def sensitivity(self) -> float:
        return self.detected / self.total


def brute_force_counts(rho: DensityMatrix, lut: LutStrategy,
                       r: int | None = None,
                       rng: np.random.Generator | None = None) -> BruteForceCounts:
    """Evaluate the witness on every selection class after the given unitary.

    When r is given, detections are additionally tallied per Scenario.  This
    is the per-state sensitivity oracle.
    """
    if rho.dim_a != rho.dim_b:
        raise ValueError("selection enumeration assumes equal local dimensions")
    d = rho.dim_a
    transformed = apply_lut(rho, lut, rng)
    sels = all_selections(d)
    idx = np.stack([s.indices(d) for s in sels])
    blocks = transformed.mat[idx[:, :, None], idx[:, None, :]]
    scores, _ = scores_from_submatrices(blocks)
    hits = scores > WITNESS_TOL
    by_scenario = None
    if r is not None:
        by_scenario = {sc: 0 for sc in Scenario}
        for sel, hit in zip(sels, hits):
            if hit:
                by_scenario[classify_selection(sel, r)] += 1
    return BruteForceCounts(total=len(sels), detected=int(hits.sum()), by_scenario=by_scenario)


def brute_force_sensitivity(rho: DensityMatrix, lut: LutStrategy,
                            rng: np.random.Generator | None = None) -> float:
    """Fraction of selection classes that detect, over the full enumeration."""
    return brute_force_counts(rho, lut, rng=rng).sensitivity


@dataclass(frozen=True)
class AnalyticSensitivity:
    """Exact per-scenario detection fractions for an entangled rank-r state.

    Fractions count ordered selection classes over the d^2 (d-1)^2 total.
    scenario_ii_unordered records the alternative normalisation that counts
    each unordered core-edge level pair once (r-1 pairs); it is NOT consistent
    with the ordered-class enumeration, which finds 4 (r-1) classes, and is
    kept so the discrepancy can be reported rather than silently resolved.
    """

    scenario_i: Fraction
    scenario_ii: Fraction
    scenario_ii_unordered: Fraction
    combined: Fraction
    total_classes: int


def analytic_sensitivity(d: int, r: int) -> AnalyticSensitivity:
    """Detection fractions when v lies above both thresholds (identity map)."""
    if not 2 <= r <= d:
        raise ValueError(f"need 2 <= r <= d, got r={r}, d={d}")
    total = d * d * (d - 1) * (d - 1)
    return AnalyticSensitivity(
        scenario_i=Fraction(2 * (r - 1) * (r - 2), total),
        scenario_ii=Fraction(4 * (r - 1), total),
        scenario_ii_unordered=Fraction(r - 1, total),
        combined=Fraction(2 * r * (r - 1), total),
        total_classes=total,
    )
