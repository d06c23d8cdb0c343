"""Entanglement detection in bipartite qudit states via random two-qubit
reductions and the fully-entangled-fraction witness."""

__version__ = "0.1.0"

from .constants import HERMITICITY_TOL, NPT_TOL, RECON_TOL, WITNESS_TOL, ZERO_PROB_TOL
from .linalg import (HermitianSpectrum, NotHermitianError, ginibre, haar_state,
                     haar_unitary, hermitian_eig, kron, singular_values_3x3)
from .rng import substream
from .states import (DensityMatrix, IcpsParams, InvalidParamsError, InvalidStateError,
                     QuasiPureParams, apply_white_noise, make_icps, make_quasi_pure,
                     maximally_mixed, random_product_mixture)
from .transforms import (LevelSelection, LutKind, LutStrategy, ZeroProbabilityError,
                         apply_lut, qudit_hadamard, random_selection, reduce_to_two_qubits)
from .witness import PauliDecomposition, WitnessOutcome, fef_witness, pauli_decompose
from .oracles import (AnalyticSensitivity, BruteForceCounts, InvalidScenarioError, Scenario,
                      all_selections, analytic_fef_score, analytic_sensitivity,
                      brute_force_counts, brute_force_sensitivity, classify_selection,
                      icps_entanglement_threshold, icps_is_entangled, icps_thresholds,
                      is_npt, partial_transpose)
from .detection import (CombinedSelection, DetectionConfig, Mode, TrialResult,
                        disjoint_selections, evaluate_selection, parallel_trial,
                        run_trial, single_trial)
from .montecarlo import (COMBINED_KEY, DEFAULT_SAMPLES, GridCell, GridSpec,
                         IcpsGroundTruth, SensitivityEstimate,
                         estimate_icps_sensitivity, estimate_quasi_pure_sensitivity,
                         sweep_icps_grid, wilson_halfwidth)
from .collective import (CollectiveData, MinimalBasis, collective_R_minimal,
                         collective_R_pauli, fef_from_collective, minimal_basis,
                         pi_matrix, singlet_projector_op, transformation_matrix)
from .serialize import ParseError, load_density, save_density
