import numpy as np
from numpy.testing import assert_allclose

from quditwitness import (DensityMatrix, fef_witness, haar_unitary, is_npt, kron,
                          pauli_decompose, substream)
from quditwitness.witness import (PAULI, scores_from_amplitudes, scores_from_submatrices,
                                  score_from_t)
from conftest import random_density

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def two_qubit(mat):
    return DensityMatrix(2, 2, np.asarray(mat, dtype=complex))


def test_decompose_maximally_mixed():
    dec = pauli_decompose(two_qubit(np.eye(4) / 4))
    assert_allclose(dec.a_vec, 0, atol=1e-14)
    assert_allclose(dec.b_vec, 0, atol=1e-14)
    assert_allclose(dec.t_matrix, 0, atol=1e-14)


def test_decompose_bell():
    dec = pauli_decompose(two_qubit(np.outer(BELL, BELL)))
    assert_allclose(dec.t_matrix, np.diag([1.0, -1.0, 1.0]), atol=1e-12)
    assert_allclose(dec.a_vec, 0, atol=1e-12)
    assert_allclose(dec.b_vec, 0, atol=1e-12)


def test_decompose_product_zero_state():
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = 1.0
    dec = pauli_decompose(two_qubit(mat))
    assert_allclose(dec.a_vec, [0, 0, 1], atol=1e-12)
    assert_allclose(dec.b_vec, [0, 0, 1], atol=1e-12)
    assert_allclose(dec.t_matrix, np.diag([0.0, 0.0, 1.0]), atol=1e-12)


def test_decompose_reconstructs(rng):
    for _ in range(25):
        rho = random_density(rng, 2, 2)
        dec = pauli_decompose(rho)
        assert np.abs(dec.reconstruct() - rho.mat).max() <= 1e-10
        for arr in (dec.a_vec, dec.b_vec, dec.t_matrix.ravel()):
            assert np.all(np.abs(arr) <= 1 + 1e-10)


def test_fef_bell():
    out = fef_witness(two_qubit(np.outer(BELL, BELL)))
    assert abs(out.score - 2.0) <= 1e-12
    assert abs(out.fef_w - 1.0) <= 1e-12
    assert out.detected


def test_fef_product_state_not_detected():
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = 1.0
    out = fef_witness(two_qubit(mat))
    assert abs(out.score) <= 1e-12
    assert out.fef_w == 0.0
    assert not out.detected


def test_fef_werner():
    rho = 0.6 * np.outer(PSI_MINUS, PSI_MINUS.conj()) + 0.4 * np.eye(4) / 4
    out = fef_witness(two_qubit(rho))
    assert abs(out.score - 0.8) <= 1e-12
    assert out.detected


def test_soundness_against_ppt_oracle(rng):
    # a detection must imply NPT: zero false positives over random mixed states
    false_positives = 0
    for _ in range(10_000):
        rho = random_density(rng, 2, 2)
        if fef_witness(rho).detected and not is_npt(rho):
            false_positives += 1
    assert false_positives == 0


def test_local_unitary_invariance(rng):
    for _ in range(20):
        rho = random_density(rng, 2, 2)
        u = kron(haar_unitary(2, rng), haar_unitary(2, rng))
        rotated = two_qubit(u @ rho.mat @ u.conj().T)
        assert abs(fef_witness(rotated).score - fef_witness(rho).score) <= 1e-9


def test_pure_schmidt_state_scores():
    # cos(t)|00> + sin(t)|11>: singular values (sin 2t, sin 2t, 1), score 2 sin 2t
    for theta in np.linspace(0.05, np.pi / 2 - 0.05, 15):
        psi = np.array([np.cos(theta), 0, 0, np.sin(theta)], dtype=complex)
        dec = pauli_decompose(two_qubit(np.outer(psi, psi.conj())))
        sv = np.sort(np.linalg.svd(dec.t_matrix, compute_uv=False))
        expect = np.sort([np.sin(2 * theta), np.sin(2 * theta), 1.0])
        assert_allclose(sv, expect, atol=1e-10)
        assert abs(fef_witness(two_qubit(np.outer(psi, psi.conj()))).score
                   - 2 * np.sin(2 * theta)) <= 1e-10


def test_batch_amplitude_kernel_matches_scalar(rng):
    d, n = 4, 64
    total = d * d
    amps = rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))
    vis = rng.uniform(0, 1, n)
    scores, weights = scores_from_amplitudes(amps, vis, total)
    for i in range(n):
        block = vis[i] * np.outer(amps[i], amps[i].conj()) + (1 - vis[i]) / total * np.eye(4)
        t = block.trace().real
        scalar = fef_witness(two_qubit(block / t)).score
        assert abs(scores[i] - scalar) <= 1e-12
        assert abs(weights[i] - t) <= 1e-12


def test_batch_submatrix_kernel_matches_scalar(rng):
    blocks = []
    for _ in range(32):
        rho = random_density(rng, 2, 2)
        blocks.append(rho.mat * rng.uniform(0.1, 1.0))
    blocks = np.array(blocks)
    scores, weights = scores_from_submatrices(blocks)
    for i, block in enumerate(blocks):
        t = block.trace().real
        assert abs(scores[i] - fef_witness(two_qubit(block / t)).score) <= 1e-12
        assert abs(weights[i] - t) <= 1e-12


def test_zero_weight_amplitudes_never_detect():
    amps = np.zeros((1, 4), dtype=complex)
    scores, _ = scores_from_amplitudes(amps, np.array([1.0]), 9)
    assert scores[0] == -1.0


def test_score_from_t_matches_pauli_expectation(rng):
    for _ in range(10):
        rho = random_density(rng, 2, 2)
        t = np.array([[np.trace(rho.mat @ kron(PAULI[m], PAULI[n])).real
                       for n in range(3)] for m in range(3)])
        assert abs(score_from_t(t) - fef_witness(rho).score) <= 1e-12
