"""Vectorised, deterministically chunked kernels behind the ensemble sweeps.

Work is split into fixed-size chunks; chunk c of a task draws every random
number it needs, in a fixed order, from substream(seed, tag, ..., c).  Chunk
results are integer count vectors and addition is commutative, so aggregate
results are bit-identical for any worker count.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .constants import NPT_TOL, WITNESS_TOL
from .linalg import haar_unitary
from .rng import substream
from .transforms import LutKind, qudit_hadamard
from .witness import scores_from_amplitudes

CHUNK = 16384

_TAG_ICPS = 0
_TAG_QUASI = 1
_TAG_GRID = 2


def _ordered_pairs(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    """n ordered distinct level pairs, uniform; shape (n, 2)."""
    i = rng.integers(0, d, size=n)
    j = rng.integers(0, d - 1, size=n)
    j = j + (j >= i)
    return np.stack([i, j], axis=1)


def _permutations(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    return rng.permuted(np.tile(np.arange(d), (n, 1)), axis=1)


def _schmidt_amps(s: np.ndarray, a: np.ndarray, b: np.ndarray, h: np.ndarray,
                  kind: LutKind, u: np.ndarray | None = None,
                  v: np.ndarray | None = None) -> np.ndarray:
    """Amplitudes of (U_A x V_B)|psi> on the four selected components.

    s: (n, d) Schmidt coefficients; a, b: (n, 2) selected levels; the |psi>
    amplitude matrix is diag(s), so each strategy reduces to a small gather.
    """
    n = s.shape[0]
    if kind is LutKind.IDENTITY:
        s_a = np.take_along_axis(s, a, axis=1)
        eq = a[:, :, None] == b[:, None, :]
        return (s_a[:, :, None] * eq).reshape(n, 4).astype(complex)
    if kind is LutKind.HADAMARD_B:
        # amplitude matrix diag(s) H^T: entry (i, j) = s_i H[j, i]
        s_a = np.take_along_axis(s, a, axis=1)
        h_gather = h[b[:, None, :], a[:, :, None]]
        return (s_a[:, :, None] * h_gather).reshape(n, 4)
    if kind is LutKind.HADAMARD_BOTH:
        # H diag(s) H^T: entry (i, j) = sum_k H[i, k] s_k H[j, k]
        return np.einsum("nk,nqk,npk->nqp", s.astype(complex), h[a], h[b]).reshape(n, 4)
    # RANDOM_BOTH: U diag(s) V^T with per-sample Haar U, V
    u_rows = np.take_along_axis(u, a[:, :, None], axis=1)
    v_rows = np.take_along_axis(v, b[:, :, None], axis=1)
    return np.einsum("nqk,nk,npk->nqp", u_rows, s.astype(complex), v_rows).reshape(n, 4)


def _state_amps(psi_flat: np.ndarray, a: np.ndarray, b: np.ndarray, d: int) -> np.ndarray:
    """Gather the four selected amplitudes from full state vectors (n, d*d)."""
    idx = (a[:, :, None] * d + b[:, None, :]).reshape(-1, 4)
    return np.take_along_axis(psi_flat, idx, axis=1)


def _strategy_detections(s_or_psi: np.ndarray, vis: np.ndarray, d: int, kind: LutKind,
                         mode: str, rng: np.random.Generator, h: np.ndarray,
                         schmidt: bool, shared_sel) -> np.ndarray:
    """Detection flags (n,) for one strategy; draws selections (and unitaries)."""
    n = len(vis)
    u = v = None
    if kind is LutKind.RANDOM_BOTH:
        if not schmidt:
            raise ValueError("random unitaries are redundant for Haar-random states")
        u = haar_unitary(d, rng, size=n)
        v = haar_unitary(d, rng, size=n)

    def amps(a, b):
        if schmidt:
            return _schmidt_amps(s_or_psi, a, b, h, kind, u, v)
        return _state_amps(s_or_psi, a, b, d)

    if mode == "single":
        a, b = shared_sel if shared_sel is not None else (
            _ordered_pairs(rng, d, n), _ordered_pairs(rng, d, n))
        scores, _ = scores_from_amplitudes(amps(a, b), vis, d * d)
        return scores > WITNESS_TOL
    # parallel: disjoint pairs from one permutation per side
    pa, pb = shared_sel if shared_sel is not None else (
        _permutations(rng, d, n), _permutations(rng, d, n))
    hit = np.zeros(n, dtype=bool)
    for k in range(d // 2):
        a, b = pa[:, 2 * k:2 * k + 2], pb[:, 2 * k:2 * k + 2]
        scores, _ = scores_from_amplitudes(amps(a, b), vis, d * d)
        hit |= scores > WITNESS_TOL
    return hit


def _icps_entangled_mask(alpha: np.ndarray, v: np.ndarray, d: int, r: int,
                         ground_truth: str) -> np.ndarray:
    """Conditioning rule for the sampled states; see montecarlo.IcpsGroundTruth."""
    alpha_r = np.sqrt(np.clip(1.0 - (r - 1) * alpha ** 2, 0.0, None))
    d2 = d * d
    v_a = 1.0 / (1.0 + d2 * alpha ** 2)
    v_b = 1.0 / (1.0 + d2 * alpha * alpha_r)
    if ground_truth == "npt":
        thr = v_b if r == 2 else np.minimum(v_a, v_b)
    elif ground_truth == "piecewise":
        thr = np.where(alpha > 1.0 / np.sqrt(r), v_a, v_b)
    elif ground_truth == "rank2":
        thr = 1.0 / (1.0 + d2 * alpha * np.maximum(alpha, np.sqrt(1.0 - alpha ** 2)))
    else:
        raise ValueError(f"unknown ground truth rule {ground_truth!r}")
    return v > thr


def _icps_chunk(seed: int, chunk_idx: int, n: int, d: int, r: int,
                kinds: tuple[LutKind, ...], mode: str, shared: bool,
                ground_truth: str) -> np.ndarray:
    """Counts [sampled, entangled, det_per_strategy..., det_combined]."""
    rng = substream(seed, _TAG_ICPS, chunk_idx)
    amax = 1.0 / np.sqrt(r - 1)
    alpha = rng.uniform(0.0, amax, n)
    vis = rng.uniform(0.0, 1.0, n)
    ent = _icps_entangled_mask(alpha, vis, d, r, ground_truth)
    s = np.zeros((n, d))
    s[:, : r - 1] = alpha[:, None]
    s[:, r - 1] = np.sqrt(np.clip(1.0 - (r - 1) * alpha ** 2, 0.0, None))
    h = qudit_hadamard(d)
    shared_sel = None
    if shared:
        shared_sel = ((_ordered_pairs(rng, d, n), _ordered_pairs(rng, d, n))
                      if mode == "single" else
                      (_permutations(rng, d, n), _permutations(rng, d, n)))
    counts = [n, int(ent.sum())]
    any_hit = np.zeros(n, dtype=bool)
    for kind in kinds:
        hit = _strategy_detections(s, vis, d, kind, mode, rng, h, True, shared_sel)
        counts.append(int((hit & ent).sum()))
        any_hit |= hit
    counts.append(int((any_hit & ent).sum()))
    return np.array(counts, dtype=np.int64)


def _quasi_chunk(seed: int, chunk_idx: int, n: int, d: int, noise: float,
                 mode: str) -> np.ndarray:
    """Counts [sampled, entangled, detected] for Haar states at fixed noise."""
    rng = substream(seed, _TAG_QUASI, chunk_idx)
    vis = 1.0 - noise
    z = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    z /= np.linalg.norm(z, axis=(1, 2), keepdims=True)
    # NPT iff vis * (product of two largest Schmidt coefficients) beats the
    # noise floor; the Schmidt coefficients are the singular values of the
    # amplitude matrix.
    lam = np.linalg.svd(z, compute_uv=False)
    ent = vis * lam[:, 0] * lam[:, 1] - (1.0 - vis) / (d * d) > NPT_TOL
    vis_arr = np.full(n, vis)
    hit = _strategy_detections(z.reshape(n, d * d), vis_arr, d, LutKind.IDENTITY,
                               mode, rng, None, False, None)
    return np.array([n, int(ent.sum()), int((hit & ent).sum())], dtype=np.int64)


def _grid_chunk(seed: int, cell_idx: int, chunk_idx: int, n: int, d: int, r: int,
                alpha: float, vis: float, kinds: tuple[LutKind, ...],
                mode: str, shared: bool) -> np.ndarray:
    """Counts [trials, det_per_strategy..., det_combined] for one fixed state."""
    rng = substream(seed, _TAG_GRID, cell_idx, chunk_idx)
    s_row = np.zeros(d)
    s_row[: r - 1] = alpha
    s_row[r - 1] = np.sqrt(max(1.0 - (r - 1) * alpha ** 2, 0.0))
    s = np.tile(s_row, (n, 1))
    vis_arr = np.full(n, vis)
    h = qudit_hadamard(d)
    shared_sel = None
    if shared:
        shared_sel = ((_ordered_pairs(rng, d, n), _ordered_pairs(rng, d, n))
                      if mode == "single" else
                      (_permutations(rng, d, n), _permutations(rng, d, n)))
    counts = [n]
    any_hit = np.zeros(n, dtype=bool)
    for kind in kinds:
        hit = _strategy_detections(s, vis_arr, d, kind, mode, rng, h, True, shared_sel)
        counts.append(int(hit.sum()))
        any_hit |= hit
    counts.append(int(any_hit.sum()))
    return np.array(counts, dtype=np.int64)


_CHUNK_FNS = {"icps": _icps_chunk, "quasi": _quasi_chunk, "grid": _grid_chunk}


def _run_task(task: tuple) -> np.ndarray:
    name, args = task
    return _CHUNK_FNS[name](*args)


def run_tasks(tasks: list[tuple], workers: int = 1) -> list[np.ndarray]:
    """Execute chunk tasks, possibly across processes; order-preserving."""
    if workers <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def chunk_sizes(n: int, chunk: int = CHUNK) -> list[int]:
    sizes = [chunk] * (n // chunk)
    if n % chunk:
        sizes.append(n % chunk)
    return sizes
