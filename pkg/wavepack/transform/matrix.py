import logging
from functools import lru_cache, reduce
from typing import List, Tuple, Union

import numpy as np
import scipy.sparse as sp

from wavepack.base.define import BoundaryMode
from wavepack.base.filter import WaveletFilter
from wavepack.base.operator import SparseOperator
from wavepack.base.registration import make_filter
from wavepack.transform.boundary import gram_schmidt_orthogonalize

logger = logging.getLogger(__name__)

FilterLike = Union[str, WaveletFilter]
ModeLike = Union[str, BoundaryMode]


def filter_phase(filter_len: int) -> int:
    """Row i starts at column 2i - phase; centers the support so both edges wrap symmetrically."""
    return filter_len // 2 - 1


def _strided_entries(vec: np.ndarray, length: int, reverse: bool, wrap: bool):
    n = len(vec)
    i = np.arange(length // 2)[:, None]
    cols = 2 * i - filter_phase(n) + np.arange(n)[None, :]
    rows = np.broadcast_to(i, cols.shape)
    vals = np.broadcast_to(vec[::-1] if reverse else vec, cols.shape)
    if wrap:
        return rows.ravel(), (cols % length).ravel(), vals.ravel()
    keep = (cols >= 0) & (cols < length)
    return rows[keep], cols[keep], vals[keep]


def _check_length(length: int, name: str = "signal_len") -> None:
    if int(length) != length or length < 2 or length % 2 != 0:
        raise ValueError(f"{name} must be an even integer >= 2 ({length})")


def _check_levels(length: int, levels: int, name: str = "signal_len") -> None:
    _check_length(length, name)
    if int(levels) != levels or levels < 1:
        raise ValueError(f"levels must be a positive integer ({levels})")
    if 2**levels > length:
        raise ValueError(f"level too deep: {levels} levels need {name} >= {2 ** levels} ({length})")
    if length % (2**levels) != 0:
        raise ValueError(f"{name} ({length}) is not divisible by 2^{levels}")


def conv_matrix_1d(filter_vec, signal_len: int) -> SparseOperator:
    """(signal_len/2) x signal_len stride-2 convolution with cyclic wrap."""
    vec = np.asarray(filter_vec, dtype=np.float64)
    _check_length(signal_len)
    if signal_len < len(vec):
        raise ValueError(f"signal_len ({signal_len}) is shorter than the filter ({len(vec)})")
    r, c, v = _strided_entries(vec, signal_len, reverse=True, wrap=True)
    return SparseOperator(signal_len // 2, signal_len, r, c, v)


def boundary_rows_1d(filter: FilterLike, length: int) -> List[int]:
    """Rows of a single-scale [H_L; H_H] block whose support crosses an edge, in orthogonalization order:
    top-edge rows ascending, then bottom-edge rows descending.
    """
    n = make_filter(filter).length
    half = length // 2
    s = filter_phase(n)
    top, bottom = [], []
    for block in range(2):
        for i in range(half):
            start = 2 * i - s
            if start < 0:
                top.append(block * half + i)
            elif start + n - 1 >= length:
                bottom.append(block * half + i)
    return sorted(top) + sorted(bottom, reverse=True)


@lru_cache(maxsize=256)
def _single_scale(filter: WaveletFilter, length: int, mode: BoundaryMode) -> SparseOperator:
    half = length // 2
    r0, c0, v0 = _strided_entries(filter.dec_lo, length, reverse=True, wrap=False)
    r1, c1, v1 = _strided_entries(filter.dec_hi, length, reverse=True, wrap=False)
    op = SparseOperator(length, length, np.concatenate([r0, r1 + half]), np.concatenate([c0, c1]), np.concatenate([v0, v1]))
    if mode == BoundaryMode.gram_schmidt:
        op = gram_schmidt_orthogonalize(op, boundary_rows_1d(filter, length))
    logger.debug(f"single scale {filter.name} len={length} {mode.name}: nnz={op.nnz}")
    return op


def single_scale_matrix_1d(filter: FilterLike, length: int, mode: ModeLike = BoundaryMode.gram_schmidt) -> SparseOperator:
    """One analysis stage [H_L; H_H], length x length."""
    _check_length(length, "length")
    return _single_scale(make_filter(filter), int(length), BoundaryMode.from_str(mode))


@lru_cache(maxsize=256)
def _single_scale_synthesis(filter: WaveletFilter, length: int, mode: BoundaryMode) -> SparseOperator:
    if mode == BoundaryMode.gram_schmidt:
        return _single_scale(filter, length, mode).T

    # transposed convolution with the synthesis pair
    half = length // 2
    r0, c0, v0 = _strided_entries(filter.rec_lo, length, reverse=False, wrap=False)
    r1, c1, v1 = _strided_entries(filter.rec_hi, length, reverse=False, wrap=False)
    return SparseOperator(length, length, np.concatenate([c0, c1]), np.concatenate([r0, r1 + half]), np.concatenate([v0, v1]))


def single_scale_synthesis_1d(filter: FilterLike, length: int, mode: ModeLike = BoundaryMode.gram_schmidt) -> SparseOperator:
    _check_length(length, "length")
    return _single_scale_synthesis(make_filter(filter), int(length), BoundaryMode.from_str(mode))


def _embed(stage: sp.spmatrix, total: int) -> sp.csr_matrix:
    rest = total - stage.shape[0]
    if rest == 0:
        return sp.csr_matrix(stage)
    return sp.block_diag((stage, sp.identity(rest)), format="csr")


def _chain(mats: List[sp.spmatrix]) -> sp.csr_matrix:
    # mats[0] applied first
    return reduce(lambda acc, m: m @ acc, mats[1:], sp.csr_matrix(mats[0]))


def stage_matrices_1d(
    filter: FilterLike,
    signal_len: int,
    levels: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
    synthesis: bool = False,
) -> List[SparseOperator]:
    """Per-scale blocks [[H_L; H_H], I], finest scale first."""
    _check_levels(signal_len, levels)
    f = make_filter(filter)
    mode = BoundaryMode.from_str(mode)
    stages = []
    for j in range(levels):
        length = signal_len >> j
        if synthesis:
            stage = _single_scale_synthesis(f, length, mode)
        else:
            stage = _single_scale(f, length, mode)
        stages.append(SparseOperator.from_scipy(_embed(stage.to_scipy(), signal_len)))
    return stages


def analysis_matrix_1d(
    filter: FilterLike,
    signal_len: int,
    levels: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
) -> SparseOperator:
    """Output layout [a_J; d_J; ...; d_1]."""
    stages = stage_matrices_1d(filter, signal_len, levels, mode)
    return SparseOperator.from_scipy(_chain([s.to_scipy() for s in stages]))


def synthesis_matrix_1d(
    filter: FilterLike,
    signal_len: int,
    levels: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
) -> SparseOperator:
    mode = BoundaryMode.from_str(mode)
    if mode == BoundaryMode.gram_schmidt:
        return analysis_matrix_1d(filter, signal_len, levels, mode).T
    stages = stage_matrices_1d(filter, signal_len, levels, mode, synthesis=True)
    return SparseOperator.from_scipy(_chain([s.to_scipy() for s in reversed(stages)]))


# ---------------------------------
# 2D
# ---------------------------------
def filter_quadruple_2d(filter: FilterLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(f_a, f_h, f_v, f_d) as outer products, indexed [x][y]."""
    f = make_filter(filter)
    lo, hi = f.dec_lo, f.dec_hi
    return np.outer(lo, lo), np.outer(lo, hi), np.outer(hi, lo), np.outer(hi, hi)


@lru_cache(maxsize=64)
def block_permutation_2d(height: int, width: int) -> np.ndarray:
    """Rows of kron(T_height, T_width) rearranged into [a; h; v; d] blocks, each row-major.

    h is high-pass along height, v high-pass along width.
    """
    h2, w2 = height // 2, width // 2
    ii, jj = np.meshgrid(np.arange(h2), np.arange(w2), indexing="ij")
    perm = []
    for bh, bw in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        perm.append(((bh * h2 + ii) * width + (bw * w2 + jj)).ravel())
    perm = np.concatenate(perm)
    perm.flags.writeable = False
    return perm


def _check_levels_2d(height: int, width: int, levels: int) -> None:
    _check_levels(height, levels, "height")
    _check_levels(width, levels, "width")


def _axis_rank(filter: WaveletFilter, length: int) -> np.ndarray:
    # interior rows first in index order, then boundary rows in processing order
    bnd = boundary_rows_1d(filter, length)
    bnd_set = set(bnd)
    interior = [i for i in range(length) if i not in bnd_set]
    rank = np.empty(length, dtype=np.int64)
    rank[interior + bnd] = np.arange(length)
    return rank


@lru_cache(maxsize=64)
def _single_scale_2d(filter: WaveletFilter, height: int, width: int, mode: BoundaryMode, direct: bool) -> SparseOperator:
    perm = block_permutation_2d(height, width)
    if not direct or mode == BoundaryMode.truncated:
        k = sp.kron(_single_scale(filter, height, mode).to_scipy(), _single_scale(filter, width, mode).to_scipy(), format="csr")
        return SparseOperator.from_scipy(k[perm])

    # orthogonalize the 2D truncated stage itself
    k = sp.kron(
        _single_scale(filter, height, BoundaryMode.truncated).to_scipy(),
        _single_scale(filter, width, BoundaryMode.truncated).to_scipy(),
        format="csr",
    )
    rank_h = _axis_rank(filter, height)
    rank_w = _axis_rank(filter, width)
    n_int_h = height - len(boundary_rows_1d(filter, height))
    n_int_w = width - len(boundary_rows_1d(filter, width))
    rows = np.arange(height * width)
    rh, rw = rank_h[rows // width], rank_w[rows % width]
    boundary = rows[(rh >= n_int_h) | (rw >= n_int_w)]
    boundary = boundary[np.lexsort((rw[boundary], rh[boundary]))]
    op = gram_schmidt_orthogonalize(SparseOperator.from_scipy(k), boundary)
    return SparseOperator.from_scipy(op.to_scipy()[perm])


def single_scale_matrix_2d(
    filter: FilterLike,
    height: int,
    width: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
    direct: bool = False,
) -> SparseOperator:
    _check_length(height, "height")
    _check_length(width, "width")
    return _single_scale_2d(make_filter(filter), int(height), int(width), BoundaryMode.from_str(mode), direct)


def _single_scale_synthesis_2d(filter: WaveletFilter, height: int, width: int, mode: BoundaryMode) -> sp.csr_matrix:
    k = sp.kron(
        _single_scale_synthesis(filter, height, mode).to_scipy(),
        _single_scale_synthesis(filter, width, mode).to_scipy(),
        format="csc",
    )
    return sp.csr_matrix(k[:, block_permutation_2d(height, width)])


def analysis_matrix_2d(
    filter: FilterLike,
    height: int,
    width: int,
    levels: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
    direct: bool = False,
) -> SparseOperator:
    """Acts on the row-major flattened image; each scale splits the current a-block into [a; h; v; d]."""
    _check_levels_2d(height, width, levels)
    f = make_filter(filter)
    mode = BoundaryMode.from_str(mode)
    total = height * width
    stages = []
    for j in range(levels):
        stage = _single_scale_2d(f, height >> j, width >> j, mode, direct)
        stages.append(_embed(stage.to_scipy(), total))
    return SparseOperator.from_scipy(_chain(stages))


def analysis_matrix_2d_direct(
    filter: FilterLike,
    height: int,
    width: int,
    levels: int,
) -> SparseOperator:
    """Gram-Schmidt applied to the 2D stages instead of composing the 1D results."""
    return analysis_matrix_2d(filter, height, width, levels, BoundaryMode.gram_schmidt, direct=True)


def synthesis_matrix_2d(
    filter: FilterLike,
    height: int,
    width: int,
    levels: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
) -> SparseOperator:
    mode = BoundaryMode.from_str(mode)
    if mode == BoundaryMode.gram_schmidt:
        return analysis_matrix_2d(filter, height, width, levels, mode).T
    _check_levels_2d(height, width, levels)
    f = make_filter(filter)
    total = height * width
    stages = [_embed(_single_scale_synthesis_2d(f, height >> j, width >> j, mode), total) for j in range(levels)]
    return SparseOperator.from_scipy(_chain(stages[::-1]))


def wavelet_packet_matrix_2d(
    filter: FilterLike,
    height: int,
    width: int,
    level: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
) -> SparseOperator:
    """Full packet analysis: every node is split at every level. Output in natural packet order."""
    _check_levels_2d(height, width, level)
    f = make_filter(filter)
    mode = BoundaryMode.from_str(mode)
    stages = []
    for q in range(level):
        stage = _single_scale_2d(f, height >> q, width >> q, mode, False)
        stages.append(sp.kron(sp.identity(4**q), stage.to_scipy(), format="csr"))
    return SparseOperator.from_scipy(_chain(stages))
