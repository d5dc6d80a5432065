import logging
from typing import Sequence

import numpy as np

from wavepack.base.exception import RankDeficiencyError
from wavepack.base.operator import SparseOperator

logger = logging.getLogger(__name__)


def gram_schmidt_orthogonalize(
    op: SparseOperator,
    boundary_rows: Sequence[int],
    rank_tol: float = 1e-8,
    prune_tol: float = 1e-14,
) -> SparseOperator:
    """Re-orthogonalize boundary_rows (in the given order) against all other rows and each other.

    The other rows must already be orthonormal; they are copied unchanged.
    Every projection runs twice, once is not enough in floating point.
    """
    boundary_rows = [int(i) for i in boundary_rows]
    if len(boundary_rows) == 0:
        return op
    if len(set(boundary_rows)) != len(boundary_rows):
        raise ValueError("boundary rows contain duplicates")
    if min(boundary_rows) < 0 or max(boundary_rows) >= op.rows:
        raise ValueError(f"boundary row out of range (rows={op.rows})")

    csr = op.to_scipy()
    is_boundary = np.zeros(op.rows, dtype=bool)
    is_boundary[boundary_rows] = True
    interior = csr[np.flatnonzero(~is_boundary)]
    interior_t = interior.T.tocsr()

    done = np.zeros((len(boundary_rows), op.cols))
    for k, row in enumerate(boundary_rows):
        v = csr[row].toarray().ravel()
        norm0 = np.linalg.norm(v)
        for _ in range(2):
            if interior.shape[0] > 0:
                v = v - interior_t @ (interior @ v)
            for j in range(k):
                v = v - (done[j] @ v) * done[j]
        norm = np.linalg.norm(v)
        if norm0 == 0 or norm < rank_tol * norm0:
            raise RankDeficiencyError(row, float(norm))
        v = v / norm
        v[np.abs(v) <= prune_tol] = 0.0
        done[k] = v

    keep = ~is_boundary[op.row_idx]
    rows = [op.row_idx[keep]]
    cols = [op.col_idx[keep]]
    vals = [op.values[keep]]
    for k, row in enumerate(boundary_rows):
        nz = np.flatnonzero(done[k])
        rows.append(np.full(len(nz), row))
        cols.append(nz)
        vals.append(done[k][nz])

    logger.debug(f"gram-schmidt: {len(boundary_rows)}/{op.rows} rows re-orthogonalized")
    return SparseOperator(op.rows, op.cols, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
