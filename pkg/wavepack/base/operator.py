import csv
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Tuple

import numpy as np
import scipy.sparse as sp

from wavepack.base.define import Entry
from wavepack.utils.common import to_str_float

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Coordinate-form sparse matrix, entries sorted by (row, col).

    Immutable; the CSR form used for products is built once on demand.
    """

    rows: int
    cols: int
    row_idx: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        assert self.rows > 0 and self.cols > 0, f"invalid shape ({self.rows}, {self.cols})"
        r = np.asarray(self.row_idx, dtype=np.int64)
        c = np.asarray(self.col_idx, dtype=np.int64)
        v = np.asarray(self.values, dtype=np.float64)
        if not (r.shape == c.shape == v.shape and r.ndim == 1):
            raise ValueError("row, col and value arrays must be 1-d and of equal length")
        if len(r) > 0:
            if r.min() < 0 or r.max() >= self.rows or c.min() < 0 or c.max() >= self.cols:
                raise ValueError(f"coordinate out of range for shape ({self.rows}, {self.cols})")

        order = np.lexsort((c, r))
        r, c, v = r[order], c[order], v[order]
        keys = r * self.cols + c
        if len(keys) > 1 and np.any(keys[1:] == keys[:-1]):
            dup = int(np.flatnonzero(keys[1:] == keys[:-1])[0])
            raise ValueError(f"duplicate coordinate ({r[dup]}, {c[dup]})")

        for arr in (r, c, v):
            arr.flags.writeable = False
        object.__setattr__(self, "row_idx", r)
        object.__setattr__(self, "col_idx", c)
        object.__setattr__(self, "values", v)

    # ------------------------------
    # construction
    # ------------------------------
    @staticmethod
    def from_entries(rows: int, cols: int, entries: List[Entry]) -> "SparseOperator":
        if len(entries) == 0:
            return SparseOperator(rows, cols, np.zeros(0), np.zeros(0), np.zeros(0))
        r, c, v = zip(*entries)
        return SparseOperator(rows, cols, np.array(r), np.array(c), np.array(v))

    @staticmethod
    def from_scipy(mat, prune_tol: float = 0.0) -> "SparseOperator":
        coo = sp.coo_matrix(mat)
        coo.sum_duplicates()
        mask = np.abs(coo.data) > prune_tol
        return SparseOperator(coo.shape[0], coo.shape[1], coo.row[mask], coo.col[mask], coo.data[mask])

    @staticmethod
    def from_dense(arr: np.ndarray) -> "SparseOperator":
        return SparseOperator.from_scipy(sp.coo_matrix(np.asarray(arr, dtype=np.float64)))

    @staticmethod
    def identity(n: int) -> "SparseOperator":
        idx = np.arange(n)
        return SparseOperator(n, n, idx, idx, np.ones(n))

    # ------------------------------
    # views
    # ------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def entries(self) -> List[Entry]:
        return [(int(r), int(c), float(v)) for r, c, v in zip(self.row_idx, self.col_idx, self.values)]

    @cached_property
    def _csr(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.values, (self.row_idx, self.col_idx)), shape=self.shape)

    def to_scipy(self) -> sp.csr_matrix:
        return self._csr.copy()

    def to_dense(self) -> np.ndarray:
        return self._csr.toarray()

    def nonzero_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[self.row_idx, self.col_idx] = True
        return mask

    # ------------------------------
    # algebra
    # ------------------------------
    @property
    def T(self) -> "SparseOperator":
        return self.transpose()

    def transpose(self) -> "SparseOperator":
        return SparseOperator(self.cols, self.rows, self.col_idx, self.row_idx, self.values)

    def matmul(self, other: "SparseOperator") -> "SparseOperator":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return SparseOperator.from_scipy(self._csr @ other._csr)

    def __matmul__(self, other):
        if isinstance(other, SparseOperator):
            return self.matmul(other)
        return self.apply(other)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """x: [cols] or [cols, k]"""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.cols:
            raise ValueError(f"operator has {self.cols} columns, input has {x.shape[0]} rows")
        return self._csr @ x

    def identity_residual(self) -> float:
        """max |self - I|"""
        if self.rows != self.cols:
            raise ValueError(f"not square {self.shape}")
        diff = (self._csr - sp.identity(self.rows, format="csr")).tocoo()
        if diff.nnz == 0:
            return 0.0
        return float(np.max(np.abs(diff.data)))

    def orthogonality_residual(self) -> float:
        """max |A A^T - I|"""
        return SparseOperator.from_scipy(self._csr @ self._csr.T).identity_residual()

    # ------------------------------
    # io
    # ------------------------------
    def save_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["row", "col", "value"])
            for r, c, v in zip(self.row_idx, self.col_idx, self.values):
                w.writerow([int(r), int(c), to_str_float(v)])
        logger.debug(f"save operator {self.shape} nnz={self.nnz}: {path}")

    @staticmethod
    def load_csv(path: str, rows: int, cols: int) -> "SparseOperator":
        entries = []
        with open(path, encoding="utf-8", newline="") as f:
            for d in csv.DictReader(f):
                entries.append((int(d["row"]), int(d["col"]), float(d["value"])))
        return SparseOperator.from_entries(rows, cols, entries)

    def save_pattern(self, path: str) -> None:
        """Nonzero mask as a black-on-white bitmap (format from the file extension, e.g. .pbm/.png)."""
        from PIL import Image

        img = np.where(self.nonzero_mask(), 0, 255).astype(np.uint8)
        Image.fromarray(img).convert("1").save(path)
