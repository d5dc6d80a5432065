import unittest

import numpy as np

from wavepack.base.define import BoundaryMode
from wavepack.base.exception import RankDeficiencyError
from wavepack.base.operator import SparseOperator
from wavepack.transform.boundary import gram_schmidt_orthogonalize
from wavepack.transform.matrix import boundary_rows_1d, single_scale_matrix_1d


class Test(unittest.TestCase):
    def test_haar_unchanged(self):
        tr = single_scale_matrix_1d("haar", 32, BoundaryMode.truncated)
        gs = single_scale_matrix_1d("haar", 32, BoundaryMode.gram_schmidt)
        np.testing.assert_array_equal(tr.to_dense(), gs.to_dense())

    def test_db2_rows(self):
        rows = boundary_rows_1d("db2", 32)
        # one per side per block
        self.assertEqual(rows, [0, 16, 31, 15])

        gs = single_scale_matrix_1d("db2", 32).to_dense()
        tr = single_scale_matrix_1d("db2", 32, BoundaryMode.truncated).to_dense()
        for i in range(32):
            with self.subTest((i,)):
                if i in rows:
                    self.assertAlmostEqual(float(np.linalg.norm(gs[i])), 1.0, delta=1e-12)
                    self.assertFalse(np.array_equal(gs[i], tr[i]))
                else:
                    np.testing.assert_array_equal(gs[i], tr[i])
        np.testing.assert_allclose(gs @ gs.T, np.eye(32), atol=1e-12)

    def test_no_rows(self):
        op = SparseOperator.identity(4)
        self.assertIs(gram_schmidt_orthogonalize(op, []), op)

    def test_rank_deficiency(self):
        d = np.eye(4)
        d[3] = d[0]
        with self.assertRaises(RankDeficiencyError) as ctx:
            gram_schmidt_orthogonalize(SparseOperator.from_dense(d), [3])
        self.assertEqual(ctx.exception.row, 3)

    def test_invalid_rows(self):
        op = SparseOperator.identity(4)
        with self.subTest(("duplicate",)):
            with self.assertRaises(ValueError):
                gram_schmidt_orthogonalize(op, [1, 1])
        with self.subTest(("range",)):
            with self.assertRaises(ValueError):
                gram_schmidt_orthogonalize(op, [4])

    def test_orthonormalize_pair(self):
        d = np.eye(3)
        d[1] = [1.0, 1.0, 0.0]
        d[2] = [1.0, 1.0, 1.0]
        op = gram_schmidt_orthogonalize(SparseOperator.from_dense(d), [1, 2])
        np.testing.assert_allclose(op.to_dense(), np.eye(3), atol=1e-15)


if __name__ == "__main__":
    unittest.main(module=__name__, defaultTest="Test.test_db2_rows", verbosity=2)
