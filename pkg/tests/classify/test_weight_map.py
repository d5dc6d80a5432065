import os
import tempfile
import unittest

import numpy as np

from wavepack.base.order import freq_order_permutation
from wavepack.classify.model import LinearModel
from wavepack.classify.trainer import train
from wavepack.classify.weight_map import export_weight_map, flatten_weights, reshape_weights, save_weight_map_csv


class Test(unittest.TestCase):
    def test_reshape(self):
        w = np.arange(2 * 16 * 3 * 2 * 2, dtype=float).reshape(2, -1)
        m = LinearModel(w, np.zeros(2))
        r = reshape_weights(m, 2, 2, 2, 3)
        self.assertEqual(r.shape, (2, 16, 3, 2, 2))
        np.testing.assert_array_equal(flatten_weights(r), w)
        with self.assertRaises(ValueError):
            reshape_weights(m, 3, 2, 2, 3)

    def test_export(self):
        rng = np.random.default_rng(0)
        m = LinearModel(rng.normal(size=(2, 64 * 2 * 4 * 4)), np.zeros(2))
        natural = export_weight_map(m, 3, 4, 4, 2, "natural")
        self.assertEqual(natural.shape, (2, 64, 4, 4))
        np.testing.assert_allclose(natural, reshape_weights(m, 3, 4, 4, 2).mean(axis=2))
        freq = export_weight_map(m, 3, 4, 4, 2)
        np.testing.assert_array_equal(freq, natural[:, freq_order_permutation(3)])

    def test_symmetric_negatives(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(40, 16 * 4))
        y = np.repeat([0, 1], 20)
        x[y == 1, :8] += 1.0
        result = train(x, y, x, y, epochs=5, batch_size=8, symmetric_init=True)
        maps = export_weight_map(result.model, 2, 2, 2, 1)
        corr = np.corrcoef(maps[0].ravel(), maps[1].ravel())[0, 1]
        self.assertLess(corr, -0.99)
        np.testing.assert_allclose(result.model.bias[0], -result.model.bias[1], atol=1e-12)

    def test_csv(self):
        m = LinearModel(np.ones((2, 4)), np.zeros(2))
        maps = export_weight_map(m, 1, 1, 1, 1)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "weights.csv")
            save_weight_map_csv(maps, 1, "frequency", path)
            with open(path, encoding="utf-8") as f:
                lines = f.read().splitlines()
        self.assertEqual(lines[0], "class,packet,label,row,col,value")
        self.assertEqual(len(lines), 1 + 8)
        self.assertEqual(lines[1], "0,0,a,0,0,1")


if __name__ == "__main__":
    unittest.main(module=__name__, defaultTest="Test.test_symmetric_negatives", verbosity=2)
