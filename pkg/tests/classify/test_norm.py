import unittest

import numpy as np

from wavepack.classify.norm import STD_FLOOR, apply_norm, denormalize, fit_norm


class Test(unittest.TestCase):
    def test_fit_apply(self):
        rng = np.random.default_rng(0)
        # [n][packets][channels][h][w]
        x = rng.normal(size=(20, 4, 3, 2, 2)) * np.array([1.0, 2.0, 5.0])[None, None, :, None, None] + 7.0
        norm = fit_norm(x, channel_axis=2)
        self.assertEqual(norm.channels, 3)
        y = apply_norm(x, norm)
        np.testing.assert_allclose(y.mean(axis=(0, 1, 3, 4)), 0.0, atol=1e-12)
        np.testing.assert_allclose(y.std(axis=(0, 1, 3, 4)), 1.0, atol=1e-12)
        np.testing.assert_allclose(denormalize(y, norm), x, atol=1e-12)

    def test_pixel_axis(self):
        x = np.stack([np.full((2, 4, 4), v) for v in range(5)]).astype(float)
        x[:, 1] *= 2.0
        norm = fit_norm(x)
        np.testing.assert_allclose(norm.mean, [2.0, 4.0])
        np.testing.assert_allclose(norm.std, [np.sqrt(2.0), 2 * np.sqrt(2.0)])

    def test_zero_variance(self):
        x = np.ones((5, 2, 3))
        with self.assertLogs("wavepack.classify.norm", level="WARNING"):
            norm = fit_norm(x)
        np.testing.assert_array_equal(norm.std, STD_FLOOR)
        np.testing.assert_array_equal(apply_norm(x, norm), 0.0)

    def test_channel_mismatch(self):
        norm = fit_norm(np.random.default_rng(0).normal(size=(4, 3, 2)))
        with self.assertRaises(ValueError):
            apply_norm(np.zeros((4, 2, 2)), norm)


if __name__ == "__main__":
    unittest.main(module=__name__, defaultTest="Test.test_fit_apply", verbosity=2)
