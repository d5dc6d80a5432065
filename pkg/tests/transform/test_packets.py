import unittest

import numpy as np

from wavepack.base.define import BoundaryMode, PacketOrdering
from wavepack.base.packet import PacketTensor
from wavepack.transform.packets import fwt_2d, fwt_2d_via_operator, ifwt_2d, iwpt_2d, wpt_2d, wpt_2d_batch
from wavepack.utils.common import is_package_installed


class Test(unittest.TestCase):
    def test_constant_image(self):
        p = wpt_2d(np.full((1, 32, 32), 0.25), "haar", 3)
        np.testing.assert_allclose(p.node("aaa"), 2.0, atol=1e-14)
        rest = np.delete(p.data, 0, axis=0)
        np.testing.assert_allclose(rest, 0.0, atol=1e-14)

    def test_shape(self):
        img = np.random.default_rng(0).random((3, 128, 128))
        p = wpt_2d(img, "db2", 3)
        self.assertEqual(p.data.shape, (64, 3, 16, 16))
        self.assertEqual(p.packet_count, 64)
        self.assertEqual(p.labels()[0], "aaa")
        self.assertEqual(p.labels()[-1], "ddd")

        # 2D input is a single channel
        p = wpt_2d(img[0], "db2", 1)
        self.assertEqual(p.data.shape, (4, 1, 64, 64))

    def test_level_errors(self):
        with self.subTest(("divisible",)):
            with self.assertRaises(ValueError):
                wpt_2d(np.zeros((1, 36, 36)), "haar", 3)
        with self.subTest(("ndim",)):
            with self.assertRaises(ValueError):
                wpt_2d(np.zeros((1, 1, 8, 8)), "haar", 1)

    def test_round_trip(self):
        img = np.random.default_rng(3).random((2, 64, 64))
        for ordering in PacketOrdering:
            with self.subTest((ordering.name,)):
                p = wpt_2d(img, "sym4", 3, ordering=ordering)
                self.assertEqual(p.ordering, ordering)
                np.testing.assert_allclose(iwpt_2d(p, "sym4"), img, atol=1e-6, rtol=0)

    def test_zero(self):
        p = PacketTensor(2, np.zeros((16, 1, 8, 8)))
        np.testing.assert_array_equal(iwpt_2d(p, "db3"), np.zeros((1, 32, 32)))

    def test_low_pass_only(self):
        data = np.zeros((64, 1, 4, 4))
        data[0] = 8.0
        img = iwpt_2d(PacketTensor(3, data), "haar")
        np.testing.assert_allclose(img, 1.0, atol=1e-14)

    def test_truncated_inverse(self):
        p = wpt_2d(np.ones((1, 16, 16)), "db2", 1, BoundaryMode.truncated)
        with self.assertRaises(ValueError):
            iwpt_2d(p, "db2", BoundaryMode.truncated)
        with self.assertRaises(ValueError):
            ifwt_2d(fwt_2d(np.ones((1, 16, 16)), "db2", 1, "truncated"), "db2", "truncated")

        # haar has no boundary rows
        img = np.random.default_rng(0).random((1, 16, 16))
        p = wpt_2d(img, "haar", 2, BoundaryMode.truncated)
        np.testing.assert_allclose(iwpt_2d(p, "haar", BoundaryMode.truncated), img, atol=1e-12)

    def test_fwt_block(self):
        coeffs = fwt_2d(np.full((1, 4, 4), 1.5), "haar", 1)
        self.assertEqual(len(coeffs), 2)
        a, (h, v, d) = coeffs
        np.testing.assert_allclose(a, 3.0, atol=1e-14)
        for band in [h, v, d]:
            np.testing.assert_allclose(band, 0.0, atol=1e-14)

    def test_fwt_matches_packets(self):
        img = np.random.default_rng(5).random((1, 32, 32))
        coeffs = fwt_2d(img, "db2", 2)
        p = wpt_2d(img, "db2", 2)
        np.testing.assert_allclose(coeffs[0], p.node("aa"), atol=1e-12)
        for band, label in zip(coeffs[1], ["ah", "av", "ad"]):
            np.testing.assert_allclose(band, p.node(label), atol=1e-12)
        p1 = wpt_2d(img, "db2", 1)
        for band, label in zip(coeffs[2], ["h", "v", "d"]):
            np.testing.assert_allclose(band, p1.node(label), atol=1e-12)

    def test_fwt_round_trip(self):
        img = np.random.default_rng(7).random((2, 64, 64))
        coeffs = fwt_2d(img, "db5", 3)
        self.assertEqual(coeffs[0].shape, (2, 8, 8))
        self.assertEqual(coeffs[-1][0].shape, (2, 32, 32))
        np.testing.assert_allclose(ifwt_2d(coeffs, "db5"), img, atol=1e-8, rtol=0)

        with self.assertRaises(ValueError):
            ifwt_2d([coeffs[0], coeffs[2]], "db5")

    def test_fwt_operator(self):
        img = np.random.default_rng(9).random((1, 32, 32))
        coeffs = fwt_2d(img, "db3", 1)
        y = fwt_2d_via_operator(img, "db3", 1)
        flat = np.concatenate([coeffs[0].reshape(1, -1)] + [b.reshape(1, -1) for b in coeffs[1]], axis=1)
        np.testing.assert_allclose(y, flat, atol=1e-8)

    def test_direction(self):
        # vertical edge: intensity changes along width only
        img = np.zeros((1, 64, 64))
        img[:, :, 33:] = 1.0
        a, (h, v, d) = fwt_2d(img, "haar", 1)
        self.assertGreater(np.abs(v).max(), 0.5)
        np.testing.assert_allclose(h, 0.0, atol=1e-14)
        np.testing.assert_allclose(d, 0.0, atol=1e-14)

        a, (h, v, d) = fwt_2d(np.swapaxes(img, 1, 2), "haar", 1)
        self.assertGreater(np.abs(h).max(), 0.5)
        np.testing.assert_allclose(v, 0.0, atol=1e-14)

    def test_batch(self):
        rng = np.random.default_rng(11)
        images = [rng.random((1, 16, 16)) for _ in range(5)]
        out = wpt_2d_batch(images, "db2", 2, threads=3)
        self.assertEqual(len(out), 5)
        for img, p in zip(images, out):
            np.testing.assert_array_equal(p.data, wpt_2d(img, "db2", 2).data)

    @unittest.skipUnless(is_package_installed("pywt"), "no module")
    def test_pywt_haar(self):
        import pywt

        img = np.random.default_rng(13).random((16, 16))
        ca, (ch, cv, cd) = pywt.dwt2(img, "haar", mode="periodization")
        a, (h, v, d) = fwt_2d(img, "haar", 1)
        # detail signs differ by convention
        np.testing.assert_allclose(a[0], ca, atol=1e-12)
        np.testing.assert_allclose(np.abs(h[0]), np.abs(ch), atol=1e-12)
        np.testing.assert_allclose(np.abs(v[0]), np.abs(cv), atol=1e-12)
        np.testing.assert_allclose(np.abs(d[0]), np.abs(cd), atol=1e-12)

        p = wpt_2d(img, "haar", 2)
        wp = pywt.WaveletPacket2D(img, "haar", mode="periodization", maxlevel=2)
        np.testing.assert_allclose(p.node("aa")[0], wp["aa"].data, atol=1e-12)


if __name__ == "__main__":
    unittest.main(module=__name__, defaultTest="Test.test_round_trip", verbosity=2)
