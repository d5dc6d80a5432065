import os
import tempfile
import unittest

import numpy as np

from wavepack.base.define import ChannelPolicy, PacketOrdering
from wavepack.base.order import packet_radial_frequency
from wavepack.base.packet import PacketTensor
from wavepack.datasets.synthetic import smooth_field
from wavepack.stats.packet_stats import (
    accumulate_stats,
    curve_difference,
    ln_abs,
    ln_abs_scale,
    packet_curve,
    save_curve_csv,
    save_heatmap_csv,
    stats_difference,
)
from wavepack.transform.packets import wpt_2d


def _tensors(rng, n, level=1, shape=(1, 2, 2)):
    return [PacketTensor(level, rng.normal(size=(4**level,) + shape)) for _ in range(n)]


class Test(unittest.TestCase):
    def test_ln_abs(self):
        np.testing.assert_allclose(ln_abs(np.array([0.0])), [-27.631021115928547], atol=1e-9)
        np.testing.assert_allclose(ln_abs(np.array([-np.e + 1e-12])), [1.0], atol=1e-9)

        p = PacketTensor(1, np.full((4, 3, 2, 2), -1.0))
        out = ln_abs_scale(p)
        self.assertEqual(out.channels, 3)
        np.testing.assert_allclose(out.data, 1e-12, atol=1e-15)
        out = ln_abs_scale(p, ChannelPolicy.averaged)
        self.assertEqual(out.channels, 1)

    def test_identical(self):
        p = PacketTensor(1, np.arange(16, dtype=float).reshape(4, 1, 2, 2))
        stats = accumulate_stats([p, p, p])
        self.assertEqual(stats.sample_count, 3)
        np.testing.assert_allclose(stats.mean, p.data[:, 0])
        np.testing.assert_array_equal(stats.std, 0.0)

    def test_two_samples(self):
        a = PacketTensor(1, np.zeros((4, 1, 1, 1)))
        b = PacketTensor(1, np.full((4, 1, 1, 1), 2.0))
        stats = accumulate_stats([a, b])
        np.testing.assert_allclose(stats.mean, 1.0)
        np.testing.assert_allclose(stats.std, np.sqrt(2.0))

    def test_against_two_pass(self):
        rng = np.random.default_rng(0)
        data = rng.normal(loc=3.0, scale=2.0, size=(1000, 16, 2, 4, 4))
        for policy in ChannelPolicy:
            with self.subTest((policy.name,)):
                stats = accumulate_stats(data, policy)
                ref = data.mean(axis=2) if policy == ChannelPolicy.averaged else data
                np.testing.assert_allclose(stats.mean, ref.mean(axis=0), atol=1e-10)
                np.testing.assert_allclose(stats.std, ref.std(axis=0, ddof=1), atol=1e-10)

    def test_order_independence(self):
        rng = np.random.default_rng(1)
        items = _tensors(rng, 50)
        a = accumulate_stats(items)
        b = accumulate_stats(items[::-1])
        np.testing.assert_allclose(a.mean, b.mean, atol=1e-12)
        np.testing.assert_allclose(a.std, b.std, atol=1e-12)

    def test_merge(self):
        rng = np.random.default_rng(2)
        items = _tensors(rng, 30)
        full = accumulate_stats(items)
        merged = accumulate_stats(items[:7]).merge(accumulate_stats(items[7:19])).merge(accumulate_stats(items[19:]))
        self.assertEqual(merged.sample_count, 30)
        np.testing.assert_allclose(merged.mean, full.mean, atol=1e-12)
        np.testing.assert_allclose(merged.std, full.std, atol=1e-12)

        # merge converts the other ordering
        other = accumulate_stats(items[19:]).to_ordering(PacketOrdering.frequency)
        merged = accumulate_stats(items[:19]).merge(other)
        np.testing.assert_allclose(merged.mean, full.mean, atol=1e-12)

    def test_errors(self):
        rng = np.random.default_rng(3)
        with self.subTest(("empty",)):
            with self.assertRaises(ValueError):
                accumulate_stats([])
        with self.subTest(("one sample std",)):
            with self.assertRaises(ValueError):
                accumulate_stats(_tensors(rng, 1)).std
        with self.subTest(("shape",)):
            with self.assertRaises(ValueError):
                accumulate_stats(_tensors(rng, 1) + _tensors(rng, 1, shape=(1, 4, 4)))
        with self.subTest(("ordering",)):
            items = _tensors(rng, 2)
            with self.assertRaises(ValueError):
                accumulate_stats([items[0], items[1].to_ordering("frequency")])
        with self.subTest(("ndim",)):
            with self.assertRaises(ValueError):
                accumulate_stats([np.zeros((4, 2, 2))])

    def test_difference(self):
        rng = np.random.default_rng(4)
        a = accumulate_stats(_tensors(rng, 10))
        d = stats_difference(a, a)
        np.testing.assert_array_equal(d.mean_abs_diff, 0.0)
        np.testing.assert_array_equal(d.std_abs_diff, 0.0)

        shifted = accumulate_stats([PacketTensor(1, np.full((4, 1, 2, 2), v)) for v in [1.0, 3.0]])
        base = accumulate_stats([PacketTensor(1, np.full((4, 1, 2, 2), v)) for v in [0.0, 0.0]])
        d = stats_difference(shifted, base)
        np.testing.assert_allclose(d.mean_abs_diff, 2.0)
        np.testing.assert_allclose(d.std_abs_diff, np.sqrt(2.0))

        with self.assertRaises(ValueError):
            stats_difference(a, accumulate_stats(_tensors(rng, 3, level=2)))

    def test_constant_curve(self):
        data = np.full((64, 3, 4, 4), 0.5)
        stats = accumulate_stats([data, data])
        rows = packet_curve(stats)
        self.assertEqual(len(rows), 64)
        self.assertEqual(rows[0].label, "aaa")
        for r in rows:
            self.assertAlmostEqual(r.mean, 0.5)
            self.assertEqual(r.std, 0.0)

        # a single sample has no spread
        rows = packet_curve(accumulate_stats([data]), PacketOrdering.frequency)
        self.assertEqual([r.packet_index for r in rows], list(range(64)))
        self.assertEqual(rows[0].label, "aaa")

    def test_white_noise_flat(self):
        rng = np.random.default_rng(5)
        stream = (ln_abs_scale(wpt_2d(rng.normal(size=(1, 32, 32)), "haar", 3)) for _ in range(500))
        curve = np.array([r.mean for r in packet_curve(accumulate_stats(stream))])
        self.assertLess(curve.max() - curve.min(), 0.5)

    def test_low_pass_decay(self):
        rng = np.random.default_rng(6)
        stream = (ln_abs_scale(wpt_2d(smooth_field(rng, 64)[np.newaxis], "haar", 3)) for _ in range(20))
        curve = np.array([r.mean for r in packet_curve(accumulate_stats(stream))])
        radial = packet_radial_frequency(3)
        low = curve[radial <= np.quantile(radial, 0.25)]
        high = curve[radial >= np.quantile(radial, 0.75)]
        self.assertGreater(low.mean(), high.mean() + 1.0)

    def test_curve_difference(self):
        rng = np.random.default_rng(7)
        a = accumulate_stats(_tensors(rng, 5, level=2))
        b = accumulate_stats([PacketTensor(2, t.data + 1.0) for t in _tensors(rng, 5, level=2)])
        diff = curve_difference(a, a)
        np.testing.assert_array_equal(diff, 0.0)
        self.assertEqual(curve_difference(a, b, "frequency").shape, (16,))

    def test_csv(self):
        stats = accumulate_stats([np.zeros((4, 1, 2, 2)), np.ones((4, 1, 2, 2))])
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "curve.csv")
            save_curve_csv(packet_curve(stats), path)
            with open(path, encoding="utf-8") as f:
                lines = f.read().splitlines()
            self.assertEqual(lines[0], "packet_index,label,mean,std")
            self.assertEqual(len(lines), 5)
            self.assertTrue(lines[1].startswith("0,a,0.5,"))

            path = os.path.join(tmp, "heat.csv")
            save_heatmap_csv(stats.mean, path)
            with open(path, encoding="utf-8") as f:
                lines = f.read().splitlines()
            self.assertEqual(len(lines), 1 + 16)
            self.assertEqual(lines[-1], "3,1,1,0.5")

            with self.assertRaises(ValueError):
                save_heatmap_csv(np.zeros((4, 2)), path)


if __name__ == "__main__":
    unittest.main(module=__name__, defaultTest="Test.test_merge", verbosity=2)
