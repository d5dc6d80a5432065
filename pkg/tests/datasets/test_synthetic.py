import os
import tempfile
import unittest

import numpy as np

from wavepack.datasets.image_io import load_image
from wavepack.datasets.manifest import scan_dataset
from wavepack.datasets.synthetic import band_energy, highfreq_noise, make_synthetic_dataset, smooth_field, write_synthetic_dataset


class Test(unittest.TestCase):
    def test_band_energy(self):
        rng = np.random.default_rng(0)
        noise = highfreq_noise(rng, 64)
        self.assertAlmostEqual(float(np.sqrt(np.mean(noise**2))), 0.05, delta=1e-9)
        self.assertAlmostEqual(band_energy(noise, 0.3), 0.0025, delta=1e-9)
        self.assertLess(band_energy(noise, 0.0, 0.3), 1e-12)

        smooth = smooth_field(rng, 64)
        self.assertLess(band_energy(smooth, 0.3), 1e-8)
        self.assertAlmostEqual(float(smooth.mean()), 0.5, delta=1e-9)

    def test_dataset(self):
        images, labels = make_synthetic_dataset(10, size=32, seed=1)
        self.assertEqual(images.shape, (20, 1, 32, 32))
        np.testing.assert_array_equal(labels, [0] * 10 + [1] * 10)
        high = [band_energy(img, 0.3) for img in images]
        self.assertLess(max(high[:10]), 1e-8)
        self.assertGreater(min(high[10:]), 1e-3)

        again, _ = make_synthetic_dataset(10, size=32, seed=1)
        np.testing.assert_array_equal(images, again)
        other, _ = make_synthetic_dataset(10, size=32, seed=2)
        self.assertFalse(np.array_equal(images, other))

        images, _ = make_synthetic_dataset(2, size=16, channels=3)
        self.assertEqual(images.shape, (4, 3, 16, 16))

    def test_write(self):
        with tempfile.TemporaryDirectory() as tmp:
            paths = write_synthetic_dataset(tmp, 15, size=32, seed=0)
            self.assertEqual(len(paths), 30)
            self.assertEqual(sorted(os.listdir(tmp)), ["noisy", "smooth"])

            m = scan_dataset(tmp)
            self.assertEqual(m.classes, ["noisy", "smooth"])
            self.assertEqual(m.counts("train"), [10, 10])

            # 16-bit quantization keeps the noise band
            img = load_image(os.path.join(tmp, "noisy", "00000.png"))
            self.assertEqual(img.shape, (1, 32, 32))
            self.assertGreater(band_energy(img, 0.3), 1e-3)


if __name__ == "__main__":
    unittest.main(module=__name__, defaultTest="Test.test_band_energy", verbosity=2)
