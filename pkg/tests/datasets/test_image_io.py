import os
import tempfile
import unittest

import numpy as np

from wavepack.base.exception import DatasetError
from wavepack.datasets.image_io import load_image, read_image_size, save_image


class Test(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def test_gray_8bit(self):
        path = os.path.join(self.dir, "a.png")
        img = np.arange(12, dtype=float).reshape(3, 4) / 255.0
        save_image(path, img)
        x = load_image(path)
        self.assertEqual(x.shape, (1, 3, 4))
        np.testing.assert_allclose(x[0], img, atol=1e-12)
        self.assertEqual(read_image_size(path), (3, 4))

    def test_gray_16bit(self):
        path = os.path.join(self.dir, "a.png")
        img = np.random.default_rng(0).random((1, 8, 6))
        save_image(path, img, bits=16)
        x = load_image(path)
        self.assertEqual(x.shape, (1, 8, 6))
        np.testing.assert_allclose(x, img, atol=0.5 / 65535 + 1e-12)

    def test_rgb(self):
        path = os.path.join(self.dir, "a.ppm")
        img = np.zeros((3, 4, 5))
        img[0] = 1.0
        img[2, 1, 2] = 128 / 255
        save_image(path, img)
        x = load_image(path)
        self.assertEqual(x.shape, (3, 4, 5))
        np.testing.assert_allclose(x, img, atol=1e-12)

    def test_clip(self):
        path = os.path.join(self.dir, "a.png")
        save_image(path, np.array([[-1.0, 2.0]]))
        np.testing.assert_array_equal(load_image(path)[0], [[0.0, 1.0]])

    def test_errors(self):
        with self.subTest(("extension",)):
            path = os.path.join(self.dir, "a.jpg")
            with open(path, "wb") as f:
                f.write(b"\xff\xd8\xff")
            with self.assertRaises(DatasetError):
                load_image(path)
        with self.subTest(("decode",)):
            path = os.path.join(self.dir, "broken.png")
            with open(path, "wb") as f:
                f.write(b"not a png")
            with self.assertRaises(DatasetError):
                load_image(path)
        with self.subTest(("bits",)):
            with self.assertRaises(ValueError):
                save_image(os.path.join(self.dir, "b.png"), np.zeros((2, 2)), bits=12)
        with self.subTest(("16bit colour",)):
            with self.assertRaises(ValueError):
                save_image(os.path.join(self.dir, "c.png"), np.zeros((3, 2, 2)), bits=16)


if __name__ == "__main__":
    unittest.main(module=__name__, defaultTest="Test.test_gray_16bit", verbosity=2)
