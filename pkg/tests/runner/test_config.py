import os
import tempfile
import unittest

from wavepack.base.define import BoundaryMode, FeatureType
from wavepack.runner.config import RunConfig, load_config_file, parse_seeds


class Test(unittest.TestCase):
    def test_parse_seeds(self):
        self.assertEqual(parse_seeds("0..4"), [0, 1, 2, 3, 4])
        self.assertEqual(parse_seeds("0,2,3"), [0, 2, 3])
        self.assertEqual(parse_seeds("1"), [1])
        for bad in ["", "a", "3..x", "-1"]:
            with self.subTest((bad,)):
                with self.assertRaises(ValueError):
                    parse_seeds(bad)

    def test_defaults(self):
        c = RunConfig()
        c.assert_params()
        self.assertEqual(c.wavelet, "haar")
        self.assertEqual(c.seeds, [0])
        self.assertEqual(c.batch_size, 512)
        d = c.to_dict()
        self.assertEqual(d["mode"], "gram_schmidt")
        self.assertIsInstance(d["extensions"], list)

    def test_update(self):
        c = RunConfig()
        c.update({"level": "2", "mode": "truncated", "seeds": "0..2", "symmetric-init": "true", "lr": "0.01", "threads": "none"})
        self.assertEqual(c.level, 2)
        self.assertEqual(c.mode, BoundaryMode.truncated)
        self.assertEqual(c.seeds, [0, 1, 2])
        self.assertTrue(c.symmetric_init)
        self.assertEqual(c.lr, 0.01)
        self.assertIsNone(c.threads)

        c.update({"features": FeatureType.pixel, "extensions": "png,ppm"})
        self.assertEqual(c.features, FeatureType.pixel)
        self.assertEqual(c.extensions, ("png", "ppm"))

        with self.assertRaises(ValueError):
            c.update({"nothing": "1"})
        with self.assertRaises(ValueError):
            c.update({"level": "x"})

    def test_copy(self):
        c = RunConfig(seeds=[1, 2])
        c2 = c.copy()
        c2.seeds.append(3)
        self.assertEqual(c.seeds, [1, 2])

    def test_assert_params(self):
        for kwargs in [{"level": 0}, {"size": 7}, {"epochs": 0}, {"batch_size": 0}, {"lr": 0.0}, {"threads": 0}, {"extensions": "png,jpg"}]:
            with self.subTest((str(kwargs),)):
                with self.assertRaises(ValueError):
                    RunConfig(**kwargs).assert_params()

    def test_echo(self):
        lines = RunConfig(seeds="0..2").echo_lines()
        self.assertIn("seeds = 0,1,2", lines)
        self.assertEqual(lines, sorted(lines))

    def test_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.cfg")
            with open(path, "w", encoding="utf-8") as f:
                f.write("# run\nwavelet = db4\n\nlevel = 2  # packets\nseeds = 0..4\n")
            values = load_config_file(path)
            self.assertEqual(values, {"wavelet": "db4", "level": "2", "seeds": "0..4"})
            c = RunConfig().update(values)
            self.assertEqual(c.seeds, [0, 1, 2, 3, 4])

            with open(path, "w", encoding="utf-8") as f:
                f.write("wavelet db4\n")
            with self.assertRaises(ValueError):
                load_config_file(path)


if __name__ == "__main__":
    unittest.main(module=__name__, defaultTest="Test.test_update", verbosity=2)
