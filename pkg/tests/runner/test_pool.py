import os
import threading
import unittest
from unittest import mock

from wavepack.runner.pool import ENV_THREADS, get_thread_count, parallel_map


class Test(unittest.TestCase):
    def test_thread_count(self):
        with mock.patch.dict(os.environ, {ENV_THREADS: ""}):
            self.assertEqual(get_thread_count(), min(4, os.cpu_count() or 1))
            self.assertEqual(get_thread_count(7), 7)
        with mock.patch.dict(os.environ, {ENV_THREADS: "3"}):
            self.assertEqual(get_thread_count(), 3)
            self.assertEqual(get_thread_count(2), 2)
        with mock.patch.dict(os.environ, {ENV_THREADS: "x"}):
            with self.assertRaises(ValueError):
                get_thread_count()
        with self.assertRaises(ValueError):
            get_thread_count(0)

    def test_parallel_map(self):
        names = set()

        def _f(x):
            names.add(threading.current_thread().name)
            return x * x

        self.assertEqual(parallel_map(_f, range(20), threads=4), [x * x for x in range(20)])
        self.assertEqual(parallel_map(_f, [], threads=4), [])

        names.clear()
        self.assertEqual(parallel_map(_f, [1, 2, 3], threads=1), [1, 4, 9])
        self.assertEqual(names, {threading.current_thread().name})

    def test_error(self):
        def _f(x):
            if x == 3:
                raise ValueError("bad item")
            return x

        with self.assertRaises(ValueError):
            parallel_map(_f, range(5), threads=2)


if __name__ == "__main__":
    unittest.main(module=__name__, defaultTest="Test.test_parallel_map", verbosity=2)
