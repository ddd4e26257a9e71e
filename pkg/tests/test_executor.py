"""
Unit tests for core.executor module
"""

import threading
import unittest

from core.executor import initialize_executor, parallel_map, shutdown_executor


class TestParallelMap(unittest.TestCase):
    """Tests for fixed-range parallel evaluation"""

    def tearDown(self):
        shutdown_executor()

    def test_ranges_cover_total(self):
        """Test ranges are fixed-size, half-open and in order"""
        ranges = parallel_map(lambda start, stop: (start, stop), 10, chunk_size=4)
        self.assertEqual(ranges, [(0, 4), (4, 8), (8, 10)])

    def test_empty_total(self):
        """Test no indices gives no ranges"""
        self.assertEqual(parallel_map(lambda start, stop: (start, stop), 0, chunk_size=4), [])

    def test_same_result_for_any_worker_count(self):
        """Test results and their order do not depend on the pool size"""

        def squares(start, stop):
            return [i * i for i in range(start, stop)]

        inline = parallel_map(squares, 1000, chunk_size=7)
        for workers in (2, 4, 8):
            with self.subTest(workers=workers):
                initialize_executor(workers)
                self.assertEqual(parallel_map(squares, 1000, chunk_size=7), inline)
                shutdown_executor()

    def test_nested_calls_run_inline(self):
        """Test parallel_map inside a worker runs on that worker's thread"""
        initialize_executor(2)

        def outer(start, stop):
            caller = threading.current_thread().name
            inner = parallel_map(lambda a, b: threading.current_thread().name, 4, chunk_size=1)
            return all(name == caller for name in inner)

        self.assertTrue(all(parallel_map(outer, 4, chunk_size=1)))

    def test_worker_errors_propagate(self):
        """Test an exception in a range reaches the caller"""
        initialize_executor(2)

        def fail(start, stop):
            if start == 2:
                raise ValueError("range failed")
            return start

        with self.assertRaises(ValueError):
            parallel_map(fail, 4, chunk_size=1)


if __name__ == "__main__":
    unittest.main()
