"""
Unit Tests for Bounds Module
"""

import unittest
import sys
import os

from hypothesis import given, settings, strategies as st

# Add app to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'app'))

from bounds import BoundTable
from errors import BoundOverflow, CapExceeded, InvalidOperation


class TestBoundFunctions(unittest.TestCase):
    """Test the closed-form evaluators"""

    def setUp(self):
        self.table = BoundTable()

    def test_g_values(self):
        self.assertEqual(self.table.g(0), 0)
        self.assertEqual(self.table.g(1), 1)
        self.assertEqual(self.table.g(2), 7)
        self.assertEqual(self.table.g(3), 43)

    def test_k0_and_L(self):
        self.assertEqual(self.table.k0(1), 2)
        self.assertEqual(self.table.k0(3), 5)
        self.assertEqual(self.table.L(1), 3)
        self.assertEqual(self.table.L(2), 11)

    def test_d(self):
        self.assertEqual(self.table.d(1, 2), 4)
        self.assertEqual(self.table.d(2, 2), 2)
        with self.assertRaises(InvalidOperation):
            self.table.d(3, 2)

    def test_path_chain(self):
        chain = self.table.path_chain(2)
        self.assertEqual(chain, {"m": 4, "k3": 32, "k2": 35, "k1": 38, "n_paths": 12, "k_paths": 38})

    def test_clique_chain_is_symbolic_in_hub_count(self):
        self.assertEqual(self.table.clique_chain(2), {"k_cliques": 6, "n_cliques": "R_3(4)"})

    def test_grid_k(self):
        self.assertEqual(self.table.grid_k(2), 38)

    def test_path_pipeline_k(self):
        self.assertEqual([self.table.path_pipeline_k(m) for m in (2, 3, 4)], [6, 16, 38])

    def test_evaluate_by_name(self):
        self.assertEqual(self.table.evaluate("g", 2), 7)
        self.assertEqual(self.table.evaluate("pathk", 3), 16)
        with self.assertRaises(InvalidOperation):
            self.table.evaluate("nope", 1)

    def test_non_positive_arguments(self):
        with self.assertRaises(InvalidOperation):
            self.table.k0(0)
        with self.assertRaises(InvalidOperation):
            self.table.g(-1)

    @given(st.integers(min_value=0, max_value=30))
    @settings(max_examples=31, deadline=None)
    def test_g_recurrence(self, n):
        # g(n + 1) = 6 g(n) + 1
        self.assertEqual(self.table.g(n + 1), 6 * self.table.g(n) + 1)


class TestBoundOverflow(unittest.TestCase):
    """Test the bit-length cap"""

    def test_large_values_are_refused(self):
        table = BoundTable(max_bits=8)
        with self.assertRaises(BoundOverflow):
            table.g(5)
        with self.assertRaises(BoundOverflow):
            table.L(4)

    def test_overflow_is_a_cap_refusal(self):
        with self.assertRaises(CapExceeded) as ctx:
            BoundTable(max_bits=4).k0(10)
        self.assertEqual(ctx.exception.kind, "cap")


if __name__ == '__main__':
    unittest.main()
