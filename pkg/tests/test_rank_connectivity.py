"""
Unit Tests for Rank Connectivity Module
"""

import unittest
import sys
import os
from itertools import combinations

from hypothesis import given, settings, strategies as st

# Add app to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'app'))

from errors import CapExceeded, InvalidOperation
from graph_core import OrderedGraph, StepKind, apply_trace, delete_vertex, local_complement, pivot
from rank_connectivity import (
    check_mf_connected,
    check_partial_converse,
    cut_rank,
    extract_connected_pivot_minor,
    kappa,
    local_connectivity,
    rank_width,
)


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return OrderedGraph.from_edges(n, [p for p, keep in zip(pairs, chosen) if keep])


@st.composite
def graphs_with_sides(draw, min_n=3, max_n=7):
    G = draw(graphs(min_n=min_n, max_n=max_n))
    order = draw(st.permutations(range(G.n)))
    s = draw(st.integers(min_value=1, max_value=G.n - 2))
    t = draw(st.integers(min_value=1, max_value=G.n - s))
    return G, sorted(order[:s]), sorted(order[s:s + t])


def _width_by_splitting(G):
    """Rank-width from every rooted binary split of every vertex set"""
    if G.n < 2:
        return 0
    memo = {}

    def rho(mask):
        return cut_rank(G, [v for v in range(G.n) if (mask >> v) & 1])

    def best(mask):
        if mask & (mask - 1) == 0:
            return 0
        if mask not in memo:
            low = mask & -mask
            values = []
            A = (mask - 1) & mask
            while A:
                if A & low:
                    B = mask ^ A
                    values.append(max(rho(A), rho(B), best(A), best(B)))
                A = (A - 1) & mask
            memo[mask] = min(values)
        return memo[mask]

    full = (1 << G.n) - 1
    return min(
        max(rho(A), best(A), best(full ^ A))
        for A in range(1, full) if A & 1
    )


def _kappa_after_deleting(G, v, S, T):
    H, where = delete_vertex(G, v)
    return kappa(H, [where[s] for s in S], [where[t] for t in T])


class TestCutRank(unittest.TestCase):
    """Test cut-rank and local connectivity"""

    def test_complete_graph_cuts_have_rank_one(self):
        K = OrderedGraph.complete(5)
        self.assertEqual(cut_rank(K, [0, 1]), 1)
        self.assertEqual(cut_rank(K, []), 0)
        self.assertEqual(cut_rank(K, range(5)), 0)

    def test_matching_cut(self):
        G = OrderedGraph.from_edges(6, [(0, 3), (1, 4), (2, 5)])
        self.assertEqual(cut_rank(G, [0, 1, 2]), 3)
        self.assertEqual(local_connectivity(G, [0, 1], [3, 4, 5]), 2)

    def test_overlapping_sets_are_rejected(self):
        with self.assertRaises(InvalidOperation):
            local_connectivity(OrderedGraph.path(3), [0, 1], [1, 2])

    def test_vertex_outside_graph(self):
        with self.assertRaises(InvalidOperation):
            cut_rank(OrderedGraph.path(3), [5])

    @given(graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_cut_rank_symmetric_and_lc_invariant(self, G, data):
        X = data.draw(st.lists(st.integers(min_value=0, max_value=G.n - 1), unique=True))
        rest = [v for v in range(G.n) if v not in X]
        self.assertEqual(cut_rank(G, X), cut_rank(G, rest))
        v = data.draw(st.integers(min_value=0, max_value=G.n - 1))
        self.assertEqual(cut_rank(local_complement(G, v), X), cut_rank(G, X))

    @given(graphs(min_n=2), st.data())
    @settings(max_examples=60, deadline=None)
    def test_cut_rank_pivot_invariant(self, G, data):
        if not G.edges():
            return
        u, v = data.draw(st.sampled_from(G.edges()))
        X = data.draw(st.lists(st.integers(min_value=0, max_value=G.n - 1), unique=True))
        self.assertEqual(cut_rank(pivot(G, u, v), X), cut_rank(G, X))

    @given(graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_cut_rank_submodular(self, G, data):
        subsets = st.lists(st.integers(min_value=0, max_value=G.n - 1), unique=True)
        X, Y = set(data.draw(subsets)), set(data.draw(subsets))
        self.assertGreaterEqual(cut_rank(G, X) + cut_rank(G, Y), cut_rank(G, X & Y) + cut_rank(G, X | Y))


class TestKappa(unittest.TestCase):
    """Test connectivity between vertex sets"""

    def test_path_ends(self):
        self.assertEqual(kappa(OrderedGraph.path(5), [0], [4]), 1)

    def test_disconnected_sides(self):
        G = OrderedGraph.from_edges(4, [(0, 1), (2, 3)])
        self.assertEqual(kappa(G, [0], [3]), 0)

    def test_empty_side_rejected(self):
        with self.assertRaises(InvalidOperation):
            kappa(OrderedGraph.path(3), [], [2])

    def test_unknown_method(self):
        with self.assertRaises(InvalidOperation):
            kappa(OrderedGraph.path(3), [0], [2], method="guess")

    def test_free_vertex_cap(self):
        with self.assertRaises(CapExceeded):
            kappa(OrderedGraph.path(6), [0], [5], max_free=2)

    @given(graphs_with_sides())
    @settings(max_examples=60, deadline=None)
    def test_enumeration_matches_deletion_recursion(self, case):
        G, S, T = case
        value = kappa(G, S, T)
        self.assertEqual(kappa(G, S, T, method="recursive"), value)
        self.assertLessEqual(local_connectivity(G, S, T), value)
        self.assertLessEqual(value, min(cut_rank(G, S), cut_rank(G, T)))

    @given(graphs_with_sides())
    @settings(max_examples=40, deadline=None)
    def test_pivot_minor_realizes_kappa(self, case):
        G, S, T = case
        minor, trace, where = extract_connected_pivot_minor(G, S, T)
        self.assertEqual(minor.n, len(S) + len(T))
        self.assertLessEqual(trace.kinds(), {StepKind.PIV, StepKind.DEL})
        self.assertEqual(apply_trace(G, trace), minor)
        self.assertEqual(
            local_connectivity(minor, [where[s] for s in S], [where[t] for t in T]),
            kappa(G, S, T),
        )

    @given(graphs_with_sides(max_n=7))
    @settings(max_examples=50, deadline=None)
    def test_kappa_splits_on_a_free_vertex(self, case):
        G, S, T = case
        value = kappa(G, S, T)
        for v in (x for x in range(G.n) if x not in S and x not in T):
            deleted = _kappa_after_deleting(G, v, S, T)
            complemented = _kappa_after_deleting(local_complement(G, v), v, S, T)
            self.assertEqual(max(deleted, complemented), value)
            for u in G.neighbours(v):
                pivoted = _kappa_after_deleting(pivot(G, u, v), v, S, T)
                self.assertEqual(max(deleted, pivoted), value)
                self.assertEqual(max(complemented, pivoted), value)


class TestRankWidth(unittest.TestCase):
    """Test exact rank-width and its witness"""

    def test_small_values(self):
        self.assertEqual(rank_width(OrderedGraph.empty(0))[0], 0)
        self.assertEqual(rank_width(OrderedGraph.empty(1))[0], 0)
        self.assertEqual(rank_width(OrderedGraph.empty(4))[0], 0)

    def test_complete_graphs_have_width_one(self):
        for n in range(2, 7):
            self.assertEqual(rank_width(OrderedGraph.complete(n))[0], 1)

    def test_paths_have_width_one(self):
        self.assertEqual(rank_width(OrderedGraph.path(6))[0], 1)

    def test_five_cycle_has_width_two(self):
        width, decomposition = rank_width(OrderedGraph.cycle(5))
        self.assertEqual(width, 2)
        self.assertTrue(decomposition.is_valid(OrderedGraph.cycle(5)))

    def test_cap(self):
        with self.assertRaises(CapExceeded):
            rank_width(OrderedGraph.path(8), max_n=6)

    @given(graphs(min_n=2, max_n=6))
    @settings(max_examples=40, deadline=None)
    def test_witness_is_a_valid_cubic_tree(self, G):
        width, decomposition = rank_width(G)
        self.assertTrue(decomposition.is_valid(G))
        self.assertEqual(decomposition.leaves(), list(range(G.n)))
        self.assertEqual(decomposition.recompute_width(G), width)

    @given(graphs(min_n=2, max_n=6), st.data())
    @settings(max_examples=30, deadline=None)
    def test_width_is_lc_invariant(self, G, data):
        v = data.draw(st.integers(min_value=0, max_value=G.n - 1))
        self.assertEqual(rank_width(local_complement(G, v))[0], rank_width(G)[0])

    @given(graphs(min_n=2, max_n=6))
    @settings(max_examples=40, deadline=None)
    def test_width_matches_split_enumeration(self, G):
        self.assertEqual(rank_width(G)[0], _width_by_splitting(G))

    def test_split_enumeration_on_known_graphs(self):
        self.assertEqual(_width_by_splitting(OrderedGraph.cycle(5)), 2)
        self.assertEqual(_width_by_splitting(OrderedGraph.complete(5)), 1)
        self.assertEqual(_width_by_splitting(OrderedGraph.empty(3)), 0)


class TestMFConnectivity(unittest.TestCase):
    """Test the (m, f)-connectivity check"""

    def test_disconnected_graph_fails_at_m_one(self):
        G = OrderedGraph.from_edges(4, [(0, 1), (2, 3)])
        holds, partition = check_mf_connected(G, 1)
        self.assertFalse(holds)
        self.assertEqual(sorted(partition[0] + partition[1]), [0, 1, 2, 3])

    def test_connected_graph_holds_at_m_one(self):
        self.assertEqual(check_mf_connected(OrderedGraph.path(4), 1), (True, None))

    def test_clique_at_m_two(self):
        self.assertTrue(check_mf_connected(OrderedGraph.complete(3), 2)[0])
        self.assertFalse(check_mf_connected(OrderedGraph.complete(4), 2)[0])

    def test_cap(self):
        with self.assertRaises(CapExceeded):
            check_mf_connected(OrderedGraph.path(6), 2, max_n=4)

    def test_partial_converse_report(self):
        report = check_partial_converse(OrderedGraph.cycle(5), 1)
        self.assertEqual(report["width"], 2)
        self.assertTrue(report["implication_holds"])


if __name__ == '__main__':
    unittest.main()
