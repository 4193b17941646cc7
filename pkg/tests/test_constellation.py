"""
Unit Tests for Constellation Module
"""

import unittest
import sys
import os
from dataclasses import replace

from hypothesis import given, settings, strategies as st

# Add app to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'app'))

from constellation import (
    PRECEDENCE,
    CouplingKind,
    SearchMode,
    classify_coupling,
    find_coupled_subsets,
    is_clique_pattern,
    is_coupled,
    is_star,
    path_order,
    phi,
    restrict,
    shift_half_graph,
    validate,
)
from errors import CapExceeded, InvalidOperation
from fixtures import (
    GraphBuilder,
    case_one_fixture,
    case_two_fixture,
    constellation_fixture,
    matching_fixture,
    star_fixture,
    weak_fixture,
)
from graph_core import OrderedGraph


def _coupled_pair(kind, k=3):
    b = GraphBuilder()
    X, Y = b.add(k), b.add(k)
    b.couple(X, Y, kind)
    return b.build(), X, Y


def _with_edge(G, u, v):
    return OrderedGraph.from_edges(G.n, G.edges() + [(min(u, v), max(u, v))])


def _clauses(report):
    return {violation.clause for violation in report}


class TestCouplingKinds(unittest.TestCase):
    """Test classification of ordered pairs"""

    @given(st.sampled_from(PRECEDENCE))
    @settings(max_examples=20, deadline=None)
    def test_builder_patterns_classify_back(self, kind):
        G, X, Y = _coupled_pair(kind)
        self.assertEqual(classify_coupling(G, X, Y), kind)

    def test_single_edge_reads_as_matching(self):
        G, X, Y = _coupled_pair(CouplingKind.COMPLETE, k=1)
        self.assertEqual(classify_coupling(G, X, Y), CouplingKind.COUPLED_MATCHING)

    def test_unstructured_pair(self):
        G = OrderedGraph.from_edges(4, [(0, 2), (0, 3), (1, 2)])
        self.assertEqual(classify_coupling(G, [0, 1], [2, 3]), CouplingKind.NONE)
        self.assertFalse(is_coupled(G, [0, 1], [2, 3]))

    def test_unequal_sizes_rejected(self):
        with self.assertRaises(InvalidOperation):
            classify_coupling(OrderedGraph.empty(3), [0], [1, 2])

    def test_position_map(self):
        self.assertEqual(phi([5, 6, 7], [1, 2, 3], [7, 5]), (1, 3))
        with self.assertRaises(InvalidOperation):
            phi([5, 6, 7], [1, 2, 3], [4])

    def test_shifting_a_down_half_graph(self):
        G, X, Y = _coupled_pair(CouplingKind.DOWN_HALF)
        self.assertEqual(shift_half_graph(G, X, Y), ((0, 1), (4, 5), CouplingKind.CO_UP_HALF))
        with self.assertRaises(InvalidOperation):
            shift_half_graph(G, X[:1], Y[:1])


class TestCoupledSubsets(unittest.TestCase):
    """Test the exhaustive coupled-subset finders"""

    def test_order_preserving_on_matching(self):
        G, X, Y = _coupled_pair(CouplingKind.COUPLED_MATCHING, k=4)
        witness = find_coupled_subsets(G, X, Y, 2)
        self.assertEqual((witness.x_side, witness.y_side), ((0, 1), (4, 5)))
        self.assertEqual(witness.kind, CouplingKind.COUPLED_MATCHING)

    def test_homogeneous_only(self):
        G, X, Y = _coupled_pair(CouplingKind.COUPLED_MATCHING, k=4)
        witness = find_coupled_subsets(G, X, Y, 2, mode=SearchMode.HOMOGENEOUS_ONLY)
        self.assertEqual(witness.kind, CouplingKind.ANTICOMPLETE)
        self.assertTrue(witness.verify(G))

    def test_reordering_finds_reversed_matching(self):
        G = OrderedGraph.from_edges(6, [(0, 5), (1, 4), (2, 3)])
        self.assertIsNone(find_coupled_subsets(G, [0, 1, 2], [3, 4, 5], 3))
        witness = find_coupled_subsets(G, [0, 1, 2], [3, 4, 5], 3, mode="reorderY")
        self.assertEqual(witness.y_side, (5, 4, 3))
        self.assertTrue(witness.reordered)
        self.assertTrue(witness.verify(G))

    def test_k_out_of_range(self):
        G, X, Y = _coupled_pair(CouplingKind.COMPLETE, k=2)
        self.assertIsNone(find_coupled_subsets(G, X, Y, 3))
        self.assertIsNone(find_coupled_subsets(G, X, Y, 0))

    def test_caps(self):
        G, X, Y = _coupled_pair(CouplingKind.COMPLETE, k=6)
        with self.assertRaises(CapExceeded):
            find_coupled_subsets(G, X, Y, 6)
        with self.assertRaises(CapExceeded):
            find_coupled_subsets(G, X, Y, 2, max_side=4)


class TestConstellations(unittest.TestCase):
    """Test constellation validation and restriction"""

    def test_star_fixture_is_valid(self):
        G, C = star_fixture(3)
        self.assertEqual(validate(G, C), [])
        self.assertEqual((C.n, C.m, C.k), (4, 0, 5))
        self.assertEqual(is_star(C), 0)

    def test_matching_shapes(self):
        G, C = matching_fixture(3)
        self.assertEqual(validate(G, C), [])
        self.assertEqual(path_order(C), [0, 1, 2])
        G, C = matching_fixture(3, "clique")
        self.assertEqual(validate(G, C), [])
        self.assertTrue(is_clique_pattern(C))
        with self.assertRaises(InvalidOperation):
            path_order(C)

    def test_adjacent_hubs(self):
        G, C = matching_fixture(2, k=2)
        report = validate(_with_edge(G, 0, 1), C)
        self.assertEqual(_clauses(report), {1})
        self.assertTrue(str(report[0]).startswith("clause 1 (hub-coclique)"))

    def test_leaf_clique(self):
        G, C = matching_fixture(2, k=2)
        self.assertIn(2, _clauses(validate(_with_edge(G, 2, 3), C)))

    def test_leaf_seeing_other_hub(self):
        G, C = matching_fixture(2, k=2)
        self.assertIn(4, _clauses(validate(_with_edge(G, 2, 1), C)))

    def test_disconnected_pattern(self):
        G, C = constellation_fixture(3, 2, {(0, 1): CouplingKind.COUPLED_MATCHING})
        self.assertEqual(_clauses(validate(G, C)), {3})

    def test_non_pattern_pair_must_be_anticomplete(self):
        G, C = constellation_fixture(2, 2, {(0, 1): CouplingKind.COUPLED_MATCHING}, m=1)
        self.assertEqual(validate(G, C), [])
        self.assertEqual(_clauses(validate(_with_edge(G, 3, 7), C)), {5})

    def test_sides(self):
        _, C = constellation_fixture(1, 1, {}, m=1)
        self.assertEqual(C.a_side(), [0, 2])
        self.assertEqual(C.b_side(), [1, 3])
        self.assertEqual(C.outside_hubs(), (1,))

    def test_restrict(self):
        G, C = matching_fixture(2, k=3)
        sub = restrict(C, 0, [2, 4])
        self.assertEqual(sub.leaves, {0: (2, 4), 1: (5, 7)})
        self.assertEqual(validate(G, sub), [])
        with self.assertRaises(InvalidOperation):
            restrict(C, 0, [5])
        with self.assertRaises(InvalidOperation):
            restrict(C, 9, [2])

    def test_relabel(self):
        _, C = matching_fixture(2, k=1)
        moved = C.relabel({v: v + 10 for v in C.vertices()})
        self.assertEqual(moved.hubs, (10, 11))
        self.assertEqual(moved.pattern_edges, frozenset({(10, 11)}))


class TestAugmentations(unittest.TestCase):
    """Test weak and full augmentation clauses"""

    def test_growth_fixtures_are_augmentations(self):
        for fixture in (case_one_fixture, case_two_fixture):
            G, aug = fixture()
            self.assertEqual(validate(G, aug), [])

    def test_weak_fixture(self):
        G, aug = weak_fixture()
        self.assertEqual(validate(G, aug), [])
        self.assertIn(14, _clauses(validate(G, replace(aug, weak=False))))

    def test_link_sets_must_avoid_constellation(self):
        G, aug = case_one_fixture()
        bad = replace(aug, X1=aug.constellation.leaf(aug.x), X2=aug.constellation.leaf(aug.x))
        self.assertEqual(_clauses(validate(G, bad)), {7})

    def test_x_must_be_pattern_hub(self):
        G, aug = case_two_fixture()
        self.assertEqual(_clauses(validate(G, replace(aug, x=aug.y))), {6})


if __name__ == '__main__':
    unittest.main()
