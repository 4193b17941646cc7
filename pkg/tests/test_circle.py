"""
Unit Tests for Circle Module
"""

import unittest
import sys
import os

from hypothesis import given, settings, strategies as st

# Add app to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'app'))

from circle import (
    ChordDiagram,
    all_diagrams,
    circle_step,
    circle_to_grid,
    circle_to_permutation,
    comparability_grid,
    embed_permutation_in_grid,
    flip,
    grid_diagram,
    intersection_graph,
    non_crossing_chords,
    permutation_diagram,
    permutation_graph,
    verify_circle_grid,
    verify_circle_permutation,
)
from errors import CapExceeded, InvalidOperation
from graph_core import OrderedGraph, StepKind, induced_on_sequence, local_complement


def _diagram(text):
    return ChordDiagram(text.split())


@st.composite
def diagrams(draw, max_n=4):
    n = draw(st.integers(min_value=1, max_value=max_n))
    return draw(st.sampled_from(all_diagrams(n)))


class TestChordDiagram(unittest.TestCase):
    """Test parsing, crossings and canonical forms"""

    def test_interleaved_pair_is_an_edge(self):
        self.assertEqual(intersection_graph(_diagram("1 2 1 2")), OrderedGraph.complete(2))

    def test_nested_pair_is_not_an_edge(self):
        self.assertEqual(intersection_graph(_diagram("1 1 2 2")).edge_count(), 0)
        self.assertEqual(intersection_graph(_diagram("1 2 2 1")).edge_count(), 0)

    def test_chord_must_appear_twice(self):
        with self.assertRaises(InvalidOperation):
            _diagram("1 2 1")

    def test_unknown_chord(self):
        with self.assertRaises(InvalidOperation):
            _diagram("1 1").positions("7")

    def test_canonical_is_rotation_invariant(self):
        D = _diagram("2 1 1 3 2 3")
        self.assertEqual(D.rotate(3).canonical(), D.canonical())

    def test_diagram_counts_up_to_rotation(self):
        self.assertEqual([len(all_diagrams(n)) for n in (1, 2, 3)], [1, 2, 5])

    def test_vertex_order_must_cover_chords(self):
        with self.assertRaises(InvalidOperation):
            intersection_graph(_diagram("1 2 1 2"), order=["1"])

    @given(diagrams(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_flip_is_local_complementation(self, D, data):
        order = D.chords()
        v = data.draw(st.sampled_from(order))
        self.assertEqual(
            intersection_graph(flip(D, v), order),
            local_complement(intersection_graph(D, order), order.index(v)),
        )


class TestGridsAndPermutations(unittest.TestCase):
    """Test comparability grids and permutation graphs"""

    def test_small_grids(self):
        self.assertEqual(comparability_grid(1), OrderedGraph.empty(1))
        grid = comparability_grid(2)
        self.assertEqual(grid.edge_count(), 5)
        self.assertFalse(grid.has_edge(1, 2))
        self.assertEqual(comparability_grid(3).edge_count(), 27)

    def test_grid_order_must_be_positive(self):
        with self.assertRaises(InvalidOperation):
            comparability_grid(0)

    def test_permutation_graphs(self):
        self.assertEqual(permutation_graph([1, 2, 3]).edge_count(), 0)
        self.assertEqual(permutation_graph([4, 3, 2, 1]), OrderedGraph.complete(4))
        self.assertEqual(permutation_graph([2, 3, 1]).edges(), [(0, 2), (1, 2)])

    def test_not_a_permutation(self):
        with self.assertRaises(InvalidOperation):
            permutation_graph([1, 1, 2])

    def test_grid_too_small(self):
        with self.assertRaises(InvalidOperation):
            embed_permutation_in_grid([2, 1, 3], 2)

    @given(st.permutations(range(1, 6)), st.integers(min_value=0, max_value=2))
    @settings(max_examples=40, deadline=None)
    def test_permutation_graph_sits_in_grid(self, pi, extra):
        size = len(pi) + extra
        image = embed_permutation_in_grid(pi, size)
        self.assertEqual(induced_on_sequence(comparability_grid(size), image), permutation_graph(pi))

    @given(st.permutations(range(1, 6)))
    @settings(max_examples=40, deadline=None)
    def test_permutation_diagram_realizes_graph(self, pi):
        order = [str(i) for i in range(1, len(pi) + 1)]
        self.assertEqual(intersection_graph(permutation_diagram(pi), order), permutation_graph(pi))

    def test_grid_diagram(self):
        for n in range(1, 5):
            D, order = grid_diagram(n)
            self.assertEqual(intersection_graph(D, order), comparability_grid(n))


class TestCircleToPermutation(unittest.TestCase):
    """Test rerouting chords across the arc"""

    def test_all_crossing_needs_no_steps(self):
        result = circle_to_permutation(_diagram("1 2 1 2"))
        self.assertEqual(len(result.trace), 0)
        self.assertEqual(result.pi, (2, 1))
        self.assertTrue(verify_circle_permutation(_diagram("1 2 1 2"), result))

    def test_non_crossing_chords(self):
        self.assertEqual(non_crossing_chords(_diagram("1 1 2 2")), ["1", "2"])
        self.assertEqual(non_crossing_chords(_diagram("1 2 1 2")), [])

    def test_arc_must_split_circle(self):
        with self.assertRaises(InvalidOperation):
            non_crossing_chords(_diagram("1 1 2 2"), (0, 4))

    def test_single_step(self):
        D2, arc, step = circle_step(_diagram("1 1 2 2"))
        self.assertEqual(step.chord, "1")
        self.assertEqual((step.size_after, step.non_crossing_after), (4, 1))
        self.assertEqual(D2.word, ("1", "y1", "x1", "x1", "1", "y1", "2", "2"))
        self.assertEqual(arc, (0, 3))
        self.assertEqual(non_crossing_chords(D2, arc), ["2"])

    def test_steps_run_out(self):
        D2, arc, _ = circle_step(_diagram("1 1 2 2"))
        D3, arc, step = circle_step(D2, arc)
        self.assertEqual((step.chord, step.size_after, step.non_crossing_after), ("2", 6, 0))
        self.assertIsNone(circle_step(D3, arc))

    def test_two_nested_chords(self):
        D = _diagram("1 1 2 2")
        result = circle_to_permutation(D)
        self.assertEqual(len(result.steps), 2)
        self.assertEqual(len(result.pi), 6)
        self.assertEqual(result.trace.count(StepKind.LC), 4)
        self.assertTrue(verify_circle_permutation(D, result))

    @given(diagrams())
    @settings(max_examples=60, deadline=None)
    def test_replay_recovers_circle_graph(self, D):
        result = circle_to_permutation(D)
        self.assertLessEqual(len(result.pi), 3 * D.n)
        self.assertLessEqual(result.trace.kinds(), {StepKind.LC, StepKind.KEEP})
        self.assertEqual(non_crossing_chords(result.final, (0, len(result.pi))), [])
        self.assertTrue(verify_circle_permutation(D, result))


class TestCircleToGrid(unittest.TestCase):
    """Test realization inside comparability grids"""

    def test_single_edge(self):
        D = _diagram("1 2 1 2")
        result = circle_to_grid(D)
        self.assertEqual(result.grid_order, 6)
        self.assertEqual(set(result.vertex_map), {"1", "2"})
        self.assertTrue(verify_circle_grid(D, result))

    def test_verification_cap(self):
        D = _diagram("1 2 3 1 2 3")
        with self.assertRaises(CapExceeded):
            verify_circle_grid(D, circle_to_grid(D), max_n=2)

    def test_every_small_diagram_replays(self):
        checked = 0
        for n in range(1, 5):
            for D in all_diagrams(n):
                with self.subTest(word=" ".join(D.word)):
                    self.assertTrue(verify_circle_permutation(D, circle_to_permutation(D)))
                    self.assertTrue(verify_circle_grid(D, circle_to_grid(D)))
                checked += 1
        self.assertEqual(checked, 1 + 2 + 5 + 18)


if __name__ == '__main__':
    unittest.main()
