"""
Unit Tests for Calculus Service and Orchestrator
"""

import unittest
import sys
import os
from unittest.mock import Mock, patch

# Add app to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'app'))

from binary_matroid import KLink, LinkMode
from circle import ChordDiagram, comparability_grid
from constellation import Constellation
from fixtures import case_one_fixture, star_fixture
from graph_core import OperationTrace, OrderedGraph, Step
from orchestrator import EXIT_CODES, CalculusOrchestrator, status_for_error
from services.calculus_service import CalculusService


class TestCalculusService(unittest.TestCase):
    """Test (result, metrics) wrapping"""

    def setUp(self):
        self.service = CalculusService()

    def test_success_metrics(self):
        result, metrics = self.service.cut_rank(OrderedGraph.complete(3), [0])
        self.assertEqual(result, 1)
        self.assertEqual(metrics["operation"], "cut_rank")
        self.assertTrue(metrics["success"])
        self.assertIn("duration_ms", metrics)

    def test_error_kind_is_reported(self):
        result, metrics = self.service.rank_width(OrderedGraph.path(5), max_n=3)
        self.assertIsNone(result)
        self.assertFalse(metrics["success"])
        self.assertEqual(metrics["error_kind"], "cap")

    def test_invalid_input(self):
        _, metrics = self.service.cut_rank(OrderedGraph.path(3), [7])
        self.assertEqual(metrics["error_kind"], "invalid")

    def test_unexpected_exception_is_internal(self):
        _, metrics = self.service._run("boom", Mock(side_effect=RuntimeError("boom")))
        self.assertEqual(metrics["error_kind"], "internal")
        self.assertEqual(metrics["error"], "boom")

    def test_replays_to(self):
        trace = OperationTrace((Step.lc(1),))
        result, metrics = self.service.replays_to(OrderedGraph.complete(3), trace, OrderedGraph.path(3))
        self.assertTrue(result)
        self.assertEqual(metrics["operation"], "verify_replay")
        result, _ = self.service.replays_to(OrderedGraph.complete(3), OperationTrace(), OrderedGraph.path(3))
        self.assertFalse(result)

    def test_find_link(self):
        G = OrderedGraph.from_edges(6, [(0, 2), (1, 3), (2, 4), (3, 5)])
        link, _ = self.service.find_link(G, [0, 1], [4, 5], 2)
        self.assertEqual(link, KLink((2, 3), (2, 3), LinkMode.EQUAL))
        missing, _ = self.service.find_link(G, [0, 1], [4, 5], 3)
        self.assertFalse(missing.found)

    def test_circle_with_verification(self):
        result, metrics = self.service.circle_to_grid(ChordDiagram("1 2 1 2".split()), verify=True)
        self.assertTrue(metrics["success"])
        self.assertEqual(result.grid_order, 6)

    def test_failed_verification_kind(self):
        with patch("services.calculus_service.verify_circle_grid", return_value=False):
            result, metrics = self.service.circle_to_grid(ChordDiagram("1 2 1 2".split()), verify=True)
        self.assertIsNone(result)
        self.assertEqual(metrics["error_kind"], "verify")

    def test_bound(self):
        self.assertEqual(self.service.bound("g", [3])[0], 43)
        _, metrics = self.service.bound("g", [5], max_bits=8)
        self.assertEqual(metrics["error_kind"], "cap")

    def test_generate(self):
        self.assertEqual(self.service.generate("grid", {"n": 2})[0], comparability_grid(2))
        self.assertEqual(self.service.generate("perm", {"pi": [2, 1]})[0], OrderedGraph.complete(2))
        G, C = self.service.generate("cst", {"shape": "star", "n": 3, "seed": 1})[0]
        self.assertIsInstance(C, Constellation)
        _, metrics = self.service.generate("spiral", {})
        self.assertEqual(metrics["error_kind"], "invalid")

    def test_star_extraction_default_target(self):
        G, C = star_fixture(3)
        result, metrics = self.service.extract(G, C, "star", verify=True)
        self.assertTrue(metrics["success"])
        self.assertEqual(result.target, OrderedGraph.complete(3))

    def test_grow(self):
        G, aug = case_one_fixture()
        result, _ = self.service.grow(G, aug)
        self.assertEqual(result.params, (3, 0, 2))


class TestCalculusOrchestrator(unittest.TestCase):
    """Test trace lifecycle around service calls"""

    def setUp(self):
        self.orchestrator = CalculusOrchestrator()

    def test_successful_run(self):
        result, metrics = self.orchestrator.run(
            "rank", "cut_rank", OrderedGraph.complete(3), [0],
            summarize=lambda value: ("ok", {"value": value}),
        )
        self.assertEqual(result, 1)
        self.assertEqual(metrics["status"], "ok")
        self.assertEqual(self.orchestrator.summary_line(metrics["trace_id"]), "RESULT rank ok value=1")

    def test_failed_run_maps_to_status(self):
        result, metrics = self.orchestrator.run("rankwidth", "rank_width", OrderedGraph.path(5), max_n=3)
        self.assertIsNone(result)
        self.assertEqual(metrics["status"], "cap")
        self.assertEqual(EXIT_CODES[metrics["status"]], 3)
        self.assertIn("error", metrics)

    def test_verify_replay_records_span(self):
        G = OrderedGraph.complete(3)
        trace = OperationTrace((Step.lc(1),))

        def summarize(_):
            ok = self.orchestrator.verify_replay(G, trace, OrderedGraph.path(3))
            return ("ok" if ok else "error"), {"verified": ok}

        _, metrics = self.orchestrator.run("apply", "apply", G, trace, summarize=summarize)
        spans = self.orchestrator.obs_service.get_trace(metrics["trace_id"])["spans"]
        self.assertEqual(set(spans), {"apply", "verify_replay"})
        self.assertEqual(metrics["status"], "ok")

    def test_status_for_error(self):
        self.assertEqual(status_for_error({"error_kind": "cap"}), "cap")
        self.assertEqual(status_for_error({"error_kind": "parse"}), "usage")
        self.assertEqual(status_for_error({"error_kind": "precondition"}), "usage")
        self.assertEqual(status_for_error({"error_kind": "stage"}), "error")
        self.assertEqual(status_for_error({"error_kind": "verify"}), "error")
        self.assertEqual(status_for_error({"error_kind": "internal"}), "error")
        self.assertEqual(EXIT_CODES["error"], 4)

    def test_failed_verification_has_one_status(self):
        D = ChordDiagram("1 2 1 2".split())
        with patch("services.calculus_service.verify_circle_grid", return_value=False):
            result, metrics = self.orchestrator.run("circle togrid", "circle_to_grid", D, verify=True)
        self.assertIsNone(result)
        self.assertEqual(metrics["status"], "error")
        self.assertEqual(self.orchestrator.summary_line(metrics["trace_id"]), "RESULT circle-togrid error error=verify")

        G = OrderedGraph.complete(3)

        def summarize(_):
            ok = self.orchestrator.verify_replay(G, OperationTrace(), OrderedGraph.path(3))
            return ("ok", {}) if ok else ("error", {"verified": ok, "error": "verify"})

        _, replayed = self.orchestrator.run("apply", "apply", G, OperationTrace(), summarize=summarize)
        self.assertEqual(replayed["status"], metrics["status"])

    def test_session_stats(self):
        self.orchestrator.run("bounds", "bound", "g", [2])
        self.orchestrator.run("bounds", "bound", "nope", [1])
        stats = self.orchestrator.get_session_stats()
        self.assertEqual(stats["status_counts"], {"ok": 1, "usage": 1})


if __name__ == '__main__':
    unittest.main()
