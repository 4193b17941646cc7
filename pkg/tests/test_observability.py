"""
Unit Tests for Observability Module
"""

import unittest
import sys
import os
import json
import tempfile

# Add app to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'app'))

from observability import (
    ObservabilityTracker,
    export_traces_to_json,
    format_result_line,
)
from services.observability_service import ObservabilityService


class TestResultLine(unittest.TestCase):
    """Test the RESULT summary line"""

    def test_plain_fields(self):
        line = format_result_line("rank", "ok", {"value": 2})
        self.assertEqual(line, "RESULT rank ok value=2")

    def test_verb_with_action(self):
        line = format_result_line("cst validate", "no", {"valid": False, "clause": 5})
        self.assertEqual(line, "RESULT cst-validate no valid=false clause=5")

    def test_lists_and_spaces(self):
        line = format_result_line("klink find", "ok", {"X": [3, 4], "detail": "no free vertex"})
        self.assertEqual(line, "RESULT klink-find ok X=3,4 detail=no_free_vertex")

    def test_no_fields(self):
        self.assertEqual(format_result_line("apply", "error"), "RESULT apply error")


class TestObservabilityTracker(unittest.TestCase):
    """Test trace tracking functionality"""

    def setUp(self):
        self.tracker = ObservabilityTracker()

    def test_create_trace(self):
        trace = self.tracker.create_trace("rank", {"graph": "k3.ogr"})
        self.assertIn("trace_id", trace)
        self.assertEqual(trace["verb"], "rank")
        self.assertEqual(trace["inputs"], {"graph": "k3.ogr"})
        self.assertEqual(trace["status"], "in_progress")
        self.assertEqual(len(self.tracker.traces), 1)

    def test_add_span(self):
        trace = self.tracker.create_trace("kappa")
        self.tracker.add_span(trace, "kappa", {"duration_ms": 3.5, "success": True})
        self.assertIn("kappa", trace["spans"])
        self.assertEqual(trace["spans"]["kappa"]["metrics"]["duration_ms"], 3.5)

    def test_complete_trace(self):
        trace = self.tracker.create_trace("kappa")
        self.tracker.add_span(trace, "kappa", {"duration_ms": 3.5})
        metrics = self.tracker.complete_trace(trace, "ok", {"value": 1})
        self.assertEqual(trace["status"], "ok")
        self.assertEqual(metrics["value"], 1)
        self.assertEqual(metrics["operation_ms"], 3.5)
        self.assertIn("total_latency_ms", metrics)

    def test_session_metrics_empty(self):
        metrics = self.tracker.get_session_metrics()
        self.assertEqual(metrics["total_runs"], 0)
        self.assertEqual(metrics["success_rate"], 0)

    def test_session_metrics_with_traces(self):
        for status in ("ok", "no", "cap", "ok"):
            trace = self.tracker.create_trace("rank")
            self.tracker.complete_trace(trace, status)
        self.tracker.create_trace("rank")
        metrics = self.tracker.get_session_metrics()
        self.assertEqual(metrics["total_runs"], 4)
        self.assertEqual(metrics["status_counts"], {"ok": 2, "no": 1, "cap": 1})
        self.assertEqual(metrics["success_rate"], 75.0)

    def test_export(self):
        trace = self.tracker.create_trace("rank")
        self.tracker.complete_trace(trace, "ok")
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "traces.json")
            export_traces_to_json(self.tracker.traces, path)
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        self.assertEqual(data[0]["verb"], "rank")


class TestObservabilityService(unittest.TestCase):
    """Test the service wrapper"""

    def setUp(self):
        self.service = ObservabilityService()

    def test_trace_lifecycle(self):
        trace_id = self.service.start_trace("bounds", {"name": "g"})
        self.service.record_span(trace_id, "bound", {"duration_ms": 0.1, "success": True})
        final = self.service.complete_trace(trace_id, "ok", {"value": 7})
        self.assertEqual(final["status"], "ok")
        self.assertEqual(final["verb"], "bounds")
        self.assertEqual(self.service.summary_line(trace_id), "RESULT bounds ok value=7")

    def test_unknown_trace(self):
        self.assertEqual(self.service.complete_trace("missing", "ok"), {})
        self.assertEqual(self.service.summary_line("missing"), "RESULT unknown error")
        self.assertIsNone(self.service.get_trace("missing"))

    def test_export_metrics(self):
        trace_id = self.service.start_trace("rank")
        self.service.complete_trace(trace_id, "no")
        exported = self.service.export_metrics()
        self.assertEqual(exported["traces"][0]["status"], "no")
        self.assertEqual(exported["session_stats"]["total_runs"], 1)


if __name__ == '__main__':
    unittest.main()
