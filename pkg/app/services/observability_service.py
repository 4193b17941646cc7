"""
Observability Service - Run tracking for the calculus CLI
Handles traces, spans and session metrics without running any graph operation
"""

import os
import sys
from datetime import datetime
from typing import Dict, Mapping, Optional

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from observability import ObservabilityTracker, export_traces_to_json, format_result_line


class ObservabilityService:
    """
    Observability Service - Provides monitoring and tracking

    Responsibilities:
    - Create and manage one trace per verb
    - Record operation spans
    - Aggregate session metrics
    - Render the RESULT summary line and the JSON export

    Does NOT handle:
    - Graph operations
    - File parsing
    - Exit codes
    """

    def __init__(self):
        self.tracker = ObservabilityTracker()

    @property
    def traces(self):
        return self.tracker.traces

    def start_trace(self, verb: str, inputs: Mapping = None) -> str:
        """
        Start a new trace

        Args:
            verb: CLI verb (e.g. "rank", "cst grow")
            inputs: input files and flags worth recording

        Returns:
            str: Unique trace ID
        """
        return self.tracker.create_trace(verb, inputs)["trace_id"]

    def record_span(self, trace_id: str, operation: str, metrics: Dict):
        trace = self._get_trace(trace_id)
        if not trace:
            return
        self.tracker.add_span(trace, operation, metrics)

    def complete_trace(self, trace_id: str, status: str, fields: Mapping = None) -> Dict:
        """
        Complete a trace and return its final metrics

        Args:
            trace_id: Trace identifier
            status: ok, no, cap, usage or error
            fields: result fields printed on the RESULT line

        Returns:
            dict: Complete trace metrics (empty for an unknown trace)
        """
        trace = self._get_trace(trace_id)
        if not trace:
            return {}
        metrics = self.tracker.complete_trace(trace, status, fields)
        return {"trace_id": trace_id, "verb": trace["verb"], "status": status, **metrics}

    def summary_line(self, trace_id: str) -> str:
        trace = self._get_trace(trace_id)
        if not trace:
            return format_result_line("unknown", "error")
        hidden = {"total_latency_ms", "operation_ms", "other_ms"}
        fields = {k: v for k, v in trace["metrics"].items() if k not in hidden}
        return format_result_line(trace["verb"], trace["status"], fields)

    def get_session_stats(self) -> Dict:
        return self.tracker.get_session_metrics()

    def get_trace(self, trace_id: str) -> Optional[Dict]:
        return self._get_trace(trace_id)

    def _get_trace(self, trace_id: str) -> Optional[Dict]:
        for trace in self.tracker.traces:
            if trace["trace_id"] == trace_id:
                return trace
        return None

    def export_metrics(self) -> Dict:
        return {
            "session_stats": self.get_session_stats(),
            "traces": [
                {
                    "trace_id": t["trace_id"],
                    "verb": t["verb"],
                    "status": t["status"],
                    "metrics": t.get("metrics", {}),
                    "spans": t.get("spans", {}),
                }
                for t in self.tracker.traces
            ],
            "export_timestamp": datetime.now().isoformat(),
        }

    def export_json(self, filename: str):
        export_traces_to_json(self.export_metrics()["traces"], filename)
