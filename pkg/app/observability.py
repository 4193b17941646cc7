"""
Observability Module - Run traces, result lines and trace export
"""

import json
import logging
import time
from datetime import datetime
from typing import Dict, List, Mapping

logger = logging.getLogger(__name__)


class ObservabilityTracker:
    """Track and aggregate per-run traces"""

    def __init__(self):
        self.traces = []
        self.session_start = time.time()

    def create_trace(self, verb: str, inputs: Mapping = None) -> Dict:
        """Create a new trace for one CLI verb"""
        trace = {
            "trace_id": f"trace_{len(self.traces) + 1}_{int(time.time())}",
            "verb": verb,
            "inputs": dict(inputs or {}),
            "timestamp": datetime.now().isoformat(),
            "start_time": time.time(),
            "spans": {},
            "metrics": {},
            "status": "in_progress",
        }
        self.traces.append(trace)
        return trace

    def add_span(self, trace: Dict, span_name: str, metrics: Dict):
        """Add a span (one library call) to the trace"""
        trace["spans"][span_name] = {
            "metrics": metrics,
            "timestamp": datetime.now().isoformat(),
        }

    def complete_trace(self, trace: Dict, status: str, fields: Mapping = None) -> Dict:
        """Close the trace with its outcome and timing breakdown"""
        total_time = (time.time() - trace["start_time"]) * 1000
        span_time = sum(span["metrics"].get("duration_ms", 0) for span in trace["spans"].values())
        trace["metrics"] = {
            "total_latency_ms": round(total_time, 2),
            "operation_ms": round(span_time, 2),
            "other_ms": round(total_time - span_time, 2),
            **dict(fields or {}),
        }
        trace["status"] = status
        trace["end_time"] = time.time()
        return trace["metrics"]

    def get_session_metrics(self) -> Dict:
        """Aggregate counts and latencies over completed traces"""
        completed = [t for t in self.traces if t["status"] != "in_progress"]
        if not completed:
            return {"total_runs": len(self.traces), "avg_latency_ms": 0, "success_rate": 0}
        latencies = sorted(t["metrics"]["total_latency_ms"] for t in completed)
        by_status: Dict[str, int] = {}
        for t in completed:
            by_status[t["status"]] = by_status.get(t["status"], 0) + 1
        ok = by_status.get("ok", 0) + by_status.get("no", 0)
        return {
            "total_runs": len(completed),
            "avg_latency_ms": round(sum(latencies) / len(latencies), 2),
            "p95_latency_ms": round(latencies[int(len(latencies) * 0.95)], 2) if len(latencies) > 1 else latencies[0],
            "min_latency_ms": round(latencies[0], 2),
            "max_latency_ms": round(latencies[-1], 2),
            "status_counts": by_status,
            "success_rate": round(ok / len(completed) * 100, 2),
            "session_duration_sec": round(time.time() - self.session_start, 1),
        }


def _field(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_field(v) for v in value)
    return str(value).replace(" ", "_")


def format_result_line(verb: str, status: str, fields: Mapping = None) -> str:
    """Machine-readable summary: RESULT <verb> <status> key=value ..."""
    parts = ["RESULT", verb.replace(" ", "-"), status]
    for key, value in (fields or {}).items():
        parts.append(f"{key}={_field(value)}")
    return " ".join(parts)


def export_traces_to_json(traces: List[Dict], filename: str = "traces.json"):
    """Export traces for external analysis"""
    with open(filename, "w", encoding="utf-8") as f:
        json.dump(traces, f, indent=2, default=str)
    logger.info("exported %d traces to %s", len(traces), filename)


if __name__ == "__main__":
    tracker = ObservabilityTracker()
    trace = tracker.create_trace("rank", {"graph": "data/k3.ogr"})
    tracker.add_span(trace, "cut_rank", {"duration_ms": 0.4, "success": True})
    tracker.complete_trace(trace, "ok", {"value": 1})

    print("Trace Metrics:")
    print(json.dumps(trace["metrics"], indent=2))
    print(format_result_line("rank", "ok", {"value": 1}))
    print("\nSession Metrics:")
    print(json.dumps(tracker.get_session_metrics(), indent=2))
