"""
Calculus Orchestrator - Coordinates Calculus Service and Observability Service
"""

import os
import sys
from typing import Callable, Dict, Mapping, Optional, Tuple

# Add services to path
sys.path.insert(0, os.path.dirname(__file__))

from graph_core import OperationTrace, OrderedGraph
from services.calculus_service import CalculusService
from services.observability_service import ObservabilityService

# error kinds that mean the input was refused rather than the run failing
USAGE_KINDS = {"parse", "invalid", "precondition"}

# "error" covers failed --verify checks, stage failures and internal faults
EXIT_CODES = {"ok": 0, "no": 1, "usage": 2, "cap": 3, "error": 4}

Summary = Tuple[str, Dict]


def status_for_error(metrics: Mapping) -> str:
    """Map a failed span to a run status"""
    kind = metrics.get("error_kind")
    if kind == "cap":
        return "cap"
    if kind in USAGE_KINDS:
        return "usage"
    return "error"


class CalculusOrchestrator:
    """
    Calculus Orchestrator - Coordinates calculus and observability services

    Responsibilities:
    - Run one verb with a full trace lifecycle
    - Record one span per library call
    - Turn results into a status and RESULT fields
    - Optionally replay emitted traces

    Clean Separation:
    - Delegates graph operations to CalculusService
    - Delegates monitoring to ObservabilityService
    - No argument parsing or printing here
    """

    def __init__(self, service: Optional[CalculusService] = None):
        self.calculus = service or CalculusService()
        self.obs_service = ObservabilityService()
        self.active_trace: Optional[str] = None

    def run(
        self,
        verb: str,
        method: str,
        *args,
        summarize: Optional[Callable[[object], Summary]] = None,
        inputs: Optional[Mapping] = None,
        **kwargs,
    ) -> Tuple[object, Dict]:
        """
        Run one service method under a trace

        Args:
            verb: CLI verb recorded on the trace and the RESULT line
            method: CalculusService method name
            summarize: maps the result to (status, fields); defaults to ok
            inputs: input files and flags worth recording

        Returns:
            tuple: (result or None, complete metrics including trace_id)

        Flow:
            1. Start trace
            2. Call the service
            3. Record the span
            4. Summarize the result
            5. Complete trace
        """
        # Step 1: Start trace
        trace_id = self.obs_service.start_trace(verb, inputs)
        self.active_trace = trace_id

        # Step 2: Call the service
        result, metrics = getattr(self.calculus, method)(*args, **kwargs)

        # Step 3: Record span
        self.obs_service.record_span(trace_id, metrics["operation"], metrics)

        if not metrics.get("success"):
            status = status_for_error(metrics)
            final = self.obs_service.complete_trace(trace_id, status, {"error": metrics.get("error_kind")})
            return None, {**final, "error": metrics.get("error"), "trace_id": trace_id}

        # Step 4: Summarize
        status, fields = summarize(result) if summarize else ("ok", {})

        # Step 5: Complete trace
        final = self.obs_service.complete_trace(trace_id, status, fields)
        return result, {**final, "trace_id": trace_id}

    def verify_replay(self, G: OrderedGraph, trace: OperationTrace, H: OrderedGraph) -> bool:
        """
        Replay a trace on G and check the result against H

        Called from a summarize callback; the span lands on the active trace.
        """
        result, metrics = self.calculus.replays_to(G, trace, H)
        if self.active_trace:
            self.obs_service.record_span(self.active_trace, "verify_replay", metrics)
        return bool(result)

    def summary_line(self, trace_id: str) -> str:
        return self.obs_service.summary_line(trace_id)

    def get_session_stats(self) -> Dict:
        return self.obs_service.get_session_stats()

    def export_metrics(self, filename: str):
        self.obs_service.export_json(filename)


# Test the orchestrator
if __name__ == "__main__":
    from circle import comparability_grid

    orchestrator = CalculusOrchestrator()
    grid = comparability_grid(3)

    _, metrics = orchestrator.run(
        "rank", "cut_rank", grid, [0, 1, 2],
        summarize=lambda value: ("ok", {"value": value}),
    )
    print(orchestrator.summary_line(metrics["trace_id"]))

    _, metrics = orchestrator.run(
        "rankwidth", "rank_width", grid,
        summarize=lambda result: ("ok", {"width": result[0]}),
    )
    print(orchestrator.summary_line(metrics["trace_id"]))
    print(f"Latency: {metrics.get('total_latency_ms', 0):.1f}ms")
    print(orchestrator.get_session_stats())
