"""
Vertex-Minor Calculus - Quick Start Script
Run this to exercise the main operations before using the CLI
"""

import sys
import os
import io

# Set UTF-8 encoding for Windows
if sys.platform == 'win32':
    sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8')
    sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding='utf-8')

# Add app to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'app'))

import codec
from fixtures import case_one_fixture, star_fixture
from graph_core import OrderedGraph
from orchestrator import CalculusOrchestrator


def print_banner():
    print("=" * 70)
    print("  Vertex-Minor Calculus Quick Start")
    print("=" * 70)
    print()


def print_metrics(metrics):
    print(f"   status:      {metrics['status']}")
    print(f"   latency:     {metrics['total_latency_ms']:.1f}ms")
    print(f"   operation:   {metrics['operation_ms']:.1f}ms")


def main():
    print_banner()
    orchestrator = CalculusOrchestrator()
    data_dir = os.path.join(os.path.dirname(__file__), "data")

    print("📐 Circle graph realized in a comparability grid...")
    D = codec.load(os.path.join(data_dir, "two_chords.cwd"))
    result, metrics = orchestrator.run(
        "circle togrid", "circle_to_grid", D, verify=True,
        summarize=lambda r: ("ok", {"grid": r.grid_order, "steps": len(r.trace)}),
    )
    print(orchestrator.summary_line(metrics["trace_id"]))
    print_metrics(metrics)

    print("\n🔗 Rank-width of the 5-cycle...")
    _, metrics = orchestrator.run(
        "rankwidth", "rank_width", OrderedGraph.cycle(5),
        summarize=lambda r: ("ok", {"width": r[0]}),
    )
    print(orchestrator.summary_line(metrics["trace_id"]))

    print("\n⭐ Star constellation to K_3...")
    G, C = star_fixture(3)
    _, metrics = orchestrator.run(
        "cst extract", "extract", G, C, "star", verify=True,
        summarize=lambda r: ("ok", {"target_n": r.target.n, "steps": len(r.trace)}),
    )
    print(orchestrator.summary_line(metrics["trace_id"]))
    print_metrics(metrics)

    print("\n🌱 One growth step on an augmentation...")
    G, aug = case_one_fixture()

    def summarize(r):
        verified = orchestrator.verify_replay(G, r.trace, r.graph)
        return ("ok" if verified else "error"), {"case": r.case, "params": list(r.params), "verified": verified}

    _, metrics = orchestrator.run("cst grow", "grow", G, aug, summarize=summarize)
    print(orchestrator.summary_line(metrics["trace_id"]))

    print(f"\n{'='*70}")
    print("📈 Session Statistics")
    print('='*70)
    for key, value in orchestrator.get_session_stats().items():
        print(f"   {key:25s}: {value}")

    print(f"\n{'='*70}")
    print("✅ Quick Start Complete!")
    print('='*70)
    print("\n🚀 Try the CLI: python app/main.py bounds g 3")
    print()


if __name__ == "__main__":
    main()
