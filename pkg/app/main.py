"""
Vertex-Minor Calculus CLI - Command-line surface for the graph calculus
Parses arguments, loads files, runs verbs through the orchestrator and prints the RESULT line
"""

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

sys.path.insert(0, os.path.dirname(__file__))

import codec
from binary_matroid import DisentangleResult, KLink, LinkMode
from config import get_settings
from errors import VertexMinorError
from extraction import Realization
from growth import AugmentationSearch
from observability import format_result_line
from orchestrator import EXIT_CODES, CalculusOrchestrator

logger = logging.getLogger("vmc")


def vertex_list(text: str) -> List[int]:
    """Comma-separated vertex labels, e.g. 0,1,2"""
    if not text.strip():
        return []
    try:
        return [int(token) for token in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None


def _setup_logging():
    level = os.getenv("LOG_LEVEL", get_settings().log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _emit(obj, out: Optional[str]):
    """Write obj to a file, or print its text form"""
    if out:
        codec.save(out, obj)
        logger.info("wrote %s", out)
        return
    print(codec.serialize(obj), end="")


def _emit_pair(graph, cst, prefix: Optional[str]):
    if prefix:
        codec.save(f"{prefix}.ogr", graph)
        codec.save(f"{prefix}.cst", cst)
    else:
        _emit(graph, None)
        _emit(cst, None)


class CommandRunner:
    """
    Dispatch parsed arguments to the orchestrator

    Responsibilities:
    - Load input files
    - Pick the service method and its summary
    - Print outputs and write requested files

    Does NOT handle:
    - Graph operations (CalculusService)
    - Trace bookkeeping (ObservabilityService)
    """

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.orchestrator = CalculusOrchestrator()

    def verb(self) -> str:
        sub = getattr(self.args, "action", None) or getattr(self.args, "kind", None)
        return f"{self.args.command} {sub}" if sub else self.args.command

    def inputs(self) -> Dict:
        return {k: v for k, v in vars(self.args).items() if k not in ("handler",) and v is not None}

    def run(self, method: str, *args, summarize=None, **kwargs):
        return self.orchestrator.run(self.verb(), method, *args, summarize=summarize, inputs=self.inputs(), **kwargs)

    # graph core

    def apply(self):
        G, trace = codec.load(self.args.graph), codec.load(self.args.trace)
        result, metrics = self.run("apply", G, trace, summarize=lambda H: ("ok", {"n": H.n, "edges": H.edge_count()}))
        if result is not None:
            _emit(result, self.args.out)
        return metrics

    def iso(self):
        G, H = codec.load(self.args.graph), codec.load(self.args.other)

        def summarize(result):
            found, mapping = result
            if not found:
                return "no", {"isomorphic": False}
            return "ok", {"isomorphic": True, "mapping": [mapping[v] for v in range(G.n)]}

        return self.run("isomorphic", G, H, summarize=summarize, max_n=self.args.max_n)[1]

    # connectivity

    def rank(self):
        G = codec.load(self.args.graph)
        result, metrics = self.run("cut_rank", G, self.args.set, summarize=lambda r: ("ok", {"value": r}))
        if result is not None:
            print(result)
        return metrics

    def lconn(self):
        G = codec.load(self.args.graph)
        result, metrics = self.run("local_connectivity", G, self.args.S, self.args.T,
                                   summarize=lambda r: ("ok", {"value": r}))
        if result is not None:
            print(result)
        return metrics

    def kappa(self):
        G = codec.load(self.args.graph)
        result, metrics = self.run("kappa", G, self.args.S, self.args.T, summarize=lambda r: ("ok", {"value": r}),
                                   method=self.args.method, max_free=self.args.max_free)
        if result is not None:
            print(result)
        return metrics

    def pivotminor(self):
        G = codec.load(self.args.graph)

        def summarize(result):
            minor, trace, _ = result
            if self.args.verify and not self.orchestrator.verify_replay(G, trace, minor):
                return "error", {"verified": False, "error": "verify"}
            return "ok", {"n": minor.n, "steps": len(trace)}

        result, metrics = self.run("pivot_minor", G, self.args.S, self.args.T, summarize=summarize,
                                   max_free=self.args.max_free)
        if result is not None:
            _emit(result[0], self.args.out)
            if self.args.trace:
                codec.save(self.args.trace, result[1])
        return metrics

    def rankwidth(self):
        G = codec.load(self.args.graph)

        def summarize(result):
            width, decomposition = result
            fields = {"width": width}
            if self.args.verify:
                fields["verified"] = decomposition.is_valid(G)
                if not fields["verified"]:
                    return "error", {**fields, "error": "verify"}
            return "ok", fields

        result, metrics = self.run("rank_width", G, summarize=summarize, max_n=self.args.max_n)
        if result is not None:
            width, decomposition = result
            print(width)
            if self.args.witness:
                for v in decomposition.leaves():
                    print(f"leaf {v} {decomposition.leaf_nodes[v]}")
                for a, b in sorted(decomposition.tree.edges(), key=str):
                    print(f"edge {a} {b}")
        return metrics

    def mfcheck(self):
        G = codec.load(self.args.graph)
        if self.args.converse:
            def summarize(report):
                status = "ok" if report["implication_holds"] else "no"
                return status, dict(report)

            return self.run("partial_converse", G, self.args.m, summarize=summarize)[1]

        def summarize(result):
            holds, partition = result
            if holds:
                return "ok", {"holds": True}
            return "no", {"holds": False, "side": min(partition, key=len)}

        return self.run("mf_check", G, self.args.m, summarize=summarize, max_n=self.args.max_n)[1]

    # binary matroids

    def mintersect(self):
        G = codec.load(self.args.graph)

        def summarize(result):
            if result.found:
                return "ok", {"size": len(result.common), "common": list(result.common)}
            return "no", {"size": len(result.common), "P": list(result.certificate.P),
                          "Q": list(result.certificate.Q)}

        return self.run("intersect", G, self.args.S, self.args.T, self.args.k, summarize=summarize)[1]

    def klink(self):
        G = codec.load(self.args.graph)
        if self.args.action == "verify":
            mode = LinkMode.DISJOINT if self.args.disjoint else LinkMode.EQUAL
            link = KLink(tuple(self.args.x1), tuple(self.args.x2 or self.args.x1), mode)

            def summarize(result):
                valid, clause = result
                return ("ok", {"valid": True}) if valid else ("no", {"valid": False, "clause": clause})

            return self.run("verify_link", G, self.args.S, self.args.T, link, summarize=summarize)[1]

        def summarize(result):
            if isinstance(result, KLink):
                return "ok", {"k": result.k, "X": list(result.X1)}
            return "no", {"max": len(result.common)}

        return self.run("find_link", G, self.args.S, self.args.T, self.args.k, summarize=summarize)[1]

    def disentangle(self):
        G = codec.load(self.args.graph)

        def summarize(result):
            if not isinstance(result, DisentangleResult):
                return "no", {"stage": result.stage, "detail": result.detail}
            fields = {"steps": len(result.trace), "mode": result.link.mode.value,
                      "X1": list(result.link.X1), "X2": list(result.link.X2)}
            if self.args.verify:
                fields["verified"] = self.orchestrator.verify_replay(G, result.trace, result.graph)
                if not fields["verified"]:
                    return "error", {**fields, "error": "verify"}
            return "ok", fields

        result, metrics = self.run("disentangle", G, self.args.S, self.args.T, self.args.k, summarize=summarize,
                                   max_n=self.args.max_n)
        if isinstance(result, DisentangleResult):
            _emit(result.graph, self.args.out)
            if self.args.trace:
                codec.save(self.args.trace, result.trace)
        return metrics

    # circle graphs

    def circle(self):
        D = codec.load(self.args.diagram)
        action = self.args.action
        if action == "ig":
            result, metrics = self.run("circle_graph", D, summarize=lambda G: ("ok", {"n": G.n, "edges": G.edge_count()}))
            if result is not None:
                _emit(result, self.args.out)
            return metrics
        if action == "flip":
            result, metrics = self.run("circle_flip", D, self.args.chord, summarize=lambda E: ("ok", {"n": E.n}))
            if result is not None:
                _emit(result, self.args.out)
            return metrics
        if action == "toperm":
            result, metrics = self.run(
                "circle_to_permutation", D, verify=self.args.verify,
                summarize=lambda r: ("ok", {"pi": list(r.pi), "steps": len(r.trace)}),
            )
        else:
            result, metrics = self.run(
                "circle_to_grid", D, verify=self.args.verify, max_n=self.args.max_n,
                summarize=lambda r: ("ok", {"grid": r.grid_order, "steps": len(r.trace)}),
            )
        if result is not None and self.args.trace:
            codec.save(self.args.trace, result.trace)
        return metrics

    # vertex-minor search

    def contains(self):
        G, H = codec.load(self.args.graph), codec.load(self.args.pattern)
        pivots = self.args.command == "pm"

        def summarize(result):
            if not result.found:
                return "no", {"found": False}
            fields = {"found": True, "steps": len(result.trace)}
            if self.args.verify:
                fields["verified"] = self.orchestrator.verify_replay(G, result.trace, H)
                if not fields["verified"]:
                    return "error", {**fields, "error": "verify"}
            return "ok", fields

        result, metrics = self.run("contains", G, H, pivots=pivots, max_n=self.args.max_n,
                                   use_memo=not self.args.no_memo, summarize=summarize)
        if result is not None and result.found and self.args.trace:
            codec.save(self.args.trace, result.trace)
        return metrics

    def lec(self):
        G = codec.load(self.args.graph)
        if self.args.action == "size":
            result, metrics = self.run("class_size", G, pivots=self.args.pivots, max_size=self.args.max_size,
                                       summarize=lambda size: ("ok", {"size": size}))
        else:
            result, metrics = self.run("canonical", G, pivots=self.args.pivots, max_size=self.args.max_size,
                                       summarize=lambda form: ("ok", {"form": form}))
        if result is not None:
            print(result)
        return metrics

    # constellations

    def cst(self):
        return getattr(self, f"cst_{self.args.action}")()

    def cst_validate(self):
        G, obj = codec.load(self.args.graph), codec.load(self.args.cst)

        def summarize(violations):
            if not violations:
                return "ok", {"valid": True}
            for violation in violations:
                print(violation)
            return "no", {"valid": False, "clause": violations[0].clause}

        return self.run("validate", G, obj, summarize=summarize)[1]

    def cst_restrict(self):
        C = codec.load(self.args.cst)
        result, metrics = self.run("restrict", C, self.args.hub, self.args.set,
                                   summarize=lambda R: ("ok", {"n": R.n, "m": R.m, "k": R.k}))
        if result is not None:
            _emit(result, self.args.out)
        return metrics

    def cst_grow(self):
        G, aug = codec.load(self.args.graph), codec.load(self.args.cst)

        def summarize(result):
            n, m, k = result.params
            fields = {"case": result.case, "n": n, "m": m, "k": k, "steps": len(result.trace)}
            if self.args.verify:
                fields["verified"] = self.orchestrator.verify_replay(G, result.trace, result.graph)
                if not fields["verified"]:
                    return "error", {**fields, "error": "verify"}
            return "ok", fields

        result, metrics = self.run("grow", G, aug, self.args.v, summarize=summarize)
        if result is not None:
            _emit_pair(result.graph, result.result, self.args.out)
            if self.args.trace:
                codec.save(self.args.trace, result.trace)
        return metrics

    def cst_augment(self):
        G, C = codec.load(self.args.graph), codec.load(self.args.cst)

        def summarize(result):
            if not isinstance(result, AugmentationSearch):
                return "no", {"stage": result.stage, "detail": result.detail}
            n, m, k = result.augmentation.params
            return "ok", {"n": n, "m": m, "k": k, "steps": len(result.trace)}

        result, metrics = self.run("augment", G, C, self.args.k, link_size=self.args.link_size,
                                   summarize=summarize)
        if isinstance(result, AugmentationSearch):
            _emit_pair(result.graph, result.augmentation, self.args.out)
            if self.args.trace:
                codec.save(self.args.trace, result.trace)
        return metrics

    def cst_extract(self):
        G, C = codec.load(self.args.graph), codec.load(self.args.cst)
        target = codec.load(self.args.target) if self.args.target else None

        def summarize(result):
            if not isinstance(result, Realization):
                return "no", {"stage": result.stage, "detail": result.detail}
            return "ok", {"target_n": result.target.n, "steps": len(result.trace),
                          "vertices": result.final_sequence()}

        result, metrics = self.run("extract", G, C, self.args.shape, target=target, m=self.args.m,
                                   verify=self.args.verify, summarize=summarize)
        if isinstance(result, Realization) and self.args.trace:
            codec.save(self.args.trace, result.trace)
        return metrics

    # bounds and generators

    def bounds(self):
        result, metrics = self.run("bound", self.args.name, self.args.values,
                                   summarize=lambda value: ("ok", {"value": value}))
        if result is not None:
            print(result)
        return metrics

    def gen(self):
        kind = self.args.kind
        params = {"seed": self.args.seed, "n": self.args.n, "p": self.args.p, "k": self.args.k,
                  "shape": self.args.shape, "pi": self.args.pi}
        result, metrics = self.run("generate", kind, params,
                                   summarize=lambda obj: ("ok", {"kind": kind}))
        if result is None:
            return metrics
        if kind == "cst":
            _emit_pair(result[0], result[1], self.args.out)
        else:
            _emit(result, self.args.out)
        return metrics


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vmc", description="Vertex-minor calculus toolkit")
    parser.add_argument("--metrics-json", help="write run traces to this JSON file")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_cmd(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph", help=".ogr file")
        p.set_defaults(handler=handler)
        return p

    def sides(p):
        p.add_argument("--S", type=vertex_list, required=True)
        p.add_argument("--T", type=vertex_list, required=True)

    p = graph_cmd("rank", CommandRunner.rank, "cut-rank of a vertex set")
    p.add_argument("--set", type=vertex_list, required=True)

    p = graph_cmd("lconn", CommandRunner.lconn, "local connectivity of S and T")
    sides(p)

    p = graph_cmd("kappa", CommandRunner.kappa, "connectivity of S and T over all separations")
    sides(p)
    p.add_argument("--method", choices=["enumerate", "recursive"], default="enumerate")
    p.add_argument("--max-free", type=int)

    p = graph_cmd("pivotminor", CommandRunner.pivotminor, "pivot-minor on S and T preserving kappa")
    sides(p)
    p.add_argument("--max-free", type=int)
    p.add_argument("--out")
    p.add_argument("--trace")
    p.add_argument("--verify", action="store_true")

    p = graph_cmd("rankwidth", CommandRunner.rankwidth, "exact rank-width")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--max-n", type=int)

    p = graph_cmd("mfcheck", CommandRunner.mfcheck, "(m, f)-connectivity check")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--converse", action="store_true", help="report the rank-width implication instead")
    p.add_argument("--max-n", type=int)

    p = graph_cmd("mintersect", CommandRunner.mintersect, "intersection of the cut-matroids toward S and T")
    sides(p)
    p.add_argument("--k", type=int)

    p = sub.add_parser("klink", help="verify or find k-links")
    p.add_argument("action", choices=["verify", "find"])
    p.add_argument("graph")
    sides(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--x1", type=vertex_list, default=[])
    p.add_argument("--x2", type=vertex_list)
    p.add_argument("--disjoint", action="store_true")
    p.set_defaults(handler=CommandRunner.klink)

    p = graph_cmd("disentangle", CommandRunner.disentangle, "locally equivalent graph holding a k-link")
    sides(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-n", type=int)
    p.add_argument("--out")
    p.add_argument("--trace")
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("circle", help="circle graph operations")
    p.add_argument("action", choices=["ig", "flip", "toperm", "togrid"])
    p.add_argument("diagram", help=".cwd file")
    p.add_argument("chord", nargs="?")
    p.add_argument("--out")
    p.add_argument("--trace")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--max-n", type=int)
    p.set_defaults(handler=CommandRunner.circle)

    for name in ("vm", "pm"):
        p = sub.add_parser(name, help=f"{'vertex' if name == 'vm' else 'pivot'}-minor containment")
        p.add_argument("action", choices=["contains"])
        p.add_argument("graph")
        p.add_argument("pattern")
        p.add_argument("--trace")
        p.add_argument("--verify", action="store_true")
        p.add_argument("--no-memo", action="store_true")
        p.add_argument("--max-n", type=int)
        p.set_defaults(handler=CommandRunner.contains)

    p = sub.add_parser("lec", help="local equivalence class")
    p.add_argument("action", choices=["size", "canon"])
    p.add_argument("graph")
    p.add_argument("--pivots", action="store_true")
    p.add_argument("--max-size", type=int)
    p.set_defaults(handler=CommandRunner.lec)

    p = sub.add_parser("cst", help="constellations and augmentations")
    p.add_argument("action", choices=["validate", "restrict", "grow", "augment", "extract"])
    p.add_argument("files", nargs="+", help="graph .ogr then .cst (restrict takes only the .cst)")
    p.add_argument("--hub", type=int)
    p.add_argument("--set", type=vertex_list)
    p.add_argument("--v", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--link-size", type=int)
    p.add_argument("--shape", choices=["star", "matching", "clique", "path"])
    p.add_argument("--target")
    p.add_argument("--m", type=int)
    p.add_argument("--out")
    p.add_argument("--trace")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(handler=CommandRunner.cst)

    p = graph_cmd("apply", CommandRunner.apply, "replay a trace on a graph")
    p.add_argument("trace", help=".trc file")
    p.add_argument("--out")

    p = graph_cmd("iso", CommandRunner.iso, "isomorphism test")
    p.add_argument("other")
    p.add_argument("--max-n", type=int)

    p = sub.add_parser("bounds", help="evaluate a bound function")
    p.add_argument("name")
    p.add_argument("values", type=int, nargs="*")
    p.set_defaults(handler=CommandRunner.bounds)

    p = sub.add_parser("gen", help="generate fixtures")
    p.add_argument("kind", choices=["grid", "perm", "random", "diagram", "cst"])
    p.add_argument("size", nargs="?", help="n for grid/random/diagram, a permutation for perm")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--k", type=int)
    p.add_argument("--shape", choices=["star", "matching", "clique", "path"])
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=CommandRunner.gen)
    return parser


def _normalize(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Fill positional conveniences that argparse cannot express directly"""
    if args.command == "cst":
        if args.action == "restrict":
            if len(args.files) != 1 or args.hub is None or args.set is None:
                parser.error("cst restrict takes one .cst file, --hub and --set")
            args.cst = args.files[0]
        else:
            if len(args.files) != 2:
                parser.error(f"cst {args.action} takes a graph and a .cst file")
            args.graph, args.cst = args.files
        if args.action == "augment" and args.k is None:
            parser.error("cst augment needs --k")
        if args.action == "extract" and args.shape is None:
            parser.error("cst extract needs --shape")
    elif args.command == "circle" and args.action == "flip" and args.chord is None:
        parser.error("circle flip needs a chord name")
    elif args.command == "gen":
        args.pi = None
        if args.kind == "perm":
            if not args.size:
                parser.error("gen perm needs a permutation such as 2,3,1")
            args.pi = vertex_list(args.size)
        elif args.size is not None:
            try:
                args.n = int(args.size)
            except ValueError:
                parser.error(f"expected an integer size, got '{args.size}'")
        if args.kind != "perm" and args.n is None:
            parser.error(f"gen {args.kind} needs n")
        if args.kind == "cst" and args.shape is None:
            parser.error("gen cst needs --shape")


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one command

    Returns:
        int: 0 ok, 1 property does not hold, 2 usage or input error, 3 cap refused,
            4 failed verification or internal error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else EXIT_CODES["usage"]
    try:
        _normalize(args, parser)
    except SystemExit:
        return EXIT_CODES["usage"]

    runner = CommandRunner(args)
    try:
        metrics = args.handler(runner)
    except VertexMinorError as e:
        # input files failed to load before any operation ran
        print(str(e), file=sys.stderr)
        print(format_result_line(runner.verb(), "usage", {"error": e.kind}))
        return EXIT_CODES["usage"]

    if metrics.get("error"):
        print(metrics["error"], file=sys.stderr)
    print(runner.orchestrator.summary_line(metrics["trace_id"]))
    if args.metrics_json:
        runner.orchestrator.export_metrics(args.metrics_json)
    return EXIT_CODES.get(metrics.get("status"), EXIT_CODES["error"])


def main():
    _setup_logging()
    sys.exit(run())


if __name__ == "__main__":
    main()
