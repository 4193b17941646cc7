"""
Calculus Service - Graph operations behind the CLI
Wraps the library modules and returns (result, metrics) without tracing concerns
"""

import logging
import os
import sys
import time
from math import comb
from typing import Callable, Dict, Optional, Sequence, Tuple

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

import fixtures
from binary_matroid import BinaryMatroid, KLink, LinkMode, disentangle, matroid_intersection, verify_k_link
from bounds import BoundTable
from circle import (
    ChordDiagram,
    circle_to_grid,
    circle_to_permutation,
    comparability_grid,
    flip,
    intersection_graph,
    permutation_graph,
    verify_circle_grid,
    verify_circle_permutation,
)
from constellation import Augmentation, Constellation, restrict, validate
from errors import InvalidOperation, PreconditionError, VerificationError
from extraction import clique_pipeline, extract_matching, extract_star, path_pipeline, verify_realization
from graph_core import OperationTrace, OrderedGraph, apply_trace, is_isomorphic
from growth import find_augmentation, grow_step
from rank_connectivity import (
    check_mf_connected,
    check_partial_converse,
    cut_rank,
    extract_connected_pivot_minor,
    kappa,
    local_connectivity,
    rank_width,
)
from vm_search import canonical_form, is_pivot_minor, is_vertex_minor, local_equivalence_class, pivot_equivalence_class

logger = logging.getLogger(__name__)


class CalculusService:
    """
    Calculus Service - Provides the library operations

    Responsibilities:
    - Call one library operation per method
    - Time it and report success or the error kind
    - Pick defaults the CLI leaves open (targets, free vertices)

    Does NOT handle:
    - Trace management
    - File parsing and printing
    - Exit codes
    """

    def __init__(self, bounds: Optional[BoundTable] = None):
        self.bounds = bounds

    def _run(self, operation: str, fn: Callable, *args, **kwargs) -> Tuple[object, Dict]:
        start = time.time()
        try:
            result = fn(*args, **kwargs)
            return result, {
                "operation": operation,
                "duration_ms": round((time.time() - start) * 1000, 2),
                "success": True,
            }
        except Exception as e:
            logger.debug("%s failed: %s", operation, e)
            return None, {
                "operation": operation,
                "duration_ms": round((time.time() - start) * 1000, 2),
                "error": str(e),
                "error_kind": getattr(e, "kind", "internal"),
                "success": False,
            }

    # graph core

    def apply(self, G: OrderedGraph, trace: OperationTrace):
        return self._run("apply", apply_trace, G, trace)

    def isomorphic(self, G: OrderedGraph, H: OrderedGraph, max_n: Optional[int] = None):
        return self._run("isomorphic", is_isomorphic, G, H, max_n=max_n)

    def replays_to(self, G: OrderedGraph, trace: OperationTrace, H: OrderedGraph):
        """Replay trace on G; True when the result equals H or is isomorphic to it"""
        def run():
            final = apply_trace(G, trace)
            return final == H or is_isomorphic(final, H)[0]

        return self._run("verify_replay", run)

    # cut-rank and connectivity

    def cut_rank(self, G: OrderedGraph, X: Sequence[int]):
        return self._run("cut_rank", cut_rank, G, X)

    def local_connectivity(self, G: OrderedGraph, S: Sequence[int], T: Sequence[int]):
        return self._run("local_connectivity", local_connectivity, G, S, T)

    def kappa(self, G: OrderedGraph, S: Sequence[int], T: Sequence[int], method: str = "enumerate",
              max_free: Optional[int] = None):
        return self._run("kappa", kappa, G, S, T, method=method, max_free=max_free)

    def rank_width(self, G: OrderedGraph, max_n: Optional[int] = None):
        return self._run("rank_width", rank_width, G, max_n=max_n)

    def mf_check(self, G: OrderedGraph, m: int, max_n: Optional[int] = None):
        return self._run("mf_check", check_mf_connected, G, m, max_n=max_n)

    def partial_converse(self, G: OrderedGraph, r: int):
        return self._run("partial_converse", check_partial_converse, G, r)

    def pivot_minor(self, G: OrderedGraph, S: Sequence[int], T: Sequence[int], max_free: Optional[int] = None):
        return self._run("pivot_minor", extract_connected_pivot_minor, G, S, T, max_free=max_free)

    # binary matroids

    def intersect(self, G: OrderedGraph, S: Sequence[int], T: Sequence[int], k: Optional[int] = None):
        def run():
            free = [v for v in range(G.n) if v not in set(S) | set(T)]
            return matroid_intersection(BinaryMatroid(G, S, free), BinaryMatroid(G, T, free), k)

        return self._run("matroid_intersection", run)

    def find_link(self, G: OrderedGraph, S: Sequence[int], T: Sequence[int], k: int):
        """Equal k-link from a common independent set, or the intersection's certificate"""
        def run():
            free = [v for v in range(G.n) if v not in set(S) | set(T)]
            found = matroid_intersection(BinaryMatroid(G, S, free), BinaryMatroid(G, T, free), k)
            if not found.found:
                return found
            return KLink(found.common, found.common, LinkMode.EQUAL)

        return self._run("find_k_link", run)

    def verify_link(self, G: OrderedGraph, S: Sequence[int], T: Sequence[int], link: KLink):
        return self._run("verify_k_link", verify_k_link, G, S, T, link)

    def disentangle(self, G: OrderedGraph, S: Sequence[int], T: Sequence[int], k: int,
                    max_n: Optional[int] = None):
        return self._run("disentangle", disentangle, G, S, T, k, max_n=max_n)

    # circle graphs

    def circle_graph(self, D: ChordDiagram):
        return self._run("intersection_graph", intersection_graph, D)

    def circle_flip(self, D: ChordDiagram, chord: str):
        return self._run("flip", flip, D, chord)

    def circle_to_permutation(self, D: ChordDiagram, verify: bool = False):
        def run():
            result = circle_to_permutation(D)
            if verify and not verify_circle_permutation(D, result):
                raise VerificationError("circle_to_permutation", "trace does not replay to the circle graph")
            return result

        return self._run("circle_to_permutation", run)

    def circle_to_grid(self, D: ChordDiagram, verify: bool = False, max_n: Optional[int] = None):
        def run():
            result = circle_to_grid(D)
            if verify and not verify_circle_grid(D, result, max_n=max_n):
                raise VerificationError("circle_to_grid", "trace does not replay to the circle graph")
            return result

        return self._run("circle_to_grid", run)

    # vertex-minor search

    def contains(self, G: OrderedGraph, H: OrderedGraph, pivots: bool = False, max_n: Optional[int] = None,
                 use_memo: bool = True):
        search = is_pivot_minor if pivots else is_vertex_minor
        return self._run("pivot_minor_search" if pivots else "vertex_minor_search", search, G, H,
                         max_n=max_n, use_memo=use_memo)

    def class_size(self, G: OrderedGraph, pivots: bool = False, max_size: Optional[int] = None):
        enumerate_class = pivot_equivalence_class if pivots else local_equivalence_class
        return self._run("class_size", lambda: len(enumerate_class(G, max_size=max_size)))

    def canonical(self, G: OrderedGraph, pivots: bool = False, max_size: Optional[int] = None):
        return self._run("canonical_form", canonical_form, G, max_size=max_size, pivots=pivots)

    # constellations

    def validate(self, G: OrderedGraph, obj):
        return self._run("validate", validate, G, obj)

    def restrict(self, C: Constellation, hub: int, X: Sequence[int]):
        return self._run("restrict", restrict, C, hub, X)

    def grow(self, G: OrderedGraph, aug: Augmentation, v: Optional[int] = None):
        return self._run("grow_step", grow_step, G, aug, v)

    def augment(self, G: OrderedGraph, C: Constellation, k: int, link_size: Optional[int] = None):
        return self._run("find_augmentation", find_augmentation, G, C, k, link_size=link_size)

    def extract(self, G: OrderedGraph, C: Constellation, shape: str, target: Optional[OrderedGraph] = None,
                m: Optional[int] = None, verify: bool = False):
        def run():
            if shape == "star":
                result = extract_star(G, C, target or self._default_target(C, shape))
            elif shape == "matching":
                result = extract_matching(G, C, target or self._default_target(C, shape))
            elif shape == "clique":
                result = clique_pipeline(G, C)
                if not result:
                    return result
            elif shape == "path":
                result = path_pipeline(G, C, m)
            else:
                raise InvalidOperation(f"unknown shape '{shape}'")
            if verify and not verify_realization(G, result):
                raise VerificationError(f"extract_{shape}", "realization does not replay to its target")
            return result

        return self._run(f"extract_{shape}", run)

    @staticmethod
    def _default_target(C: Constellation, shape: str) -> OrderedGraph:
        """Complete graph on as many vertices as the constellation supports"""
        if shape == "matching":
            return OrderedGraph.complete(C.n)
        n = 2
        while comb(n + 1, 2) + 1 <= C.n:
            n += 1
        if comb(n, 2) + 1 != C.n:
            raise PreconditionError("shape", f"a star with {C.n} hubs does not match any target size")
        return OrderedGraph.complete(n)

    # bounds and generators

    def bound(self, name: str, args: Sequence[int], max_bits: Optional[int] = None):
        table = self.bounds or BoundTable(max_bits)
        return self._run("bound", table.evaluate, name, *args)

    def generate(self, kind: str, params: Dict):
        def run():
            seed = params.get("seed")
            if kind == "grid":
                return comparability_grid(params["n"])
            if kind == "perm":
                return permutation_graph(params["pi"])
            if kind == "random":
                return fixtures.random_graph(params["n"], params.get("p", 0.5), seed)
            if kind == "diagram":
                return fixtures.random_diagram(params["n"], seed)
            if kind == "cst":
                return fixtures.shape_fixture(params["shape"], params["n"], seed, params.get("k"))
            raise InvalidOperation(f"unknown generator '{kind}'")

        return self._run(f"gen_{kind}", run)
