"""
VM Search Module - Exact vertex-minor and pivot-minor containment at small scale
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from config import cap_or_default
from errors import CapExceeded
from graph_core import (
    OperationTrace,
    OrderedGraph,
    Step,
    apply_trace,
    delete_vertex,
    is_isomorphic,
    local_complement,
    pivot,
)

logger = logging.getLogger(__name__)

Parents = Dict[OrderedGraph, Optional[Tuple[OrderedGraph, Step]]]


def _closure(G: OrderedGraph, pivots: bool, max_size: int) -> Parents:
    parents: Parents = {G: None}
    queue = deque([G])
    while queue:
        current = queue.popleft()
        if pivots:
            moves = [(Step.pivot(u, v), lambda g, u=u, v=v: pivot(g, u, v, check=False))
                     for u, v in current.edges()]
        else:
            moves = [(Step.lc(v), lambda g, v=v: local_complement(g, v)) for v in range(current.n)]
        for step, move in moves:
            nxt = move(current)
            if nxt not in parents:
                parents[nxt] = (current, step)
                if len(parents) > max_size:
                    raise CapExceeded("equivalence class size", max_size, len(parents))
                queue.append(nxt)
    return parents


def _path_to(parents: Parents, target: OrderedGraph) -> List[Step]:
    steps = []
    node = target
    while parents[node] is not None:
        node, step = parents[node]
        steps.append(step)
    return list(reversed(steps))


def local_equivalence_class(G: OrderedGraph, max_size: Optional[int] = None) -> Set[OrderedGraph]:
    """All graphs reachable from G by local complementations, labels fixed"""
    return set(_closure(G, False, cap_or_default(max_size, "lec_max_size")))


def pivot_equivalence_class(G: OrderedGraph, max_size: Optional[int] = None) -> Set[OrderedGraph]:
    return set(_closure(G, True, cap_or_default(max_size, "lec_max_size")))


def canonical_form(G: OrderedGraph, max_size: Optional[int] = None, pivots: bool = False) -> str:
    """Smallest upper-triangle adjacency string over the equivalence class"""
    closure = _closure(G, pivots, cap_or_default(max_size, "lec_max_size"))
    return min(g.adjacency_bits() for g in closure)


def is_locally_equivalent(
    G: OrderedGraph, H: OrderedGraph, max_size: Optional[int] = None
) -> Optional[OperationTrace]:
    """LC-only trace turning G into exactly H, or None"""
    if G.n != H.n:
        return None
    parents = _closure(G, False, cap_or_default(max_size, "lec_max_size"))
    if H not in parents:
        return None
    return OperationTrace(tuple(_path_to(parents, H)))


@dataclass(frozen=True)
class MinorResult:
    found: bool
    trace: Optional[OperationTrace] = None
    mapping: Optional[Dict[int, int]] = None


class _MinorSearch:
    """
    Branching search over deletions of single vertices

    Responsibilities:
    - Branch on G-v, (G*v)-v and (G x vw)-v (pivot-only searches skip the middle one)
    - Remember equivalence classes already known not to contain H

    Does NOT handle:
    - Graphs above the configured vertex cap
    """

    def __init__(self, H: OrderedGraph, pivots: bool, use_memo: bool, largest_w: bool, max_size: int):
        self.H = H
        self.pivots = pivots
        self.use_memo = use_memo
        self.largest_w = largest_w
        self.max_size = max_size
        self.failed: Set[str] = set()
        self.nodes = 0

    def run(self, G: OrderedGraph) -> Optional[List[Step]]:
        self.nodes += 1
        if G.n < self.H.n:
            return None
        if self.H.n == 0:
            return [Step.keep([])]
        closure = _closure(G, self.pivots, self.max_size)
        key = min(g.adjacency_bits() for g in closure)
        if self.use_memo and key in self.failed:
            return None
        if G.n == self.H.n:
            for candidate in closure:
                if is_isomorphic(candidate, self.H)[0]:
                    return _path_to(closure, candidate)
            self.failed.add(key)
            return None
        for v in range(G.n):
            for prefix, minor in self._branches(G, v):
                found = self.run(minor)
                if found is not None:
                    return prefix + found
        self.failed.add(key)
        return None

    def _branches(self, G: OrderedGraph, v: int):
        yield [Step.delete(v)], delete_vertex(G, v)[0]
        nbrs = G.neighbours(v)
        if not nbrs:
            return
        if not self.pivots:
            yield [Step.lc(v), Step.delete(v)], delete_vertex(local_complement(G, v), v)[0]
        w = nbrs[-1] if self.largest_w else nbrs[0]
        yield [Step.pivot(v, w), Step.delete(v)], delete_vertex(pivot(G, v, w, check=False), v)[0]


def _contains(G, H, pivots, max_n, use_memo, largest_w, max_size) -> MinorResult:
    cap = cap_or_default(max_n, "vm_max_n")
    if G.n > cap:
        raise CapExceeded("minor search vertices", cap, G.n)
    search = _MinorSearch(H, pivots, use_memo, largest_w, cap_or_default(max_size, "lec_max_size"))
    steps = search.run(G)
    logger.debug("minor search visited %d nodes", search.nodes)
    if steps is None:
        return MinorResult(False)
    trace = OperationTrace(tuple(steps))
    ok, mapping = is_isomorphic(apply_trace(G, trace), H)
    assert ok, "minor search produced a trace that does not reach H"
    return MinorResult(True, trace, mapping)


def is_vertex_minor(
    G: OrderedGraph,
    H: OrderedGraph,
    max_n: Optional[int] = None,
    use_memo: bool = True,
    largest_w: bool = False,
    max_size: Optional[int] = None,
) -> MinorResult:
    """
    Decide whether H is isomorphic to a vertex-minor of G

    Args:
        G: host graph
        H: pattern graph (compared up to isomorphism)
        max_n: refuse hosts with more vertices
        use_memo: skip classes already known not to contain H
        largest_w: pivot with the largest neighbour instead of the smallest

    Returns:
        MinorResult: found flag, replayable trace and isomorphism onto H
    """
    return _contains(G, H, False, max_n, use_memo, largest_w, max_size)


def is_pivot_minor(
    G: OrderedGraph,
    H: OrderedGraph,
    max_n: Optional[int] = None,
    use_memo: bool = True,
    largest_w: bool = False,
    max_size: Optional[int] = None,
) -> MinorResult:
    """Decide whether H is isomorphic to a pivot-minor of G (PIV/DEL traces)"""
    return _contains(G, H, True, max_n, use_memo, largest_w, max_size)
