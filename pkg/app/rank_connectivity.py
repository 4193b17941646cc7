"""
Rank Connectivity Module - Cut-rank, local connectivity, kappa and exact rank-width
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import networkx as nx

from bounds import BoundTable
from config import cap_or_default
from errors import CapExceeded, InvalidOperation
from gf2 import bits_of, gf2_rank, mask_of, popcount
from graph_core import (
    OperationTrace,
    OrderedGraph,
    TracedGraph,
    delete_vertex,
    local_complement,
)

logger = logging.getLogger(__name__)


def _as_mask(G: OrderedGraph, X: Iterable[int]) -> int:
    mask = mask_of(X)
    if mask & ~G.all_mask:
        raise InvalidOperation(f"vertex set reaches outside 0..{G.n - 1}")
    return mask


def cut_rank_mask(G: OrderedGraph, mask: int) -> int:
    comp = G.all_mask & ~mask
    return gf2_rank(G.rows[x] & comp for x in bits_of(mask))


def cut_rank(G: OrderedGraph, X: Iterable[int]) -> int:
    """GF(2) rank of A[X, V - X]"""
    return cut_rank_mask(G, _as_mask(G, X))


def lconn_mask(G: OrderedGraph, s_mask: int, t_mask: int) -> int:
    return gf2_rank(G.rows[s] & t_mask for s in bits_of(s_mask))


def local_connectivity(G: OrderedGraph, S: Iterable[int], T: Iterable[int]) -> int:
    """
    Local connectivity: GF(2) rank of A[S, T]

    Args:
        G: input graph
        S, T: disjoint vertex sets

    Returns:
        int: rank of the S x T block
    """
    s_mask, t_mask = _as_mask(G, S), _as_mask(G, T)
    if s_mask & t_mask:
        raise InvalidOperation("local connectivity needs disjoint sets")
    return lconn_mask(G, s_mask, t_mask)


def _kappa_enumerate(G: OrderedGraph, s_mask: int, t_mask: int, cap: int) -> int:
    free = bits_of(G.all_mask & ~(s_mask | t_mask))
    if len(free) > cap:
        raise CapExceeded("kappa free vertices", cap, len(free))
    best = None
    for bits in range(1 << len(free)):
        extra = mask_of(free[i] for i in range(len(free)) if (bits >> i) & 1)
        value = cut_rank_mask(G, s_mask | extra)
        if best is None or value < best:
            best = value
            if best == 0:
                break
    return best


def _kappa_recursive(G: OrderedGraph, S: Tuple[int, ...], T: Tuple[int, ...], memo: Dict) -> int:
    key = (G.rows, S, T)
    if key in memo:
        return memo[key]
    used = set(S) | set(T)
    free = [v for v in range(G.n) if v not in used]
    if not free:
        value = lconn_mask(G, mask_of(S), mask_of(T))
    else:
        v = free[0]
        values = []
        for H in (G, local_complement(G, v)):
            minor, label_map = delete_vertex(H, v)
            values.append(_kappa_recursive(
                minor,
                tuple(label_map[s] for s in S),
                tuple(label_map[t] for t in T),
                memo,
            ))
        value = max(values)
    memo[key] = value
    return value


def kappa(
    G: OrderedGraph,
    S: Iterable[int],
    T: Iterable[int],
    method: str = "enumerate",
    max_free: Optional[int] = None,
) -> int:
    """
    Connectivity between S and T: min cut-rank over S <= X <= V - T

    Args:
        G: input graph
        S, T: disjoint nonempty vertex sets
        method: "enumerate" over all separations, or "recursive" deletion /
            local-complement-then-deletion of the smallest free vertex
        max_free: cap on the number of vertices outside S and T

    Returns:
        int: the connectivity value
    """
    S, T = sorted(set(S)), sorted(set(T))
    s_mask, t_mask = _as_mask(G, S), _as_mask(G, T)
    if not S or not T:
        raise InvalidOperation("kappa needs nonempty S and T")
    if s_mask & t_mask:
        raise InvalidOperation("kappa needs disjoint sets")
    cap = cap_or_default(max_free, "kappa_max_free")
    if method == "enumerate":
        return _kappa_enumerate(G, s_mask, t_mask, cap)
    if method == "recursive":
        free = G.n - len(S) - len(T)
        if free > cap:
            raise CapExceeded("kappa free vertices", cap, free)
        return _kappa_recursive(G, tuple(S), tuple(T), {})
    raise InvalidOperation(f"unknown kappa method '{method}'")


@dataclass
class RankDecomposition:
    """Cubic tree whose leaves are the vertices, with its width"""

    tree: nx.Graph
    width: int
    n: int = 0
    leaf_nodes: Dict[int, tuple] = field(default_factory=dict)

    def leaves(self) -> List[int]:
        return sorted(self.leaf_nodes)

    def edge_widths(self, G: OrderedGraph) -> List[int]:
        widths = []
        for a, b in self.tree.edges():
            pruned = self.tree.copy()
            pruned.remove_edge(a, b)
            side = nx.node_connected_component(pruned, a)
            leaves = [v for v, node in self.leaf_nodes.items() if node in side]
            widths.append(cut_rank(G, leaves))
        return widths

    def recompute_width(self, G: OrderedGraph) -> int:
        return max(self.edge_widths(G), default=0)

    def is_valid(self, G: OrderedGraph) -> bool:
        if sorted(self.leaf_nodes) != list(range(G.n)):
            return False
        if G.n and not nx.is_tree(self.tree):
            return False
        leaf_set = set(self.leaf_nodes.values())
        for node, degree in self.tree.degree():
            if node in leaf_set:
                if G.n > 1 and degree != 1:
                    return False
            elif degree != 3:
                return False
        return self.recompute_width(G) == self.width


def rank_width(G: OrderedGraph, max_n: Optional[int] = None) -> Tuple[int, RankDecomposition]:
    """
    Exact rank-width by dynamic programming over vertex subsets

    Args:
        G: input graph
        max_n: refuse graphs with more vertices

    Returns:
        tuple: (width, witness decomposition)
    """
    cap = cap_or_default(max_n, "rankwidth_max_n")
    n = G.n
    if n > cap:
        raise CapExceeded("rank-width vertices", cap, n)
    tree = nx.Graph()
    if n == 0:
        return 0, RankDecomposition(tree, 0, 0, {})
    if n == 1:
        tree.add_node(("leaf", 0))
        return 0, RankDecomposition(tree, 0, 1, {0: ("leaf", 0)})

    full = G.all_mask
    cr = [cut_rank_mask(G, X) for X in range(full + 1)]
    h = [0] * (full + 1)
    split = [0] * (full + 1)
    for X in range(1, full + 1):
        if X & (X - 1) == 0:
            h[X] = cr[X]
            continue
        low = X & -X
        rest = X ^ low
        best, best_a = None, 0
        sub = rest
        while True:
            A = sub | low
            B = X ^ A
            if B:
                value = h[A] if h[A] > h[B] else h[B]
                if best is None or value < best:
                    best, best_a = value, A
            if sub == 0:
                break
            sub = (sub - 1) & rest
        h[X] = best if best > cr[X] else cr[X]
        split[X] = best_a
    width = h[full]

    leaf_nodes = {}

    def node_for(X: int):
        if popcount(X) == 1:
            v = X.bit_length() - 1
            leaf_nodes[v] = ("leaf", v)
            tree.add_node(("leaf", v))
            return ("leaf", v)
        node = ("node", X)
        A = split[X]
        for child in (A, X ^ A):
            tree.add_edge(node, node_for(child))
        return node

    A = split[full]
    tree.add_edge(node_for(A), node_for(full ^ A))
    logger.debug("rank-width %d for n=%d", width, n)
    return width, RankDecomposition(tree, width, n, leaf_nodes)


def extract_connected_pivot_minor(
    G: OrderedGraph,
    S: Iterable[int],
    T: Iterable[int],
    max_free: Optional[int] = None,
) -> Tuple[OrderedGraph, OperationTrace, Dict[int, int]]:
    """
    Pivot-minor on S and T whose local connectivity equals kappa(S, T)

    Returns:
        tuple: (graph, trace of PIV/DEL steps, map original -> final label)
    """
    S, T = sorted(set(S)), sorted(set(T))
    target = kappa(G, S, T, max_free=max_free)
    traced = TracedGraph(G)
    used = set(S) | set(T)
    for v in range(G.n):
        if v in used:
            continue
        cur = traced.cur(v)
        nbrs = traced.graph.neighbours(cur)
        if not nbrs:
            traced.delete(v)
            continue
        minor, label_map = delete_vertex(traced.graph, cur)
        if kappa(minor, [label_map[traced.cur(s)] for s in S],
                 [label_map[traced.cur(t)] for t in T], max_free=max_free) == target:
            traced.delete(v)
            continue
        u = traced.orig(nbrs[0])
        traced.pivot(u, v)
        traced.delete(v)
    result = traced.graph
    current = traced.label_map()
    assert local_connectivity(result, [current[s] for s in S], [current[t] for t in T]) == target
    return result, traced.trace, current


def check_mf_connected(
    G: OrderedGraph,
    m: int,
    f: Optional[Callable[[int], int]] = None,
    max_n: Optional[int] = None,
) -> Tuple[bool, Optional[Tuple[List[int], List[int]]]]:
    """
    Check that every partition with cut-rank below m has a side of size <= f(rank)

    Returns:
        tuple: (holds, violating partition or None)
    """
    cap = cap_or_default(max_n, "mf_max_n")
    if G.n > cap:
        raise CapExceeded("(m,f)-check vertices", cap, G.n)
    if m <= 0 or G.n == 0:
        return True, None
    f = f or BoundTable().g
    full = G.all_mask
    for X in range(1, full + 1, 2):
        rho = cut_rank_mask(G, X)
        if rho >= m:
            continue
        small = min(popcount(X), G.n - popcount(X))
        if small > f(rho):
            return False, (bits_of(X), bits_of(full ^ X))
    return True, None


def check_partial_converse(
    G: OrderedGraph,
    r: int,
    f: Optional[Callable[[int], int]] = None,
) -> Dict[str, bool]:
    """
    Empirical check: (r, f)-connected with >= 3 f(r-1) vertices implies rank-width >= r

    Returns:
        dict: hypothesis, width, implication_holds
    """
    f = f or BoundTable().g
    connected, _ = check_mf_connected(G, r, f)
    hypothesis = connected and r >= 1 and G.n >= 3 * f(r - 1)
    width, _ = rank_width(G)
    return {
        "hypothesis": hypothesis,
        "width": width,
        "implication_holds": (not hypothesis) or width >= r,
    }

