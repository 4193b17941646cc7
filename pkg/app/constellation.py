"""
Constellation Module - Coupled pairs, coupled-subset finders, constellations and augmentations
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from config import cap_or_default
from errors import CapExceeded, InvalidOperation
from gf2 import mask_of, popcount
from graph_core import OrderedGraph

logger = logging.getLogger(__name__)


class CouplingKind(str, Enum):
    COUPLED_MATCHING = "CoupledMatching"
    CO_MATCHING = "CoMatching"
    UP_HALF = "UpHalf"
    CO_UP_HALF = "CoUpHalf"
    DOWN_HALF = "DownHalf"
    CO_DOWN_HALF = "CoDownHalf"
    COMPLETE = "Complete"
    ANTICOMPLETE = "Anticomplete"
    NONE = "None"


PRECEDENCE = (
    CouplingKind.COUPLED_MATCHING,
    CouplingKind.UP_HALF,
    CouplingKind.DOWN_HALF,
    CouplingKind.CO_MATCHING,
    CouplingKind.CO_UP_HALF,
    CouplingKind.CO_DOWN_HALF,
    CouplingKind.COMPLETE,
    CouplingKind.ANTICOMPLETE,
)

COUPLED_KINDS = frozenset(PRECEDENCE[:6])
HALF_GRAPH_KINDS = frozenset({
    CouplingKind.UP_HALF,
    CouplingKind.CO_UP_HALF,
    CouplingKind.DOWN_HALF,
    CouplingKind.CO_DOWN_HALF,
})
# pairs allowed along an edge of the pattern graph
PATTERN_EDGE_KINDS = HALF_GRAPH_KINDS | {CouplingKind.COUPLED_MATCHING}


def row_pattern(kind: CouplingKind, i: int, k: int) -> int:
    """Positions of Y adjacent to x_i (0-based) under the given kind"""
    full = (1 << k) - 1
    if kind == CouplingKind.COUPLED_MATCHING:
        return 1 << i
    if kind == CouplingKind.CO_MATCHING:
        return full & ~(1 << i)
    if kind == CouplingKind.UP_HALF:
        return full & ~((1 << i) - 1)
    if kind == CouplingKind.CO_UP_HALF:
        return (1 << i) - 1
    if kind == CouplingKind.DOWN_HALF:
        return (1 << (i + 1)) - 1
    if kind == CouplingKind.CO_DOWN_HALF:
        return full & ~((1 << (i + 1)) - 1)
    if kind == CouplingKind.COMPLETE:
        return full
    return 0


def _column_pattern(kind: CouplingKind, j: int, k: int) -> int:
    """Positions of X adjacent to y_j (0-based) under the given kind"""
    return mask_of(i for i in range(k) if (row_pattern(kind, i, k) >> j) & 1)


def _rows(G: OrderedGraph, X: Sequence[int], Y: Sequence[int]) -> List[int]:
    where = {y: j for j, y in enumerate(Y)}
    rows = []
    for x in X:
        row = 0
        for y in G.neighbours(x):
            if y in where:
                row |= 1 << where[y]
        rows.append(row)
    return rows


def _check_pair(X: Sequence[int], Y: Sequence[int]):
    if len(X) != len(Y):
        raise InvalidOperation(f"coupling needs equal sizes, got {len(X)} and {len(Y)}")
    if set(X) & set(Y):
        raise InvalidOperation("coupling needs disjoint sets")


def coupling_kinds(G: OrderedGraph, X: Sequence[int], Y: Sequence[int]) -> Set[CouplingKind]:
    """Every pattern the ordered pair (X, Y) matches"""
    _check_pair(X, Y)
    k = len(X)
    rows = _rows(G, X, Y)
    return {
        kind for kind in PRECEDENCE
        if all(rows[i] == row_pattern(kind, i, k) for i in range(k))
    }


def classify_coupling(G: OrderedGraph, X: Sequence[int], Y: Sequence[int]) -> CouplingKind:
    """
    Classify the ordered pair (X, Y)

    Args:
        G: host graph
        X, Y: disjoint equal-size sequences, in the order the pattern is read

    Returns:
        CouplingKind: first matching kind by precedence, NONE when nothing fits
    """
    kinds = coupling_kinds(G, X, Y)
    for kind in PRECEDENCE:
        if kind in kinds:
            return kind
    return CouplingKind.NONE


def is_coupled(G: OrderedGraph, X: Sequence[int], Y: Sequence[int]) -> bool:
    return bool(coupling_kinds(G, X, Y) & COUPLED_KINDS)


def is_complete(G: OrderedGraph, X: Iterable[int], Y: Iterable[int]) -> bool:
    y_mask = mask_of(Y)
    return all(G.nbr_mask(x) & y_mask == y_mask for x in X)


def is_anticomplete(G: OrderedGraph, X: Iterable[int], Y: Iterable[int]) -> bool:
    y_mask = mask_of(Y)
    return all(G.nbr_mask(x) & y_mask == 0 for x in X)


def is_homogeneous(G: OrderedGraph, X: Iterable[int], Y: Iterable[int]) -> bool:
    X, Y = list(X), list(Y)
    return is_complete(G, X, Y) or is_anticomplete(G, X, Y)


def phi(source: Sequence[int], target: Sequence[int], subset: Iterable[int]) -> Tuple[int, ...]:
    """Map a subset of source to the elements of target at the same positions"""
    if len(source) != len(target):
        raise InvalidOperation("position map needs equal-length sequences")
    where = {v: p for p, v in enumerate(source)}
    try:
        positions = sorted(where[v] for v in subset)
    except KeyError as e:
        raise InvalidOperation(f"vertex {e.args[0]} is not in the source sequence") from None
    return tuple(target[p] for p in positions)


def shift_half_graph(
    G: OrderedGraph, X: Sequence[int], Y: Sequence[int]
) -> Tuple[Tuple[int, ...], Tuple[int, ...], CouplingKind]:
    """Drop the last vertex of X and the first of Y, then reclassify"""
    if len(X) < 2:
        raise InvalidOperation("shifting needs at least two vertices per side")
    X2, Y2 = tuple(X[:-1]), tuple(Y[1:])
    return X2, Y2, classify_coupling(G, X2, Y2)


# coupled-subset finders


class SearchMode(str, Enum):
    REORDER_Y = "reorderY"
    ORDER_PRESERVING = "orderPreserving"
    HOMOGENEOUS_ONLY = "homogeneousOnly"


@dataclass(frozen=True)
class CouplingWitness:
    """X' and Y' in the order that realizes kind (Y' may be reordered in reorderY mode)"""

    x_side: Tuple[int, ...]
    y_side: Tuple[int, ...]
    kind: CouplingKind

    @property
    def reordered(self) -> bool:
        return list(self.y_side) != sorted(self.y_side)

    def verify(self, G: OrderedGraph) -> bool:
        if self.kind in (CouplingKind.COMPLETE, CouplingKind.ANTICOMPLETE):
            check = is_complete if self.kind == CouplingKind.COMPLETE else is_anticomplete
            return len(self.x_side) == len(self.y_side) and check(G, self.x_side, self.y_side)
        return self.kind in coupling_kinds(G, self.x_side, self.y_side)


def _reorder_search(G, X, Y, k) -> Optional[CouplingWitness]:
    for xs in combinations(X, k):
        x_mask_pos = {x: i for i, x in enumerate(xs)}
        columns: Dict[int, List[int]] = {}
        for y in Y:
            col = mask_of(x_mask_pos[x] for x in G.neighbours(y) if x in x_mask_pos)
            columns.setdefault(col, []).append(y)
        for kind in PRECEDENCE[:6]:
            picked = []
            for j in range(k):
                bucket = columns.get(_column_pattern(kind, j, k))
                if not bucket:
                    break
                picked.append(bucket[0])
            if len(picked) == k:
                return CouplingWitness(tuple(xs), tuple(picked), kind)
    return None


def _order_preserving_search(G, X, Y, k) -> Optional[CouplingWitness]:
    if len(X) != len(Y):
        raise InvalidOperation("order-preserving search needs |X| == |Y|")
    for xs in combinations(X, k):
        ys = phi(X, Y, xs)
        kind = classify_coupling(G, xs, ys)
        if kind != CouplingKind.NONE:
            return CouplingWitness(tuple(xs), ys, kind)
    return None


def _homogeneous_search(G, X, Y, k) -> Optional[CouplingWitness]:
    y_mask = mask_of(Y)
    for xs in combinations(X, k):
        common = y_mask
        missing = y_mask
        for x in xs:
            common &= G.nbr_mask(x)
            missing &= ~G.nbr_mask(x)
        if popcount(common) >= k:
            return CouplingWitness(tuple(xs), tuple(sorted(y for y in Y if (common >> y) & 1)[:k]),
                                   CouplingKind.COMPLETE)
        if popcount(missing) >= k:
            return CouplingWitness(tuple(xs), tuple(sorted(y for y in Y if (missing >> y) & 1)[:k]),
                                   CouplingKind.ANTICOMPLETE)
    return None


def find_coupled_subsets(
    G: OrderedGraph,
    X: Sequence[int],
    Y: Sequence[int],
    k: int,
    mode: Union[SearchMode, str] = SearchMode.ORDER_PRESERVING,
    max_side: Optional[int] = None,
    max_k: Optional[int] = None,
) -> Optional[CouplingWitness]:
    """
    Exhaustive search for k-element subsets that are coupled or homogeneous

    Args:
        G: host graph
        X, Y: disjoint ordered vertex sets
        k: subset size
        mode: reorderY (Y' may be reordered, coupled only), orderPreserving
            (X' and its position image in Y), homogeneousOnly (complete or
            anticomplete X', Y')

    Returns:
        CouplingWitness or None when no subsets exist
    """
    mode = SearchMode(mode)
    side_cap = cap_or_default(max_side, "search_max_side")
    k_cap = cap_or_default(max_k, "search_max_k")
    if max(len(X), len(Y)) > side_cap:
        raise CapExceeded("coupled-subset side", side_cap, max(len(X), len(Y)))
    if k > k_cap:
        raise CapExceeded("coupled-subset k", k_cap, k)
    if set(X) & set(Y):
        raise InvalidOperation("coupled-subset search needs disjoint sets")
    if k <= 0 or k > min(len(X), len(Y)):
        return None
    X, Y = list(X), list(Y)
    if mode == SearchMode.REORDER_Y:
        witness = _reorder_search(G, X, Y, k)
    elif mode == SearchMode.ORDER_PRESERVING:
        witness = _order_preserving_search(G, X, Y, k)
    else:
        witness = _homogeneous_search(G, X, Y, k)
    if witness is not None:
        assert witness.verify(G), "coupled-subset witness does not verify"
    return witness


# constellations


@dataclass(frozen=True)
class Violation:
    clause: int
    name: str
    detail: str = ""

    def __str__(self) -> str:
        return f"clause {self.clause} ({self.name}): {self.detail}"


@dataclass(frozen=True, eq=True)
class Constellation:
    """
    Coclique of hubs with private leaf cocliques, coupled along a pattern graph

    Leaves are stored in increasing vertex order; pattern edges as (u, v)
    with u < v.
    """

    hubs: Tuple[int, ...]
    leaves: Dict[int, Tuple[int, ...]] = field(hash=False)
    pattern_vertices: Tuple[int, ...]
    pattern_edges: FrozenSet[Tuple[int, int]] = frozenset()

    @classmethod
    def build(
        cls,
        leaves: Dict[int, Sequence[int]],
        pattern_vertices: Iterable[int],
        pattern_edges: Iterable[Tuple[int, int]] = (),
    ) -> "Constellation":
        return cls(
            hubs=tuple(sorted(leaves)),
            leaves={h: tuple(sorted(w)) for h, w in leaves.items()},
            pattern_vertices=tuple(sorted(pattern_vertices)),
            pattern_edges=frozenset((min(u, v), max(u, v)) for u, v in pattern_edges),
        )

    @property
    def n(self) -> int:
        return len(self.pattern_vertices)

    @property
    def m(self) -> int:
        return len(self.hubs) - len(self.pattern_vertices)

    @property
    def k(self) -> int:
        sizes = {len(w) for w in self.leaves.values()}
        return sizes.pop() if len(sizes) == 1 else 0

    def leaf(self, h: int) -> Tuple[int, ...]:
        return self.leaves[h]

    def outside_hubs(self) -> Tuple[int, ...]:
        inside = set(self.pattern_vertices)
        return tuple(h for h in self.hubs if h not in inside)

    def a_side(self) -> List[int]:
        return sorted(v for h in self.pattern_vertices for v in (h,) + self.leaves[h])

    def b_side(self) -> List[int]:
        return sorted(v for h in self.outside_hubs() for v in (h,) + self.leaves[h])

    def vertices(self) -> List[int]:
        return sorted(v for h in self.hubs for v in (h,) + self.leaves[h])

    def pattern_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.pattern_vertices)
        graph.add_edges_from(self.pattern_edges)
        return graph

    def has_pattern_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.pattern_edges

    def relabel(self, where: Dict[int, int]) -> "Constellation":
        """Same constellation after vertices moved to new labels"""
        return Constellation.build(
            {where[h]: [where[x] for x in w] for h, w in self.leaves.items()},
            [where[h] for h in self.pattern_vertices],
            [(where[u], where[v]) for u, v in self.pattern_edges],
        )


def pair_kind(G: OrderedGraph, C: Constellation, u: int, v: int) -> CouplingKind:
    return classify_coupling(G, C.leaves[u], C.leaves[v])


def validate_constellation(G: OrderedGraph, C: Constellation) -> List[Violation]:
    """
    Check the five defining clauses of a constellation

    Returns:
        list: violations (empty when C is a constellation in G)
    """
    out: List[Violation] = []
    hubs = list(C.hubs)
    vertex_range = range(G.n)
    everything = hubs + [x for w in C.leaves.values() for x in w]
    if any(v not in vertex_range for v in everything):
        return [Violation(1, "hub-coclique", "vertex outside the graph")]

    if len(set(hubs)) != len(hubs) or not hubs:
        out.append(Violation(1, "hub-coclique", "hubs must be distinct and nonempty"))
    elif not G.is_coclique(mask_of(hubs)):
        out.append(Violation(1, "hub-coclique", "two hubs are adjacent"))

    sizes = {len(C.leaves.get(h, ())) for h in hubs}
    seen: Set[int] = set()
    for h in hubs:
        W = C.leaves.get(h, ())
        if list(W) != sorted(set(W)):
            out.append(Violation(2, "leaf-cocliques", f"leaves of {h} not in increasing order"))
        if seen & set(W) or set(W) & set(hubs):
            out.append(Violation(2, "leaf-cocliques", f"leaves of {h} overlap another set"))
        seen |= set(W)
        if not G.is_coclique(mask_of(W)):
            out.append(Violation(2, "leaf-cocliques", f"leaves of {h} are not a coclique"))
    if len(sizes) != 1 or 0 in sizes:
        out.append(Violation(2, "leaf-cocliques", f"leaf sets have sizes {sorted(sizes)}"))

    K = C.pattern_graph()
    if not C.pattern_vertices or not set(C.pattern_vertices) <= set(hubs):
        out.append(Violation(3, "pattern-connected", "pattern vertices must be hubs"))
    elif any(u not in K or v not in K for u, v in C.pattern_edges) or K.number_of_nodes() != C.n:
        out.append(Violation(3, "pattern-connected", "pattern edge leaves the pattern vertices"))
    elif not nx.is_connected(K):
        out.append(Violation(3, "pattern-connected", "pattern graph is disconnected"))

    hub_mask = mask_of(hubs)
    for h in hubs:
        W = C.leaves.get(h, ())
        others = hub_mask & ~(1 << h)
        if any(not G.has_edge(h, x) for x in W):
            out.append(Violation(4, "hub-leaves", f"hub {h} misses one of its leaves"))
        if any(G.nbr_mask(x) & others for x in W):
            out.append(Violation(4, "hub-leaves", f"leaves of {h} see another hub"))

    if len(sizes) == 1:
        for u, v in combinations(hubs, 2):
            Wu, Wv = C.leaves.get(u, ()), C.leaves.get(v, ())
            if set(Wu) & set(Wv):
                continue
            if C.has_pattern_edge(u, v):
                if not coupling_kinds(G, Wu, Wv) & PATTERN_EDGE_KINDS:
                    out.append(Violation(5, "pair-coupling", f"({u}, {v}) is a pattern edge but not coupled"))
            elif not is_anticomplete(G, Wu, Wv):
                out.append(Violation(5, "pair-coupling", f"({u}, {v}) is not a pattern edge but not anticomplete"))
    return out


def restrict_positions(C: Constellation, positions: Sequence[int]) -> Constellation:
    """Keep the leaves at the given positions in every hub"""
    positions = sorted(set(positions))
    return replace(C, leaves={h: tuple(w[p] for p in positions) for h, w in C.leaves.items()})


def restrict(C: Constellation, h: int, X: Iterable[int]) -> Constellation:
    """
    C|X: restrict every leaf set to the positions X occupies in W_h

    Args:
        C: constellation
        h: hub whose leaves index the restriction
        X: nonempty subset of W_h

    Returns:
        Constellation: (n, m, |X|)-constellation on the same hubs
    """
    if h not in C.leaves:
        raise InvalidOperation(f"{h} is not a hub")
    X = list(X)
    W = C.leaves[h]
    if not X or not set(X) <= set(W):
        raise InvalidOperation(f"restriction set must be a nonempty subset of the leaves of {h}")
    return restrict_positions(C, [W.index(x) for x in X])


# augmentations


@dataclass(frozen=True)
class Augmentation:
    constellation: Constellation
    x: int
    y: int
    X1: Tuple[int, ...]
    X2: Tuple[int, ...]
    weak: bool = False

    @property
    def equal(self) -> bool:
        return tuple(self.X1) == tuple(self.X2)

    @property
    def params(self) -> Tuple[int, int, int]:
        C = self.constellation
        return C.n, C.m, C.k

    def as_weak(self) -> "Augmentation":
        return replace(self, weak=True)


def validate_augmentation(G: OrderedGraph, aug: Augmentation) -> List[Violation]:
    """
    Check a (weak) augmentation clause by clause

    Clauses 1-5 come from the constellation; 6-10 are the weak clauses and
    11-14 the additional ones of a full augmentation.
    """
    C = aug.constellation
    out = validate_constellation(G, C)
    if out:
        return out
    X1, X2 = list(aug.X1), list(aug.X2)
    if aug.x not in C.pattern_vertices or aug.y not in C.outside_hubs():
        return out + [Violation(6, "x-y", "x must be a pattern hub and y an outside hub")]
    V = set(C.vertices())
    for name, X in (("X1", X1), ("X2", X2)):
        if len(X) != C.k or len(set(X)) != len(X) or list(X) != sorted(X):
            out.append(Violation(7, "link-sets", f"{name} must be {C.k} increasing distinct vertices"))
        elif set(X) & V or any(not 0 <= v < G.n for v in X):
            out.append(Violation(7, "link-sets", f"{name} meets the constellation"))
    if out:
        return out
    if not is_coupled(G, C.leaves[aug.x], X1):
        out.append(Violation(8, "x-coupled", "leaves of x and X1 are not coupled"))
    if not is_coupled(G, C.leaves[aug.y], X2):
        out.append(Violation(9, "y-coupled", "leaves of y and X2 are not coupled"))
    if not aug.equal:
        if set(X1) & set(X2):
            out.append(Violation(10, "link-mode", "X1 and X2 are neither equal nor disjoint"))
        elif not is_coupled(G, X1, X2):
            out.append(Violation(10, "link-mode", "X1 and X2 are not coupled"))
        else:
            b_mask, a_mask = mask_of(C.b_side()), mask_of(C.a_side())
            if len({G.nbr_mask(v) & b_mask for v in X1}) > 1:
                out.append(Violation(10, "link-mode", "X1 vertices differ on B(C)"))
            if len({G.nbr_mask(v) & a_mask for v in X2}) > 1:
                out.append(Violation(10, "link-mode", "X2 vertices differ on A(C)"))
    if aug.weak or out:
        return out

    ordered_hubs = set(C.pattern_vertices) | {aug.y}
    for name, X in (("X1", X1), ("X2", X2)):
        mask = mask_of(X)
        if not (G.is_clique(mask) or G.is_coclique(mask)):
            out.append(Violation(11, "clique-or-coclique", f"{name} is neither a clique nor a coclique"))
        for h in C.hubs:
            W = C.leaves[h]
            if h in ordered_hubs:
                if not (is_homogeneous(G, W, X) or is_coupled(G, W, X)):
                    out.append(Violation(12, "leaf-coupling", f"leaves of {h} and {name}"))
            elif not is_homogeneous(G, W, X):
                out.append(Violation(13, "leaf-homogeneous", f"leaves of {h} and {name}"))
            if not is_homogeneous(G, [h], X):
                out.append(Violation(14, "hub-homogeneous", f"hub {h} and {name}"))
    return out


def validate(G: OrderedGraph, obj: Union[Constellation, Augmentation]) -> List[Violation]:
    """Clause-by-clause report for a constellation or an augmentation"""
    if isinstance(obj, Augmentation):
        return validate_augmentation(G, obj)
    return validate_constellation(G, obj)


def path_order(C: Constellation) -> List[int]:
    """Pattern vertices in path order, starting from the smaller end"""
    K = C.pattern_graph()
    if C.n == 1:
        return list(C.pattern_vertices)
    ends = sorted(v for v, d in K.degree() if d == 1)
    if len(ends) != 2 or K.number_of_edges() != C.n - 1 or not nx.is_connected(K):
        raise InvalidOperation("pattern graph is not a path")
    order = [ends[0]]
    while len(order) < C.n:
        order.append(next(u for u in K.neighbors(order[-1]) if u not in order))
    return order


def is_star(C: Constellation) -> Optional[int]:
    """Centre of a star pattern graph, or None"""
    K = C.pattern_graph()
    if C.n < 2 or K.number_of_edges() != C.n - 1:
        return None
    for v, d in sorted(K.degree()):
        if d == C.n - 1:
            return v
    return None


def is_clique_pattern(C: Constellation) -> bool:
    return len(C.pattern_edges) == C.n * (C.n - 1) // 2
