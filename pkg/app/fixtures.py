"""
Fixtures Module - Seeded generators for graphs, diagrams, constellations and augmentations

Every generator is deterministic for a fixed seed. Constellation fixtures
contain exactly the constellation (and link sets) unless noted otherwise.
"""

import logging
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from bounds import BoundTable
from circle import ChordDiagram
from constellation import (
    PATTERN_EDGE_KINDS,
    Augmentation,
    Constellation,
    CouplingKind,
    row_pattern,
)
from errors import InvalidOperation
from graph_core import OrderedGraph

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


class GraphBuilder:
    """Incremental edge list on vertices numbered in creation order"""

    def __init__(self):
        self._n = 0
        self._edges = set()

    @property
    def n(self) -> int:
        return self._n

    def add(self, count: int = 1) -> List[int]:
        start = self._n
        self._n += count
        return list(range(start, self._n))

    def edge(self, u: int, v: int):
        if u == v:
            raise InvalidOperation(f"self-loop at {u}")
        self._edges.add((min(u, v), max(u, v)))

    def join(self, X: Sequence[int], Y: Sequence[int]):
        for x in X:
            for y in Y:
                self.edge(x, y)

    def clique(self, X: Sequence[int]):
        for u, v in combinations(X, 2):
            self.edge(u, v)

    def couple(self, X: Sequence[int], Y: Sequence[int], kind: CouplingKind):
        """Add the edges of the given pattern with X as rows (both read in increasing order)"""
        X, Y = sorted(X), sorted(Y)
        if len(X) != len(Y):
            raise InvalidOperation("coupling needs equal sizes")
        k = len(X)
        for i, x in enumerate(X):
            row = row_pattern(CouplingKind(kind), i, k)
            for j, y in enumerate(Y):
                if (row >> j) & 1:
                    self.edge(x, y)

    def build(self) -> OrderedGraph:
        return OrderedGraph.from_edges(self._n, sorted(self._edges))


# random objects


def random_graph(n: int, p: float = 0.5, seed: Optional[int] = None) -> OrderedGraph:
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return OrderedGraph.from_matrix((upper | upper.T).astype(np.uint8))


def random_permutation(n: int, seed: Optional[int] = None) -> List[int]:
    rng = np.random.default_rng(seed)
    return [int(v) + 1 for v in rng.permutation(n)]


def random_diagram(n: int, seed: Optional[int] = None) -> ChordDiagram:
    """Uniform random word with chords 1..n, each appearing twice"""
    rng = np.random.default_rng(seed)
    word = [str(c) for c in range(1, n + 1) for _ in range(2)]
    order = rng.permutation(len(word))
    return ChordDiagram([word[i] for i in order])


# constellations


def _layout(builder: GraphBuilder, hubs: int, k: int) -> Tuple[List[int], Dict[int, List[int]]]:
    H = builder.add(hubs)
    leaves = {}
    for h in H:
        leaves[h] = builder.add(k)
        builder.join([h], leaves[h])
    return H, leaves


def constellation_fixture(
    n: int,
    k: int,
    couplings: Dict[Pair, CouplingKind],
    m: int = 0,
) -> Tuple[OrderedGraph, Constellation]:
    """
    (n, m, k)-constellation on hubs 0..n+m-1 (pattern hubs first)

    couplings maps an ordered hub pair (a, b) to the kind of (W_a, W_b) with
    W_a read as rows; the pattern graph is the set of coupled pairs.
    """
    builder = GraphBuilder()
    H, leaves = _layout(builder, n + m, k)
    for (a, b), kind in couplings.items():
        if a >= n or b >= n:
            raise InvalidOperation("only pattern hubs may be coupled")
        builder.couple(leaves[a], leaves[b], kind)
    C = Constellation.build(leaves, H[:n], list(couplings))
    return builder.build(), C


def star_fixture(target_n: int, kinds: Optional[Sequence[CouplingKind]] = None) -> Tuple[OrderedGraph, Constellation]:
    """Star on C(n, 2) + 1 hubs with n + 2 leaves each; hub 0 is the centre, spoke kinds read (W_v, W_centre)"""
    spokes = comb(target_n, 2)
    kinds = list(kinds) if kinds is not None else [CouplingKind.COUPLED_MATCHING] * spokes
    if len(kinds) != spokes:
        raise InvalidOperation(f"a star for {target_n} vertices has {spokes} spokes")
    couplings = {(v, 0): kind for v, kind in zip(range(1, spokes + 1), kinds)}
    return constellation_fixture(spokes + 1, target_n + 2, couplings)


def matching_fixture(n: int, shape: str = "path", k: Optional[int] = None) -> Tuple[OrderedGraph, Constellation]:
    """Path or clique pattern whose pairs are all coupled matchings, with C(n, 2) leaves by default"""
    k = max(comb(n, 2), 1) if k is None else k
    if shape == "path":
        pairs = [(i, i + 1) for i in range(n - 1)]
    elif shape == "clique":
        pairs = list(combinations(range(n), 2))
    else:
        raise InvalidOperation(f"unknown matching shape '{shape}'")
    return constellation_fixture(n, k, {p: CouplingKind.COUPLED_MATCHING for p in pairs})


def clique_fixture(hubs: int, k: int, kind: CouplingKind = CouplingKind.UP_HALF) -> Tuple[OrderedGraph, Constellation]:
    return constellation_fixture(hubs, k, {p: kind for p in combinations(range(hubs), 2)})


def path_fixture(kinds: Sequence[CouplingKind], k: int) -> Tuple[OrderedGraph, Constellation]:
    """Path on len(kinds) + 1 hubs, pair i coupled as kinds[i]"""
    return constellation_fixture(len(kinds) + 1, k, {(i, i + 1): kind for i, kind in enumerate(kinds)})


def shape_fixture(shape: str, n: int, seed: Optional[int] = None, k: Optional[int] = None) -> Tuple[OrderedGraph, Constellation]:
    """
    Random-kind constellation of a named shape, sized for its extraction

    star: target size n; matching: path of n hubs; clique: n hubs, one kind;
    path: n hubs with the path pipeline's leaf count.
    """
    rng = np.random.default_rng(seed)
    edge_kinds = sorted(PATTERN_EDGE_KINDS, key=lambda kind: kind.value)
    half_kinds = [kind for kind in edge_kinds if kind != CouplingKind.COUPLED_MATCHING]

    def pick(options):
        return options[int(rng.integers(len(options)))]

    if shape == "star":
        return star_fixture(n, [pick(edge_kinds) for _ in range(comb(n, 2))])
    if shape == "matching":
        return matching_fixture(n, "path", k)
    if shape == "clique":
        return clique_fixture(n, k or max(n, 1), pick(edge_kinds))
    if shape == "path":
        need = BoundTable().path_pipeline_k(n)
        return path_fixture([pick(half_kinds) for _ in range(n - 1)], k or need)
    raise InvalidOperation(f"unknown constellation shape '{shape}'")


# growth-step fixtures (t = 4)


def case_one_fixture() -> Tuple[OrderedGraph, Augmentation]:
    """(2, 1, 4)-augmentation with y complete to the equal link sets"""
    b = GraphBuilder()
    h1, h2, y = b.add(3)
    a, w2, c = b.add(4), b.add(4), b.add(4)
    Z = b.add(4)
    for hub, W in ((h1, a), (h2, w2), (y, c)):
        b.join([hub], W)
    b.couple(a, w2, CouplingKind.UP_HALF)
    b.couple(a, Z, CouplingKind.COUPLED_MATCHING)
    b.couple(c, Z, CouplingKind.COUPLED_MATCHING)
    b.join([y], Z)
    C = Constellation.build({h1: a, h2: w2, y: c}, [h1, h2], [(h1, h2)])
    return b.build(), Augmentation(C, h1, y, tuple(Z), tuple(Z))


def case_two_fixture() -> Tuple[OrderedGraph, Augmentation]:
    """(1, 1, 4)-augmentation with disjoint matched link sets, y complete to X2"""
    b = GraphBuilder()
    h1, y = b.add(2)
    a, c = b.add(4), b.add(4)
    P, Q = b.add(4), b.add(4)
    b.join([h1], a)
    b.join([y], c)
    b.couple(a, P, CouplingKind.COUPLED_MATCHING)
    b.couple(c, Q, CouplingKind.COUPLED_MATCHING)
    b.couple(P, Q, CouplingKind.COUPLED_MATCHING)
    b.join([y], Q)
    C = Constellation.build({h1: a, y: c}, [h1])
    return b.build(), Augmentation(C, h1, y, tuple(P), tuple(Q))


def degree_fixture() -> Tuple[OrderedGraph, Augmentation]:
    """(1, 1, 4)-augmentation in which y and its leaves all have low degree into the link"""
    b = GraphBuilder()
    h1, y = b.add(2)
    a, c = b.add(4), b.add(4)
    Z = b.add(4)
    b.join([h1], a)
    b.join([y], c)
    b.couple(a, Z, CouplingKind.COUPLED_MATCHING)
    b.couple(c, Z, CouplingKind.COUPLED_MATCHING)
    C = Constellation.build({h1: a, y: c}, [h1])
    return b.build(), Augmentation(C, h1, y, tuple(Z), tuple(Z))


def weak_fixture() -> Tuple[OrderedGraph, Augmentation]:
    """Degree fixture plus an edge from the pattern hub to the last link vertex (weak only)"""
    G, aug = degree_fixture()
    edges = G.edges() + [(aug.x, aug.X1[-1])]
    return OrderedGraph.from_edges(G.n, edges), aug.as_weak()


# comparability grids


def pure_grid_fixture(n: int) -> Tuple[OrderedGraph, List[List[int]]]:
    """n cliques of size n, pairwise up-coupled half graphs"""
    b = GraphBuilder()
    parts = [b.add(n) for _ in range(n)]
    for X in parts:
        b.clique(X)
    for X, Y in combinations(parts, 2):
        b.couple(X, Y, CouplingKind.UP_HALF)
    return b.build(), parts


def mixed_grid_fixture(n: int, co_down: Sequence[Pair] = ()) -> Tuple[OrderedGraph, List[List[int]]]:
    """n^2 cocliques of size n^2, pairwise up-coupled except the listed pairs (complements of down-coupled)"""
    b = GraphBuilder()
    parts = [b.add(n * n) for _ in range(n * n)]
    flipped = {tuple(sorted(p)) for p in co_down}
    for i, j in combinations(range(n * n), 2):
        kind = CouplingKind.CO_DOWN_HALF if (i, j) in flipped else CouplingKind.UP_HALF
        b.couple(parts[i], parts[j], kind)
    return b.build(), parts


# fixing pairs


def fix_pairs_fixture(
    n: int, path_length: int = 1, z_edges: Sequence[Pair] = ()
) -> Tuple[OrderedGraph, List[int], Dict[Pair, List[int]]]:
    """
    Z = 0..n-1 with one private path per pair (i, j) joining z_i to z_j

    Returns:
        tuple: (graph, Z, components)
    """
    if path_length < 1:
        raise InvalidOperation("component paths need at least one vertex")
    b = GraphBuilder()
    Z = b.add(n)
    for i, j in z_edges:
        b.edge(Z[i], Z[j])
    components: Dict[Pair, List[int]] = {}
    for i, j in combinations(range(n), 2):
        path = b.add(path_length)
        for u, v in zip(path, path[1:]):
            b.edge(u, v)
        b.edge(Z[i], path[0])
        b.edge(path[-1], Z[j])
        components[(i, j)] = path
    return b.build(), Z, components


def all_graphs(n: int) -> List[OrderedGraph]:
    """Every labelled graph on n vertices"""
    pairs = list(combinations(range(n), 2))
    out = []
    for bits in range(1 << len(pairs)):
        out.append(OrderedGraph.from_edges(n, [p for idx, p in enumerate(pairs) if (bits >> idx) & 1]))
    return out


__all__ = [
    "GraphBuilder",
    "random_graph",
    "random_permutation",
    "random_diagram",
    "constellation_fixture",
    "star_fixture",
    "matching_fixture",
    "clique_fixture",
    "path_fixture",
    "shape_fixture",
    "case_one_fixture",
    "case_two_fixture",
    "degree_fixture",
    "weak_fixture",
    "pure_grid_fixture",
    "mixed_grid_fixture",
    "fix_pairs_fixture",
    "all_graphs",
]
