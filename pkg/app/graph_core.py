"""
Graph Core Module - Ordered graphs over GF(2), elementary operations and trace replay
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import GraphMatcher

from config import cap_or_default, get_settings
from errors import CapExceeded, InvalidOperation, TraceReplayError
from gf2 import bits_of, mask_of, popcount

logger = logging.getLogger(__name__)


class OrderedGraph:
    """
    Simple graph on vertices 0..n-1 with the natural vertex order

    Rows of the adjacency matrix are stored as Python int bitsets,
    row v having bit u set iff uv is an edge. Instances are immutable.
    """

    __slots__ = ("_n", "_rows")

    def __init__(self, n: int, rows: Sequence[int], validate: bool = True):
        if n < 0 or len(rows) != n:
            raise InvalidOperation(f"expected {n} rows, got {len(rows)}")
        rows = tuple(int(r) for r in rows)
        if validate:
            full = (1 << n) - 1
            for v, row in enumerate(rows):
                if row & ~full:
                    raise InvalidOperation(f"row {v} references a vertex outside 0..{n - 1}")
                if (row >> v) & 1:
                    raise InvalidOperation(f"loop at vertex {v}")
                for u in bits_of(row):
                    if not (rows[u] >> v) & 1:
                        raise InvalidOperation(f"adjacency not symmetric at ({v}, {u})")
        self._n = n
        self._rows = rows

    # construction helpers

    @classmethod
    def empty(cls, n: int) -> "OrderedGraph":
        return cls(n, [0] * n, validate=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "OrderedGraph":
        rows = [0] * n
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise InvalidOperation(f"bad edge ({u}, {v}) for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows, validate=False)

    @classmethod
    def complete(cls, n: int) -> "OrderedGraph":
        return cls.from_edges(n, combinations(range(n), 2))

    @classmethod
    def path(cls, n: int) -> "OrderedGraph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> "OrderedGraph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def from_matrix(cls, matrix) -> "OrderedGraph":
        arr = np.asarray(matrix, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidOperation("adjacency matrix must be square")
        rows = [mask_of(np.flatnonzero(arr[i]).tolist()) for i in range(arr.shape[0])]
        return cls(arr.shape[0], rows)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "OrderedGraph":
        nodes = sorted(graph.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), [(index[u], index[v]) for u, v in graph.edges()])

    # queries

    @property
    def n(self) -> int:
        return self._n

    @property
    def rows(self) -> Tuple[int, ...]:
        return self._rows

    @property
    def all_mask(self) -> int:
        return (1 << self._n) - 1

    def check_vertex(self, v: int):
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self._n:
            raise InvalidOperation(f"vertex {v} out of range 0..{self._n - 1}")

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._rows[u] >> v) & 1)

    def nbr_mask(self, v: int) -> int:
        return self._rows[v]

    def neighbours(self, v: int) -> List[int]:
        return bits_of(self._rows[v])

    def degree(self, v: int) -> int:
        return popcount(self._rows[v])

    def degree_sequence(self) -> List[int]:
        return sorted(self.degree(v) for v in range(self._n))

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self._n) for v in bits_of(self._rows[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(popcount(r) for r in self._rows) // 2

    def is_clique(self, mask: int) -> bool:
        return all((self._rows[v] | (1 << v)) & mask == mask for v in bits_of(mask))

    def is_coclique(self, mask: int) -> bool:
        return all(self._rows[v] & mask == 0 for v in bits_of(mask))

    def adjacency_bits(self) -> str:
        """Upper-triangle adjacency string, row by row"""
        return "".join(
            "1" if self.has_edge(u, v) else "0"
            for u in range(self._n)
            for v in range(u + 1, self._n)
        )

    def to_matrix(self) -> np.ndarray:
        arr = np.zeros((self._n, self._n), dtype=np.uint8)
        for u, v in self.edges():
            arr[u, v] = arr[v, u] = 1
        return arr

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self._n))
        graph.add_edges_from(self.edges())
        return graph

    def __eq__(self, other) -> bool:
        return isinstance(other, OrderedGraph) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"OrderedGraph(n={self._n}, edges={self.edges()})"


class StepKind(str, Enum):
    LC = "LC"
    PIV = "PIV"
    DEL = "DEL"
    KEEP = "KEEP"


@dataclass(frozen=True)
class Step:
    """One trace step, naming vertices by their labels at application time"""

    kind: StepKind
    vertices: Tuple[int, ...]

    @classmethod
    def lc(cls, v: int) -> "Step":
        return cls(StepKind.LC, (int(v),))

    @classmethod
    def pivot(cls, u: int, v: int) -> "Step":
        return cls(StepKind.PIV, (int(u), int(v)))

    @classmethod
    def delete(cls, v: int) -> "Step":
        return cls(StepKind.DEL, (int(v),))

    @classmethod
    def keep(cls, vertices: Iterable[int]) -> "Step":
        return cls(StepKind.KEEP, tuple(sorted(int(v) for v in vertices)))

    def __str__(self) -> str:
        return " ".join([self.kind.value] + [str(v) for v in self.vertices])


@dataclass(frozen=True)
class OperationTrace:
    """Replayable sequence of steps"""

    steps: Tuple[Step, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    def then(self, other: "OperationTrace") -> "OperationTrace":
        return OperationTrace(self.steps + other.steps)

    def count(self, kind: StepKind) -> int:
        return sum(1 for s in self.steps if s.kind == kind)

    def kinds(self) -> set:
        return {s.kind for s in self.steps}


# elementary operations


def local_complement(G: OrderedGraph, v: int) -> OrderedGraph:
    """
    Local complementation G*v

    Args:
        G: input graph
        v: vertex whose neighbourhood is complemented

    Returns:
        OrderedGraph: G with every pair inside N(v) toggled
    """
    G.check_vertex(v)
    nbr = G.nbr_mask(v)
    if not nbr:
        return G
    rows = list(G.rows)
    for x in bits_of(nbr):
        rows[x] ^= nbr & ~(1 << x)
    return OrderedGraph(G.n, rows, validate=False)


def pivot_closed_form(G: OrderedGraph, u: int, v: int) -> OrderedGraph:
    """Pivot via the three-part cross toggle followed by swapping labels u and v"""
    G.check_vertex(u)
    G.check_vertex(v)
    if not G.has_edge(u, v):
        raise InvalidOperation(f"pivot on non-edge ({u}, {v})")
    nu = G.nbr_mask(u) & ~(1 << v)
    nv = G.nbr_mask(v) & ~(1 << u)
    both = nu & nv
    only_u = nu & ~nv
    only_v = nv & ~nu
    parts = [(both, only_u), (both, only_v), (only_u, only_v)]
    rows = list(G.rows)
    for left, right in parts:
        for x in bits_of(left):
            rows[x] ^= right
        for y in bits_of(right):
            rows[y] ^= left
    # swap labels u and v
    perm = list(range(G.n))
    perm[u], perm[v] = v, u
    swapped = [0] * G.n
    for x in range(G.n):
        swapped[perm[x]] = mask_of(perm[y] for y in bits_of(rows[x]))
    return OrderedGraph(G.n, swapped, validate=False)


def pivot(G: OrderedGraph, u: int, v: int, check: Optional[bool] = None) -> OrderedGraph:
    """
    Pivot G x uv = G*u*v*u

    Args:
        G: input graph
        u, v: endpoints of an edge
        check: compare against the closed form (defaults to the debug switch)

    Returns:
        OrderedGraph: the pivoted graph
    """
    G.check_vertex(u)
    G.check_vertex(v)
    if not G.has_edge(u, v):
        raise InvalidOperation(f"pivot on non-edge ({u}, {v})")
    result = local_complement(local_complement(local_complement(G, u), v), u)
    if check if check is not None else get_settings().debug_checks:
        assert result == pivot_closed_form(G, u, v), "pivot disagrees with closed form"
    return result


def keep_induced(G: OrderedGraph, X: Iterable[int]) -> Tuple[OrderedGraph, Dict[int, int]]:
    """
    Induced subgraph on X, relabelled densely in the inherited order

    Returns:
        tuple: (subgraph, label map old -> new)
    """
    keep = sorted(set(int(x) for x in X))
    for x in keep:
        G.check_vertex(x)
    label_map = {old: new for new, old in enumerate(keep)}
    rows = []
    for old in keep:
        rows.append(mask_of(label_map[y] for y in bits_of(G.nbr_mask(old)) if y in label_map))
    return OrderedGraph(len(keep), rows, validate=False), label_map


def delete_vertex(G: OrderedGraph, v: int) -> Tuple[OrderedGraph, Dict[int, int]]:
    G.check_vertex(v)
    return keep_induced(G, (x for x in range(G.n) if x != v))


def is_isomorphic(
    G: OrderedGraph, H: OrderedGraph, max_n: Optional[int] = None
) -> Tuple[bool, Optional[Dict[int, int]]]:
    """
    Unordered isomorphism test with a witness

    Args:
        G, H: graphs to compare
        max_n: refuse above this many vertices

    Returns:
        tuple: (is_isomorphic, mapping G-vertex -> H-vertex or None)
    """
    cap = cap_or_default(max_n, "iso_max_n")
    if G.n != H.n or G.edge_count() != H.edge_count():
        return False, None
    if G.degree_sequence() != H.degree_sequence():
        return False, None
    if G == H:
        return True, {v: v for v in range(G.n)}
    if G.n > cap:
        raise CapExceeded("isomorphism vertices", cap, G.n)
    matcher = GraphMatcher(G.to_networkx(), H.to_networkx())
    if matcher.is_isomorphic():
        return True, dict(matcher.mapping)
    return False, None


def apply_step(G: OrderedGraph, step: Step) -> Tuple[OrderedGraph, Optional[Dict[int, int]]]:
    """Apply one step; the second value is the label map when the step relabels"""
    if step.kind == StepKind.LC:
        return local_complement(G, step.vertices[0]), None
    if step.kind == StepKind.PIV:
        return pivot(G, step.vertices[0], step.vertices[1]), None
    if step.kind == StepKind.DEL:
        return delete_vertex(G, step.vertices[0])
    return keep_induced(G, step.vertices)


def replay(G: OrderedGraph, trace: OperationTrace) -> Tuple[OrderedGraph, Dict[int, int]]:
    """
    Replay a trace and track where the original vertices end up

    Returns:
        tuple: (result graph, map original label -> final label for survivors)
    """
    where = {v: v for v in range(G.n)}
    for index, step in enumerate(trace):
        try:
            G, label_map = apply_step(G, step)
        except InvalidOperation as e:
            raise TraceReplayError(index, str(e)) from e
        if label_map is not None:
            where = {orig: label_map[cur] for orig, cur in where.items() if cur in label_map}
    return G, where


def apply_trace(G: OrderedGraph, trace: OperationTrace) -> OrderedGraph:
    """Deterministic replay of trace on G"""
    return replay(G, trace)[0]


class TracedGraph:
    """
    Mutable builder that applies operations by original vertex labels

    Responsibilities:
    - Keep the current graph and the original -> current label map
    - Record every applied step in current labels

    Does NOT handle:
    - Deciding which operations to apply
    """

    def __init__(self, graph: OrderedGraph):
        self.graph = graph
        self.steps: List[Step] = []
        self.lifted: List[Step] = []
        self._current = {v: v for v in range(graph.n)}

    @property
    def trace(self) -> OperationTrace:
        return OperationTrace(tuple(self.steps))

    def alive(self, v: int) -> bool:
        return v in self._current

    def cur(self, v: int) -> int:
        try:
            return self._current[v]
        except KeyError:
            raise InvalidOperation(f"vertex {v} was removed") from None

    def orig(self, current: int) -> int:
        for o, c in self._current.items():
            if c == current:
                return o
        raise InvalidOperation(f"no original vertex at label {current}")

    def label_map(self) -> Dict[int, int]:
        return dict(self._current)

    def adjacent(self, u: int, v: int) -> bool:
        return self.graph.has_edge(self.cur(u), self.cur(v))

    def neighbours(self, v: int) -> List[int]:
        inverse = {c: o for o, c in self._current.items()}
        return sorted(inverse[c] for c in self.graph.neighbours(self.cur(v)))

    def lc(self, v: int):
        c = self.cur(v)
        self.graph = local_complement(self.graph, c)
        self.steps.append(Step.lc(c))
        self.lifted.append(Step.lc(v))

    def pivot(self, u: int, v: int):
        cu, cv = self.cur(u), self.cur(v)
        self.graph = pivot(self.graph, cu, cv)
        self.steps.append(Step.pivot(cu, cv))
        self.lifted.append(Step.pivot(u, v))

    def keep(self, originals: Iterable[int]):
        current = [self.cur(v) for v in originals]
        self.graph, label_map = keep_induced(self.graph, current)
        self.steps.append(Step.keep(current))
        self._relabel(label_map)

    def delete(self, v: int):
        c = self.cur(v)
        self.graph, label_map = delete_vertex(self.graph, c)
        self.steps.append(Step.delete(c))
        self._relabel(label_map)

    def induced_on(self, originals: Sequence[int]) -> OrderedGraph:
        """Graph on the given originals, numbered by their position in the sequence"""
        current = [self.cur(v) for v in originals]
        return OrderedGraph.from_edges(
            len(current),
            [(i, j) for i, j in combinations(range(len(current)), 2)
             if self.graph.has_edge(current[i], current[j])],
        )

    def _relabel(self, label_map: Dict[int, int]):
        self._current = {o: label_map[c] for o, c in self._current.items() if c in label_map}


def induced_on_sequence(G: OrderedGraph, sequence: Sequence[int]) -> OrderedGraph:
    """Graph on sequence[i], numbered by position i"""
    return OrderedGraph.from_edges(
        len(sequence),
        [(i, j) for i, j in combinations(range(len(sequence)), 2)
         if G.has_edge(sequence[i], sequence[j])],
    )


def lift_lc_trace(traced: TracedGraph) -> OperationTrace:
    """
    LC and pivot steps of a traced run, named by start-graph labels

    Local complementation at v commutes with deleting any other vertex, so
    the returned trace replays on the start graph and agrees with the traced
    graph on every surviving vertex.
    """
    return OperationTrace(tuple(traced.lifted))
