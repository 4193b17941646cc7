"""
Binary Matroid Module - Cut-matroids, matroid intersection, k-links and disentangling
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from config import cap_or_default
from errors import CapExceeded, InvalidOperation, PipelineStageError
from gf2 import gf2_rank, insert_basis, mask_of
from graph_core import (
    OperationTrace,
    OrderedGraph,
    Step,
    TracedGraph,
    apply_trace,
    delete_vertex,
    keep_induced,
    lift_lc_trace,
)
from rank_connectivity import kappa, local_connectivity

logger = logging.getLogger(__name__)


class BinaryMatroid:
    """
    Matroid on an ordered ground set with rank X -> rank of A[T, X]

    Responsibilities:
    - Answer rank and independence queries from the stored rows
    - Restrict to a smaller ground set

    Does NOT handle:
    - Matroids not represented by a cut submatrix
    """

    def __init__(self, graph: OrderedGraph, T: Iterable[int], ground: Optional[Iterable[int]] = None):
        self.T = tuple(sorted(set(T)))
        self.t_mask = mask_of(self.T)
        if self.t_mask & ~graph.all_mask:
            raise InvalidOperation("T reaches outside the graph")
        if ground is None:
            ground = [v for v in range(graph.n) if not (self.t_mask >> v) & 1]
        self.ground = tuple(sorted(set(ground)))
        if mask_of(self.ground) & self.t_mask:
            raise InvalidOperation("ground set must avoid T")
        self._rows = {x: graph.rows[x] & self.t_mask for x in self.ground}

    def rank(self, X: Iterable[int]) -> int:
        return gf2_rank(self._rows[x] for x in X)

    def is_independent(self, X: Sequence[int]) -> bool:
        return self.rank(X) == len(X)

    def restrict(self, ground: Iterable[int]) -> "BinaryMatroid":
        sub = object.__new__(BinaryMatroid)
        sub.T, sub.t_mask = self.T, self.t_mask
        sub.ground = tuple(sorted(set(ground)))
        missing = [x for x in sub.ground if x not in self._rows]
        if missing:
            raise InvalidOperation(f"elements {missing} not in the ground set")
        sub._rows = {x: self._rows[x] for x in sub.ground}
        return sub

    def __repr__(self) -> str:
        return f"BinaryMatroid(T={self.T}, ground={self.ground})"


def cut_matroid(G: OrderedGraph, T: Iterable[int]) -> BinaryMatroid:
    """Binary matroid M_T on V - T represented by A[T, V - T]"""
    return BinaryMatroid(G, T)


@dataclass(frozen=True)
class PartitionCertificate:
    """Partition (P, Q) of the ground set with r1(P) + r2(Q) = deficiency"""

    P: Tuple[int, ...]
    Q: Tuple[int, ...]
    deficiency: int

    def verify(self, M1: BinaryMatroid, M2: BinaryMatroid) -> bool:
        covers = sorted(self.P + self.Q) == list(M1.ground)
        return covers and M1.rank(self.P) + M2.rank(self.Q) == self.deficiency


@dataclass(frozen=True)
class IntersectionResult:
    common: Tuple[int, ...]
    certificate: Optional[PartitionCertificate] = None

    @property
    def found(self) -> bool:
        return self.certificate is None


def _exchange_arcs(M1: BinaryMatroid, M2: BinaryMatroid, I: List[int]) -> Dict[int, List[int]]:
    arcs: Dict[int, List[int]] = {x: [] for x in M1.ground}
    in_I = set(I)
    for y in I:
        rest = [z for z in I if z != y]
        for x in M1.ground:
            if x in in_I:
                continue
            if M1.is_independent(rest + [x]):
                arcs[y].append(x)
            if M2.is_independent(rest + [x]):
                arcs[x].append(y)
    return arcs


def matroid_intersection(
    M1: BinaryMatroid, M2: BinaryMatroid, k: Optional[int] = None
) -> IntersectionResult:
    """
    Common independent set of size k, or a partition certificate

    Args:
        M1, M2: matroids on the same ground set
        k: target size (None for a maximum common independent set)

    Returns:
        IntersectionResult: the set, plus a certificate when the target was missed
    """
    if M1.ground != M2.ground:
        raise InvalidOperation("matroid intersection needs identical ground sets")
    target = len(M1.ground) if k is None else k
    I: List[int] = []
    while len(I) < target:
        arcs = _exchange_arcs(M1, M2, I)
        in_I = set(I)
        sources = [x for x in M1.ground if x not in in_I and M1.is_independent(I + [x])]
        sinks = {x for x in M1.ground if x not in in_I and M2.is_independent(I + [x])}
        parent: Dict[int, Optional[int]] = {}
        queue = deque()
        for x in sources:
            parent[x] = None
            queue.append(x)
        end = None
        while queue:
            node = queue.popleft()
            if node in sinks:
                end = node
                break
            for nxt in sorted(arcs[node]):
                if nxt not in parent:
                    parent[nxt] = node
                    queue.append(nxt)
        if end is None:
            return IntersectionResult(tuple(sorted(I)), _certificate(M1, M2, arcs, sinks, len(I)))
        path = []
        while end is not None:
            path.append(end)
            end = parent[end]
        I = sorted(set(I).symmetric_difference(path))
    return IntersectionResult(tuple(sorted(I)))


def _certificate(M1, M2, arcs, sinks, size) -> PartitionCertificate:
    # U = elements that can reach a sink
    reverse: Dict[int, List[int]] = {x: [] for x in M1.ground}
    for a, targets in arcs.items():
        for b in targets:
            reverse[b].append(a)
    U = set(sinks)
    queue = deque(sinks)
    while queue:
        node = queue.popleft()
        for prev in reverse[node]:
            if prev not in U:
                U.add(prev)
                queue.append(prev)
    P = tuple(sorted(U))
    Q = tuple(x for x in M1.ground if x not in U)
    cert = PartitionCertificate(P, Q, M1.rank(P) + M2.rank(Q))
    assert cert.deficiency == size, "intersection certificate is not tight"
    return cert


class LinkMode(str, Enum):
    EQUAL = "equal"
    DISJOINT = "disjoint"


@dataclass(frozen=True)
class KLink:
    X1: Tuple[int, ...]
    X2: Tuple[int, ...]
    mode: LinkMode = LinkMode.EQUAL

    @property
    def k(self) -> int:
        return len(self.X1)


def _same_neighbourhood(G: OrderedGraph, X: Sequence[int], within: int) -> bool:
    return len({G.nbr_mask(x) & within for x in X}) <= 1


def verify_k_link(
    G: OrderedGraph, S: Iterable[int], T: Iterable[int], link: KLink
) -> Tuple[bool, Optional[str]]:
    """
    Check every clause of a k-link

    Returns:
        tuple: (valid, name of the first failing clause or None)
    """
    S, T = sorted(set(S)), sorted(set(T))
    s_mask, t_mask = mask_of(S), mask_of(T)
    X1, X2 = list(link.X1), list(link.X2)
    if len(X1) != len(X2) or len(set(X1)) != len(X1) or len(set(X2)) != len(X2):
        return False, "size"
    if (mask_of(X1) | mask_of(X2)) & (s_mask | t_mask):
        return False, "outside"
    if local_connectivity(G, S, X1) != len(X1):
        return False, "S-independent"
    if local_connectivity(G, T, X2) != len(X2):
        return False, "T-independent"
    if link.mode == LinkMode.EQUAL:
        if sorted(X1) != sorted(X2):
            return False, "equal"
        return True, None
    if set(X1) & set(X2):
        return False, "disjoint"
    if local_connectivity(G, X1, X2) != len(X1):
        return False, "coupled-rank"
    if not _same_neighbourhood(G, X1, t_mask):
        return False, "X1-shared-T-neighbourhood"
    if not _same_neighbourhood(G, X2, s_mask):
        return False, "X2-shared-S-neighbourhood"
    return True, None


@dataclass(frozen=True)
class NotFound:
    """Honest failure of a best-effort procedure, naming the stage"""

    stage: str
    detail: str = ""

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class TwinReduction:
    graph: OrderedGraph
    lc_steps: Tuple[Step, ...]
    removed: Tuple[int, ...]
    label_map: Dict[int, int]
    kappa_log: Tuple[int, ...] = ()


@dataclass(frozen=True)
class DisentangleResult:
    graph: OrderedGraph
    trace: OperationTrace
    link: KLink
    kappa_log: Tuple[int, ...] = field(default_factory=tuple)


def _kappa_in(traced_graph: OrderedGraph, label_map: Dict[int, int], S, T, max_free) -> int:
    return kappa(traced_graph, [label_map[s] for s in S], [label_map[t] for t in T], max_free=max_free)


def twin_reduction(
    G: OrderedGraph,
    S: Iterable[int],
    T: Iterable[int],
    max_free: Optional[int] = None,
) -> TwinReduction:
    """
    Remove outside vertices that share their neighbourhood in S u T with a smaller one

    Each removal keeps kappa(S, T) and the induced subgraph on S u T. The
    local complementations used are returned in original labels; since they
    commute with deleting other vertices they can be replayed on G itself.
    """
    S, T = sorted(set(S)), sorted(set(T))
    st_orig = mask_of(S) | mask_of(T)
    traced = TracedGraph(G)
    removed: List[int] = []
    target = kappa(G, S, T, max_free=max_free)
    log = [target]
    while True:
        current = traced.label_map()
        st_mask = mask_of(current[v] for v in S + T)
        outside = [v for v in range(G.n) if v in current and not (st_orig >> v) & 1]
        pair = None
        seen: Dict[int, int] = {}
        for v in outside:
            key = traced.graph.nbr_mask(current[v]) & st_mask
            if key in seen:
                pair = (seen[key], v)
                break
            seen[key] = v
        if pair is None:
            break
        u, v = pair
        minor, label_map = delete_vertex(traced.graph, current[v])
        if _kappa_in(minor, {x: label_map[current[x]] for x in S + T}, S, T, max_free) == target:
            traced.delete(v)
        elif not traced.adjacent(u, v):
            traced.lc(v)
            traced.delete(v)
            traced.lc(u)
        else:
            traced.lc(u)
            traced.lc(v)
            traced.lc(u)
            traced.delete(v)
        removed.append(v)
        now = _kappa_in(traced.graph, traced.label_map(), S, T, max_free)
        assert now == target, f"twin removal of {v} changed kappa {target} -> {now}"
        log.append(now)
        logger.debug("removed twin %d of %d", v, u)
    return TwinReduction(traced.graph, lift_lc_trace(traced).steps, tuple(removed), traced.label_map(), tuple(log))


def _greedy_independent(G: OrderedGraph, candidates: Sequence[int], against: int, limit=None) -> List[int]:
    basis: List[int] = []
    chosen = []
    for x in candidates:
        if limit is not None and len(chosen) >= limit:
            break
        if insert_basis(basis, G.nbr_mask(x) & against):
            chosen.append(x)
    return chosen


def _classes(G: OrderedGraph, X: Sequence[int], within: int) -> List[List[int]]:
    groups: Dict[int, List[int]] = {}
    for x in X:
        groups.setdefault(G.nbr_mask(x) & within, []).append(x)
    return sorted(groups.values(), key=lambda c: c[0])


def disentangle(
    G: OrderedGraph,
    S: Iterable[int],
    T: Iterable[int],
    k: int,
    max_n: Optional[int] = None,
    max_free: Optional[int] = None,
) -> Union[DisentangleResult, NotFound]:
    """
    Best-effort search for a locally equivalent graph holding a k-link

    Args:
        G: input graph
        S, T: disjoint vertex sets
        k: link size
        max_n: vertex cap

    Returns:
        DisentangleResult on success (LC-only trace, unchanged G[S u T]),
        NotFound naming the stage that failed otherwise
    """
    cap = cap_or_default(max_n, "disentangle_max_n")
    if G.n > cap:
        raise CapExceeded("disentangle vertices", cap, G.n)
    S, T = sorted(set(S)), sorted(set(T))
    if set(S) & set(T):
        raise InvalidOperation("disentangle needs disjoint S and T")
    free = [v for v in range(G.n) if v not in set(S) | set(T)]

    M1 = BinaryMatroid(G, S, free)
    M2 = BinaryMatroid(G, T, free)
    first = matroid_intersection(M1, M2, k)
    if first.found:
        return DisentangleResult(G, OperationTrace(), KLink(first.common, first.common, LinkMode.EQUAL))

    reduced = twin_reduction(G, S, T, max_free=max_free)
    H = reduced.graph
    lmap = reduced.label_map
    back = {c: o for o, c in lmap.items()}
    hS = [lmap[s] for s in S]
    hT = [lmap[t] for t in T]
    h_free = [lmap[v] for v in free if v in lmap]
    tilde = apply_trace(G, OperationTrace(reduced.lc_steps))
    trace = OperationTrace(reduced.lc_steps)

    result = matroid_intersection(BinaryMatroid(H, hS, h_free), BinaryMatroid(H, hT, h_free), k)
    if result.found:
        common = tuple(sorted(back[x] for x in result.common))
        return _checked_result(G, tilde, trace, S, T, KLink(common, common, LinkMode.EQUAL), reduced)

    cert = result.certificate
    s_mask, t_mask = mask_of(hS), mask_of(hT)
    p_classes = _classes(H, cert.P, s_mask)
    q_classes = _classes(H, cert.Q, t_mask)
    assert len(p_classes) <= 2 ** local_connectivity(H, hS, cert.P) if cert.P else True
    assert len(q_classes) <= 2 ** local_connectivity(H, hT, cert.Q) if cert.Q else True

    best, best_pair = 0, None
    for Qi in q_classes:
        for Pj in p_classes:
            value = local_connectivity(H, Qi, Pj)
            if value > best:
                best, best_pair = value, (Qi, Pj)
    if best_pair is None:
        return NotFound("pigeonhole", "no pair of neighbourhood classes is connected")
    Qi, Pj = best_pair
    Y1 = _greedy_independent(H, Qi, mask_of(Pj))
    Y2 = _greedy_independent(H, Pj, mask_of(Y1))

    Y1s = _greedy_independent(H, Y1, s_mask)
    Y2s = _greedy_independent(H, Y2, mask_of(Y1s), limit=len(Y1s))
    X2 = _greedy_independent(H, Y2s, t_mask, limit=k)
    X1 = _greedy_independent(H, Y1s, mask_of(X2), limit=len(X2))
    if len(X2) < k or len(X1) < k:
        return NotFound("refinement", f"only {min(len(X1), len(X2))} of {k} link vertices survive")
    link = KLink(tuple(sorted(back[x] for x in X1)), tuple(sorted(back[x] for x in X2)), LinkMode.DISJOINT)
    return _checked_result(G, tilde, trace, S, T, link, reduced)


def _checked_result(G, tilde, trace, S, T, link, reduced) -> DisentangleResult:
    keep = sorted(set(S) | set(T))
    if keep_induced(tilde, keep)[0] != keep_induced(G, keep)[0]:
        raise PipelineStageError("disentangle", "induced subgraph on S u T changed")
    ok, clause = verify_k_link(tilde, S, T, link)
    if not ok:
        raise PipelineStageError("disentangle", f"link fails clause {clause}")
    return DisentangleResult(tilde, trace, link, reduced.kappa_log)



__all__ = [
    "BinaryMatroid",
    "cut_matroid",
    "PartitionCertificate",
    "IntersectionResult",
    "matroid_intersection",
    "LinkMode",
    "KLink",
    "verify_k_link",
    "NotFound",
    "TwinReduction",
    "DisentangleResult",
    "twin_reduction",
    "disentangle",
]
