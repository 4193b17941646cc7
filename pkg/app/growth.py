"""
Growth Module - Augmentation search, refinement and the pivot growth step
"""

import logging
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from binary_matroid import LinkMode, NotFound, disentangle
from config import cap_or_default
from constellation import (
    PATTERN_EDGE_KINDS,
    Augmentation,
    Constellation,
    CouplingKind,
    classify_coupling,
    coupling_kinds,
    is_anticomplete,
    is_complete,
    is_coupled,
    is_homogeneous,
    phi,
    restrict,
    validate_augmentation,
    validate_constellation,
)
from errors import CapExceeded, PipelineStageError, PreconditionError
from gf2 import mask_of
from graph_core import OperationTrace, OrderedGraph, TracedGraph

logger = logging.getLogger(__name__)


class GrowthCase:
    CASE_1 = "case-1"
    CASE_2 = "case-2"
    DEGREE = "degree"


@dataclass(frozen=True)
class GrowthResult:
    """
    Output of one growth step

    graph is the host after the step (same vertex labels as the input),
    result a constellation (case 1) or an augmentation (case 2 and the
    degree fix) valid in it.
    """

    graph: OrderedGraph
    result: Union[Constellation, Augmentation]
    trace: OperationTrace
    case: str
    vertex: Optional[int] = None

    @property
    def params(self) -> Tuple[int, int, int]:
        C = self.result.constellation if isinstance(self.result, Augmentation) else self.result
        return C.n, C.m, C.k


def _require_augmentation(G: OrderedGraph, aug: Augmentation):
    violations = validate_augmentation(G, aug)
    if violations:
        raise PreconditionError("augmentation", str(violations[0]))


def _count_in(G: OrderedGraph, v: int, Z: Sequence[int]) -> int:
    return sum(1 for z in Z if G.has_edge(v, z))


def _pick_vertex(G: OrderedGraph, aug: Augmentation, v: Optional[int]) -> Tuple[Optional[int], str]:
    C = aug.constellation
    t = C.k
    candidates = (aug.y,) + C.leaves[aug.y]
    if v is not None:
        if v not in candidates:
            raise PreconditionError("designated-vertex", f"{v} is neither y nor one of its leaves")
        if _count_in(G, v, aug.X1) >= t - 1:
            return v, GrowthCase.CASE_1
        if _count_in(G, v, aug.X2) >= t - 1:
            return v, GrowthCase.CASE_2
        raise PreconditionError("designated-vertex", f"{v} has fewer than {t - 1} neighbours in X1 and X2")
    for u in candidates:
        if _count_in(G, u, aug.X1) >= t - 1:
            return u, GrowthCase.CASE_1
    for u in candidates:
        if _count_in(G, u, aug.X2) >= t - 1:
            return u, GrowthCase.CASE_2
    return None, GrowthCase.DEGREE


def _pivot_into(traced: TracedGraph, v: int, Z: Sequence[int], size: int) -> Tuple[int, Tuple[int, ...]]:
    """LC at v if its neighbours in Z form a clique, then pivot on v and its first neighbour there"""
    nbrs = [z for z in Z if traced.adjacent(v, z)]
    if len(nbrs) > 1 and not traced.graph.is_coclique(mask_of(nbrs)):
        traced.lc(v)
        nbrs = [z for z in Z if traced.adjacent(v, z)]
        if not traced.graph.is_coclique(mask_of(nbrs)):
            raise PreconditionError("clique-or-coclique", "neighbours of v in the link set are mixed")
    w = nbrs[0]
    traced.pivot(v, w)
    return w, tuple(nbrs[1: size + 1])


def _case_one(G: OrderedGraph, aug: Augmentation, v: int) -> GrowthResult:
    C = aug.constellation
    size = C.k - 2
    traced = TracedGraph(G)
    w, new_leaves = _pivot_into(traced, v, aug.X1, size)
    H = traced.graph
    leaves: Dict[int, Tuple[int, ...]] = {w: new_leaves}
    for x in C.hubs:
        if x != aug.y:
            leaves[x] = phi(aug.X1, C.leaves[x], new_leaves)
    edges = list(C.pattern_edges)
    for x in C.pattern_vertices:
        if coupling_kinds(H, leaves[w], leaves[x]) & PATTERN_EDGE_KINDS:
            edges.append((w, x))
    grown = Constellation.build(leaves, list(C.pattern_vertices) + [w], edges)
    violations = validate_constellation(H, grown)
    if violations:
        raise PipelineStageError(GrowthCase.CASE_1, str(violations[0]))
    logger.info("case 1 on %d: hub %d joins the pattern, params %s", v, w, (grown.n, grown.m, grown.k))
    return GrowthResult(H, grown, traced.trace, GrowthCase.CASE_1, v)


def _case_two(G: OrderedGraph, aug: Augmentation, v: int) -> GrowthResult:
    C = aug.constellation
    size = C.k - 2
    traced = TracedGraph(G)
    w, new_leaves = _pivot_into(traced, v, aug.X2, size)
    H = traced.graph
    leaves: Dict[int, Tuple[int, ...]] = {w: new_leaves}
    for x in C.hubs:
        if x != aug.y:
            leaves[x] = phi(aug.X2, C.leaves[x], new_leaves)
    link = phi(aug.X2, aug.X1, new_leaves)
    grown = Augmentation(
        Constellation.build(leaves, C.pattern_vertices, C.pattern_edges),
        aug.x,
        w,
        link,
        link,
    )
    violations = validate_augmentation(H, grown)
    if violations:
        raise PipelineStageError(GrowthCase.CASE_2, str(violations[0]))
    logger.info("case 2 on %d: hub %d replaces %d, params %s", v, w, aug.y, grown.params)
    return GrowthResult(H, grown, traced.trace, GrowthCase.CASE_2, v)


def _degree_fix(G: OrderedGraph, aug: Augmentation) -> GrowthResult:
    C = aug.constellation
    y, W = aug.y, C.leaves[aug.y]
    if not is_anticomplete(G, [y], set(aug.X1) | set(aug.X2)):
        raise PreconditionError("low-degree", "y already sees the link sets")
    if classify_coupling(G, W, aug.X2) != CouplingKind.COUPLED_MATCHING:
        raise PreconditionError("low-degree", "leaves of y and X2 are not a coupled matching")
    if not aug.equal and not is_anticomplete(G, W, aug.X1):
        raise PreconditionError("low-degree", "leaves of y see X1")
    traced = TracedGraph(G)
    for w in W:
        traced.lc(w)
    H = traced.graph
    if not is_complete(H, [y], aug.X2):
        raise PipelineStageError(GrowthCase.DEGREE, "y is not complete to X2")
    violations = validate_augmentation(H, aug)
    if violations:
        raise PipelineStageError(GrowthCase.DEGREE, str(violations[0]))
    logger.info("degree fix: LC on the %d leaves of %d", len(W), y)
    return GrowthResult(H, aug, traced.trace, GrowthCase.DEGREE)


def grow_step(G: OrderedGraph, aug: Augmentation, v: Optional[int] = None) -> GrowthResult:
    """
    One pivot growth step on an (n, m, t)-augmentation

    Case 1: a vertex v among y and its leaves has t-1 neighbours in X1; after
    pivoting on v and its first neighbour w there, w becomes a new pattern
    hub and the result is an (n+1, m-1, t-2)-constellation.
    Case 2: such a v only has t-1 neighbours in X2; the same pivot makes w
    the outside hub of an (n, m, t-2)-augmentation with equal link sets.
    Otherwise every leaf of y has degree two in the augmentation, and LC on
    each of them makes y complete to X2.

    Args:
        G: host graph
        aug: validated augmentation (x a pattern hub, y an outside hub)
        v: designated vertex (default: first qualifying among y, then its leaves)

    Returns:
        GrowthResult with a validated constellation or augmentation
    """
    if aug.weak:
        raise PreconditionError("augmentation", "growth needs a full augmentation")
    _require_augmentation(G, aug)
    if aug.constellation.k < 3:
        raise PreconditionError("leaf-size", "growth needs at least three leaves per hub")
    vertex, case = _pick_vertex(G, aug, v)
    if case == GrowthCase.CASE_1:
        return _case_one(G, aug, vertex)
    if case == GrowthCase.CASE_2:
        return _case_two(G, aug, vertex)
    return _degree_fix(G, aug)


# augmentation search


@dataclass(frozen=True)
class AugmentationSearch:
    graph: OrderedGraph
    trace: OperationTrace
    augmentation: Augmentation


def _ordered_hubs(aug: Augmentation) -> List[int]:
    return sorted(set(aug.constellation.pattern_vertices) | {aug.y})


def _homogeneous_choice(G: OrderedGraph, W: Sequence[int], sets: Sequence[Sequence[int]], k0: int) -> Optional[Tuple[int, ...]]:
    """k0 vertices of W, each complete or anticomplete to every set, all with the same pattern"""
    classes: Dict[Tuple[bool, ...], List[int]] = {}
    for w in W:
        pattern = []
        for X in sets:
            if is_complete(G, [w], X):
                pattern.append(True)
            elif is_anticomplete(G, [w], X):
                pattern.append(False)
            else:
                break
        else:
            classes.setdefault(tuple(pattern), []).append(w)
    best = max(classes.values(), key=len, default=[])
    return tuple(best[:k0]) if len(best) >= k0 else None


def _strong_candidate(G: OrderedGraph, aug: Augmentation, positions: Sequence[int], k0: int) -> Optional[Augmentation]:
    C = aug.constellation
    X1 = tuple(aug.X1[p] for p in positions)
    X2 = X1 if aug.equal else tuple(aug.X2[p] for p in positions)
    for X in {X1, X2}:
        mask = mask_of(X)
        if not (G.is_clique(mask) or G.is_coclique(mask)):
            return None
        if any(not is_homogeneous(G, [h], X) for h in C.hubs):
            return None
    leaves: Dict[int, Tuple[int, ...]] = {}
    for h in _ordered_hubs(aug):
        W = tuple(C.leaves[h][p] for p in positions)
        for X in (X1, X2):
            if not (is_homogeneous(G, W, X) or is_coupled(G, W, X)):
                return None
        leaves[h] = W
    for h in C.outside_hubs():
        if h == aug.y:
            continue
        chosen = _homogeneous_choice(G, C.leaves[h], (X1, X2), k0)
        if chosen is None:
            return None
        leaves[h] = chosen
    refined = Augmentation(
        Constellation.build(leaves, C.pattern_vertices, C.pattern_edges), aug.x, aug.y, X1, X2
    )
    return refined if not validate_augmentation(G, refined) else None


def refine_augmentation(
    G: OrderedGraph, aug: Augmentation, k0: int, max_k: Optional[int] = None
) -> Union[Augmentation, NotFound]:
    """
    Turn a weak augmentation into a full one on k0 positions

    The ordered sets (link sets and leaves of the pattern hubs and y) are cut
    down to a common set of positions; leaves of the other outside hubs may
    be any k0 vertices homogeneous to both link sets.
    """
    weak = aug.as_weak()
    violations = validate_augmentation(G, weak)
    if violations:
        raise PreconditionError("weak-augmentation", str(violations[0]))
    k = aug.constellation.k
    cap = cap_or_default(max_k, "search_max_side")
    if k > cap:
        raise CapExceeded("refinement positions", cap, k)
    if not 0 < k0 <= k:
        return NotFound("refinement", f"cannot pick {k0} of {k} positions")
    for positions in combinations(range(k), k0):
        refined = _strong_candidate(G, weak, positions, k0)
        if refined is not None:
            logger.debug("refined on positions %s", positions)
            return refined
    return NotFound("refinement", f"no {k0} positions satisfy the full clauses")


def _weak_candidates(G: OrderedGraph, C: Constellation, X1: Sequence[int], X2: Sequence[int], equal: bool, k0: int):
    for x, y in product(C.pattern_vertices, C.outside_hubs()):
        for P in combinations(C.leaves[x], k0):
            for Y1 in combinations(X1, k0):
                if not is_coupled(G, P, Y1):
                    continue
                restricted = restrict(C, x, P)
                second = [Y1] if equal else combinations(X2, k0)
                for Y2 in second:
                    Y2 = tuple(Y2)
                    if not equal and not is_coupled(G, Y1, Y2):
                        continue
                    if not is_coupled(G, restricted.leaves[y], Y2):
                        continue
                    yield Augmentation(restricted, x, y, tuple(Y1), Y2, weak=True)


def find_augmentation(
    G: OrderedGraph,
    C: Constellation,
    k: int,
    link_size: Optional[int] = None,
    max_side: Optional[int] = None,
    max_n: Optional[int] = None,
) -> Union[AugmentationSearch, NotFound]:
    """
    Best-effort search for a full (n, m, k)-augmentation extending C

    Runs disentangle on (A(C), B(C)) for a link, searches the link and the
    leaves for a weak augmentation by exhaustive coupled-subset search, then
    refines it. Any augmentation returned validates in the returned graph.

    Args:
        G: host graph
        C: validated constellation with at least one outside hub
        k: size of the augmentation
        link_size: size of the link to look for (default k)

    Returns:
        AugmentationSearch (LC-only trace from G) or NotFound naming the stage
    """
    violations = validate_constellation(G, C)
    if violations:
        raise PreconditionError("constellation", str(violations[0]))
    if not C.outside_hubs():
        raise PreconditionError("outside-hub", "an augmentation needs a hub outside the pattern")
    cap = cap_or_default(max_side, "search_max_side")
    if C.k > cap:
        raise CapExceeded("augmentation leaves", cap, C.k)
    size = k if link_size is None else link_size
    found = disentangle(G, C.a_side(), C.b_side(), size, max_n=max_n)
    if not found:
        return NotFound("disentangle", f"{found.stage}: {found.detail}")
    H = found.graph
    X1, X2 = found.link.X1, found.link.X2
    equal = found.link.mode == LinkMode.EQUAL
    logger.info("link of size %d (%s) for the augmentation search", len(X1), found.link.mode.value)
    weak_seen = False
    for weak in _weak_candidates(H, C, X1, X2, equal, k):
        if validate_augmentation(H, weak):
            continue
        weak_seen = True
        refined = refine_augmentation(H, weak, k)
        if refined:
            return AugmentationSearch(H, found.trace, refined)
    if not weak_seen:
        return NotFound("weak", f"no weak augmentation of size {k} on the link")
    return NotFound("refinement", "weak augmentations exist but none refines")


__all__ = [
    "GrowthCase",
    "GrowthResult",
    "grow_step",
    "AugmentationSearch",
    "refine_augmentation",
    "find_augmentation",
]
