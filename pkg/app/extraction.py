"""
Extraction Module - Realizing prescribed graphs and comparability grids from constellations
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, isqrt
from typing import Dict, Hashable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from binary_matroid import NotFound
from bounds import BoundTable
from circle import comparability_grid
from config import cap_or_default
from constellation import (
    HALF_GRAPH_KINDS,
    Constellation,
    CouplingKind,
    classify_coupling,
    is_clique_pattern,
    is_star,
    path_order,
    validate_constellation,
)
from errors import CapExceeded, PipelineStageError, PreconditionError
from gf2 import bits_of, mask_of, popcount
from graph_core import OperationTrace, OrderedGraph, TracedGraph, apply_trace, induced_on_sequence

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class Realization:
    """
    Trace plus the final labels of a target graph's vertices

    Replaying trace and reading the vertices vertex_map[key] for key in
    order gives exactly target.
    """

    trace: OperationTrace
    vertex_map: Dict[Hashable, int]
    order: Tuple[Hashable, ...]
    target: OrderedGraph
    stages: Tuple[str, ...] = field(default_factory=tuple)

    def final_sequence(self) -> List[int]:
        return [self.vertex_map[key] for key in self.order]


def verify_realization(G: OrderedGraph, result: Realization) -> bool:
    """Replay the trace and compare the selected vertices with the target"""
    final = apply_trace(G, result.trace)
    return induced_on_sequence(final, result.final_sequence()) == result.target


def _realization(traced: TracedGraph, originals: Sequence, order: Sequence, target: OrderedGraph,
                 stages: Sequence[str] = ()) -> Realization:
    labels = traced.label_map()
    return Realization(
        traced.trace,
        {key: labels[v] for key, v in zip(order, originals)},
        tuple(order),
        target,
        tuple(stages),
    )


# fixing pairs


def _check_hypothesis(G: OrderedGraph, Z: Sequence[int], components: Dict[Pair, Sequence[int]]):
    n = len(Z)
    z_mask = mask_of(Z)
    z_pos = {z: p for p, z in enumerate(Z)}
    rest = G.to_networkx()
    rest.remove_nodes_from(Z)
    comp_of: Dict[int, int] = {}
    members: Dict[int, Set[int]] = {}
    for index, comp in enumerate(nx.connected_components(rest)):
        members[index] = set(comp)
        for v in comp:
            comp_of[v] = index
    used = set()
    for i, j in combinations(range(n), 2):
        if (i, j) not in components:
            raise PreconditionError("distinct-components", f"no component for pair ({i}, {j})")
    for (i, j), A in sorted(components.items()):
        if not 0 <= i < j < n:
            raise PreconditionError("distinct-components", f"pair ({i}, {j}) out of range")
        A = set(A)
        ids = {comp_of.get(v) for v in A}
        if not A or len(ids) != 1 or None in ids:
            raise PreconditionError("distinct-components", f"set for ({i}, {j}) is not one component")
        cid = ids.pop()
        if cid in used or members[cid] != A:
            raise PreconditionError("distinct-components", f"set for ({i}, {j}) is not a whole distinct component")
        used.add(cid)
        touched = 0
        for a in A:
            touched |= G.nbr_mask(a) & z_mask
        positions = sorted(z_pos[z] for z in bits_of(touched))
        if i not in positions or j not in positions:
            raise PreconditionError("endpoint-neighbours", f"z_{i} or z_{j} has no neighbour in its component")
        if positions[0] < i or positions[-1] > j:
            raise PreconditionError("neighbourhood-window", f"component of ({i}, {j}) sees outside z_{i}..z_{j}")


def _fixed_pairs(traced: TracedGraph, Z: Sequence[int], H: OrderedGraph) -> Set[Pair]:
    n = len(Z)
    fixed: Set[Pair] = set()
    for i in range(n):
        for j in range(n - 1, i, -1):
            ok = traced.adjacent(Z[i], Z[j]) == H.has_edge(i, j)
            if i > 0:
                ok = ok and (i - 1, j) in fixed
            if j < n - 1:
                ok = ok and (i, j + 1) in fixed
            if ok:
                fixed.add((i, j))
    return fixed


def _window_path(traced: TracedGraph, zi: int, zj: int, A: Sequence[int]) -> List[int]:
    """Shortest path inside A from a neighbour of zi to a neighbour of zj"""
    inside = set(A)
    sources = [a for a in sorted(inside) if traced.adjacent(zi, a)]
    targets = {a for a in inside if traced.adjacent(zj, a)}
    parent: Dict[int, Optional[int]] = {}
    frontier = []
    for s in sources:
        if s in targets:
            return [s]
        parent[s] = None
        frontier.append(s)
    end = None
    while frontier and end is None:
        nxt = []
        for u in frontier:
            for w in traced.neighbours(u):
                if w in inside and w not in parent:
                    parent[w] = u
                    if w in targets:
                        end = w
                        break
                    nxt.append(w)
            if end is not None:
                break
        frontier = nxt
    if end is None:
        raise PreconditionError("endpoint-neighbours", "component does not join its two endpoints")
    path = []
    while end is not None:
        path.append(end)
        end = parent[end]
    return list(reversed(path))


def _fix_loop(traced: TracedGraph, Z: Sequence[int], components: Dict[Pair, Sequence[int]], H: OrderedGraph):
    fixed = _fixed_pairs(traced, Z, H)
    for _ in range(comb(len(Z), 2) + 1):
        open_pairs = [p for p in combinations(range(len(Z)), 2) if p not in fixed]
        if not open_pairs:
            return
        i, j = min(open_pairs, key=lambda p: (p[0], -p[1]))
        for v in _window_path(traced, Z[i], Z[j], components[(i, j)]):
            traced.lc(v)
        now = _fixed_pairs(traced, Z, H)
        assert fixed <= now and (i, j) in now, f"fixing ({i}, {j}) unfixed another pair"
        fixed = now
    raise PipelineStageError("fix-pairs", "pairs did not converge")


def _fix_on(traced: TracedGraph, Z: Sequence[int], components: Dict[Pair, Sequence[int]], H: OrderedGraph):
    labels = traced.label_map()
    _check_hypothesis(
        traced.graph,
        [labels[z] for z in Z],
        {p: [labels[a] for a in A] for p, A in components.items()},
    )
    _fix_loop(traced, Z, components, H)
    traced.keep(Z)


def fix_pairs(
    G: OrderedGraph,
    Z: Sequence[int],
    components: Dict[Pair, Sequence[int]],
    H_target: OrderedGraph,
) -> Realization:
    """
    Make G[Z] equal to any target by local complementations inside components

    Args:
        G: host graph
        Z: ordered vertices z_0..z_{n-1}
        components: (i, j) -> vertex set of a component of G - Z whose
            neighbours in Z lie in z_i..z_j and include both ends
        H_target: graph on n vertices, vertex p standing for Z[p]

    Returns:
        Realization: LC steps along induced paths, then KEEP Z
    """
    if H_target.n != len(Z):
        raise PreconditionError("target-size", f"target has {H_target.n} vertices, Z has {len(Z)}")
    traced = TracedGraph(G)
    _fix_on(traced, Z, components, H_target)
    return _realization(traced, Z, range(len(Z)), H_target, ("fix-pairs",))


def _require_valid(G: OrderedGraph, C: Constellation):
    violations = validate_constellation(G, C)
    if violations:
        raise PreconditionError("constellation", str(violations[0]))


def extract_matching(G: OrderedGraph, C: Constellation, H_target: OrderedGraph) -> Realization:
    """
    Realize H_target on the hubs of a matching-coupled path or clique constellation

    Component l of G - H holds the l-th leaf of every hub; pair (i, j) gets
    the next component and the shortest hub path between z_i and z_j in it.
    """
    _require_valid(G, C)
    n = C.n
    K = C.pattern_graph()
    if C.m != 0:
        raise PreconditionError("shape", "every hub must be a pattern vertex")
    if n > 1 and not (is_clique_pattern(C) or K.number_of_edges() == n - 1 and max(d for _, d in K.degree()) <= 2):
        raise PreconditionError("shape", "pattern graph must be a path or a clique")
    if any(classify_coupling(G, C.leaves[u], C.leaves[v]) != CouplingKind.COUPLED_MATCHING
           for u, v in C.pattern_edges):
        raise PreconditionError("shape", "pattern edges must be coupled matchings")
    if H_target.n != n:
        raise PreconditionError("target-size", f"target has {H_target.n} vertices, pattern has {n}")
    if C.k < comb(n, 2):
        raise PreconditionError("leaf-size", f"need {comb(n, 2)} leaves per hub, have {C.k}")
    Z = path_order(C) if n > 2 and not is_clique_pattern(C) else sorted(C.hubs)
    components: Dict[Pair, List[int]] = {}
    for slot, (i, j) in enumerate(combinations(range(n), 2)):
        hubs = nx.shortest_path(K, Z[i], Z[j])
        components[(i, j)] = [C.leaves[h][slot] for h in hubs]
    traced = TracedGraph(G)
    traced.keep(sorted(set(Z) | {a for A in components.values() for a in A}))
    _fix_on(traced, Z, components, H_target)
    return _realization(traced, Z, range(n), H_target, ("components", "fix-pairs"))


def extract_star(G: OrderedGraph, C: Constellation, H_target: OrderedGraph) -> Realization:
    """
    Realize H_target on leaves of the centre of a star constellation

    Each non-centre hub serves one pair (i, j) of the centre's leaves
    z_1..z_n; a single pivot inside its own leaf set leaves one vertex
    seeing exactly z_i..z_j (matching pairs use the path x_i, hub, x_j).
    """
    _require_valid(G, C)
    n = H_target.n
    centre = is_star(C)
    if centre is None or C.m != 0:
        raise PreconditionError("shape", "pattern graph must be a star on all hubs")
    if C.n != comb(n, 2) + 1:
        raise PreconditionError("shape", f"a target on {n} vertices needs {comb(n, 2) + 1} hubs, have {C.n}")
    if C.k < n + 2:
        raise PreconditionError("leaf-size", f"need {n + 2} leaves per hub, have {C.k}")
    Wh = C.leaves[centre][: n + 2]
    Z = list(Wh[1: n + 1])
    others = [h for h in C.hubs if h != centre]
    traced = TracedGraph(G)
    components: Dict[Pair, Tuple[int, ...]] = {}
    for v, (i0, j0) in zip(others, combinations(range(n), 2)):
        i, j = i0 + 1, j0 + 1
        Wv = C.leaves[v][: n + 2]
        kind = classify_coupling(G, Wv, Wh)
        if kind == CouplingKind.COUPLED_MATCHING:
            components[(i0, j0)] = (Wv[i], v, Wv[j])
            continue
        if kind == CouplingKind.DOWN_HALF:
            partner, keep = Wv[i - 1], Wv[j]
        elif kind == CouplingKind.CO_UP_HALF:
            partner, keep = Wv[i], Wv[j + 1]
        elif kind == CouplingKind.UP_HALF:
            partner, keep = Wv[j + 1], Wv[i]
        elif kind == CouplingKind.CO_DOWN_HALF:
            partner, keep = Wv[j], Wv[i - 1]
        else:
            raise PreconditionError("pair-kind", f"leaves of {v} and the centre are {kind.value}")
        traced.pivot(v, partner)
        components[(i0, j0)] = (keep,)
    traced.keep(sorted(set(Z) | {a for A in components.values() for a in A}))
    _fix_on(traced, Z, components, H_target)
    return _realization(traced, Z, range(n), H_target, ("pivots", "fix-pairs"))


# comparability grids


class GridMode:
    PURE = "pure"
    MIXED = "mixed"


def grid_selection(G: OrderedGraph, parts: Sequence[Sequence[int]], mode: str = GridMode.PURE) -> Tuple[int, Dict[Pair, int]]:
    """
    Pick the vertices that induce a comparability grid

    Args:
        G: host graph
        parts: ordered vertex sets X_0, X_1, ...
        mode: "pure" (n cliques of size n, pairs up-coupled) or "mixed"
            (n^2 sets of size >= n^2, pairs up-coupled or complements of
            down-coupled half graphs)

    Returns:
        tuple: (n, map (i, j) -> vertex) with (i, j) 0-based
    """
    if mode == GridMode.PURE:
        n = len(parts)
        if any(len(X) != n for X in parts):
            raise PreconditionError("part-size", f"pure mode needs {n} parts of size {n}")
        for X in parts:
            if not G.is_clique(mask_of(X)):
                raise PreconditionError("cliques", "every part must be a clique")
        allowed = {CouplingKind.UP_HALF}
        cut = n
    elif mode == GridMode.MIXED:
        n = isqrt(len(parts))
        if n * n != len(parts) or n == 0:
            raise PreconditionError("part-count", f"mixed mode needs a square number of parts, got {len(parts)}")
        cut = n * n
        if any(len(X) < cut for X in parts):
            raise PreconditionError("part-size", f"mixed mode needs parts of size {cut}")
        allowed = {CouplingKind.UP_HALF, CouplingKind.CO_DOWN_HALF}
    else:
        raise PreconditionError("mode", f"unknown grid mode '{mode}'")
    parts = [list(X)[:cut] for X in parts]
    for a, b in combinations(range(len(parts)), 2):
        if classify_coupling(G, parts[a], parts[b]) not in allowed:
            raise PreconditionError("pair-coupling", f"parts {a} and {b} are not coupled as required")
    if mode == GridMode.PURE:
        return n, {(i, j): parts[i][j] for i in range(n) for j in range(n)}
    return n, {(i, j): parts[i * n + j][j * n + i] for i in range(n) for j in range(n)}


def _grid_on(traced: TracedGraph, parts: Sequence[Sequence[int]], mode: str, stages=()) -> Realization:
    labels = traced.label_map()
    back = {c: o for o, c in labels.items()}
    n, chosen = grid_selection(traced.graph, [[labels[v] for v in X] for X in parts], mode)
    order = sorted(chosen)
    originals = [back[chosen[key]] for key in order]
    traced.keep(originals)
    result = _realization(traced, originals, order, comparability_grid(n), tuple(stages) + ("grid",))
    final = induced_on_sequence(traced.graph, result.final_sequence())
    if final != result.target:
        raise PipelineStageError("grid", "selected vertices do not induce the comparability grid")
    return result


def grid_from_cliques(G: OrderedGraph, parts: Sequence[Sequence[int]], mode: str = GridMode.PURE) -> Realization:
    """Comparability grid realized by keeping the selected vertices (checked against CG_n)"""
    return _grid_on(TracedGraph(G), parts, mode)


# clique pipeline


def _monochromatic(kinds: Dict[Pair, CouplingKind], hubs: Sequence[int], allowed) -> bool:
    return all(kinds[(a, b)] in allowed for a, b in combinations(hubs, 2))


def clique_pipeline(
    G: OrderedGraph, C: Constellation, max_hubs: Optional[int] = None
) -> Union[Realization, NotFound]:
    """
    Comparability grid from a clique constellation

    Searches hub subsequences whose pairs are all coupled matchings, or all
    up-coupled / complement-of-down-coupled (possibly after reversing the
    hub order), and dispatches to the matching extraction or the mixed grid
    selection, whichever reaches the larger grid.

    Returns:
        Realization, or NotFound when no subsequence supports even CG_1
    """
    _require_valid(G, C)
    if not is_clique_pattern(C) or C.m != 0:
        raise PreconditionError("shape", "pattern graph must be a clique on all hubs")
    cap = cap_or_default(max_hubs, "search_max_side")
    hubs = sorted(C.hubs)
    if len(hubs) > cap:
        raise CapExceeded("clique pipeline hubs", cap, len(hubs))
    kinds = {(a, b): classify_coupling(G, C.leaves[a], C.leaves[b]) for a, b in combinations(hubs, 2)}
    matching = {CouplingKind.COUPLED_MATCHING}
    forward = {CouplingKind.UP_HALF, CouplingKind.CO_DOWN_HALF}
    backward = {CouplingKind.DOWN_HALF, CouplingKind.CO_UP_HALF}

    best = None
    for size in range(len(hubs), 0, -1):
        for subset in combinations(hubs, size):
            for case, allowed in (("grid", forward), ("reversed-grid", backward), ("matching", matching)):
                if not _monochromatic(kinds, subset, allowed):
                    continue
                if case == "matching":
                    n = isqrt(size)
                    while n > 0 and comb(n * n, 2) > C.k:
                        n -= 1
                else:
                    n = min(isqrt(size), isqrt(C.k))
                if n > 0 and (best is None or n > best[0]):
                    best = (n, case, subset)
        if best is not None and best[0] >= isqrt(size):
            break
    if best is None:
        return NotFound("selection", "no monochromatic hub subsequence")
    n, case, subset = best
    chosen = list(subset[: n * n])
    logger.info("clique pipeline: case %s with %d hubs for CG_%d", case, len(chosen), n)
    if case == "matching":
        edges = [(u, v) for u, v in combinations(chosen, 2)]
        sub = Constellation.build({h: C.leaves[h] for h in chosen}, chosen, edges)
        inner = extract_matching(G, sub, comparability_grid(n))
        return Realization(inner.trace, inner.vertex_map, inner.order, inner.target, ("selection", "matching"))
    if case == "reversed-grid":
        chosen = list(reversed(chosen))
    parts = [C.leaves[h][: n * n] for h in chosen]
    return _grid_on(TracedGraph(G), parts, GridMode.MIXED, ("selection", case))


# path pipeline


def _check_stage(traced: TracedGraph, C: Constellation, stage: str):
    violations = validate_constellation(traced.graph, C.relabel(traced.label_map()))
    if violations:
        raise PipelineStageError(stage, str(violations[0]))


def _common_coclique_positions(traced: TracedGraph, sets: Sequence[Sequence[int]], positions: Sequence[int]) -> List[int]:
    chosen: List[int] = []
    for p in positions:
        if all(not traced.adjacent(W[p], W[q]) for W in sets for q in chosen):
            chosen.append(p)
    return sorted(chosen)


def _path_kinds(traced: TracedGraph, order: Sequence[int], leaves: Dict[int, Sequence[int]]) -> List[CouplingKind]:
    labels = traced.label_map()
    return [
        classify_coupling(traced.graph, [labels[x] for x in leaves[a]], [labels[x] for x in leaves[b]])
        for a, b in zip(order, order[1:])
    ]


def _path_constellation(order: Sequence[int], leaves: Dict[int, Sequence[int]]) -> Constellation:
    return Constellation.build({h: leaves[h] for h in order}, order, list(zip(order, order[1:])))


def path_pipeline(
    G: OrderedGraph,
    C: Constellation,
    m: Optional[int] = None,
    max_m: Optional[int] = None,
) -> Realization:
    """
    Comparability grid from a path constellation in four checked stages

    1. drop hubs followed by a coupled-matching pair (LC on their leaves)
    2. shift leaf windows so every pair is up-coupled or its complement
    3. pivot on first leaves until every pair is up-coupled
    4. densify by LC rounds on X_{s-1} u {u_s}, then select the grid

    Args:
        G: host graph
        C: validated constellation whose pattern graph is a path
        m: number of path hubs to use after stage 1 (default: all)

    Returns:
        Realization of CG_n with n = floor(sqrt(m))
    """
    _require_valid(G, C)
    order = path_order(C)
    traced = TracedGraph(G)
    leaves: Dict[int, Tuple[int, ...]] = dict(C.leaves)
    stages: List[str] = []

    # stage 1
    kinds = _path_kinds(traced, order, leaves)
    dropped = [order[t] for t, kind in enumerate(kinds) if kind == CouplingKind.COUPLED_MATCHING]
    for h in dropped:
        for w in leaves[h]:
            traced.lc(w)
    order = [h for h in order if h not in dropped]
    if dropped:
        sets = [leaves[h] for h in order]
        up = _common_coclique_positions(traced, sets, range(C.k))
        down = _common_coclique_positions(traced, sets, range(C.k - 1, -1, -1))
        keep = up if len(up) >= len(down) else down
        leaves = {h: tuple(leaves[h][p] for p in keep) for h in order}
    else:
        leaves = {h: leaves[h] for h in order}
    traced.keep([v for h in order for v in (h,) + tuple(leaves[h])])
    _check_stage(traced, _path_constellation(order, leaves), "drop-matchings")
    kinds = _path_kinds(traced, order, leaves)
    if any(kind not in HALF_GRAPH_KINDS for kind in kinds):
        raise PipelineStageError("drop-matchings", "a consecutive pair is not a half graph")
    stages.append("drop-matchings")

    m = len(order) if m is None else m
    cap = cap_or_default(max_m, "pipeline_max_m")
    if m > cap:
        raise CapExceeded("path pipeline hubs", cap, m)
    if m < 1 or m > len(order):
        raise PreconditionError("hub-count", f"asked for {m} hubs, {len(order)} survive the first stage")
    order = order[:m]
    kinds = kinds[: m - 1]
    k = len(leaves[order[0]])
    need = BoundTable().path_pipeline_k(m)
    if k < need:
        raise PreconditionError("leaf-size", f"{m} hubs need {need} leaves each, have {k}")

    # stage 2
    offsets = [0]
    for kind in kinds:
        shift = 1 if kind in (CouplingKind.DOWN_HALF, CouplingKind.CO_DOWN_HALF) else 0
        offsets.append(offsets[-1] + shift)
    window = k - max(offsets)
    leaves = {h: tuple(leaves[h][o: o + window]) for h, o in zip(order, offsets)}
    kinds = _path_kinds(traced, order, leaves)
    if any(kind not in (CouplingKind.UP_HALF, CouplingKind.CO_UP_HALF) for kind in kinds):
        raise PipelineStageError("shift", "offset walk left a pair that is not up-coupled or its complement")
    _check_stage(traced, _path_constellation(order, leaves), "shift")
    stages.append("shift")

    # stage 3
    for t in range(m - 1):
        kind = _path_kinds(traced, order[t: t + 2], leaves)[0]
        if kind == CouplingKind.UP_HALF:
            continue
        if kind != CouplingKind.CO_UP_HALF:
            raise PipelineStageError("pivot-normalize", f"pair {t} became {kind.value}")
        old = order[t + 1]
        w = leaves[old][0]
        traced.pivot(w, old)
        rest = {h: leaves[h][1:] for h in order if h != old}
        rest[w] = leaves[old][1:]
        order[t + 1] = w
        leaves = rest
    d1 = m * (1 << (m - 1))
    leaves = {h: tuple(leaves[h][:d1]) for h in order}
    if len(leaves[order[0]]) < d1:
        raise PipelineStageError("pivot-normalize", f"fewer than {d1} leaves remain")
    kinds = _path_kinds(traced, order, leaves)
    if any(kind != CouplingKind.UP_HALF for kind in kinds):
        raise PipelineStageError("pivot-normalize", "a pair is not up-coupled after pivoting")
    _check_stage(traced, _path_constellation(order, leaves), "pivot-normalize")
    stages.append("pivot-normalize")

    # stage 4
    X = [list(leaves[h]) for h in order]
    for s in range(2, m + 1):
        _assert_parity(traced, X, order, s)
        for v in X[s - 2] + [order[s - 1]]:
            traced.lc(v)
        X = [Xi[0::2] for Xi in X]
        _check_densified(traced, X, order, s)
    stages.append("densify")

    n = isqrt(m)
    parts = [Xi[: n * n] for Xi in X[: n * n]]
    return _grid_on(traced, parts, GridMode.MIXED, stages)


def _assert_parity(traced: TracedGraph, X: List[List[int]], order: Sequence[int], s: int):
    """Common-neighbour parities that make the next LC round add exactly the wanted pairs"""
    labels = traced.label_map()
    G = traced.graph
    hot = mask_of(labels[v] for v in X[s - 2]) | (1 << labels[order[s - 1]])
    m = len(X)
    rows = [[G.nbr_mask(labels[x]) & hot for x in Xi[0::2]] for Xi in X]

    def common(a, i, b, j) -> int:
        return popcount(rows[a][i] & rows[b][j])

    low = range(0, s - 2)
    high = range(s - 1, m)
    for group in (low, high):
        for a in group:
            for b in group:
                for i in range(len(rows[a])):
                    for j in range(len(rows[b])):
                        if (a, i) != (b, j):
                            assert common(a, i, b, j) % 2 == 0, f"odd common neighbours at round {s}"
    for a in low:
        for i in range(len(rows[a])):
            for j in range(len(rows[s - 1])):
                assert common(a, i, s - 1, j) % 2 == (1 if j >= i else 0), f"wrong parity at round {s}"


def _check_densified(traced: TracedGraph, X: List[List[int]], order: Sequence[int], s: int):
    labels = traced.label_map()
    G = traced.graph
    m = len(X)
    current = [[labels[x] for x in Xi] for Xi in X]
    for Xi in current:
        if not G.is_coclique(mask_of(Xi)):
            raise PipelineStageError("densify", f"round {s} broke a coclique")
    for a, b in combinations(range(m), 2):
        linked = b < s or b == a + 1
        kind = classify_coupling(G, current[a], current[b])
        if linked and kind != CouplingKind.UP_HALF:
            raise PipelineStageError("densify", f"round {s}: pair ({a}, {b}) is {kind.value}")
        if not linked and kind != CouplingKind.ANTICOMPLETE:
            raise PipelineStageError("densify", f"round {s}: pair ({a}, {b}) should be anticomplete")
    for i in range(s, m):
        hub = labels[order[i]]
        for a in range(m):
            want = a == i
            if any(G.has_edge(hub, x) != want for x in current[a]):
                raise PipelineStageError("densify", f"round {s}: hub {order[i]} sees the wrong leaves")
