"""
Circle Module - Chord diagrams, permutation graphs and comparability grids
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from config import cap_or_default
from errors import CapExceeded, InvalidOperation, PipelineStageError
from graph_core import (
    OperationTrace,
    OrderedGraph,
    Step,
    induced_on_sequence,
    replay,
)

logger = logging.getLogger(__name__)


def chord_key(name: str):
    """Sort key placing numeric chord names in numeric order"""
    return (0, int(name), "") if name.isdigit() else (1, 0, name)


class ChordDiagram:
    """
    Circular word in which every chord name appears exactly twice

    Responsibilities:
    - Validate the word and locate chord endpoints
    - Canonicalize rotations and test crossings

    Does NOT handle:
    - Diagrams whose chords share endpoints
    """

    __slots__ = ("word", "_pos")

    def __init__(self, word: Sequence[str]):
        word = tuple(str(t) for t in word)
        pos: Dict[str, List[int]] = {}
        for i, token in enumerate(word):
            pos.setdefault(token, []).append(i)
        bad = [name for name, places in pos.items() if len(places) != 2]
        if bad:
            raise InvalidOperation(f"chords {bad} do not appear exactly twice")
        self.word = word
        self._pos = {name: (p[0], p[1]) for name, p in pos.items()}

    @property
    def n(self) -> int:
        return len(self.word) // 2

    def chords(self) -> List[str]:
        """Chord names in first-occurrence order"""
        seen = []
        for token in self.word:
            if token not in seen:
                seen.append(token)
        return seen

    def positions(self, name: str) -> Tuple[int, int]:
        try:
            return self._pos[name]
        except KeyError:
            raise InvalidOperation(f"unknown chord '{name}'") from None

    def crosses(self, a: str, b: str) -> bool:
        p, q = self.positions(a)
        r, s = self.positions(b)
        return (p < r < q) != (p < s < q)

    def rotate(self, k: int) -> "ChordDiagram":
        k %= max(len(self.word), 1)
        return ChordDiagram(self.word[k:] + self.word[:k])

    def canonical(self) -> "ChordDiagram":
        if not self.word:
            return self
        best = min(
            (self.word[k:] + self.word[:k] for k in range(len(self.word))),
            key=lambda w: tuple(chord_key(t) for t in w),
        )
        return ChordDiagram(best)

    def __eq__(self, other) -> bool:
        return isinstance(other, ChordDiagram) and self.word == other.word

    def __hash__(self) -> int:
        return hash(self.word)

    def __repr__(self) -> str:
        return f"ChordDiagram({' '.join(self.word)})"


def intersection_graph(D: ChordDiagram, order: Optional[Sequence[str]] = None) -> OrderedGraph:
    """
    Intersection graph of the chords

    Args:
        D: chord diagram
        order: chord names giving the vertex order (default first occurrence)

    Returns:
        OrderedGraph: vertex i is chord order[i]; edges join interleaved chords
    """
    names = list(order) if order is not None else D.chords()
    if sorted(names, key=chord_key) != sorted(D.chords(), key=chord_key):
        raise InvalidOperation("vertex order must list every chord once")
    return OrderedGraph.from_edges(
        len(names),
        [(i, j) for i, j in combinations(range(len(names)), 2) if D.crosses(names[i], names[j])],
    )


def flip(D: ChordDiagram, v: str) -> ChordDiagram:
    """Reverse the sub-word strictly between the two ends of chord v"""
    p, q = D.positions(v)
    word = list(D.word)
    word[p + 1:q] = reversed(word[p + 1:q])
    return ChordDiagram(word)


def grid_index(i: int, j: int, n: int) -> int:
    """Vertex index of (i, j), 1-based coordinates, lexicographic order"""
    return (i - 1) * n + (j - 1)


def grid_coords(index: int, n: int) -> Tuple[int, int]:
    return index // n + 1, index % n + 1


def comparability_grid(n: int) -> OrderedGraph:
    """n x n comparability grid: (i, j) ~ (i', j') iff the pairs are coordinatewise comparable"""
    if n < 1:
        raise InvalidOperation("grid order must be at least 1")
    edges = []
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for a, b in combinations(range(len(cells)), 2):
        (i, j), (k, l) = cells[a], cells[b]
        if (i <= k and j <= l) or (i >= k and j >= l):
            edges.append((a, b))
    return OrderedGraph.from_edges(n * n, edges)


def _check_permutation(pi: Sequence[int]):
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise InvalidOperation(f"{list(pi)} is not a permutation of 1..{len(pi)}")


def permutation_graph(pi: Sequence[int]) -> OrderedGraph:
    """Inversion graph: i < j adjacent iff pi_i > pi_j"""
    _check_permutation(pi)
    n = len(pi)
    return OrderedGraph.from_edges(
        n, [(i, j) for i, j in combinations(range(n), 2) if pi[i] > pi[j]]
    )


def embed_permutation_in_grid(pi: Sequence[int], size: Optional[int] = None) -> List[int]:
    """
    Place vertex i of the permutation graph at grid cell (i, n + 1 - pi_i)

    Args:
        pi: permutation of 1..n
        size: order of the host grid (default n)

    Returns:
        list: host grid vertex index for each permutation vertex
    """
    _check_permutation(pi)
    n = len(pi)
    size = n if size is None else size
    if size < n:
        raise InvalidOperation(f"grid of order {size} cannot host {n} vertices")
    return [grid_index(i + 1, n + 1 - pi[i], size) for i in range(n)]


def permutation_diagram(pi: Sequence[int]) -> ChordDiagram:
    """Layout b_1..b_n, a_n..a_1 with chord i joining a_i and b_{pi_i}"""
    _check_permutation(pi)
    n = len(pi)
    inverse = {value: i + 1 for i, value in enumerate(pi)}
    word = [str(inverse[k]) for k in range(1, n + 1)] + [str(i) for i in range(n, 0, -1)]
    return ChordDiagram(word)


def grid_diagram(n: int) -> Tuple[ChordDiagram, List[str]]:
    """
    Chord layout whose intersection graph is the comparability grid

    Returns:
        tuple: (diagram, chord names in grid vertex order)
    """
    name = {(i, j): str(grid_index(i, j, n)) for i in range(1, n + 1) for j in range(1, n + 1)}
    word = []
    for k in range(1, n + 1):
        for i in range(n, 0, -1):
            word.append(name[(i, n + 1 - k)])
    for i in range(n, 0, -1):
        for k in range(1, n + 1):
            word.append(name[(i, n + 1 - k)])
    order = [name[(i, j)] for i in range(1, n + 1) for j in range(1, n + 1)]
    return ChordDiagram(word), order


def _fresh_names(taken) -> Iterator[str]:
    i = 1
    while True:
        x, y = f"x{i}", f"y{i}"
        if x not in taken and y not in taken:
            yield x
            yield y
        i += 1


def _non_crossing(word: Sequence[str], side: Sequence[bool]) -> List[str]:
    where: Dict[str, List[bool]] = {}
    for token, s in zip(word, side):
        where.setdefault(token, []).append(s)
    return sorted((name for name, sides in where.items() if sides[0] == sides[1]), key=chord_key)


def arc_sides(D: ChordDiagram, arc: Optional[Tuple[int, int]] = None) -> List[bool]:
    """Membership of every position in the arc (start, length), cyclic"""
    size = len(D.word)
    start, length = arc if arc is not None else (0, D.n)
    if not (0 <= start < size) or not (1 <= length < size):
        raise InvalidOperation(f"arc ({start}, {length}) must have 0 <= start < {size} and 1 <= length < {size}")
    side = [False] * size
    for t in range(length):
        side[(start + t) % size] = True
    return side


def non_crossing_chords(D: ChordDiagram, arc: Optional[Tuple[int, int]] = None) -> List[str]:
    """Chords with both ends on the same side of the arc"""
    return _non_crossing(D.word, arc_sides(D, arc))


@dataclass(frozen=True)
class CircleStep:
    chord: str
    x: str
    y: str
    size_after: int
    non_crossing_after: int


@dataclass(frozen=True)
class CirclePermutation:
    pi: Tuple[int, ...]
    trace: OperationTrace
    label_map: Dict[str, int]
    final: ChordDiagram
    steps: Tuple[CircleStep, ...]


def _rotate_to_run(word: List[str], side: List[bool], flag: bool) -> Tuple[List[str], List[bool], int]:
    size = len(side)
    for r in range(size):
        if side[r] == flag and side[r - 1] != flag:
            break
    else:
        raise PipelineStageError("circle", "arc does not split the circle")
    word = word[r:] + word[:r]
    side = side[r:] + side[:r]
    run = 0
    while run < size and side[run] == flag:
        run += 1
    return word, side, run


def _reroute(word: List[str], side: List[bool], v: str, names: Iterator[str]):
    """Replace non-crossing chord v by a crossing one, flanked by two new parallel chords"""
    flag = side[word.index(v)]
    word, side, run = _rotate_to_run(word, side, flag)
    q = max(i for i in range(run) if word[i] == v)
    x, y = next(names), next(names)
    word = word[:q] + [y, x] + word[q + 1:run] + [x, v, y] + word[run:]
    side = side[:q] + [flag, flag] + side[q + 1:run] + [not flag] * 3 + side[run:]
    return word, side, x, y


def _arc_of(side: Sequence[bool]) -> Tuple[int, int]:
    size = len(side)
    start = next(i for i in range(size) if side[i] and not side[i - 1])
    return start, sum(side)


def circle_step(
    D: ChordDiagram, arc: Optional[Tuple[int, int]] = None
) -> Optional[Tuple[ChordDiagram, Tuple[int, int], CircleStep]]:
    """
    One rerouting step on the smallest non-crossing chord

    Args:
        D: chord diagram, positions taken as written (not canonicalized)
        arc: (start, length), default the first half of the positions

    Returns:
        tuple: (new diagram, arc in its positions, step record), or None when
        every chord already crosses the arc
    """
    word, side = list(D.word), arc_sides(D, arc)
    pending = _non_crossing(word, side)
    if not pending:
        return None
    v = pending[0]
    word, side, x, y = _reroute(word, side, v, _fresh_names(set(D.chords())))
    after = _non_crossing(word, side)
    return ChordDiagram(word), _arc_of(side), CircleStep(v, x, y, len(word) // 2, len(after))


def circle_to_permutation(D: ChordDiagram, arc: Optional[Tuple[int, int]] = None) -> CirclePermutation:
    """
    Turn every non-crossing chord into a crossing one by adding two chords each time

    Args:
        D: chord diagram; the arc refers to positions of D.canonical()
        arc: (start, length) of the arc, default the first half of the positions

    Returns:
        CirclePermutation: permutation of the final diagram, LC/KEEP trace on its
        permutation graph, and the map chord -> permutation vertex
    """
    D = D.canonical()
    originals = D.chords()
    word = list(D.word)
    side = arc_sides(D, arc)
    names = _fresh_names(set(originals))
    steps: List[CircleStep] = []
    pairs: List[Tuple[str, str]] = []
    pending = _non_crossing(word, side)
    while pending:
        v = pending[0]
        word, side, x, y = _reroute(word, side, v, names)
        after = _non_crossing(word, side)
        if len(after) >= len(pending) or len(word) != 2 * (len(pairs) * 2 + len(originals) + 2):
            raise PipelineStageError("circle", f"step on chord {v} did not make progress")
        pairs.append((x, y))
        steps.append(CircleStep(v, x, y, len(word) // 2, len(after)))
        logger.debug("chord %s rerouted, %d non-crossing left", v, len(after))
        pending = after

    word, side, run = _rotate_to_run(word, side, True)
    total = len(word) // 2
    b_index = {word[t]: t + 1 for t in range(run)}
    a_order = word[run:]
    label_map = {}
    pi = [0] * total
    for t, chord in enumerate(a_order):
        i = total - t
        label_map[chord] = i - 1
        pi[i - 1] = b_index[chord]

    trace_steps = []
    for x, y in reversed(pairs):
        trace_steps += [Step.lc(label_map[x]), Step.lc(label_map[y])]
    if pairs:
        trace_steps.append(Step.keep(label_map[c] for c in originals))
    return CirclePermutation(
        tuple(pi), OperationTrace(tuple(trace_steps)), label_map, ChordDiagram(word), tuple(steps)
    )


@dataclass(frozen=True)
class CircleGrid:
    trace: OperationTrace
    grid_order: int
    vertex_map: Dict[str, Tuple[int, int]]
    permutation: CirclePermutation


def circle_to_grid(D: ChordDiagram, arc: Optional[Tuple[int, int]] = None) -> CircleGrid:
    """
    Realize the circle graph of D as a vertex-minor of the 3n x 3n comparability grid

    Returns:
        CircleGrid: trace on CG_{3n} and the grid cell of every chord
    """
    perm = circle_to_permutation(D, arc)
    size = 3 * D.n
    image = embed_permutation_in_grid(perm.pi, size)
    keep = Step.keep(image)
    vertex_map = {chord: grid_coords(image[label], size) for chord, label in perm.label_map.items()
                  if chord in set(D.chords())}
    trace = OperationTrace((keep,)).then(perm.trace)
    return CircleGrid(trace, size, vertex_map, perm)


def verify_circle_permutation(D: ChordDiagram, result: CirclePermutation) -> bool:
    """Replay on the permutation graph and compare with the circle graph exactly"""
    graph, where = replay(permutation_graph(result.pi), result.trace)
    chords = D.chords()
    sequence = [where[result.label_map[c]] for c in chords]
    return induced_on_sequence(graph, sequence) == intersection_graph(D)


def verify_circle_grid(D: ChordDiagram, result: CircleGrid, max_n: Optional[int] = None) -> bool:
    """Replay the trace on CG_{3n} and compare with the circle graph exactly"""
    cap = cap_or_default(max_n, "circle_verify_max_n")
    if D.n > cap:
        raise CapExceeded("verified circle chords", cap, D.n)
    host = comparability_grid(result.grid_order)
    graph, where = replay(host, result.trace)
    sequence = [where[grid_index(*result.vertex_map[c], result.grid_order)] for c in D.chords()]
    return induced_on_sequence(graph, sequence) == intersection_graph(D)


def all_diagrams(n: int) -> List[ChordDiagram]:
    """Every simple n-chord diagram up to rotation, chords named 1..n by first occurrence"""

    def matchings(free: List[int]):
        if not free:
            yield []
            return
        first = free[0]
        for idx in range(1, len(free)):
            rest = free[1:idx] + free[idx + 1:]
            for m in matchings(rest):
                yield [(first, free[idx])] + m

    seen = set()
    out = []
    for matching in matchings(list(range(2 * n))):
        word = [""] * (2 * n)
        for number, (p, q) in enumerate(sorted(matching), start=1):
            word[p] = word[q] = str(number)
        canon = rotation_canonical(ChordDiagram(word))
        if canon.word not in seen:
            seen.add(canon.word)
            out.append(canon)
    return out


def _renamed(D: ChordDiagram) -> ChordDiagram:
    rename = {name: str(i) for i, name in enumerate(D.chords(), start=1)}
    return ChordDiagram([rename[t] for t in D.word])


def rotation_canonical(D: ChordDiagram) -> ChordDiagram:
    """Smallest first-occurrence renaming over all rotations"""
    if not D.word:
        return D
    return min(
        (_renamed(D.rotate(k)) for k in range(len(D.word))),
        key=lambda d: tuple(chord_key(t) for t in d.word),
    )
