"""
Codec Module - Text formats for graphs (.ogr), traces (.trc), diagrams (.cwd) and constellations (.cst)
"""

import logging
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

from circle import ChordDiagram
from constellation import Augmentation, Constellation
from errors import InvalidOperation, ParseError
from graph_core import OperationTrace, OrderedGraph, Step, StepKind

logger = logging.getLogger(__name__)


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    """Non-blank, non-comment lines with 1-based line numbers"""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, raw.rstrip()


def _column(raw: str, token: str) -> int:
    return raw.find(token) + 1 if token in raw else 1


def _int(token: str, number: int, raw: str, source: Optional[str]) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got '{token}'", number, _column(raw, token), source) from None
    if value < 0:
        raise ParseError(f"negative vertex {value}", number, _column(raw, token), source)
    return value


# graphs


def parse_graph(text: str, source: Optional[str] = None) -> OrderedGraph:
    """
    Parse the .ogr format: a line with n, then n rows of n '0'/'1' characters

    Raises:
        ParseError: with the 1-based line and column of the first problem
    """
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty graph file", 1, 1, source)
    number, raw = lines[0]
    n = _int(raw.strip(), number, raw, source)
    rows_text = lines[1:]
    if len(rows_text) != n:
        where = rows_text[n][0] if len(rows_text) > n else (rows_text[-1][0] + 1 if rows_text else number + 1)
        raise ParseError(f"expected {n} adjacency rows, got {len(rows_text)}", where, 1, source)
    rows = []
    for v, (number, raw) in enumerate(rows_text):
        row_text = raw.strip()
        offset = raw.find(row_text)
        if len(row_text) != n:
            raise ParseError(f"row {v} has {len(row_text)} entries, expected {n}", number, offset + 1, source)
        mask = 0
        for u, ch in enumerate(row_text):
            if ch not in "01":
                raise ParseError(f"unexpected character '{ch}'", number, offset + u + 1, source)
            if ch == "1":
                mask |= 1 << u
        if (mask >> v) & 1:
            raise ParseError(f"loop at vertex {v}", number, offset + v + 1, source)
        rows.append(mask)
    for v, row in enumerate(rows):
        for u in range(n):
            if ((row >> u) & 1) != ((rows[u] >> v) & 1):
                number, raw = rows_text[v]
                raise ParseError(f"adjacency not symmetric at ({v}, {u})", number, raw.find(raw.strip()) + u + 1, source)
    return OrderedGraph(n, rows, validate=False)


def serialize_graph(G: OrderedGraph) -> str:
    lines = [str(G.n)]
    for v in range(G.n):
        lines.append("".join("1" if G.has_edge(v, u) else "0" for u in range(G.n)))
    return "\n".join(lines) + "\n"


# traces

_ARITY = {StepKind.LC: 1, StepKind.PIV: 2, StepKind.DEL: 1}


def parse_trace(text: str, source: Optional[str] = None) -> OperationTrace:
    """Parse one step per line: LC v, PIV u v, DEL v, KEEP v1 .. vk"""
    steps: List[Step] = []
    for number, raw in _lines(text):
        tokens = raw.split()
        try:
            kind = StepKind(tokens[0].upper())
        except ValueError:
            raise ParseError(f"unknown step '{tokens[0]}'", number, _column(raw, tokens[0]), source) from None
        args = [_int(t, number, raw, source) for t in tokens[1:]]
        arity = _ARITY.get(kind)
        if arity is not None and len(args) != arity:
            raise ParseError(f"{kind.value} takes {arity} vertex argument(s), got {len(args)}", number, 1, source)
        if kind == StepKind.LC:
            steps.append(Step.lc(args[0]))
        elif kind == StepKind.PIV:
            if args[0] == args[1]:
                raise ParseError("pivot needs two distinct vertices", number, 1, source)
            steps.append(Step.pivot(args[0], args[1]))
        elif kind == StepKind.DEL:
            steps.append(Step.delete(args[0]))
        else:
            if len(set(args)) != len(args):
                raise ParseError("KEEP lists a vertex twice", number, 1, source)
            steps.append(Step.keep(args))
    return OperationTrace(tuple(steps))


def serialize_trace(trace: OperationTrace) -> str:
    return "".join(f"{step}\n" for step in trace)


# chord diagrams


def parse_diagram(text: str, source: Optional[str] = None) -> ChordDiagram:
    """Single line of 2n whitespace-separated chord names read clockwise"""
    lines = list(_lines(text))
    if len(lines) > 1:
        raise ParseError("a diagram is a single line", lines[1][0], 1, source)
    if not lines:
        return ChordDiagram([])
    number, raw = lines[0]
    try:
        return ChordDiagram(raw.split())
    except InvalidOperation as e:
        raise ParseError(str(e), number, 1, source) from None


def serialize_diagram(D: ChordDiagram) -> str:
    return " ".join(D.word) + "\n"


# constellations


def parse_constellation(text: str, source: Optional[str] = None) -> Union[Constellation, Augmentation]:
    """
    Parse the .cst format

    Lines: header "n m k"; "H" with the hubs; "K" with the pattern
    vertices; one "W h w1 .. wk" per hub; one "E u v" per pattern edge.
    An augmentation adds "AUG x y", "X1 .." and "X2 ..".

    Returns:
        Constellation, or Augmentation when an AUG line is present
    """
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty constellation file", 1, 1, source)
    number, raw = lines[0]
    header = raw.split()
    if len(header) != 3:
        raise ParseError("header must be 'n m k'", number, 1, source)
    n, m, k = (_int(t, number, raw, source) for t in header)
    hubs: Optional[List[int]] = None
    pattern: Optional[List[int]] = None
    leaves = {}
    edges = []
    aug: Optional[Tuple[int, int]] = None
    links = {}
    for number, raw in lines[1:]:
        tokens = raw.split()
        tag, args = tokens[0].upper(), [_int(t, number, raw, source) for t in tokens[1:]]
        if tag == "H":
            hubs = args
        elif tag == "K":
            pattern = args
        elif tag == "W":
            if not args:
                raise ParseError("W line needs a hub", number, 1, source)
            if args[0] in leaves:
                raise ParseError(f"leaves of hub {args[0]} listed twice", number, 1, source)
            leaves[args[0]] = args[1:]
        elif tag == "E":
            if len(args) != 2:
                raise ParseError("E line needs two hubs", number, 1, source)
            edges.append((args[0], args[1]))
        elif tag == "AUG":
            if len(args) != 2:
                raise ParseError("AUG line needs x and y", number, 1, source)
            aug = (args[0], args[1])
        elif tag in ("X1", "X2"):
            links[tag] = tuple(args)
        else:
            raise ParseError(f"unknown line tag '{tokens[0]}'", number, 1, source)
    if hubs is None or pattern is None:
        raise ParseError("missing H or K line", lines[-1][0], 1, source)
    if sorted(leaves) != sorted(hubs):
        raise ParseError("every hub needs exactly one W line", lines[-1][0], 1, source)
    C = Constellation.build(leaves, pattern, edges)
    if (C.n, C.m) != (n, m) or any(len(w) != k for w in C.leaves.values()):
        raise ParseError(f"header says ({n}, {m}, {k}) but the body does not match", lines[0][0], 1, source)
    if aug is None:
        if links:
            raise ParseError("X1/X2 lines need an AUG line", lines[-1][0], 1, source)
        return C
    if set(links) != {"X1", "X2"}:
        raise ParseError("an augmentation needs both X1 and X2", lines[-1][0], 1, source)
    return Augmentation(C, aug[0], aug[1], tuple(sorted(links["X1"])), tuple(sorted(links["X2"])))


def serialize_constellation(obj: Union[Constellation, Augmentation]) -> str:
    C = obj.constellation if isinstance(obj, Augmentation) else obj
    lines = [f"{C.n} {C.m} {C.k}", "H " + " ".join(map(str, C.hubs)), "K " + " ".join(map(str, C.pattern_vertices))]
    for h in C.hubs:
        lines.append(" ".join(["W", str(h)] + [str(w) for w in C.leaves[h]]))
    for u, v in sorted(C.pattern_edges):
        lines.append(f"E {u} {v}")
    if isinstance(obj, Augmentation):
        lines.append(f"AUG {obj.x} {obj.y}")
        lines.append("X1 " + " ".join(map(str, obj.X1)))
        lines.append("X2 " + " ".join(map(str, obj.X2)))
    return "\n".join(lines) + "\n"


# files

_PARSERS = {
    ".ogr": parse_graph,
    ".trc": parse_trace,
    ".cwd": parse_diagram,
    ".cst": parse_constellation,
}


def load(path: Union[str, Path]):
    """Parse a file by its extension"""
    path = Path(path)
    parser = _PARSERS.get(path.suffix)
    if parser is None:
        raise ParseError(f"unknown file type '{path.suffix}'", 1, 1, str(path))
    return parser(path.read_text(encoding="utf-8"), source=str(path))


def serialize(obj) -> str:
    """Text form of any object the package reads back with load"""
    if isinstance(obj, OrderedGraph):
        text = serialize_graph(obj)
    elif isinstance(obj, OperationTrace):
        text = serialize_trace(obj)
    elif isinstance(obj, ChordDiagram):
        text = serialize_diagram(obj)
    elif isinstance(obj, (Constellation, Augmentation)):
        text = serialize_constellation(obj)
    else:
        raise InvalidOperation(f"cannot serialize {type(obj).__name__}")
    return text


def save(path: Union[str, Path], obj) -> Path:
    path = Path(path)
    text = serialize(obj)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.debug("wrote %s", path)
    return path


__all__ = [
    "parse_graph",
    "serialize_graph",
    "parse_trace",
    "serialize_trace",
    "parse_diagram",
    "serialize_diagram",
    "parse_constellation",
    "serialize_constellation",
    "serialize",
    "load",
    "save",
]
