import enum
import hashlib
import logging
import re
from dataclasses import dataclass

import networkx as nx

from errors import (
    DanglingEndpoint,
    DuplicateIdentifier,
    GraphSyntaxError,
    ReservedIdentifier,
    UnknownPath,
    UnknownVertex,
)

RESERVED_PREFIX = "~tail:"

# . * + ^ ( ) belong to the element syntax and stay out of identifiers.
IDENTIFIER_PATTERN = r"(?!.*->)[^\s:#.*+^()]+"
_IDENTIFIER = re.compile(rf"^{IDENTIFIER_PATTERN}$")
_RESERVED_IDENTIFIER = re.compile(r"^~tail:[A-Za-z0-9_:]+$")
_VERTEX_LINE = re.compile(r"^vertex\s+(\S+)$")
_EDGE_LINE = re.compile(r"^edge\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_INFINITE_LINE = re.compile(r"^infinite\s+(\S+)$")


class VertexKind(str, enum.Enum):
    SOURCE = "source"
    SINK = "sink"
    REGULAR = "regular"
    INFINITE_EMITTER = "infinite_emitter"
    ISOLATED = "isolated"


@dataclass(frozen=True)
class Path:
    """A path in a graph: a start vertex, a sequence of edges and its end vertex.

    The empty edge sequence is the trivial path at ``start``. Paths are only
    built through ``DirectedGraph.path`` / ``DirectedGraph.trivial`` so the
    composability of consecutive edges is checked once.
    """

    start: str
    edges: tuple = ()
    end: str = None

    def __len__(self):
        return len(self.edges)

    @property
    def is_trivial(self):
        return not self.edges

    @property
    def last_edge(self):
        return self.edges[-1] if self.edges else None

    def concat(self, other):
        """Returns ``self`` followed by ``other``; the paths must meet."""
        if self.end != other.start:
            raise UnknownPath(self.edges + other.edges, "paths do not compose")
        return Path(self.start, self.edges + other.edges, other.end)

    def __str__(self):
        return ".".join(self.edges) if self.edges else self.start


class DirectedGraph:
    """A finite directed graph E = (E0, E1, r, s) with flagged infinite emitters.

    Vertices and edges keep their declaration order; that order is the single
    deterministic order every other module uses (out-edge order, distinguished
    edge, path and monomial order). A flagged vertex lists a finite truncation
    of an infinite family of out-edges and is never regular.
    """

    def __init__(self, vertices, edges, infinite_emitters=()):
        """Builds and validates a graph.

        Args:
            vertices (Iterable[str]): Vertex identifiers in declaration order.
            edges (Iterable[tuple[str, str, str]]): ``(edge, source, range)``
                triples in declaration order.
            infinite_emitters (Iterable[str]): Vertices flagged as infinite emitters.
        """
        self.vertices = tuple(vertices)
        self._vertex_index = {}
        for v in self.vertices:
            if v in self._vertex_index:
                raise DuplicateIdentifier(None, v)
            self._vertex_index[v] = len(self._vertex_index)

        self._source = {}
        self._range = {}
        self._edge_index = {}
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for e, src, dst in edges:
            if e in self._edge_index or e in self._vertex_index:
                raise DuplicateIdentifier(None, e)
            for endpoint in (src, dst):
                if endpoint not in self._vertex_index:
                    raise DanglingEndpoint(None, endpoint)
            self._edge_index[e] = len(self._edge_index)
            self._source[e] = src
            self._range[e] = dst
            self._out[src].append(e)
            self._in[dst].append(e)
        self.edges = tuple(self._edge_index)
        self._out = {v: tuple(es) for v, es in self._out.items()}
        self._in = {v: tuple(es) for v, es in self._in.items()}

        self.infinite_emitters = frozenset(infinite_emitters)
        for v in self.infinite_emitters:
            if v not in self._vertex_index:
                raise UnknownVertex(v)
            if not self._out[v]:
                raise GraphSyntaxError(None, f"infinite emitter {v} lists no out-edges")

    # structure

    def source_of(self, edge):
        try:
            return self._source[edge]
        except KeyError:
            raise UnknownPath((edge,), "unknown edge") from None

    def range_of(self, edge):
        try:
            return self._range[edge]
        except KeyError:
            raise UnknownPath((edge,), "unknown edge") from None

    def has_vertex(self, v):
        return v in self._vertex_index

    def has_edge(self, e):
        return e in self._edge_index

    def _check_vertex(self, v):
        if v not in self._vertex_index:
            raise UnknownVertex(v)

    def out_edges(self, v):
        self._check_vertex(v)
        return self._out[v]

    def in_edges(self, v):
        self._check_vertex(v)
        return self._in[v]

    def is_infinite_emitter(self, v):
        self._check_vertex(v)
        return v in self.infinite_emitters

    def is_sink(self, v):
        return not self.out_edges(v) and v not in self.infinite_emitters

    def is_source(self, v):
        return not self.in_edges(v)

    def is_regular(self, v):
        return bool(self.out_edges(v)) and v not in self.infinite_emitters

    def distinguished_edge(self, v):
        """The last listed out-edge of a regular vertex, None for singular vertices."""
        return self._out[v][-1] if self.is_regular(v) else None

    def classify_vertex(self, v):
        """Returns every label that applies to ``v``.

        Args:
            v (str): A vertex of the graph.

        Returns:
            frozenset[VertexKind]: e.g. ``{SOURCE, REGULAR}`` for the first vertex
            of a line, ``{SINK, SOURCE, ISOLATED}`` for an isolated vertex.
        """
        kinds = set()
        if self.is_sink(v):
            kinds.add(VertexKind.SINK)
        if self.is_source(v):
            kinds.add(VertexKind.SOURCE)
        if VertexKind.SINK in kinds and VertexKind.SOURCE in kinds:
            kinds.add(VertexKind.ISOLATED)
        if v in self.infinite_emitters:
            kinds.add(VertexKind.INFINITE_EMITTER)
        elif self.is_regular(v):
            kinds.add(VertexKind.REGULAR)
        return frozenset(kinds)

    def sources(self):
        return [v for v in self.vertices if self.is_source(v)]

    def sinks(self):
        return [v for v in self.vertices if self.is_sink(v)]

    def regular_vertices(self):
        return [v for v in self.vertices if self.is_regular(v)]

    def to_networkx(self):
        digraph = nx.MultiDiGraph()
        digraph.add_nodes_from(self.vertices)
        for e in self.edges:
            digraph.add_edge(self._source[e], self._range[e], key=e)
        return digraph

    def is_acyclic(self):
        """True iff the graph has no closed path (loops count as cycles)."""
        return nx.is_directed_acyclic_graph(self.to_networkx())

    # paths

    def trivial(self, v):
        self._check_vertex(v)
        return Path(v, (), v)

    def path(self, edges, start=None):
        """Builds a validated path.

        Args:
            edges (Sequence[str]): Edge identifiers; empty for a trivial path.
            start (str, optional): Start vertex, required for a trivial path.

        Returns:
            Path: The path.

        Raises:
            UnknownPath: If an edge is unknown, edges do not compose, or ``start``
                disagrees with the first edge.
        """
        edges = tuple(edges)
        if not edges:
            if start is None:
                raise UnknownPath(edges, "trivial path needs a start vertex")
            if start not in self._vertex_index:
                raise UnknownPath(edges, f"unknown vertex {start}")
            return Path(start, (), start)
        for e in edges:
            if e not in self._edge_index:
                raise UnknownPath(edges, f"unknown edge {e}")
        for prev, curr in zip(edges, edges[1:]):
            if self._range[prev] != self._source[curr]:
                raise UnknownPath(edges, f"r({prev}) != s({curr})")
        first = self._source[edges[0]]
        if start is not None and start != first:
            raise UnknownPath(edges, f"path does not start at {start}")
        return Path(first, edges, self._range[edges[-1]])

    def extend(self, path, edge):
        """Appends ``edge`` to ``path``; ``edge`` must start where ``path`` ends."""
        if self.source_of(edge) != path.end:
            raise UnknownPath(path.edges + (edge,), f"r(path) != s({edge})")
        return Path(path.start, path.edges + (edge,), self._range[edge])

    def prefix(self, path, length):
        """The initial segment of ``path`` with ``length`` edges."""
        if length == 0:
            return Path(path.start, (), path.start)
        return Path(path.start, path.edges[:length], self._range[path.edges[length - 1]])

    def suffix(self, path, length):
        """The path left after removing the first ``length`` edges."""
        if length == len(path.edges):
            return Path(path.end, (), path.end)
        rest = path.edges[length:]
        return Path(self._source[rest[0]], rest, path.end)

    def path_key(self, path):
        return (
            len(path.edges),
            tuple(self._edge_index[e] for e in path.edges),
            self._vertex_index[path.start],
        )

    def enumerate_paths(self, max_len):
        """Lists all paths of length at most ``max_len``.

        Trivial paths come first in vertex order, then paths grouped by length
        and ordered lexicographically by edge declaration order.

        Args:
            max_len (int): Maximum path length (>= 0).

        Returns:
            list[Path]: The paths.
        """
        if max_len < 0:
            raise ValueError("max_len must be >= 0")
        layer = [Path(v, (), v) for v in self.vertices]
        paths = list(layer)
        for _ in range(max_len):
            layer = [
                Path(p.start, p.edges + (e,), self._range[e])
                for p in layer
                for e in self._out[p.end]
            ]
            if not layer:
                break
            paths.extend(layer)
        return paths

    # derived graphs

    def without_vertices(self, removed):
        """Returns the graph with ``removed`` vertices and all incident edges deleted."""
        removed = set(removed)
        return DirectedGraph(
            [v for v in self.vertices if v not in removed],
            [
                (e, self._source[e], self._range[e])
                for e in self.edges
                if self._source[e] not in removed and self._range[e] not in removed
            ],
            [v for v in self.infinite_emitters if v not in removed],
        )

    def relabeled(self, vertex_map, edge_map):
        """Returns an isomorphic copy with renamed vertices and edges."""
        return DirectedGraph(
            [vertex_map[v] for v in self.vertices],
            [(edge_map[e], vertex_map[self._source[e]], vertex_map[self._range[e]]) for e in self.edges],
            [vertex_map[v] for v in self.infinite_emitters],
        )

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and self._source == other._source
            and self._range == other._range
            and self.infinite_emitters == other.infinite_emitters
        )

    def __hash__(self):
        return hash((self.vertices, tuple((e, self._source[e], self._range[e]) for e in self.edges)))

    def __repr__(self):
        return f"DirectedGraph(vertices={len(self.vertices)}, edges={len(self.edges)})"


def _check_identifier(identifier, line, allow_reserved):
    if identifier.startswith(RESERVED_PREFIX):
        if not allow_reserved:
            raise ReservedIdentifier(line, identifier)
        if not _RESERVED_IDENTIFIER.match(identifier):
            raise GraphSyntaxError(line, f"invalid identifier {identifier!r}")
    elif not _IDENTIFIER.match(identifier):
        raise GraphSyntaxError(line, f"invalid identifier {identifier!r}")


def parse_graph(text, allow_reserved=False):
    """Parses the line-oriented graph file format.

    Lines are ``vertex <id>``, ``edge <id>: <src> -> <dst>``, ``infinite <id>``;
    ``#`` starts a comment. Parsing is strict: endpoints must be declared
    vertices, identifiers are unique across vertices and edges, and the
    ``~tail:`` prefix is reserved for generated graphs.

    Args:
        text (str): The file contents.
        allow_reserved (bool): Accept ``~tail:`` identifiers (generated graphs).

    Returns:
        DirectedGraph: The parsed graph.
    """
    vertices = []
    edges = []
    flagged = []
    seen = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if match := _VERTEX_LINE.match(line):
            vid = match.group(1)
            _check_identifier(vid, number, allow_reserved)
            if vid in seen:
                raise DuplicateIdentifier(number, vid)
            seen.add(vid)
            vertices.append(vid)
        elif match := _EDGE_LINE.match(line):
            eid, src, dst = match.groups()
            _check_identifier(eid, number, allow_reserved)
            if eid in seen:
                raise DuplicateIdentifier(number, eid)
            seen.add(eid)
            edges.append((number, eid, src, dst))
        elif match := _INFINITE_LINE.match(line):
            flagged.append((number, match.group(1)))
        else:
            raise GraphSyntaxError(number, f"cannot parse {line!r}")

    declared = set(vertices)
    for number, eid, src, dst in edges:
        for endpoint in (src, dst):
            if endpoint not in declared:
                raise DanglingEndpoint(number, endpoint)
    emitting = {src for _, _, src, _ in edges}
    for number, vid in flagged:
        if vid not in declared:
            raise DanglingEndpoint(number, vid)
        if vid not in emitting:
            raise GraphSyntaxError(number, f"infinite emitter {vid} lists no out-edges")

    graph = DirectedGraph(vertices, [(e, s, r) for _, e, s, r in edges], [v for _, v in flagged])
    logging.debug(f"Parsed graph with {len(graph.vertices)} vertices and {len(graph.edges)} edges")
    return graph


def load_graph(path, allow_reserved=False):
    """Reads and parses a UTF-8 graph file.

    Returns:
        tuple[DirectedGraph, str]: The graph and the md5 hex digest of the file text.
    """
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return parse_graph(text, allow_reserved=allow_reserved), hashlib.md5(text.encode("utf-8")).hexdigest()


def format_graph(graph):
    """Writes ``graph`` in the graph file format (declaration order preserved)."""
    lines = [f"vertex {v}" for v in graph.vertices]
    lines += [f"edge {e}: {graph.source_of(e)} -> {graph.range_of(e)}" for e in graph.edges]
    lines += [f"infinite {v}" for v in graph.vertices if v in graph.infinite_emitters]
    return "\n".join(lines) + "\n"
