"""Graph-level constructions on L(E) and their algebra maps.

Source elimination realizes L(E \\ v) as the full corner p L(E) p,
desingularization embeds L(E) into L(F) for a graph F with no sinks and no
infinite emitters (tails truncated at a fixed depth), and graded matrix rings
M_n(A)(shifts) transport witnesses entrywise.
"""
import logging
from dataclasses import dataclass, field

from errors import (
    DepthTooSmall,
    InternalInvariantBreach,
    IsolatedVertex,
    MultiEntryUnsupported,
    NotApplicable,
    NotASource,
    NotFiniteGraph,
    NotHomogeneous,
    NotIsolated,
    ZeroHasNoDegree,
)
from graph import RESERVED_PREFIX, DirectedGraph, VertexKind
from linsolve import express_in_span
from lpa import LeavittPathAlgebra, WeightGrading


class Embedding:
    """An algebra map L(domain graph) -> L(codomain graph) given on generators.

    Args:
        domain (LeavittPathAlgebra): Source algebra.
        codomain (LeavittPathAlgebra): Target algebra, same field.
        vertex_image (dict): vertex -> Element.
        edge_image (dict): edge -> Element.
        ghost_image (dict): edge -> Element, the image of e*.
    """

    def __init__(self, domain, codomain, vertex_image, edge_image, ghost_image):
        self.domain = domain
        self.codomain = codomain
        self.vertex_image = dict(vertex_image)
        self.edge_image = dict(edge_image)
        self.ghost_image = dict(ghost_image)
        self._cache = {}

    @classmethod
    def inclusion(cls, domain, codomain):
        """Sends every generator of ``domain`` to the generator of the same name."""
        g = domain.graph
        return cls(
            domain,
            codomain,
            {v: codomain.vertex(v) for v in g.vertices},
            {e: codomain.edge(e) for e in g.edges},
            {e: codomain.ghost(e) for e in g.edges},
        )

    @property
    def domain_graph(self):
        return self.domain.graph

    @property
    def codomain_graph(self):
        return self.codomain.graph

    def image_of_monomial(self, m):
        if m not in self._cache:
            image = self.vertex_image[m.mu.start]
            for e in m.mu.edges:
                image = image * self.edge_image[e]
            for e in reversed(m.nu.edges):
                image = image * self.ghost_image[e]
            self._cache[m] = image
        return self._cache[m]

    def apply(self, x):
        if x.algebra != self.domain:
            raise NotApplicable("element is not in the domain of the embedding")
        total = self.codomain.zero()
        for m, c in x.terms.items():
            total = total + self.image_of_monomial(m).scale(c)
        return total

    def __call__(self, x):
        return self.apply(x)

    def check_relations(self):
        """Evaluates every defining relation of the domain on the images.

        Returns:
            list[str]: Descriptions of the failed relation instances.
        """
        g = self.domain.graph
        V, E, G = self.vertex_image, self.edge_image, self.ghost_image
        zero = self.codomain.zero()
        failures = []
        for v in g.vertices:
            for w in g.vertices:
                expected = V[v] if v == w else zero
                if V[v] * V[w] != expected:
                    failures.append(f"vertex product {v}*{w}")
        for e in g.edges:
            s, r = g.source_of(e), g.range_of(e)
            if V[s] * E[e] != E[e] or E[e] * V[r] != E[e]:
                failures.append(f"s({e}) {e} = {e} = {e} r({e})")
            if V[r] * G[e] != G[e] or G[e] * V[s] != G[e]:
                failures.append(f"r({e}) {e}* = {e}* = {e}* s({e})")
            for f in g.edges:
                expected = V[r] if e == f else zero
                if G[e] * E[f] != expected:
                    failures.append(f"{e}* {f}")
        for v in g.regular_vertices():
            total = zero
            for e in g.out_edges(v):
                total = total + E[e] * G[e]
            if total != V[v]:
                failures.append(f"sum e e* = {v}")
        return failures

    def check_injectivity(self, max_len):
        """Images of distinct domain basis monomials are nonzero and distinct."""
        failures = [f"vertex {v} maps to 0" for v, x in self.vertex_image.items() if not x]
        seen = {}
        for m in self.domain.normal_monomials(max_len):
            image = self.image_of_monomial(m)
            word = self.domain.format_word(m)
            if not image:
                failures.append(f"{word} maps to 0")
            elif image in seen:
                failures.append(f"{word} and {seen[image]} have the same image")
            else:
                seen[image] = word
        return failures

    def check_degrees(self, grading):
        """Canonical degree of every generator image against ``grading`` on the domain."""
        g = self.domain.graph
        failures = []
        expected = [(v, self.vertex_image[v], 0) for v in g.vertices]
        expected += [(e, self.edge_image[e], grading.weights[e]) for e in g.edges]
        expected += [(f"{e}^*", self.ghost_image[e], -grading.weights[e]) for e in g.edges]
        for name, image, degree in expected:
            if not image or not image.is_homogeneous() or image.degree() != degree:
                failures.append(f"{name}: expected degree {degree}, got {sorted(image.degrees())}")
        return failures

    def check_corner(self, p, max_len):
        """Images of domain monomials of length <= max_len lie in p L p."""
        return [
            self.domain.format_word(m)
            for m in self.domain.normal_monomials(max_len)
            if p * self.image_of_monomial(m) * p != self.image_of_monomial(m)
        ]

    def check_corner_span(self, p, max_len):
        """p m p for codomain monomials m of length <= max_len lies in the span of images."""
        one = self.codomain.field.one
        spanning = [self.image_of_monomial(m) for m in self.domain.normal_monomials(max_len)]
        failures = []
        for m in self.codomain.normal_monomials(max_len):
            x = p * self.codomain.element({m: one}) * p
            if x and express_in_span(x, spanning) is None:
                failures.append(self.codomain.format_word(m))
        return failures

    def map_lines(self):
        """``generator => image`` lines in canonical element syntax."""
        g = self.domain.graph
        lines = [f"{v} => {self.vertex_image[v]}" for v in g.vertices]
        lines += [f"{e} => {self.edge_image[e]}" for e in g.edges]
        lines += [f"{e}^* => {self.ghost_image[e]}" for e in g.edges]
        return lines


@dataclass
class SourceRemoval:
    """L(E \\ v) as the corner p L(E) p, with the fullness certificate of p.

    ``certificate`` maps each out-edge f of v to f r(f) f*; these terms sum to v.
    """

    vertex: str
    graph: DirectedGraph
    algebra: LeavittPathAlgebra
    embedding: Embedding
    p: object
    certificate: dict

    def fullness_failures(self):
        original = self.embedding.codomain
        failures = []
        total = original.zero()
        for f, term in self.certificate.items():
            r = original.vertex(original.graph.range_of(f))
            if r * self.p * r != r:
                failures.append(f"r({f}) is not in the ideal generated by p")
            total = total + term
        if total != original.vertex(self.vertex):
            failures.append(f"certificate does not reconstruct {self.vertex}")
        return failures


def remove_source(algebra, v):
    """Deletes the source v and its out-edges.

    Args:
        algebra (LeavittPathAlgebra): L(E).
        v (str): A source of E that emits edges.

    Returns:
        SourceRemoval: The smaller algebra, its embedding into L(E), the idempotent
        p = sum of the remaining vertices and the certificate v = sum f r(f) f*.

    Raises:
        NotASource: If v receives an edge.
        IsolatedVertex: If v emits no edge either.
    """
    g = algebra.graph
    if not g.is_source(v):
        raise NotASource(v)
    if not g.out_edges(v):
        raise IsolatedVertex(v)
    if g.is_infinite_emitter(v):
        raise NotApplicable(f"source {v} is an infinite emitter")
    smaller = LeavittPathAlgebra(g.without_vertices([v]), algebra.field)
    embedding = Embedding.inclusion(smaller, algebra)
    p = algebra.vertex_sum(smaller.graph.vertices)
    certificate = {
        f: algebra.edge(f) * algebra.vertex(g.range_of(f)) * algebra.ghost(f)
        for f in g.out_edges(v)
    }
    logging.info(f"Removed source {v}: {len(smaller.graph.vertices)} vertices remain")
    return SourceRemoval(v, smaller.graph, smaller, embedding, p, certificate)


@dataclass(frozen=True)
class IsolatedSplit:
    """L(E) = K + L(E \\ v) with the copy of K in degree 0."""

    vertex: str
    degree: int = 0


def remove_isolated(graph, v):
    """Deletes the isolated vertex v.

    Returns:
        tuple[DirectedGraph, IsolatedSplit]: The smaller graph and the split record.
    """
    if VertexKind.ISOLATED not in graph.classify_vertex(v):
        raise NotIsolated(v)
    logging.info(f"Removed isolated vertex {v}")
    return graph.without_vertices([v]), IsolatedSplit(v)


def isolated_projection(x, v):
    """Splits x in L(E) along K v + L(E \\ v) for an isolated vertex v.

    Returns:
        tuple: The coefficient of v and the rest of x as an element of L(E \\ v).
    """
    algebra = x.algebra
    smaller_graph, _ = remove_isolated(algebra.graph, v)
    smaller = LeavittPathAlgebra(smaller_graph, algebra.field)
    vertex_monomial = next(iter(algebra.vertex(v).terms))
    rest = {m: c for m, c in x.terms.items() if m != vertex_monomial}
    return x.coefficient(vertex_monomial), smaller.element(rest)


@dataclass(frozen=True)
class Move:
    kind: str
    vertex: str


def remove_all_sources(graph):
    """Removes sources until none is left or a single vertex remains.

    Returns:
        tuple[DirectedGraph, list[Move]]: The final graph and the moves made, in order.
    """
    if graph.infinite_emitters:
        raise NotFiniteGraph("source elimination needs a finite graph")
    moves = []
    while len(graph.vertices) > 1:
        sources = graph.sources()
        if not sources:
            break
        v = sources[0]
        if graph.out_edges(v):
            graph = graph.without_vertices([v])
            moves.append(Move("source", v))
            logging.info(f"Removed source {v}")
        else:
            graph, _ = remove_isolated(graph, v)
            moves.append(Move("isolated", v))
    return graph, moves


def tail_vertex(v, k):
    return f"{RESERVED_PREFIX}{v}:{k}"


def tail_edge(v, kind, k):
    return f"{RESERVED_PREFIX}{v}:{kind}{k}"


@dataclass
class Desingularization:
    """L(E) inside L(F), F built by attaching tails of length ``depth``."""

    graph: DirectedGraph
    algebra: LeavittPathAlgebra
    embedding: Embedding
    edge_degrees: WeightGrading
    depth: int
    original_vertices: list = field(default_factory=list)

    def corner_span_failures(self, max_len):
        """Bounded check that the image of L(E) is the corner nu L(F) nu.

        nu is the sum of the original vertices. Both inclusions are tested on
        normal-form monomials of length <= max_len.

        Returns:
            list[str]: Monomials breaking either inclusion.
        """
        nu = self.algebra.vertex_sum(self.original_vertices)
        return self.embedding.check_corner(nu, max_len) + self.embedding.check_corner_span(nu, max_len)

    def corner_filtration_failures(self, max_len):
        """With nu_n the sum of the first n original vertices, checks
        nu_n L(F) nu_n is contained in nu_{n+1} L(F) nu_{n+1} on basis monomials."""
        F = self.algebra
        one = F.field.one
        failures = []
        for n in range(1, len(self.original_vertices)):
            small = F.vertex_sum(self.original_vertices[:n])
            large = F.vertex_sum(self.original_vertices[: n + 1])
            for m in F.normal_monomials(max_len):
                x = small * F.element({m: one}) * small
                if x and large * x * large != x:
                    failures.append(f"n={n}: {F.format_word(m)}")
        return failures


def desingularize(algebra, depth):
    """Attaches a tail of ``depth`` vertices at each sink and flagged vertex.

    A flagged vertex v0 listing e_1, ..., e_m loses those edges and gets
    g_j: v_{j-1} -> r(e_j); the embedding sends e_i to f_1 ... f_{i-1} g_i, and
    ``edge_degrees`` gives e_i degree i (1 for every other edge), which makes
    the embedding graded.

    Raises:
        DepthTooSmall: If a flagged vertex lists more than ``depth`` edges.
    """
    g = algebra.graph
    if depth < 1:
        raise NotApplicable("depth must be >= 1")
    for v in g.vertices:
        if g.is_infinite_emitter(v) and len(g.out_edges(v)) > depth:
            raise DepthTooSmall(v, len(g.out_edges(v)), depth)

    vertices = list(g.vertices)
    edges = [(e, g.source_of(e), g.range_of(e)) for e in g.edges if not g.is_infinite_emitter(g.source_of(e))]
    substitutes = {}
    weights = {e: 1 for e in g.edges}
    for v in g.vertices:
        if not (g.is_sink(v) or g.is_infinite_emitter(v)):
            continue
        listed = g.out_edges(v) if g.is_infinite_emitter(v) else ()
        chain = [v] + [tail_vertex(v, k) for k in range(1, depth + 1)]
        vertices += chain[1:]
        for k in range(1, depth + 1):
            edges.append((tail_edge(v, "f", k), chain[k - 1], chain[k]))
            if k <= len(listed):
                e = listed[k - 1]
                edges.append((tail_edge(v, "g", k), chain[k - 1], g.range_of(e)))
                substitutes[e] = [tail_edge(v, "f", i) for i in range(1, k)] + [tail_edge(v, "g", k)]
                weights[e] = k

    F = LeavittPathAlgebra(DirectedGraph(vertices, edges), algebra.field)
    edge_image = {}
    for e in g.edges:
        path = F.graph.path(substitutes.get(e, [e]))
        edge_image[e] = F.path_element(path)
    embedding = Embedding(
        algebra,
        F,
        {v: F.vertex(v) for v in g.vertices},
        edge_image,
        {e: x.star() for e, x in edge_image.items()},
    )
    logging.info(f"Desingularized at depth {depth}: {len(vertices)} vertices, {len(edges)} edges")
    return Desingularization(F.graph, F, embedding, WeightGrading(weights, g), depth, list(g.vertices))


class GradedMatrix:
    """An n x n matrix over L(E) in M_n(L(E))(shifts).

    Entries are kept sparsely as ``{(i, j): Element}`` with 1-based indices, as
    in e_ij. The homogeneous part of degree k has entry (i, j) of degree
    k + shifts[j] - shifts[i].
    """

    def __init__(self, algebra, shifts, entries):
        self.algebra = algebra
        self.shifts = tuple(shifts)
        n = len(self.shifts)
        self.entries = {}
        for (i, j), x in entries.items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise NotApplicable(f"entry ({i}, {j}) outside a {n}x{n} matrix")
            if x:
                self.entries[(i, j)] = x

    @property
    def n(self):
        return len(self.shifts)

    def _check(self, other):
        if self.algebra != other.algebra or self.shifts != other.shifts:
            raise NotApplicable("matrices over different graded matrix rings")

    def __add__(self, other):
        self._check(other)
        entries = dict(self.entries)
        for key, x in other.entries.items():
            entries[key] = entries[key] + x if key in entries else x
        return GradedMatrix(self.algebra, self.shifts, entries)

    def __mul__(self, other):
        self._check(other)
        entries = {}
        for (i, j), x in self.entries.items():
            for (k, l), y in other.entries.items():
                if j == k:
                    product = x * y
                    entries[(i, l)] = entries[(i, l)] + product if (i, l) in entries else product
        return GradedMatrix(self.algebra, self.shifts, entries)

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self.algebra == other.algebra and self.shifts == other.shifts and self.entries == other.entries

    def __str__(self):
        if not self.entries:
            return "0"
        return " + ".join(f"e{i},{j}({x})" for (i, j), x in sorted(self.entries.items()))


class GradedMatrixRing:
    def __init__(self, algebra, n, shifts=None):
        shifts = tuple(shifts) if shifts is not None else (0,) * n
        if len(shifts) != n:
            raise NotApplicable(f"{len(shifts)} shifts for a {n}x{n} matrix ring")
        self.algebra = algebra
        self.n = n
        self.shifts = shifts

    def matrix(self, entries):
        return GradedMatrix(self.algebra, self.shifts, entries)

    def unit(self, i, j, x):
        """The matrix e_ij(x)."""
        return self.matrix({(i, j): x})

    def identity(self):
        one = self.algebra.one()
        return self.matrix({(i, i): one for i in range(1, self.n + 1)})

    def zero(self):
        return self.matrix({})


def matrix_ring(algebra, n, shifts=None):
    return GradedMatrixRing(algebra, n, shifts)


def matrix_degree(m, grading=None):
    """The degree k with every entry (i, j) in A_{k + shifts[j] - shifts[i]}.

    Raises:
        ZeroHasNoDegree: For the zero matrix.
        NotHomogeneous: If an entry is not homogeneous or entries disagree.
    """
    if not m.entries:
        raise ZeroHasNoDegree()
    degrees = set()
    for (i, j), x in m.entries.items():
        degrees.add(x.degree(grading) - m.shifts[j - 1] + m.shifts[i - 1])
    if len(degrees) != 1:
        raise NotHomogeneous(degrees)
    return degrees.pop()


def transport_witness(m, witness_fn):
    """Turns a witness b of a (a b a = a) into the witness e_ji(b) of e_ij(a).

    Raises:
        MultiEntryUnsupported: Unless m has exactly one nonzero entry.
    """
    if len(m.entries) != 1:
        raise MultiEntryUnsupported(len(m.entries))
    matrix_degree(m)
    (i, j), a = next(iter(m.entries.items()))
    y = GradedMatrix(m.algebra, m.shifts, {(j, i): witness_fn(a)})
    if m * y * m != m:
        raise InternalInvariantBreach(f"transported witness failed for {m}")
    return y
