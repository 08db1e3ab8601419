"""Exact arithmetic in the Leavitt path algebra L_K(E) of a finite graph.

Elements are finite maps from normal-form monomials mu nu* to nonzero scalars of
a sympy field domain (``QQ`` or ``GF(p)``). Products are reduced with two
oriented rules: e* f -> delta_{e,f} r(e), and, at every regular vertex v with
out-edges e_1 < ... < e_k, e_k e_k* -> v - sum_{i<k} e_i e_i*.
"""
import logging
import re
from dataclasses import dataclass

from sympy.polys.domains import QQ

from errors import (
    AlgebraMismatch,
    ElementSyntaxError,
    NotHomogeneous,
    UnknownGenerator,
    ZeroHasNoDegree,
)
from graph import IDENTIFIER_PATTERN, Path

_SCALAR = r"\(\s*[-+]?\s*\d+(?:\s*/\s*\d+)?\s*\)|[-+]?\d+(?:/\d+)?"
_TERM = re.compile(rf"^(?:(?P<scalar>{_SCALAR})\s*\*\s*)?(?P<word>[^\s*+()][^\s+()]*)$")
_SCALAR_PARTS = re.compile(r"^\(?\s*(?P<num>[-+]?\s*\d+)(?:\s*/\s*(?P<den>\d+))?\s*\)?$")
_FACTOR = re.compile(rf"^(?P<name>~tail:[A-Za-z0-9_:]+|{IDENTIFIER_PATTERN})(?P<ghost>\^\*)?$")


@dataclass(frozen=True)
class Monomial:
    """The monomial mu nu* for paths with r(mu) = r(nu)."""

    mu: Path
    nu: Path

    @property
    def length(self):
        return len(self.mu) + len(self.nu)

    @property
    def left_vertex(self):
        return self.mu.start

    @property
    def right_vertex(self):
        return self.nu.start

    def star(self):
        return Monomial(self.nu, self.mu)


class WeightGrading:
    """A Z-grading of L(E) from a weight map on edges.

    ``weight(e*) = -weight(e)`` and vertices have weight 0. The canonical
    grading is the weight map that is 1 on every edge.
    """

    def __init__(self, weights, graph=None):
        """Initializes the grading.

        Args:
            weights (dict[str, int]): Degree of each edge.
            graph (DirectedGraph, optional): When given, every edge must have a weight.

        Raises:
            ValueError: If ``graph`` has an edge without a weight.
        """
        self.weights = dict(weights)
        if graph is not None:
            missing = [e for e in graph.edges if e not in self.weights]
            if missing:
                raise ValueError(f"weight map is not total, missing {missing}")

    @classmethod
    def canonical(cls, graph):
        """Weight 1 on every edge, so the degree of mu nu* is |mu| - |nu|."""
        return cls({e: 1 for e in graph.edges})

    def path_degree(self, path):
        # trivial paths have degree 0
        return sum(self.weights[e] for e in path.edges)

    def monomial_degree(self, monomial):
        """deg(mu nu*) = deg(mu) - deg(nu)."""
        return self.path_degree(monomial.mu) - self.path_degree(monomial.nu)

    def __eq__(self, other):
        return isinstance(other, WeightGrading) and self.weights == other.weights

    def __hash__(self):
        return hash(tuple(sorted(self.weights.items())))

    def __repr__(self):
        return f"WeightGrading({self.weights})"


def monomial_degree(monomial, grading=None):
    """Degree of a monomial; the canonical grading is used when ``grading`` is None."""
    if grading is None:
        return len(monomial.mu) - len(monomial.nu)
    return grading.monomial_degree(monomial)


class Element:
    """An immutable member of L(E), always in normal form.

    Use the ``LeavittPathAlgebra`` constructors rather than building one directly.
    """

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self.terms = terms
        self._hash = None

    # K-algebra structure

    def _check(self, other):
        # equal algebras built separately still mix
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatch("elements belong to different algebras")

    def __add__(self, other):
        """Termwise sum; both summands are in normal form, so no rewriting is needed.

        Raises:
            AlgebraMismatch: If ``other`` belongs to another algebra.
        """
        self._check(other)
        zero = self.algebra.field.zero
        terms = dict(self.terms)
        for m, c in other.terms.items():
            total = terms.get(m, zero) + c
            # drop cancelled terms
            if total:
                terms[m] = total
            else:
                terms.pop(m, None)
        return Element(self.algebra, terms)

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiplies every coefficient by ``c``.

        Args:
            c (int | str | field element): Converted with ``LeavittPathAlgebra.scalar``.

        Returns:
            Element: ``c`` times the element; zero when ``c`` is 0 in the field.
        """
        c = self.algebra.scalar(c)
        if not c:
            return self.algebra.zero()
        return Element(self.algebra, {m: c * d for m, d in self.terms.items()})

    def __mul__(self, other):
        # a scalar on the right scales
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        return self.algebra.multiply(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def star(self):
        """The involution mu nu* -> nu mu*, scalars fixed."""
        terms = {}
        for m, c in self.terms.items():
            self.algebra._accumulate(terms, m.star(), c)
        return Element(self.algebra, terms)

    # grading

    def degrees(self, grading=None):
        """The set of degrees of the terms; empty for zero."""
        return {monomial_degree(m, grading) for m in self.terms}

    def degree(self, grading=None):
        """The common degree of all terms.

        Args:
            grading (WeightGrading, optional): Weight grading; canonical when None.

        Returns:
            int: The degree.

        Raises:
            ZeroHasNoDegree: For the zero element.
            NotHomogeneous: If terms have different degrees.
        """
        if not self.terms:
            raise ZeroHasNoDegree()
        degrees = self.degrees(grading)
        if len(degrees) != 1:
            raise NotHomogeneous(degrees)
        return next(iter(degrees))

    def is_homogeneous(self, grading=None):
        # zero counts as homogeneous
        return len(self.degrees(grading)) <= 1

    def homogeneous_components(self, grading=None):
        """Splits the element by degree; the components sum back to the element."""
        parts = {}
        for m, c in self.terms.items():
            parts.setdefault(monomial_degree(m, grading), {})[m] = c
        return {k: Element(self.algebra, parts[k]) for k in sorted(parts)}

    # inspection

    @property
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, monomial):
        """The scalar in front of a normal-form ``monomial``, zero if absent."""
        return self.terms.get(monomial, self.algebra.field.zero)

    def support(self):
        """Monomials with nonzero coefficient, in monomial order."""
        return sorted(self.terms, key=self.algebra.monomial_key)

    @property
    def max_length(self):
        return max((m.length for m in self.terms), default=0)

    def left_vertices(self):
        # s(mu) of every term
        return {m.left_vertex for m in self.terms}

    def right_vertices(self):
        # s(nu) of every term
        return {m.right_vertex for m in self.terms}

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        return self.algebra.format(self)

    def __repr__(self):
        return f"Element({self.algebra.format(self)})"


class LeavittPathAlgebra:
    """L_K(E) for a finite graph E over a sympy field domain K.

    Holds the graph, the coefficient field, and the rewriting machinery that keeps
    every ``Element`` in normal form.
    """

    def __init__(self, graph, field=QQ):
        """Initializes the algebra.

        Args:
            graph (DirectedGraph): The graph E.
            field (Domain): ``sympy.polys.domains.QQ`` or ``GF(p, symmetric=False)``.
        """
        self.graph = graph
        self.field = field
        self._basis_cache = {}

    def __eq__(self, other):
        if not isinstance(other, LeavittPathAlgebra):
            return NotImplemented
        return self is other or (self.graph == other.graph and self.field == other.field)

    def __hash__(self):
        return hash((self.graph, str(self.field)))

    def __repr__(self):
        return f"LeavittPathAlgebra({self.graph!r}, {self.field})"

    # scalars

    def scalar(self, value):
        """Converts an int, a ``num/den`` string or a field element into the field."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        if isinstance(value, int):
            return self.field(value)
        return self.field.convert(value)

    def parse_scalar(self, text):
        match = _SCALAR_PARTS.match(text.strip())
        if not match:
            raise ElementSyntaxError(f"cannot parse scalar {text!r}")
        num = int(match.group("num").replace(" ", ""))
        den = int(match.group("den") or 1)
        p = self.field.characteristic()
        if den == 0 or (p and den % p == 0):
            raise ElementSyntaxError(f"scalar {text!r} is not defined over {self.field}")
        return self.field(num) / self.field(den)

    def format_scalar(self, c):
        value = self.field.to_sympy(c)
        if value.is_Integer and value >= 0:
            return str(value)
        return f"({value})"

    # constructors

    def zero(self):
        return Element(self, {})

    def one(self):
        """The identity of L(E): the sum of all vertices of the finite graph."""
        return self.vertex_sum(self.graph.vertices)

    def vertex_sum(self, vertices):
        one = self.field.one
        return Element(self, {Monomial(self.graph.trivial(v), self.graph.trivial(v)): one for v in vertices})

    def vertex(self, v):
        p = self.graph.trivial(v)
        return Element(self, {Monomial(p, p): self.field.one})

    def path_element(self, path):
        return self.monomial(path, self.graph.trivial(path.end))

    def edge(self, e):
        return self.path_element(self.graph.path((e,)))

    def ghost(self, e):
        return self.monomial(self.graph.trivial(self.graph.range_of(e)), self.graph.path((e,)))

    def monomial(self, mu, nu, c=None):
        """The normal form of c * mu nu*.

        Args:
            mu (Path): A path of the graph.
            nu (Path): A path of the graph.
            c: Scalar, 1 when omitted.

        Returns:
            Element: Zero when r(mu) != r(nu); otherwise the reduced element.
        """
        for p in (mu, nu):
            self.graph.path(p.edges, start=p.start)
        c = self.field.one if c is None else self.scalar(c)
        terms = {}
        if mu.end == nu.end and c:
            self._accumulate(terms, Monomial(mu, nu), c)
        return Element(self, terms)

    def element(self, terms):
        """Builds the normal form of a linear combination ``{Monomial: scalar}``."""
        result = {}
        for m, c in terms.items():
            c = self.scalar(c)
            if c:
                self._accumulate(result, m, c)
        return Element(self, result)

    # rewriting

    def is_normal(self, monomial):
        e = monomial.mu.last_edge
        if e is None or e != monomial.nu.last_edge:
            return True
        return self.graph.distinguished_edge(self.graph.source_of(e)) != e

    def _accumulate(self, terms, monomial, coeff):
        """Adds coeff * (normal form of monomial) into ``terms`` in place."""
        g = self.graph
        zero = self.field.zero
        stack = [(monomial, coeff)]
        while stack:
            m, c = stack.pop()
            if not self.is_normal(m):
                e = m.mu.last_edge
                v = g.source_of(e)
                mu = g.prefix(m.mu, len(m.mu) - 1)
                nu = g.prefix(m.nu, len(m.nu) - 1)
                stack.append((Monomial(mu, nu), c))
                for f in g.out_edges(v)[:-1]:
                    stack.append((Monomial(g.extend(mu, f), g.extend(nu, f)), -c))
                continue
            total = terms.get(m, zero) + c
            if total:
                terms[m] = total
            else:
                terms.pop(m, None)

    def monomial_product(self, a, b):
        """(mu nu*)(alpha beta*) as a single monomial, or None when it vanishes."""
        g = self.graph
        nu, alpha = a.nu, b.mu
        if nu.start != alpha.start:
            return None
        k = min(len(nu), len(alpha))
        if nu.edges[:k] != alpha.edges[:k]:
            return None
        if len(alpha) >= len(nu):
            return Monomial(a.mu.concat(g.suffix(alpha, len(nu))), b.nu)
        return Monomial(a.mu, b.nu.concat(g.suffix(nu, len(alpha))))

    def multiply(self, a, b):
        """The normal form of a * b, computed term by term.

        e* f products collapse in ``monomial_product``; ``_accumulate`` rewrites
        what is left with CK2.
        """
        terms = {}
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                m = self.monomial_product(ma, mb)
                if m is not None:
                    self._accumulate(terms, m, ca * cb)
        return Element(self, terms)

    # bases and gradings

    def monomial_key(self, monomial):
        g = self.graph
        return (monomial.length, len(monomial.mu), g.path_key(monomial.mu), g.path_key(monomial.nu))

    def normal_monomials(self, max_len):
        """All normal-form monomials with |mu| + |nu| <= max_len, in monomial order."""
        if max_len not in self._basis_cache:
            paths = self.graph.enumerate_paths(max_len)
            by_end = {}
            for p in paths:
                by_end.setdefault(p.end, []).append(p)
            monomials = [
                Monomial(mu, nu)
                for mu in paths
                for nu in by_end[mu.end]
                if len(mu) + len(nu) <= max_len
            ]
            self._basis_cache[max_len] = sorted(
                (m for m in monomials if self.is_normal(m)), key=self.monomial_key
            )
        return self._basis_cache[max_len]

    def basis_monomials(self, degree, max_len, grading=None):
        """Normal-form monomials of the given degree with |mu| + |nu| <= max_len."""
        if max_len < 0:
            raise ValueError("max_len must be >= 0")
        return [m for m in self.normal_monomials(max_len) if monomial_degree(m, grading) == degree]

    def grading_support(self, max_len, grading=None):
        """Degrees carried by some normal-form monomial of length <= max_len."""
        return sorted({monomial_degree(m, grading) for m in self.normal_monomials(max_len)})

    def local_unit(self, elements):
        """A finite sum of distinct vertices acting as a two-sided unit on ``elements``.

        Args:
            elements (list[Element]): Nonempty list of elements of this algebra.

        Returns:
            Element: Idempotent of degree 0 with u*x = x*u = x for each x.
        """
        if not elements:
            raise ValueError("local_unit needs at least one element")
        used = set()
        for x in elements:
            if x.algebra != self:
                raise AlgebraMismatch("element from another algebra")
            for m in x.terms:
                used.update((m.mu.start, m.nu.start, m.mu.end))
        return self.vertex_sum(v for v in self.graph.vertices if v in used)

    # text syntax

    def format_word(self, monomial):
        factors = list(monomial.mu.edges) + [f"{e}^*" for e in reversed(monomial.nu.edges)]
        return ".".join(factors) if factors else monomial.mu.start

    def format(self, x):
        """Canonical text, terms sorted by monomial order; ``0`` for zero."""
        if not x.terms:
            return "0"
        return " + ".join(
            f"{self.format_scalar(x.terms[m])}*{self.format_word(m)}" for m in x.support()
        )

    def generator(self, name, ghost=False):
        g = self.graph
        if g.has_vertex(name):
            return self.vertex(name)
        if g.has_edge(name):
            return self.ghost(name) if ghost else self.edge(name)
        raise UnknownGenerator(name)

    def parse_word(self, word):
        result = None
        for factor in word.split("."):
            match = _FACTOR.match(factor)
            if not match:
                raise ElementSyntaxError(f"cannot parse factor {factor!r}")
            gen = self.generator(match.group("name"), ghost=bool(match.group("ghost")))
            result = gen if result is None else result * gen
        return result

    def parse(self, text):
        """Parses element syntax such as ``1*e.f^* + (-1/2)*v`` or ``1*e^*.e``.

        Raises:
            ElementSyntaxError: On malformed text.
            UnknownGenerator: On identifiers that are not vertices or edges.
        """
        text = text.strip()
        if not text:
            raise ElementSyntaxError("empty element")
        if text == "0":
            return self.zero()
        result = self.zero()
        for term in _split_terms(text):
            match = _TERM.match(term)
            if not match:
                raise ElementSyntaxError(f"cannot parse term {term!r}")
            c = self.parse_scalar(match.group("scalar")) if match.group("scalar") else self.field.one
            result = result + self.parse_word(match.group("word")).scale(c)
        logging.debug(f"Parsed element {text!r} -> {self.format(result)}")
        return result


def _split_terms(text):
    terms, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0 and "".join(current).strip():
            terms.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ElementSyntaxError("unbalanced parentheses")
    tail = "".join(current).strip()
    if not tail:
        raise ElementSyntaxError("dangling '+'")
    terms.append(tail)
    return terms


# functional surface

def monomial(algebra, mu, nu, c=None):
    return algebra.monomial(mu, nu, c)


def homogeneous_components(a, grading=None):
    return a.homogeneous_components(grading)


def basis_monomials(algebra, degree, max_len, grading=None):
    return algebra.basis_monomials(degree, max_len, grading)


def local_unit(elements):
    if not elements:
        raise ValueError("local_unit needs at least one element")
    return elements[0].algebra.local_unit(elements)


def path_of(algebra, spec):
    """Builds a path from ``"e.f"`` or a vertex name; convenience for tests and CLI."""
    g = algebra.graph
    if g.has_vertex(spec):
        return g.trivial(spec)
    return g.path(spec.split("."))
