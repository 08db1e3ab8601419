"""Corner skew Laurent polynomial rings R[t+, t-, phi].

An element is a finite map ``i -> r_i``: ``r_i * t+^i`` for i > 0, ``r_0`` for
i = 0 and ``t-^j * r_{-j}`` for i = -j < 0, subject to r_i in R p_i and
r_{-j} in p_j R where p_i = phi^i(1). Products follow t- t+ = 1, t+ t- = p,
r t- = t- phi(r) and t+ r = phi(r) t+.
"""
import logging
from dataclasses import dataclass, field

from errors import (
    DecompositionFailure,
    GraphHasSource,
    InternalInvariantBreach,
    NotApplicable,
    NotFiniteGraph,
)
from regularity import find_witness


@dataclass(frozen=True)
class CoefficientRing:
    """The unital ring R: its unit, its zero and a printer for its elements.

    Elements only need ``+``, ``*`` and ``==``; sympy domain elements and
    ``lpa.Element`` both qualify.
    """

    one: object
    zero: object
    format: object = str


class CornerSkewRing:
    """R[t+, t-, phi] for a corner isomorphism phi: R -> pRp.

    Args:
        coefficients (CoefficientRing): The ring R.
        p (object): Idempotent of R.
        phi (callable): The corner isomorphism, phi(1) = p.
        phi_inverse (callable): Its inverse on pRp.
    """

    def __init__(self, coefficients, p, phi, phi_inverse):
        self.coefficients = coefficients
        self.p = p
        self.phi = phi
        self.phi_inverse = phi_inverse
        self._powers = [coefficients.one]
        if p * p != p:
            raise InternalInvariantBreach("p is not idempotent")
        if phi(coefficients.one) != p:
            raise InternalInvariantBreach("phi(1) != p")

    def p_power(self, i):
        """p_i = phi^i(1), with p_0 = 1."""
        while len(self._powers) <= i:
            self._powers.append(self.phi(self._powers[-1]))
        return self._powers[i]

    def phi_power(self, r, k):
        for _ in range(k):
            r = self.phi(r)
        return r

    # constructors

    def element(self, coeffs):
        return CornerSkewElement(self, coeffs)

    def zero(self):
        return CornerSkewElement(self, {})

    def one(self):
        return self.constant(self.coefficients.one)

    def constant(self, r):
        return CornerSkewElement(self, {0: r})

    def t_plus(self, i=1):
        return CornerSkewElement(self, {i: self.p_power(i)})

    def t_minus(self, j=1):
        return CornerSkewElement(self, {-j: self.p_power(j)})

    # arithmetic

    def _term_product(self, left, right):
        """(t-^j1 c1 t+^i1)(t-^j2 c2 t+^i2) as a single (j, c, i) triple."""
        j1, c1, i1 = left
        j2, c2, i2 = right
        if i1 >= j2:
            a = i1 - j2
            return j1, c1 * self.phi_power(self.p_power(j2) * c2, a), a + i2
        b = j2 - i1
        return j1 + b, self.phi_power(c1 * self.p_power(i1), b) * c2, i2

    def _normalize(self, j, c, i):
        """Rewrites t-^j c t+^i with min(i, j) = 0 as an index and coefficient."""
        while j > 0 and i > 0:
            c = self.phi_inverse(self.p * c * self.p)
            j -= 1
            i -= 1
        if i > 0:
            return i, c * self.p_power(i)
        if j > 0:
            return -j, self.p_power(j) * c
        return 0, c

    def multiply(self, a, b):
        zero = self.coefficients.zero
        coeffs = {}
        for ka, ra in a.coeffs.items():
            for kb, rb in b.coeffs.items():
                j, c, i = self._term_product(_triple(ka, ra), _triple(kb, rb))
                index, r = self._normalize(j, c, i)
                total = coeffs.get(index, zero) + r
                if total != zero:
                    coeffs[index] = total
                else:
                    coeffs.pop(index, None)
        failures = self.constraint_failures(coeffs)
        if failures:
            raise InternalInvariantBreach(f"product left the corner constraints at {failures}")
        return CornerSkewElement(self, coeffs, check=False)

    def constraint_failures(self, coeffs):
        bad = []
        for i, r in coeffs.items():
            if i > 0 and r * self.p_power(i) != r:
                bad.append(i)
            elif i < 0 and self.p_power(-i) * r != r:
                bad.append(i)
        return bad

    def homomorphism_failures(self, samples):
        """Checks that phi is additive and multiplicative on pairs of samples.

        Args:
            samples (list): Elements of R.

        Returns:
            list[str]: One message per failed identity; empty when phi passes.
        """
        phi = self.phi
        images = [phi(a) for a in samples]
        bad = []
        for a, image in zip(samples, images):
            # phi lands in pRp
            if self.p * image * self.p != image:
                bad.append(f"phi({a}) is outside pRp")
            if self.phi_inverse(image) != a:
                bad.append(f"phi^-1(phi({a})) != {a}")
        for a, phi_a in zip(samples, images):
            for b, phi_b in zip(samples, images):
                if phi(a + b) != phi_a + phi_b:
                    bad.append(f"phi({a} + {b}) != phi({a}) + phi({b})")
                if phi(a * b) != phi_a * phi_b:
                    bad.append(f"phi({a} * {b}) != phi({a}) * phi({b})")
        return bad

    def format(self, a):
        """Renders ``t-^j*<r> + <r0> + <r>*t+^i`` in index order, ``0`` for zero."""
        if not a.coeffs:
            return "0"
        show = self.coefficients.format
        parts = []
        for i in sorted(a.coeffs):
            r = show(a.coeffs[i])
            if i < 0:
                parts.append(f"t-^{-i}*<{r}>")
            elif i == 0:
                parts.append(f"<{r}>")
            else:
                parts.append(f"<{r}>*t+^{i}")
        return " + ".join(parts)


def _triple(index, r):
    if index > 0:
        return 0, r, index
    return -index, r, 0


class CornerSkewElement:
    """An element of a ``CornerSkewRing``; coefficients are checked on construction."""

    def __init__(self, ring, coeffs, check=True):
        zero = ring.coefficients.zero
        self.ring = ring
        self.coeffs = {i: r for i, r in coeffs.items() if r != zero}
        if check:
            bad = ring.constraint_failures(self.coeffs)
            if bad:
                raise DecompositionFailure(bad[0])

    def __add__(self, other):
        zero = self.ring.coefficients.zero
        coeffs = dict(self.coeffs)
        for i, r in other.coeffs.items():
            coeffs[i] = coeffs.get(i, zero) + r
        return CornerSkewElement(self.ring, coeffs, check=False)

    def __mul__(self, other):
        return cs_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, CornerSkewElement):
            return NotImplemented
        return self.ring is other.ring and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def degrees(self):
        return sorted(self.coeffs)

    def __str__(self):
        return self.ring.format(self)

    def __repr__(self):
        return f"CornerSkewElement({self.ring.format(self)})"


def cs_mul(a, b):
    if a.ring is not b.ring:
        raise NotApplicable("elements of different corner skew rings")
    return a.ring.multiply(a, b)


def cs_degree_component(a, i):
    """The degree-i part of ``a``; the components of all degrees sum to ``a``."""
    if i in a.coeffs:
        return CornerSkewElement(a.ring, {i: a.coeffs[i]}, check=False)
    return a.ring.zero()


def cs_witness(a, zero_witness):
    """An inner inverse of a homogeneous corner skew element.

    For a = r t+^i (r in R p_i) with s = zero_witness(r), y = t-^i p_i s; for
    a = t-^j r, y = s p_j t+^j; in degree 0 the witness of R is used directly.

    Args:
        a (CornerSkewElement): Nonzero element concentrated in one degree.
        zero_witness (callable): r -> s with r s r = r in R.

    Returns:
        CornerSkewElement: y with a y a = a.
    """
    if len(a.coeffs) != 1:
        raise NotApplicable(f"expected one nonzero degree, got {a.degrees}")
    ring = a.ring
    (i, r), = a.coeffs.items()
    s = zero_witness(r)
    if i > 0:
        y = CornerSkewElement(ring, {-i: ring.p_power(i) * s})
    elif i < 0:
        y = CornerSkewElement(ring, {-i: s * ring.p_power(-i)})
    else:
        y = CornerSkewElement(ring, {0: s}, check=False)
    if cs_mul(cs_mul(a, y), a) != a:
        raise InternalInvariantBreach(f"corner skew witness failed for {a}")
    return y


@dataclass
class LpaRealization:
    """L(E) written as the corner skew ring L(E)_0[t+, t-, phi].

    ``chosen_edges`` maps each vertex to the in-edge e_v used in t+ = sum e_v.
    """

    algebra: object
    chosen_edges: dict
    t_plus: object
    t_minus: object
    ring: CornerSkewRing = None
    _plus_powers: list = field(default_factory=list, repr=False)
    _minus_powers: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        one = self.algebra.one()
        self._plus_powers = [one]
        self._minus_powers = [one]
        coefficients = CoefficientRing(one, self.algebra.zero(), self.algebra.format)
        self.ring = CornerSkewRing(
            coefficients,
            self.t_plus * self.t_minus,
            lambda r: self.t_plus * r * self.t_minus,
            lambda r: self.t_minus * r * self.t_plus,
        )

    def plus_power(self, i):
        while len(self._plus_powers) <= i:
            self._plus_powers.append(self._plus_powers[-1] * self.t_plus)
        return self._plus_powers[i]

    def minus_power(self, j):
        while len(self._minus_powers) <= j:
            self._minus_powers.append(self._minus_powers[-1] * self.t_minus)
        return self._minus_powers[j]

    def to_lpa(self, a):
        total = self.algebra.zero()
        for i, r in a.coeffs.items():
            if i > 0:
                total = total + r * self.plus_power(i)
            elif i < 0:
                total = total + self.minus_power(-i) * r
            else:
                total = total + r
        return total

    def from_lpa(self, x):
        """Decomposes ``x`` degreewise: r_i = x_i t-^i, r_{-j} = t+^j x_{-j}.

        Raises:
            DecompositionFailure: If a component is not recovered from its coefficient.
        """
        coeffs = {}
        for i, part in x.homogeneous_components().items():
            if i > 0:
                r = part * self.minus_power(i)
                back = r * self.plus_power(i)
            elif i < 0:
                r = self.plus_power(-i) * part
                back = self.minus_power(-i) * r
            else:
                r = back = part
            if back != part:
                raise DecompositionFailure(i)
            coeffs[i] = r
        return CornerSkewElement(self.ring, coeffs)

    def rule_failures(self, samples):
        """Evaluates the four defining rules in L(E) on degree-0 samples."""
        algebra = self.algebra
        t_plus, t_minus, phi = self.t_plus, self.t_minus, self.ring.phi
        failures = []
        if t_minus * t_plus != algebra.one():
            failures.append("t- t+ != 1")
        if t_plus * t_minus != self.ring.p:
            failures.append("t+ t- != p")
        for r in samples:
            if r * t_minus != t_minus * phi(r):
                failures.append(f"r t- != t- phi(r) for r = {r}")
            if t_plus * r != phi(r) * t_plus:
                failures.append(f"t+ r != phi(r) t+ for r = {r}")
        failures.extend(self.ring.homomorphism_failures(samples))
        return failures

    def zero_witness(self, r, max_bound=None):
        """A degree-0 inner inverse of r found by the witness engine."""
        return find_witness(r, max_bound=max_bound).y

    def witness(self, x):
        """Structural witness of a homogeneous x in L(E), mapped back into L(E)."""
        y = cs_witness(self.from_lpa(x), self.zero_witness)
        return self.to_lpa(y)


def realize_lpa(algebra):
    """Realizes L(E) of a finite graph without sources as a corner skew ring.

    Each vertex v gets its first declared in-edge e_v; t+ = sum e_v and
    t- = sum e_v*, so t- t+ = sum of all vertices = 1.

    Raises:
        NotFiniteGraph: If the graph flags an infinite emitter.
        GraphHasSource: For the first vertex without in-edges.
    """
    g = algebra.graph
    if g.infinite_emitters:
        raise NotFiniteGraph(f"infinite emitters {sorted(g.infinite_emitters)}")
    for v in g.vertices:
        if g.is_source(v):
            raise GraphHasSource(v)
    chosen = {v: g.in_edges(v)[0] for v in g.vertices}
    t_plus, t_minus = algebra.zero(), algebra.zero()
    for e in chosen.values():
        t_plus = t_plus + algebra.edge(e)
        t_minus = t_minus + algebra.ghost(e)
    logging.info(f"Realized L(E) with t+ = {t_plus}")
    return LpaRealization(algebra, chosen, t_plus, t_minus)
