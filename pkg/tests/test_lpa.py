"""
Unit tests for lpa.py module.
"""
import pytest
from sympy.polys.domains import QQ

from errors import (
    AlgebraMismatch,
    ElementSyntaxError,
    NotHomogeneous,
    UnknownGenerator,
    ZeroHasNoDegree,
)
from graph import parse_graph
from linsolve import is_linearly_independent
from lpa import (
    LeavittPathAlgebra,
    Monomial,
    WeightGrading,
    basis_monomials,
    homogeneous_components,
    local_unit,
    monomial,
    path_of,
)
from sampling import make_rng, random_element, random_graph, random_homogeneous_element, random_weight_grading


class TestNormalForm:
    """Test cases for the rewriting to normal form."""

    def test_ghost_times_edge(self, r1):
        """Test e* e -> r(e)."""
        assert str(r1.parse("1*e^*.e")) == "1*v"

    def test_cancellation_to_zero(self, r1):
        """Test that v - v prints as 0."""
        x = r1.parse("1*v + -1*v")
        assert x.is_zero
        assert str(x) == "0"

    def test_ck2_rewrites_distinguished_edge(self, r2):
        """Test y2 y2* -> v - y1 y1*."""
        assert str(r2.parse("1*y2.y2^*")) == "1*v + (-1)*y1.y1^*"

    def test_ck2_identity(self, r2, a3, toeplitz):
        """Test sum e e* = v at every regular vertex."""
        for algebra in (r2, a3, toeplitz):
            g = algebra.graph
            for v in g.regular_vertices():
                total = algebra.zero()
                for e in g.out_edges(v):
                    total = total + algebra.edge(e) * algebra.ghost(e)
                assert total == algebra.vertex(v)

    def test_orthogonal_ghosts(self, r2):
        """Test e* f = 0 for e != f."""
        assert (r2.ghost("y1") * r2.edge("y2")).is_zero

    def test_non_composable_product_vanishes(self, a2):
        """Test that e e = 0 in L(A2)."""
        assert (a2.edge("e") * a2.edge("e")).is_zero

    def test_monomial_with_different_ranges_is_zero(self, a2):
        """Test that mu nu* with r(mu) != r(nu) is zero."""
        g = a2.graph
        assert monomial(a2, g.path(["e"]), g.trivial("v1")).is_zero

    def test_inner_product_of_paths(self, a3):
        """Test (e f)* (e f) = v3."""
        ef = a3.path_element(path_of(a3, "e.f"))
        assert ef.star() * ef == a3.vertex("v3")

    def test_vertices_are_orthogonal_idempotents(self, a3):
        """Test v v = v and v w = 0."""
        v1, v2 = a3.vertex("v1"), a3.vertex("v2")
        assert v1 * v1 == v1
        assert (v1 * v2).is_zero

    def test_one_is_identity(self, toeplitz):
        """Test that the sum of all vertices is the identity."""
        x = toeplitz.parse("1*e.e^* + 2*f + 1*f^*.e^*")
        one = toeplitz.one()
        assert one * x == x
        assert x * one == x


class TestArithmetic:
    """Test cases for algebra structure."""

    def test_scalars(self, r2):
        """Test rational coefficients and scaling."""
        x = r2.parse("(1/2)*y1 + (-3)*y2")
        assert str(x.scale(2)) == "1*y1 + (-6)*y2"
        assert str(2 * x) == str(x * 2)

    def test_star_is_anti_multiplicative(self, r2):
        """Test (ab)* = b* a* on sample pairs."""
        rng = make_rng(7)
        for _ in range(20):
            a = random_element(r2, rng, 3, 2)
            b = random_element(r2, rng, 3, 2)
            assert (a * b).star() == b.star() * a.star()

    def test_associativity(self, toeplitz):
        """Test a(bc) = (ab)c on sample triples."""
        rng = make_rng(11)
        for _ in range(20):
            a, b, c = (random_element(toeplitz, rng, 3, 2) for _ in range(3))
            assert a * (b * c) == (a * b) * c

    def test_mismatched_algebras(self, r1, r2):
        """Test that elements of different algebras do not mix."""
        with pytest.raises(AlgebraMismatch):
            r1.vertex("v") + r2.vertex("v")

    def test_same_graph_over_other_field_differs(self, make_algebra, f2):
        """Test that the field is part of the algebra."""
        with pytest.raises(AlgebraMismatch):
            make_algebra("R1").vertex("v") * make_algebra("R1", f2).vertex("v")

    def test_characteristic_two(self, make_algebra, f2):
        """Test that v + v = 0 over GF(2)."""
        algebra = make_algebra("R2", f2)
        assert algebra.parse("1*v + 1*v").is_zero
        assert str(algebra.parse("1*y2.y2^*")) == "1*v + 1*y1.y1^*"

    def test_local_unit(self, a3):
        """Test that the local unit absorbs its elements on both sides."""
        x = a3.parse("1*e")
        u = local_unit([x])
        assert u == a3.parse("1*v1 + 1*v2")
        assert u * x == x and x * u == x
        assert u * u == u


class TestGrading:
    """Test cases for degrees and homogeneous components."""

    def test_degrees(self, r2):
        """Test the canonical degree |mu| - |nu|."""
        assert r2.parse("1*y1").degree() == 1
        assert r2.parse("1*y1.y2^*").degree() == 0
        assert r2.parse("1*y2^*.y1^*").degree() == -2

    def test_not_homogeneous(self, r2):
        """Test that mixed degrees raise NotHomogeneous."""
        with pytest.raises(NotHomogeneous) as exc_info:
            r2.parse("1*y1 + 1*v").degree()
        assert exc_info.value.degrees == [0, 1]

    def test_zero_has_no_degree(self, r2):
        """Test that the zero element has no degree."""
        with pytest.raises(ZeroHasNoDegree):
            r2.zero().degree()

    def test_homogeneous_components_sum_back(self, toeplitz):
        """Test that components add up to the element."""
        x = toeplitz.parse("1*e + 2*u + 3*e.e^* + 1*f^*")
        parts = homogeneous_components(x)
        assert sorted(parts) == [-1, 0, 1]
        total = toeplitz.zero()
        for part in parts.values():
            total = total + part
        assert total == x

    def test_weight_grading(self, a2):
        """Test degrees under a weight map."""
        grading = WeightGrading({"e": 3}, a2.graph)
        assert a2.parse("1*e").degree(grading) == 3
        assert a2.parse("1*e^*").degree(grading) == -3

    def test_weight_grading_must_be_total(self, a3):
        """Test that a partial weight map is rejected."""
        with pytest.raises(ValueError):
            WeightGrading({"e": 1}, a3.graph)

    def test_degree_is_additive(self, r2, toeplitz):
        """Test deg(ab) = deg a + deg b under canonical and weight gradings."""
        rng = make_rng(3)
        for algebra in (r2, toeplitz):
            weighted = random_weight_grading(algebra.graph, rng)
            for grading in (None, weighted):
                checked = 0
                while checked < 10:
                    a = random_homogeneous_element(algebra, rng, 2, 2, grading)
                    b = random_homogeneous_element(algebra, rng, 2, 2, grading)
                    product = a * b
                    if product:
                        assert product.degree(grading) == a.degree(grading) + b.degree(grading)
                        checked += 1


class TestBasis:
    """Test cases for normal-form monomial bases."""

    def test_loop_basis(self, r1):
        """Test that L(R1) has one basis monomial per degree."""
        assert [r1.format_word(m) for m in basis_monomials(r1, 0, 2)] == ["v"]
        assert [r1.format_word(m) for m in basis_monomials(r1, 2, 2)] == ["e.e"]
        assert [r1.format_word(m) for m in basis_monomials(r1, -1, 2)] == ["e^*"]

    def test_matrix_algebra_dimension(self, a3):
        """Test that L(A3) = M_3(K) has 9 normal-form monomials."""
        assert len(a3.normal_monomials(4)) == 9

    def test_normal_monomials_exclude_distinguished_pairs(self, r2):
        """Test that y2 y2* is not a basis monomial."""
        words = [r2.format_word(m) for m in r2.normal_monomials(2)]
        assert "y1.y1^*" in words
        assert "y2.y2^*" not in words

    def test_grading_support(self, a3):
        """Test the degrees carried by L(A3)."""
        assert a3.grading_support(4) == [-2, -1, 0, 1, 2]

    def test_rose_degree_zero_basis(self, r2):
        """Test the degree-0 basis of R2 up to length 2: v, y1 y1* and the off-diagonal pair."""
        words = {r2.format_word(m) for m in basis_monomials(r2, 0, 2)}
        assert words == {"v", "y1.y1^*", "y1.y2^*", "y2.y1^*"}
        diagonal = {r2.format_word(m) for m in basis_monomials(r2, 0, 2) if m.mu == m.nu}
        assert diagonal == {"v", "y1.y1^*"}

    @pytest.mark.parametrize("name", ["R1", "R2", "A2", "A3", "toeplitz", "point", "A2_point"])
    def test_basis_is_linearly_independent(self, make_algebra, name):
        """Test that the normal-form monomials of length <= 4 are independent."""
        algebra = make_algebra(name)
        one = algebra.field.one
        elements = [algebra.element({m: one}) for m in algebra.normal_monomials(4)]
        assert all(len(x.terms) == 1 for x in elements)
        assert is_linearly_independent(elements)

    def test_local_unit_of_all_vertices(self, make_algebra):
        """Test that the local unit of every vertex is 1."""
        for name in ("R2", "A3", "toeplitz", "A2_point"):
            algebra = make_algebra(name)
            vertices = [algebra.vertex(v) for v in algebra.graph.vertices]
            assert local_unit(vertices) == algebra.one()

    def test_basis_monomials_are_homogeneous(self, toeplitz):
        """Test that every basis monomial has the requested degree."""
        for m in basis_monomials(toeplitz, 1, 3):
            assert isinstance(m, Monomial)
            assert len(m.mu) - len(m.nu) == 1


class TestElementSyntax:
    """Test cases for parsing and printing."""

    def test_print_is_idempotent(self, r2):
        """Test print(parse(s)) = s on canonical strings."""
        for text in ("1*v + (-1)*y1.y1^*", "(1/2)*y1.y2^*", "0", "3*y2^*.y1^*"):
            assert str(r2.parse(text)) == text

    def test_term_without_scalar(self, r2):
        """Test that a bare word has coefficient 1."""
        assert r2.parse("y1") == r2.parse("1*y1")

    def test_unknown_generator(self, r2):
        """Test that unknown names raise UnknownGenerator."""
        with pytest.raises(UnknownGenerator):
            r2.parse("1*q")

    def test_malformed_text(self, r2):
        """Test syntax errors."""
        for text in ("", "1*", "1*y1 +", "(1*y1"):
            with pytest.raises(ElementSyntaxError):
                r2.parse(text)

    def test_scalar_not_in_field(self, make_algebra, f2):
        """Test that 1/2 is rejected over GF(2)."""
        with pytest.raises(ElementSyntaxError):
            make_algebra("R2", f2).parse("(1/2)*v")

    def test_scalar_conversion(self, r1):
        """Test scalar() on ints, strings and field elements."""
        assert r1.scalar(3) == QQ(3)
        assert r1.scalar("-1/2") == QQ(-1, 2)
        assert r1.scalar(QQ(2, 3)) == QQ(2, 3)


class TestElementInvariants:
    """Involution and normal-form checks on seeded samples."""

    @pytest.mark.parametrize("name", ["R1", "R2", "A3", "toeplitz"])
    def test_star_is_an_involution(self, make_algebra, name):
        """Test x** = x on 100 samples."""
        algebra = make_algebra(name)
        rng = make_rng(101)
        for _ in range(100):
            x = random_element(algebra, rng, 4, 3)
            assert x.star().star() == x

    @pytest.mark.parametrize("name", ["R1", "R2", "A3", "toeplitz"])
    def test_renormalizing_changes_nothing(self, make_algebra, name):
        """Test that rebuilding an element from its own terms gives it back."""
        algebra = make_algebra(name)
        rng = make_rng(102)
        for _ in range(100):
            x = random_element(algebra, rng, 4, 3)
            assert algebra.element(x.terms) == x
            assert algebra.element((x * x).terms) == x * x

    def test_punctuated_generator_names(self):
        """Test that ids such as v-1 work in element text."""
        algebra = LeavittPathAlgebra(parse_graph("vertex v-1\nvertex w\nedge e': v-1 -> w\n"))
        x = algebra.parse("1*e'^*.e'")
        assert x == algebra.vertex("w")
        assert str(algebra.parse("2*e' + (-1)*v-1")) == "(-1)*v-1 + 2*e'"


@pytest.mark.slow
class TestAlgebraAcceptance:
    """Seeded associativity, involution and grading checks."""

    @pytest.mark.parametrize("name", ["R1", "R2", "A3", "toeplitz"])
    def test_associativity_and_star(self, make_algebra, name):
        """Test 300 triples for associativity and 100 pairs for (ab)* = b* a*."""
        algebra = make_algebra(name)
        rng = make_rng(300)
        for _ in range(300):
            a, b, c = (random_element(algebra, rng, 3, 3) for _ in range(3))
            assert a * (b * c) == (a * b) * c
        for _ in range(100):
            a, b = random_element(algebra, rng, 3, 3), random_element(algebra, rng, 3, 3)
            assert (a * b).star() == b.star() * a.star()

    def test_degree_additivity(self, r2):
        """Test deg(ab) = deg a + deg b on 200 nonzero products per grading."""
        rng = make_rng(200)
        weighted = random_weight_grading(r2.graph, rng)
        for grading in (None, weighted):
            checked = 0
            while checked < 200:
                a = random_homogeneous_element(r2, rng, 3, 3, grading)
                b = random_homogeneous_element(r2, rng, 3, 3, grading)
                product = a * b
                if product:
                    assert product.degree(grading) == a.degree(grading) + b.degree(grading)
                    checked += 1

    def test_basis_independent_on_random_graphs(self):
        """Test independence of the length <= 4 normal monomials on 20 graphs with at most three vertices."""
        rng = make_rng(4)
        for _ in range(20):
            algebra = LeavittPathAlgebra(random_graph(rng, max_vertices=3, max_edges=3))
            one = algebra.field.one
            elements = [algebra.element({m: one}) for m in algebra.normal_monomials(4)]
            assert is_linearly_independent(elements)
            for x in elements:
                assert x.star().star() == x
