"""Seeded random elements for suites and property tests."""
import random

from graph import DirectedGraph
from lpa import WeightGrading, monomial_degree

_NUMERATORS = (-3, -2, -1, 1, 2, 3)
_DENOMINATORS = (1, 1, 1, 2, 3)


def make_rng(seed):
    return random.Random(seed)


def random_scalar(field, rng):
    """A nonzero scalar: small fractions over QQ, any unit over GF(p)."""
    p = field.characteristic()
    if p:
        return field(rng.randrange(1, p))
    return field(rng.choice(_NUMERATORS)) / field(rng.choice(_DENOMINATORS))


def _combination(algebra, monomials, rng, term_count):
    k = rng.randint(1, min(term_count, len(monomials)))
    chosen = rng.sample(monomials, k)
    return algebra.element({m: random_scalar(algebra.field, rng) for m in chosen})


def random_homogeneous_element(algebra, rng, term_count=3, len_cap=3, grading=None, degree=None):
    """A nonzero homogeneous element with at most ``term_count`` normal-form terms.

    Args:
        algebra (LeavittPathAlgebra): The algebra.
        rng (random.Random): Seeded generator.
        term_count (int): Maximum number of terms.
        len_cap (int): Maximum monomial length |mu| + |nu|.
        grading (WeightGrading, optional): Grading; canonical when None.
        degree (int, optional): Force this degree instead of sampling one.

    Returns:
        Element: The sample.
    """
    by_degree = {}
    for m in algebra.normal_monomials(len_cap):
        by_degree.setdefault(monomial_degree(m, grading), []).append(m)
    if degree is None:
        degree = rng.choice(sorted(by_degree))
    elif degree not in by_degree:
        raise ValueError(f"no monomial of degree {degree} within length {len_cap}")
    return _combination(algebra, by_degree[degree], rng, term_count)


def random_element(algebra, rng, term_count=3, len_cap=3):
    """A nonzero element with at most ``term_count`` terms of any degrees."""
    return _combination(algebra, algebra.normal_monomials(len_cap), rng, term_count)


def random_weight_grading(graph, rng, low=-3, high=3):
    return WeightGrading({e: rng.randint(low, high) for e in graph.edges}, graph)


def random_graph(rng, max_vertices=4, max_edges=6):
    """A small graph on ``v0, v1, ...`` with edges ``e0, e1, ...`` between random endpoints.

    Loops, parallel edges, sinks and isolated vertices all occur.
    """
    vertices = [f"v{i}" for i in range(rng.randint(1, max_vertices))]
    edges = [
        (f"e{k}", rng.choice(vertices), rng.choice(vertices))
        for k in range(rng.randint(0, max_edges))
    ]
    return DirectedGraph(vertices, edges)
