"""Exact linear solving over the coefficient field.

Vectors are sparse dicts ``coordinate -> scalar``; coordinates are any hashable
keys (normal-form monomials in practice). Systems are assembled as sparse
``DomainMatrix`` objects and reduced with sympy's exact row reduction, which
works over ``QQ`` and over ``GF(p)`` alike.
"""
import logging

from sympy.polys.matrices import DomainMatrix


def solve_linear_system(columns, target, field):
    """Finds coefficients c with sum_j c_j * columns[j] = target.

    Args:
        columns (list[dict]): Sparse column vectors.
        target (dict): Sparse right-hand side.
        field (Domain): The sympy field domain of all entries.

    Returns:
        list | None: One solution (free variables set to zero), or None when the
        system is inconsistent.
    """
    index = {}
    for key in target:
        index.setdefault(key, len(index))
    for column in columns:
        for key in column:
            index.setdefault(key, len(index))
    n = len(columns)
    if not index:
        return [field.zero] * n

    rows = {}
    for j, column in enumerate(columns):
        for key, value in column.items():
            if value:
                rows.setdefault(index[key], {})[j] = value
    for key, value in target.items():
        if value:
            rows.setdefault(index[key], {})[n] = value

    matrix = DomainMatrix(rows, (len(index), n + 1), field)
    reduced, pivots = matrix.rref()
    logging.debug(f"Reduced {len(index)}x{n + 1} system over {field}, rank {len(pivots)}")
    if n in pivots:
        return None
    solution = [field.zero] * n
    for row, col in enumerate(pivots):
        solution[col] = reduced[row, n].element
    return solution


def express_in_span(target, spanning):
    """Coefficients expressing the Element ``target`` in the span of ``spanning``.

    Returns:
        list | None: Coefficients aligned with ``spanning``, or None if ``target``
        is not in their span.
    """
    field = target.algebra.field
    return solve_linear_system([s.terms for s in spanning], target.terms, field)


def is_linearly_independent(elements):
    """True iff the Elements are linearly independent over the field."""
    if not elements:
        return True
    field = elements[0].algebra.field
    index = {}
    rows = {}
    for j, x in enumerate(elements):
        for key, value in x.terms.items():
            rows.setdefault(index.setdefault(key, len(index)), {})[j] = value
    if not index:
        return False
    matrix = DomainMatrix(rows, (len(index), len(elements)), field)
    return matrix.rank() == len(elements)
