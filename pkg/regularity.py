"""Constructive graded von Neumann regularity in L(E).

For a homogeneous x the map y -> x y x is linear, so finding an inner inverse
at a given length bound is one exact linear solve over the coefficient field.
The bound grows until a solution appears or the configured maximum is reached.
"""
import itertools
import logging
import time
from dataclasses import dataclass, field

from config import EXTRA_BOUND
from errors import (
    AlgebraMismatch,
    InternalInvariantBreach,
    NoWitnessWithinBound,
    NotApplicable,
    NotHomogeneous,
)
from linsolve import solve_linear_system
from sampling import make_rng, random_homogeneous_element


@dataclass
class WitnessReport:
    x: object
    y: object
    length_bound: int
    solved_at_bound: int
    verified: bool
    candidates: int = 0
    elapsed_ms: float = 0.0


@dataclass
class IdempotentCertificate:
    """A homogeneous idempotent e generating the right ideal sum x_i A.

    ``membership_in[i]`` is the element w_i with x_i = e * w_i (so x_i lies in eA);
    ``membership_out[i]`` is the multiplier a_i with e = sum x_i * a_i.
    """

    generators: list
    e: object
    membership_in: list
    membership_out: list

    def failures(self):
        e = self.e
        problems = []
        if e * e != e:
            problems.append("e*e != e")
        if e and (not e.is_homogeneous() or e.degree() != 0):
            problems.append("e is not homogeneous of degree 0")
        for i, (x, w) in enumerate(zip(self.generators, self.membership_in)):
            if e * x != x:
                problems.append(f"e*x[{i}] != x[{i}]")
            if e * w != x:
                problems.append(f"e*w[{i}] != x[{i}]")
        total = e.algebra.zero()
        for x, a in zip(self.generators, self.membership_out):
            total = total + x * a
        if total != e:
            problems.append("sum x_i*a_i != e")
        return problems

    @property
    def verified(self):
        return not self.failures()


@dataclass
class TrialRecord:
    index: int
    element: str
    degree: int
    bound: int
    verified: bool
    elapsed_ms: float = 0.0
    error: str = None
    sample: object = field(default=None, repr=False, compare=False)
    witness: object = field(default=None, repr=False, compare=False)

    def to_dict(self, include_timings=False):
        record = {
            "trial": self.index,
            "element": self.element,
            "degree": self.degree,
            "bound": self.bound,
            "verified": self.verified,
        }
        if self.error:
            record["error"] = self.error
        if include_timings:
            record["elapsed_ms"] = round(self.elapsed_ms, 3)
        return record


@dataclass
class SuiteReport:
    seed: int
    term_count: int
    len_cap: int
    records: list = field(default_factory=list)

    @property
    def verified_count(self):
        return sum(1 for r in self.records if r.verified)

    @property
    def passed(self):
        return self.verified_count == len(self.records)

    def failure_bounds(self):
        return [r.bound for r in self.records if not r.verified]

    def to_dict(self, include_timings=False):
        return {
            "seed": self.seed,
            "term_count": self.term_count,
            "len_cap": self.len_cap,
            "trials": len(self.records),
            "verified": self.verified_count,
            "passed": self.passed,
            "records": [r.to_dict(include_timings) for r in self.records],
        }

    def to_text(self):
        lines = [
            f"trial {r.index}: degree {r.degree} bound {r.bound} "
            f"{'VERIFIED' if r.verified else 'FAILED'} {r.elapsed_ms:.1f}ms"
            + (f" ({r.error})" if r.error else "")
            for r in self.records
        ]
        lines.append(f"{self.verified_count}/{len(self.records)} VERIFIED (seed {self.seed})")
        return "\n".join(lines)


def default_bounds(x, start_bound=None, max_bound=None):
    start = start_bound if start_bound is not None else max(1, x.max_length)
    stop = max_bound if max_bound is not None else start + EXTRA_BOUND
    if start < 1 or stop < start:
        raise NotApplicable(f"invalid bounds start={start} max={stop}")
    return start, stop


def _candidates(x, bound, degree, grading):
    """Monomials b = mu nu* that can give x b x != 0.

    x b x != 0 forces s(mu) to be a right vertex of x and s(nu) a left vertex.
    """
    algebra = x.algebra
    if degree is None:
        pool = algebra.normal_monomials(bound)
    else:
        pool = algebra.basis_monomials(degree, bound, grading)
    lefts = x.right_vertices()
    rights = x.left_vertices()
    return [m for m in pool if m.mu.start in lefts and m.nu.start in rights]


def _search(x, start, stop, degree, grading):
    algebra = x.algebra
    one = algebra.field.one
    sandwiches = {}
    for bound in range(start, stop + 1):
        used, columns = [], []
        for m in _candidates(x, bound, degree, grading):
            if m not in sandwiches:
                sandwiches[m] = x * algebra.element({m: one}) * x
            if sandwiches[m]:
                used.append(m)
                columns.append(sandwiches[m].terms)
        logging.debug(f"Witness search for {x} at bound {bound}: {len(used)} candidates")
        solution = solve_linear_system(columns, x.terms, algebra.field)
        if solution is None:
            continue
        y = algebra.element({m: c for m, c in zip(used, solution) if c})
        if x * y * x != x:
            raise InternalInvariantBreach(f"solver returned a non-witness for {x}")
        return y, bound, len(used)
    raise NoWitnessWithinBound(stop)


def find_witness(x, start_bound=None, max_bound=None, grading=None):
    """Finds a homogeneous y with x*y*x = x for a homogeneous x.

    Args:
        x (Element): Nonzero homogeneous element.
        start_bound (int, optional): First length bound; defaults to the
            monomial length of x (at least 1).
        max_bound (int, optional): Last length bound; defaults to
            ``start_bound + LPA_EXTRA_BOUND``.
        grading (WeightGrading, optional): Grading; canonical when None.

    Returns:
        WitnessReport: The verified witness, y homogeneous of degree -deg(x).

    Raises:
        NotApplicable: If x is zero or the bounds are invalid.
        NotHomogeneous: If x is not homogeneous.
        NoWitnessWithinBound: If no witness of length <= max_bound exists.
    """
    if not x:
        raise NotApplicable("zero has no witness search")
    degree = x.degree(grading)
    start, stop = default_bounds(x, start_bound, max_bound)
    began = time.perf_counter()
    y, bound, count = _search(x, start, stop, -degree, grading)
    return WitnessReport(
        x=x,
        y=y,
        length_bound=stop,
        solved_at_bound=bound,
        verified=(x * y * x == x and y.degree(grading) == -degree),
        candidates=count,
        elapsed_ms=(time.perf_counter() - began) * 1000,
    )


def find_witness_unrestricted(x, start_bound=None, max_bound=None):
    """Like ``find_witness`` but for any nonzero x, with candidates of all degrees.

    Succeeds for every x when the graph is acyclic; may raise
    ``NoWitnessWithinBound`` on graphs with cycles.
    """
    if not x:
        raise NotApplicable("zero has no witness search")
    start, stop = default_bounds(x, start_bound, max_bound)
    began = time.perf_counter()
    y, bound, count = _search(x, start, stop, None, None)
    return WitnessReport(
        x=x,
        y=y,
        length_bound=stop,
        solved_at_bound=bound,
        verified=(x * y * x == x),
        candidates=count,
        elapsed_ms=(time.perf_counter() - began) * 1000,
    )


def refine_witness(x, y):
    """Turns an inner inverse y into y' = y x y, a generalized inverse pair.

    Returns:
        Element: y' with x y' x = x and y' x y' = y'.
    """
    refined = y * x * y
    if x * refined * x != x or refined * x * refined != refined:
        raise InternalInvariantBreach("refined witness is not a generalized inverse")
    return refined


def _witness(x, bound, grading=None):
    if bound is None:
        return find_witness(x, grading=grading).y
    start, _ = default_bounds(x)
    return find_witness(x, start_bound=min(start, bound), max_bound=bound, grading=grading).y


def idempotent_generator(xs, bound=None):
    """A homogeneous idempotent e with eA = x_1 A + ... + x_k A.

    Folds the generators one at a time: with e for the first j generators,
    x' = x_{j+1} - e x_{j+1} satisfies e x' = 0; a witness y' of x' gives
    f' = x' y', and g = e + f' - f' e is idempotent with gA = eA + x_{j+1}A.

    Args:
        xs (list[Element]): Nonempty list of homogeneous elements of one algebra.
        bound (int, optional): Maximum length bound for each witness search.

    Returns:
        IdempotentCertificate: The verified certificate.
    """
    if not xs:
        raise NotApplicable("idempotent_generator needs at least one generator")
    algebra = xs[0].algebra
    for x in xs:
        if x.algebra != algebra:
            raise AlgebraMismatch("generators belong to different algebras")
        if not x.is_homogeneous():
            raise NotHomogeneous(x.degrees())

    e = algebra.zero()
    multipliers = []
    for x in xs:
        rest = x - e * x
        if not rest:
            multipliers.append(algebra.zero())
            continue
        y = _witness(rest, bound)
        z = y - y * e
        multipliers = [a - a * x * z for a in multipliers]
        multipliers.append(z)
        f = rest * y
        e = e + f - f * e
        logging.debug(f"Idempotent after {len(multipliers)} generators: {e}")

    certificate = IdempotentCertificate(
        generators=list(xs), e=e, membership_in=list(xs), membership_out=multipliers
    )
    problems = certificate.failures()
    if problems:
        raise InternalInvariantBreach(f"idempotent certificate failed: {problems}")
    return certificate


def nonzero_ideal_idempotent(x, bound=None):
    """A nonzero idempotent e = x*y in the graded right ideal xA (e*x = x)."""
    e = x * _witness(x, bound)
    if not e or e * e != e or e * x != x:
        raise InternalInvariantBreach(f"x*y is not a nonzero idempotent for {x}")
    return e


def corner_witness(x, left, right, bound=None):
    """A witness inside the corner right*A*left for x in left*A^h*right.

    Args:
        x (Element): Homogeneous element with left*x*right = x.
        left (Element): Homogeneous idempotent.
        right (Element): Homogeneous idempotent.

    Returns:
        Element: y = right*y*left with x*y*x = x.
    """
    if left * x * right != x:
        raise NotApplicable(f"{x} is not in the corner {left} A {right}")
    y = right * _witness(x, bound) * left
    if x * y * x != x:
        raise InternalInvariantBreach("corner projection of the witness failed")
    return y


def semiprime_witness(x, bound=None):
    """An element a with x*a*x != 0 for a nonzero homogeneous x."""
    a = _witness(x, bound)
    if not x * a * x:
        raise InternalInvariantBreach(f"x*a*x vanished for {x}")
    return a


def projective_certificate(xs, bound=None):
    """The idempotent e of ``idempotent_generator`` with its complement 1 - e.

    eA is a direct summand of A = eA + (1 - e)A, so the ideal is projective.

    Returns:
        tuple[IdempotentCertificate, Element]: Certificate and complement.
    """
    certificate = idempotent_generator(xs, bound)
    algebra = certificate.e.algebra
    complement = algebra.one() - certificate.e
    if certificate.e * complement or complement * complement != complement:
        raise InternalInvariantBreach("complementary idempotent failed")
    return certificate, complement


def two_grading_check(x, grading, start_bound=None, max_bound=None):
    """Witnesses for x under the canonical grading and under ``grading``.

    Returns:
        tuple[WitnessReport, WitnessReport]: Canonical and weighted reports.
    """
    canonical = find_witness(x, start_bound, max_bound)
    weighted = find_witness(x, start_bound, max_bound, grading=grading)
    return canonical, weighted


def regularity_suite(algebra, trials, term_count, len_cap, seed, grading=None):
    """Runs find_witness on seeded random homogeneous elements.

    Failures are recorded in the report, never raised. Records are kept in
    trial order, so identical seeds give identical reports.

    Args:
        algebra (LeavittPathAlgebra): The algebra under test.
        trials (int): Number of samples.
        term_count (int): Maximum number of terms per sample.
        len_cap (int): Maximum monomial length per sample.
        seed (int): Random seed, embedded in the report.
        grading (WeightGrading, optional): Grading; canonical when None.

    Returns:
        SuiteReport: Per-trial records and the pass flag.
    """
    rng = make_rng(seed)
    report = SuiteReport(seed=seed, term_count=term_count, len_cap=len_cap)
    for index in range(trials):
        x = random_homogeneous_element(algebra, rng, term_count, len_cap, grading)
        degree = x.degree(grading)
        began = time.perf_counter()
        try:
            witness = find_witness(x, grading=grading)
            record = TrialRecord(
                index, str(x), degree, witness.solved_at_bound, witness.verified, sample=x, witness=witness.y
            )
        except NoWitnessWithinBound as e:
            record = TrialRecord(index, str(x), degree, e.bound, False, error=str(e), sample=x)
        record.elapsed_ms = (time.perf_counter() - began) * 1000
        report.records.append(record)
    logging.info(f"Suite finished: {report.verified_count}/{trials} verified (seed {seed})")
    return report


@dataclass
class UnitSearchReport:
    target: object
    max_len: int
    inverse_bound: int
    examined: int
    inner_inverses: int
    invertible_witness: object = None


def unit_regularity_search(algebra, a, max_len, inverse_bound, limit=100000):
    """Bounded search for a homogeneous invertible x with a*x*a = a.

    Enumerates every element of degree -deg(a) spanned by normal-form monomials
    of length <= max_len over a prime field, keeps the inner inverses of a, and
    looks for a two-sided inverse of length <= inverse_bound by a linear solve.
    Finding nothing refutes unit-regularity only up to these bounds.

    Returns:
        UnitSearchReport: Counts and the invertible witness, if any.
    """
    p = algebra.field.characteristic()
    if not p:
        raise NotApplicable("exhaustive search needs a prime field")
    degree = a.degree()
    basis = algebra.basis_monomials(-degree, max_len)
    if p ** len(basis) > limit:
        raise NotApplicable(f"{p}^{len(basis)} candidates exceed the limit {limit}")

    one = algebra.field.one
    unit = algebra.one()
    inverse_basis = [algebra.element({m: one}) for m in algebra.basis_monomials(degree, inverse_bound)]
    sandwiches = [a * algebra.element({m: one}) * a for m in basis]
    target = {("left", m): c for m, c in unit.terms.items()}
    target.update({("right", m): c for m, c in unit.terms.items()})

    examined = inner = 0
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        examined += 1
        image = algebra.zero()
        for c, s in zip(coeffs, sandwiches):
            if c:
                image = image + s.scale(c)
        if image != a:
            continue
        inner += 1
        x = algebra.element({m: c for m, c in zip(basis, coeffs) if c})
        columns = []
        for z in inverse_basis:
            column = {("left", m): c for m, c in (x * z).terms.items()}
            column.update({("right", m): c for m, c in (z * x).terms.items()})
            columns.append(column)
        if solve_linear_system(columns, target, algebra.field) is not None:
            logging.info(f"Invertible inner inverse found for {a}: {x}")
            return UnitSearchReport(a, max_len, inverse_bound, examined, inner, x)
    logging.info(f"No invertible inner inverse of {a}: {inner} inner inverses among {examined} candidates")
    return UnitSearchReport(a, max_len, inverse_bound, examined, inner)
