"""Invariant de Rham, Dolbeault, Bott-Chern and Aeppli cohomology.

Every group is a quotient of finite-dimensional spaces of invariant forms and
is computed by exact row reduction over the scalar field. The reported
groups are those of the invariant subcomplex.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from nilkahler.algebra import linalg
from nilkahler.algebra.forms import InvariantForm, Monomial, is_simple
from nilkahler.algebra.scalars import ZERO, Scalar
from nilkahler.algebra.verdict import Verdict
from nilkahler.exceptions import BidegreeError, NilkahlerError, NotACycleError
from nilkahler.structure import (StructureEquations, apply_operator, check_salamon, del_, delbar,
                                 require_integrable)

logger = logging.getLogger(__name__)

THEORIES = ("dR", "del", "delbar", "BC", "A")

# bidegree shift of each operator; d shifts the total degree by one
SHIFTS = {"del": (1, 0), "delbar": (0, 1), "deldelbar": (1, 1)}


@dataclass(frozen=True)
class ComplexSlice:
    """A space of invariant forms spanned by all monomials of the listed bidegrees."""
    n: int
    bidegrees: tuple[tuple[int, int], ...]

    @classmethod
    def of_bidegree(cls, n: int, p: int, q: int) -> ComplexSlice:
        if 0 <= p <= n and 0 <= q <= n:
            return cls(n, ((p, q),))
        return cls(n, ())

    @classmethod
    def of_degree(cls, n: int, r: int) -> ComplexSlice:
        return cls(n, tuple((p, r - p) for p in range(n + 1) if 0 <= r - p <= n))

    @cached_property
    def basis(self) -> tuple[Monomial, ...]:
        monomials = []
        for p, q in self.bidegrees:
            for hol in itertools.combinations(range(1, self.n + 1), p):
                for anti in itertools.combinations(range(1, self.n + 1), q):
                    monomials.append((hol, anti))
        return tuple(sorted(monomials))

    @cached_property
    def position(self) -> dict[Monomial, int]:
        return {mono: i for i, mono in enumerate(self.basis)}

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coordinates(self, form: InvariantForm) -> linalg.SparseVector:
        vector = {}
        for mono, coefficient in form.terms.items():
            if mono not in self.position:
                raise BidegreeError(f"term of bidegree {(len(mono[0]), len(mono[1]))} outside {self.bidegrees}")
            vector[self.position[mono]] = coefficient
        return vector

    def form(self, vector: linalg.SparseVector) -> InvariantForm:
        return InvariantForm(self.n, {self.basis[i]: value for i, value in vector.items()})

    def basis_form(self, i: int) -> InvariantForm:
        hol, anti = self.basis[i]
        return InvariantForm.monomial(self.n, hol, anti)


def target_slice(source: ComplexSlice, op: str) -> ComplexSlice:
    if op == "d":
        degrees = {p + q for p, q in source.bidegrees}
        return ComplexSlice.of_degree(source.n, degrees.pop() + 1) if degrees else ComplexSlice(source.n, ())
    dp, dq = SHIFTS[op]
    return ComplexSlice(source.n, tuple((p + dp, q + dq) for p, q in source.bidegrees
                                        if p + dp <= source.n and q + dq <= source.n))


def operator_matrix(S: StructureEquations, op: str, source: ComplexSlice) -> list[linalg.SparseVector]:
    """Columns are the images of the basis monomials in target-slice coordinates."""
    if op != "d":
        require_integrable(S)
    target = target_slice(source, op)
    return [target.coordinates(apply_operator(S, op, source.basis_form(i))) for i in range(source.dimension)]


def kernel(S: StructureEquations, ops: Sequence[str], source: ComplexSlice) -> list[linalg.SparseVector]:
    """Common kernel of the listed operators on a slice."""
    rows: list[linalg.SparseVector] = []
    for op in ops:
        columns = operator_matrix(S, op, source)
        transposed: dict[int, linalg.SparseVector] = {}
        for j, column in enumerate(columns):
            for i, value in column.items():
                transposed.setdefault(i, {})[j] = value
        rows.extend(transposed.values())
    return linalg.nullspace(rows, source.dimension)


@dataclass(frozen=True)
class BoundarySpace:
    """Images of the listed (operator, source slice) pairs inside a target slice."""
    target: ComplexSlice
    sources: tuple[tuple[str, ComplexSlice], ...]
    columns: list[linalg.SparseVector] = field(compare=False)
    # column index -> (operator, source slice, basis position)
    origins: list[tuple[str, ComplexSlice, int]] = field(compare=False)

    def primitive(self, solution: linalg.SparseVector) -> dict[str, InvariantForm]:
        potentials: dict[str, InvariantForm] = {}
        for j, value in solution.items():
            op, source, i = self.origins[j]
            term = source.basis_form(i).scale(value)
            potentials[op] = potentials[op] + term if op in potentials else term
        return potentials


def boundary_space(S: StructureEquations, theory: str, target: ComplexSlice) -> BoundarySpace:
    n = target.n
    sources = []
    if theory == "dR":
        degree = {p + q for p, q in target.bidegrees}
        r = degree.pop() if degree else 0
        if r >= 1:
            sources.append(("d", ComplexSlice.of_degree(n, r - 1)))
    else:
        ((p, q),) = target.bidegrees or ((None, None),)
        if p is not None:
            candidates = {"del": [("del", (p - 1, q))], "delbar": [("delbar", (p, q - 1))],
                          "BC": [("deldelbar", (p - 1, q - 1))],
                          "A": [("del", (p - 1, q)), ("delbar", (p, q - 1))]}[theory]
            for op, (a, b) in candidates:
                if a >= 0 and b >= 0:
                    sources.append((op, ComplexSlice.of_bidegree(n, a, b)))
    columns, origins = [], []
    for op, source in sources:
        images = operator_matrix(S, op, source)
        produced = target_slice(source, op)
        for i, column in enumerate(images):
            form = produced.form(column)
            columns.append(target.coordinates(form))
            origins.append((op, source, i))
    return BoundarySpace(target, tuple(sources), columns, origins)


CYCLE_OPERATORS = {"dR": ("d",), "del": ("del",), "delbar": ("delbar",), "BC": ("del", "delbar"), "A": ("deldelbar",)}


@dataclass(frozen=True)
class CohomologyGroup:
    theory: str
    degree: int | tuple[int, int]
    dimension: int
    representatives: tuple[InvariantForm, ...]
    kernel_dimension: int
    boundary_rank: int


def _slice_for(n: int, theory: str, degree) -> ComplexSlice:
    if theory not in THEORIES:
        raise NilkahlerError(f"unknown cohomology theory {theory!r}, expected one of {THEORIES}")
    if theory == "dR":
        if not isinstance(degree, int):
            raise BidegreeError("de Rham cohomology is graded by a single degree")
        return ComplexSlice.of_degree(n, degree)
    if isinstance(degree, int):
        raise BidegreeError(f"{theory} cohomology is graded by a bidegree (p,q)")
    return ComplexSlice.of_bidegree(n, *degree)


def cohomology(S: StructureEquations, theory: str, degree: int | tuple[int, int]) -> CohomologyGroup:
    """Exact dimension and a basis of representatives of an invariant cohomology group."""
    if theory != "dR":
        require_integrable(S)
    logger.debug("Computing cohomology theory=%s degree=%s", theory, degree)
    space = _slice_for(S.n, theory, degree)
    cycles = kernel(S, CYCLE_OPERATORS[theory], space)
    boundaries = boundary_space(S, theory, space)
    spanned = linalg.Echelon(boundaries.columns)
    boundary_rank = len(spanned)
    # explicit quotient basis, grown greedily on top of the boundaries
    representatives = [space.form(vector) for vector in cycles if spanned.add(vector)]
    dimension = len(cycles) - boundary_rank
    if dimension != len(representatives):
        raise NilkahlerError(f"rank-nullity gives {dimension} but the quotient basis has {len(representatives)} "
                             f"elements; the boundaries are not cycles")
    return CohomologyGroup(theory, degree, dimension, tuple(representatives), len(cycles), boundary_rank)


def betti_numbers(S: StructureEquations) -> list[int]:
    return [cohomology(S, "dR", r).dimension for r in range(2 * S.n + 1)]


def hodge_numbers(S: StructureEquations, theory: str = "delbar") -> list[list[int]]:
    return [[cohomology(S, theory, (p, q)).dimension for q in range(S.n + 1)] for p in range(S.n + 1)]


def cycle_residuals(S: StructureEquations, form: InvariantForm, theory: str) -> dict[str, InvariantForm]:
    return {op: apply_operator(S, op, form) for op in CYCLE_OPERATORS[theory]}


def _class_degree(form: InvariantForm, theory: str):
    if theory == "dR":
        degrees = form.degrees()
        if len(degrees) > 1:
            raise BidegreeError(f"de Rham classes need a form of a single degree, got degrees {degrees}")
        return degrees[0]
    return form.bidegree


def class_is_zero(S: StructureEquations, form: InvariantForm, theory: str) -> Verdict:
    """Decide whether the class of a cycle vanishes.

    Certified carries the primitives (keyed by operator); Refuted carries a
    linear functional, keyed by monomial, that kills every boundary and not
    the form.
    """
    if theory != "dR":
        require_integrable(S)
    if form.is_zero():
        return Verdict.certified("solve", primitive={})
    residuals = {op: r for op, r in cycle_residuals(S, form, theory).items() if r}
    if residuals:
        raise NotACycleError(f"form is not a {theory} cycle, residuals {residuals}")
    space = _slice_for(S.n, theory, _class_degree(form, theory))
    boundaries = boundary_space(S, theory, space)
    target = space.coordinates(form)
    solution = linalg.solve(boundaries.columns, target)
    if solution is not None:
        return Verdict.certified("solve", primitive=boundaries.primitive(solution))
    functional = linalg.separating_functional(boundaries.columns, target)
    witness = {space.basis[i]: value for i, value in functional.items()}
    logger.info("Class of a %s cycle is nonzero", theory)
    return Verdict.refuted("functional", witness=witness, value=evaluate_functional(witness, form))


def evaluate_functional(functional: dict[Monomial, Scalar], form: InvariantForm) -> Scalar:
    total = ZERO
    for mono, value in functional.items():
        total = total + value * form.coefficient(*mono)
    return total


def closed_simple_witness(S: StructureEquations, k: int) -> Verdict:
    """A nonzero simple (k,0)-form xi with del xi = delbar xi = 0."""
    n = S.n
    if not 0 <= k <= n:
        raise BidegreeError(f"no (k,0)-forms with k = {k} in dimension {n}")
    candidates = [tuple(range(1, k + 1))] if check_salamon(S).is_certified else []
    candidates += [s for s in itertools.combinations(range(1, n + 1), k) if s not in candidates]
    for indices in candidates:
        xi = InvariantForm.monomial(n, indices)
        if del_(S, xi).is_zero() and delbar(S, xi).is_zero() and is_simple(xi).is_certified:
            return Verdict.certified("monomial", xi=xi)
    return Verdict.unknown("monomial", reason=f"no closed monomial (k,0)-form with k = {k}")


SWEEP_THEORIES = {"pkahler": THEORIES, "psymplectic": ("dR",), "ppluriclosed": ("A",)}


def class_nonvanishing_sweep(S: StructureEquations, omega: InvariantForm, p: int, kind: str) -> dict[str, Verdict]:
    """Classes of a certified p-structure in every theory where a closed simple (n-p,0)-form forces them nonzero.

    Empty when no closed simple witness is found.
    """
    witness = closed_simple_witness(S, S.n - p)
    if not witness.is_certified:
        return {}
    results = {}
    for theory in SWEEP_THEORIES[kind]:
        form = omega
        if theory != "dR" and not omega.is_homogeneous():
            form = omega.component(p, p)
        results[theory] = class_is_zero(S, form, theory)
    return results


def exact_primitive(S: StructureEquations, form: InvariantForm) -> InvariantForm | None:
    """Some eta with d eta = form, or None."""
    verdict = class_is_zero(S, form, "dR")
    if verdict.is_certified:
        return verdict.certificate["primitive"].get("d", InvariantForm.zero(S.n))
    return None
