"""Structure equations of invariant complex nilmanifolds and their differentials."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from nilkahler.algebra.forms import InvariantForm, LinearSubstitution, Monomial
from nilkahler.algebra.scalars import ZERO, Scalar
from nilkahler.algebra.verdict import Verdict
from nilkahler.exceptions import BidegreeError, DimensionMismatchError, NilkahlerError, NotIntegrableError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StructureEquations:
    """Dimension n and the values d(phi^j), j = 1..n."""
    n: int
    d_phi: tuple[InvariantForm, ...]
    name: str = ""
    params: tuple[tuple[str, Scalar], ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.d_phi) != self.n:
            raise DimensionMismatchError(
                f"{self.n} generators need {self.n} structure equations, got {len(self.d_phi)}")
        for j, image in enumerate(self.d_phi, start=1):
            if image.n != self.n:
                raise DimensionMismatchError(f"d phi{j} lives in dimension {image.n}, expected {self.n}")
            if any(p + q != 2 for p, q in image.bidegrees()):
                raise BidegreeError(f"d phi{j} must be a 2-form, got bidegrees {image.bidegrees()}")

    @classmethod
    def abelian(cls, n: int, name: str = "") -> StructureEquations:
        return cls(n, tuple(InvariantForm.zero(n) for _ in range(n)), name=name or f"torus{n}")

    def param(self, name: str) -> Scalar:
        return dict(self.params)[name]

    def generator_differential(self, j: int, conjugate: bool = False) -> InvariantForm:
        image = self.d_phi[j - 1]
        return image.conjugate() if conjugate else image

    def monomial_differential(self, mono: Monomial) -> InvariantForm:
        """d of a single monomial with coefficient one, by the Leibniz rule."""
        cached = self._cache.get(mono)
        if cached is not None:
            return cached
        hol, anti = mono
        n = self.n
        factors = [(j, False) for j in hol] + [(j, True) for j in anti]
        result = InvariantForm.zero(n)
        for r, (j, conj) in enumerate(factors):
            image = self.generator_differential(j, conj)
            if image.is_zero():
                continue
            before, after = factors[:r], factors[r + 1:]
            prefix = InvariantForm.monomial(n, [k for k, c in before if not c], [k for k, c in before if c])
            suffix = InvariantForm.monomial(n, [k for k, c in after if not c], [k for k, c in after if c])
            term = prefix.wedge(image).wedge(suffix)
            result = result - term if r % 2 else result + term
        self._cache[mono] = result
        return result


def differential(S: StructureEquations, a: InvariantForm) -> InvariantForm:
    """The exterior derivative extended from the structure equations."""
    if a.n != S.n:
        raise DimensionMismatchError(f"form of dimension {a.n} on structure of dimension {S.n}")
    terms: dict[Monomial, Scalar] = {}
    for mono, coefficient in a.terms.items():
        for image, value in S.monomial_differential(mono).terms.items():
            terms[image] = terms.get(image, ZERO) + coefficient * value
    return InvariantForm(S.n, terms)


def _homogeneous(a: InvariantForm) -> tuple[int, int] | None:
    if not a.is_homogeneous():
        raise BidegreeError(f"del/delbar need a homogeneous form, got bidegrees {a.bidegrees()}")
    return a.bidegree


def del_(S: StructureEquations, a: InvariantForm) -> InvariantForm:
    """The (p+1,q) part of da."""
    bidegree = _homogeneous(a)
    if bidegree is None:
        return a
    p, q = bidegree
    return differential(S, a).component(p + 1, q)


def delbar(S: StructureEquations, a: InvariantForm) -> InvariantForm:
    """The (p,q+1) part of da."""
    bidegree = _homogeneous(a)
    if bidegree is None:
        return a
    p, q = bidegree
    return differential(S, a).component(p, q + 1)


def deldelbar(S: StructureEquations, a: InvariantForm) -> InvariantForm:
    return del_(S, delbar(S, a))


def split_apply(operator, S: StructureEquations, a: InvariantForm) -> InvariantForm:
    """Apply a bidegree operator to each homogeneous component and sum."""
    result = InvariantForm.zero(S.n)
    for component in a.bidegree_components().values():
        result = result + operator(S, component)
    return result


def apply_operator(S: StructureEquations, name: str, a: InvariantForm) -> InvariantForm:
    operators = {"d": None, "del": del_, "delbar": delbar, "deldelbar": deldelbar}
    if name not in operators:
        raise NilkahlerError(f"unknown operator {name!r}, expected one of {sorted(operators)}")
    if name == "d":
        return differential(S, a)
    return split_apply(operators[name], S, a)


def check_d_squared(S: StructureEquations) -> Verdict:
    """d(d phi^j) = 0 for every generator, the Jacobi identity of the structure constants."""
    for j in range(1, S.n + 1):
        residual = differential(S, S.d_phi[j - 1])
        if residual:
            return Verdict.refuted("jacobi", witness=(j, residual))
    return Verdict.certified("jacobi")


def check_integrable(S: StructureEquations) -> Verdict:
    for j, image in enumerate(S.d_phi, start=1):
        part = image.component(0, 2)
        if part:
            return Verdict.refuted("structure", witness=(j, "(0,2)", part))
    jacobi = check_d_squared(S)
    if jacobi.is_refuted:
        j, residual = jacobi.witness
        return Verdict.refuted("structure", witness=(j, "d^2", residual))
    return Verdict.certified("structure")


def _first_bad_term(S: StructureEquations, predicate) -> tuple | None:
    for j, image in enumerate(S.d_phi, start=1):
        for mono, _ in image.items():
            if not predicate(j, mono):
                return j, mono
    return None


def check_nilpotent_coframe(S: StructureEquations) -> Verdict:
    """Every term of d phi^j only involves indices below j, in both blocks."""
    bad = _first_bad_term(S, lambda j, mono: all(k < j for k in mono[0] + mono[1]))
    return Verdict.refuted("coframe", witness=bad) if bad else Verdict.certified("coframe")


def check_parallelizable(S: StructureEquations) -> Verdict:
    """The nilpotent pattern with every d phi^j of pure type (2,0)."""
    nilpotent = check_nilpotent_coframe(S)
    if nilpotent.is_refuted:
        return nilpotent
    bad = _first_bad_term(S, lambda j, mono: not mono[1])
    return Verdict.refuted("coframe", witness=bad) if bad else Verdict.certified("coframe")


def check_salamon(S: StructureEquations) -> Verdict:
    """d phi^j lies in the ideal generated by phi^1..phi^(j-1)."""
    bad = _first_bad_term(S, lambda j, mono: any(k < j for k in mono[0]))
    return Verdict.refuted("coframe", witness=bad) if bad else Verdict.certified("coframe")


@dataclass(frozen=True)
class StructureFlags:
    integrable: bool
    nilpotent_coframe: bool
    holomorphically_parallelizable: bool
    salamon_filtration: bool


def structure_flags(S: StructureEquations) -> StructureFlags:
    return StructureFlags(
        integrable=check_integrable(S).is_certified,
        nilpotent_coframe=check_nilpotent_coframe(S).is_certified,
        holomorphically_parallelizable=check_parallelizable(S).is_certified,
        salamon_filtration=check_salamon(S).is_certified,
    )


def require_integrable(S: StructureEquations) -> None:
    verdict = check_integrable(S)
    if not verdict.is_certified:
        raise NotIntegrableError(f"structure {S.name or '<anonymous>'} is not integrable: {verdict.witness[:2]}")


def substitute_coframe(S: StructureEquations, hol_part: Sequence[Sequence], anti_part: Sequence[Sequence] | None = None,
                       name: str | None = None) -> StructureEquations:
    """Structure equations in the coframe psi^i = sum_k P[i][k] phi^k + Q[i][k] phibar^k."""
    n = S.n
    if anti_part is None:
        anti_part = [[ZERO] * n for _ in range(n)]
    change = LinearSubstitution.from_matrices(hol_part, anti_part)
    back = change.inverse()
    d_psi = tuple(back.apply(differential(S, change.images[i])) for i in range(n))
    logger.debug("Substituted coframe on %s", S.name)
    return StructureEquations(n, d_psi, name=name if name is not None else S.name, params=S.params)
