"""Invariant deformations of the complex structure given by a (0,1)-vector form.

A VectorForm stores the coefficients of phi = sum Phi[l][m] phibar^m (x) theta_l.
Its conjugate, flagged by ``barred``, is sum conj(Phi[l][m]) phi^m (x) thetabar_l.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from nilkahler.algebra import linalg
from nilkahler.algebra.forms import InvariantForm, LinearSubstitution, contract_vector
from nilkahler.algebra.scalars import ZERO, Scalar
from nilkahler.algebra.verdict import Verdict
from nilkahler.cohomology import class_is_zero
from nilkahler.exceptions import BidegreeError, DimensionMismatchError, PreconditionError, SingularMatrixError
from nilkahler.structure import StructureEquations, del_, delbar, differential, split_apply, substitute_coframe

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VectorForm:
    matrix: tuple[tuple[Scalar, ...], ...]
    barred: bool = False

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], barred: bool = False) -> VectorForm:
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise DimensionMismatchError("a vector form needs a square coefficient matrix")
        return cls(tuple(tuple(Scalar.coerce(v) for v in row) for row in rows), barred)

    @classmethod
    def zero(cls, n: int) -> VectorForm:
        return cls.from_rows([[ZERO] * n for _ in range(n)])

    @classmethod
    def from_entries(cls, n: int, entries: dict[tuple[int, int], Scalar]) -> VectorForm:
        """Entries keyed by (lambda, mu), one-based."""
        rows = [[ZERO] * n for _ in range(n)]
        for (lam, mu), value in entries.items():
            rows[lam - 1][mu - 1] = Scalar.coerce(value)
        return cls.from_rows(rows)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def entry(self, lam: int, mu: int) -> Scalar:
        return self.matrix[lam - 1][mu - 1]

    def rows(self) -> list[list[Scalar]]:
        return [list(row) for row in self.matrix]

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.matrix for v in row)

    def conjugate(self) -> VectorForm:
        return VectorForm(self.matrix, not self.barred)

    def scale(self, t) -> VectorForm:
        t = Scalar.coerce(t)
        return VectorForm(tuple(tuple(v * t for v in row) for row in self.matrix), self.barred)

    def __str__(self):
        bar = "bar" if self.barred else ""
        terms = [f"({v})*{bar}theta{lam + 1}@{mu + 1}" for lam, row in enumerate(self.matrix)
                 for mu, v in enumerate(row) if v]
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class DeformationCurve:
    """The linear curve phi(t) = t V."""
    generator: VectorForm

    def at(self, t) -> VectorForm:
        """phi(t) at an exact parameter; floats are rejected by the scalar coercion."""
        return self.generator.scale(t)

    def derivative(self) -> VectorForm:
        return self.generator


def contract(phi: VectorForm, sigma: InvariantForm) -> InvariantForm:
    """iota_phi sigma = sum Phi[l][m] phibar^m ^ (iota_{theta_l} sigma), shifting (p,q) to (p-1,q+1)."""
    n = sigma.n
    if phi.n != n:
        raise DimensionMismatchError(f"vector form of dimension {phi.n} on a form of dimension {n}")
    result = InvariantForm.zero(n)
    for lam in range(1, n + 1):
        row = phi.matrix[lam - 1]
        if all(v.is_zero() for v in row):
            continue
        inner = contract_vector(sigma, lam, holomorphic=not phi.barred)
        if inner.is_zero():
            continue
        if phi.barred:
            eta = InvariantForm(n, {((mu + 1,), ()): v.conj() for mu, v in enumerate(row)})
        else:
            eta = InvariantForm(n, {((), (mu + 1,)): v for mu, v in enumerate(row)})
        result = result + eta.wedge(inner)
    return result


def simultaneous_contract(substitution: LinearSubstitution, sigma: InvariantForm) -> InvariantForm:
    """Apply an endomorphism to every generator of every monomial at once."""
    return substitution.apply(sigma)


def extension_substitution(phi: VectorForm) -> LinearSubstitution:
    """(I + phi + phibar): phi^i -> phi^i + sum Phi[i][m] phibar^m and the conjugate rule."""
    return LinearSubstitution.from_matrices(linalg.identity(phi.n), phi.rows())


def extension(phi: VectorForm, sigma: InvariantForm) -> InvariantForm:
    return simultaneous_contract(extension_substitution(phi), sigma)


def restriction(phi: VectorForm, form: InvariantForm) -> InvariantForm:
    """The central-fiber representative alpha with extension(phi, alpha) = form."""
    return _invert(extension_substitution(phi), "I + phi + phibar").apply(form)


def _invert(substitution: LinearSubstitution, label: str) -> LinearSubstitution:
    try:
        return substitution.inverse()
    except SingularMatrixError as error:
        determinant = linalg.determinant(substitution.matrix())
        raise SingularMatrixError(f"{label} is singular, the parameter lies beyond the radius",
                                  determinant=determinant) from error


def _block_substitution(n: int, hol: Sequence[Sequence[Scalar]],
                        anti: Sequence[Sequence[Scalar]]) -> LinearSubstitution:
    rows = [list(hol[i]) + [ZERO] * n for i in range(n)]
    rows += [[ZERO] * n + list(anti[i]) for i in range(n)]
    return LinearSubstitution.from_matrix(n, rows)


def _products(phi: VectorForm) -> tuple[list[list[Scalar]], list[list[Scalar]]]:
    P = phi.rows()
    P_bar = [[v.conj() for v in row] for row in P]
    return linalg.matmul(P, P_bar), linalg.matmul(P_bar, P)


def _minus(a: list[list[Scalar]], b: list[list[Scalar]]) -> list[list[Scalar]]:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def barred_correction(phi: VectorForm) -> LinearSubstitution:
    """(I - phibar phi): fixes phi^j, maps phibar^l to sum (I - conj(Phi) Phi)[l][v] phibar^v."""
    n = phi.n
    _, anti = _products(phi)
    return _block_substitution(n, linalg.identity(n), _minus(linalg.identity(n), anti))


def unbarred_correction(phi: VectorForm) -> LinearSubstitution:
    """(I - phi phibar): fixes phibar^j, maps phi^l to sum (I - Phi conj(Phi))[l][v] phi^v."""
    n = phi.n
    hol, _ = _products(phi)
    return _block_substitution(n, _minus(linalg.identity(n), hol), linalg.identity(n))


def _commutator(S: StructureEquations, operator, phi: VectorForm, form: InvariantForm) -> InvariantForm:
    """[op, iota_phi] = op iota_phi - iota_phi op, iota_phi being of even degree."""
    return split_apply(operator, S, contract(phi, form)) - contract(phi, split_apply(operator, S, form))


@dataclass(frozen=True)
class DeformedValue:
    """An operator value on the central fiber and its extension to M_t."""
    central: InvariantForm
    deformed: InvariantForm


def deformed_delbar(S: StructureEquations, phi: VectorForm, alpha: InvariantForm) -> DeformedValue:
    """delbar_t of extension(phi, alpha).

    central = (I - phibar phi)^-1 (x) ([del, iota_phi] + delbar) (I - phibar phi) (x) alpha.
    """
    correction = barred_correction(phi)
    inverse = _invert(correction, "I - phibar phi")
    corrected = correction.apply(alpha)
    inner = _commutator(S, del_, phi, corrected) + split_apply(delbar, S, corrected)
    central = inverse.apply(inner)
    return DeformedValue(central, extension(phi, central))


def deformed_del(S: StructureEquations, phi: VectorForm, alpha: InvariantForm) -> DeformedValue:
    """The mirror of deformed_delbar with phibar, [delbar, iota_phibar] + del and (I - phi phibar)."""
    correction = unbarred_correction(phi)
    inverse = _invert(correction, "I - phi phibar")
    corrected = correction.apply(alpha)
    inner = _commutator(S, delbar, phi.conjugate(), corrected) + split_apply(del_, S, corrected)
    central = inverse.apply(inner)
    return DeformedValue(central, extension(phi, central))


def deformed_structure(S: StructureEquations, phi: VectorForm, name: str | None = None) -> StructureEquations:
    """Structure equations of M_t in the coframe extension(phi, phi^j)."""
    n = S.n
    label = name if name is not None else f"{S.name}@deformed"
    return substitute_coframe(S, linalg.identity(n), phi.rows(), name=label)


# Maurer-Cartan

VectorValued = dict[int, InvariantForm]


def _mixed_bracket(S: StructureEquations, nu: int, lam: int) -> dict[int, Scalar]:
    """[thetabar_nu, theta_lam] projected to (1,0), read off the (1,1) parts of d phi^j."""
    return {j: image.coefficient((lam,), (nu,)) for j, image in enumerate(S.d_phi, start=1)
            if image.coefficient((lam,), (nu,))}


def _holomorphic_bracket(S: StructureEquations, lam: int, nu: int) -> dict[int, Scalar]:
    """[theta_lam, theta_nu] = -sum c^j_{lam nu} theta_j with c the (2,0) structure constants."""
    if lam == nu:
        return {}
    bracket = {}
    for j, image in enumerate(S.d_phi, start=1):
        if lam < nu:
            value = -image.coefficient((lam, nu), ())
        else:
            value = image.coefficient((nu, lam), ())
        if value:
            bracket[j] = value
    return bracket


def _add(target: VectorValued, j: int, form: InvariantForm) -> None:
    target[j] = target[j] + form if j in target else form


def vector_delbar(S: StructureEquations, phi: VectorForm) -> VectorValued:
    """delbar(eta (x) theta_l) = delbar eta (x) theta_l - eta ^ delbar theta_l."""
    n = S.n
    result: VectorValued = {}
    for lam in range(1, n + 1):
        eta = InvariantForm(n, {((), (mu,)): phi.entry(lam, mu) for mu in range(1, n + 1)})
        if eta.is_zero():
            continue
        _add(result, lam, delbar(S, eta))
        for nu in range(1, n + 1):
            for j, value in _mixed_bracket(S, nu, lam).items():
                _add(result, j, -eta.wedge(InvariantForm.generator(n, nu, True)).scale(value))
    return result


def vector_bracket(S: StructureEquations, phi: VectorForm) -> VectorValued:
    """[phi, phi] = sum Phi[l][m] Phi[v][r] phibar^m ^ phibar^r (x) [theta_l, theta_v]."""
    n = S.n
    result: VectorValued = {}
    for lam in range(1, n + 1):
        for nu in range(1, n + 1):
            bracket = _holomorphic_bracket(S, lam, nu)
            if not bracket:
                continue
            eta = InvariantForm(n, {((), (mu,)): phi.entry(lam, mu) for mu in range(1, n + 1)})
            zeta = InvariantForm(n, {((), (rho,)): phi.entry(nu, rho) for rho in range(1, n + 1)})
            product = eta.wedge(zeta)
            for j, value in bracket.items():
                _add(result, j, product.scale(value))
    return result


def maurer_cartan_check(S: StructureEquations, phi: VectorForm) -> Verdict:
    """delbar phi - 1/2 [phi, phi] = 0, returned per theta_j component."""
    if phi.barred:
        raise PreconditionError("the Maurer-Cartan equation is posed for (0,1)-vector forms")
    residual = vector_delbar(S, phi)
    for j, value in vector_bracket(S, phi).items():
        _add(residual, j, -value.scale(Fraction(1, 2)))
    residual = {j: form for j, form in sorted(residual.items()) if form}
    if residual:
        return Verdict.refuted("maurer-cartan", witness=residual)
    return Verdict.certified("maurer-cartan")


def first_order_obstruction(S: StructureEquations, V: VectorForm, omega: InvariantForm,
                            omega_prime: InvariantForm | None = None) -> tuple[InvariantForm, Verdict]:
    """Residual del iota_V Omega + delbar Omega' and the delbar-class of del iota_V Omega.

    A nonzero class rules out a smooth curve of p-Kaehler structures through Omega along V.
    """
    n = S.n
    bidegree = omega.bidegree
    if bidegree is None or bidegree[0] != bidegree[1]:
        raise BidegreeError(f"first-order obstruction needs a (p,p)-form, got {bidegree}")
    if differential(S, omega):
        raise PreconditionError("Omega is not closed, so it is not p-Kaehler")
    omega_prime = omega_prime if omega_prime is not None else InvariantForm.zero(n)
    obstruction = del_(S, contract(V, omega))
    residual = obstruction + delbar(S, omega_prime)
    verdict = class_is_zero(S, obstruction, "delbar")
    logger.info("First-order obstruction class is %s", "zero" if verdict.is_certified else "nonzero")
    return residual, verdict
