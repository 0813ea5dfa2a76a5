"""Verifiers for p-Kaehler, p-pluriclosed and p-symplectic structures, Hermitian metrics and obstructions."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from nilkahler import config
from nilkahler.algebra import linalg
from nilkahler.algebra.forms import InvariantForm, is_simple
from nilkahler.algebra.scalars import ONE, Scalar, sigma
from nilkahler.algebra.verdict import Verdict
from nilkahler.cohomology import ComplexSlice, boundary_space, exact_primitive
from nilkahler.exceptions import BidegreeError, NotACycleError, PreconditionError, RealityError
from nilkahler.structure import StructureEquations, del_, deldelbar, delbar, differential, split_apply
from nilkahler import transversality

logger = logging.getLogger(__name__)

STRUCTURE_KINDS = ("pkahler", "ppluriclosed", "psymplectic")
METRIC_KINDS = ("kahler", "balanced", "skt", "astheno", "gauduchon", "strongly_gauduchon")


@dataclass(frozen=True)
class StructureReport:
    """Exact closedness residual together with the transversality verdict."""
    kind: str
    p: int
    residual: InvariantForm
    transversality: Verdict
    diagnostics: dict = field(default_factory=dict)

    @property
    def closed(self) -> bool:
        return self.residual.is_zero()

    @property
    def verdict(self) -> Verdict:
        if not self.closed:
            return Verdict.refuted("closedness", witness=self.residual, kind=self.kind, p=self.p)
        if self.transversality.is_refuted:
            return Verdict.refuted("transversality", witness=self.transversality.witness, kind=self.kind, p=self.p)
        if self.transversality.is_certified:
            return Verdict.certified(self.kind, p=self.p, transversality=self.transversality.method)
        return Verdict.unknown(self.kind, p=self.p, transversality=self.transversality.diagnostics)


def _require_real_pp(omega: InvariantForm, p: int) -> None:
    if omega and omega.bidegree != (p, p):
        raise BidegreeError(f"expected a ({p},{p})-form, got bidegree {omega.bidegree}")
    if not omega.is_real():
        raise RealityError("p-structures are real forms")


def check_pkahler(S: StructureEquations, omega: InvariantForm, p: int, method: str = "auto",
                  seed: int = config.DEFAULT_SEED) -> StructureReport:
    _require_real_pp(omega, p)
    residual = differential(S, omega)
    return StructureReport("pkahler", p, residual, transversality.certify(omega, method, seed=seed, p=p))


def check_ppluriclosed(S: StructureEquations, omega: InvariantForm, p: int, method: str = "auto",
                       seed: int = config.DEFAULT_SEED) -> StructureReport:
    _require_real_pp(omega, p)
    residual = deldelbar(S, omega)
    return StructureReport("ppluriclosed", p, residual, transversality.certify(omega, method, seed=seed, p=p))


def symplectic_cascade(S: StructureEquations, psi: InvariantForm) -> list[tuple[tuple[int, int], InvariantForm]]:
    """Each bidegree component of d psi as del psi^{a-1,b} + delbar psi^{a,b-1}."""
    cascade = []
    n = S.n
    if psi.is_zero():
        return cascade
    total = psi.degrees()[0] + 1
    for a in range(total + 1):
        b = total - a
        if a > n or b > n or b < 0:
            continue
        left = psi.component(a - 1, b) if a >= 1 else InvariantForm.zero(n)
        right = psi.component(a, b - 1) if b >= 1 else InvariantForm.zero(n)
        value = del_(S, left) + delbar(S, right)
        cascade.append(((a, b), value))
    return cascade


def check_psymplectic(S: StructureEquations, psi: InvariantForm, p: int, method: str = "auto",
                      seed: int = config.DEFAULT_SEED) -> StructureReport:
    if psi and psi.degrees() != [2 * p]:
        raise BidegreeError(f"a {p}-symplectic form has degree {2 * p}, got degrees {psi.degrees()}")
    if not psi.is_real():
        raise RealityError("p-symplectic forms are real")
    residual = differential(S, psi)
    cascade = symplectic_cascade(S, psi)
    failing = [bidegree for bidegree, value in cascade if value]
    if failing:
        logger.info("p-symplectic cascade fails in bidegrees %s", failing)
    verdict = transversality.certify(psi.component(p, p), method, seed=seed, p=p)
    return StructureReport("psymplectic", p, residual, verdict, diagnostics={"cascade": cascade, "failing": failing})


# Hermitian metrics

def _check_metric_matrix(H: Sequence[Sequence]) -> list[list[Scalar]]:
    rows = [[Scalar.coerce(v) for v in row] for row in H]
    if not linalg.is_hermitian(rows):
        raise RealityError("a metric matrix must be Hermitian")
    _, witness = linalg.hermitian_decomposition(rows)
    if witness is not None:
        raise PreconditionError(f"metric matrix is not positive definite, x*Hx <= 0 at x = {witness}")
    return rows


def metric_form(H: Sequence[Sequence]) -> InvariantForm:
    """The fundamental form (i/2) sum H_jk phi^j ^ phibar^k."""
    rows = _check_metric_matrix(H)
    n = len(rows)
    half_i = Scalar(0, Fraction(1, 2))
    terms = {((j + 1,), (k + 1,)): rows[j][k] * half_i for j in range(n) for k in range(n)}
    return InvariantForm(n, terms)


def metric_power(H: Sequence[Sequence], p: int) -> InvariantForm:
    return metric_form(H).power(p)


def identity_metric(n: int) -> list[list[Scalar]]:
    return linalg.identity(n)


def check_metric(S: StructureEquations, H: Sequence[Sequence], kind: str) -> StructureReport:
    """Defining residual of a metric condition; transversality is positive definiteness of H."""
    n = S.n
    omega = metric_form(H)
    positivity = transversality.hermitian_check(omega, 1)
    diagnostics = {}
    if kind == "kahler":
        residual = differential(S, omega)
    elif kind == "balanced":
        residual = differential(S, omega.power(n - 1))
    elif kind == "skt":
        residual = deldelbar(S, omega)
    elif kind == "astheno":
        residual = deldelbar(S, omega.power(n - 2)) if n >= 2 else InvariantForm.zero(n)
    elif kind == "gauduchon":
        residual = deldelbar(S, omega.power(n - 1))
    elif kind == "strongly_gauduchon":
        target = del_(S, omega.power(n - 1))
        residual = target
        if target:
            boundaries = boundary_space(S, "delbar", ComplexSlice.of_bidegree(n, n, n - 1))
            solution = linalg.solve(boundaries.columns, boundaries.target.coordinates(target))
            if solution is not None:
                diagnostics["primitive"] = boundaries.primitive(solution).get("delbar")
                residual = InvariantForm.zero(n)
    else:
        raise PreconditionError(f"unknown metric kind {kind!r}, expected one of {METRIC_KINDS}")
    return StructureReport(kind, 1, residual, positivity, diagnostics=diagnostics)


# obstruction certificates

@dataclass(frozen=True)
class ObstructionCertificate:
    """ab: zeta simple, delbar-closed and equal to del alpha. stokes: d gamma = c sigma_k beta ^ conj(beta)."""
    kind: str
    form: InvariantForm
    potential: InvariantForm | None = None
    beta: InvariantForm | None = None
    c: Scalar = ONE

    @property
    def degenerate(self) -> bool:
        return self.form.is_zero()


def ab_witness_verify(S: StructureEquations, cert: ObstructionCertificate, p: int) -> Verdict:
    """Certified means no p-Kaehler structure exists at the invariant level."""
    k = S.n - p
    zeta = cert.form
    if cert.kind != "ab":
        return Verdict.refuted("ab", witness="kind", kind=cert.kind)
    if zeta.is_zero():
        return Verdict.refuted("ab", witness="nonvanishing")
    if zeta.bidegree != (k, 0):
        return Verdict.refuted("ab", witness="bidegree", bidegree=zeta.bidegree, expected=(k, 0))
    simple = is_simple(zeta)
    if not simple.is_certified:
        return Verdict.refuted("ab", witness="simplicity", contraction=simple.witness)
    closed = delbar(S, zeta)
    if closed:
        return Verdict.refuted("ab", witness="delbar-closed", residual=closed)
    alpha = cert.potential if cert.potential is not None else InvariantForm.zero(S.n)
    exact = zeta - split_apply(del_, S, alpha)
    if exact:
        return Verdict.refuted("ab", witness="del-exact", residual=exact)
    return Verdict.certified("ab", zeta=zeta, alpha=alpha, factors=simple.certificate["factors"])


def promote_witness(S: StructureEquations, cert: ObstructionCertificate, j: int) -> ObstructionCertificate:
    """zeta' = -phi^j ^ zeta with potential phi^j ^ alpha, for a closed generator phi^j."""
    if S.d_phi[j - 1]:
        raise PreconditionError(f"promotion needs d phi{j} = 0, got {S.d_phi[j - 1]}")
    phi = InvariantForm.generator(S.n, j)
    alpha = cert.potential if cert.potential is not None else InvariantForm.zero(S.n)
    promoted = ObstructionCertificate("ab", -phi.wedge(cert.form), phi.wedge(alpha))
    if promoted.degenerate:
        logger.warning("Promotion by phi%d kills the witness, try another closed generator", j)
    return promoted


def stokes_witness_verify(S: StructureEquations, cert: ObstructionCertificate, p: int) -> Verdict:
    k = S.n - p
    beta = cert.beta
    if cert.kind != "stokes" or beta is None:
        return Verdict.refuted("stokes", witness="kind", kind=cert.kind)
    if beta.is_zero() or beta.bidegree != (k, 0):
        return Verdict.refuted("stokes", witness="bidegree", expected=(k, 0))
    if not is_simple(beta).is_certified:
        return Verdict.refuted("stokes", witness="simplicity")
    c = Scalar.coerce(cert.c)
    if not c.is_real() or c <= 0:
        return Verdict.refuted("stokes", witness="positivity", c=c)
    residual = differential(S, cert.form) - beta.wedge(beta.conjugate()).scale(sigma(k) * c)
    if residual:
        return Verdict.refuted("stokes", witness="exactness", residual=residual)
    return Verdict.certified("stokes", gamma=cert.form, beta=beta, c=c)


def balanced_promotion(S: StructureEquations, omega: InvariantForm, a: int, b: int, method: str = "auto",
                       seed: int = config.DEFAULT_SEED) -> StructureReport:
    """Omega_1 = sigma_1 (Omega ^ phi^{a abar} + Omega ^ phi^{b bbar}) from a closed (n-2,n-2)-form."""
    n = S.n
    _require_real_pp(omega, n - 2)
    for j in (a, b):
        if S.d_phi[j - 1]:
            raise PreconditionError(f"balanced promotion needs d phi{j} = 0")
    if differential(S, omega):
        raise PreconditionError("balanced promotion needs a closed (n-2)-Kaehler form")
    pair = InvariantForm.monomial(n, (a,), (a,)) + InvariantForm.monomial(n, (b,), (b,))
    promoted = omega.wedge(pair).scale(sigma(1))
    report = check_pkahler(S, promoted, n - 1, method=method, seed=seed)
    return StructureReport("balanced", n - 1, report.residual, report.transversality,
                           diagnostics={"omega1": promoted})


# bounded witness searches; a failure proves nothing

def _del_exact_potential(S: StructureEquations, zeta: InvariantForm, k: int) -> InvariantForm | None:
    if k == 0:
        return None
    boundaries = boundary_space(S, "del", ComplexSlice.of_bidegree(S.n, k, 0))
    solution = linalg.solve(boundaries.columns, boundaries.target.coordinates(zeta))
    if solution is None:
        return None
    return boundaries.primitive(solution).get("del", InvariantForm.zero(S.n))


def search_ab_witness(S: StructureEquations, k: int) -> ObstructionCertificate | None:
    """Monomials, then pairs phi^K + c phi^L with c from a small coefficient set."""
    n = S.n
    monomials = [InvariantForm.monomial(n, s) for s in itertools.combinations(range(1, n + 1), k)]
    candidates = list(monomials)
    candidates += [x + y.scale(c) for x, y in itertools.combinations(monomials, 2)
                   for c in config.WITNESS_SEARCH_SCALARS]
    for zeta in candidates:
        if delbar(S, zeta) or not is_simple(zeta).is_certified:
            continue
        alpha = _del_exact_potential(S, zeta, k)
        if alpha is not None:
            logger.info("Found an ab witness %s", zeta)
            return ObstructionCertificate("ab", zeta, alpha)
    return None


def search_stokes_witness(S: StructureEquations, k: int) -> ObstructionCertificate | None:
    """Monomial beta and gamma from an exact solve of d gamma = sigma_k beta ^ conj(beta)."""
    n = S.n
    for s in itertools.combinations(range(1, n + 1), k):
        beta = InvariantForm.monomial(n, s)
        target = beta.wedge(beta.conjugate()).scale(sigma(k))
        try:
            gamma = exact_primitive(S, target)
        except NotACycleError:
            continue
        if gamma is not None:
            logger.info("Found a Stokes witness with beta %s", beta)
            return ObstructionCertificate("stokes", gamma, beta=beta, c=ONE)
    return None
