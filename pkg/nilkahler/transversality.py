"""Certification and refutation of transversality of real (p,p)-forms.

The positivity pairing of a (k,0)-form beta, k = n - p, is the coefficient c
with sigma_k Omega ^ beta ^ conj(beta) = c Vol. Written in the Plucker
coordinates b of beta it is the Hermitian form b* G b; G is the pairing
matrix below and every method in this module works through it.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

from nilkahler import config
from nilkahler.algebra import linalg
from nilkahler.algebra.forms import InvariantForm, monomial_wedge, volume_coefficient, wedge_all
from nilkahler.algebra.scalars import ONE, ZERO, Scalar, sigma
from nilkahler.algebra.verdict import Verdict
from nilkahler.exceptions import BidegreeError, DimensionMismatchError, PreconditionError, RealityError

logger = logging.getLogger(__name__)

# Omega^1..Omega^6: w^12, w^13, w^14, w^23, -w^24, w^34
CONE_BASIS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
CONE_SIGNS = (1, 1, 1, 1, -1, 1)
LEMMA_DIAGONAL = (4, 1, 4, 1, 1, 1)


def _real_pp(omega: InvariantForm) -> int:
    """Validate a real (p,p)-form and return p."""
    bidegree = omega.bidegree
    if bidegree is None:
        raise BidegreeError("transversality of the zero form needs an explicit degree")
    p, q = bidegree
    if p != q:
        raise BidegreeError(f"transversality is defined for (p,p)-forms, got ({p},{q})")
    if not omega.is_real():
        raise RealityError("transversality is defined for real forms")
    return p


def subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(1, n + 1), k))


def pairing(omega: InvariantForm, beta: InvariantForm) -> Scalar:
    """volume_coefficient(sigma_k Omega ^ beta ^ conj(beta)) for a (k,0)-form beta."""
    if omega.n != beta.n:
        raise DimensionMismatchError("pairing of forms of different dimension")
    k = beta.bidegree[0] if beta else 0
    top = omega.wedge(beta).wedge(beta.conjugate())
    return volume_coefficient(top) * sigma(k)


def pairing_matrix(omega: InvariantForm, p: int) -> tuple[list[tuple[int, ...]], list[list[Scalar]]]:
    """Hermitian G over k-subsets with pairing(beta) = sum conj(b_K) G[K][L] b_L."""
    n = omega.n
    k = n - p
    index = subsets(n, k)
    position = {s: i for i, s in enumerate(index)}
    full = set(range(1, n + 1))
    G = [[ZERO] * len(index) for _ in index]
    scale = sigma(k) / sigma(n)
    for (hol, anti), coefficient in omega.terms.items():
        if len(hol) != p or len(anti) != p:
            continue
        cols = tuple(sorted(full - set(hol)))
        rows = tuple(sorted(full - set(anti)))
        sign1, mono = monomial_wedge((hol, anti), (cols, ()))
        sign2, _ = monomial_wedge(mono, ((), rows))
        G[position[rows]][position[cols]] += coefficient * scale * (sign1 * sign2)
    return index, G


def plucker_vector(beta: InvariantForm, index: Sequence[tuple[int, ...]]) -> list[Scalar]:
    return [beta.coefficient(s) for s in index]


def form_from_plucker(n: int, index: Sequence[tuple[int, ...]], vector: Sequence[Scalar]) -> InvariantForm:
    return InvariantForm(n, {(s, ()): value for s, value in zip(index, vector)})


def simple_form(rows: Sequence[Sequence[Scalar]]) -> InvariantForm:
    """psi^1 ^ ... ^ psi^k for (1,0)-forms given by their coordinates."""
    n = len(rows[0])
    factors = [InvariantForm(n, {((a + 1,), ()): value for a, value in enumerate(row)}) for row in rows]
    return wedge_all(n, factors)


# the quadric cone of (2,2)-forms in dimension 4

@dataclass(frozen=True)
class ConeMatrix:
    """The Hermitian matrix A with sigma = sum a_jk Omega^j ^ conj(Omega^k)."""
    entries: tuple[tuple[Scalar, ...], ...]

    def entry(self, j: int, k: int) -> Scalar:
        return self.entries[j - 1][k - 1]

    def rows(self) -> list[list[Scalar]]:
        return [list(row) for row in self.entries]


def cone_basis_form(j: int) -> InvariantForm:
    return InvariantForm.monomial(4, CONE_BASIS[j - 1], (), CONE_SIGNS[j - 1])


def form_from_cone_matrix(matrix: ConeMatrix | Sequence[Sequence]) -> InvariantForm:
    rows = matrix.rows() if isinstance(matrix, ConeMatrix) else matrix
    terms = {}
    for j in range(6):
        for k in range(6):
            value = Scalar.coerce(rows[j][k])
            if value:
                terms[(CONE_BASIS[j], CONE_BASIS[k])] = value * (CONE_SIGNS[j] * CONE_SIGNS[k])
    return InvariantForm(4, terms)


def lemma_matrix(a, b, diagonal: Sequence = LEMMA_DIAGONAL) -> ConeMatrix:
    """diag(4,1,4,1,1,1) with a, conj(a) in the (2,5) slots and b, conj(b) in the (3,4) slots."""
    a, b = Scalar.coerce(a), Scalar.coerce(b)
    rows = [[Scalar.coerce(diagonal[j]) if j == k else ZERO for k in range(6)] for j in range(6)]
    rows[1][4], rows[4][1] = a, a.conj()
    rows[2][3], rows[3][2] = b, b.conj()
    return ConeMatrix(tuple(tuple(row) for row in rows))


def lemma_form(a, b) -> InvariantForm:
    """The (2,2)-form Omega_{a,b} on C^4."""
    return form_from_cone_matrix(lemma_matrix(a, b))


def cone_matrix(form: InvariantForm) -> ConeMatrix:
    if form.n != 4:
        raise DimensionMismatchError(f"cone matrices are defined for n = 4, got n = {form.n}")
    if form and form.bidegree != (2, 2):
        raise BidegreeError(f"cone matrices are defined for (2,2)-forms, got {form.bidegree}")
    if not form.is_real():
        raise RealityError("cone matrices are defined for real forms")
    rows = tuple(
        tuple(form.coefficient(CONE_BASIS[j], CONE_BASIS[k]) * (CONE_SIGNS[j] * CONE_SIGNS[k]) for k in range(6))
        for j in range(6)
    )
    return ConeMatrix(rows)


def cone_value(matrix: ConeMatrix, z: Sequence) -> tuple[Scalar, bool]:
    """(conj(z) A z^t, whether z lies on z1 z6 + z2 z5 + z3 z4 = 0)."""
    z = [Scalar.coerce(v) for v in z]
    value = linalg.hermitian_value(matrix.rows(), z)
    on_cone = (z[0] * z[5] + z[1] * z[4] + z[2] * z[3]).is_zero()
    return value, on_cone


def cone_vector_form(z: Sequence) -> InvariantForm:
    """The (2,0)-form whose pairing against sigma equals 4 cone_value(A_sigma, z)."""
    z = [Scalar.coerce(v) for v in z]
    result = InvariantForm.zero(4)
    for j in range(1, 7):
        result = result + cone_basis_form(j).scale(z[6 - j].conj())
    return result


def lemma_chain_check(matrix: ConeMatrix) -> Verdict:
    """The inequality chain: block-wise AM-GM on the (1,6), (2,5), (3,4) pairs.

    Certified when the diagonal is positive, |a|^2 <= d2 d5, |b|^2 <= d3 d4 and
    at most one of the two bounds is attained.
    """
    A = matrix.entries
    allowed = {(j, j) for j in range(6)} | {(1, 4), (4, 1), (2, 3), (3, 2)}
    stray = [(j + 1, k + 1) for j in range(6) for k in range(6) if (j, k) not in allowed and A[j][k]]
    if stray:
        return Verdict.unknown("chain", reason="pattern mismatch", entries=stray)
    diagonal = [A[j][j] for j in range(6)]
    if any(not d.is_real() or d <= 0 for d in diagonal):
        return Verdict.unknown("chain", reason="non-positive diagonal", diagonal=diagonal)
    a, b = A[1][4], A[2][3]
    slack_a = diagonal[1] * diagonal[4] - a.abs2()
    slack_b = diagonal[2] * diagonal[3] - b.abs2()
    if slack_a < 0 or slack_b < 0:
        return Verdict.unknown("chain", reason="off-diagonal bound exceeded", slack_a=slack_a, slack_b=slack_b)
    if slack_a.is_zero() and slack_b.is_zero():
        return Verdict.unknown("chain", reason="both blocks degenerate", slack_a=slack_a, slack_b=slack_b)
    return Verdict.certified("chain", slack_a=slack_a, slack_b=slack_b)


# exact methods

def hermitian_check(omega: InvariantForm, p: int | None = None) -> Verdict:
    """Exact decision when every (k,0)-form is simple, k in {0, 1, n-1, n}."""
    n = omega.n
    p = _real_pp(omega) if p is None else p
    k = n - p
    if k not in (0, 1, n - 1, n):
        return Verdict.unknown("hermitian", reason=f"k = {k} admits non-simple forms")
    index, G = pairing_matrix(omega, p)
    pivots, witness = linalg.hermitian_decomposition(G)
    if witness is None:
        return Verdict.certified("hermitian", pivots=pivots)
    beta = form_from_plucker(n, index, witness)
    value = pairing(omega, beta)
    return Verdict.refuted("hermitian", witness=beta, value=value)


def _diagonal_refutation(omega: InvariantForm, p: int, method: str) -> Verdict | None:
    index, G = pairing_matrix(omega, p)
    for i, s in enumerate(index):
        if G[i][i] <= 0:
            beta = InvariantForm.monomial(omega.n, s)
            return Verdict.refuted(method, witness=beta, value=pairing(omega, beta))
    return None


def split_rule(omega: InvariantForm, direction: int, p: int | None = None) -> Verdict:
    """Certify Omega = Omega_0 + sigma_1 phi^{j jbar} ^ F by certifying both pieces on the other generators."""
    n = omega.n
    p = _real_pp(omega) if p is None else p
    j = direction
    rest_terms, f_terms, cross_terms = {}, {}, {}
    for (hol, anti), coefficient in omega.terms.items():
        if j not in hol and j not in anti:
            rest_terms[(hol, anti)] = coefficient
        elif j in hol and j in anti:
            reduced = (tuple(x for x in hol if x != j), tuple(x for x in anti if x != j))
            sign, _ = monomial_wedge(((j,), (j,)), reduced)
            f_terms[reduced] = coefficient / sigma(1) * sign
        else:
            cross_terms[(hol, anti)] = coefficient
    if cross_terms:
        return Verdict.unknown("split", direction=j, cross_terms=InvariantForm(n, cross_terms))
    relabel = {x: x if x < j else x - 1 for x in range(1, n + 1) if x != j}
    rest = InvariantForm(n, rest_terms).map_indices(relabel, n - 1)
    factor = InvariantForm(n, f_terms).map_indices(relabel, n - 1)
    rest_verdict = _exact_certify(rest, p)
    factor_verdict = _exact_certify(factor, p - 1)
    diagnostics = {"direction": j, "rest": rest, "factor": factor,
                   "rest_verdict": rest_verdict, "factor_verdict": factor_verdict}
    if rest_verdict.is_certified and factor_verdict.is_certified:
        return Verdict.certified("split", **diagnostics)
    return Verdict.unknown("split", **diagnostics)


def _exact_certify(omega: InvariantForm, p: int) -> Verdict:
    """Exact methods only, used inside the split recursion."""
    n = omega.n
    if p > n or p < 0:
        if omega.is_zero():
            return Verdict.certified("vacuous")
        return Verdict.unknown("vacuous", reason="nonzero form above top degree")
    if omega.is_zero():
        return Verdict.refuted("hermitian", witness=InvariantForm.monomial(n, range(1, n - p + 1)), value=ZERO)
    if omega.bidegree != (p, p) or not omega.is_real():
        return Verdict.unknown("exact", reason="not a real (p,p)-form")
    k = n - p
    if k in (0, 1, n - 1, n):
        return hermitian_check(omega, p)
    if n == 4 and p == 2:
        chain = lemma_chain_check(cone_matrix(omega))
        if chain.is_certified:
            return chain
    last = Verdict.unknown("split", reason="no direction splits")
    for direction in range(n, 0, -1):
        verdict = split_rule(omega, direction, p)
        if verdict.is_certified:
            return verdict
        last = verdict
    return last


# sampling and numeric minimization

def transverse_falsify(omega: InvariantForm, k: int | None = None, trials: int = config.FALSIFY_TRIALS,
                       seed: int = config.DEFAULT_SEED, bound: int = config.FALSIFY_COORDINATE_BOUND) -> Verdict:
    """Exact evaluation of the pairing on pseudo-random simple forms with small Gaussian-integer factors."""
    n = omega.n
    p = _real_pp(omega)
    if k is not None and k != n - p:
        raise BidegreeError(f"k must be n - p = {n - p}, got {k}")
    k = n - p
    index, G = pairing_matrix(omega, p)
    rng = np.random.default_rng(seed)
    evaluated = 0
    for _ in range(trials):
        parts = rng.integers(-bound, bound + 1, size=(2, k, n))
        rows = [[Scalar(int(parts[0, r, a]), int(parts[1, r, a])) for a in range(n)] for r in range(k)]
        beta = simple_form(rows) if k else InvariantForm.constant(n, ONE)
        if beta.is_zero():
            continue
        evaluated += 1
        value = linalg.hermitian_value(G, plucker_vector(beta, index))
        if value <= 0:
            exact = pairing(omega, beta)
            logger.info("Sampling refuted transversality after %d samples", evaluated)
            return Verdict.refuted("sample", witness=beta, value=exact, factors=rows)
    return Verdict.unknown("sample", trials=evaluated)


def rationalize(value: complex, max_denominator: int = config.RATIONALIZE_MAX_DENOMINATOR) -> Scalar:
    return Scalar(Fraction(value.real).limit_denominator(max_denominator),
                  Fraction(value.imag).limit_denominator(max_denominator))


def _numeric_matrix(G: list[list[Scalar]]) -> np.ndarray:
    return np.array([[complex(v) for v in row] for row in G], dtype=complex)


def _coefficient_map(frame: np.ndarray, j: int, index: Sequence[tuple[int, ...]]) -> np.ndarray:
    """C with Plucker(frame) = C @ frame[j] as a function of row j."""
    k, n = frame.shape
    C = np.zeros((len(index), n), dtype=complex)
    for a in range(n):
        trial = frame.copy()
        trial[j] = 0
        trial[j, a] = 1
        for i, s in enumerate(index):
            C[i, a] = np.linalg.det(trial[:, [x - 1 for x in s]]) if k else 1
    return C


def _plucker(frame: np.ndarray, index: Sequence[tuple[int, ...]]) -> np.ndarray:
    return np.array([np.linalg.det(frame[:, [x - 1 for x in s]]) for s in index], dtype=complex)


def _minimize_restart(Gf: np.ndarray, index, n: int, k: int, rng: np.random.Generator,
                      iterations: int) -> tuple[float, np.ndarray, int]:
    start = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    frame = np.linalg.qr(start)[0].T.copy()
    value = float("inf")
    steps = 0
    for steps in range(1, iterations + 1):
        previous = value
        for j in range(k):
            C = _coefficient_map(frame, j, index)
            H = C.conj().T @ Gf @ C
            H = (H + H.conj().T) / 2
            others = np.delete(frame, j, axis=0)
            Q = scipy.linalg.null_space(others.conj()) if len(others) else np.eye(n, dtype=complex)
            eigenvalues, eigenvectors = scipy.linalg.eigh(Q.conj().T @ H @ Q)
            frame[j] = Q @ eigenvectors[:, 0]
            value = float(eigenvalues[0])
        if abs(previous - value) < config.MINIMIZER_CONVERGENCE:
            break
    b = _plucker(frame, index)
    value = float(np.real(b.conj() @ Gf @ b))
    return value, frame, steps


def transverse_minimize(omega: InvariantForm, k: int | None = None, iterations: int = config.MINIMIZER_ITERATIONS,
                        tolerance: float = config.MINIMIZER_TOLERANCE, restarts: int = config.MINIMIZER_RESTARTS,
                        seed: int = config.DEFAULT_SEED) -> Verdict:
    """Alternating minimization of the pairing over orthonormal frames of (1,0)-forms.

    Each factor update is the smallest eigenvector of the pairing restricted to
    the orthogonal complement of the other factors. Numeric refutation
    candidates are rationalized and re-checked exactly.
    """
    n = omega.n
    p = _real_pp(omega)
    if k is not None and k != n - p:
        raise BidegreeError(f"k must be n - p = {n - p}, got {k}")
    if restarts < 1:
        raise PreconditionError(f"the minimizer needs at least one restart, got {restarts}")
    k = n - p
    refutation = _diagonal_refutation(omega, p, "minimize")
    if refutation is not None:
        return refutation
    index, G = pairing_matrix(omega, p)
    Gf = _numeric_matrix(G)
    scale = max(float(np.real(Gf[i, i])) for i in range(len(index)))
    if k == 0:
        return Verdict.certified("minimize", min=scale, tolerance=tolerance)
    best_value, best_frame, total_steps = float("inf"), None, 0
    for child in np.random.SeedSequence(seed).spawn(restarts):
        value, frame, steps = _minimize_restart(Gf, index, n, k, np.random.default_rng(child), iterations)
        total_steps += steps
        if value < best_value:
            best_value, best_frame = value, frame
    logger.debug("Minimizer finished with min=%g scale=%g steps=%d", best_value, scale, total_steps)
    if best_value > tolerance * scale:
        return Verdict.certified("minimize", min=best_value, tolerance=tolerance, scale=scale)
    rows = [[rationalize(complex(v)) for v in row] for row in best_frame]
    beta = simple_form(rows)
    if beta:
        exact = pairing(omega, beta)
        if exact <= 0:
            return Verdict.refuted("minimize", witness=beta, value=exact, min=best_value, factors=rows)
    return Verdict.unknown("minimize", min=best_value, tolerance=tolerance, scale=scale,
                           reason="numeric minimum below tolerance without exact witness")


METHODS = ("auto", "hermitian", "chain", "split", "minimize", "sample")


def certify(omega: InvariantForm, method: str = "auto", tolerance: float = config.MINIMIZER_TOLERANCE,
            seed: int = config.DEFAULT_SEED, p: int | None = None) -> Verdict:
    """Run one transversality method, or the auto cascade."""
    n = omega.n
    if p is None:
        p = _real_pp(omega)
    elif omega and omega.bidegree != (p, p):
        raise BidegreeError(f"expected a ({p},{p})-form, got {omega.bidegree}")
    logger.debug("Checking transversality method=%s n=%d p=%d", method, n, p)
    if method == "hermitian":
        return hermitian_check(omega, p)
    if method == "chain":
        if n != 4 or p != 2:
            return Verdict.unknown("chain", reason="the chain applies to (2,2)-forms on C^4")
        return lemma_chain_check(cone_matrix(omega))
    if method == "split":
        last = Verdict.unknown("split", reason="no direction")
        for direction in range(n, 0, -1):
            last = split_rule(omega, direction, p)
            if last.is_certified:
                return last
        return last
    if method == "minimize":
        return transverse_minimize(omega, tolerance=tolerance, seed=seed)
    if method == "sample":
        return transverse_falsify(omega, seed=seed)
    if method != "auto":
        raise PreconditionError(f"unknown transversality method {method!r}, expected one of {METHODS}")
    if omega.is_zero():
        return _exact_certify(omega, p)
    exact = _exact_certify(omega, p)
    if not exact.is_unknown:
        return exact
    sampled = transverse_falsify(omega, seed=seed)
    if sampled.is_refuted:
        return sampled
    return transverse_minimize(omega, tolerance=tolerance, seed=seed)
