from fractions import Fraction

import pytest

from nilkahler import transversality
from nilkahler.algebra import linalg
from nilkahler.algebra.forms import InvariantForm, is_simple
from nilkahler.algebra.scalars import ONE, Scalar, sigma
from nilkahler.exceptions import BidegreeError, PreconditionError, RealityError
from nilkahler.special_structures import identity_metric, metric_power
from nilkahler.transversality import (certify, cone_matrix, cone_value, cone_vector_form, hermitian_check,
                                      lemma_chain_check, lemma_form, lemma_matrix, pairing, pairing_matrix,
                                      rationalize, split_rule, transverse_falsify, transverse_minimize)

GRID = [Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-1)]


def kahler_form(n):
    return InvariantForm(n, {((j,), (j,)): sigma(1) for j in range(1, n + 1)})


@pytest.mark.parametrize("a", GRID)
@pytest.mark.parametrize("b", GRID)
def test_lemma_grid(a, b):
    form = lemma_form(a, b)
    assert form.is_real()
    assert cone_matrix(form) == lemma_matrix(a, b)
    assert lemma_chain_check(lemma_matrix(a, b)).is_certified


def test_lemma_out_of_range_refuted_by_sampling():
    form = lemma_form(10, 0)
    z = [1, 1, 0, 0, -5, 5]
    value, on_cone = cone_value(lemma_matrix(10, 0), z)
    assert value == Scalar(-45)
    assert on_cone
    beta = cone_vector_form(z)
    assert is_simple(beta).is_certified
    assert pairing(form, beta) == Scalar(-180)
    assert lemma_chain_check(lemma_matrix(10, 0)).is_unknown

    verdict = transverse_falsify(form, seed=7)
    assert verdict.is_refuted
    assert is_simple(verdict.witness).is_certified
    assert pairing(form, verdict.witness) == verdict.diagnostics["value"] <= 0


def test_chain_needs_one_strict_block():
    degenerate = lemma_matrix(1, 2)
    verdict = lemma_chain_check(degenerate)
    assert verdict.is_unknown
    assert verdict.diagnostics["reason"] == "both blocks degenerate"


def test_pairing_matrix_is_hermitian(etabeta5):
    for name in ("Omega", "Omega_star"):
        _, G = pairing_matrix(etabeta5.form(name), 3)
        assert linalg.is_hermitian(G)


def test_pairing_agrees_with_matrix(etabeta5):
    omega = etabeta5.form("Omega_star")
    index, G = pairing_matrix(omega, 3)
    beta = transversality.simple_form([[ONE, Scalar(1, 1), 0, 0, 2], [0, 0, ONE, Scalar(0, -1), 0]])
    assert pairing(omega, beta) == linalg.hermitian_value(G, transversality.plucker_vector(beta, index))


def test_hermitian_check():
    omega = kahler_form(3)
    assert hermitian_check(omega).is_certified
    assert hermitian_check(omega.power(2).scale(Fraction(1, 2))).is_certified
    verdict = hermitian_check(-omega)
    assert verdict.is_refuted
    assert pairing(-omega, verdict.witness) <= 0


def test_hermitian_check_outside_its_range(etabeta5):
    assert hermitian_check(etabeta5.form("Omega"), 3).is_unknown


def test_split_rule_on_omega_star(etabeta5):
    verdict = split_rule(etabeta5.form("Omega_star"), 5)
    assert verdict.is_certified
    assert verdict.certificate["factor"] == lemma_form(1, -1).scale(sigma(2))
    assert verdict.certificate["factor_verdict"].method == "chain"
    assert verdict.certificate["rest_verdict"].method == "hermitian"


def test_split_rule_on_omega(etabeta5):
    verdict = split_rule(etabeta5.form("Omega"), 5)
    assert verdict.is_certified
    assert verdict.certificate["factor_verdict"].certificate["slack_b"] == ONE * sigma(2) ** 2


def test_split_rule_reports_cross_terms(etabeta5):
    verdict = split_rule(etabeta5.form("Omega_star"), 1)
    assert verdict.is_unknown
    assert verdict.diagnostics["cross_terms"]


@pytest.mark.parametrize("method", ["auto", "split"])
def test_certify_exact_methods(etabeta5, method):
    assert certify(etabeta5.form("Omega_star"), method).is_certified


def test_minimizer_cross_check(etabeta5):
    verdict = certify(etabeta5.form("Omega_star"), "minimize", seed=3)
    assert verdict.is_certified
    assert verdict.certificate["min"] > 1e-6


def test_minimizer_refutes_with_exact_witness():
    verdict = certify(lemma_form(10, 0), "minimize", seed=1)
    assert verdict.is_refuted
    assert pairing(lemma_form(10, 0), verdict.witness) <= 0


def test_minimize_directly():
    verdict = transverse_minimize(lemma_form(10, 0), seed=1)
    assert verdict.is_refuted
    assert is_simple(verdict.witness).is_certified
    with pytest.raises(BidegreeError):
        transverse_minimize(lemma_form(1, 1), k=1)
    with pytest.raises(PreconditionError):
        transverse_minimize(lemma_form(1, 1), restarts=0)


def test_monomial_is_not_transverse(etabeta5):
    form = InvariantForm.monomial(5, (1, 2, 5), (1, 2, 5), sigma(3))
    verdict = certify(form)
    assert verdict.is_refuted
    assert pairing(form, verdict.witness) <= 0


def test_certify_input_validation():
    with pytest.raises(RealityError):
        certify(InvariantForm.monomial(2, (1,), (2,)))
    with pytest.raises(BidegreeError):
        certify(InvariantForm.monomial(2, (1,)))
    with pytest.raises(PreconditionError):
        certify(kahler_form(2), "guess")


def test_rationalize():
    assert rationalize(0.5 + 0.25j) == Scalar(Fraction(1, 2), Fraction(1, 4))
    assert rationalize(1 / 3) == Scalar(Fraction(1, 3))


@pytest.mark.parametrize("a", GRID)
@pytest.mark.parametrize("b", GRID)
def test_minimizer_never_refutes_the_grid(a, b):
    assert not certify(lemma_form(a, b), "minimize", seed=5).is_refuted


def test_minimizer_certifies_half_half():
    verdict = certify(lemma_form(Fraction(1, 2), Fraction(1, 2)), "minimize", seed=2)
    assert verdict.is_certified
    assert verdict.certificate["min"] > 1e-6


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_minimizer_certifies_metric_powers(n):
    for p in range(1, n):
        assert certify(metric_power(identity_metric(n), p), "minimize", seed=n).is_certified


def _cone_point(rng, on_cone):
    z = [Scalar(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(6)]
    if on_cone:
        while z[0].is_zero():
            z[0] = Scalar(rng.randint(-3, 3), rng.randint(-3, 3))
        z[5] = -(z[1] * z[4] + z[2] * z[3]) / z[0]
    return z


def test_cone_points_are_simple_forms(rng):
    for trial in range(100):
        z = _cone_point(rng, trial % 2 == 0)
        if all(v.is_zero() for v in z):
            continue
        a, b = rng.choice(GRID), rng.choice(GRID)
        value, on_cone = cone_value(lemma_matrix(a, b), z)
        beta = cone_vector_form(z)
        assert is_simple(beta).is_certified == on_cone
        assert pairing(lemma_form(a, b), beta) == value * 4


def _hermitian_11_form(rng, n):
    terms = {}
    for j in range(1, n + 1):
        terms[((j,), (j,))] = Scalar(rng.randint(-2, 3)) * sigma(1)
        for k in range(j + 1, n + 1):
            h = Scalar(rng.randint(-2, 2), rng.randint(-2, 2))
            terms[((j,), (k,))] = h * sigma(1)
            terms[((k,), (j,))] = h.conj() * sigma(1)
    return InvariantForm(n, terms)


def _assert_exact_refutation(form, verdict):
    assert is_simple(verdict.witness).is_certified
    value = pairing(form, verdict.witness)
    assert value == verdict.diagnostics["value"]
    assert value <= 0


def test_refutation_witnesses_are_exact(rng):
    refuted = {"sample": 0, "hermitian": 0}
    for trial in range(100):
        form = lemma_form(Scalar(rng.randint(-8, 8), rng.randint(-8, 8)), Scalar(rng.randint(-8, 8)))
        verdict = transverse_falsify(form, trials=40, seed=trial)
        if verdict.is_refuted:
            refuted["sample"] += 1
            _assert_exact_refutation(form, verdict)
    for _ in range(100):
        form = _hermitian_11_form(rng, 3)
        assert form.is_real()
        verdict = certify(form)
        if verdict.is_refuted:
            refuted["hermitian"] += 1
            _assert_exact_refutation(form, verdict)
    assert all(refuted.values())
