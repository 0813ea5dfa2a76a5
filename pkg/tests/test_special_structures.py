from fractions import Fraction

import pytest

from nilkahler import catalog
from nilkahler.algebra.forms import InvariantForm
from nilkahler.algebra.scalars import Scalar
from nilkahler.exceptions import BidegreeError, PreconditionError, RealityError
from nilkahler.special_structures import (ObstructionCertificate, ab_witness_verify, balanced_promotion,
                                          check_metric, check_pkahler, check_ppluriclosed, check_psymplectic,
                                          identity_metric, metric_form, metric_power, promote_witness,
                                          search_ab_witness, search_stokes_witness, stokes_witness_verify,
                                          symplectic_cascade)
from nilkahler.structure import differential

I = Scalar(0, 1)


def test_metric_form_is_real_and_positive():
    omega = metric_form(identity_metric(3))
    assert omega.is_real()
    assert omega.bidegree == (1, 1)
    assert omega.coefficient((1,), (1,)) == Scalar(0, Fraction(1, 2))
    assert metric_power(identity_metric(3), 2) == omega.wedge(omega)


def test_metric_matrix_validation():
    with pytest.raises(RealityError):
        metric_form([[1, 1], [0, 1]])
    with pytest.raises(PreconditionError):
        metric_form([[1, 0], [0, -1]])


def test_kodaira_thurston_metrics(kodaira_thurston):
    S = kodaira_thurston.structure
    H = identity_metric(2)
    assert check_metric(S, H, "skt").verdict.is_certified
    kahler = check_metric(S, H, "kahler")
    assert not kahler.closed
    assert kahler.verdict.is_refuted
    assert kahler.verdict.method == "closedness"


def test_iwasawa_metrics(iwasawa):
    S = iwasawa.structure
    H = identity_metric(3)
    assert check_metric(S, H, "balanced").verdict.is_certified
    assert check_metric(S, H, "kahler").verdict.is_refuted
    assert check_metric(S, H, "strongly_gauduchon").verdict.is_certified


def test_unknown_metric_kind(iwasawa):
    with pytest.raises(PreconditionError):
        check_metric(iwasawa.structure, identity_metric(3), "hyperkahler")


def test_pkahler_input_checks(etabeta5):
    S = etabeta5.structure
    with pytest.raises(BidegreeError):
        check_pkahler(S, etabeta5.form("Omega"), 2)
    with pytest.raises(RealityError):
        check_pkahler(S, InvariantForm.monomial(5, (1,), (1,)), 1)


def test_etabeta5_structures(etabeta5):
    S = etabeta5.structure
    report = check_pkahler(S, etabeta5.form("Omega_star"), 3)
    assert report.closed
    assert report.verdict.is_certified
    assert check_ppluriclosed(S, etabeta5.form("Omega"), 3).verdict.is_certified


def test_torus_structure_is_kahler():
    entry = catalog.load_entry("torus2")
    report = check_pkahler(entry.structure, entry.form("omega"), 1, method="hermitian")
    assert report.verdict.is_certified
    assert report.verdict.certificate["transversality"] == "hermitian"


def test_balanced_promotion():
    entry = catalog.load_entry("torus3")
    report = balanced_promotion(entry.structure, entry.form("omega"), 1, 2)
    assert report.kind == "balanced"
    assert report.p == 2
    assert report.verdict.is_certified
    assert report.diagnostics["omega1"].bidegree == (2, 2)


def test_balanced_promotion_needs_closed_generators(iwasawa):
    omega = metric_form(identity_metric(3))
    with pytest.raises(PreconditionError):
        balanced_promotion(iwasawa.structure, omega, 1, 3)


def test_ab_witness(iwasawa):
    S = iwasawa.structure
    cert = ObstructionCertificate("ab", iwasawa.form("zeta"), iwasawa.form("alpha"))
    verdict = ab_witness_verify(S, cert, 1)
    assert verdict.is_certified
    assert len(verdict.certificate["factors"]) == 2


@pytest.mark.parametrize(("cert", "reason"), [
    (ObstructionCertificate("ab", InvariantForm.zero(3)), "nonvanishing"),
    (ObstructionCertificate("ab", InvariantForm.monomial(3, (1,))), "bidegree"),
    (ObstructionCertificate("ab", InvariantForm.monomial(3, (1, 2))), "del-exact"),
    (ObstructionCertificate("stokes", InvariantForm.monomial(3, (1, 2))), "kind"),
])
def test_ab_witness_failures(iwasawa, cert, reason):
    verdict = ab_witness_verify(iwasawa.structure, cert, 1)
    assert verdict.is_refuted
    assert verdict.witness == reason


def test_promotion_by_a_wedged_generator_degenerates(iwasawa):
    cert = ObstructionCertificate("ab", iwasawa.form("zeta"), iwasawa.form("alpha"))
    assert promote_witness(iwasawa.structure, cert, 1).degenerate
    with pytest.raises(PreconditionError):
        promote_witness(iwasawa.structure, cert, 3)


def test_stokes_witness(kodaira_thurston):
    S = kodaira_thurston.structure
    cert = ObstructionCertificate("stokes", kodaira_thurston.form("gamma"), beta=kodaira_thurston.form("beta"))
    assert stokes_witness_verify(S, cert, 1).is_certified
    negative = ObstructionCertificate("stokes", cert.form, beta=cert.beta, c=Scalar(-1))
    assert stokes_witness_verify(S, negative, 1).witness == "positivity"
    doubled = ObstructionCertificate("stokes", cert.form, beta=cert.beta, c=Scalar(2))
    assert stokes_witness_verify(S, doubled, 1).witness == "exactness"


def test_witness_searches(iwasawa, kodaira_thurston):
    ab = search_ab_witness(iwasawa.structure, 2)
    assert ab is not None
    assert ab_witness_verify(iwasawa.structure, ab, 1).is_certified
    stokes = search_stokes_witness(kodaira_thurston.structure, 1)
    assert stokes is not None
    assert stokes_witness_verify(kodaira_thurston.structure, stokes, 1).is_certified
    assert search_ab_witness(catalog.load_entry("torus2").structure, 1) is None


def test_symplectic_family(symplectic3):
    S = symplectic3.structure
    psi = symplectic3.form("Psi")
    report = check_psymplectic(S, psi, 3)
    assert report.closed
    assert report.diagnostics["failing"] == []
    assert report.verdict.is_certified
    omega3 = symplectic3.form("omega3")
    assert differential(S, omega3)
    assert not check_pkahler(S, omega3, 3).closed


def test_symplectic_cascade_components(symplectic3):
    S = symplectic3.structure
    cascade = dict(symplectic_cascade(S, symplectic3.form("Psi")))
    assert set(cascade) == {(a, 7 - a) for a in range(2, 6)}
    assert all(value.is_zero() for value in cascade.values())


def test_psymplectic_input_checks(symplectic3):
    with pytest.raises(BidegreeError):
        check_psymplectic(symplectic3.structure, symplectic3.form("omega"), 3)
    with pytest.raises(RealityError):
        check_psymplectic(symplectic3.structure, symplectic3.form("beta1"), 3)
