from fractions import Fraction

from nilkahler import reports
from nilkahler.algebra.forms import InvariantForm
from nilkahler.algebra.scalars import Scalar
from nilkahler.algebra.verdict import Outcome, Verdict
from nilkahler.cohomology import cohomology
from nilkahler.structure import StructureEquations


def test_render_values():
    assert reports.render(True) == "yes"
    assert reports.render(None) == "-"
    assert reports.render(0.125) == "0.125"
    assert reports.render((1, 2)) == "(1,2)"
    assert reports.render("two words") == "two_words"
    assert reports.render(Scalar(Fraction(1, 2), -1)) == "1/2+-1*i"
    assert " " not in reports.render(InvariantForm.monomial(2, (1,), (2,)) + InvariantForm.monomial(2, (2,), (1,)))


def test_dictionaries_are_sorted():
    assert reports.render({"b": 1, "a": 2}) == "{a:2,b:1}"


def test_verdict_line():
    refuted = Verdict.refuted("hermitian", witness=InvariantForm.generator(2, 1), value=Scalar(-1))
    line = reports.verdict_line("transverse", refuted, form="w")
    assert line.startswith("transverse outcome=refuted method=hermitian form=w witness=")
    assert line.endswith("value=-1+0*i")
    assert reports.verdict_line("x", Verdict.unknown("chain", reason="a b")) == "x outcome=unknown method=chain"


def test_verdict_constructors():
    assert Verdict.certified("solve", primitive={}).outcome is Outcome.CERTIFIED
    assert Verdict.refuted("split", witness=1).is_refuted
    assert Verdict.unknown("minimize", min=0.5).diagnostics == {"min": 0.5}


def test_cohomology_line():
    group = cohomology(StructureEquations.abelian(2), "delbar", (1, 1))
    assert reports.cohomology_line(group) == "cohomology theory=delbar bidegree=(1,1) dim=4"
    group = cohomology(StructureEquations.abelian(2), "dR", 1)
    assert reports.cohomology_line(group) == "cohomology theory=dR degree=1 dim=4"


def test_class_line():
    line = reports.class_line("dR", Verdict.certified("solve", primitive={}))
    assert line == "class theory=dR class=zero primitive={}"
