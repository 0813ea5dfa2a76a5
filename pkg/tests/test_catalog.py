import itertools

import pytest

from conftest import random_scalar
from nilkahler import catalog
from nilkahler.algebra.forms import InvariantForm
from nilkahler.exceptions import CatalogError
from nilkahler.grammar import parse
from nilkahler.special_structures import check_pkahler, check_psymplectic
from nilkahler.structure import check_d_squared, check_integrable, delbar, differential


@pytest.mark.parametrize("name", catalog.names())
def test_entry_expectations_hold(name):
    results = catalog.selftest([name])
    assert results
    failures = [(r.expectation.describe(), r.observed) for r in results if not r.passed]
    assert failures == []


def test_every_entry_has_a_description_and_valid_tags():
    for name in catalog.names():
        entry = catalog.load_entry(name)
        assert entry.description
        assert all(expectation.tag in catalog.TAGS for expectation in entry.expectations)


def test_unknown_entry():
    with pytest.raises(CatalogError):
        catalog.load_entry("klein-bottle")


def test_verify_entry():
    assert catalog.verify_entry("etabeta5").name == "etabeta5"


def test_unknown_check_is_reported():
    entry = catalog.load_entry("torus2")
    with pytest.raises(CatalogError):
        catalog.observe(entry, catalog.Expectation("astrology"))


def test_replay_filters_by_tag():
    entry = catalog.load_entry("etabeta5")
    paper = catalog.replay(entry, ("PAPER",))
    assert paper
    assert all(result.expectation.tag == "PAPER" for result in paper)
    assert len(catalog.replay(entry)) == len(entry.expectations)


def test_replay_records_errors_as_mismatches():
    entry = catalog.load_entry("torus2")
    broken = catalog.CatalogEntry(entry.name, entry.text, entry.description,
                                  (catalog.Expectation("class", {"form": "missing", "theory": "delbar"}, "zero"),),
                                  entry.document)
    (result,) = catalog.replay(broken)
    assert result.observed == "error:NilkahlerError"
    assert not result.passed


def _kahler3(rng):
    text = catalog.load_entry("kahler3-family").text
    for name in "abcde":
        value = random_scalar(rng, 5)
        while value.is_zero():
            value = random_scalar(rng, 5)
        text = text.replace(f"param {name} = 1\n", f"param {name} = {value}\n")
    return parse(text), text


def _kahler3_delbar_table(params):
    """delbar of each monomial of Omega as (coefficient, hol, anti) triples."""
    a, b, c, d, e = (params[name] for name in "abcde")
    abar = a.conj()
    return {
        ((1, 2, 5), (1, 2, 5)): [(-d, (1, 2, 3), (1, 2, 4, 5)), (-b, (1, 2, 4), (1, 2, 3, 5))],
        ((1, 3, 5), (1, 3, 5)): [(abar, (1, 3, 5), (1, 2, 3, 4))],
        ((1, 4, 5), (1, 4, 5)): [(c, (1, 2, 4), (1, 3, 4, 5)), (e, (1, 3, 4), (1, 2, 4, 5))],
        ((2, 3, 5), (2, 3, 5)): [(c, (1, 2, 3), (2, 3, 4, 5)), (e, (2, 3, 4), (1, 2, 3, 5))],
        ((3, 4, 5), (3, 4, 5)): [(b, (1, 3, 4), (2, 3, 4, 5)), (d, (2, 3, 4), (1, 3, 4, 5))],
        ((2, 4, 5), (2, 4, 5)): [(abar, (2, 4, 5), (1, 2, 3, 4))],
        ((1, 3, 5), (2, 4, 5)): [(-d, (1, 2, 3), (1, 2, 4, 5)), (c, (1, 2, 3), (2, 3, 4, 5)),
                                 (e, (1, 3, 4), (1, 2, 4, 5)), (b, (1, 3, 4), (2, 3, 4, 5)),
                                 (abar, (1, 3, 5), (1, 2, 3, 4))],
        ((2, 4, 5), (1, 3, 5)): [(-b, (1, 2, 4), (1, 2, 3, 5)), (c, (1, 2, 4), (1, 3, 4, 5)),
                                 (e, (2, 3, 4), (1, 2, 3, 5)), (d, (2, 3, 4), (1, 3, 4, 5)),
                                 (abar, (2, 4, 5), (1, 2, 3, 4))],
    }


def test_kahler3_family_at_random_parameters(rng):
    for _ in range(5):
        document, _ = _kahler3(rng)
        S = document.structure
        assert check_d_squared(S).is_certified
        assert check_integrable(S).is_certified
        assert differential(S, document.form("Omega")).is_zero()
        for hol in itertools.combinations((1, 2, 3, 4), 3):
            assert delbar(S, InvariantForm.monomial(5, hol, hol)).is_zero()
        for (hol, anti), expected in _kahler3_delbar_table(document.params).items():
            value = sum((InvariantForm.monomial(5, h, a, c) for c, h, a in expected), InvariantForm.zero(5))
            assert delbar(S, InvariantForm.monomial(5, hol, anti)) == value


def test_kahler3_family_is_3_kahler():
    entry = catalog.load_entry("kahler3-family")
    assert check_pkahler(entry.structure, entry.form("Omega"), 3).verdict.is_certified


@pytest.mark.parametrize("old, new", [
    ("param L = 3*i*a/(8*b)", "param L = 3*i*a/(8*b) + 1"),
    ("param N = 3*i*c/(8*b)", "param N = 3*i*c/(8*b) + 1"),
    ("param a = sqrt(6)", "param a = 2"),
    ("param b = 1", "param b = 2"),
    ("param c = sqrt(6)", "param c = 2"),
])
def test_symplectic_family_needs_the_tuned_coefficient(symplectic3, old, new):
    assert check_psymplectic(symplectic3.structure, symplectic3.form("Psi"), 3).closed
    text = symplectic3.text.replace(old, new)
    assert text != symplectic3.text
    document = parse(text)
    report = check_psymplectic(document.structure, document.form("Psi"), 3)
    assert not report.closed
    assert report.verdict.is_refuted
    assert report.diagnostics["failing"]


def test_deformation_of_compares_the_deformed_entry():
    entry = catalog.load_entry("etabeta5-deformed")
    args = {"base": "etabeta5-psi", "vform": "V", "t": "1/3", "form": "Omega_star", "target": "Omega_t"}
    assert catalog.observe(entry, catalog.Expectation("deformation_of", args)) == "equal"
    other_form = dict(args, form="Omega")
    assert catalog.observe(entry, catalog.Expectation("deformation_of", other_form)) == "differs"
    other_time = dict(args, t="1/10")
    assert catalog.observe(entry, catalog.Expectation("deformation_of", other_time)) == "differs"
