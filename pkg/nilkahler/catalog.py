"""Built-in manifolds, forms and deformation curves, with the verdicts each one is expected to produce.

Every entry is stored as structure-file text and parsed on first use. An expectation
names a check, its arguments and the outcome it must reproduce, tagged by provenance:

  PAPER    a value displayed for the example in the literature
  DERIVED  computed independently and frozen as a regression
  TRIVIAL  true by construction
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from nilkahler import cohomology, deformation, special_structures, structure, transversality
from nilkahler.algebra.scalars import Scalar
from nilkahler.exceptions import CatalogError, NilkahlerError
from nilkahler.grammar import StructureDocument, parse

logger = logging.getLogger(__name__)

TAGS = ("PAPER", "DERIVED", "TRIVIAL")

_TRIPLES = ("1,2,3", "1,2,4", "1,2,5", "1,3,4", "1,3,5", "1,4,5", "2,3,4", "2,3,5", "2,4,5", "3,4,5")

_ETABETA5 = """\
dimension 5
d phi5 = -phi[1,3;] - phi[2,4;]
form Omega (3,3) = sigma(3)*({diagonal} - phi[1,3,5;2,4,5] - phi[2,4,5;1,3,5])
form Omega_star (3,3) = sigma(3)*(phi[1,2,3;1,2,3] + phi[1,2,4;1,2,4] + phi[1,3,4;1,3,4] + phi[2,3,4;2,3,4] \
+ 4*phi[1,2,5;1,2,5] + phi[1,3,5;1,3,5] + 4*phi[1,4,5;1,4,5] + phi[2,3,5;2,3,5] + phi[2,4,5;2,4,5] \
+ phi[3,4,5;3,4,5] - phi[1,3,5;2,4,5] - phi[2,4,5;1,3,5] - phi[2,3,5;1,4,5] - phi[1,4,5;2,3,5])
form zeta (2,0) = phi[1,2;]
form probe (3,4) = sigma(3)*phi[2,3,4;1,2,4,5]
""".format(diagonal=" + ".join(f"phi[{s};{s}]" for s in _TRIPLES))

_PSI_CURVE = """\
vform V theta1 bar1 = a1
vform V theta2 bar2 = a2
curve linear V
"""


def _join(*parts: str) -> str:
    return "".join(part if part.endswith("\n") else part + "\n" for part in parts)


_SOURCES = {
    "torus2": """\
dimension 2
form omega (1,1) = (1/2)*i*(phi[1;1] + phi[2;2])
""",
    "torus3": """\
dimension 3
form omega (1,1) = (1/2)*i*(phi[1;1] + phi[2;2] + phi[3;3])
""",
    "iwasawa": """\
dimension 3
d phi3 = phi[1,2;]
form zeta (2,0) = phi[1,2;]
form alpha (1,0) = phi[3;]
""",
    "kodaira-thurston": """\
dimension 2
d phi2 = phi[1;1]
form gamma = (1/4)*i*(phi[2;] - phi[;2])
form beta (1,0) = phi[1;]
""",
    "etabeta5": _ETABETA5,
    "etabeta5-psi": _join(_ETABETA5, "param a1 = 1", "param a2 = 1", _PSI_CURVE),
    "etabeta5-psi-10": _join(_ETABETA5, "param a1 = 1", "param a2 = 0", _PSI_CURVE),
    "etabeta5-deformed": """\
dimension 5
param t = 1/3
param T = 1/(1 - t^2)
d phi5 = -T*phi[1,3;] - T*t*phi[3;1] - T*phi[2,4;] - T*t*phi[4;2]
form Omega_t (3,3) = sigma(3)*(phi[1,2,3;1,2,3] + phi[1,2,4;1,2,4] + phi[1,3,4;1,3,4] + phi[2,3,4;2,3,4] \
+ 4*phi[1,2,5;1,2,5] + phi[1,3,5;1,3,5] + 4*phi[1,4,5;1,4,5] + phi[2,3,5;2,3,5] + phi[2,4,5;2,4,5] \
+ phi[3,4,5;3,4,5] - phi[1,3,5;2,4,5] - phi[2,4,5;1,3,5] - phi[2,3,5;1,4,5] - phi[1,4,5;2,3,5])
""",
    "kahler3-family": """\
dimension 5
param a = 1
param b = 1
param c = 1
param d = 1
param e = 1
d phi5 = a*phi[1,3;] + b*phi[1;2] + c*phi[1;4] + a*phi[2,4;] + d*phi[2;1] + c*phi[2;3] + e*phi[3;2] \
- d*phi[3;4] + e*phi[4;1] - b*phi[4;3]
form Omega (3,3) = sigma(3)*({diagonal} - phi[1,3,5;2,4,5] - phi[2,4,5;1,3,5])
form zeta (2,0) = phi[1,2;]
""".format(diagonal=" + ".join(f"phi[{s};{s}]" for s in _TRIPLES)),
    "symplectic3-family": """\
dimension 5
scalars sqrt 6
param a = sqrt(6)
param b = 1
param c = sqrt(6)
d phi5 = a*phi[1,2;] + c*phi[3,4;] + b*(phi[1;1] + phi[2;2] + phi[3;3] + phi[4;4])
param L = 3*i*a/(8*b)
param N = 3*i*c/(8*b)
param P = -2*conj(b)*L/conj(c)
form omega (1,1) = (1/2)*i*(phi[1;1] + phi[2;2] + phi[3;3] + phi[4;4] + phi[5;5])
form omega3 (3,3) = omega^3
form beta1 (4,2) = L*phi[1,2,4,5;4,5] + L*phi[1,2,3,5;3,5] + N*phi[1,3,4,5;1,5] + N*phi[2,3,4,5;2,5]
form beta2 (5,1) = P*phi[1,2,3,4,5;5]
form Psi = omega3 - beta1 - conj(beta1) + beta2 + conj(beta2)
""",
}

_DESCRIPTIONS = {
    "torus2": "abelian complex 2-torus",
    "torus3": "abelian complex 3-torus",
    "iwasawa": "Iwasawa manifold, holomorphically parallelizable",
    "kodaira-thurston": "Kodaira-Thurston surface",
    "etabeta5": "eta-beta_5 with the 3-Kaehler forms Omega and Omega_star",
    "etabeta5-psi": "eta-beta_5 with the curve t(a1 phibar1 theta1 + a2 phibar2 theta2), a1 = a2 = 1",
    "etabeta5-psi-10": "eta-beta_5 with the same curve at a1 = 1, a2 = 0",
    "etabeta5-deformed": "eta-beta_5 deformed at t = 1/3 (a1 = a2 = 1) in the coframe extension(Psi, phi^j)",
    "kahler3-family": "3-Kaehler family with a = b = c = d = e = 1",
    "symplectic3-family": "3-symplectic non-3-Kaehler family with a = c = sqrt 6, b = 1",
}


@dataclass(frozen=True)
class Expectation:
    """A check, its arguments, the outcome it must reproduce and where that outcome comes from."""
    check: str
    args: dict = field(default_factory=dict)
    expected: str = "certified"
    tag: str = "DERIVED"

    def describe(self) -> str:
        args = " ".join(f"{key}={value}" for key, value in self.args.items())
        return f"[{self.tag}] {self.check} {args} -> {self.expected}".replace("  ", " ")


_EXPECTATIONS = {
    "torus2": (
        Expectation("hodge", {"theory": "delbar", "bidegree": (1, 1)}, "4", "TRIVIAL"),
        Expectation("betti", {"degree": 2}, "6", "TRIVIAL"),
        Expectation("structure", {"kind": "pkahler", "p": 1, "form": "omega"}, "certified", "TRIVIAL"),
    ),
    "torus3": (
        Expectation("hodge", {"theory": "delbar", "bidegree": (1, 2)}, "9", "TRIVIAL"),
        Expectation("hodge", {"theory": "BC", "bidegree": (1, 1)}, "9", "TRIVIAL"),
        Expectation("structure", {"kind": "pkahler", "p": 1, "form": "omega"}, "certified", "TRIVIAL"),
        Expectation("sweep", {"kind": "pkahler", "p": 1, "form": "omega"}, "nonzero", "TRIVIAL"),
    ),
    "iwasawa": (
        Expectation("flag", {"check": "parallelizable"}, "certified", "TRIVIAL"),
        Expectation("ab", {"zeta": "zeta", "alpha": "alpha", "p": 1}, "certified", "PAPER"),
        Expectation("metric", {"kind": "balanced"}, "certified", "DERIVED"),
        Expectation("metric", {"kind": "kahler"}, "refuted", "DERIVED"),
        Expectation("betti", {"degree": 1}, "4", "DERIVED"),
    ),
    "kodaira-thurston": (
        Expectation("flag", {"check": "integrable"}, "certified", "TRIVIAL"),
        Expectation("flag", {"check": "parallelizable"}, "refuted", "TRIVIAL"),
        Expectation("stokes", {"gamma": "gamma", "beta": "beta", "c": "1", "p": 1}, "certified", "PAPER"),
        Expectation("betti", {"degree": 1}, "3", "DERIVED"),
    ),
    "etabeta5": (
        Expectation("flag", {"check": "nilpotent"}, "certified", "PAPER"),
        Expectation("structure", {"kind": "pkahler", "p": 3, "form": "Omega"}, "certified", "PAPER"),
        Expectation("structure", {"kind": "pkahler", "p": 3, "form": "Omega_star"}, "certified", "PAPER"),
        Expectation("transverse", {"form": "Omega_star", "method": "split"}, "certified", "PAPER"),
        Expectation("closed_simple", {"k": 2}, "certified", "DERIVED"),
        Expectation("sweep", {"kind": "pkahler", "p": 3, "form": "Omega"}, "nonzero", "PAPER"),
        Expectation("metric", {"kind": "balanced"}, "certified", "DERIVED"),
        Expectation("betti", {"degree": 1}, "8", "DERIVED"),
        Expectation("hodge", {"theory": "delbar", "bidegree": (0, 1)}, "4", "DERIVED"),
        Expectation("class", {"form": "probe", "theory": "delbar"}, "nonzero", "PAPER"),
    ),
    "etabeta5-psi": (
        Expectation("maurer_cartan", {"vform": "V"}, "certified", "PAPER"),
        Expectation("obstruction", {"vform": "V", "omega": "Omega"}, "nonzero", "PAPER"),
        Expectation("obstruction", {"vform": "V", "omega": "Omega_star"}, "zero", "PAPER"),
        Expectation("deformed_delbar", {"vform": "V", "t": "1/3", "form": "Omega_star"}, "zero", "PAPER"),
        Expectation("deformed_delbar", {"vform": "V", "t": "1/10", "form": "Omega_star"}, "zero", "PAPER"),
    ),
    "etabeta5-psi-10": (
        Expectation("maurer_cartan", {"vform": "V"}, "certified", "PAPER"),
        Expectation("obstruction", {"vform": "V", "omega": "Omega"}, "nonzero", "PAPER"),
        Expectation("obstruction", {"vform": "V", "omega": "Omega_star"}, "nonzero", "PAPER"),
    ),
    "etabeta5-deformed": (
        Expectation("flag", {"check": "integrable"}, "certified", "PAPER"),
        Expectation("structure", {"kind": "pkahler", "p": 3, "form": "Omega_t"}, "certified", "PAPER"),
        Expectation("deformation_of", {"base": "etabeta5-psi", "vform": "V", "t": "1/3",
                                       "form": "Omega_star", "target": "Omega_t"}, "equal", "PAPER"),
    ),
    "kahler3-family": (
        Expectation("flag", {"check": "nilpotent"}, "certified", "PAPER"),
        Expectation("flag", {"check": "parallelizable"}, "refuted", "PAPER"),
        Expectation("structure", {"kind": "pkahler", "p": 3, "form": "Omega"}, "certified", "PAPER"),
        Expectation("sweep", {"kind": "pkahler", "p": 3, "form": "Omega"}, "nonzero", "PAPER"),
    ),
    "symplectic3-family": (
        Expectation("structure", {"kind": "psymplectic", "p": 3, "form": "Psi"}, "certified", "PAPER"),
        Expectation("metric", {"kind": "astheno"}, "certified", "PAPER"),
        Expectation("metric", {"kind": "kahler"}, "refuted", "PAPER"),
        Expectation("sweep", {"kind": "psymplectic", "p": 3, "form": "Psi"}, "nonzero", "PAPER"),
    ),
}


@dataclass(frozen=True)
class CatalogEntry:
    """One manifold of the catalog together with its named forms, curves and expected verdicts."""
    name: str
    text: str
    description: str
    expectations: tuple[Expectation, ...]
    document: StructureDocument

    @property
    def structure(self):
        return self.document.structure

    def form(self, name: str):
        return self.document.form(name)


def names() -> list[str]:
    return list(_SOURCES)


@functools.lru_cache(maxsize=None)
def load_entry(name: str) -> CatalogEntry:
    """Parse an entry and re-verify d^2 = 0 on its structure equations."""
    if name not in _SOURCES:
        raise CatalogError(f"unknown catalog entry {name!r}, known entries: {', '.join(_SOURCES)}")
    document = parse(_SOURCES[name], name=name)
    d_squared = structure.check_d_squared(document.structure)
    if not d_squared.is_certified:
        raise CatalogError(f"catalog entry {name} violates d^2 = 0: {d_squared.witness}")
    logger.debug("Loaded catalog entry %s", name)
    return CatalogEntry(name, _SOURCES[name], _DESCRIPTIONS[name], _EXPECTATIONS[name], document)


def _scalar(text: str) -> Scalar:
    return Scalar.coerce(Fraction(text))


def _zero(verdict) -> str:
    return "zero" if verdict.is_certified else "nonzero"


_FLAG_CHECKS = {
    "integrable": structure.check_integrable,
    "nilpotent": structure.check_nilpotent_coframe,
    "parallelizable": structure.check_parallelizable,
    "salamon": structure.check_salamon,
}

_STRUCTURE_CHECKS = {
    "pkahler": special_structures.check_pkahler,
    "ppluriclosed": special_structures.check_ppluriclosed,
    "psymplectic": special_structures.check_psymplectic,
}


def observe(entry: CatalogEntry, expectation: Expectation) -> str:
    """Run the check an expectation names and return its observed outcome in the same vocabulary."""
    S = entry.structure
    args = expectation.args
    check = expectation.check
    if check == "flag":
        return _FLAG_CHECKS[args["check"]](S).outcome.value
    if check == "structure":
        report = _STRUCTURE_CHECKS[args["kind"]](S, entry.form(args["form"]), args["p"])
        return report.verdict.outcome.value
    if check == "metric":
        return special_structures.check_metric(S, entry.document.metric(), args["kind"]).verdict.outcome.value
    if check == "transverse":
        return transversality.certify(entry.form(args["form"]), method=args["method"]).outcome.value
    if check == "betti":
        return str(cohomology.cohomology(S, "dR", args["degree"]).dimension)
    if check == "hodge":
        return str(cohomology.cohomology(S, args["theory"], args["bidegree"]).dimension)
    if check == "class":
        return _zero(cohomology.class_is_zero(S, entry.form(args["form"]), args["theory"]))
    if check == "closed_simple":
        return cohomology.closed_simple_witness(S, args["k"]).outcome.value
    if check == "sweep":
        sweep = cohomology.class_nonvanishing_sweep(S, entry.form(args["form"]), args["p"], args["kind"])
        if not sweep:
            return "unknown"
        return "nonzero" if all(verdict.is_refuted for verdict in sweep.values()) else "zero"
    if check == "ab":
        cert = special_structures.ObstructionCertificate("ab", entry.form(args["zeta"]), entry.form(args["alpha"]))
        return special_structures.ab_witness_verify(S, cert, args["p"]).outcome.value
    if check == "stokes":
        cert = special_structures.ObstructionCertificate("stokes", entry.form(args["gamma"]),
                                                          beta=entry.form(args["beta"]), c=_scalar(args["c"]))
        return special_structures.stokes_witness_verify(S, cert, args["p"]).outcome.value
    if check == "maurer_cartan":
        return deformation.maurer_cartan_check(S, entry.document.vector_form(args["vform"])).outcome.value
    if check == "obstruction":
        _, verdict = deformation.first_order_obstruction(S, entry.document.vector_form(args["vform"]),
                                                         entry.form(args["omega"]))
        return _zero(verdict)
    if check == "deformed_delbar":
        phi = entry.document.vector_form(args["vform"]).scale(_scalar(args["t"]))
        value = deformation.deformed_delbar(S, phi, entry.form(args["form"]))
        return "zero" if value.central.is_zero() else "nonzero"
    if check == "deformation_of":
        base = load_entry(args["base"])
        phi = base.document.vector_form(args["vform"]).scale(_scalar(args["t"]))
        deformed = deformation.deformed_structure(base.structure, phi)
        same_structure = deformed.d_phi == S.d_phi
        # the entry is written in the coframe extension(phi, phi^j), so equal coefficients
        # mean the target is the extension of the base form
        same_form = base.form(args["form"]) == entry.form(args["target"])
        return "equal" if same_structure and same_form else "differs"
    raise CatalogError(f"unknown expectation check {check!r}")


@dataclass(frozen=True)
class ExpectationResult:
    entry: str
    expectation: Expectation
    observed: str

    @property
    def passed(self) -> bool:
        return self.observed == self.expectation.expected


def replay(entry: CatalogEntry, tags: tuple[str, ...] = TAGS) -> list[ExpectationResult]:
    results = []
    for expectation in entry.expectations:
        if expectation.tag not in tags:
            continue
        try:
            observed = observe(entry, expectation)
        except NilkahlerError as error:
            logger.error("Expectation %s on %s raised %r", expectation.describe(), entry.name, error)
            observed = f"error:{type(error).__name__}"
        result = ExpectationResult(entry.name, expectation, observed)
        if not result.passed:
            logger.warning("Catalog mismatch on %s: %s observed %s", entry.name, expectation.describe(), observed)
        results.append(result)
    return results


def verify_entry(name: str) -> CatalogEntry:
    """Load an entry and replay its PAPER expectations, raising CatalogError on any mismatch."""
    entry = load_entry(name)
    failures = [result for result in replay(entry, ("PAPER",)) if not result.passed]
    if failures:
        details = "; ".join(f"{r.expectation.describe()} observed {r.observed}" for r in failures)
        raise CatalogError(f"catalog entry {name} fails its displayed verdicts: {details}")
    return entry


def selftest(entries: list[str] | None = None) -> list[ExpectationResult]:
    """Replay every expectation of every (or the named) catalog entries."""
    results = []
    for name in entries or names():
        results.extend(replay(load_entry(name)))
    logger.info("Catalog selftest: %d of %d expectations hold",
                sum(result.passed for result in results), len(results))
    return results
