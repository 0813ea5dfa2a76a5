"""Canonical report lines: a head word followed by space separated key=value pairs.

Values never contain spaces, forms and dictionaries are printed in sorted order,
so equal inputs and seeds give byte-identical reports.
"""

from __future__ import annotations

from typing import Any

from nilkahler.algebra.forms import InvariantForm, format_monomial
from nilkahler.algebra.scalars import Scalar
from nilkahler.algebra.verdict import Verdict
from nilkahler.cohomology import CohomologyGroup
from nilkahler.special_structures import StructureReport


def render(value: Any) -> str:
    if isinstance(value, InvariantForm):
        return str(value).replace(" ", "")
    if isinstance(value, Scalar):
        return str(value)
    if isinstance(value, Verdict):
        return value.outcome.value
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, tuple) and len(value) == 2 and all(isinstance(x, tuple) for x in value):
        return format_monomial(value)
    if isinstance(value, (tuple, list)):
        return "(" + ",".join(render(x) for x in value) + ")"
    if isinstance(value, dict):
        items = sorted(value.items(), key=lambda item: str(item[0]))
        return "{" + ",".join(f"{render(k)}:{render(v)}" for k, v in items) + "}"
    if value is None:
        return "-"
    return str(value).replace(" ", "_")


def line(head: str, **fields) -> str:
    parts = [head] + [f"{key}={render(value)}" for key, value in fields.items()]
    return " ".join(parts)


def verdict_line(head: str, verdict: Verdict, **fields) -> str:
    """One line for a verdict: outcome, method, the witness when refuted, the caller's fields."""
    extra = dict(fields)
    if verdict.is_refuted:
        extra["witness"] = verdict.witness
    for key in ("min", "value", "direction"):
        if key in verdict.diagnostics:
            extra[key] = verdict.diagnostics[key]
        if key in verdict.certificate:
            extra[key] = verdict.certificate[key]
    return line(head, outcome=verdict.outcome.value, method=verdict.method, **extra)


def structure_lines(report: StructureReport) -> list[str]:
    lines = [line("structure", kind=report.kind, p=report.p, closed=report.closed, residual=report.residual),
             verdict_line("transverse", report.transversality)]
    for source, piece in report.diagnostics.get("cascade", []):
        lines.append(line("cascade", component=source, value=piece))
    lines.append(line("verdict", kind=report.kind, outcome=report.verdict.outcome.value))
    return lines


def cohomology_line(group: CohomologyGroup) -> str:
    key = "bidegree" if isinstance(group.degree, tuple) else "degree"
    return line("cohomology", theory=group.theory, **{key: group.degree}, dim=group.dimension)


def class_line(theory: str, verdict: Verdict) -> str:
    fields = {"theory": theory, "class": "zero" if verdict.is_certified else "nonzero"}
    if verdict.is_certified:
        fields["primitive"] = verdict.certificate.get("primitive", {})
    else:
        fields["functional"] = verdict.witness
        fields["value"] = verdict.diagnostics.get("value")
    return line("class", **fields)
