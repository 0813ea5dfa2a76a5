"""
Line-oriented structure files, parsed by recursive descent.

STATEMENTS (one per line, '#' starts a comment)
  name NAME
  dimension N
  scalars sqrt D
  param NAME = expression
  d phi<j> = expression
  form NAME [(p,q)] = expression
  metric j k = expression
  vform [NAME] theta<l> bar<m> = expression
  curve linear [NAME]

EXPRESSION
  term (('+' | '-') term)...
TERM
  unary (('*' | '/') unary)...          form * form is the wedge product
UNARY
  ('-' | '+') unary | power
POWER
  atom ['^' integer]
ATOM
  integer | 'i' | sqrt(D) | sigma(p) | conj(expression)
  phi[i1,...,ip; j1,...,jq] | parameter | form | ( expression )
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from nilkahler.algebra.forms import InvariantForm
from nilkahler.algebra.scalars import ONE, ZERO, I, Scalar, check_sqrt, sigma
from nilkahler.deformation import DeformationCurve, VectorForm
from nilkahler.exceptions import NilkahlerError, ParseError
from nilkahler.structure import StructureEquations

logger = logging.getLogger(__name__)


class Token:
    """Token kinds"""
    number = "number"
    name = "name"
    operator = "operator"
    left_paren = "("
    right_paren = ")"
    left_bracket = "["
    right_bracket = "]"
    comma = ","
    semicolon = ";"
    assign = "="
    eof = "eof"

    def __init__(self, typ: str, text: str, column: int):
        self.typ = typ
        self.text = text
        self.column = column

    def __repr__(self):
        return f"({self.typ}, {self.text!r}, col {self.column})"


_TOKEN_RE = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],;=]))")
_PUNCTUATION = {"(": Token.left_paren, ")": Token.right_paren, "[": Token.left_bracket, "]": Token.right_bracket,
                ",": Token.comma, ";": Token.semicolon, "=": Token.assign}


def tokenize(text: str, line: int) -> list[Token]:
    tokens = []
    position = 0
    text = text.rstrip()
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        if match is None or match.end() == position:
            column = position + len(text[position:]) - len(text[position:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[column - 1]!r}", line, column)
        column = match.start(match.lastgroup) + 1
        if match.group("number"):
            tokens.append(Token(Token.number, match.group("number"), column))
        elif match.group("name"):
            tokens.append(Token(Token.name, match.group("name"), column))
        else:
            op = match.group("op")
            tokens.append(Token(_PUNCTUATION.get(op, Token.operator), op, column))
        position = match.end()
    tokens.append(Token(Token.eof, "", len(text) + 1))
    return tokens


@dataclass
class StructureDocument:
    """Everything declared by a structure file."""
    name: str = ""
    dimension: int | None = None
    sqrt: int = 0
    params: dict[str, Scalar] = field(default_factory=dict)
    d_phi: dict[int, InvariantForm] = field(default_factory=dict)
    forms: dict[str, InvariantForm] = field(default_factory=dict)
    bidegrees: dict[str, tuple[int, int]] = field(default_factory=dict)
    metric_entries: dict[tuple[int, int], Scalar] = field(default_factory=dict)
    vector_forms: dict[str, dict[tuple[int, int], Scalar]] = field(default_factory=dict)
    curves: dict[str, str] = field(default_factory=dict)
    _structure: StructureEquations | None = field(default=None, repr=False)

    @property
    def structure(self) -> StructureEquations:
        if self._structure is None:
            n = self.dimension or 0
            d_phi = tuple(self.d_phi.get(j, InvariantForm.zero(n)) for j in range(1, n + 1))
            self._structure = StructureEquations(n, d_phi, name=self.name, params=tuple(sorted(self.params.items())))
        return self._structure

    def form(self, name: str) -> InvariantForm:
        if name not in self.forms:
            raise NilkahlerError(f"no form named {name!r}, known forms: {sorted(self.forms)}")
        return self.forms[name]

    def metric(self) -> list[list[Scalar]]:
        """Hermitian metric matrix, the identity where no entry was declared."""
        n = self.dimension or 0
        rows = [[ONE if j == k else ZERO for k in range(n)] for j in range(n)]
        for (j, k), value in self.metric_entries.items():
            rows[j - 1][k - 1] = value
        return rows

    def vector_form(self, name: str = "V") -> VectorForm:
        if name not in self.vector_forms:
            raise NilkahlerError(f"no vector form named {name!r}")
        return VectorForm.from_entries(self.dimension, self.vector_forms[name])

    def curve(self, name: str | None = None) -> DeformationCurve:
        if not self.curves:
            raise NilkahlerError("the document declares no curve")
        key = name if name is not None else next(iter(self.curves))
        return DeformationCurve(self.vector_form(self.curves[key]))


class Parser:
    """Recursive descent over the tokens of one line."""

    def __init__(self, document: StructureDocument, tokens: list[Token], line: int):
        self.document = document
        self.tokens = tokens
        self.index = 0
        self.line = line

    # token helpers

    def peek(self) -> Token:
        return self.tokens[self.index]

    def next(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message: str, token: Token | None = None) -> ParseError:
        token = token or self.peek()
        return ParseError(message, self.line, token.column)

    def expect(self, typ: str, text: str | None = None) -> Token:
        token = self.next()
        if token.typ != typ or (text is not None and token.text != text):
            raise self.error(f"expected {text or typ}, got {token.text or 'end of line'!r}", token)
        return token

    def accept(self, typ: str, text: str | None = None) -> Token | None:
        token = self.peek()
        if token.typ == typ and (text is None or token.text == text):
            return self.next()
        return None

    def integer(self) -> int:
        return int(self.expect(Token.number).text)

    def indexed_name(self, prefix: str) -> int:
        """phi5, theta2, bar1 -> the trailing index."""
        token = self.expect(Token.name)
        match = re.fullmatch(rf"{prefix}(\d+)", token.text)
        if match is None:
            raise self.error(f"expected {prefix}<index>, got {token.text!r}", token)
        return int(match.group(1))

    def end(self):
        if self.peek().typ != Token.eof:
            raise self.error(f"unexpected {self.peek().text!r}")

    @property
    def n(self) -> int:
        if self.document.dimension is None:
            raise self.error("'dimension' must be declared before forms")
        return self.document.dimension

    def check_index(self, j: int, token: Token | None = None) -> int:
        if not 1 <= j <= self.n:
            raise self.error(f"index {j} outside 1..{self.n}", token)
        return j

    # expressions

    def expression(self):
        value = self.term()
        while self.peek().typ == Token.operator and self.peek().text in "+-":
            op = self.next()
            right = self.term()
            value = self.binary(value, op, right)
        return value

    def term(self):
        value = self.unary()
        while self.peek().typ == Token.operator and self.peek().text in "*/":
            op = self.next()
            right = self.unary()
            value = self.binary(value, op, right)
        return value

    def unary(self):
        if self.accept(Token.operator, "-"):
            return -self.unary()
        if self.accept(Token.operator, "+"):
            return self.unary()
        return self.power()

    def power(self):
        value = self.atom()
        if self.peek().typ == Token.operator and self.peek().text == "^":
            op = self.next()
            negative = bool(self.accept(Token.operator, "-"))
            exponent = self.integer()
            if isinstance(value, InvariantForm):
                if negative:
                    raise self.error("forms have no negative powers", op)
                return value.power(exponent)
            return value ** (-exponent if negative else exponent)
        return value

    def binary(self, left, op: Token, right):
        text = op.text
        left_form, right_form = isinstance(left, InvariantForm), isinstance(right, InvariantForm)
        if text in "+-":
            if left_form != right_form:
                if left_form:
                    right = InvariantForm.constant(left.n, right)
                else:
                    left = InvariantForm.constant(right.n, left)
            return left + right if text == "+" else left - right
        if text == "*":
            if left_form and right_form:
                return left.wedge(right)
            if left_form:
                return left.scale(right)
            if right_form:
                return right.scale(left)
            return left * right
        if right_form:
            raise self.error("division by a form", op)
        if right.is_zero():
            raise self.error("division by zero", op)
        return left / right

    def atom(self):
        token = self.next()
        if token.typ == Token.number:
            return Scalar(int(token.text))
        if token.typ == Token.left_paren:
            value = self.expression()
            self.expect(Token.right_paren)
            return value
        if token.typ != Token.name:
            raise self.error(f"unexpected {token.text or 'end of line'!r}", token)
        name = token.text
        if name == "i":
            return I
        if name in ("sqrt", "sigma"):
            self.expect(Token.left_paren)
            argument = self.integer()
            self.expect(Token.right_paren)
            if name == "sigma":
                return sigma(argument)
            try:
                root = Scalar.sqrt(argument)
            except NilkahlerError as error:
                raise self.error(str(error), token) from error
            if self.document.sqrt and root.d not in (0, self.document.sqrt):
                raise self.error(f"sqrt({argument}) outside the declared field Q(i, sqrt({self.document.sqrt}))",
                                 token)
            return root
        if name == "conj":
            self.expect(Token.left_paren)
            value = self.expression()
            self.expect(Token.right_paren)
            return value.conjugate() if isinstance(value, InvariantForm) else value.conj()
        if name == "phi" and self.peek().typ == Token.left_bracket:
            return self.monomial()
        if name in self.document.params:
            return self.document.params[name]
        if name in self.document.forms:
            return self.document.forms[name]
        raise self.error(f"unknown name {name!r}", token)

    def index_list(self, closing: str) -> list[int]:
        indices = []
        if self.peek().typ == closing:
            return indices
        while True:
            token = self.peek()
            indices.append(self.check_index(self.integer(), token))
            if not self.accept(Token.comma):
                return indices

    def monomial(self) -> InvariantForm:
        start = self.expect(Token.left_bracket)
        hol = self.index_list(Token.semicolon)
        anti = []
        if self.accept(Token.semicolon):
            anti = self.index_list(Token.right_bracket)
        self.expect(Token.right_bracket)
        try:
            return InvariantForm.monomial(self.n, hol, anti)
        except NilkahlerError as error:
            raise self.error(str(error), start) from error

    def scalar_expression(self) -> Scalar:
        token = self.peek()
        value = self.expression()
        if isinstance(value, InvariantForm):
            if set(value.terms) <= {((), ())}:
                return value.coefficient()
            raise self.error("expected a scalar expression", token)
        return value

    def form_expression(self) -> InvariantForm:
        value = self.expression()
        if isinstance(value, Scalar):
            return InvariantForm.constant(self.n, value)
        return value

    # statements

    def statement(self):
        keyword = self.expect(Token.name)
        handler = getattr(self, f"statement_{keyword.text}", None)
        if handler is None:
            raise self.error(f"unknown statement {keyword.text!r}", keyword)
        handler()
        self.end()

    def statement_name(self):
        parts = [self.expect(Token.name).text]
        while self.peek().typ != Token.eof:
            parts.append(self.next().text)
        self.document.name = "".join(parts)

    def statement_dimension(self):
        token = self.peek()
        if self.document.dimension is not None:
            raise self.error("dimension declared twice", token)
        n = self.integer()
        if n < 1:
            raise self.error("dimension must be positive", token)
        self.document.dimension = n

    def statement_scalars(self):
        self.expect(Token.name, "sqrt")
        token = self.peek()
        d = self.integer()
        try:
            self.document.sqrt = check_sqrt(d)
        except NilkahlerError as error:
            raise self.error(str(error), token) from error

    def statement_param(self):
        name = self.expect(Token.name).text
        self.expect(Token.assign)
        self.document.params[name] = self.scalar_expression()

    def statement_d(self):
        token = self.peek()
        j = self.check_index(self.indexed_name("phi"), token)
        if j in self.document.d_phi:
            raise self.error(f"d phi{j} declared twice", token)
        self.expect(Token.assign)
        image = self.form_expression()
        if any(p + q != 2 for p, q in image.bidegrees()):
            raise self.error(f"d phi{j} must be a 2-form", token)
        self.document.d_phi[j] = image

    def statement_form(self):
        name = self.expect(Token.name)
        declared = None
        if self.accept(Token.left_paren):
            p = self.integer()
            self.expect(Token.comma)
            q = self.integer()
            self.expect(Token.right_paren)
            declared = (p, q)
        self.expect(Token.assign)
        value = self.form_expression()
        if declared is not None and value and value.bidegrees() != [declared]:
            raise self.error(f"form {name.text} declared {declared} but has bidegrees {value.bidegrees()}", name)
        self.document.forms[name.text] = value
        if declared is not None:
            self.document.bidegrees[name.text] = declared

    def statement_metric(self):
        token = self.peek()
        j = self.check_index(self.integer(), token)
        k = self.check_index(self.integer(), token)
        self.expect(Token.assign)
        value = self.scalar_expression()
        self.document.metric_entries[(j, k)] = value
        self.document.metric_entries.setdefault((k, j), value.conj())

    def statement_vform(self):
        name = "V"
        if self.peek().typ == Token.name and not self.peek().text.startswith("theta"):
            name = self.next().text
        token = self.peek()
        lam = self.check_index(self.indexed_name("theta"), token)
        mu = self.check_index(self.indexed_name("bar"), token)
        self.expect(Token.assign)
        self.document.vector_forms.setdefault(name, {})[(lam, mu)] = self.scalar_expression()

    def statement_curve(self):
        self.expect(Token.name, "linear")
        name = self.next().text if self.peek().typ == Token.name else "V"
        if name not in self.document.vector_forms:
            raise self.error(f"curve refers to the undeclared vector form {name!r}")
        self.document.curves[name] = name


def parse(text: str, name: str = "") -> StructureDocument:
    document = StructureDocument(name=name)
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        Parser(document, tokenize(line, number), number).statement()
    if document.dimension is None:
        raise ParseError("missing 'dimension' statement", len(text.splitlines()) or 1, 1)
    logger.debug("Parsed structure %s with %d forms", document.name, len(document.forms))
    try:
        document.structure  # pylint: disable=pointless-statement
    except NilkahlerError as error:
        raise ParseError(str(error), 0, 0) from error
    return document


def parse_structure(text: str) -> StructureEquations:
    """Only the structure equations of a document."""
    return parse(text).structure


def parse_file(path: str | Path) -> StructureDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as error:
        raise ParseError(f"cannot read {path}: {error}") from error
    return parse(text, name=path.stem)


def format_form(form: InvariantForm) -> str:
    """Grammar text that parses back to the same form."""
    return str(form)


def format_document(document: StructureDocument) -> str:
    lines = []
    if document.name:
        lines.append(f"name {document.name}")
    lines.append(f"dimension {document.dimension}")
    if document.sqrt:
        lines.append(f"scalars sqrt {document.sqrt}")
    for name, value in document.params.items():
        lines.append(f"param {name} = {value}")
    for j, image in sorted(document.d_phi.items()):
        lines.append(f"d phi{j} = {format_form(image)}")
    for name, value in document.forms.items():
        bidegree = document.bidegrees.get(name)
        head = f"form {name} ({bidegree[0]},{bidegree[1]})" if bidegree else f"form {name}"
        lines.append(f"{head} = {format_form(value)}")
    for (j, k), value in sorted(document.metric_entries.items()):
        lines.append(f"metric {j} {k} = {value}")
    for name, entries in document.vector_forms.items():
        for (lam, mu), value in sorted(entries.items()):
            lines.append(f"vform {name} theta{lam} bar{mu} = {value}")
    for name in document.curves:
        lines.append(f"curve linear {name}")
    return "\n".join(lines) + "\n"
