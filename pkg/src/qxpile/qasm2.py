"""
OpenQASM 2.0 reader/writer for the gate-application subset.

Supported input: the ``OPENQASM 2.0;`` header, an optional ``include "qelib1.inc";``,
one or more ``qreg`` declarations (flattened in declaration order into a single
0-based index space) and gate applications over the :mod:`qxpile.ir` vocabulary.
Angle expressions: decimal literals, ``pi``, unary minus, ``+ - * /`` and parentheses.

Anything else (creg, measure, barrier, reset, if, gate/opaque definitions) raises
:class:`ParseError` with ``kind="unsupported_feature"``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .ir import ALIASES, KINDS, Circuit, GateInstance

__all__ = ["ParseError", "parse", "emit"]

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'

_UNSUPPORTED = {"creg", "measure", "barrier", "reset", "if", "gate", "opaque"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<op>==|[;,()\[\]+\-*/{}=<>!])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    """Raised for any input outside the supported subset.

    ``kind`` is one of ``syntax``, ``unknown_gate``, ``arity_mismatch``,
    ``bad_index``, ``unsupported_feature``.
    """

    def __init__(self, message: str, line: int = 1, column: int = 1, kind: str = "syntax"):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind


@dataclass
class _Tok:
    type: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        nl = m.group().count("\n")
        if nl:
            line += nl
            line_start = pos + m.group().rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.registers: dict[str, tuple[int, int]] = {}  # name -> (offset, size)
        self.nb_qubits = 0
        self.gates: list[GateInstance] = []

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, kind: str = "syntax", tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col, kind)

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def expect_type(self, type_: str, what: str) -> _Tok:
        if self.tok.type != type_:
            self.error(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    # grammar
    def program(self) -> Circuit:
        self.expect("OPENQASM")
        version = self.expect_type("real", "version number")
        if version.text not in ("2.0", "2"):
            self.error(f"unsupported OpenQASM version {version.text}", "unsupported_feature", version)
        self.expect(";")
        while self.tok.type != "eof":
            self.statement()
        if not self.registers:
            self.error("no qreg declared")
        return Circuit(self.nb_qubits, self.gates)

    def statement(self):
        tok = self.tok
        if tok.type != "id":
            self.error(f"unexpected {tok.text!r}")
        if tok.text == "include":
            self.next()
            path = self.expect_type("string", "include path")
            if path.text != '"qelib1.inc"':
                self.error(f"cannot include {path.text}", "unsupported_feature", path)
            self.expect(";")
        elif tok.text == "qreg":
            self.next()
            name = self.expect_type("id", "register name")
            self.expect("[")
            size = self.integer()
            self.expect("]")
            self.expect(";")
            if name.text in self.registers:
                self.error(f"register {name.text!r} redeclared", tok=name)
            if size < 1:
                self.error("register size must be positive", "bad_index", name)
            self.registers[name.text] = (self.nb_qubits, size)
            self.nb_qubits += size
        elif tok.text in _UNSUPPORTED:
            self.error(f"{tok.text!r} is not supported", "unsupported_feature")
        else:
            self.gate_application()

    def integer(self) -> int:
        tok = self.expect_type("real", "integer")
        if not tok.text.isdigit():
            self.error(f"expected integer, found {tok.text!r}", tok=tok)
        return int(tok.text)

    def gate_application(self):
        name_tok = self.next()
        kind = KINDS.get(ALIASES.get(name_tok.text, name_tok.text))
        if kind is None:
            self.error(f"unknown gate {name_tok.text!r}", "unknown_gate", name_tok)
        params = []
        if self.tok.text == "(":
            self.next()
            if self.tok.text != ")":
                params.append(self.expr())
                while self.tok.text == ",":
                    self.next()
                    params.append(self.expr())
            self.expect(")")
        qubits = [self.operand()]
        while self.tok.text == ",":
            self.next()
            qubits.append(self.operand())
        self.expect(";")
        if len(params) != kind.param_count:
            self.error(
                f"{kind.name} takes {kind.param_count} parameter(s), got {len(params)}",
                "arity_mismatch",
                name_tok,
            )
        if len(qubits) != kind.arity:
            self.error(
                f"{kind.name} acts on {kind.arity} qubit(s), got {len(qubits)}",
                "arity_mismatch",
                name_tok,
            )
        if len(set(qubits)) != len(qubits):
            self.error(f"{kind.name}: repeated qubit operand", "bad_index", name_tok)
        if not all(math.isfinite(p) for p in params):
            self.error(f"{kind.name}: non-finite parameter", "syntax", name_tok)
        self.gates.append(GateInstance(kind, tuple(qubits), tuple(params)))

    def operand(self) -> int:
        name = self.expect_type("id", "qubit operand")
        if name.text not in self.registers:
            self.error(f"undeclared register {name.text!r}", "bad_index", name)
        if self.tok.text != "[":
            self.error("whole-register operands are not supported", "unsupported_feature")
        self.next()
        idx_tok = self.tok
        idx = self.integer()
        self.expect("]")
        offset, size = self.registers[name.text]
        if idx >= size:
            self.error(f"index {idx} out of range for {name.text}[{size}]", "bad_index", idx_tok)
        return offset + idx

    # expressions: expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*
    def expr(self) -> float:
        value = self.term()
        while self.tok.text in ("+", "-"):
            op = self.next().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.unary()
        while self.tok.text in ("*", "/"):
            op_tok = self.next()
            rhs = self.unary()
            if op_tok.text == "*":
                value *= rhs
            else:
                if rhs == 0:
                    self.error("division by zero", tok=op_tok)
                value /= rhs
        return value

    def unary(self) -> float:
        if self.tok.text == "-":
            self.next()
            return -self.unary()
        if self.tok.text == "+":
            self.next()
            return self.unary()
        return self.atom()

    def atom(self) -> float:
        tok = self.tok
        if tok.type == "real":
            self.next()
            return float(tok.text)
        if tok.text == "pi":
            self.next()
            return math.pi
        if tok.text == "(":
            self.next()
            value = self.expr()
            self.expect(")")
            return value
        self.error(f"unexpected {tok.text or 'end of input'!r} in expression")


def parse(text: str) -> Circuit:
    """Parse OpenQASM 2.0 text into a :class:`Circuit`. Raises :class:`ParseError`."""
    return _Parser(text).program()


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit(c: Circuit) -> str:
    """Serialize ``c``: header, one ``qreg q[n];``, then one statement per line."""
    lines = [HEADER, f"qreg q[{c.nb_qubits}];\n"]
    for g in c.gates:
        args = f"({','.join(_fmt(p) for p in g.params)})" if g.params else ""
        operands = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{g.kind.name}{args} {operands};\n")
    return "".join(lines)
