"""User-defined model families from plain-text config files.

Matrix entries are arithmetic expressions in the single parameter g:
numeric literals (decimal, optional exponent), the variable ``g``,
unary minus, binary ``+ - * / ^`` and parentheses. Precedence is
``^`` > unary minus > ``* /`` > ``+ -``; the binary operators are
left-associative except ``^`` which is right-associative, so
``-g^2`` means ``-(g^2)`` and ``2^3^2`` means ``2^(3^2)``.

Config documents are line-oriented and markup-free::

    # anything after '#' is a comment
    name = xyz
    d = 2
    D = 2
    domain = -2 2        # optional parameter interval

    matrix               # one block per physical index, d blocks total
    1, g                 # D rows of D comma-separated entries
    1, 1

    matrix
    1, -g
    -1, 1

``load_model_config`` turns such a document into a ``ModelFamily``
whose ``matrix_fn`` evaluates every entry at the requested g; the
expressions are validated by evaluating once at a probe point inside
the declared domain.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .models import ModelFamily
from .mps import MPSModel


class ExprSyntaxError(ValueError):
    """Syntax error in an entry expression, with byte offset and the
    set of token kinds that would have been accepted."""

    def __init__(self, message: str, offset: int, expected: tuple):
        super().__init__(f"{message} (offset {offset}, expected {' | '.join(expected)})")
        self.offset = offset
        self.expected = expected


class ExprEvalError(ArithmeticError):
    """Expression evaluation failed (division by zero, overflow, ...)."""


class ConfigError(ValueError):
    """Malformed model config document."""


# --- abstract syntax ---------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass  # the single variable g


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Var, Neg, BinOp]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ExprSyntaxError(f"unexpected character {stripped[0]!r}", at,
                                  ("number", "'g'", "operator", "'('", "')'"))
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("name") is not None:
            name = m.group("name")
            if name != "g":
                raise ExprSyntaxError(f"unknown variable {name!r}",
                                      m.start("name"), ("'g'",))
            tokens.append(("g", name, m.start("name")))
        else:
            tokens.append((m.group("op"), m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: tuple):
        kind, text, offset = self.peek()
        if kind == "end":
            # point at the token that demanded more input
            prev = self.tokens[self.i - 1] if self.i > 0 else (None, "", 0)
            raise ExprSyntaxError(f"expression ends after {prev[1]!r}",
                                  prev[2], expected)
        raise ExprSyntaxError(f"unexpected token {text!r}", offset, expected)

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail(("'+'", "'-'", "'*'", "'/'", "'^'", "end of input"))
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            e = BinOp(op, e, self.factor())
        return e

    def factor(self) -> Expr:
        if self.peek()[0] == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(text))
        if kind == "g":
            self.advance()
            return Var()
        if kind == "(":
            self.advance()
            e = self.expr()
            if self.peek()[0] != ")":
                self.fail(("')'",))
            self.advance()
            return e
        self.fail(("number", "'g'", "'('", "'-'"))


def parse_expr(text: str) -> Expr:
    """Parse one entry expression into its AST."""
    return _Parser(text).parse()


def eval_expr(e: Expr, g: float) -> float:
    """IEEE-double evaluation at parameter g; 0^0 = 1."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return float(g)
    if isinstance(e, Neg):
        return -eval_expr(e.operand, g)
    left = eval_expr(e.left, g)
    right = eval_expr(e.right, g)
    try:
        if e.op == "+":
            val = left + right
        elif e.op == "-":
            val = left - right
        elif e.op == "*":
            val = left * right
        elif e.op == "/":
            val = left / right
        else:
            val = left ** right
    except ZeroDivisionError as exc:
        raise ExprEvalError(f"division by zero at g = {g!r}") from exc
    except (OverflowError, ValueError) as exc:
        raise ExprEvalError(f"{exc} at g = {g!r}") from exc
    if isinstance(val, complex) or not math.isfinite(val):
        raise ExprEvalError(f"non-finite result at g = {g!r}")
    return val


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def print_expr(e: Expr) -> str:
    """Canonical printer; parse(print_expr(ast)) returns an identical AST."""

    def prec(node) -> int:
        if isinstance(node, (Num, Var)):
            return 5
        if isinstance(node, Neg):
            return _PREC["neg"]
        return _PREC[node.op]

    def wrap(node, need: bool) -> str:
        s = render(node)
        return f"({s})" if need else s

    def render(node) -> str:
        if isinstance(node, Num):
            return repr(node.value)
        if isinstance(node, Var):
            return "g"
        if isinstance(node, Neg):
            return "-" + wrap(node.operand, prec(node.operand) < _PREC["neg"])
        p = prec(node)
        if node.op == "^":
            # right-associative: parenthesize an equal-precedence left child
            left = wrap(node.left, prec(node.left) <= p)
            right = wrap(node.right, prec(node.right) < p)
        else:
            left = wrap(node.left, prec(node.left) < p)
            right = wrap(node.right, prec(node.right) <= p)
        return f"{left}{node.op}{right}"

    return render(e)


# --- config documents --------------------------------------------------------

@dataclass(frozen=True)
class ModelConfig:
    name: str
    d: int
    D: int
    domain: tuple
    entries: tuple      # d matrices, each a D x D tuple-of-tuples of Expr
    sources: tuple      # matching raw entry strings, for diagnostics


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_model_config(text: str) -> ModelConfig:
    """Parse and structurally validate a config document."""
    keys: dict = {}
    matrices: list = []
    sources: list = []
    lines = text.splitlines()
    i = 0

    def err(lineno, msg):
        raise ConfigError(f"line {lineno + 1}: {msg}")

    while i < len(lines):
        line = _strip(lines[i])
        if not line:
            i += 1
            continue
        if line == "matrix":
            if "d" not in keys or "D" not in keys:
                err(i, "d and D must be declared before the first matrix block")
            D = keys["D"]
            rows, row_src = [], []
            for k in range(D):
                j = i + 1 + k
                raw = _strip(lines[j]) if j < len(lines) else ""
                if not raw:
                    err(min(j, len(lines) - 1), f"matrix block needs {D} rows")
                cells = [c.strip() for c in raw.split(",")]
                if len(cells) != D:
                    err(j, f"expected {D} comma-separated entries, got {len(cells)}")
                parsed = []
                for c in cells:
                    try:
                        parsed.append(parse_expr(c))
                    except ExprSyntaxError as exc:
                        err(j, f"in entry {c!r}: {exc}")
                rows.append(tuple(parsed))
                row_src.append(tuple(cells))
            matrices.append(tuple(rows))
            sources.append(tuple(row_src))
            i += 1 + D
            continue
        if "=" not in line:
            err(i, f"expected 'key = value' or 'matrix', got {line!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key == "name":
            keys["name"] = value
        elif key in ("d", "D"):
            try:
                keys[key] = int(value)
            except ValueError:
                err(i, f"{key} must be an integer, got {value!r}")
            if keys[key] < 1 or (key == "d" and keys[key] < 2):
                err(i, f"{key} = {keys[key]} out of range")
        elif key == "domain":
            parts = value.split()
            try:
                lo, hi = (float(p) for p in parts)
            except ValueError:
                err(i, f"domain must be two numbers, got {value!r}")
            if not lo < hi:
                err(i, "domain must satisfy lo < hi")
            keys["domain"] = (lo, hi)
        else:
            err(i, f"unknown key {key!r}")
        i += 1

    for key in ("name", "d", "D"):
        if key not in keys:
            raise ConfigError(f"missing required key {key!r}")
    if len(matrices) != keys["d"]:
        raise ConfigError(
            f"expected d = {keys['d']} matrix blocks, found {len(matrices)}")
    return ModelConfig(
        name=keys["name"], d=keys["d"], D=keys["D"],
        domain=keys.get("domain", (-2.0, 2.0)),
        entries=tuple(matrices), sources=tuple(sources))


def family_from_config(cfg: ModelConfig) -> ModelFamily:
    """Build the ModelFamily and validate it at one probe point."""

    def matrix_fn(g: float) -> MPSModel:
        mats = []
        for rows in cfg.entries:
            mats.append(np.array([[eval_expr(e, g) for e in row] for row in rows],
                                 dtype=float))
        return MPSModel(tuple(mats))

    probe = 0.5 * (cfg.domain[0] + cfg.domain[1])
    try:
        matrix_fn(probe)
    except (ExprEvalError, ValueError) as exc:
        raise ConfigError(f"model invalid at probe point g = {probe!r}: {exc}") from exc
    return ModelFamily(
        name=cfg.name, d=cfg.d, D=cfg.D, matrix_fn=matrix_fn,
        parameter_domain=cfg.domain, closed_form_available=False)


def load_model_config(text: str) -> ModelFamily:
    """Parse a config document and return its validated ModelFamily."""
    return family_from_config(parse_model_config(text))
