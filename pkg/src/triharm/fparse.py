"""A tiny expression language for right-hand sides and boundary data.

Grammar (``^`` binds tighter than unary minus, and is right associative)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'

Names are ``x1, x2, u, v, w`` and the constant ``pi``; functions are
``sin, cos, tan, exp, log, sqrt, abs``. Evaluation is vectorised with numpy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np

VARIABLES = ("x1", "x2", "u", "v", "w")
CONSTANTS = {"pi": np.pi}
FUNCTIONS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EvalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Const, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, val, off = self.peek()
        if val != text or kind != "op":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {text!r}, found {found}", off)
        self.take()

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, val, off = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in CONSTANTS:
                return Const(val)
            if val in VARIABLES:
                return Var(val)
            raise ParseError(f"unknown identifier {val!r}", off)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"expected number, name or '(', found {found}", off)


def parse(src: str) -> Expr:
    p = _Parser(src)
    node = p.expr()
    kind, val, off = p.peek()
    if kind != "end":
        raise ParseError(f"expected operator or end of input, found {val!r}", off)
    return node


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_ATOM = 5


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return _ATOM


def to_string(e: Expr) -> str:
    """Canonical text with the fewest parentheses that re-parse to ``e``."""

    def wrap(sub: Expr, min_prec: int) -> str:
        s = to_string(sub)
        return f"({s})" if _prec(sub) < min_prec else s

    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({to_string(e.arg)})"
    if isinstance(e, Neg):
        return "-" + wrap(e.operand, 3)
    p = _PREC[e.op]
    if e.op == "^":
        return f"{wrap(e.left, _ATOM)}^{wrap(e.right, 3)}"
    return f"{wrap(e.left, p)} {e.op} {wrap(e.right, p + 1)}"


def free_variables(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Neg):
        return free_variables(e.operand)
    if isinstance(e, Call):
        return free_variables(e.arg)
    if isinstance(e, BinOp):
        return free_variables(e.left) | free_variables(e.right)
    return set()


def _fail(e: Expr, what: str):
    raise EvalError(f"{what} in {to_string(e)!r}")


def _compile(e: Expr) -> Callable[[Mapping], np.ndarray]:
    if isinstance(e, Num):
        value = e.value
        return lambda env: value
    if isinstance(e, Const):
        value = CONSTANTS[e.name]
        return lambda env: value
    if isinstance(e, Var):
        name = e.name

        def var(env):
            try:
                return env[name]
            except KeyError:
                raise EvalError(f"unbound variable {name!r}") from None

        return var
    if isinstance(e, Neg):
        inner = _compile(e.operand)
        return lambda env: -inner(env)
    if isinstance(e, Call):
        arg = _compile(e.arg)
        fn = FUNCTIONS[e.func]
        if e.func == "log":

            def log(env):
                a = arg(env)
                if np.any(np.asarray(a) <= 0):
                    _fail(e, "log of nonpositive value")
                return np.log(a)

            return log
        if e.func == "sqrt":

            def sqrt(env):
                a = arg(env)
                if np.any(np.asarray(a) < 0):
                    _fail(e, "sqrt of negative value")
                return np.sqrt(a)

            return sqrt

        def call(env):
            with np.errstate(all="ignore"):
                r = fn(arg(env))
            if not np.all(np.isfinite(r)):
                _fail(e, "non-finite result")
            return r

        return call

    left, right = _compile(e.left), _compile(e.right)
    if e.op == "+":
        return lambda env: left(env) + right(env)
    if e.op == "-":
        return lambda env: left(env) - right(env)
    if e.op == "*":
        return lambda env: left(env) * right(env)
    if e.op == "/":

        def div(env):
            d = right(env)
            if np.any(np.asarray(d) == 0):
                _fail(e, "division by zero")
            return left(env) / d

        return div
    if isinstance(e.right, Num) and float(e.right.value).is_integer() and abs(e.right.value) < 2**31:
        k = int(e.right.value)
        if k >= 0:
            return lambda env: left(env) ** k

    def power(env):
        with np.errstate(all="ignore"):
            r = np.power(np.asarray(left(env), dtype=float), right(env))
        if not np.all(np.isfinite(r)):
            _fail(e, "non-finite power")
        return r

    return power


class CompiledExpr:
    """An expression compiled once into nested numpy closures."""

    def __init__(self, expr: Expr | str):
        self.expr = parse(expr) if isinstance(expr, str) else expr
        self.variables = free_variables(self.expr)
        self._fn = _compile(self.expr)

    def __call__(self, env: Mapping[str, float | np.ndarray]):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            r = self._fn(env)
        if not np.all(np.isfinite(r)):
            raise EvalError(f"non-finite value from {to_string(self.expr)!r}")
        return r

    def __repr__(self):
        return f"CompiledExpr({to_string(self.expr)!r})"

    def as_field_function(self) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
        """``(x1, x2) -> value`` for boundary data and exact solutions."""
        extra = self.variables - {"x1", "x2"}
        if extra:
            raise EvalError(f"expression depends on {sorted(extra)}, only x1 and x2 are allowed here")
        return lambda x1, x2: np.broadcast_to(self({"x1": x1, "x2": x2}), np.shape(x1))

    def as_nonlinear_term(self) -> Callable[..., np.ndarray]:
        """``(x1, x2, u, v, w) -> value`` for the right-hand side."""
        return lambda x1, x2, u, v, w: np.broadcast_to(
            self({"x1": x1, "x2": x2, "u": u, "v": v, "w": w}), np.broadcast_shapes(np.shape(x1), np.shape(u))
        )


def evaluate(e: Expr | str, env: Mapping[str, float]) -> float:
    """Evaluate at a single point; convenience wrapper over :class:`CompiledExpr`."""
    for name, val in env.items():
        if not np.all(np.isfinite(val)):
            raise EvalError(f"non-finite binding for {name!r}")
    return float(CompiledExpr(e)(env))
