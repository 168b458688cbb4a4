"""
A small expression language for q-series.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' signed-int)? | '-' factor
    atom   := int | 'q' ('^' int)? | func '(' args ')' | '(' expr ')'
    func   := 'E' | 'eta' | 'phi' | 'psi' | 'P' | 'X'

E(a,b) is (q^a; q^b)_inf, eta(k) is (q^k; q^k)_inf, phi(k) is phi(-q^k), psi(k) is psi(q^k),
P(k) is P(q^k) and X(k) is X(-q^k). Binary operators are left-associative.
"""

from dataclasses import dataclass, field

from loguru import logger

from cubic_scan.products import NamedFunction, NamedTag, euler, pochhammer
from cubic_scan.series import (
    NonUnitConstantTermError,
    TruncatedSeries,
    add,
    divide,
    mul,
    neg,
    power,
    sub,
)

type Span = tuple[int, int]  # [start, end) character positions in the source text
type Node = IntLiteral | QPower | Pochhammer | Euler | Named | Neg | Add | Sub | Mul | Div | Pow | Paren

# binding power of the binary operators; higher binds tighter
BINARY_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}
SINGLE_CHAR_TOKENS = "+-*/^(),"
NAMED_FUNCTIONS = {"phi": NamedTag.PHI_NEG, "psi": NamedTag.PSI, "P": NamedTag.P, "X": NamedTag.X_NEG}
FUNCTION_NAMES = ("E", "eta", *NAMED_FUNCTIONS)
# deepest expression tree accepted; parsing, rendering and evaluation all recurse on it
MAX_DEPTH = 100


class ExpressionSyntaxError(ValueError):
    """Raised when text does not follow the grammar; offset is the 1-based column of the problem."""

    def __init__(self, message: str, offset: int, expected: str) -> None:
        super().__init__(message)
        self.offset = offset
        self.expected = expected


class ExpressionEvaluationError(ArithmeticError):
    """Raised when a well-formed expression cannot be evaluated, e.g. division by a non-unit."""

    def __init__(self, message: str, span: Span) -> None:
        super().__init__(message)
        self.span = span


@dataclass(frozen=True, slots=True)
class IntLiteral:
    value: int
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class QPower:
    exponent: int
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Pochhammer:
    a: int
    b: int
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Euler:
    k: int
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Named:
    tag: NamedTag
    k: int
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Neg:
    operand: Node
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Add:
    left: Node
    right: Node
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Sub:
    left: Node
    right: Node
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Mul:
    left: Node
    right: Node
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Div:
    left: Node
    right: Node
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Pow:
    base: Node
    exponent: int  # literal, may be negative
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Paren:
    inner: Node
    span: Span = field(default=(0, 0), compare=False, kw_only=True)


BINARY_NODES: dict[str, type[Add | Sub | Mul | Div]] = {"+": Add, "-": Sub, "*": Mul, "/": Div}


def _children(node: Node) -> tuple[Node, ...]:
    match node:
        case Add(left, right) | Sub(left, right) | Mul(left, right) | Div(left, right):
            return (left, right)
        case Neg(inner) | Paren(inner) | Pow(inner):
            return (inner,)
    return ()


def _deepest(node: Node) -> tuple[int, Node]:
    """Longest root-to-leaf path under node, in edges, and the leaf at its end; walked without recursion."""
    depth, leaf = 0, node
    stack = [(node, 0)]
    while stack:
        current, level = stack.pop()
        if level > depth:
            depth, leaf = level, current
        stack.extend((child, level + 1) for child in _children(current))
    return depth, leaf


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "int", "name", "op" or "end"
    text: str
    pos: int  # 0-based start


def tokenize(text: str) -> list[Token]:
    """Split text into tokens, ending with an "end" token positioned after the last character."""
    tokens = []
    pos = 0
    while pos < len(text):
        c = text[pos]
        if c.isspace():
            pos += 1
            continue
        start = pos
        if c.isascii() and c.isdigit():
            while pos < len(text) and text[pos].isascii() and text[pos].isdigit():
                pos += 1
            tokens.append(Token("int", text[start:pos], start))
        elif c.isascii() and c.isalpha():
            while pos < len(text) and text[pos].isascii() and text[pos].isalpha():
                pos += 1
            tokens.append(Token("name", text[start:pos], start))
        elif c in SINGLE_CHAR_TOKENS:
            pos += 1
            tokens.append(Token("op", c, start))
        else:
            raise ExpressionSyntaxError(
                f"unexpected character {c!r} at offset {start + 1}", offset=start + 1, expected="a token"
            )
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.index = 0
        self.nesting = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.index + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.peek()
        self.index += 1
        return token

    def at_op(self, op: str) -> bool:
        token = self.peek()
        return token.kind == "op" and token.text == op

    def error(self, expected: str) -> ExpressionSyntaxError:
        token = self.peek()
        found = "end of input" if token.kind == "end" else repr(token.text)
        return ExpressionSyntaxError(
            f"expected {expected} at offset {token.pos + 1}, found {found}", offset=token.pos + 1, expected=expected
        )

    def too_deep(self, pos: int) -> ExpressionSyntaxError:
        expected = f"at most {MAX_DEPTH} levels of nesting"
        message = f"expression nested deeper than {MAX_DEPTH} at offset {pos + 1}"
        return ExpressionSyntaxError(message, pos + 1, expected)

    def enter(self) -> None:
        self.nesting += 1
        if self.nesting > MAX_DEPTH:
            raise self.too_deep(self.peek().pos)

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            raise self.error(repr(op))
        return self.advance()

    def unsigned_int(self, expected: str = "an integer") -> tuple[int, int]:
        token = self.peek()
        if token.kind != "int":
            raise self.error(expected)
        self.advance()
        return int(token.text), token.pos + len(token.text)

    def signed_int(self) -> tuple[int, int]:
        if self.at_op("-"):
            self.advance()
            value, end = self.unsigned_int("an integer exponent")
            return -value, end
        return self.unsigned_int("an integer exponent")

    def parse(self) -> Node:
        node = self.expression(1)
        if self.peek().kind != "end":
            raise self.error("an operator or end of input")
        depth, leaf = _deepest(node)
        if depth > MAX_DEPTH:
            raise self.too_deep(leaf.span[0])
        return node

    def expression(self, min_precedence: int) -> Node:
        lhs = self.factor()
        while (token := self.peek()).kind == "op" and BINARY_PRECEDENCE.get(token.text, 0) >= min_precedence:
            self.advance()
            # all binary operators are left-associative
            rhs = self.expression(BINARY_PRECEDENCE[token.text] + 1)
            lhs = BINARY_NODES[token.text](lhs, rhs, span=(lhs.span[0], rhs.span[1]))
        return lhs

    def factor(self) -> Node:
        if self.at_op("-"):
            self.enter()
            start = self.advance().pos
            operand = self.factor()
            self.nesting -= 1
            return Neg(operand, span=(start, operand.span[1]))
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            exponent, end = self.signed_int()
            return Pow(base, exponent, span=(base.span[0], end))
        return base

    def atom(self) -> Node:
        token = self.peek()
        if token.kind == "int":
            value, end = self.unsigned_int()
            return IntLiteral(value, span=(token.pos, end))
        if token.kind == "op" and token.text == "(":
            self.enter()
            self.advance()
            inner = self.expression(1)
            close = self.expect_op(")")
            self.nesting -= 1
            return Paren(inner, span=(token.pos, close.pos + 1))
        if token.kind == "name" and token.text == "q":
            self.advance()
            # q^-s is left to the factor rule, where it becomes Pow(q, -s)
            if self.at_op("^") and self.peek(1).kind == "int":
                self.advance()
                exponent, end = self.unsigned_int()
                return QPower(exponent, span=(token.pos, end))
            return QPower(1, span=(token.pos, token.pos + 1))
        if token.kind == "name" and token.text in FUNCTION_NAMES:
            return self.call()
        raise self.error("an integer, 'q', a function name or '('")

    def call(self) -> Node:
        name = self.advance()
        self.expect_op("(")
        first, _ = self.unsigned_int("a positive integer argument")
        args = [first]
        if name.text == "E":
            self.expect_op(",")
            second, _ = self.unsigned_int("a positive integer argument")
            args.append(second)
        close = self.expect_op(")")
        if min(args) < 1:
            raise ExpressionSyntaxError(
                f"arguments of {name.text} must be positive at offset {name.pos + 1}",
                offset=name.pos + 1,
                expected="a positive integer argument",
            )
        span = (name.pos, close.pos + 1)
        if name.text == "E":
            return Pochhammer(args[0], args[1], span=span)
        if name.text == "eta":
            return Euler(args[0], span=span)
        return Named(NAMED_FUNCTIONS[name.text], args[0], span=span)


def parse_expr(text: str) -> Node:
    """Parse text into an expression tree; raises ExpressionSyntaxError on bad input."""
    return _Parser(text).parse()


def render_expr(node: Node) -> str:
    """Canonical text; parse_expr(render_expr(node)) == node for every parsed node."""
    match node:
        case IntLiteral(value=value):
            return str(value)
        case QPower(exponent=s):
            return "q" if s == 1 else f"q^{s}"
        case Pochhammer(a=a, b=b):
            return f"E({a},{b})"
        case Euler(k=k):
            return f"eta({k})"
        case Named(tag=tag, k=k):
            return f"{tag.value}({k})"
        case Neg(operand=operand):
            return f"-{render_expr(operand)}"
        case Add(left=left, right=right):
            return f"{render_expr(left)} + {render_expr(right)}"
        case Sub(left=left, right=right):
            return f"{render_expr(left)} - {render_expr(right)}"
        case Mul(left=left, right=right):
            return f"{render_expr(left)} * {render_expr(right)}"
        case Div(left=left, right=right):
            return f"{render_expr(left)} / {render_expr(right)}"
        case Pow(base=base, exponent=e):
            return f"{render_expr(base)}^{e}"
        case Paren(inner=inner):
            return f"({render_expr(inner)})"
    raise TypeError(f"not an expression node: {node!r}")


def eval_expr(node: Node, order: int) -> TruncatedSeries:
    """Evaluate an expression to a series exact to order."""
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    match node:
        case IntLiteral(value=value):
            return TruncatedSeries.constant(value, order)
        case QPower(exponent=s):
            return TruncatedSeries.monomial(1, s, order)
        case Pochhammer(a=a, b=b):
            return pochhammer(a, b, order)
        case Euler(k=k):
            return euler(k, order)
        case Named(tag=tag, k=k):
            return NamedFunction(tag, k).series(order)
        case Neg(operand=operand):
            return neg(eval_expr(operand, order))
        case Add(left=left, right=right):
            return add(eval_expr(left, order), eval_expr(right, order))
        case Sub(left=left, right=right):
            return sub(eval_expr(left, order), eval_expr(right, order))
        case Mul(left=left, right=right):
            return mul(eval_expr(left, order), eval_expr(right, order))
        case Div(left=left, right=right):
            numerator = eval_expr(left, order)
            denominator = eval_expr(right, order)
            try:
                return divide(numerator, denominator)
            except NonUnitConstantTermError as e:
                raise _non_unit(right, e) from e
        case Pow(base=base, exponent=e):
            value = eval_expr(base, order)
            try:
                return power(value, e)
            except NonUnitConstantTermError as err:
                raise _non_unit(base, err) from err
        case Paren(inner=inner):
            return eval_expr(inner, order)
    raise TypeError(f"not an expression node: {node!r}")


def _non_unit(node: Node, cause: NonUnitConstantTermError) -> ExpressionEvaluationError:
    start, end = node.span
    logger.debug(f"non-unit divisor {render_expr(node)} at columns {start + 1}-{end}")
    return ExpressionEvaluationError(
        f"cannot divide by {render_expr(node)} (columns {start + 1}-{end}): {cause}", node.span
    )


def eval_text(text: str, order: int) -> TruncatedSeries:
    """Parse and evaluate text to the given order."""
    return eval_expr(parse_expr(text), order)
