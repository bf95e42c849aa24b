"""Firmware: the drones' candidate-generation code.

A firmware is a small vector-arithmetic expression over the search context::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | atom
    atom   := NUMBER | IDENT | '(' expr ')'

Identifiers are ``x tb gb r1 r2 U N C1 C2 C3``. ``U`` and ``N`` draw a fresh
uniform / standard-normal vector at every occurrence. Division is protected:
a divisor component with magnitude below ``1e-12`` yields a quotient of 1.

Trees are immutable; :func:`mutate_firmware` and :func:`recombine_firmware`
return new trees and never exceed :data:`MAX_DEPTH`.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Union

import numpy as np

__all__ = [
    "MAX_DEPTH",
    "LITERAL_RANGE",
    "COORDINATE_TERMINALS",
    "TERMINALS",
    "Binary",
    "Negate",
    "Terminal",
    "ExprTree",
    "EvalContext",
    "Firmware",
    "FirmwareError",
    "FirmwareSyntaxError",
    "DepthError",
    "LiteralRangeError",
    "parse",
    "serialize",
    "depth",
    "compile_expr",
    "eval_expr",
    "random_firmware",
    "mutate_firmware",
    "recombine_firmware",
    "contains_coordinate",
]

MAX_DEPTH = 7
LITERAL_RANGE = 10.0
PROTECT_EPS = 1e-12

COORDINATE_TERMINALS = ("x", "tb", "gb", "r1", "r2")
TERMINALS = COORDINATE_TERMINALS + ("U", "N", "C1", "C2", "C3")
LITERAL = "literal"
BINARY_OPS = ("+", "-", "*", "/")

P_TERMINAL = 0.4
MAX_REGENERATE = 10
MAX_CROSSOVER_RETRIES = 10


class FirmwareError(ValueError):
    """Base class for rejected firmware source."""


class FirmwareSyntaxError(FirmwareError):
    def __init__(self, message: str, position: int, source: str):
        where = "end of input" if position >= len(source) else f"position {position}"
        super().__init__(f"{message} at {where}")
        self.position = position
        self.source = source


class DepthError(FirmwareError):
    pass


class LiteralRangeError(FirmwareError):
    pass


@dataclass(frozen=True)
class Terminal:
    name: str
    value: float | None = None


@dataclass(frozen=True)
class Negate:
    child: "ExprTree"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "ExprTree"
    right: "ExprTree"


ExprTree = Union[Terminal, Negate, Binary]


def literal(value: float) -> Terminal:
    return Terminal(LITERAL, float(value))


def depth(tree: ExprTree) -> int:
    """Number of nodes on the longest root-to-leaf path (a terminal has depth 1)."""
    if isinstance(tree, Terminal):
        return 1
    if isinstance(tree, Negate):
        return 1 + depth(tree.child)
    return 1 + max(depth(tree.left), depth(tree.right))


def contains_coordinate(tree: ExprTree) -> bool:
    if isinstance(tree, Terminal):
        return tree.name in COORDINATE_TERMINALS
    if isinstance(tree, Negate):
        return contains_coordinate(tree.child)
    return contains_coordinate(tree.left) or contains_coordinate(tree.right)


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/()])"
    r")"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    end = len(source.rstrip())
    while pos < end:
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.lastgroup is None:
            bad = pos + len(source[pos:]) - len(source[pos:].lstrip())
            raise FirmwareSyntaxError(f"unexpected character {source[bad]!r}", bad, source)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise FirmwareSyntaxError(message, tok[2], self.source)

    def parse(self) -> ExprTree:
        tree = self.expr()
        if self.peek()[0] != "eof":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return tree

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            if self.peek()[0] == "number":
                return self.number(negative=True)
            return Negate(self.unary())
        return self.atom()

    def number(self, negative=False):
        tok = self.take()
        value = float(tok[1])
        if negative:
            value = -value
        if not -LITERAL_RANGE <= value <= LITERAL_RANGE:
            raise LiteralRangeError(
                f"literal {value!r} at position {tok[2]} outside [-{LITERAL_RANGE:g}, {LITERAL_RANGE:g}]"
            )
        return literal(value)

    def atom(self):
        kind, text, _ = self.peek()
        if kind == "number":
            return self.number()
        if kind == "ident":
            if text not in TERMINALS:
                self.fail(f"unknown identifier {text!r}")
            self.take()
            return Terminal(text)
        if kind == "op" and text == "(":
            self.take()
            node = self.expr()
            if self.peek()[1] != ")" or self.peek()[0] != "op":
                self.fail("expected ')'")
            self.take()
            return node
        if kind == "eof":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {text!r}")


def parse(source: str) -> ExprTree:
    """Parse firmware source into an expression tree.

    Raises
    ------
    FirmwareSyntaxError
        Malformed input; carries the offending ``position``.
    DepthError
        Tree deeper than :data:`MAX_DEPTH`.
    LiteralRangeError
        Numeric literal outside ``[-10, 10]``.
    """
    tree = _Parser(source).parse()
    d = depth(tree)
    if d > MAX_DEPTH:
        raise DepthError(f"expression depth {d} exceeds maximum {MAX_DEPTH}")
    return tree


def serialize(tree: ExprTree) -> str:
    """Fully parenthesized canonical source; ``parse(serialize(t)) == t``."""
    if isinstance(tree, Terminal):
        return repr(tree.value) if tree.name == LITERAL else tree.name
    if isinstance(tree, Negate):
        inner = serialize(tree.child)
        # "-3.0" would re-parse as a negative literal, not a negation
        if isinstance(tree.child, Terminal) and tree.child.name == LITERAL:
            inner = f"({inner})"
        return f"(-{inner})"
    return f"({serialize(tree.left)} {tree.op} {serialize(tree.right)})"


# ---------------------------------------------------------------- evaluation

@dataclass
class EvalContext:
    """Vectors and random stream visible to a firmware while it runs."""

    x: np.ndarray
    tb: np.ndarray
    gb: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    rng: np.random.Generator
    c1: float = 0.5
    c2: float = 0.3
    c3: float = 0.7


def _protected_div(a, b):
    b = np.asarray(b, dtype=float)
    q = np.divide(a, b)
    return np.where(np.abs(b) < PROTECT_EPS, 1.0, q)


_BINARY_FUNCS = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": _protected_div,
}

_TERMINAL_GETTERS: dict[str, Callable[[EvalContext], object]] = {
    "x": lambda ctx: ctx.x,
    "tb": lambda ctx: ctx.tb,
    "gb": lambda ctx: ctx.gb,
    "r1": lambda ctx: ctx.r1,
    "r2": lambda ctx: ctx.r2,
    "U": lambda ctx: ctx.rng.random(ctx.x.shape[0]),
    "N": lambda ctx: ctx.rng.standard_normal(ctx.x.shape[0]),
    "C1": lambda ctx: ctx.c1,
    "C2": lambda ctx: ctx.c2,
    "C3": lambda ctx: ctx.c3,
}


def _compile(tree: ExprTree):
    if isinstance(tree, Terminal):
        if tree.name == LITERAL:
            value = np.float64(tree.value)
            return lambda ctx: value
        return _TERMINAL_GETTERS[tree.name]
    if isinstance(tree, Negate):
        child = _compile(tree.child)
        return lambda ctx: np.negative(child(ctx))
    func = _BINARY_FUNCS[tree.op]
    left, right = _compile(tree.left), _compile(tree.right)
    # left before right: fixes the order of U/N draws
    return lambda ctx: func(left(ctx), right(ctx))


def compile_expr(tree: ExprTree) -> Callable[[EvalContext], np.ndarray]:
    """Turn a tree into a callable ``ctx -> coordinate`` (scalars broadcast)."""
    body = _compile(tree)

    def run(ctx: EvalContext) -> np.ndarray:
        with np.errstate(all="ignore"):
            out = body(ctx)
        return np.array(np.broadcast_to(out, ctx.x.shape), dtype=float)

    return run


def eval_expr(tree: ExprTree, ctx: EvalContext) -> np.ndarray:
    """Evaluate ``tree`` componentwise in ``ctx``.

    Never raises on arithmetic; overflow may still leave non-finite
    components, which the engine repairs when clamping to bounds.
    """
    return compile_expr(tree)(ctx)


class Firmware:
    """A parsed firmware together with its source and compiled form."""

    __slots__ = ("tree", "source", "_run")

    def __init__(self, tree: ExprTree):
        d = depth(tree)
        if d > MAX_DEPTH:
            raise DepthError(f"expression depth {d} exceeds maximum {MAX_DEPTH}")
        self.tree = tree
        self.source = serialize(tree)
        self._run = compile_expr(tree)

    @classmethod
    def from_source(cls, text: str) -> "Firmware":
        return cls(parse(text))

    def __call__(self, ctx: EvalContext) -> np.ndarray:
        return self._run(ctx)

    @property
    def digest(self) -> str:
        return hashlib.sha1(self.source.encode()).hexdigest()[:8]

    def __eq__(self, other):
        return isinstance(other, Firmware) and self.tree == other.tree

    def __hash__(self):
        return hash(self.source)

    def __repr__(self):
        return f"Firmware({self.source!r})"


# ---------------------------------------------------------------- variation

def _random_terminal(rng: np.random.Generator) -> Terminal:
    k = int(rng.integers(len(TERMINALS) + 1))
    if k == len(TERMINALS):
        return literal(rng.uniform(-LITERAL_RANGE, LITERAL_RANGE))
    return Terminal(TERMINALS[k])


def _grow(rng: np.random.Generator, max_depth: int, level: int = 1) -> ExprTree:
    if level >= max_depth or rng.random() < P_TERMINAL:
        return _random_terminal(rng)
    k = int(rng.integers(len(BINARY_OPS) + 1))
    if k == len(BINARY_OPS):
        return Negate(_grow(rng, max_depth, level + 1))
    return Binary(BINARY_OPS[k], _grow(rng, max_depth, level + 1), _grow(rng, max_depth, level + 1))


def _random_tree(rng: np.random.Generator, max_depth: int) -> ExprTree:
    for _ in range(1 + MAX_REGENERATE):
        tree = _grow(rng, max_depth)
        if contains_coordinate(tree):
            return tree
    if depth(tree) < max_depth:
        return Binary("+", tree, Terminal("x"))
    # no room to graft: swap a leaf for x instead
    leaves = [path for path, node, _ in _walk(tree) if isinstance(node, Terminal)]
    return _replace(tree, leaves[int(rng.integers(len(leaves)))], Terminal("x"))


def random_firmware(rng: np.random.Generator, max_depth: int = MAX_DEPTH) -> ExprTree:
    """Grow a random tree of depth at most ``max_depth`` (2..7).

    The result always references at least one of ``x tb gb r1 r2``.
    """
    if not 2 <= max_depth <= MAX_DEPTH:
        raise ValueError(f"max_depth must be in [2, {MAX_DEPTH}], got {max_depth}")
    return _random_tree(rng, max_depth)


def _walk(tree: ExprTree, path: tuple = (), level: int = 1) -> Iterator[tuple[tuple, ExprTree, int]]:
    """Preorder ``(path, node, level)`` triples."""
    yield path, tree, level
    if isinstance(tree, Negate):
        yield from _walk(tree.child, path + (0,), level + 1)
    elif isinstance(tree, Binary):
        yield from _walk(tree.left, path + (0,), level + 1)
        yield from _walk(tree.right, path + (1,), level + 1)


def _replace(tree: ExprTree, path: tuple, new: ExprTree) -> ExprTree:
    if not path:
        return new
    head, rest = path[0], path[1:]
    if isinstance(tree, Negate):
        return Negate(_replace(tree.child, rest, new))
    if head == 0:
        return Binary(tree.op, _replace(tree.left, rest, new), tree.right)
    return Binary(tree.op, tree.left, _replace(tree.right, rest, new))


def mutate_firmware(tree: ExprTree, rng: np.random.Generator) -> ExprTree:
    """Subtree mutation: a uniformly chosen node is regrown within the depth budget."""
    nodes = list(_walk(tree))
    path, _, level = nodes[int(rng.integers(len(nodes)))]
    return _replace(tree, path, _random_tree(rng, MAX_DEPTH - level + 1))


def recombine_firmware(a: ExprTree, b: ExprTree, rng: np.random.Generator) -> ExprTree:
    """Subtree crossover: a random node of ``a`` takes a random subtree of ``b``.

    Falls back to mutating ``a`` when no depth-respecting pair is found.
    """
    a_nodes = list(_walk(a))
    b_nodes = list(_walk(b))
    for _ in range(1 + MAX_CROSSOVER_RETRIES):
        path, _, level = a_nodes[int(rng.integers(len(a_nodes)))]
        donor = b_nodes[int(rng.integers(len(b_nodes)))][1]
        if level - 1 + depth(donor) <= MAX_DEPTH:
            return _replace(a, path, donor)
    return mutate_firmware(a, rng)
