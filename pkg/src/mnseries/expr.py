"""Word expressions (generalized group monomials) and their evaluation.

An expression is a tree over variables, named constants and literal words.
It can be evaluated in any group that provides ``identity``, ``mul``,
``inv`` and ``from_word``; targets for the free group, S3, approximate
series and the partially commutative monoid live next to their types.
"""

from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

from .free_group import Word, format_word


class WordExpr:
    """Base class; use the node classes below."""

    def __mul__(self, other: "WordExpr") -> "WordExpr":
        return Product((self, other))

    def __invert__(self) -> "WordExpr":
        return Inverse(self)

    def __pow__(self, k: int) -> "WordExpr":
        return Power(self, k)

    def __str__(self) -> str:
        return format_expr(self)


@dataclass(frozen=True, eq=True)
class Var(WordExpr):
    name: str


@dataclass(frozen=True, eq=True)
class Const(WordExpr):
    name: str


@dataclass(frozen=True, eq=True)
class Lit(WordExpr):
    word: Word


@dataclass(frozen=True, eq=True)
class Product(WordExpr):
    factors: Tuple[WordExpr, ...]


@dataclass(frozen=True, eq=True)
class Inverse(WordExpr):
    child: WordExpr


@dataclass(frozen=True, eq=True)
class Power(WordExpr):
    child: WordExpr
    k: int


@dataclass(frozen=True, eq=True)
class Commutator(WordExpr):
    left: WordExpr
    right: WordExpr

    def expand(self) -> WordExpr:
        """[a, b] = a b a^-1 b^-1."""
        a, b = self.left, self.right
        return Product((a, b, Inverse(a), Inverse(b)))


def commutator(a: WordExpr, b: WordExpr) -> Commutator:
    return Commutator(a, b)


def format_expr(e: WordExpr) -> str:
    if isinstance(e, Var):
        return f"?{e.name}"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Lit):
        return format_word(e.word) if len(e.word.syllables) <= 1 else f"({format_word(e.word)})"
    if isinstance(e, Product):
        return "*".join(format_expr(f) for f in e.factors) if e.factors else "1"
    if isinstance(e, Inverse):
        return f"({format_expr(e.child)})^-1"
    if isinstance(e, Power):
        return f"({format_expr(e.child)})^{e.k}"
    if isinstance(e, Commutator):
        return f"[{format_expr(e.left)},{format_expr(e.right)}]"
    raise TypeError(f"not a word expression: {e!r}")


def variables(e: WordExpr) -> frozenset:
    """Names of the variables and constants occurring in ``e``."""
    seen = {}
    out = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen[id(node)] = True
        if isinstance(node, (Var, Const)):
            out.add(node.name)
        elif isinstance(node, Product):
            stack.extend(node.factors)
        elif isinstance(node, (Inverse, Power)):
            stack.append(node.child)
        elif isinstance(node, Commutator):
            stack.extend((node.left, node.right))
    return frozenset(out)


def substitute(e: WordExpr, mapping: Mapping[str, WordExpr]) -> WordExpr:
    """Replace variables/constants by expressions, sharing repeated subtrees."""
    memo: Dict[int, WordExpr] = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, (Var, Const)):
            out = mapping.get(node.name, node)
        elif isinstance(node, Lit):
            out = node
        elif isinstance(node, Product):
            out = Product(tuple(go(f) for f in node.factors))
        elif isinstance(node, Inverse):
            out = Inverse(go(node.child))
        elif isinstance(node, Power):
            out = Power(go(node.child), node.k)
        elif isinstance(node, Commutator):
            out = Commutator(go(node.left), go(node.right))
        else:
            raise TypeError(f"not a word expression: {node!r}")
        memo[key] = out
        return out

    return go(e)


class FreeGroupTarget:
    """Evaluate into reduced words."""

    def identity(self):
        return Word.identity()

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return ~a

    def pow(self, a, k):
        return a ** k

    def from_word(self, w):
        return w


def eval_expr(e: WordExpr, env: Mapping[str, object], target=None):
    """Evaluate ``e`` with names bound by ``env`` in the group ``target``.

    Shared subtrees are evaluated once, which keeps the nested commutators
    of long recursions linear in the number of distinct nodes.
    """
    target = target or FreeGroupTarget()
    memo: Dict[int, object] = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, (Var, Const)):
            try:
                out = env[node.name]
            except KeyError:
                raise KeyError(f"unbound name {node.name!r}") from None
        elif isinstance(node, Lit):
            out = target.from_word(node.word)
        elif isinstance(node, Product):
            out = target.identity()
            for f in node.factors:
                out = target.mul(out, go(f))
        elif isinstance(node, Inverse):
            out = target.inv(go(node.child))
        elif isinstance(node, Power):
            out = _power(target, go(node.child), node.k)
        elif isinstance(node, Commutator):
            a, b = go(node.left), go(node.right)
            out = target.mul(target.mul(a, b), target.mul(target.inv(a), target.inv(b)))
        else:
            raise TypeError(f"not a word expression: {node!r}")
        memo[key] = out
        return out

    return go(e)


def _power(target, a, k):
    if hasattr(target, "pow"):
        return target.pow(a, k)
    if k < 0:
        a, k = target.inv(a), -k
    result = target.identity()
    while k:
        if k & 1:
            result = target.mul(result, a)
        k >>= 1
        if k:
            a = target.mul(a, a)
    return result
