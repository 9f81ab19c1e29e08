"""Recursive-descent parsers for words, field elements, series and identities.

Grammars (whitespace is ignored everywhere)::

    word     := factor ('*' factor)*
    factor   := atom ('^' int)?
    atom     := 'x' digits | '1' | '(' word ')' | '[' word ']' | '[' word ',' word ']'
                | '?' name | name                      (identity grammar only)
    field    := fterm (('+'|'-') fterm)*
    fterm    := funary (('*'|'/') funary)*
    funary   := '-' funary | fpow
    fpow     := fatom ('^' int)?
    fatom    := int | 's' | '(' field ')'
    series   := sterm (('+'|'-') sterm)*  |  '0'
    sterm    := '(' field ')' '*' '[' word ']'  |  '[' word ']'  |  int '*' '[' word ']'
"""

from fractions import Fraction
from typing import Mapping, Optional

from .errors import ParseError
from .expr import Commutator, Const, Inverse, Lit, Power, Product, Var, WordExpr, eval_expr
from .field import FieldElement
from .free_group import Word
from .series import Series


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.src = "".join(text.split())
        # positions refer to the whitespace-stripped string; map back for messages
        self.index_map = [i for i, ch in enumerate(text) if not ch.isspace()]
        self.pos = 0

    def error(self, message: str) -> ParseError:
        if self.pos < len(self.index_map):
            where = self.index_map[self.pos]
        else:
            where = len(self.text)
        return ParseError(message, self.text, where)

    def peek(self, k: int = 0) -> str:
        i = self.pos + k
        return self.src[i] if i < len(self.src) else ""

    def take(self, ch: str) -> bool:
        if self.src.startswith(ch, self.pos):
            self.pos += len(ch)
            return True
        return False

    def expect(self, ch: str) -> None:
        if not self.take(ch):
            got = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, got {got!r}")

    def at_end(self) -> bool:
        return self.pos >= len(self.src)

    def integer(self, signed: bool = False) -> int:
        start = self.pos
        if signed and self.peek() in "+-":
            self.pos += 1
        digits = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            raise self.error("expected an integer")
        return int(self.src[start:self.pos])

    def name(self) -> str:
        start = self.pos
        while self.peek().isalnum() or self.peek() == "_":
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a name")
        return self.src[start:self.pos]


# -- words and identities ---------------------------------------------------


class _WordParser:
    def __init__(self, sc: _Scanner, allow_names: bool):
        self.sc = sc
        self.allow_names = allow_names

    def word(self) -> WordExpr:
        factors = [self.factor()]
        while self.sc.take("*"):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self) -> WordExpr:
        base = self.atom()
        if self.sc.take("^"):
            if self.sc.take("("):
                k = self.sc.integer(signed=True)
                self.sc.expect(")")
            else:
                k = self.sc.integer(signed=True)
            base = Power(base, k)
        return base

    def atom(self) -> WordExpr:
        sc = self.sc
        ch = sc.peek()
        if ch == "x" and sc.peek(1).isdigit():
            sc.pos += 1
            index = sc.integer()
            if index < 1:
                raise sc.error("generator indices start at 1")
            return Lit(Word.gen(index))
        if ch == "1" and not sc.peek(1).isdigit():
            sc.pos += 1
            return Lit(Word.identity())
        if sc.take("("):
            inner = self.word()
            sc.expect(")")
            return inner
        if sc.take("["):
            left = self.word()
            if sc.take(","):
                right = self.word()
                sc.expect("]")
                return Commutator(left, right)
            sc.expect("]")
            return left
        if self.allow_names:
            if sc.take("?"):
                return Var(sc.name())
            if ch.isalpha() or ch == "_":
                return Const(sc.name())
        raise sc.error(f"unexpected {ch or 'end of input'!r} in word")


def _finish(sc: _Scanner) -> None:
    if not sc.at_end():
        raise sc.error(f"unexpected trailing input {sc.peek()!r}")


def parse_word(text: str) -> Word:
    """Parse ``x3^-2*x1*x2^5``, ``1`` or ``[x1,x2]`` into a reduced word."""
    sc = _Scanner(text)
    if sc.at_end():
        raise sc.error("empty word")
    e = _WordParser(sc, allow_names=False).word()
    _finish(sc)
    return eval_expr(e, {})


def parse_identity(text: str) -> WordExpr:
    """Parse a word expression with variables ``?x`` and named constants."""
    sc = _Scanner(text)
    if sc.at_end():
        raise sc.error("empty expression")
    e = _WordParser(sc, allow_names=True).word()
    _finish(sc)
    return e


# -- field elements ---------------------------------------------------------


class _FieldParser:
    def __init__(self, sc: _Scanner):
        self.sc = sc

    def expr(self) -> FieldElement:
        sc = self.sc
        value = self.term()
        while True:
            if sc.take("+"):
                value = value + self.term()
            elif sc.peek() == "-":
                sc.pos += 1
                value = value - self.term()
            else:
                return value

    def term(self) -> FieldElement:
        sc = self.sc
        value = self.unary()
        while True:
            if sc.take("*"):
                value = value * self.unary()
            elif sc.take("/"):
                start = sc.pos
                divisor = self.unary()
                if divisor.is_zero():
                    sc.pos = start
                    raise sc.error("division by zero")
                value = value / divisor
            else:
                return value

    def unary(self) -> FieldElement:
        if self.sc.take("-"):
            return -self.unary()
        if self.sc.take("+"):
            return self.unary()
        return self.power()

    def power(self) -> FieldElement:
        base = self.atom()
        if self.sc.take("^"):
            start = self.sc.pos
            if self.sc.take("("):
                k = self.sc.integer(signed=True)
                self.sc.expect(")")
            else:
                k = self.sc.integer(signed=True)
            if k < 0 and base.is_zero():
                self.sc.pos = start
                raise self.sc.error("negative power of zero")
            base = base ** k
        return base

    def atom(self) -> FieldElement:
        sc = self.sc
        ch = sc.peek()
        if ch.isdigit():
            return FieldElement(sc.integer())
        if ch == "s" and not (sc.peek(1).isalnum()):
            sc.pos += 1
            return FieldElement.s()
        if sc.take("("):
            inner = self.expr()
            sc.expect(")")
            return inner
        raise sc.error(f"unexpected {ch or 'end of input'!r} in field element")


def parse_field(text: str) -> FieldElement:
    """Parse ``(s^2+1)/(s-1)``, ``3/4``, ``-2`` and the like."""
    sc = _Scanner(text)
    if sc.at_end():
        raise sc.error("empty field element")
    value = _FieldParser(sc).expr()
    _finish(sc)
    return value


def parse_rational(text: str) -> Fraction:
    value = parse_field(text)
    if not value.is_constant():
        raise ParseError("expected a rational constant", text, 0)
    return value.as_fraction()


# -- series -----------------------------------------------------------------


def parse_series(text: str) -> Series:
    """Parse ``(s)*[x1] + (1/(s+1))*[x2^-1*x1] + 2``; a bare coefficient sits on the word 1."""
    sc = _Scanner(text)
    if sc.src == "0":
        return Series.zero()
    if sc.at_end():
        raise sc.error("empty series")
    total = Series.zero()
    sign = 1
    if sc.take("-"):
        sign = -1
    while True:
        coeff, word = _series_term(sc)
        total = total + Series.monomial(word, coeff if sign > 0 else -coeff)
        if sc.take("+"):
            sign = 1
        elif sc.take("-"):
            sign = -1
        else:
            break
    _finish(sc)
    return total


def _series_term(sc: _Scanner):
    coeff = FieldElement(1)
    if sc.peek() == "(":
        sc.pos += 1
        coeff = _FieldParser(sc).expr()
        sc.expect(")")
        if not sc.take("*"):
            return coeff, Word.identity()
    elif sc.peek().isdigit():
        coeff = FieldElement(sc.integer())
        if not sc.take("*"):
            return coeff, Word.identity()
    if sc.peek() != "[":
        raise sc.error("expected '[' to open a word")
    word_expr = _WordParser(sc, allow_names=False).atom()
    return coeff, eval_expr(word_expr, {})


def parse_weights(text: str) -> dict:
    """Parse ``{1: 1, 2: -2}`` into a weight map."""
    import ast

    try:
        value = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError) as exc:
        raise ParseError(f"bad weight map ({exc.__class__.__name__})", text, 0) from None
    if not isinstance(value, dict) or not all(
        isinstance(k, int) and isinstance(v, int) for k, v in value.items()
    ):
        raise ParseError("weights must map integer generator indices to integers", text, 0)
    return value
