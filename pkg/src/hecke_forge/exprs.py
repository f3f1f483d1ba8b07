"""Expression grammar for the CLI evaluator.

Atoms
    ``xg``                 the class x_gamma
    ``x(c1,...,cn)``       the class of the weight with those coordinates
    ``delta(i1,...)``      delta of the Weyl word (empty word = identity)
    ``X(i) Y(i) T(i)``     divided-difference / push-pull / Demazure-Lusztig
                           elements for a signed root index
    ``J(i)``               the convolution-normalized generator
    ``Tword(i1,...)``      product of simple T's along a word
    integer and fraction literals (``/`` is ordinary division)

Operators
    ``w(i1,...)(e)``       apply the Weyl word to an S-valued expression
    ``D(i)(e)``/``C(i)(e)``  divided difference / push-pull operator
    ``+ - * /`` with the usual precedence and unary minus

Division is available below the twisted level when the divisor factors as a
unit times denominators from the allowed monoid {x_a, x_a - x_gamma}.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ExpressionError, UnsupportedLocalization
from .fga import LocalizedElement, X_FACTOR, XC_FACTOR
from .hecke import TwistedElement, T_of_word, delta, embed, make_J, make_T, make_X, make_Y
from .series import Series, divide_exact

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/,]))")


def tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ExpressionError(f"unexpected character {text[pos]!r}", position=pos)
            break
        if m.group(1):
            out.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        else:
            out.append(("sym", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, ctx, text):
        self.ctx = ctx
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, sym):
        kind, val, at = self.next()
        if kind != "sym" or val != sym:
            raise ExpressionError(f"expected {sym!r}", position=at)

    def parse(self):
        value = self.expr()
        kind, _, at = self.peek()
        if kind != "end":
            raise ExpressionError("trailing input", position=at)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.next()
                rhs = self.term()
                value = _add(value, rhs) if val == "+" else _sub(value, rhs)
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "*/":
                self.next()
                rhs = self.factor()
                value = _mul(value, rhs) if val == "*" else _div(self.ctx, value, rhs)
            else:
                return value

    def factor(self):
        kind, val, at = self.peek()
        if kind == "sym" and val == "-":
            self.next()
            return _neg(self.factor())
        return self.primary()

    def int_list(self, allow_empty=False, signed=True):
        self.expect("(")
        out = []
        kind, val, at = self.peek()
        if kind == "sym" and val == ")":
            self.next()
            if not out and not allow_empty:
                raise ExpressionError("expected at least one integer", position=at)
            return out
        while True:
            sign = 1
            kind, val, at = self.peek()
            if signed and kind == "sym" and val == "-":
                self.next()
                sign = -1
            kind, val, at = self.next()
            if kind != "int":
                raise ExpressionError("expected an integer", position=at)
            out.append(sign * val)
            kind, val, at = self.next()
            if kind == "sym" and val == ")":
                return out
            if not (kind == "sym" and val == ","):
                raise ExpressionError("expected ',' or ')'", position=at)

    def primary(self):
        kind, val, at = self.next()
        ctx = self.ctx
        if kind == "int":
            return Fraction(val)
        if kind == "sym" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        if kind != "name":
            raise ExpressionError("expected an atom", position=at)
        name = val
        if name == "xg":
            return ctx.x_gamma
        if name == "x":
            coords = self.int_list()
            if len(coords) != ctx.datum.rank:
                raise ExpressionError(
                    f"x(...) needs {ctx.datum.rank} coordinates", position=at)
            return ctx.x_weight(tuple(coords))
        if name == "delta":
            word = self.int_list(allow_empty=True, signed=False)
            return delta(ctx, ctx.group.from_word(word))
        if name in ("X", "Y", "T", "J"):
            (r,) = self.int_list()
            maker = {"X": make_X, "Y": make_Y, "T": make_T, "J": make_J}[name]
            return maker(ctx, r)
        if name == "Tword":
            word = self.int_list(signed=False)
            return T_of_word(ctx, tuple(word))
        if name in ("D", "C"):
            (r,) = self.int_list()
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            u = _as_series(ctx, arg, at)
            return ctx.demazure(r, u) if name == "D" else ctx.pushpull(r, u)
        if name == "w":
            word = self.int_list(signed=False)
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            u = _as_series(ctx, arg, at)
            return ctx.weyl_act(ctx.group.from_word(word), u)
        raise ExpressionError(f"unknown atom {name!r}", position=at)


# ----------------------------------------------------------------------
# value coercion lattice: Fraction < Series < LocalizedElement < TwistedElement

def _level(v):
    if isinstance(v, TwistedElement):
        return 3
    if isinstance(v, LocalizedElement):
        return 2
    if isinstance(v, Series):
        return 1
    return 0


def _lift(ctx, v, level):
    cur = _level(v)
    if cur == 0 and level >= 1:
        v = ctx.const(v)
        cur = 1
    if cur == 1 and level >= 2:
        v = LocalizedElement(ctx, v)
        cur = 2
    if cur == 2 and level >= 3:
        v = TwistedElement(ctx, {0: v})
    return v


def _pair(a, b):
    ctx = _ctx_of(a) or _ctx_of(b)
    level = max(_level(a), _level(b))
    return _lift(ctx, a, level), _lift(ctx, b, level), level


def _ctx_of(v):
    return getattr(v, "ctx", None)


def _add(a, b):
    if _level(a) == 0 and _level(b) == 0:
        return a + b
    a, b, _ = _pair(a, b)
    return a + b

def _sub(a, b):
    return _add(a, _neg(b))

def _neg(a):
    return -a

def _mul(a, b):
    if _level(a) == 0 and _level(b) == 0:
        return a * b
    if _level(a) == 0 or _level(b) == 0:
        scalar, other = (a, b) if _level(a) == 0 else (b, a)
        if isinstance(other, TwistedElement):
            ctx = other.ctx
            return embed(ctx, ctx.const(scalar)) * other
        if isinstance(other, LocalizedElement):
            return other * scalar
        return other * scalar
    a, b, _ = _pair(a, b)
    return a * b


def _div(ctx_hint, a, b):
    if _level(a) == 0 and _level(b) == 0:
        return a / b
    if isinstance(b, TwistedElement):
        raise ExpressionError("cannot divide by a twisted element")
    ctx = _ctx_of(a) or _ctx_of(b) or ctx_hint
    a = _lift(ctx, a, 2)
    if isinstance(a, TwistedElement):
        inv = _invert_localized(ctx, _lift(ctx, b, 2))
        return a * TwistedElement(ctx, {0: inv})
    b = _lift(ctx, b, 2)
    return a * _invert_localized(ctx, b)


def _invert_localized(ctx, d):
    """1/d when d factors as unit * monoid denominators; else reject."""
    red = d.reduce()
    num = red.num
    factors = []
    all_factors = ([(X_FACTOR, p) for p in range(ctx.datum.n_pos)]
                   + [(XC_FACTOR, p) for p in range(ctx.datum.n_pos)])
    progress = True
    while progress and num.valuation() > 0:
        progress = False
        for f in all_factors:
            fs = ctx.factor_series(f)
            if num.is_divisible_by(fs):
                num = divide_exact(num, fs)
                factors.append(f)
                progress = True
                break
    if num.valuation() > 0 or not num.constant_term():
        raise UnsupportedLocalization(
            "divisor is not a unit times allowed denominator factors")
    inv_unit = num.invert_unit()
    out = LocalizedElement(ctx, ctx.den_product(red.den) * inv_unit,
                           tuple(sorted(factors)))
    return out


def _as_series(ctx, value, at):
    if isinstance(value, Fraction):
        return ctx.const(value)
    if isinstance(value, Series):
        return value
    if isinstance(value, LocalizedElement):
        red = value.reduce()
        if red.in_S:
            return red.num
    raise ExpressionError("operator needs an argument inside S", position=at)


def evaluate(ctx, text):
    """Parse and evaluate; returns Fraction, Series, Localized or Twisted."""
    return _Parser(ctx, text).parse()


def render(value, prec=None, pretty=False):
    """Canonical text with a precision annotation."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Series):
        return value.text(pretty)
    if isinstance(value, LocalizedElement):
        return value.text(pretty)
    if isinstance(value, TwistedElement):
        return value.text(pretty)
    return str(value)
