"""Exact coefficient arithmetic over Z[params] and Q[params].

A coefficient ring is a base (integers or rationals) together with a tuple
of named free parameters (commuting symbols with no relations, e.g. ``beta``
or logarithm coefficients ``b2, b3``).  A coefficient is stored as a dict
mapping parameter-exponent tuples to nonzero ``Fraction`` values; the empty
dict is zero.  All arithmetic is exact; nothing is ever rounded.

The functions here are deliberately plain dict manipulations: they sit in
the innermost loops of the series kernel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAUnit, RingMismatch

Coef = dict  # dict[tuple[int, ...], Fraction]


@dataclass(frozen=True)
class Ring:
    """Coefficient ring descriptor: base Z or Q plus free parameters."""

    rational: bool
    params: tuple[str, ...] = ()

    def join(self, other: "Ring") -> "Ring":
        if self == other:
            return self
        params = tuple(dict.fromkeys(self.params + other.params))
        return Ring(self.rational or other.rational, params)

    @property
    def zero_exp(self) -> tuple[int, ...]:
        return (0,) * len(self.params)

    def __str__(self):
        base = "QQ" if self.rational else "ZZ"
        if self.params:
            return base + "[" + ",".join(self.params) + "]"
        return base


ZZ = Ring(False)
QQ = Ring(True)


def ring_with_params(base: Ring, *names: str) -> Ring:
    return Ring(base.rational, tuple(dict.fromkeys(base.params + names)))


def c_zero() -> Coef:
    return {}

def c_const(ring: Ring, value) -> Coef:
    q = Fraction(value)
    if q == 0:
        return {}
    return {ring.zero_exp: q}

def c_param(ring: Ring, name: str) -> Coef:
    if name not in ring.params:
        raise RingMismatch(f"parameter {name!r} not in ring {ring}")
    exp = [0] * len(ring.params)
    exp[ring.params.index(name)] = 1
    return {tuple(exp): Fraction(1)}

def c_is_zero(a: Coef) -> bool:
    return not a

def c_add(a: Coef, b: Coef) -> Coef:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        if s is None:
            out[k] = v
        else:
            s = s + v
            if s:
                out[k] = s
            else:
                del out[k]
    return out

def c_neg(a: Coef) -> Coef:
    return {k: -v for k, v in a.items()}

def c_sub(a: Coef, b: Coef) -> Coef:
    return c_add(a, c_neg(b))

def c_mul(a: Coef, b: Coef) -> Coef:
    if not a or not b:
        return {}
    out: Coef = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k)
            if s is None:
                out[k] = va * vb
            else:
                s = s + va * vb
                if s:
                    out[k] = s
                else:
                    del out[k]
    return out

def c_scale(a: Coef, q: Fraction) -> Coef:
    if not q:
        return {}
    return {k: v * q for k, v in a.items()}

def c_eq(a: Coef, b: Coef) -> bool:
    return a == b

def c_is_const(a: Coef) -> bool:
    return not a or (len(a) == 1 and not any(next(iter(a))))

def c_const_value(a: Coef) -> Fraction:
    if not a:
        return Fraction(0)
    if not c_is_const(a):
        raise ValueError("coefficient is not constant")
    return next(iter(a.values()))

def c_invert(ring: Ring, a: Coef) -> Coef:
    """Invert a unit of the ring (nonzero constant; +-1 over Z)."""
    if not c_is_const(a) or not a:
        raise NotAUnit(f"not a unit in {ring}: {c_str(ring, a)}")
    q = c_const_value(a)
    if not ring.rational and abs(q) != 1:
        raise NotAUnit(f"{q} is not invertible over the integers")
    return {ring.zero_exp: 1 / q}

def c_is_integral(a: Coef) -> bool:
    return all(v.denominator == 1 for v in a.values())

def c_degree(a: Coef) -> int:
    if not a:
        return -1
    return max(sum(k) for k in a)

def c_promote(a: Coef, old: Ring, new: Ring) -> Coef:
    """Re-key a coefficient of ``old`` into the (larger) ring ``new``."""
    if old.params == new.params:
        return a
    pos = [new.params.index(p) for p in old.params]
    out: Coef = {}
    for k, v in a.items():
        exp = [0] * len(new.params)
        for i, e in enumerate(k):
            exp[pos[i]] = e
        out[tuple(exp)] = v
    return out

def c_eval(a: Coef, ring: Ring, assign: dict) -> Fraction:
    """Evaluate at rational parameter values (all parameters must be assigned)."""
    total = Fraction(0)
    for k, v in a.items():
        term = v
        for name, e in zip(ring.params, k):
            if e:
                term *= Fraction(assign[name]) ** e
        total += term
    return total


def _mono_str(ring: Ring, exp) -> str:
    parts = []
    for name, e in zip(ring.params, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)

def c_str(ring: Ring, a: Coef) -> str:
    """Canonical string, terms sorted graded-lex descending: ``2*b2^2 - 1/3``."""
    if not a:
        return "0"
    keys = sorted(a, key=lambda k: (sum(k), k), reverse=True)
    pieces = []
    for k in keys:
        v = a[k]
        mono = _mono_str(ring, k)
        if mono:
            body = mono if abs(v) == 1 else f"{abs(v)}*{mono}"
        else:
            body = str(abs(v))
        sign = "-" if v < 0 else "+"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out

def c_is_composite(a: Coef) -> bool:
    """True when the canonical string needs parentheses inside a product."""
    if len(a) > 1:
        return True
    if not a:
        return False
    ((k, v),) = a.items()
    return any(k) and abs(v) != 1


_TERM_RE = re.compile(r"\s*([+-])\s*")

def c_parse(ring: Ring, text: str) -> Coef:
    """Parse the output of :func:`c_str` back into a coefficient."""
    s = text.strip()
    if s == "0":
        return {}
    if not s.startswith(("+", "-")):
        s = "+" + s
    out: Coef = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m:
            raise ValueError(f"bad coefficient string {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        pos = m.end()
        nxt = _TERM_RE.search(s, pos)
        chunk = s[pos: nxt.start() if nxt else len(s)].strip()
        pos = nxt.start() if nxt else len(s)
        value = Fraction(sign)
        exp = [0] * len(ring.params)
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"bad coefficient string {text!r}")
            if factor[0].isdigit():
                value *= Fraction(factor)
            else:
                name, _, power = factor.partition("^")
                if name not in ring.params:
                    raise ValueError(f"unknown parameter {name!r} in {text!r}")
                exp[ring.params.index(name)] += int(power) if power else 1
        k = tuple(exp)
        prev = out.get(k, Fraction(0)) + value
        if prev:
            out[k] = prev
        elif k in out:
            del out[k]
    return out
