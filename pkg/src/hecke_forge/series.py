"""Sparse truncated multivariate power series with exact coefficients.

A :class:`Series` stores a finite map from exponent vectors to nonzero
coefficients (see :mod:`hecke_forge.scalars`) together with a precision
``prec``: every term of total degree < ``prec`` is exactly known, terms of
degree >= ``prec`` are discarded.  Precision 0 means nothing is known.

Precision propagation is deliberately conservative and explicit:

* ``add``/``mul``/``substitute`` return ``min`` of the input precisions;
* ``divide_exact`` by a divisor of valuation ``v`` returns precision
  ``min - v``, while the divisibility *check* runs through every known
  degree below ``min`` (so a failed division is detected at full strength
  even when the surviving quotient carries few digits).

Exact division is performed degree by degree.  When the divisor's lowest
homogeneous form is linear, a linear change of coordinates turns it into a
single variable and the division becomes monomial-wise; otherwise each
degree is solved as an exact linear system over Q.  Over Z the quotient is
computed over Q and integrality of every coefficient is checked afterwards.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import (
    NonNilpotentSubstitution,
    NotDivisible,
    NotIntegral,
    PrecisionExhausted,
    VariableMismatch,
)
from .scalars import (
    QQ,
    Ring,
    c_add,
    c_const,
    c_const_value,
    c_invert,
    c_is_composite,
    c_is_const,
    c_is_integral,
    c_mul,
    c_neg,
    c_parse,
    c_promote,
    c_scale,
    c_str,
    c_sub,
)


def _as_coef(ring, value):
    if isinstance(value, dict):
        return value
    return c_const(ring, value)


class Series:
    """Immutable sparse truncated power series."""

    __slots__ = ("ring", "vars", "terms", "prec", "_key_cache")

    def __init__(self, ring, vars, terms, prec):
        if prec < 0:
            prec = 0
        clean = {}
        for exps, coef in terms.items():
            if not coef or sum(exps) >= prec:
                continue
            if any(not v for v in coef.values()):
                coef = {k: v for k, v in coef.items() if v}
                if not coef:
                    continue
            clean[exps] = coef
        self.ring = ring
        self.vars = tuple(vars)
        self.terms = clean
        self.prec = prec
        self._key_cache = None

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, ring, vars, prec):
        return cls(ring, vars, {}, prec)

    @classmethod
    def const(cls, ring, vars, value, prec):
        c = _as_coef(ring, value)
        return cls(ring, vars, {(0,) * len(vars): c}, prec)

    @classmethod
    def one(cls, ring, vars, prec):
        return cls.const(ring, vars, 1, prec)

    @classmethod
    def variable(cls, ring, vars, name, prec):
        vars = tuple(vars)
        exps = [0] * len(vars)
        exps[vars.index(name)] = 1
        return cls(ring, vars, {tuple(exps): c_const(ring, 1)}, prec)

    # ------------------------------------------------------------------
    # basic queries

    def is_zero(self):
        return not self.terms

    def valuation(self):
        """Smallest total degree of a stored term (``prec`` for the zero series)."""
        if not self.terms:
            return self.prec
        return min(sum(e) for e in self.terms)

    def coeff(self, exps):
        return self.terms.get(tuple(exps), {})

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), {})

    def lowest_form(self):
        v = self.valuation()
        return {e: c for e, c in self.terms.items() if sum(e) == v}

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return Series(self.ring, self.vars, self.terms, prec)

    def with_ring(self, ring):
        if ring == self.ring:
            return self
        new = ring.join(self.ring)
        terms = {e: c_promote(c, self.ring, new) for e, c in self.terms.items()}
        return Series(new, self.vars, terms, self.prec)

    def key(self):
        """Hashable canonical form (used for caching)."""
        if self._key_cache is None:
            body = tuple(sorted(
                (e, tuple(sorted(c.items()))) for e, c in self.terms.items()
            ))
            self._key_cache = (self.ring, self.vars, self.prec, body)
        return self._key_cache

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.ring == other.ring and self.vars == other.vars
                and self.prec == other.prec and self.terms == other.terms)

    def __hash__(self):
        return hash(self.key())

    def agrees_with(self, other):
        """Equality of all terms below the common precision."""
        a, b = _unify(self, other)
        p = min(a.prec, b.prec)
        if p <= 0:
            raise PrecisionExhausted("no common digits to compare")
        return a.truncate(p).terms == b.truncate(p).terms

    # ------------------------------------------------------------------
    # ring operations

    def __neg__(self):
        return Series(self.ring, self.vars, {e: c_neg(c) for e, c in self.terms.items()}, self.prec)

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.const(self.ring, self.vars, other, self.prec)
        a, b = _unify(self, other)
        prec = min(a.prec, b.prec)
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = c_add(out.get(e, {}), c)
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return Series(a.ring, a.vars, out, prec)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = Series.const(self.ring, self.vars, other, self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            coef = _as_coef(self.ring, other)
            return self.scale(coef)
        a, b = _unify(self, other)
        # valuation-sharpened bound: the unknown part of each factor enters
        # the product shifted up by the other factor's valuation, so terms
        # below min(pa + vb, pb + va) are exact (>= the plain min rule)
        prec = min(a.prec + b.valuation(), b.prec + a.valuation())
        if not a.terms or not b.terms:
            return Series.zero(a.ring, a.vars, prec)
        out = {}
        bitems = [(e, sum(e), c) for e, c in b.terms.items()]
        for ea, ca in a.terms.items():
            da = sum(ea)
            for eb, db, cb in bitems:
                if da + db >= prec:
                    continue
                key = tuple(x + y for x, y in zip(ea, eb))
                c = c_mul(ca, cb)
                s = c_add(out.get(key, {}), c)
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return Series(a.ring, a.vars, out, prec)

    __rmul__ = __mul__

    def scale(self, coef):
        if not coef:
            return Series.zero(self.ring, self.vars, self.prec)
        if len(next(iter(coef))) != len(self.ring.params):
            raise VariableMismatch(
                "scale() coefficient keyed for a different parameter ring")
        return Series(self.ring, self.vars,
                      {e: c_mul(c, coef) for e, c in self.terms.items()}, self.prec)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not series")
        out = Series.one(self.ring, self.vars, self.prec)
        for _ in range(n):
            out = out * self
        return out

    # ------------------------------------------------------------------
    # inversion and division

    def invert_unit(self):
        """Multiplicative inverse; the constant term must be a unit of the ring."""
        c0 = self.constant_term()
        inv0 = c_invert(self.ring, c0)  # NotAUnit when not invertible
        one = Series.one(self.ring, self.vars, self.prec)
        h = one - self.scale(inv0)  # valuation >= 1
        out = one
        for _ in range(max(self.prec - 1, 0)):
            out = one + h * out
        return out.scale(inv0)

    def divide_exact(self, divisor):
        return divide_exact(self, divisor)

    def is_divisible_by(self, divisor):
        try:
            divide_exact(self, divisor)
            return True
        except NotDivisible:
            return False

    # ------------------------------------------------------------------
    # substitution

    def substitute(self, mapping):
        """Apply the ring homomorphism sending each variable to its image.

        Unmapped variables must exist (by name) in the image space and map
        to themselves.  Every image needs a zero constant term.
        """
        if not mapping:
            return self
        images = dict(mapping)
        sample = next(iter(images.values()))
        tvars = sample.vars
        ring = self.ring
        prec = self.prec
        for name, img in images.items():
            if name not in self.vars:
                raise VariableMismatch(f"substituted variable {name!r} not in {self.vars}")
            if img.vars != tvars:
                raise VariableMismatch("substitution images live in different spaces")
            if img.constant_term():
                raise NonNilpotentSubstitution(f"image of {name!r} has nonzero constant term")
            ring = ring.join(img.ring)
            prec = min(prec, img.prec)
        full = []
        for name in self.vars:
            if name in images:
                img = images[name].with_ring(ring)
            else:
                if name not in tvars:
                    raise VariableMismatch(f"variable {name!r} missing from image space {tvars}")
                img = Series.variable(ring, tvars, name, prec)
            full.append(img)
        if tvars == self.vars and all(
            img.terms == Series.variable(ring, tvars, name, img.prec).terms
            for name, img in zip(self.vars, full)
        ):
            return Series(ring, tvars,
                          {e: c_promote(c, self.ring, ring) for e, c in self.terms.items()},
                          prec)

        pow_cache = [dict() for _ in full]

        def power(axis, n):
            cache = pow_cache[axis]
            if n in cache:
                return cache[n]
            if n == 0:
                out = Series.one(ring, tvars, prec)
            else:
                out = power(axis, n - 1) * full[axis]
            cache[n] = out
            return out

        def run(items, axis):
            # items: list of (exps, coef); evaluate sum coef * prod img^e
            if axis < 0:
                total = {}
                for _, c in items:
                    total = c_add(total, c_promote(c, self.ring, ring))
                return Series(ring, tvars, {(0,) * len(tvars): total}, prec)
            groups = {}
            for e, c in items:
                groups.setdefault(e[axis], []).append((e, c))
            exps = sorted(groups, reverse=True)
            acc = None
            prev = None
            for k in exps:
                sub = run(groups[k], axis - 1)
                if acc is None:
                    acc = sub
                else:
                    acc = acc * power(axis, prev - k) + sub
                prev = k
            if prev:
                acc = acc * power(axis, prev)
            return acc

        if not self.terms:
            return Series.zero(ring, tvars, prec)
        return run(list(self.terms.items()), len(self.vars) - 1).truncate(prec)


    # ------------------------------------------------------------------
    # serialization

    def text(self, pretty=False):
        """Canonical text form: graded-lex terms plus an ``O(deg N)`` marker."""
        names = self.vars
        if pretty:
            names = tuple(_PRETTY.get(v, v) for v in names)
        if not self.terms:
            return f"0 + O(deg {self.prec})"
        parts = []
        for exps in sorted(self.terms, key=_term_order):
            coef = self.terms[exps]
            mono = "*".join(
                n if e == 1 else f"{n}^{e}"
                for n, e in zip(names, exps) if e
            )
            if c_is_composite(coef) and mono:
                body, sign = f"({c_str(self.ring, coef)})*{mono}", "+"
            else:
                cs = c_str(self.ring, coef)
                sign = "-" if cs.startswith("-") else "+"
                cs = cs.lstrip("-")
                if mono:
                    body = mono if cs == "1" else f"{cs}*{mono}"
                else:
                    body = cs
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out + f" + O(deg {self.prec})"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"Series({self.text()!r})"

    def to_json(self):
        terms = [
            {"exp": list(e), "coef": c_str(self.ring, self.terms[e])}
            for e in sorted(self.terms, key=_term_order)
        ]
        out = {"vars": list(self.vars), "terms": terms, "prec": self.prec}
        if self.ring.params or not self.ring.rational:
            out["ring"] = str(self.ring)
        return out

    @classmethod
    def from_json(cls, data, ring=None):
        if ring is None:
            ring = _ring_from_str(data.get("ring", "QQ"))
        vars = tuple(data["vars"])
        terms = {}
        for item in data["terms"]:
            terms[tuple(item["exp"])] = c_parse(ring, item["coef"])
        return cls(ring, vars, terms, data["prec"])


def _term_order(e):
    """Graded-lex: ascending total degree, descending exponents within a degree."""
    return (sum(e), tuple(-x for x in e))


_PRETTY = {"x_gamma": "x_γ"}


def _ring_from_str(text):
    base, _, rest = text.partition("[")
    ring = QQ if base == "QQ" else Ring(False)
    if rest:
        ring = Ring(ring.rational, tuple(rest.rstrip("]").split(",")))
    return ring


def _unify(a, b):
    if a.vars != b.vars:
        raise VariableMismatch(f"variable sets differ: {a.vars} vs {b.vars}")
    ring = a.ring.join(b.ring)
    return a.with_ring(ring), b.with_ring(ring)


# ----------------------------------------------------------------------
# spec-level operation aliases

def add(a, b):
    return a + b

def mul(a, b):
    return a * b

def invert_unit(a):
    return a.invert_unit()

def substitute(a, mapping):
    return a.substitute(mapping)


# ----------------------------------------------------------------------
# exact division

def divide_exact(a, b):
    """Exact quotient ``q`` with ``q*b == a`` through the common precision.

    Raises :class:`NotDivisible` (with the first offending degree) when no
    exact quotient exists, :class:`NotIntegral` when it exists over Q but
    not over the declared integral ring.
    """
    a, b = _unify(a, b)
    if not b.terms:
        raise NotDivisible("division by zero series", degree=None)
    v = b.valuation()
    if v == 0:
        return a * b.invert_unit()
    if not a.terms:
        return Series.zero(a.ring, a.vars, max(a.prec - v, 0))
    va = a.valuation()
    if va < v:
        raise NotDivisible(
            f"dividend has degree-{va} terms below divisor valuation {v}",
            degree=va,
        )
    # valuation-sharpened bound: the divisor's unknown part (>= b.prec)
    # meets the quotient's lowest form (deg va - v) at degree b.prec + va - v
    prec = min(a.prec, b.prec + va - v)
    if prec - v <= 0:
        raise PrecisionExhausted("division with no known digits")
    if v == 1:
        q = _divide_linear(a, b, prec)
    else:
        q = _divide_generic(a, b, v, prec)
    if not a.ring.rational:
        offenders = [
            (e, c_str(a.ring, c)) for e, c in sorted(q.terms.items())
            if not c_is_integral(c)
        ]
        if offenders:
            raise NotIntegral(
                f"quotient exists over QQ but not over {a.ring}", offenders)
    return q


def _linear_items(form):
    """axis -> coefficient for a homogeneous linear form given as a term dict."""
    out = {}
    for e, c in form.items():
        out[e.index(1)] = c
    return out


def _divide_linear(a, b, prec):
    """Long division by a divisor with a linear lowest form.

    Each homogeneous layer of the remainder is divided exactly by the
    linear form via synthetic division: repeatedly eliminate the monomial
    with the largest pivot exponent (lex tie-break).  A surviving monomial
    without the pivot variable certifies non-divisibility of the layer.
    """
    items = _linear_items(b.lowest_form())
    pivot = None
    for axis in sorted(items):
        c = items[axis]
        if c_is_const(c):
            q = c_const_value(c)
            if abs(q) == 1:
                pivot = axis
                break
            if pivot is None:
                pivot = axis
    if pivot is None:
        raise NotDivisible(
            "divisor lowest form has no rational-coefficient variable to pivot on",
            degree=b.valuation(),
        )
    inv_c = 1 / c_const_value(items[pivot])
    lin = [(axis, coef) for axis, coef in sorted(items.items())]

    rem = {e: c for e, c in a.terms.items() if sum(e) < prec}
    bitems = [(e, sum(e), c) for e, c in b.terms.items() if sum(e) < prec]
    out = {}
    while rem:
        m = min(sum(e) for e in rem)
        layer = {e: rem[e] for e in rem if sum(e) == m}
        step = _div_form_by_linear(layer, lin, pivot, inv_c, m)
        out.update(step)
        for et, ct in step.items():
            dt = sum(et)
            for eb, db, cb in bitems:
                if dt + db >= prec:
                    continue
                key = tuple(x + y for x, y in zip(et, eb))
                s = c_sub(rem.get(key, {}), c_mul(ct, cb))
                if s:
                    rem[key] = s
                elif key in rem:
                    del rem[key]
    return Series(a.ring, a.vars, out, prec - 1)


def _div_form_by_linear(form, lin, pivot, inv_c, degree):
    """Exact quotient of a homogeneous form by a linear form (synthetic)."""
    rem = dict(form)
    out = {}
    while rem:
        e = max(rem, key=lambda t: (t[pivot], t))
        if e[pivot] == 0:
            raise NotDivisible(
                f"no exact quotient at homogeneous degree {degree}", degree=degree)
        t_exp = list(e)
        t_exp[pivot] -= 1
        t_exp = tuple(t_exp)
        t_coef = c_scale(rem[e], inv_c)
        out[t_exp] = t_coef
        for axis, coef in lin:
            key = list(t_exp)
            key[axis] += 1
            key = tuple(key)
            s = c_sub(rem.get(key, {}), c_mul(t_coef, coef))
            if s:
                rem[key] = s
            elif key in rem:
                del rem[key]
    return out


def _monomials(nvars, degree):
    if degree == 0:
        yield (0,) * nvars
        return
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def _divide_generic(a, b, v, prec):
    """Per-degree exact linear solve; divisor lowest form of any degree >= 2."""
    low = b.lowest_form()
    for coef in low.values():
        if not c_is_const(coef):
            raise NotDivisible(
                "divisor lowest form must have rational coefficients",
                degree=v,
            )
    ring = a.ring
    nv = len(a.vars)
    low_items = [(e, c_const_value(c)) for e, c in low.items()]
    upper = [(e, sum(e), c) for e, c in b.terms.items() if sum(e) > v]
    q_terms = {}
    q_by_deg = {}
    for d in range(0, prec - v):
        target = d + v
        rhs = {e: dict(c) for e, c in a.terms.items() if sum(e) == target}
        # subtract known-quotient contributions from higher divisor forms
        for dq, layer in q_by_deg.items():
            for eq, cq in layer.items():
                for eb, db, cb in upper:
                    if dq + db != target:
                        continue
                    key = tuple(x + y for x, y in zip(eq, eb))
                    s = c_sub(rhs.get(key, {}), c_mul(cq, cb))
                    if s:
                        rhs[key] = s
                    elif key in rhs:
                        del rhs[key]
        unknowns = list(_monomials(nv, d))
        col = {e: i for i, e in enumerate(unknowns)}
        rows = {}
        for e in _monomials(nv, target):
            rows[e] = [Fraction(0)] * len(unknowns)
        for eu in unknowns:
            for el, cl in low_items:
                key = tuple(x + y for x, y in zip(eu, el))
                rows[key][col[eu]] += cl
        matrix = [rows[e] for e in rows]
        vector = [rhs.get(e, {}) for e in rows]
        sol = _solve_exact(matrix, vector, len(unknowns))
        if sol is None:
            raise NotDivisible(f"no exact quotient at homogeneous degree {target}",
                               degree=target)
        layer = {}
        for e, cval in zip(unknowns, sol):
            if cval:
                layer[e] = cval
                q_terms[e] = cval
        q_by_deg[d] = layer
    return Series(ring, a.vars, q_terms, prec - v)


def _solve_exact(matrix, vector, ncols):
    """Solve M x = v with rational M and coefficient-dict entries in v.

    Returns the unique solution (list of coefficient dicts) or None when the
    system is inconsistent.  Multiplication by a nonzero form is injective,
    so free columns never correspond to genuine ambiguity.
    """
    rows = [list(r) for r in matrix]
    rhs = [dict(v) for v in vector]
    nrows = len(rows)
    pivot_of_col = [None] * ncols
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, nrows):
            if rows[i][c]:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        rhs[r], rhs[sel] = rhs[sel], rhs[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        rhs[r] = c_scale(rhs[r], inv)
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                rhs[i] = c_sub(rhs[i], c_scale(rhs[r], f))
        pivot_of_col[c] = r
        r += 1
    for i in range(r, nrows):
        if rhs[i]:
            return None
    out = []
    for c in range(ncols):
        p = pivot_of_col[c]
        out.append({} if p is None else rhs[p])
    return out


# ----------------------------------------------------------------------
# univariate reversion

def revert(f):
    """Compositional inverse of a univariate series ``f = c1*t + ...``."""
    if len(f.vars) != 1:
        raise ValueError("reversion requires a univariate series")
    if f.valuation() != 1:
        raise ValueError("reversion requires valuation exactly 1")
    name = f.vars[0]
    c1 = f.coeff((1,))
    inv1 = c_invert(f.ring, c1)
    t = Series.variable(f.ring, f.vars, name, f.prec)
    g = t.scale(inv1)
    for k in range(2, f.prec):
        err = f.substitute({name: g}) - t
        c = err.coeff((k,))
        if c:
            g = g - (t ** k).scale(c_mul(c, inv1))
    return g
