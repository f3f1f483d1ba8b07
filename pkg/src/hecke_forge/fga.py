"""The formal group algebra S = R[[Gamma + Lambda]]_F and its localization.

An :class:`AlgebraContext` couples a root datum with a formal group law at a
working precision.  Its generators are ``x_gamma`` plus one variable per
basis weight (fundamental weights for a simply connected lattice, simple
roots for an adjoint one).  The class ``x_lambda`` of any lattice element is
the iterated formal sum of generator multiples along the coordinates of
``lambda``; in particular ``x_0 = 0`` and ``x_{-lambda}`` is the formal
inverse of ``x_lambda``.

The Weyl group acts by ``w(x_gamma) = x_gamma`` and ``w(x_lambda) =
x_{w(lambda)}``; the action is a ring homomorphism implemented as a cached
substitution, monomial by monomial.

``demazure`` is the divided-difference operator ``(u - s(u)) / x_alpha``
(exact division always succeeds over Q; over Z a failing integrality check
surfaces the regularity assumptions of the theory as ``NotIntegral``), and
``pushpull`` is ``kappa_alpha * u - demazure(u)``, computed pole-free.

:class:`LocalizedElement` is a numerator series over a denominator multiset
drawn from the fixed monoid ``{x_alpha} u {x_alpha - x_gamma}`` over
positive roots.  Equality is decided by cross-multiplication (which never
spends precision); ``reduce`` cancels every denominator factor dividing the
numerator exactly, and flags (``in_S`` / ``in_QF`` / ``needs_c``) are read
off the reduced form.
"""

from __future__ import annotations

from .errors import NotDivisible, PrecisionExhausted, UnsupportedLocalization
from .fgl import formal_integer, formal_sum
from .scalars import c_add, c_const, c_mul, c_promote
from .series import Series, divide_exact

X_FACTOR = "x"     # x_alpha
XC_FACTOR = "xc"   # x_alpha - x_gamma


class AlgebraContext:
    """Shared immutable state: datum + law + precision + caches."""

    def __init__(self, datum, fgl, precision=None):
        if precision is None:
            precision = fgl.prec
        if precision > fgl.prec:
            raise ValueError(
                f"context precision {precision} exceeds the law's precision {fgl.prec}")
        self.datum = datum
        self.fgl = fgl
        self.prec = precision
        self.ring = fgl.ring
        self.group = datum.weyl_group()
        stem = "x_w" if datum.lattice == "sc" else "x_a"
        self.vars = ("x_gamma",) + tuple(
            f"{stem}{i}" for i in range(1, datum.rank + 1))
        self._weights = {}
        self._weight_powers = {}
        self._mono_images = {}
        self._kappa = {}
        self._mu = {}
        self._inv_neg_mu = {}
        self._factor_series = {}
        self._den_products = {}
        self._units = {}

    # ------------------------------------------------------------------
    # generators and weight classes

    def zero(self):
        return Series.zero(self.ring, self.vars, self.prec)

    def one(self):
        return Series.one(self.ring, self.vars, self.prec)

    def const(self, value):
        return Series.const(self.ring, self.vars, value, self.prec)

    @property
    def x_gamma(self):
        return Series.variable(self.ring, self.vars, "x_gamma", self.prec)

    def gen(self, i):
        """Generator for the i-th basis weight (1-based)."""
        return Series.variable(self.ring, self.vars, self.vars[i], self.prec)

    def x_weight(self, lam):
        """x_lambda for a weight in the chosen basis coordinates."""
        lam = tuple(lam)
        got = self._weights.get(lam)
        if got is None:
            acc = self.zero()
            for i, c in enumerate(lam, start=1):
                if c:
                    acc = formal_sum(self.fgl, acc,
                                     formal_integer(self.fgl, c, self.gen(i)))
            got = acc.truncate(self.prec)
            self._weights[lam] = got
        return got

    def x_root(self, r):
        """x_{alpha} for a signed root index."""
        return self.x_weight(self.datum.root_weight(r))

    def kappa_root(self, r):
        got = self._kappa.get(r)
        if got is None:
            got = self.fgl.kappa.substitute({"x": self.x_root(r)})
            self._kappa[r] = got
        return got

    def mu_root(self, r):
        got = self._mu.get(r)
        if got is None:
            got = self.fgl.mu.substitute({"x": self.x_root(r)})
            self._mu[r] = got
        return got

    def inv_neg_mu(self, r):
        """1 / (-mu_alpha), the unit with x_{-alpha} = (-mu_alpha) x_alpha."""
        got = self._inv_neg_mu.get(r)
        if got is None:
            got = (-self.mu_root(r)).invert_unit()
            self._inv_neg_mu[r] = got
        return got

    def invert_unit_cached(self, u):
        key = u.key()
        got = self._units.get(key)
        if got is None:
            got = u.invert_unit()
            self._units[key] = got
        return got

    # ------------------------------------------------------------------
    # Weyl action

    def reflection(self, r):
        return self.group.reflection(r)

    def _weight_power(self, lam, k):
        key = (lam, k)
        got = self._weight_powers.get(key)
        if got is None:
            if k == 0:
                got = self.one()
            else:
                got = self._weight_power(lam, k - 1) * self.x_weight(lam)
            self._weight_powers[key] = got
        return got

    def _mono_image(self, w, exps):
        """Image under w of the monomial with the given exponents (no gamma part)."""
        key = (w.id, exps)
        got = self._mono_images.get(key)
        if got is None:
            got = self.one()
            for i, e in enumerate(exps, start=1):
                if e:
                    lam = tuple(w.mat[r][i - 1] for r in range(self.datum.rank))
                    got = got * self._weight_power(lam, e)
            self._mono_images[key] = got
        return got

    def weyl_act(self, w, u):
        """w(u) for a series over this context's generators."""
        if w.length == 0:
            return u
        # cached monomial images carry ctx.prec + deg - 1 exact digits, so
        # the result is safe below ctx.prec + val(u) - 1 (ctx.prec if u has
        # a constant term)
        v = u.valuation()
        prec = min(u.prec, self.prec + v - 1 if v >= 1 else self.prec)
        ring = self.ring.join(u.ring)
        out = {}
        for exps, coef in u.terms.items():
            g, rest = exps[0], exps[1:]
            img = self._mono_image(w, rest)
            if ring != self.ring:
                img = img.with_ring(ring)
            if ring != u.ring:
                coef = c_promote(coef, u.ring, ring)
            for e2, c2 in img.terms.items():
                deg = sum(e2) + g
                if deg >= prec:
                    continue
                key = (e2[0] + g,) + e2[1:]
                s = c_add(out.get(key, {}), c_mul(c2, coef))
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return Series(ring, self.vars, out, prec)

    def weyl_act_localized(self, w, elem):
        if w.length == 0:
            return elem
        num = self.weyl_act(w, elem.num)
        den = []
        for kind, p in elem.den:
            img = self.group.root_image(w, p + 1)
            q = abs(img) - 1
            if img > 0:
                den.append((kind, q))
            elif kind == X_FACTOR:
                num = num * self.inv_neg_mu(q + 1)
                den.append((X_FACTOR, q))
            else:
                raise UnsupportedLocalization(
                    "w(x_alpha - x_gamma) leaves the denominator monoid "
                    "when w(alpha) is negative")
        return LocalizedElement(self, num, tuple(sorted(den)))

    # ------------------------------------------------------------------
    # operators on S

    def demazure(self, r, u):
        """Divided difference (u - s_alpha(u)) / x_alpha."""
        s = self.reflection(r)
        return divide_exact(u - self.weyl_act(s, u), self.x_root(r))

    def pushpull(self, r, u):
        """kappa_alpha u - demazure(u) = u/x_{-alpha} + s(u)/x_alpha, pole-free."""
        return self.kappa_root(r) * u - self.demazure(r, u)

    def demazure_word(self, word, u):
        """Compose simple divided differences along a word (left to right)."""
        for i in reversed(word):
            u = self.demazure(i, u)
        return u

    def tau_word(self, word, u):
        """Action of T_{i_1} ... T_{i_k} on S via u -> x_gamma D_i(u) + s_i(u)."""
        xg = self.x_gamma
        for i in reversed(word):
            u = xg * self.demazure(i, u) + self.weyl_act(self.reflection(i), u)
        return u

    # ------------------------------------------------------------------
    # localization plumbing

    def factor_series(self, factor):
        got = self._factor_series.get(factor)
        if got is None:
            kind, p = factor
            got = self.x_root(p + 1)
            if kind == XC_FACTOR:
                got = got - self.x_gamma
            self._factor_series[factor] = got
        return got

    def den_product(self, den):
        got = self._den_products.get(den)
        if got is None:
            got = self.one()
            for f in den:
                got = got * self.factor_series(f)
            self._den_products[den] = got
        return got

    def monomials(self, max_degree, include_constant=False):
        """All generator monomial exponents of total degree <= max_degree."""
        out = []

        def rec(prefix, remaining, slots):
            if slots == 0:
                out.append(tuple(prefix))
                return
            for e in range(remaining + 1):
                rec(prefix + [e], remaining - e, slots - 1)

        rec([], max_degree, len(self.vars))
        out = [e for e in out if include_constant or any(e)]
        out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
        return out

    def monomial(self, exps):
        return Series(self.ring, self.vars,
                      {tuple(exps): c_const(self.ring, 1)}, self.prec)

    def __repr__(self):
        return (f"AlgebraContext({self.datum.label or self.datum.cartan}, "
                f"{self.fgl.descriptor}, prec={self.prec})")


class LocalizedElement:
    """num / prod(den) with den a multiset over {x_a} u {x_a - x_gamma}."""

    __slots__ = ("ctx", "num", "den", "_reduced")

    def __init__(self, ctx, num, den=()):
        self.ctx = ctx
        self.num = num
        self.den = tuple(sorted(den))
        self._reduced = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_series(cls, ctx, u, den=()):
        return cls(ctx, u, den)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ctx.zero())

    @classmethod
    def one(cls, ctx):
        return cls(ctx, ctx.one())

    # -- queries ----------------------------------------------------------

    def is_zero(self):
        """Representation-level test: the stored numerator has no terms.

        With ``k`` denominator factors a numerator at precision ``p`` only
        witnesses the value below degree ``p - k``; use
        :meth:`value_is_zero` when the answer must be meaningful.
        """
        return self.num.is_zero()

    def value_is_zero(self):
        red = self.reduce()
        if red.num.is_zero():
            if red.effective_prec <= 0:
                raise PrecisionExhausted(
                    "cannot decide whether the element is zero: no digits left")
            return True
        return False

    @property
    def prec(self):
        return self.num.prec

    @property
    def effective_prec(self):
        """Degrees of the underlying value actually determined."""
        return self.num.prec - len(self.den)

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return LocalizedElement(self.ctx, -self.num, self.den)

    def __add__(self, other):
        other = _coerce(self.ctx, other)
        if other is None:
            return NotImplemented
        lcm, extra_a, extra_b = _den_lcm(self.den, other.den)
        num = (self.num * self.ctx.den_product(extra_a)
               + other.num * self.ctx.den_product(extra_b))
        return LocalizedElement(self.ctx, num, lcm)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(self.ctx, other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(self.ctx, other)
        if other is None:
            return NotImplemented
        return LocalizedElement(self.ctx, self.num * other.num,
                                self.den + other.den)

    __rmul__ = __mul__

    def scale(self, coef):
        return LocalizedElement(self.ctx, self.num.scale(coef), self.den)

    def divide_by_factor(self, factor):
        return LocalizedElement(self.ctx, self.num, self.den + (factor,))

    def divide_by_root(self, r):
        """Divide by x_alpha for a signed root index, staying in the monoid."""
        p = abs(r) - 1
        if r > 0:
            return LocalizedElement(self.ctx, self.num, self.den + ((X_FACTOR, p),))
        num = self.num * self.ctx.inv_neg_mu(abs(r))
        return LocalizedElement(self.ctx, num, self.den + ((X_FACTOR, p),))

    # -- comparison ---------------------------------------------------------

    def eq(self, other):
        """Cross-multiplied equality at the common attainable precision.

        Cross-multiplication spends no precision, but the comparison only
        means something below ``min(prec) - len(lcm)``.  When that depth is
        gone, both sides are reduced (shrinking the denominators to their
        true pole orders) and the comparison is retried once.
        """
        other = _coerce(self.ctx, other)

        def attempt(x, y):
            lcm, extra_a, extra_b = _den_lcm(x.den, y.den)
            a = x.num * self.ctx.den_product(extra_a)
            b = y.num * self.ctx.den_product(extra_b)
            return min(a.prec, b.prec) - len(lcm), a, b

        depth, a, b = attempt(self, other)
        if depth <= 0:
            depth, a, b = attempt(self.reduce(), other.reduce())
            if depth <= 0:
                raise PrecisionExhausted(
                    "cross-multiplication left no digits to compare")
        return a.agrees_with(b)

    # -- reduction ------------------------------------------------------------

    def reduce(self):
        got = self._reduced
        if got is None:
            if self.num.is_zero():
                # cancelling every factor against a zero numerator is free,
                # but the value is only known below prec - len(den)
                zero = Series.zero(self.num.ring, self.num.vars,
                                   max(self.num.prec - len(self.den), 0))
                got = LocalizedElement(self.ctx, zero, ())
                got._reduced = got
                self._reduced = got
                return got
            num = self.num
            remaining = list(self.den)
            changed = True
            while changed and remaining:
                changed = False
                for f in list(dict.fromkeys(remaining)):
                    fs = self.ctx.factor_series(f)
                    try:
                        num = divide_exact(num, fs)
                    except NotDivisible:
                        continue
                    except PrecisionExhausted:
                        # out of digits: stop with a partial reduction
                        remaining = list(remaining)
                        changed = False
                        break
                    remaining.remove(f)
                    changed = True
                    break
            got = LocalizedElement(self.ctx, num, tuple(sorted(remaining)))
            got._reduced = got
            self._reduced = got
        return got

    def as_series(self):
        """The underlying Series; raises NotDivisible when a pole remains."""
        u = self.num
        for f in self.den:
            u = divide_exact(u, self.ctx.factor_series(f))
        return u

    @property
    def in_S(self):
        return not self.reduce().den

    @property
    def in_QF(self):
        return all(kind == X_FACTOR for kind, _ in self.reduce().den)

    @property
    def needs_c(self):
        return any(kind == XC_FACTOR for kind, _ in self.reduce().den)

    def flag(self):
        if self.in_S:
            return "in_S"
        if self.in_QF:
            return "in_QF"
        return "needs_c"

    # -- serialization ----------------------------------------------------------

    def text(self, pretty=False):
        red = self.reduce()
        if not red.den:
            return red.num.text(pretty)
        parts = []
        for kind, p in red.den:
            label = f"x(a{p + 1})" if kind == X_FACTOR else f"(x(a{p + 1}) - x_gamma)"
            parts.append(label)
        return f"[{red.num.text(pretty)}] / [{' * '.join(parts)}]"

    def to_json(self):
        red = self.reduce()
        return {
            "num": red.num.to_json(),
            "den": [[kind, p + 1] for kind, p in red.den],
        }

    def __repr__(self):
        return f"LocalizedElement({self.text()!r})"


def _coerce(ctx, value):
    """Coerce into a LocalizedElement; None for foreign types (=> NotImplemented)."""
    from fractions import Fraction

    if isinstance(value, LocalizedElement):
        return value
    if isinstance(value, Series):
        return LocalizedElement(ctx, value)
    if isinstance(value, (int, Fraction)):
        return LocalizedElement(ctx, ctx.const(value))
    return None


def _den_lcm(da, db):
    """Factor-wise max; returns (lcm, lcm - da, lcm - db) as tuples."""
    counts = {}
    for f in da:
        counts[f] = counts.get(f, 0) + 1
    for f in db:
        counts[f] = max(counts.get(f, 0), db.count(f))
    lcm = []
    for f in sorted(counts):
        lcm.extend([f] * counts[f])
    extra_a = list(lcm)
    for f in da:
        extra_a.remove(f)
    extra_b = list(lcm)
    for f in db:
        extra_b.remove(f)
    return tuple(lcm), tuple(extra_a), tuple(extra_b)


# ----------------------------------------------------------------------
# spec-level operation aliases

def x_of_weight(ctx, lam):
    return ctx.x_weight(lam)

def weyl_act(ctx, w, u):
    return ctx.weyl_act(w, u)

def demazure(ctx, r, u):
    return ctx.demazure(r, u)

def pushpull(ctx, r, u):
    return ctx.pushpull(r, u)

def loc_add(a, b):
    return a + b

def loc_mul(a, b):
    return a * b

def loc_eq(a, b):
    return a.eq(b)

def reduce(a):
    return a.reduce()
