"""The twisted algebra Q_W^F: delta/X/Y/T/J elements, bases, residues.

Elements are finite sums ``sum_w a_w delta_w`` with localized coefficients;
multiplication twists by the Weyl action, ``u delta_w * u' delta_{w'} =
u w(u') delta_{ww'}``.  The distinguished elements are::

    X_a = (1/x_a)(1 - delta_a)            divided-difference element
    Y_a = kappa_a - X_a                   push-pull element
    T_a = x_gamma X_a + delta_a           Demazure-Lusztig element
    J_a = (x_{-a} - x_gamma) Y_{-a}       convolution-normalized generator

For a fixed choice of one reduced word per Weyl element (the lexicographic
least), the products ``T_{I_w}`` are a left S-basis of the subalgebra
generated by S and the ``T_i``; conversion between the delta and T bases is
triangular with diagonal entries ``c_w / c~_w`` where ``c_w = prod x_alpha``
and ``c~_w = prod (x_alpha - x_gamma)`` over the inversion set of ``w``.

``residue_check`` implements the three pole conditions characterizing the
divided-difference and Hecke subalgebras inside Q_W^F:

* R1: ``x_alpha a_w`` has no remaining ``x_alpha`` pole (pole order <= 1);
* R2: ``a_w + a_{s_alpha w}`` has no ``x_alpha`` pole;
* R3: ``a_w / c~_w`` stays inside Q^F.

All residue bookkeeping is exact-division arithmetic on reduced forms, not
analytic residues.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PrecisionExhausted
from .fga import X_FACTOR, XC_FACTOR, AlgebraContext, LocalizedElement

__all__ = [
    "TwistedElement", "delta", "embed", "make_X", "make_Y", "make_T", "make_J",
    "T_of_word", "to_T_basis", "from_T_basis", "c_series", "c_tilde_factors",
    "membership_HF", "MembershipReport", "residue_check", "ResidueReport",
    "kappa_ij", "KappaIJ",
]


class TwistedElement:
    """Finite map WeylElement -> LocalizedElement, written sum a_w delta_w."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs=None):
        self.ctx = ctx
        clean = {}
        for wid, a in (coeffs or {}).items():
            # drop a coefficient only when its emptiness is informative
            if a.is_zero() and a.effective_prec > 0:
                continue
            clean[wid] = a
        self.coeffs = clean

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, {})

    def support(self):
        group = self.ctx.group
        return sorted(self.coeffs, key=lambda wid: (group[wid].length, wid))

    def is_zero(self):
        return not self.coeffs

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        other = _coerce_twisted(self.ctx, other)
        out = dict(self.coeffs)
        for wid, a in other.coeffs.items():
            out[wid] = out[wid] + a if wid in out else a
        return TwistedElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return TwistedElement(self.ctx, {w: -a for w, a in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_coerce_twisted(self.ctx, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_twisted(self.ctx, other)
        ctx, group = self.ctx, self.ctx.group
        out = {}
        for wid, a in self.coeffs.items():
            w = group[wid]
            for vid, b in other.coeffs.items():
                target = group.product(w, group[vid]).id
                term = a * ctx.weyl_act_localized(w, b)
                out[target] = out[target] + term if target in out else term
        return TwistedElement(ctx, out)

    def __rmul__(self, other):
        return _coerce_twisted(self.ctx, other) * self

    def scale(self, coef):
        return TwistedElement(self.ctx, {w: a.scale(coef) for w, a in self.coeffs.items()})

    def reduced(self):
        """Reduce every coefficient to its true pole order.

        Reduction preserves the effective precision (value digits) while
        shrinking denominators, which keeps later cross-multiplied sums
        from drifting past the truncation order.
        """
        return TwistedElement(self.ctx,
                              {w: a.reduce() for w, a in self.coeffs.items()})

    # -- comparison ----------------------------------------------------------

    def equals(self, other):
        other = _coerce_twisted(self.ctx, other)
        for wid in set(self.coeffs) | set(other.coeffs):
            a = self.coeffs.get(wid)
            b = other.coeffs.get(wid)
            if a is None:
                if not b.value_is_zero():
                    return False
            elif b is None:
                if not a.value_is_zero():
                    return False
            elif not a.eq(b):
                return False
        return True

    def nonzero_diff_support(self, other):
        """Support of self - other after per-coefficient comparison."""
        other = _coerce_twisted(self.ctx, other)
        bad = []
        for wid in set(self.coeffs) | set(other.coeffs):
            a = self.coeffs.get(wid, LocalizedElement.zero(self.ctx))
            b = other.coeffs.get(wid, LocalizedElement.zero(self.ctx))
            if not a.eq(b):
                bad.append(wid)
        return sorted(bad)

    # -- action on S -----------------------------------------------------------

    def act(self, u):
        """sum a_w * w(u); returns a LocalizedElement."""
        ctx = self.ctx
        if isinstance(u, LocalizedElement):
            loc = u
        else:
            loc = LocalizedElement(ctx, u)
        out = LocalizedElement.zero(ctx)
        for wid, a in self.coeffs.items():
            w = ctx.group[wid]
            out = out + a * ctx.weyl_act_localized(w, loc)
        return out

    # -- serialization -----------------------------------------------------------

    def text(self, pretty=False):
        if not self.coeffs:
            return "0"
        group = self.ctx.group
        parts = []
        for wid in self.support():
            word = ",".join(str(i) for i in group[wid].word)
            parts.append(f"({self.coeffs[wid].text(pretty)}) delta({word})")
        return " + ".join(parts)

    def to_json(self):
        group = self.ctx.group
        return [
            {"w": list(group[wid].word), "coef": self.coeffs[wid].to_json()}
            for wid in self.support()
        ]

    def __repr__(self):
        return f"TwistedElement({self.text()!r})"


def _coerce_twisted(ctx, value):
    from .series import Series

    if isinstance(value, TwistedElement):
        return value
    if isinstance(value, LocalizedElement):
        return TwistedElement(ctx, {0: value})
    if isinstance(value, Series):
        return TwistedElement(ctx, {0: LocalizedElement(ctx, value)})
    return TwistedElement(ctx, {0: LocalizedElement(ctx, ctx.const(value))})


# ----------------------------------------------------------------------
# distinguished elements

def delta(ctx, w):
    if isinstance(w, (tuple, list)):
        w = ctx.group.from_word(w)
    return TwistedElement(ctx, {w.id: LocalizedElement.one(ctx)})


def embed(ctx, u):
    """S -> Q_W^F via u delta_e."""
    return TwistedElement(ctx, {0: LocalizedElement(ctx, u)})


def make_X(ctx, r):
    """X_alpha = (1/x_alpha)(1 - delta_alpha) for a signed root index."""
    s = ctx.reflection(r)
    one = LocalizedElement.one(ctx).divide_by_root(r)
    return TwistedElement(ctx, {0: one, s.id: -one})


def make_Y(ctx, r):
    """Y_alpha = kappa_alpha - X_alpha."""
    x = make_X(ctx, r)
    kap = embed(ctx, ctx.kappa_root(r))
    return kap - x


def make_T(ctx, r):
    """T_alpha = x_gamma X_alpha + delta_alpha."""
    return embed(ctx, ctx.x_gamma) * make_X(ctx, r) + delta(ctx, ctx.reflection(r))


def make_J(ctx, r):
    """J_alpha = (x_{-alpha} - x_gamma) Y_{-alpha}."""
    factor = ctx.x_root(-r) - ctx.x_gamma
    return embed(ctx, factor) * make_Y(ctx, -r)


# ----------------------------------------------------------------------
# T-word basis

def T_of_word(ctx, word):
    """Product T_{i_1} ... T_{i_k} over 1-based simple indices."""
    key = ("T_word", tuple(word))
    cache = _ctx_cache(ctx)
    got = cache.get(key)
    if got is None:
        got = delta(ctx, ctx.group.identity)
        for i in word:
            got = got * _simple_T(ctx, i)
        cache[key] = got
    return got


def _ctx_cache(ctx):
    cache = getattr(ctx, "_hecke_cache", None)
    if cache is None:
        cache = {}
        ctx._hecke_cache = cache
    return cache


def _simple_T(ctx, i):
    cache = _ctx_cache(ctx)
    key = ("T", i)
    got = cache.get(key)
    if got is None:
        got = make_T(ctx, i)
        cache[key] = got
    return got


def t_basis_elements(ctx):
    """Expansions of T_{I_w} in the delta basis, canonical word per w."""
    cache = _ctx_cache(ctx)
    got = cache.get("t_basis")
    if got is None:
        got = {w.id: T_of_word(ctx, w.word) for w in ctx.group}
        cache["t_basis"] = got
    return got


def c_series(ctx, w):
    """c_w = prod of x_alpha over the inversion set of w."""
    out = ctx.one()
    for p in w.inversion_set:
        out = out * ctx.x_root(p + 1)
    return out


def c_tilde_factors(ctx, w):
    """Denominator factors of c~_w = prod (x_alpha - x_gamma) over inversions."""
    return tuple(sorted((XC_FACTOR, p) for p in w.inversion_set))


def to_T_basis(z):
    """Solve z = sum t_w T_{I_w}; triangular in the Bruhat/length order.

    Intermediate values are reduced eagerly: unreduced cross-multiplied
    sums shift the numerator support past the truncation order, so keeping
    denominators at their true pole orders is what preserves information.
    """
    ctx = z.ctx
    group = ctx.group
    basis = t_basis_elements(ctx)
    rem = {wid: a.reduce() for wid, a in z.coeffs.items()}
    out = {}
    for w in sorted(group, key=lambda w: (-w.length, w.id)):
        a = rem.get(w.id)
        if a is None:
            continue
        if a.is_zero():
            if a.effective_prec <= 0:
                raise PrecisionExhausted(
                    "triangular solve cannot decide a leading coefficient")
            continue
        # divide by the diagonal b_{w,w} = c~_w / c_w
        t = LocalizedElement(ctx, a.num * c_series(ctx, w),
                             a.den + c_tilde_factors(ctx, w)).reduce()
        out[w.id] = t
        for vid, b in basis[w.id].coeffs.items():
            if vid == w.id:
                continue
            prod = t * b
            prev = rem.get(vid)
            rem[vid] = ((-prod) if prev is None else prev - prod).reduce()
        rem.pop(w.id, None)
    for wid, a in rem.items():
        if not a.value_is_zero():
            raise AssertionError(
                f"triangular solve left residue on Weyl id {wid}")
    return out


def from_T_basis(ctx, coeffs, words=None):
    """sum coeffs[w] * T_{I_w} back in the delta basis."""
    out = TwistedElement.zero(ctx)
    for wid in sorted(coeffs):
        t = coeffs[wid]
        if words is not None and wid in words:
            tw = T_of_word(ctx, words[wid])
        else:
            tw = t_basis_elements(ctx)[wid]
        term = TwistedElement(ctx, {0: t.reduce()}) * tw
        out = (out + term.reduced()).reduced()
    return out


# ----------------------------------------------------------------------
# membership and residue reports

@dataclass
class MembershipReport:
    element: str
    t_coeffs: dict            # wid -> LocalizedElement (reduced)
    flags: dict               # wid -> "in_S" | "in_QF" | "needs_c"
    action_samples: list      # (monomial exponents, lands_in_S)
    in_T_span_over_S: bool
    acts_into_S: bool

    def to_json(self, ctx):
        group = ctx.group
        return {
            "element": self.element,
            "t_basis": [
                {
                    "w": list(group[wid].word),
                    "coef": self.t_coeffs[wid].to_json(),
                    "coef_text": self.t_coeffs[wid].text(),
                    "flag": self.flags[wid],
                }
                for wid in sorted(self.t_coeffs, key=lambda i: (group[i].length, i))
            ],
            "action_samples": [
                {"monomial": list(e), "in_S": ok} for e, ok in self.action_samples
            ],
            "in_T_span_over_S": self.in_T_span_over_S,
            "acts_into_S": self.acts_into_S,
        }


def membership_HF(z, sample_degree=2):
    """T-basis coefficients with flags plus a sampled z . S <= S check."""
    ctx = z.ctx
    tb = to_T_basis(z)
    reduced = {wid: t.reduce() for wid, t in tb.items()}
    flags = {wid: t.flag() for wid, t in reduced.items()}
    samples = []
    all_in = True
    for exps in ctx.monomials(sample_degree, include_constant=True):
        res = z.act(ctx.monomial(exps)).reduce()
        ok = res.in_S
        all_in = all_in and ok
        samples.append((exps, ok))
    return MembershipReport(
        element=z.text(),
        t_coeffs=reduced,
        flags=flags,
        action_samples=samples,
        in_T_span_over_S=all(f == "in_S" for f in flags.values()),
        acts_into_S=all_in,
    )


@dataclass
class ResidueReport:
    applicable: bool
    r1: bool = None
    r2: bool = None
    r3: bool = None
    witnesses: list = field(default_factory=list)

    def passes(self):
        return bool(self.applicable and self.r1 and self.r2 and self.r3)


def residue_check(z):
    """(R1, R2, R3) for an element with Q^F coefficients."""
    ctx = z.ctx
    group = ctx.group
    reduced = {wid: a.reduce() for wid, a in z.coeffs.items()}
    if any(a.needs_c for a in reduced.values()):
        return ResidueReport(applicable=False,
                             witnesses=["coefficients not in Q^F"])
    r1 = r2 = r3 = True
    witnesses = []
    npos = ctx.datum.n_pos
    zero = LocalizedElement.zero(ctx)
    for p in range(npos):
        xfac = (X_FACTOR, p)
        xser = ctx.factor_series(xfac)
        srefl = ctx.reflection(p + 1)
        support = set(reduced)
        support |= {group.product(srefl, group[wid]).id for wid in reduced}
        for wid in support:
            a = reduced.get(wid, zero)
            # R1: x_alpha a_w in Q_alpha
            t1 = LocalizedElement(ctx, a.num * xser, a.den).reduce()
            if any(f == xfac for f in t1.den):
                r1 = False
                witnesses.append(f"R1 fails at root {p + 1}, w id {wid}")
            # R2: a_w + a_{s_alpha w} in Q_alpha
            other = reduced.get(group.product(srefl, group[wid]).id, zero)
            t2 = (a + other).reduce()
            if any(f == xfac for f in t2.den):
                r2 = False
                witnesses.append(f"R2 fails at root {p + 1}, w id {wid}")
    for wid, a in reduced.items():
        t3 = LocalizedElement(ctx, a.num,
                              a.den + c_tilde_factors(ctx, group[wid])).reduce()
        if t3.needs_c:
            r3 = False
            witnesses.append(f"R3 fails at w id {wid}")
    return ResidueReport(True, r1, r2, r3, witnesses)


# ----------------------------------------------------------------------
# braid-deformation coefficient

@dataclass
class KappaIJ:
    value: LocalizedElement
    in_S: bool
    series: object = None  # Series when in_S


def kappa_ij(ctx, i, j):
    """kappa_{ij} = (1/x_{i+j})(1/x_j - 1/x_{-i}) - 1/(x_i x_j).

    Requires alpha_i + alpha_j to be a root (m_ij >= 3).  The flag records
    whether the combination reduced to a pole-free series.
    """
    datum = ctx.datum
    target = tuple(
        a + b for a, b in zip(datum.root(i).alpha, datum.root(j).alpha))
    rsum = None
    for p, root in enumerate(datum.pos_roots):
        if root.alpha == target:
            rsum = p + 1
            break
    if rsum is None:
        raise ValueError(f"alpha_{i} + alpha_{j} is not a root")
    one = LocalizedElement.one(ctx)
    inv_j = one.divide_by_root(j)
    inv_neg_i = one.divide_by_root(-i)
    term1 = (inv_j - inv_neg_i).divide_by_root(rsum)
    term2 = one.divide_by_root(i).divide_by_root(j)
    val = (term1 - term2).reduce()
    return KappaIJ(value=val, in_S=val.in_S,
                   series=val.num if val.in_S else None)
