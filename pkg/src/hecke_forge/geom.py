"""Rank-one projective-line push-forward and the convolution-class check.

The geometry enters purely through first-Chern-class series: the line
bundle of a character ``lam`` contributes ``x_lam``, the scaling character
contributes ``x_gamma``, tensor products combine classes through the formal
group law, and the relative cotangent class of the rank-one flag curve is
``x_{-alpha}``.  (The sign convention tying ``x_{-alpha}`` to the cotangent
bundle is recorded in the report header by callers.)

Push-forward along the curve is the two-Chern-root character formula

    f  ->  f(-_F lam1) / (lam2 -_F lam1)  +  f(-_F lam2) / (lam1 -_F lam2)

whose displayed poles must cancel; a genuine pole (malformed input) raises
``NotDivisible`` with the offending degree.

``rank1_convolution_check`` runs the full geometric pipeline for the
distinguished convolution class

    J = (x_{-alpha} - x_gamma) / (x_{-alpha} -_F x_gamma)

(multiply the fiber class by the Euler factor and J, push forward) and
compares the outcome, term by term, with the algebraic action of the
twisted-algebra generator J_alpha on ``x_lam``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedType
from .fga import AlgebraContext, LocalizedElement
from .fgl import formal_difference, formal_integer
from .hecke import make_J
from .series import Series, divide_exact


@dataclass
class Rank1Context:
    ctx: AlgebraContext
    lam1: Series          # Chern root x_{alpha/2} = x_omega
    lam2: Series          # Chern root x_{-alpha/2} = x_{-omega}
    euler: Series         # (x_{-alpha}) -_F (x_gamma): the twisted cotangent class
    J_class: Series       # (x_{-alpha} - x_gamma) / euler, pole-free by construction

    @classmethod
    def build(cls, ctx):
        if ctx.datum.rank != 1 or ctx.datum.lattice != "sc":
            raise UnsupportedType(
                "the rank-one geometry needs the simply connected A1 datum "
                "(the Chern roots are the half-weight classes)")
        lam1 = ctx.x_weight((1,))
        lam2 = ctx.x_weight((-1,))
        x_neg_alpha = ctx.x_root(-1)
        euler = formal_difference(ctx.fgl, x_neg_alpha, ctx.x_gamma)
        J_class = divide_exact(x_neg_alpha - ctx.x_gamma, euler)
        return cls(ctx=ctx, lam1=lam1, lam2=lam2, euler=euler, J_class=J_class)

    # ------------------------------------------------------------------

    def fiber_vars(self):
        return ("t",) + self.ctx.vars

    def lift(self, u):
        """Pull a base series back to the fiber space (no t-dependence)."""
        ctx = self.ctx
        terms = {(0,) + e: c for e, c in u.terms.items()}
        return Series(u.ring, self.fiber_vars(), terms, u.prec)

    def t_var(self):
        ctx = self.ctx
        return Series.variable(ctx.ring, self.fiber_vars(), "t", ctx.prec)

    def line_bundle_class(self, n):
        """c_1 of the fiberwise degree-n bundle as a series in t = c_1(O(1))."""
        return formal_integer(self.ctx.fgl, n, self.t_var())


def p1_pushforward(r1, f):
    """Two-root push-forward; the pole must cancel, yielding a base series.

    ``f`` lives in the fiber space ``("t",) + ctx.vars`` with ``t`` the
    hyperplane class; base coefficients ride along untouched.
    """
    ctx = r1.ctx
    at1 = f.substitute(_assignment(r1, r1.lam2))   # f(-_F lam1) = f(x_{-omega})
    at2 = f.substitute(_assignment(r1, r1.lam1))   # f(-_F lam2) = f(x_omega)
    total = (LocalizedElement(ctx, at1).divide_by_root(-1)
             + LocalizedElement(ctx, at2).divide_by_root(1))
    return total.as_series()   # NotDivisible with a degree witness on a real pole


def _assignment(r1, image):
    ctx = r1.ctx
    out = {"t": image}
    for name in ctx.vars:
        out[name] = Series.variable(image.ring, ctx.vars, name, image.prec)
    return out


@dataclass
class ConvolutionCheck:
    lam: tuple
    pairing: int
    passed: bool
    witness: str = None

    def to_json(self):
        out = {"lambda": list(self.lam), "pairing": self.pairing,
               "status": "pass" if self.passed else "fail"}
        if self.witness:
            out["witness"] = self.witness
        return out


def rank1_convolution_check(ctx, lam):
    """Geometric convolution of the J class vs the algebraic J action.

    ``lam`` is a weight (tuple) or an integer multiple of the half weight.
    """
    if isinstance(lam, int):
        lam = (lam,)
    lam = tuple(lam)
    r1 = Rank1Context.build(ctx)
    n = ctx.datum.pairing(lam, 1)

    # geometric side: multiply the fiber class by the Euler factor and the
    # J class (both pulled back from the base), then push forward
    base_factor = r1.euler * r1.J_class
    integrand = r1.lift(base_factor) * r1.line_bundle_class(n)
    geom = p1_pushforward(r1, integrand)

    # algebraic side, computed through the twisted algebra
    alg = make_J(ctx, 1).act(ctx.x_weight(lam)).as_series()

    ok = geom.agrees_with(alg.truncate(min(geom.prec, alg.prec)))
    witness = None
    if not ok:
        diff = geom - alg
        witness = f"first differing degree {diff.valuation()}"
    return ConvolutionCheck(lam=lam, pairing=n, passed=ok, witness=witness)
