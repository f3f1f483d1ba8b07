from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hecke_forge.errors import (
    NonNilpotentSubstitution, NotAUnit, NotDivisible, NotIntegral, VariableMismatch,
)
from hecke_forge.scalars import QQ, ZZ, c_const, c_param, ring_with_params
from hecke_forge.series import Series, divide_exact, revert, _divide_generic


V = ("x", "y")


def var(name, prec=8, ring=QQ, vars=V):
    return Series.variable(ring, vars, name, prec)


def const(value, prec=8, ring=QQ, vars=V):
    return Series.const(ring, vars, value, prec)


# ----------------------------------------------------------------------
# add / mul

def test_mul_variables():
    x, y = var("x"), var("y")
    xy = x * y
    assert xy.coeff((1, 1)) == c_const(QQ, 1)
    assert xy.prec >= min(x.prec, y.prec)  # spec floor; sharpened is allowed


def test_mul_difference_of_squares():
    x, y = var("x"), var("y")
    assert ((1 + x) * (1 - x)).agrees_with(const(1) - x * x)
    assert (x + y).agrees_with(y + x)


def test_add_identity_and_variable_mismatch():
    x = var("x")
    assert (x + Series.zero(QQ, V, 8)).agrees_with(x)
    with pytest.raises(VariableMismatch):
        x + Series.variable(QQ, ("z",), "z", 8)


# ----------------------------------------------------------------------
# invert_unit

def test_invert_geometric():
    x = var("x")
    inv = (1 - x).invert_unit()
    for k in range(8):
        assert inv.coeff((k, 0)) == c_const(QQ, 1)
    assert (inv * (1 - x)).agrees_with(const(1))


def test_invert_one():
    assert const(1).invert_unit().agrees_with(const(1))


def test_invert_parameter_unit():
    ring = ring_with_params(QQ, "beta")
    x = var("x", ring=ring)
    beta = c_param(ring, "beta")
    g = Series.one(ring, V, 8) - x.scale(beta)
    inv = g.invert_unit()
    # oracle: multiply back
    assert (inv * g).agrees_with(Series.one(ring, V, 8))
    # frozen closed form sum beta^k x^k
    for k in range(1, 8):
        assert inv.coeff((k, 0)) == {(k,): Fraction(1)}


def test_invert_not_a_unit():
    with pytest.raises(NotAUnit):
        const(2, ring=ZZ).invert_unit()
    with pytest.raises(NotAUnit):
        var("x").invert_unit()


# ----------------------------------------------------------------------
# divide_exact

def test_divide_difference_of_squares():
    x, y = var("x"), var("y")
    q = divide_exact(x * x - y * y, x - y)
    assert q.agrees_with(x + y)


def test_divide_multiplicative_difference():
    # (x -_Fm y)/(x - y) = 1/(1 - beta y): oracle = multiply back, plus the
    # closed form from the multiplicative inverse x/(beta x - 1)
    ring = ring_with_params(QQ, "beta")
    x, y = var("x", ring=ring), var("y", ring=ring)
    beta = c_param(ring, "beta")
    # neg(y) = -y/(1 - beta y) expanded
    neg_y = -(y * (Series.one(ring, V, 8) - y.scale(beta)).invert_unit())
    fm_diff = x + neg_y - (x * neg_y).scale(beta)   # F(x, neg(y))
    q = divide_exact(fm_diff, x - y)
    assert (q * (x - y)).agrees_with(fm_diff.truncate(q.prec))
    closed = (Series.one(ring, V, 8) - y.scale(beta)).invert_unit()
    assert q.agrees_with(closed.truncate(q.prec))


def test_divide_not_divisible():
    x, y = var("x"), var("y")
    with pytest.raises(NotDivisible) as info:
        divide_exact(x + y, x - y)
    assert info.value.degree == 1


def test_divide_not_integral_over_zz():
    x, y = var("x", ring=ZZ), var("y", ring=ZZ)
    with pytest.raises(NotIntegral) as info:
        divide_exact(x * x, x + x)   # x^2 / 2x = x/2
    assert info.value.offenders


def test_divide_by_unit_defers_to_inverse():
    x = var("x")
    q = divide_exact(x, const(2) - x)
    assert q.agrees_with(x * (const(2) - x).invert_unit())


def test_divide_zero_dividend():
    x = var("x")
    q = divide_exact(Series.zero(QQ, V, 8), x)
    assert q.is_zero() and q.prec == 7


# ----------------------------------------------------------------------
# substitution

def test_substitute_square_of_sum():
    vars3 = ("x", "y", "z")
    x = var("x")
    y3 = Series.variable(QQ, vars3, "y", 8)
    z3 = Series.variable(QQ, vars3, "z", 8)
    out = (x * x).substitute({"x": y3 + z3, "y": Series.zero(QQ, vars3, 8)})
    assert out.agrees_with(y3 * y3 + (y3 * z3) * 2 + z3 * z3)


def test_substitute_identity():
    x, y = var("x"), var("y")
    u = x * y + x * x * 3
    assert u.substitute({"x": x, "y": y}).agrees_with(u)


def test_substitute_sign_flip():
    x = var("x")
    geo = (1 - x).invert_unit()
    flipped = geo.substitute({"x": -x})
    for k in range(8):
        assert flipped.coeff((k, 0)) == c_const(QQ, (-1) ** k)


def test_substitute_nonnilpotent():
    x = var("x")
    with pytest.raises(NonNilpotentSubstitution):
        x.substitute({"x": const(1) + x})


# ----------------------------------------------------------------------
# property tests

coef_strategy = st.integers(min_value=-4, max_value=4)


@st.composite
def small_series(draw, prec=7):
    n = draw(st.integers(min_value=0, max_value=4))
    terms = {}
    for _ in range(n):
        e = (draw(st.integers(0, 3)), draw(st.integers(0, 3)))
        c = draw(coef_strategy)
        if c:
            terms[e] = c_const(QQ, c)
    return Series(QQ, V, terms, prec)


@settings(max_examples=40, deadline=None)
@given(small_series(), small_series(), small_series())
def test_ring_axioms(a, b, c):
    assert ((a + b) + c).agrees_with(a + (b + c))
    assert (a * b).agrees_with(b * a)
    assert ((a * b) * c).agrees_with(a * (b * c))
    assert (a * (b + c)).agrees_with(a * b + a * c)


@settings(max_examples=30, deadline=None)
@given(small_series())
def test_divide_multiply_back(q):
    x, y = var("x", 7), var("y", 7)
    b = x * 2 - y + x * y
    a = q * b
    if a.is_zero():
        return
    got = divide_exact(a, b)
    assert (got * b).agrees_with(a.truncate(got.prec + b.valuation()))
    assert got.agrees_with(q.truncate(got.prec))


@settings(max_examples=20, deadline=None)
@given(small_series())
def test_divide_fast_path_matches_generic(q):
    x, y = var("x", 7), var("y", 7)
    b = x * 2 - y + x * y
    a = q * b
    if a.is_zero():
        return
    fast = divide_exact(a, b)
    generic = _divide_generic(a, b, 1, min(a.prec, b.prec + a.valuation() - 1))
    assert fast.agrees_with(generic.truncate(min(fast.prec, generic.prec)))


@settings(max_examples=25, deadline=None)
@given(small_series(), small_series())
def test_substitute_multiplicative(a, b):
    vars3 = ("u", "v", "w")
    img = {
        "x": Series.variable(QQ, vars3, "u", 7) + Series.variable(QQ, vars3, "v", 7),
        "y": Series.variable(QQ, vars3, "w", 7) * 2,
    }
    lhs = (a * b).substitute(img)
    rhs = a.substitute(img) * b.substitute(img)
    assert lhs.agrees_with(rhs.truncate(lhs.prec))


@settings(max_examples=25, deadline=None)
@given(small_series())
def test_precision_declared_is_lower_bound(a):
    """Recompute at higher precision and compare below the declared one."""
    x = var("x", 12)
    y = var("y", 12)
    b = x - y + x * x
    hi = Series(QQ, V, a.terms, 12)
    lo_prod = a * b.truncate(7)
    hi_prod = hi * b
    assert lo_prod.agrees_with(hi_prod.truncate(lo_prod.prec))


# ----------------------------------------------------------------------
# reversion

def test_revert_round_trip():
    t = Series.variable(QQ, ("t",), "t", 9)
    f = t + (t ** 3).scale(c_const(QQ, Fraction(1, 6))) \
          + (t ** 5).scale(c_const(QQ, Fraction(3, 40)))
    g = revert(f)
    assert f.substitute({"t": g}).agrees_with(t)
    assert g.substitute({"t": f}).agrees_with(t)


def test_revert_requires_unit_slope():
    t = Series.variable(QQ, ("t",), "t", 8)
    with pytest.raises(ValueError):
        revert(t * t)


# ----------------------------------------------------------------------
# serialization

def test_text_form():
    x, y = var("x"), var("y")
    u = const(1) - (x * x * y).scale(c_const(QQ, Fraction(1, 2)))
    assert u.text() == "1 - 1/2*x^2*y + O(deg 8)"
    assert Series.zero(QQ, V, 5).text() == "0 + O(deg 5)"


def test_json_round_trip():
    ring = ring_with_params(QQ, "beta")
    x = var("x", ring=ring)
    u = (Series.one(ring, V, 8) - x.scale(c_param(ring, "beta"))).invert_unit()
    data = u.to_json()
    assert data["prec"] == 8 and data["vars"] == ["x", "y"]
    back = Series.from_json(data)
    assert back == u
