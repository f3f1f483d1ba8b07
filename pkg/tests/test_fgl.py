import random
from fractions import Fraction

import pytest

from hecke_forge.errors import AxiomViolation, RingMismatch
from hecke_forge.fgl import (
    FGL, build_fgl, exponential, formal_integer, formal_inverse, formal_sum,
    logarithm, parse_fgl_descriptor,
)
from hecke_forge.scalars import QQ, ZZ, c_const, c_param, ring_with_params
from hecke_forge.series import Series, divide_exact

BUILTINS = ["add", "mult:beta", "lorentz:beta", "exp:b2,b3"]


def x_var(ring, prec=8):
    return Series.variable(ring, ("x",), "x", prec)


# ----------------------------------------------------------------------
# build + closed forms

def test_additive():
    f = build_fgl("add", 10)
    x = x_var(f.ring, 10)
    assert f.neg.agrees_with(-x)
    assert f.kappa.is_zero()
    assert f.mu.agrees_with(Series.one(f.ring, ("x",), 10))


def test_multiplicative_closed_forms():
    f = build_fgl("mult:beta", 12)
    ring = f.ring
    beta = c_param(ring, "beta")
    x = x_var(ring, 12)
    # neg = x/(beta x - 1) = -x - beta x^2 - beta^2 x^3 - ...
    expect = Series.zero(ring, ("x",), 12)
    for k in range(1, 12):
        term = (x ** k).scale(c_const(ring, -1))
        for _ in range(k - 1):
            term = term.scale(beta)
        expect = expect + term
    assert f.neg.agrees_with(expect)
    assert f.kappa.agrees_with(Series.const(ring, ("x",), 0, 12).scale(beta)
                               + Series.const(ring, ("x",), 0, 12) + Series.one(ring, ("x",), 12).scale(beta))
    # mu = 1/(1 - beta x) = sum beta^k x^k
    for k in range(12):
        assert f.mu.coeff((k,)) == {(k,): Fraction(1)}


def test_lorentz_closed_forms():
    f = build_fgl("lorentz:beta", 10)
    x = x_var(f.ring, 10)
    assert f.neg.agrees_with(-x)
    assert f.kappa.is_zero()
    assert f.mu.agrees_with(Series.one(f.ring, ("x",), 10))
    # denominator sign convention is recorded in the descriptor
    assert f.descriptor["sign"] == 1


def test_exp_defined_jacobi_sine():
    f = build_fgl({"fgl": "exp", "l_coeffs": ["0", "1/6", "0", "3/40"]}, 9)
    # the logarithm is the defining series, returned unchanged
    log = logarithm(f)
    assert log.coeff((3,)) == c_const(f.ring, Fraction(1, 6))
    assert log.coeff((5,)) == c_const(f.ring, Fraction(3, 40))
    assert log.coeff((2,)) == {}
    # odd logarithm forces neg = -x and kappa = 0
    assert f.kappa.is_zero()
    x = x_var(f.ring, 9)
    assert f.neg.agrees_with(-x)


def test_axioms_all_builtins():
    for desc in BUILTINS:
        f = build_fgl(desc, 8)
        vars2 = f.F.vars
        x = Series.variable(f.ring, vars2, "x", 8)
        zero = Series.zero(f.ring, ("x",), 8)
        assert f.F.substitute({"x": x_var(f.ring), "y": zero}).agrees_with(x_var(f.ring))
        assert formal_sum(f, x_var(f.ring), f.neg).is_zero()


def test_axiom_violation_guard():
    good = build_fgl("mult:1", 6)
    broken = FGL(ring=good.ring, prec=good.prec, kind="custom",
                 descriptor={"fgl": "custom"},
                 F=good.F + good.F * good.F,   # no longer satisfies F(x,0)=x
                 neg=good.neg, kappa=good.kappa, mu=good.mu)
    from hecke_forge.fgl import _check_axioms
    with pytest.raises(AxiomViolation):
        _check_axioms(broken)


# ----------------------------------------------------------------------
# formal sums / inverses / integers

def test_formal_sum_additive():
    f = build_fgl("add", 8)
    v = ("x", "y")
    x = Series.variable(f.ring, v, "x", 8)
    y = Series.variable(f.ring, v, "y", 8)
    assert formal_sum(f, x, y).agrees_with(x + y)


def test_formal_inverse_of_zero():
    f = build_fgl("mult:1", 8)
    zero = Series.zero(f.ring, ("x",), 8)
    assert formal_inverse(f, zero).is_zero()


def test_formal_double_multiplicative():
    f = build_fgl("mult:1", 8)
    x = x_var(f.ring)
    two = formal_integer(f, 2, x)
    assert two.agrees_with(x * 2 - x * x)
    assert formal_integer(f, 0, x).is_zero()
    assert formal_integer(f, 1, x).agrees_with(x)
    assert formal_integer(f, -1, x).agrees_with(formal_inverse(f, x))
    # n and -n are formal inverses of each other
    assert formal_sum(f, formal_integer(f, 3, x), formal_integer(f, -3, x)).is_zero()


# ----------------------------------------------------------------------
# kappa dichotomy and divisibility lemmas

def test_kappa_dichotomy():
    x = x_var(QQ)
    for desc, kappa_zero in [("add", True), ("mult:beta", False),
                             ("lorentz:beta", True), ("exp:b2,b3", False),
                             ("exp:0,b3", True)]:
        f = build_fgl(desc, 8)
        neg_is_minus = f.neg.agrees_with(-x_var(f.ring))
        assert f.kappa.is_zero() == kappa_zero == neg_is_minus, desc


def test_unit_quotient_of_formal_difference():
    # (x -_F y)/(x - y) is a unit with constant term 1, every built-in
    for desc in BUILTINS:
        f = build_fgl(desc, 8)
        v = ("x", "y")
        x = Series.variable(f.ring, v, "x", 8)
        y = Series.variable(f.ring, v, "y", 8)
        diff = formal_sum(f, x, formal_inverse(f, y))
        q = divide_exact(diff, x - y)
        assert q.constant_term() == c_const(f.ring, 1), desc
        assert (q * (x - y)).agrees_with(diff.truncate(q.prec + 1)), desc


def test_cross_divisibility_of_series():
    # f(x)(x - y) divides x f(y) - y f(x) for unit-slope f with f(0) = 0
    rng = random.Random(11)
    v = ("x", "y")
    x = Series.variable(QQ, v, "x", 8)
    y = Series.variable(QQ, v, "y", 8)
    for _ in range(5):
        f = x
        for k in range(2, 6):
            c = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            if c:
                f = f + (x ** k).scale(c_const(QQ, c))
        fy = f.substitute({"x": y, "y": x})  # f evaluated at y
        num = x * fy - y * f
        q = divide_exact(divide_exact(num, f), x - y)
        assert (q * f * (x - y)).agrees_with(num.truncate(q.prec + 2))


# ----------------------------------------------------------------------
# logarithm

def test_logarithm_additive_is_identity():
    f = build_fgl("add", 8)
    t = Series.variable(f.ring, ("t",), "t", 8)
    assert logarithm(f).agrees_with(t)


def test_logarithm_multiplicative_one():
    f = build_fgl("mult:1", 8)
    log = logarithm(f)
    # sum t^k / k, verified against the functional equation by substitution
    for k in range(1, 8):
        assert log.coeff((k,)) == c_const(QQ, Fraction(1, k))
    v = ("x", "y")
    x = Series.variable(QQ, v, "x", 8)
    y = Series.variable(QQ, v, "y", 8)
    lhs = log.substitute({"t": x + y - x * y})
    rhs = log.substitute({"t": x}) + log.substitute({"t": y})
    assert lhs.agrees_with(rhs)


def test_logarithm_round_trip_all_builtins():
    for desc in BUILTINS:
        f = build_fgl(desc, 8)
        t = Series.variable(f.ring, ("t",), "t", 8)
        log, exp = logarithm(f), exponential(f)
        assert log.substitute({"t": exp}).agrees_with(t), desc
        assert exp.substitute({"t": log}).agrees_with(t), desc


def test_logarithm_needs_rationals():
    f = build_fgl("mult:1", 6, ring=ZZ)
    with pytest.raises(RingMismatch):
        logarithm(f)
    with pytest.raises(RingMismatch):
        build_fgl("exp:1", 6, ring=ZZ)


# ----------------------------------------------------------------------
# descriptors

def test_descriptor_parsing():
    assert parse_fgl_descriptor("add") == {"fgl": "additive"}
    assert parse_fgl_descriptor("mult:1") == {"fgl": "multiplicative", "beta": "1"}
    assert parse_fgl_descriptor({"fgl": "multiplicative", "beta": "1"})["beta"] == "1"
    assert parse_fgl_descriptor("exp:0,1/6")["l_coeffs"] == ["0", "1/6"]
    with pytest.raises(ValueError):
        parse_fgl_descriptor("mult")
    with pytest.raises(ValueError):
        parse_fgl_descriptor("frobenius:2")
