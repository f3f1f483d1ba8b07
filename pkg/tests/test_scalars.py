from fractions import Fraction

import pytest

from hecke_forge.errors import NotAUnit
from hecke_forge.scalars import (
    QQ, ZZ, Ring, c_add, c_const, c_eval, c_invert, c_is_integral, c_mul,
    c_param, c_parse, c_promote, c_str, ring_with_params,
)


def test_ring_join_and_str():
    rb = ring_with_params(QQ, "beta")
    rc = ring_with_params(ZZ, "c")
    joined = rb.join(rc)
    assert joined.rational and joined.params == ("beta", "c")
    assert str(rb) == "QQ[beta]"
    assert str(ZZ) == "ZZ"


def test_polynomial_arithmetic():
    r = ring_with_params(QQ, "b2", "b3")
    b2, b3 = c_param(r, "b2"), c_param(r, "b3")
    p = c_add(c_mul(b2, b2), c_const(r, Fraction(-1, 3)))
    q = c_mul(p, b3)
    assert c_str(r, q) == "b2^2*b3 - 1/3*b3"
    assert c_eval(q, r, {"b2": 2, "b3": 3}) == Fraction(11)


def test_invert_units():
    assert c_invert(QQ, c_const(QQ, Fraction(2, 3))) == c_const(QQ, Fraction(3, 2))
    assert c_invert(ZZ, c_const(ZZ, -1)) == c_const(ZZ, -1)
    with pytest.raises(NotAUnit):
        c_invert(ZZ, c_const(ZZ, 2))
    r = ring_with_params(QQ, "beta")
    with pytest.raises(NotAUnit):
        c_invert(r, c_param(r, "beta"))


def test_integrality_and_promotion():
    assert c_is_integral(c_const(QQ, 4))
    assert not c_is_integral(c_const(QQ, Fraction(1, 2)))
    small = ring_with_params(QQ, "beta")
    big = ring_with_params(QQ, "alpha", "beta")
    moved = c_promote(c_param(small, "beta"), small, big)
    assert moved == c_param(big, "beta")


def test_str_parse_round_trip():
    r = ring_with_params(QQ, "b2", "b3")
    samples = [
        c_const(r, 0),
        c_const(r, Fraction(-7, 2)),
        c_param(r, "b3"),
        c_add(c_mul(c_param(r, "b2"), c_param(r, "b2")),
              c_const(r, Fraction(5, 4))),
        c_add(c_mul(c_const(r, -2), c_param(r, "b2")), c_param(r, "b3")),
    ]
    for coef in samples:
        assert c_parse(r, c_str(r, coef)) == coef
