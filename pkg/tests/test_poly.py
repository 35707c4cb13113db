from fractions import Fraction

import numpy as np
import pytest

from nilonb.errors import DegreeOverflow
from nilonb.poly import MPoly, poly_from_text
from nilonb.scalar import Scalar

V = ("a", "b", "c")


def P(text):
    return poly_from_text(V, text)


def test_ring_operations():
    p, q = P("a*b + 2*c - 1/2"), P("a - b")
    assert p * q == P("a^2*b - a*b^2 + 2*a*c - 2*b*c - 1/2*a + 1/2*b")
    assert p - p == MPoly.zero(V)
    assert (p + q).degree() == 2


def test_text_round_trip():
    p = P("-1/2*a*b^2 + 3*c + 7")
    assert P(p.to_text()) == p


def test_substitute_and_partial():
    p = P("a*b + 2*c - 1/2")
    s = p.substitute([P("a - b"), MPoly.var(V, "a"), MPoly.const(V, 1)])
    assert s == P("a^2 - a*b + 3/2")
    fixed = p.partial({0: 2}, [1, 2])
    assert fixed.vars == ("b", "c")
    assert fixed.eval([1, 1]) == Scalar(Fraction(7, 2))


def test_eval_exact_and_float_agree():
    p = P("a^2*b - 1/3*c + 1")
    pt = [2, -1, 3]
    assert float(p.eval(pt)) == pytest.approx(p.eval_float(np.array(pt, dtype=float)))
    grid = np.random.default_rng(0).uniform(-1, 1, (5, 3))
    vals = p.eval_float(grid)
    for row, v in zip(grid, vals):
        assert v == pytest.approx(row[0] ** 2 * row[1] - row[2] / 3 + 1)


def test_derivative_and_support():
    p = P("a^3*b + c")
    assert p.derivative(0) == P("3*a^2*b")
    assert p.support_names() == {"a", "b", "c"}
    assert p.degree_in(0) == 3


def test_degree_guard():
    with pytest.raises(DegreeOverflow):
        P("a*b*c").guard(2)


def test_sqrt2_coefficients():
    p = MPoly.var(V, "a").scale(Scalar(0, 1, 2))
    assert (p * p) == P("2*a^2")
    assert not p.is_rational()
