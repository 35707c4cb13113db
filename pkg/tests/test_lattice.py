import copy
import random
from fractions import Fraction

import pytest

from _support import algebra, chr_for, spec_for
from nilonb.algebra import BasisChange, Subspace
from nilonb.errors import BasisNotThroughIdeal, CovolumeMismatch, IrrationalScaling
from nilonb.lattice import (FundamentalDomain, build_quasi_lattice, compose, covolume, decompose,
                            discrete_set, doubling_scales, integral_law_check, member_index_element,
                            project_quotient, uniformize)
from nilonb.orbit import formal_degree, orbit_polys
from nilonb.poly import MPoly
from nilonb.scalar import ONE, ZERO, Scalar

PQ = [(1, 1), (1, 3), (2, 5)]


def test_doubling_scales_shape():
    s = doubling_scales(2, 1, 3)
    assert [x.rational() for x in s] == [Fraction(1, 2 ** 16), Fraction(1, 2 ** 8), Fraction(1, 2 ** 4),
                                         Fraction(1, 4), 4, 16, 256]


@pytest.mark.parametrize("p,q", PQ)
def test_uniformize_integrality(p, q):
    lam = Fraction(p, q)
    spec = spec_for("dynin-folland", lam, True)
    assert integral_law_check(spec)
    assert spec.K == 2 * p * p
    forced = uniformize(chr_for("dynin-folland", lam), algebra("dynin-folland"), K=2 * p * p)
    assert forced.K == 2 * p * p and integral_law_check(forced)


def test_uniform_coefficients_for_lambda_two():
    spec = spec_for("dynin-folland", Fraction(2), True)
    assert spec.K == 8
    law = {lab: p for lab, p in zip(spec.group.law.labels, spec.group.law.polys)}
    coeffs = sorted(int(abs(c).rational()) for c in law["Xt3"].coefficients())
    assert coeffs[-1] == 8 ** 10 // 2          # K^10 / lambda
    assert max(int(abs(c).rational()) for c in law["Y1"].coefficients()) == 8 ** 10 // 4


def test_heisenberg_third_needs_no_rescaling():
    # the Ch-R law at lambda = 1/3 already has integer coefficients
    spec = spec_for("heisenberg:1", Fraction(1, 3), True)
    assert spec.K_lcm == 1 and spec.K == 1
    assert integral_law_check(spec)


def test_quasi_lattice_law_not_integral_in_general():
    assert not integral_law_check(spec_for("dynin-folland", Fraction(1)))


def test_sqrt2_uniform_mode_errors():
    with pytest.raises(IrrationalScaling):
        uniformize(chr_for("example-7dim-sqrt2-corrected"), algebra("example-7dim-sqrt2-corrected"))


@pytest.mark.parametrize("name,lam,uniform", [
    ("heisenberg:1", Fraction(1), False), ("heisenberg:1", Fraction(1, 3), True),
    ("heisenberg:2", Fraction(2), True), ("dynin-folland", Fraction(2, 5), True),
    ("dynin-folland", Fraction(1), False), ("dynin-folland-graded", Fraction(1), True),
    ("example-7dim-sqrt2-corrected", Fraction(1), False),
])
def test_covolume_identity(name, lam, uniform):
    spec = spec_for(name, lam, uniform)
    d_pi = formal_degree(algebra(name), chr_for(name, lam).l)
    assert covolume(spec) * d_pi == ONE
    covolume(spec, d_pi)


def test_mis_scaled_lattice_fails_covolume():
    spec = copy.copy(spec_for("dynin-folland", Fraction(1), True))
    spec.template_scale = Scalar(2)
    d_pi = formal_degree(algebra("dynin-folland"), chr_for("dynin-folland").l)
    with pytest.raises(CovolumeMismatch):
        covolume(spec, d_pi)


@pytest.mark.parametrize("chart", ["reversed", "malcev"])
def test_decompose_round_trip(chart):
    df = algebra("dynin-folland")
    spec, dom = build_quasi_lattice(df)
    dom = FundamentalDomain(chart, df.n)
    rng = random.Random(11)
    for _ in range(10):
        g = [Scalar(Fraction(rng.randint(-40, 40), rng.randint(1, 7))) for _ in range(df.n)]
        t, k = decompose(spec, dom, g)
        assert all(ZERO <= x < ONE for x in t)
        assert compose(spec, dom, t, k) == g


def test_project_quotient_requires_prefix_ideal():
    df = algebra("dynin-folland")
    spec, dom = build_quasi_lattice(df)
    q, _ = project_quotient(spec, dom, Subspace.from_labels(df, ["Z"]))
    assert q.n == 6
    with pytest.raises(BasisNotThroughIdeal):
        project_quotient(spec, dom, Subspace.from_labels(df, ["Y1"]))


def test_member_index_element_is_theta_times_eta_inverse():
    spec = spec_for("dynin-folland", Fraction(1), True)
    G = spec.group
    g, th, et = member_index_element(spec, (1, -1, 2), (0, 1, -1))
    assert G.mul(g, et) == th


def test_discrete_set_description():
    ds = discrete_set(spec_for("dynin-folland", Fraction(1), True))
    assert ds.K == 2 and ds.C == 2 ** 7
    assert [g["label"] for g in ds.gamma_M] == ["Y1", "Y2", "Y3"]


@pytest.mark.parametrize("lam", [Fraction(1), Fraction(2), Fraction(1, 3)])
def test_first_realization_orbit_polynomial_in_uniform_coordinates(lam):
    # unscaled Q3 = t3 - t1 t2 / (2 lam); scales K^8 (Xt1), K^4 (Xt2), K^-2 (Y3) give K^10 / (2 lam)
    spec = spec_for("dynin-folland", lam, True)
    lw = BasisChange(spec.vectors).functional(chr_for("dynin-folland", lam).l).coords
    Q = orbit_polys(spec.alg, lw, spec.r, spec.d, spec.group)[0]
    coeff = Scalar(Fraction(spec.K ** 10) / (2 * lam))
    assert Q[2] == MPoly.var(Q[2].vars, "t3") - MPoly.var(Q[2].vars, "t1") * MPoly.var(Q[2].vars, "t2").scale(coeff)
    assert chr_for("dynin-folland", lam).Q[2].to_text() == f"-{Fraction(1) / (2 * lam)}*t1*t2 + t3"
