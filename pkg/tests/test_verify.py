import copy
import time
from fractions import Fraction

import numpy as np
import pytest

from _support import algebra, family_for
from nilonb.builtins import get_builtin
from nilonb.errors import QuadratureNotConverged
from nilonb.poly import poly_from_text
from nilonb.verify import (IntegralStats, QuadratureSpec, box_integral, gram, inner_product,
                           matrix_oracle, matrix_oracle_check, member_as_term, parseval_probe,
                           trig_polynomial)

V = ("u", "v", "w")


def brute(phi, k, n=400):
    """Tensor Gauss-Legendre on [0,1)^k, independent of the package integrator."""
    x, wts = np.polynomial.legendre.leggauss(n)
    x, wts = (x + 1) / 2, wts / 2
    grids = np.meshgrid(*([x] * k), indexing="ij")
    pts = np.stack(list(grids) + [np.zeros_like(grids[0])] * (3 - k), axis=-1)
    W = np.ones_like(grids[0])
    for g in np.meshgrid(*([wts] * k), indexing="ij"):
        W = W * g
    return np.sum(W * np.exp(2j * np.pi * phi.eval_float(pts)))


@pytest.mark.parametrize("text,k", [
    ("3/2*u", 1), ("u + v", 2), ("1/3*u*v", 2), ("u*v + 1/4*w", 3), ("2*u^2 - 1/3*v", 2),
    ("5*u*v + v", 2), ("u^2*v", 2), ("7", 1),
])
def test_box_integral_against_brute_force(text, k):
    phi = poly_from_text(V, text)
    got = box_integral(phi, list(range(k)), QuadratureSpec())
    assert abs(got - brute(phi, k, 200 if k == 3 else 400)) < 1e-9


def test_integer_frequency_gives_exact_zero():
    stats = IntegralStats()
    phi = poly_from_text(V, "512*u*v + 3*w")
    assert box_integral(phi, [0, 1, 2], QuadratureSpec(), stats=stats) == 0
    assert stats.zero_shortcut == 1 and stats.numeric == 0


def test_non_convergence_is_reported():
    phi = poly_from_text(V, "400*u^3*v^2 + 311*u^2*v^3")
    with pytest.raises(QuadratureNotConverged):
        box_integral(phi, [0, 1], QuadratureSpec(max_refinements=1, max_nodes=64))


@pytest.mark.parametrize("lam", [Fraction(1), Fraction(1, 3)])
def test_gabor_gram(lam):
    fam = family_for("heisenberg:1", lam, False, 3)
    t = time.perf_counter()
    rep = gram(fam)
    assert time.perf_counter() - t < 10
    assert len(fam.members) == 49
    assert rep.max_deviation < 1e-10
    m = fam.members[10]
    assert abs(inner_product(fam, m, m, normalized=False) - float(1 / lam)) < 1e-10


def test_h2_gram_uniform():
    fam = family_for("heisenberg:2", Fraction(1, 3), True, 1)
    assert gram(fam).max_deviation < 1e-10


def test_mis_scaled_template_breaks_orthogonality():
    fam = copy.copy(family_for("heisenberg:1", Fraction(1), False, 1))
    fam.spec = copy.copy(fam.spec)
    fam.spec.template_scale = Fraction(2)
    fam.rep = copy.copy(fam.rep)
    fam.rep.spec = fam.spec
    assert gram(fam).max_offdiag > 0.1


def test_gabor_trig_probe_monotone_and_complete():
    f_coefs = {(k,): 1 + 0.3j * k for k in range(-2, 3)}
    fracs = []
    for R in range(4):
        fam = family_for("heisenberg:1", Fraction(1), False, R)
        fracs.append(parseval_probe(fam, trig_polynomial(fam, f_coefs))["fraction"])
    assert all(a <= b + 1e-12 for a, b in zip(fracs, fracs[1:]))
    assert fracs[0] < 0.5
    assert abs(fracs[2] - 1) < 1e-9 and abs(fracs[3] - 1) < 1e-9


def test_member_self_expansion():
    fam = family_for("dynin-folland", Fraction(1), True, 1)
    for m in (fam.members[0], fam.members[400]):
        assert abs(parseval_probe(fam, [member_as_term(fam, m)])["fraction"] - 1) < 1e-9


@pytest.mark.parametrize("name,dim", [("heisenberg:1", 5), ("heisenberg:2", 7), ("dynin-folland", 10)])
def test_matrix_oracle(name, dim):
    alg = get_builtin(name)
    orc = matrix_oracle(alg)
    assert orc.dimension == dim
    assert orc.bracket_error(alg) < 1e-14
    res = matrix_oracle_check(alg, samples=30)
    assert res["max_deviation"] < 1e-12


def test_sqrt2_gram_quasi_lattice():
    fam = family_for("example-7dim-sqrt2-corrected", Fraction(1), False, 1)
    assert algebra("example-7dim-sqrt2-corrected").radicand == 2
    assert gram(fam).max_deviation < 1e-8
