from fractions import Fraction

import pytest

from nilonb.algebra import from_dict
from nilonb.builtins import get_builtin
from nilonb.errors import SchemaError
from nilonb.gradation import validate_gradation
from nilonb.pipeline import AnalysisRequest, StageError, analyze, central_functional, run_verify, transport
from nilonb.scalar import Scalar
from nilonb.verify import gram


def test_graded_builtin_routes_through_its_gradation():
    rep, _ = analyze(AnalysisRequest("dynin-folland-graded", radius=0))
    assert rep["polarization"]["source"] == "gradation:default"
    assert rep["polarization"]["labels"] == ["Z", "Y1", "Y2", "Y3p"]


def test_gradation_request_on_first_realization():
    rep, _ = analyze(AnalysisRequest("dynin-folland", gradation="default", radius=0))
    assert rep["polarization"]["labels"] == ["Z", "Y1", "Y2", "X1"]


def test_second_kind_inverse_flag_reported():
    rep, _ = analyze(AnalysisRequest("heisenberg:1", radius=0))
    flag = rep["flags"][0]
    assert flag["flag"] == "second_kind_inverse_identity"
    assert flag["residuals"] == {"Z": "-y*xt1"}


def test_central_functional_requires_one_dim_center():
    with pytest.raises(SchemaError):
        central_functional(from_dict({"labels": ["A", "B"], "brackets": []}), "1")
    l = central_functional(get_builtin("dynin-folland"), "2/5")
    assert l.coords[0] == Scalar(Fraction(2, 5))


def test_stage_error_names_stage():
    with pytest.raises(StageError) as exc:
        analyze(AnalysisRequest("example-7dim-sqrt2-corrected", mode="uniform", radius=0))
    assert exc.value.stage == "lattice"


def test_run_verify_small():
    rep, _, passed = run_verify(AnalysisRequest("heisenberg:2", lam="1/3", radius=1, mode="uniform"))
    assert passed and rep["gram"]["passed"]
    assert all(abs(p["fraction"] - 1) < 1e-9 for p in rep["parseval"]["self_expansion"])


def test_transport_heisenberg():
    _, ctx = analyze(AnalysisRequest("heisenberg:1", lam="1/3", radius=0))
    out = transport(ctx, validate_gradation(ctx.alg, "default"), 3, radius=2)
    assert out["functional"].coords[0] == Scalar(3)
    assert out["same_structure"] and out["automorphism"]
    assert gram(out["family"]).max_deviation < 1e-10
