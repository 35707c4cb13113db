import json

import pytest

from nilonb.algebra import (Subspace, center, check_valid, from_dict, is_ideal, load, validate,
                            verify_strong_malcev)
from nilonb.builtins import builtin_names, get_builtin
from nilonb.errors import JacobiFail, LoadError, NotNilpotent, SchemaError
from nilonb.scalar import Scalar


def H1_DATA():
    return {"labels": ["Z", "Y", "X"], "brackets": [{"i": "X", "j": "Y", "coeffs": {"Z": 1}}]}


def test_heisenberg_structure():
    h = from_dict(H1_DATA())
    assert validate(h).passed
    assert h.step == 2
    assert center(h).dim == 1
    x, y = h.basis_vector(2), h.basis_vector(1)
    assert h.bracket(x, y) == [Scalar(1), Scalar(0), Scalar(0)]
    assert h.bracket(y, x) == [Scalar(-1), Scalar(0), Scalar(0)]


@pytest.mark.parametrize("name", ["heisenberg:1", "heisenberg:3", "dynin-folland",
                                  "dynin-folland-graded", "example-7dim-sqrt2-corrected"])
def test_builtins_are_nilpotent_lie_algebras(name):
    alg = get_builtin(name)
    rep = validate(alg)
    assert rep.passed, rep.to_json()
    assert center(alg).dim == 1


def test_steps():
    assert get_builtin("dynin-folland").step == 3
    assert get_builtin("example-7dim-sqrt2-corrected").step == 6


def test_verbatim_sqrt2_table_fails_jacobi_with_witness():
    rep = validate(get_builtin("example-7dim-sqrt2"))
    assert not rep.jacobi
    assert rep.witness["triple"] == ["X3", "X2", "X1"]
    assert rep.witness["residual"] == {"X7": str(Scalar(1, -1, 2))}
    with pytest.raises(JacobiFail):
        check_valid(get_builtin("example-7dim-sqrt2"))


def test_jacobi_failure_detected():
    data = {"labels": ["A", "B", "C", "D"], "brackets": [
        {"i": "A", "j": "B", "coeffs": {"C": 1}}, {"i": "A", "j": "C", "coeffs": {"D": 1}},
        {"i": "B", "j": "C", "coeffs": {"D": 1}}, {"i": "A", "j": "D", "coeffs": {"D": 1}}]}
    assert not validate(from_dict(data)).passed


def test_non_nilpotent_rejected():
    data = {"labels": ["X", "Y"], "brackets": [{"i": "X", "j": "Y", "coeffs": {"Y": 1}}]}
    rep = validate(from_dict(data))
    assert rep.jacobi and not rep.nilpotent
    with pytest.raises(NotNilpotent):
        check_valid(from_dict(data))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("labels"),
    lambda d: d.update(dim=5),
    lambda d: d.update(radicand=4),
    lambda d: d["brackets"].append({"i": "X", "j": "W", "coeffs": {"Z": 1}}),
    lambda d: d["brackets"].append({"i": "X", "j": "Y", "coeffs": {"Z": "abc"}}),
    lambda d: d["brackets"].append({"i": "X", "j": "X", "coeffs": {"Z": 1}}),
])
def test_schema_errors(mutate):
    data = H1_DATA()
    mutate(data)
    with pytest.raises(LoadError):
        from_dict(data)


def test_conflicting_duplicate_bracket():
    data = H1_DATA()
    data["brackets"].append({"i": "Y", "j": "X", "coeffs": {"Z": 1}})
    with pytest.raises(LoadError):
        from_dict(data)
    data = H1_DATA()
    data["brackets"].append({"i": "Y", "j": "X", "coeffs": {"Z": -1}})
    assert from_dict(data).c(2, 1)[0] == 1


def test_load_from_file(tmp_path):
    path = tmp_path / "h.json"
    path.write_text(json.dumps(H1_DATA()))
    assert list(load(path).labels) == ["Z", "Y", "X"]
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(LoadError):
        load(bad)


def test_strong_malcev_orderings():
    df = get_builtin("dynin-folland")
    assert verify_strong_malcev(df)
    assert not verify_strong_malcev(df, ["X3", "Z", "Y1", "Y2", "Y3", "X1", "X2"])
    assert is_ideal(df, Subspace.from_labels(df, ["Z", "Y1", "Y2", "Y3"]))
    assert not is_ideal(df, Subspace.from_labels(df, ["Z", "X3"]))


def test_builtin_listing():
    names = builtin_names()
    assert "dynin-folland" in names and "heisenberg:d" in names
    with pytest.raises(SchemaError):
        get_builtin("nope")
