"""Built-in algebras, stored in the input JSON schema."""
from __future__ import annotations

import copy

from .algebra import LieAlgebra, from_dict
from .errors import SchemaError


def heisenberg(d: int) -> dict:
    if d < 1:
        raise SchemaError("heisenberg:d needs d >= 1")
    if d == 1:
        ys, xs = ["Y"], ["X"]
    else:
        ys = [f"Y{j}" for j in range(1, d + 1)]
        xs = [f"X{j}" for j in range(1, d + 1)]
    brackets = [{"i": x, "j": y, "coeffs": {"Z": "1"}} for x, y in zip(xs, ys)]
    weights = {"Z": 2, **{v: 1 for v in ys + xs}}
    return {"name": f"heisenberg:{d}", "labels": ["Z"] + ys + xs, "brackets": brackets,
            "gradation": weights, "polarization": ["Z"] + ys}


DYNIN_FOLLAND = {
    "name": "dynin-folland",
    "labels": ["Z", "Y1", "Y2", "Y3", "X1", "X2", "X3"],
    "brackets": [
        {"i": "Y1", "j": "X3", "coeffs": {"Z": "-1"}},
        {"i": "Y2", "j": "X2", "coeffs": {"Z": "-1"}},
        {"i": "Y3", "j": "X1", "coeffs": {"Z": "-1"}},
        {"i": "Y3", "j": "X2", "coeffs": {"Y1": "-1/2"}},
        {"i": "Y3", "j": "X3", "coeffs": {"Y2": "1/2"}},
        {"i": "X2", "j": "X3", "coeffs": {"X1": "-1"}},
    ],
    "gradation": {"Z": 3, "Y1": 2, "Y2": 2, "X1": 2, "Y3": 1, "X2": 1, "X3": 1},
    "polarization": ["Z", "Y1", "Y2", "Y3"],
}

# same algebra with X1p := Y3 and Y3p := X1, graded polarization span{Z, Y1, Y2, Y3p}
DYNIN_FOLLAND_GRADED = {
    "name": "dynin-folland-graded",
    "labels": ["Z", "Y1", "Y2", "Y3p", "X1p", "X2", "X3"],
    "brackets": [
        {"i": "Y1", "j": "X3", "coeffs": {"Z": "-1"}},
        {"i": "Y2", "j": "X2", "coeffs": {"Z": "-1"}},
        {"i": "Y3p", "j": "X1p", "coeffs": {"Z": "1"}},
        {"i": "X1p", "j": "X2", "coeffs": {"Y1": "-1/2"}},
        {"i": "X1p", "j": "X3", "coeffs": {"Y2": "1/2"}},
        {"i": "X2", "j": "X3", "coeffs": {"Y3p": "-1"}},
    ],
    "gradation": {"Z": 3, "Y1": 2, "Y2": 2, "Y3p": 2, "X1p": 1, "X2": 1, "X3": 1},
}


def _sqrt2_table(x2x4: str) -> list:
    out = [{"i": "X1", "j": f"X{j}", "coeffs": {f"X{j + 1}": "1"}} for j in range(2, 7)]
    out += [
        {"i": "X2", "j": "X3", "coeffs": {"X6": {"rat": "0", "surd": "1"}}},
        {"i": "X2", "j": "X4", "coeffs": {"X7": x2x4}},
        {"i": "X5", "j": "X2", "coeffs": {"X7": "1"}},
        {"i": "X3", "j": "X4", "coeffs": {"X7": "1"}},
    ]
    return out


# table exactly as printed; its Jacobi sum fails on (X3, X2, X1)
EXAMPLE_SQRT2 = {
    "name": "example-7dim-sqrt2",
    "labels": ["X7", "X6", "X5", "X4", "X3", "X2", "X1"],
    "radicand": 2,
    "brackets": _sqrt2_table("1"),
    "polarization": ["X7", "X6", "X5", "X4"],
}

# [X2, X4] = sqrt2 X7 restores the Jacobi identity
EXAMPLE_SQRT2_CORRECTED = {
    "name": "example-7dim-sqrt2-corrected",
    "labels": ["X7", "X6", "X5", "X4", "X3", "X2", "X1"],
    "radicand": 2,
    "brackets": _sqrt2_table({"rat": "0", "surd": "1"}),
    "polarization": ["X7", "X6", "X5", "X4"],
}

_FIXED = {
    "dynin-folland": DYNIN_FOLLAND,
    "dynin-folland-graded": DYNIN_FOLLAND_GRADED,
    "example-7dim-sqrt2": EXAMPLE_SQRT2,
    "example-7dim-sqrt2-corrected": EXAMPLE_SQRT2_CORRECTED,
}

DESCRIPTIONS = {
    "heisenberg:d": "Heisenberg algebra of dimension 2d+1, [X_j, Y_j] = Z (any d >= 1)",
    "dynin-folland": "7-dim 3-step algebra; polarization span{Z,Y1,Y2,Y3} (first realization), "
                     "--gradation default gives the graded polarization (second realization)",
    "dynin-folland-graded": "same algebra relabeled X1p := Y3, Y3p := X1 (second realization)",
    "example-7dim-sqrt2": "7-dim non-graded algebra over Q(sqrt2), table as printed",
    "example-7dim-sqrt2-corrected": "same with [X2,X4] = sqrt2 X7 so that Jacobi holds",
}


def builtin_names() -> list:
    return ["heisenberg:d"] + list(_FIXED)


def builtin_data(name: str) -> dict:
    if name.startswith("heisenberg:"):
        try:
            d = int(name.split(":", 1)[1])
        except ValueError:
            raise SchemaError(f"bad heisenberg dimension in {name!r}") from None
        return heisenberg(d)
    if name == "heisenberg":
        return heisenberg(1)
    if name not in _FIXED:
        raise SchemaError(f"unknown builtin {name!r}; try one of {builtin_names()}")
    return copy.deepcopy(_FIXED[name])


def get_builtin(name: str) -> LieAlgebra:
    return from_dict(builtin_data(name))
