"""Nilpotent Lie algebras given by structure constants."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import linalg as la
from .errors import (
    AntisymmetryFail,
    BasisMismatch,
    JacobiFail,
    LoadError,
    NotNilpotent,
    SchemaError,
    SingularMatrix,
)
from .scalar import ONE, ZERO, Scalar, parse_scalar, squarefree, to_scalar

Vector = list  # list[Scalar]


class LieAlgebra:
    """Structure constants c[i][j] = {k: c_ij^k} for an ordered basis."""

    def __init__(self, labels: Sequence[str], table: dict, radicand: int = 1,
                 gradations: dict | None = None, meta: dict | None = None):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.radicand = radicand
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != self.n:
            raise SchemaError("duplicate basis labels")
        # table maps (i, j) -> {k: coef}; stored for both orders
        self._c: dict[tuple[int, int], dict[int, Scalar]] = {}
        for (i, j), coeffs in table.items():
            clean = {k: to_scalar(v) for k, v in coeffs.items() if v}
            if clean:
                self._c[(i, j)] = clean
        self.gradations = dict(gradations or {})
        self.meta = dict(meta or {})
        self._step = None

    # basic access -------------------------------------------------------
    def c(self, i: int, j: int) -> dict[int, Scalar]:
        return self._c.get((i, j), {})

    def nonzero_pairs(self):
        return sorted(self._c)

    def structure_items(self):
        """(i, j, k, c) with i < j for every nonzero constant."""
        for (i, j), coeffs in sorted(self._c.items()):
            if i < j:
                for k, v in sorted(coeffs.items()):
                    yield i, j, k, v

    def basis_vector(self, i: int) -> Vector:
        v = [ZERO] * self.n
        v[i] = ONE
        return v

    def vector(self, coords: dict) -> Vector:
        v = [ZERO] * self.n
        for lab, x in coords.items():
            v[self.index[lab]] = to_scalar(x) if not isinstance(x, str) else parse_scalar(x, self.radicand)
        return v

    def bracket(self, u: Vector, v: Vector) -> Vector:
        out = [ZERO] * self.n
        nu = [(i, x) for i, x in enumerate(u) if x]
        nv = [(j, y) for j, y in enumerate(v) if y]
        for i, x in nu:
            for j, y in nv:
                cij = self._c.get((i, j))
                if cij:
                    xy = x * y
                    for k, c in cij.items():
                        out[k] = out[k] + c * xy
        return out

    def ad_matrix(self, u: Vector):
        """Matrix of ad(u) acting on column coordinate vectors."""
        cols = [self.bracket(u, self.basis_vector(j)) for j in range(self.n)]
        return la.transpose(cols)

    def is_rational(self) -> bool:
        return all(c.is_rational() for coeffs in self._c.values() for c in coeffs.values())

    # structure ------------------------------------------------------------
    def lower_central_series(self) -> list["Subspace"]:
        series = [Subspace.full(self.n)]
        for _ in range(self.n + 1):
            cur = series[-1]
            gens = []
            for i in range(self.n):
                e = self.basis_vector(i)
                for v in cur.basis:
                    w = self.bracket(e, v)
                    if any(w):
                        gens.append(w)
            nxt = Subspace(gens, self.n)
            series.append(nxt)
            if nxt.dim == 0 or nxt.dim == cur.dim:
                break
        return series

    @property
    def step(self) -> int:
        if self._step is None:
            series = self.lower_central_series()
            if series[-1].dim != 0:
                raise NotNilpotent("lower central series stabilizes at a nonzero ideal",
                                   dim=series[-1].dim)
            self._step = len(series) - 1
        return self._step

    def to_json(self) -> dict:
        brackets = []
        for (i, j), coeffs in sorted(self._c.items()):
            if i < j:
                brackets.append({
                    "i": self.labels[i], "j": self.labels[j],
                    "coeffs": {self.labels[k]: v.to_json() if v.is_rational() else
                               {"rat": str(v.a), "surd": str(v.b)}
                               for k, v in sorted(coeffs.items())},
                })
        out = {"dim": self.n, "labels": list(self.labels), "radicand": self.radicand,
               "brackets": brackets}
        if self.gradations:
            if list(self.gradations) == ["default"]:
                out["gradation"] = dict(self.gradations["default"])
            else:
                out["gradations"] = {k: dict(v) for k, v in self.gradations.items()}
        return out

    def __repr__(self):
        return f"LieAlgebra({', '.join(self.labels)})"


# ---------------------------------------------------------------------------
@dataclass
class Subspace:
    generators: list
    n: int
    basis: list = field(init=False)
    pivots: list = field(init=False)

    def __post_init__(self):
        gens = [list(g) for g in self.generators if any(g)]
        self.basis, self.pivots = la.rref(gens) if gens else ([], [])

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(la.identity(n), n)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls([], n)

    @classmethod
    def from_labels(cls, alg: LieAlgebra, labels: Iterable[str]) -> "Subspace":
        try:
            return cls([alg.basis_vector(alg.index[lab]) for lab in labels], alg.n)
        except KeyError as exc:
            raise SchemaError(f"unknown label {exc.args[0]!r}") from None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        return la.in_span(self.basis, self.pivots, v)

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.dim == other.dim and self.contains_space(other)

    def to_json(self, alg: LieAlgebra | None = None):
        return [[str(x) for x in v] for v in self.basis]


@dataclass
class Functional:
    coords: list

    def __call__(self, v) -> Scalar:
        return la.dot(self.coords, v)

    def to_json(self):
        return [str(x) for x in self.coords]


@dataclass
class BasisChange:
    """Rows of ``matrix`` are the new basis vectors in old coordinates."""
    matrix: list
    det: Scalar = field(init=False)

    def __post_init__(self):
        self.matrix = la.as_matrix(self.matrix)
        self.det = la.det(self.matrix)
        if not self.det:
            raise SingularMatrix("basis change is singular")

    @property
    def inverse_matrix(self):
        return la.inverse(self.matrix)

    def then(self, other: "BasisChange") -> "BasisChange":
        """Change by self, then by other (whose rows use self's coordinates)."""
        return BasisChange(la.matmul(other.matrix, self.matrix))

    def to_new(self, v_old):
        """Coordinates of a vector with respect to the new basis."""
        return la.vecmat(v_old, self.inverse_matrix)

    def to_old(self, v_new):
        return la.vecmat(v_new, self.matrix)

    def functional(self, l: Functional) -> Functional:
        return Functional(la.matvec(self.matrix, l.coords))


# ---------------------------------------------------------------------------
@dataclass
class ValidationReport:
    antisymmetric: bool = True
    jacobi: bool = True
    nilpotent: bool = True
    step: int | None = None
    witness: dict | None = None
    errors: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.antisymmetric and self.jacobi and self.nilpotent

    def to_json(self):
        return {"passed": self.passed, "antisymmetric": self.antisymmetric,
                "jacobi": self.jacobi, "nilpotent": self.nilpotent, "step": self.step,
                "witness": self.witness, "errors": self.errors}


def jacobi_residual(alg: LieAlgebra, i: int, j: int, k: int) -> Vector:
    e = alg.basis_vector
    a = alg.bracket(e(i), alg.bracket(e(j), e(k)))
    b = alg.bracket(e(j), alg.bracket(e(k), e(i)))
    c = alg.bracket(e(k), alg.bracket(e(i), e(j)))
    return [x + y + z for x, y, z in zip(a, b, c)]


def validate(alg: LieAlgebra) -> ValidationReport:
    rep = ValidationReport()
    n = alg.n
    lab = alg.labels
    for i in range(n):
        for j in range(i, n):
            cij, cji = alg.c(i, j), alg.c(j, i)
            keys = set(cij) | set(cji)
            if any(cij.get(k, ZERO) + cji.get(k, ZERO) for k in keys):
                rep.antisymmetric = False
                rep.witness = {"pair": [lab[i], lab[j]]}
                rep.errors.append(AntisymmetryFail(f"[{lab[i]},{lab[j]}] not antisymmetric").to_dict())
                return rep
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                res = jacobi_residual(alg, i, j, k)
                if any(res):
                    rep.jacobi = False
                    resid = {lab[m]: str(x) for m, x in enumerate(res) if x}
                    rep.witness = {"triple": [lab[i], lab[j], lab[k]], "residual": resid}
                    rep.errors.append(JacobiFail(
                        f"Jacobi identity fails for ({lab[i]}, {lab[j]}, {lab[k]})",
                        triple=[lab[i], lab[j], lab[k]], residual=resid).to_dict())
                    return rep
    try:
        rep.step = alg.step
    except NotNilpotent as exc:
        rep.nilpotent = False
        rep.errors.append(exc.to_dict())
    return rep


def check_valid(alg: LieAlgebra) -> int:
    """Raise the first validation failure; return the step otherwise."""
    rep = validate(alg)
    if not rep.antisymmetric:
        raise AntisymmetryFail("structure constants are not antisymmetric", **rep.witness)
    if not rep.jacobi:
        raise JacobiFail(rep.errors[0]["message"], **rep.witness)
    if not rep.nilpotent:
        raise NotNilpotent("algebra is not nilpotent")
    return rep.step


def center(alg: LieAlgebra) -> Subspace:
    rows = []
    for i in range(alg.n):
        ad = alg.ad_matrix(alg.basis_vector(i))
        rows.extend(r for r in ad if any(r))
    return Subspace(la.nullspace(rows, alg.n) if rows else la.identity(alg.n), alg.n)


def is_ideal(alg: LieAlgebra, s: Subspace) -> bool:
    for i in range(alg.n):
        e = alg.basis_vector(i)
        for v in s.basis:
            if not s.contains(alg.bracket(e, v)):
                return False
    return True


def is_subalgebra(alg: LieAlgebra, s: Subspace) -> bool:
    return all(s.contains(alg.bracket(u, v)) for u in s.basis for v in s.basis)


def ordering_vectors(alg: LieAlgebra, ordering) -> list:
    """Accept a permutation of indices or labels, or a list of vectors."""
    out = []
    for item in ordering:
        if isinstance(item, int):
            out.append(alg.basis_vector(item))
        elif isinstance(item, str):
            out.append(alg.basis_vector(alg.index[item]))
        else:
            out.append([to_scalar(x) for x in item])
    return out


def verify_strong_malcev(alg: LieAlgebra, ordering=None) -> bool:
    vecs = ordering_vectors(alg, range(alg.n) if ordering is None else ordering)
    if len(vecs) != alg.n or la.rank(vecs) != alg.n:
        return False
    for m in range(1, alg.n):
        if not is_ideal(alg, Subspace(vecs[:m], alg.n)):
            return False
    return True


def change_basis(alg: LieAlgebra, S: BasisChange, labels: Sequence[str] | None = None) -> LieAlgebra:
    rows = S.matrix
    inv = S.inverse_matrix
    n = alg.n
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            w = alg.bracket(rows[i], rows[j])
            if not any(w):
                continue
            new = la.vecmat(w, inv)
            coeffs = {k: x for k, x in enumerate(new) if x}
            table[(i, j)] = coeffs
            table[(j, i)] = {k: -x for k, x in coeffs.items()}
    new_alg = LieAlgebra(labels or alg.labels, table, alg.radicand, meta={"basis_det": str(S.det)})
    return new_alg


def same_structure(a: LieAlgebra, b: LieAlgebra) -> bool:
    if a.n != b.n:
        return False
    return all(a.c(i, j) == b.c(i, j) for i in range(a.n) for j in range(a.n))


# ---------------------------------------------------------------------------
def from_dict(data: dict) -> LieAlgebra:
    if not isinstance(data, dict):
        raise SchemaError("algebra JSON must be an object")
    for key in ("labels", "brackets"):
        if key not in data:
            raise SchemaError(f"missing field {key!r}")
    labels = data["labels"]
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise SchemaError("field 'labels' must be a list of strings")
    n = data.get("dim", len(labels))
    if n != len(labels):
        raise SchemaError(f"field 'dim' is {n} but {len(labels)} labels are given")
    radicand = data.get("radicand", 1)
    if not isinstance(radicand, int) or not squarefree(radicand):
        raise SchemaError(f"radicand must be a square-free natural number, got {radicand!r}")
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != n:
        raise SchemaError("duplicate basis labels")
    table: dict = {}
    for pos, entry in enumerate(data["brackets"]):
        where = f"brackets[{pos}]"
        if not isinstance(entry, dict) or not {"i", "j", "coeffs"} <= set(entry):
            raise SchemaError(f"{where}: needs fields 'i', 'j', 'coeffs'")
        try:
            i, j = index[entry["i"]], index[entry["j"]]
        except KeyError as exc:
            raise SchemaError(f"{where}: unknown label {exc.args[0]!r}") from None
        coeffs = {}
        for lab, val in entry["coeffs"].items():
            if lab not in index:
                raise SchemaError(f"{where}.coeffs: unknown label {lab!r}")
            try:
                coeffs[index[lab]] = parse_scalar(val, radicand)
            except SchemaError as exc:
                raise SchemaError(f"{where}.coeffs.{lab}: {exc}") from None
        coeffs = {k: v for k, v in coeffs.items() if v}
        if i == j:
            if coeffs:
                raise SchemaError(f"{where}: [{entry['i']},{entry['i']}] must vanish")
            continue
        neg = {k: -v for k, v in coeffs.items()}
        for key, val in (((i, j), coeffs), ((j, i), neg)):
            if key in table and table[key] != val:
                raise LoadError(f"{where}: conflicting duplicate bracket "
                                f"[{labels[key[0]]},{labels[key[1]]}]")
            table[key] = val
    gradations = {}
    if "gradation" in data and data["gradation"] is not None:
        gradations["default"] = _parse_weights(data["gradation"], index)
    for name, weights in (data.get("gradations") or {}).items():
        gradations[name] = _parse_weights(weights, index)
    meta = {}
    if "center_hint" in data:
        meta["center_hint"] = list(data["center_hint"])
    if "polarization" in data:
        meta["polarization"] = list(data["polarization"])
    if "name" in data:
        meta["name"] = data["name"]
    return LieAlgebra(labels, table, radicand, gradations, meta)


def _parse_weights(weights, index) -> dict:
    if not isinstance(weights, dict):
        raise SchemaError("gradation must map labels to weights")
    out = {}
    for lab, k in weights.items():
        if lab not in index:
            raise SchemaError(f"gradation: unknown label {lab!r}")
        if not isinstance(k, int) or k < 1:
            raise SchemaError(f"gradation: weight of {lab!r} must be a positive integer")
        out[lab] = k
    if set(out) != set(index):
        missing = sorted(set(index) - set(out))
        raise SchemaError(f"gradation: missing weights for {missing}")
    return out


def load(path) -> LieAlgebra:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_dict(data)


def require_same_basis(a_tag, b_tag):
    if a_tag != b_tag:
        raise BasisMismatch(f"coordinates in basis {a_tag!r} used with basis {b_tag!r}")
