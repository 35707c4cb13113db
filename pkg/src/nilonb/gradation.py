"""Graded algebras: weight checks, dilations and the polarizations and orbit-adapted
bases available when the center is one-dimensional."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg as la
from .algebra import (
    BasisChange,
    Functional,
    LieAlgebra,
    Subspace,
    center,
    change_basis,
    is_ideal,
    verify_strong_malcev,
)
from .errors import CenterNotOneDim, DegenerateForm, GradationViolation, NoChRBasis, SchemaError
from .orbit import ChRBasis, as_functional, check_central, check_q_shape, is_polarization, orbit_polys
from .scalar import ONE, ZERO, Scalar, to_scalar


@dataclass
class Gradation:
    weights: tuple            # weight per basis index
    name: str = "default"
    N: int = field(init=False)
    summand_dims: dict = field(init=False)
    top_central: bool = True

    def __post_init__(self):
        self.N = max(self.weights) if self.weights else 0
        dims: dict = {}
        for w in self.weights:
            dims[w] = dims.get(w, 0) + 1
        self.summand_dims = dict(sorted(dims.items()))

    @property
    def N0(self) -> int:
        return self.N // 2

    def indices(self, k: int) -> list:
        return [i for i, w in enumerate(self.weights) if w == k]

    def summand(self, alg: LieAlgebra, k: int) -> list:
        return [alg.basis_vector(i) for i in self.indices(k)]

    def tail(self, alg: LieAlgebra, k0: int) -> Subspace:
        return Subspace([alg.basis_vector(i) for i, w in enumerate(self.weights) if w >= k0], alg.n)

    def to_json(self, alg: LieAlgebra | None = None):
        out = {"name": self.name, "N": self.N, "N0": self.N0,
               "summand_dims": {str(k): v for k, v in self.summand_dims.items()}}
        if alg is not None:
            out["weights"] = {alg.labels[i]: w for i, w in enumerate(self.weights)}
        return out


def _weights_tuple(alg: LieAlgebra, weights) -> tuple:
    if isinstance(weights, str):
        if weights not in alg.gradations:
            raise SchemaError(f"unknown gradation {weights!r}; available: {sorted(alg.gradations)}")
        weights = alg.gradations[weights]
    if isinstance(weights, dict):
        missing = [lab for lab in alg.labels if lab not in weights]
        if missing:
            raise SchemaError(f"gradation misses weights for {missing}")
        return tuple(int(weights[lab]) for lab in alg.labels)
    return tuple(int(w) for w in weights)


def validate_gradation(alg: LieAlgebra, weights, name: str = "default") -> Gradation:
    if isinstance(weights, str):
        name = weights
    w = _weights_tuple(alg, weights)
    for (i, j) in alg.nonzero_pairs():
        if i >= j:
            continue
        target = w[i] + w[j]
        for k in alg.c(i, j):
            if w[k] != target:
                raise GradationViolation(
                    f"[{alg.labels[i]},{alg.labels[j]}] has a component on {alg.labels[k]} "
                    f"of weight {w[k]}, expected {target}",
                    pair=[alg.labels[i], alg.labels[j]], component=alg.labels[k])
    grad = Gradation(w, name)
    z = center(alg)
    grad.top_central = all(z.contains(v) for v in grad.summand(alg, grad.N))
    if not grad.top_central:
        raise GradationViolation("top summand is not central")
    return grad


@dataclass
class Dilation:
    s: Scalar
    diagonal: tuple

    def apply(self, v):
        return [x * c for x, c in zip(v, self.diagonal)]

    def compose(self, other: "Dilation") -> "Dilation":
        return Dilation(self.s * other.s, tuple(a * b for a, b in zip(self.diagonal, other.diagonal)))

    def is_automorphism(self, alg: LieAlgebra) -> bool:
        for i in range(alg.n):
            for j in range(i + 1, alg.n):
                lhs = self.apply(alg.bracket(alg.basis_vector(i), alg.basis_vector(j)))
                rhs = alg.bracket(self.apply(alg.basis_vector(i)), self.apply(alg.basis_vector(j)))
                if lhs != rhs:
                    return False
        return True


def dilation(grad: Gradation, s) -> Dilation:
    s = to_scalar(s)
    return Dilation(s, tuple(s ** w for w in grad.weights))


def dilate(alg: LieAlgebra, grad: Gradation, s, l=None, basis=None):
    """delta_s together with the transported functional l o delta_s and, if a homogeneous
    basis is given, the transported lattice basis delta_{1/s}(W_j)."""
    s = to_scalar(s)
    if not s:
        raise ValueError("dilation parameter must be nonzero")
    dil = dilation(grad, s)
    out = {"dilation": dil}
    if l is not None:
        l = as_functional(alg, l)
        out["functional"] = Functional([x * c for x, c in zip(l.coords, dil.diagonal)])
    if basis is not None:
        inv = dilation(grad, s.inverse())
        out["basis"] = [inv.apply(v) for v in basis]
    return out


def vector_weight(grad: Gradation, v) -> int | None:
    ws = {grad.weights[i] for i, x in enumerate(v) if x}
    return ws.pop() if len(ws) == 1 else None


def symplectic_gram_schmidt(alg: LieAlgebra, l: Functional, vecs: list):
    """Pairs (Y_j, X_j) with l([Y_j, X_k]) = delta and isotropic blocks."""
    form = lambda u, v: l(alg.bracket(u, v))
    rest = [list(v) for v in vecs]
    Ys, Xs = [], []
    while rest:
        u = rest.pop(0)
        k = next((i for i, v in enumerate(rest) if form(u, v)), None)
        if k is None:
            raise DegenerateForm("l([., .]) is degenerate on the middle summand")
        v = rest.pop(k)
        c = form(u, v)
        x = [a / c for a in v]
        new_rest = []
        for w in rest:
            a, b = form(w, x), form(w, u)
            new_rest.append([wi - a * ui + b * xi for wi, ui, xi in zip(w, u, x)])
        rest = new_rest
        Ys.append(u)
        Xs.append(x)
    return Ys, Xs


@dataclass
class GradedSplit:
    m: Subspace
    levels: list        # per k = 0..N0: (V basis of g_{N-k}, W basis of g_k or None)


def _graded_split(alg: LieAlgebra, grad: Gradation, l: Functional) -> GradedSplit:
    z = center(alg)
    if z.dim != 1:
        raise CenterNotOneDim(f"center has dimension {z.dim}")
    if not any(l(v) for v in z.basis):
        raise DegenerateForm("functional vanishes on the center")
    N, N0 = grad.N, grad.N0
    levels = [(grad.summand(alg, N), None)]
    odd = N % 2 == 1
    mid_pairs = None
    if not odd and grad.summand(alg, N0):
        Ys, Xs = symplectic_gram_schmidt(alg, l, grad.summand(alg, N0))
        mid_pairs = (Ys, Xs)
    top_k = N0 if odd else N0 - 1
    for k in range(1, top_k + 1):
        V, W = grad.summand(alg, N - k), grad.summand(alg, k)
        if len(V) != len(W):
            raise DegenerateForm(f"dim g_{N - k} != dim g_{k}")
        levels.append((V, W))
    if mid_pairs is not None:
        levels.append((mid_pairs[0], mid_pairs[1]))
    gens = [v for V, _ in levels for v in V]
    return GradedSplit(Subspace(gens, alg.n), levels)


def polarization_from_gradation(alg: LieAlgebra, grad: Gradation, l) -> Subspace:
    l = as_functional(alg, l)
    split = _graded_split(alg, grad, l)
    m = split.m
    if not is_ideal(alg, m) or not is_polarization(alg, l, m):
        raise DegenerateForm("graded candidate is not a polarizing ideal")
    return m


def chr_basis_graded(alg: LieAlgebra, grad: Gradation, l) -> ChRBasis:
    l = as_functional(alg, l)
    z = center(alg)
    check_central(alg, l, z)
    split = _graded_split(alg, grad, l)
    Zs = split.levels[0][0]
    Ys, Xt = [], []
    for V, W in split.levels[1:]:
        C = [[l(alg.bracket(w, v)) for v in V] for w in W]
        try:
            Cinv = la.inverse(C)
        except Exception:
            raise NoChRBasis("pairing block is singular") from None
        Wt = [[sum((Cinv[j][k] * W[k][i] for k in range(len(W))), ZERO) for i in range(alg.n)]
              for j in range(len(W))]
        Ys.extend(V)
        Xt.extend(Wt)
    r, d = len(Zs), len(Ys)
    ordered = [list(v) for v in Zs + Ys] + [Xt[d - 1 - k] for k in range(d)]
    if not verify_strong_malcev(alg, ordered):
        raise NoChRBasis("union of graded bases is not strong Malcev")
    A_t = [[l(alg.bracket(x, y)) for y in Ys] for x in Xt]
    if any(A_t[j][k] != (ONE if j == k else ZERO) for j in range(d) for k in range(d)):
        raise NoChRBasis("graded recombination is not distinguished")
    from .orbit import _label_for

    labels = [("Z" if r == 1 else f"Z{i + 1}") for i in range(r)]
    labels += [_label_for(alg, v, f"Y{i + 1}") for i, v in enumerate(Ys)]
    labels += [f"Xt{d - k}" for k in range(d)]
    if len(set(labels)) != len(labels):
        labels = labels[:r] + [f"Y{i + 1}" for i in range(d)] + labels[r + d:]
    change = BasisChange(ordered)
    new_alg = change_basis(alg, change, labels)
    l_new = change.functional(l)
    Q, _ = orbit_polys(new_alg, l_new.coords, r, d)
    A = [[l(alg.bracket(x, y)) for y in Ys] for x in [ordered[r + d + d - 1 - j] for j in range(d)]]
    out = ChRBasis(ordered, tuple(labels), r, d, l, A, A_t, Q, change, new_alg, True,
                   {"gradation": grad.name})
    check_q_shape(Q)
    return out


def rational_compat_check(alg: LieAlgebra, grad: Gradation) -> bool:
    """Rational stored basis passing through every tail ideal of the gradation."""
    if not alg.is_rational():
        return False
    for k0 in range(grad.N, 0, -1):
        if not is_ideal(alg, grad.tail(alg, k0)):
            return False
    return True


def pairing_dims(alg: LieAlgebra, grad: Gradation, l) -> dict:
    """Rank of l([g_k, g_{N-k}]) for k = 1..N0, with dim g_k and dim g_{N-k}."""
    l = as_functional(alg, l)
    out = {}
    for k in range(1, grad.N0 + 1):
        A, B = grad.summand(alg, k), grad.summand(alg, grad.N - k)
        mat = [[l(alg.bracket(a, b)) for b in B] for a in A]
        out[k] = {"dim_k": len(A), "dim_N_minus_k": len(B), "rank": la.rank(mat) if mat else 0}
    return out
