"""Numerical certification of the families: inner products of members, Gram
matrices, Parseval probes, and matrix-representation oracles for the group law."""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import LieAlgebra, Subspace, is_ideal, is_subalgebra
from .errors import OracleUnavailable, QuadratureNotConverged
from .lattice import LatticeSpec, covolume
from .poly import MPoly
from .representation import Member, OnbFamily, RepFormula
from .scalar import ONE, ZERO, Scalar, to_scalar
from .symbolic import MalcevGroup

TWO_PI = 2.0 * math.pi


@dataclass
class QuadratureSpec:
    nodes_per_axis: int = 16       # floor for the per-axis heuristic
    rule: str = "gauss-legendre"
    tolerance: float = 1e-11
    max_refinements: int = 5
    max_nodes: int = 1 << 14


@dataclass
class IntegralStats:
    analytic: int = 0
    numeric: int = 0
    zero_shortcut: int = 0
    max_nodes: int = 0


# ---------------------------------------------------------------------------
# integrals of exp(2 pi i phi(v)) over boxes and triangular regions

def _e(x: float) -> complex:
    return cmath.exp(1j * TWO_PI * x)


def _box_linear(omega: float, s: float) -> complex:
    """int_0^s exp(2 pi i omega v) dv."""
    if omega == 0.0:
        return complex(s)
    x = omega * s
    return (_e(x) - 1.0) / (1j * TWO_PI * omega)


def _E_array(B, s: float):
    """s * (e^{2 pi i s B} - 1) / (2 pi i s B), vectorized, with the B -> 0 limit."""
    B = np.asarray(B, dtype=float)
    x = s * B
    out = np.empty(x.shape, dtype=complex)
    small = np.abs(x) < 1e-8
    xs = x[~small]
    out[~small] = (np.exp(1j * TWO_PI * xs) - 1.0) / (1j * TWO_PI * xs)
    xm = x[small]
    out[small] = 1.0 + 1j * math.pi * xm - (TWO_PI ** 2) * xm ** 2 / 6.0
    return s * out


def _is_integer_multiple(c: Scalar, s: Scalar) -> bool:
    return (c * s).is_integer()


def _components(phi: MPoly, var_idx):
    """Connected components of the variables under co-occurrence in monomials."""
    parent = {i: i for i in var_idx}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i
    for e in phi.terms:
        vs = [i for i in var_idx if e[i]]
        for a in vs[1:]:
            ra, rb = find(vs[0]), find(a)
            if ra != rb:
                parent[rb] = ra
    groups: dict = {}
    for i in var_idx:
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _restrict(phi: MPoly, comp) -> MPoly:
    """Terms of phi involving only variables of comp (and at least one of them)."""
    terms = {e: c for e, c in phi.terms.items()
             if any(e[i] for i in comp) and all(not e[i] or i in comp for i in range(len(e)))}
    return MPoly._raw(phi.vars, terms)


@lru_cache(maxsize=64)
def _legendre_nodes(n: int):
    return np.polynomial.legendre.leggauss(n)


def _leggauss(n: int, a: float = 0.0, b: float = 1.0):
    x, w = _legendre_nodes(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def _max_coeff(phi: MPoly) -> float:
    return max((abs(float(c)) for e, c in phi.terms.items() if any(e)), default=0.0)


def _nodes_for(phi: MPoly, quad: QuadratureSpec, s: float) -> int:
    return max(quad.nodes_per_axis, int(4 * (1 + math.ceil(_max_coeff(phi) * max(s, 1.0) ** phi.degree()))))


def _tensor_estimate(phi: MPoly, comp, n: int, s: float, affine: int | None) -> complex:
    """Tensor Gauss-Legendre over comp; the affine variable (if any) is integrated exactly."""
    axes = [i for i in comp if i != affine]
    x, w = _leggauss(n, 0.0, s)
    nv = len(phi.vars)
    if not axes:
        raise ValueError("nothing to integrate numerically")
    grids = np.meshgrid(*([x] * len(axes)), indexing="ij")
    weights = np.ones_like(grids[0])
    for g_w in np.meshgrid(*([w] * len(axes)), indexing="ij"):
        weights = weights * g_w
    pts = np.zeros(grids[0].shape + (nv,))
    for k, i in enumerate(axes):
        pts[..., i] = grids[k]
    if affine is None:
        vals = np.exp(1j * TWO_PI * phi.eval_float(pts))
    else:
        B = phi.derivative(affine)
        A = MPoly._raw(phi.vars, {e: c for e, c in phi.terms.items() if not e[affine]})
        vals = np.exp(1j * TWO_PI * A.eval_float(pts)) * _E_array(B.eval_float(pts), s)
    return complex(np.sum(vals * weights))


def _numeric_component(phi: MPoly, comp, quad: QuadratureSpec, s: float, stats: IntegralStats):
    affine = None
    for i in comp:
        if phi.degree_in(i) == 1:
            affine = i
            break
    n = _nodes_for(phi, quad, s)
    if len(comp) - (affine is not None) >= 2:
        n = min(n, int(round(quad.max_nodes ** (1.0 / (len(comp) - (affine is not None))))) * 4)
    prev = _tensor_estimate(phi, comp, n, s, affine)
    for _ in range(quad.max_refinements):
        n *= 2
        cur = _tensor_estimate(phi, comp, n, s, affine)
        stats.max_nodes = max(stats.max_nodes, n)
        if abs(cur - prev) < quad.tolerance:
            stats.numeric += 1
            return cur
        prev = cur
    raise QuadratureNotConverged(f"no convergence after {quad.max_refinements} doublings",
                                 last_estimates=[str(prev), str(cur)], nodes=n)


def _eliminate_linear(part: MPoly, comp, s_exact: Scalar, stats: IntegralStats):
    """Integrate out variables entering as omega * v_i with constant omega.

    Returns (factor, leftover pieces) or None when the integral is exactly 0."""
    sf = float(s_exact)
    factor = 1.0 + 0j
    comp = list(comp)
    while comp:
        lin = None
        for i in comp:
            if part.degree_in(i) == 1:
                B = part.derivative(i)
                if not B.support():
                    lin = (i, B.constant())
                    break
        if lin is None:
            break
        i, omega = lin
        if omega and _is_integer_multiple(omega, s_exact):
            stats.zero_shortcut += 1
            return None
        factor *= _box_linear(float(omega), sf)
        part = MPoly._raw(part.vars, {e: c for e, c in part.terms.items() if not e[i]})
        comp = [k for k in comp if k != i]
    pieces = []
    if comp:
        for c2 in _components(part, comp):
            sub = _restrict(part, c2)
            if len(c2) < len(comp) and sub.terms:
                out = _eliminate_linear(sub, c2, s_exact, stats)
                if out is None:
                    return None
                factor *= out[0]
                pieces.extend(out[1])
            elif sub.is_zero():
                factor *= sf ** len(c2)
            else:
                pieces.append((sub, c2))
    return factor, pieces


def box_integral(phi: MPoly, var_idx, quad: QuadratureSpec, s=ONE,
                 stats: IntegralStats | None = None) -> complex:
    """int over [0,s)^k of exp(2 pi i phi(v)) dv in the listed variables.

    Constant terms factor out; components integrate independently; a variable
    entering linearly with a constant coefficient is integrated exactly. A
    nonzero frequency that is an integer multiple of 1/s gives exactly 0.
    Quadrature runs only once no component vanishes exactly."""
    stats = stats if stats is not None else IntegralStats()
    s_exact = to_scalar(s)
    sf = float(s_exact)
    const = phi.constant()
    factor = _e(float(const)) if const else 1.0 + 0j
    phi = phi - MPoly.const(phi.vars, const) if const else phi
    numeric = []
    for comp in _components(phi, list(var_idx)):
        part = _restrict(phi, comp)
        if part.is_zero():
            factor *= sf ** len(comp)
            continue
        out = _eliminate_linear(part, comp, s_exact, stats)
        if out is None:
            return 0j
        factor *= out[0]
        numeric.extend(out[1])
    for part, comp in numeric:
        factor *= _numeric_component(part, comp, quad, sf, stats)
    if not numeric:
        stats.analytic += 1
    return factor


def nested_integral(phi: MPoly, w_polys, var_idx, quad: QuadratureSpec, s=ONE) -> complex:
    """int of exp(2 pi i phi(v)) over {v in [0,s)^d : w(v) in [0,s)^d}, for w triangular
    with w_j = v_j + (terms in v_1..v_{j-1}): each level's interval is exact."""
    sf = float(to_scalar(s))
    d = len(var_idx)
    nv = len(phi.vars)

    def estimate(n):
        x, wts = _legendre_nodes(n)
        # breadth-first over levels: arrays of points and weights
        pts = np.zeros((1, nv))
        weights = np.ones(1)
        for level, i in enumerate(var_idx):
            wp = w_polys[level]
            off = wp - MPoly.var(wp.vars, wp.vars[i])
            c = off.eval_float(pts) if off else np.zeros(len(pts))
            lo = np.maximum(0.0, -c)
            hi = np.minimum(sf, sf - c)
            ok = hi > lo
            pts, weights, lo, hi = pts[ok], weights[ok], lo[ok], hi[ok]
            if not len(pts):
                return 0j
            half = 0.5 * (hi - lo)
            new_pts = np.repeat(pts, n, axis=0)
            new_pts[:, i] = (lo[:, None] + half[:, None] * (x[None, :] + 1.0)).reshape(-1)
            weights = (weights[:, None] * half[:, None] * wts[None, :]).reshape(-1)
            pts = new_pts
        return complex(np.sum(weights * np.exp(1j * TWO_PI * phi.eval_float(pts))))

    n = max(quad.nodes_per_axis, min(_nodes_for(phi, quad, sf), int(quad.max_nodes ** (1.0 / max(d, 1)))))
    prev = estimate(n)
    for _ in range(quad.max_refinements):
        n *= 2
        cur = estimate(n)
        if abs(cur - prev) < quad.tolerance:
            return cur
        prev = cur
    raise QuadratureNotConverged("nested quadrature did not converge",
                                 last_estimates=[str(prev), str(cur)], nodes=n)


# ---------------------------------------------------------------------------
# members in the box coordinates v = q(t gamma)

def _eta_element(rep: RepFormula, eta) -> list:
    spec = rep.spec
    g = [ZERO] * spec.n
    for k in range(spec.d):
        g[spec.r + spec.d + k] = to_scalar(eta[spec.d - 1 - k])
    return g


class MemberCache:
    """Phases of members re-expressed in box coordinates, grouped by eta."""

    def __init__(self, fam: OnbFamily):
        self.fam = fam
        self.rep = fam.rep
        self._to_t: dict = {}
        self._phase_v: dict = {}

    def t_of_v(self, eta) -> list:
        """t = q(v eta) as polynomials in v (names reused from t)."""
        if eta not in self._to_t:
            g = _eta_element(self.rep, eta)
            _, polys = self.rep.specialize(g)
            self._to_t[eta] = polys
        return self._to_t[eta]

    def phase_v(self, m: Member, eta=None) -> MPoly:
        eta = m.eta if eta is None else eta
        key = (m.theta, m.eta, eta)
        if key not in self._phase_v:
            self._phase_v[key] = m.phase.substitute(self.t_of_v(eta))
        return self._phase_v[key]


def quotient_tile(rep: RepFormula, w) -> tuple:
    """The unique integer k with w = v . k, v in [0,1)^d, by peeling t_1 first."""
    d = rep.d
    w = [to_scalar(x) for x in w]
    k = [0] * d
    v = [ZERO] * d
    for j in range(d):
        a = rep.arg_map[j]
        tail = a - MPoly.var(a.vars, rep.t_vars[j]) - MPoly.var(a.vars, rep.g_vars[rep.h_position(j + 1)])
        g = _eta_element(rep, k)
        val = w[j] - (tail.eval(g + v) if tail else ZERO)
        k[j] = val.floor()
        v[j] = val - k[j]
    return tuple(k)


def support_anchor(rep: RepFormula, m: Member) -> list:
    """The point 0 . eta of the quotient, the corner of the support F . eta."""
    return rep.eval_arg(_eta_element(rep, m.eta), [ZERO] * rep.d)


def supports_disjoint(rep: RepFormula, a: Member, b: Member) -> bool:
    if to_scalar(rep.spec.template_scale) != ONE:
        return False
    return quotient_tile(rep, support_anchor(rep, a)) != quotient_tile(rep, support_anchor(rep, b))


def inner_product(fam: OnbFamily, a: Member, b: Member, quad: QuadratureSpec | None = None,
                  cache: MemberCache | None = None, stats: IntegralStats | None = None,
                  normalized: bool = True) -> complex:
    """<member_a, member_b> = int exp(2 pi i (phase_a - phase_b)) 1_F(shift_a) 1_F(shift_b)."""
    quad = quad or QuadratureSpec()
    cache = cache or MemberCache(fam)
    rep = fam.rep
    s = to_scalar(fam.spec.template_scale)
    d = fam.d
    idx = list(range(d))
    if s == ONE:
        if a.eta != b.eta and supports_disjoint(rep, a, b):
            if stats is not None:
                stats.zero_shortcut += 1
            return 0j
        phi = cache.phase_v(a) - cache.phase_v(b)
        box = box_integral(phi, idx, quad, ONE, stats)
    else:
        phi = cache.phase_v(a) - cache.phase_v(b, a.eta)
        # w = q(v eta_a eta_b^{-1}) must lie in the box for member b
        t = cache.t_of_v(a.eta)
        g_inv = _eta_element(rep, b.eta)
        G = fam.spec.group
        g_inv = G.inv(g_inv)
        _, arg = rep.specialize(g_inv)
        w = [p.substitute(t) for p in arg]
        box = nested_integral(phi, w, idx, quad, s)
    if normalized:
        return box / float(s ** d)
    return box * float(fam.mu_F) / float(s ** d)


@dataclass
class GramReport:
    indices: list
    matrix: np.ndarray
    max_offdiag: float
    max_diag_dev: float
    support_disjoint_pairs: int
    integrals: int
    hermitian_dev: float
    seconds: float
    stats: IntegralStats = field(default_factory=IntegralStats)

    @property
    def max_deviation(self) -> float:
        return max(self.max_offdiag, self.max_diag_dev)

    def passed(self, tol: float) -> bool:
        return self.max_deviation < tol

    def to_json(self, entries: bool = False, tol: float | None = None):
        out = {
            "members": len(self.indices),
            "max_offdiag": self.max_offdiag,
            "max_diag_dev": self.max_diag_dev,
            "max_deviation": self.max_deviation,
            "support_disjoint_pairs": self.support_disjoint_pairs,
            "integrals": self.integrals,
            "analytic": self.stats.analytic,
            "numeric": self.stats.numeric,
            "hermitian_dev": self.hermitian_dev,
        }
        if tol is not None:
            out["tolerance"] = tol
            out["passed"] = self.passed(tol)
        if entries:
            out["indices"] = [list(i) for i in self.indices]
            out["entries"] = [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]
        return out


def gram(fam: OnbFamily, quad: QuadratureSpec | None = None, members=None) -> GramReport:
    """Normalized Gram matrix; pairs with disjoint supports are set to exactly 0."""
    quad = quad or QuadratureSpec()
    start = time.perf_counter()
    mem = fam.members if members is None else members
    n = len(mem)
    cache = MemberCache(fam)
    stats = IntegralStats()
    M = np.zeros((n, n), dtype=complex)
    skipped = 0
    computed = 0
    scaled = to_scalar(fam.spec.template_scale) != ONE
    tiles = {} if scaled else {m.eta: quotient_tile(fam.rep, support_anchor(fam.rep, m)) for m in mem}
    for i in range(n):
        for j in range(i, n):
            a, b = mem[i], mem[j]
            if not scaled and tiles[a.eta] != tiles[b.eta]:
                skipped += 1
                continue
            try:
                val = inner_product(fam, a, b, quad, cache, stats)
            except QuadratureNotConverged as exc:
                exc.details["pair"] = [list(a.index), list(b.index)]
                raise
            computed += 1
            M[i, j] = val
            M[j, i] = val.conjugate()
    eye = np.eye(n)
    dev = np.abs(M - eye)
    off = dev - np.diag(np.diag(dev))
    herm = float(np.max(np.abs(M - M.conj().T))) if n else 0.0
    return GramReport([m.index for m in mem], M, float(off.max()) if n else 0.0,
                      float(np.diag(dev).max()) if n else 0.0, skipped, computed, herm,
                      time.perf_counter() - start, stats)


# ---------------------------------------------------------------------------
@dataclass
class TestTerm:
    __test__ = False          # not a pytest class
    coef: complex
    phase: MPoly              # in the quotient variables t
    eta: tuple                # support F . eta


def member_as_term(fam: OnbFamily, m: Member, coef: complex = 1.0) -> TestTerm:
    return TestTerm(coef, m.phase, m.eta)


def trig_polynomial(fam: OnbFamily, coefs: dict, eta=None) -> list:
    """sum_k c_k exp(2 pi i <k, v>) on the cell F . eta, in box coordinates v.

    ``coefs`` maps integer frequency tuples to complex coefficients."""
    d = fam.d
    eta = tuple(eta) if eta is not None else (0,) * d
    rep = fam.rep
    g = _eta_element(rep, eta)
    G = fam.spec.group
    _, v_of_t = rep.specialize(G.inv(g))
    out = []
    for k, c in coefs.items():
        ph = MPoly.zero(rep.t_vars)
        for j in range(d):
            if k[j]:
                ph = ph + v_of_t[j].scale(Scalar(k[j]))
        out.append(TestTerm(complex(c), ph, eta))
    return out


def _term_pair(fam, cache, ta: TestTerm, ph_b_v: MPoly, quad, stats):
    t = cache.t_of_v(ta.eta)
    phi = ta.phase.substitute(t) - ph_b_v
    return box_integral(phi, list(range(fam.d)), quad, ONE, stats)


def parseval_probe(fam: OnbFamily, f: list, quad: QuadratureSpec | None = None) -> dict:
    """sum |<f, member>|^2 / ||f||^2 over the truncated family."""
    quad = quad or QuadratureSpec()
    if to_scalar(fam.spec.template_scale) != ONE:
        raise ValueError("Parseval probes need the unscaled template")
    cache = MemberCache(fam)
    stats = IntegralStats()
    norm2 = 0j
    for ta in f:
        for tb in f:
            if ta.eta != tb.eta:
                continue
            phb = tb.phase.substitute(cache.t_of_v(tb.eta))
            norm2 += ta.coef * tb.coef.conjugate() * _term_pair(fam, cache, ta, phb, quad, stats)
    energy = 0.0
    by_eta = fam.by_eta()
    for ta_eta in {t.eta for t in f}:
        for idx in by_eta.get(ta_eta, []):
            m = fam.members[idx]
            phm = cache.phase_v(m)
            c = 0j
            for ta in f:
                if ta.eta == ta_eta:
                    c += ta.coef * _term_pair(fam, cache, ta, phm, quad, stats)
            energy += abs(c) ** 2
    frac = energy / norm2.real if norm2.real > 0 else float("nan")
    return {"fraction": frac, "energy": energy, "norm2": norm2.real, "radius": fam.radius}


def covolume_completeness_check(spec: LatticeSpec, d_pi) -> bool:
    """d_pi times the covolume of Sigma is 1 (equivalent to completeness)."""
    from .errors import CovolumeMismatch
    try:
        covolume(spec, to_scalar(d_pi))
    except CovolumeMismatch:
        return False
    return True


# ---------------------------------------------------------------------------
# faithful unipotent matrix representations

@dataclass
class MatrixOracle:
    dimension: int
    images: list              # numpy matrices, one per basis vector

    def bracket_error(self, alg: LieAlgebra) -> float:
        err = 0.0
        for i in range(alg.n):
            for j in range(alg.n):
                lhs = self.images[i] @ self.images[j] - self.images[j] @ self.images[i]
                rhs = np.zeros_like(lhs)
                for k, c in alg.c(i, j).items():
                    rhs = rhs + float(c) * self.images[k]
                err = max(err, float(np.max(np.abs(lhs - rhs))))
        return err

    def element(self, t) -> np.ndarray:
        """exp(t_1 X_1) ... exp(t_n X_n)."""
        acc = np.eye(self.dimension)
        for x, A in zip(t, self.images):
            acc = acc @ nil_expm(float(x) * A)
        return acc

    def exp_vector(self, v) -> np.ndarray:
        A = sum(float(x) * B for x, B in zip(v, self.images))
        return nil_expm(A)


def nil_expm(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, n + 1):
        term = term @ A / k
        if not term.any():
            break
        out = out + term
    return out


def nil_logm(U: np.ndarray) -> np.ndarray:
    n = U.shape[0]
    N = U - np.eye(n)
    out = np.zeros_like(U)
    term = np.eye(n)
    for k in range(1, n + 1):
        term = term @ N
        if not term.any():
            break
        out = out + ((-1) ** (k + 1)) * term / k
    return out


def _quotient_by_prefix(alg: LieAlgebra, p: int) -> LieAlgebra:
    labels = alg.labels[p:]
    table = {}
    for (i, j) in alg.nonzero_pairs():
        if i >= p and j >= p:
            coeffs = {k - p: c for k, c in alg.c(i, j).items() if k >= p}
            if coeffs:
                table[(i - p, j - p)] = coeffs
    return LieAlgebra(labels, table, alg.radicand)


def matrix_oracle(alg: LieAlgebra) -> MatrixOracle:
    """Affine action of a complemented abelian prefix ideal, plus a representation of
    the complement (the quotient) built the same way."""
    n = alg.n
    if all(not alg.c(i, j) for i in range(n) for j in range(n)):
        dim = n + 1
        imgs = []
        for i in range(n):
            A = np.zeros((dim, dim))
            A[i, n] = 1.0
            imgs.append(A)
        return MatrixOracle(dim, imgs)
    for p in range(n - 1, 0, -1):
        m = Subspace([alg.basis_vector(i) for i in range(p)], n)
        comp = Subspace([alg.basis_vector(i) for i in range(p, n)], n)
        if not is_ideal(alg, m) or not is_subalgebra(alg, comp):
            continue
        if any(alg.c(i, j) for i in range(p) for j in range(p)):
            continue
        sub = matrix_oracle(_quotient_by_prefix(alg, p))
        dim = p + 1 + sub.dimension
        imgs = []
        for i in range(n):
            A = np.zeros((dim, dim))
            if i < p:
                A[i, p] = 1.0
            else:
                for j in range(p):
                    for k, c in alg.c(i, j).items():
                        A[k, j] = float(c)
                A[p + 1:, p + 1:] = sub.images[i - p]
            imgs.append(A)
        oracle = MatrixOracle(dim, imgs)
        if oracle.bracket_error(alg) > 1e-12:
            continue
        return oracle
    raise OracleUnavailable("no complemented abelian prefix ideal; no stored faithful representation")


def matrix_oracle_check(alg: LieAlgebra, samples: int = 100, seed: int = 0, scale: float = 1.0) -> dict:
    """Compare the symbolic group law with matrix products at random points."""
    oracle = matrix_oracle(alg)
    G = MalcevGroup(alg)
    law = G.law.polys
    rng = np.random.default_rng(seed)
    dev = 0.0
    for _ in range(samples):
        t = rng.uniform(-scale, scale, alg.n)
        s = rng.uniform(-scale, scale, alg.n)
        pt = np.concatenate([t, s])
        prod = np.array([p.eval_float(pt) for p in law])
        lhs = oracle.element(t) @ oracle.element(s)
        rhs = oracle.element(prod)
        dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    return {"dimension": oracle.dimension, "samples": samples,
            "bracket_error": oracle.bracket_error(alg), "max_deviation": dev}
