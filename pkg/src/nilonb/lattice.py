"""Quasi-lattices, uniform subgroups and their fundamental domains in strong Malcev
coordinates."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from . import linalg as la
from .algebra import (
    BasisChange,
    LieAlgebra,
    Subspace,
    center,
    change_basis,
    verify_strong_malcev,
)
from .errors import BasisNotThroughIdeal, CovolumeMismatch, IrrationalScaling, NotStrongMalcev
from .orbit import ChRBasis, complement
from .poly import MPoly
from .scalar import ONE, ZERO, Scalar, to_scalar
from .symbolic import MalcevGroup


@dataclass
class LatticeSpec:
    """Lattice generators W_j = q_j V_j of a strong Malcev basis V."""
    vectors: list            # W_j in the coordinates of the source algebra
    scales: list             # q_j
    labels: tuple
    alg: LieAlgebra          # structure constants in the W basis
    K: int = 1
    kind: str = "quasi_lattice"
    r: int = 0
    d: int = 0
    source: LieAlgebra | None = None
    template_scale: Scalar = ONE     # test hook: dilates F along the H axes
    K_lcm: int = 1
    K_tried: list = field(default_factory=list)
    _group: MalcevGroup | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.alg.n

    @property
    def C(self) -> int:
        return self.K ** (2 ** self.d - 1) if self.d else 1

    @property
    def group(self) -> MalcevGroup:
        if self._group is None:
            self._group = MalcevGroup(self.alg, tag="W:" + "|".join(self.labels))
        return self._group

    @property
    def tag(self) -> str:
        return self.group.tag

    def to_json(self):
        src = self.source

        def vec(v):
            if src is None:
                return [str(x) for x in v]
            return {src.labels[i]: x.to_json() for i, x in enumerate(v) if x}
        return {
            "kind": self.kind, "K": self.K, "C": self.C,
            "generators": [{"label": lab, "scale": str(q), "vector": vec(v)}
                           for lab, v, q in zip(self.labels, self.vectors, self.scales)],
        }


@dataclass
class FundamentalDomain:
    """chart 'reversed': exp(t_n W_n)...exp(t_1 W_1); chart 'malcev': exp(t_1 W_1)...exp(t_n W_n)."""
    chart: str = "reversed"
    n: int = 0

    def element(self, spec: LatticeSpec, t):
        G = spec.group
        if self.chart == "malcev":
            return [to_scalar(x) for x in t]
        acc = [ZERO] * G.n
        for j in reversed(range(G.n)):
            acc = G.mul(acc, G.one_param(j, t[j]))
        return acc


def build_quasi_lattice(alg: LieAlgebra, malcev=None, labels=None):
    """Gamma = exp(Z X_1)...exp(Z X_n) for a strong Malcev basis."""
    if malcev is None:
        vecs = [alg.basis_vector(i) for i in range(alg.n)]
    else:
        from .algebra import ordering_vectors

        vecs = ordering_vectors(alg, malcev)
    if not verify_strong_malcev(alg, vecs):
        raise NotStrongMalcev("lattice basis is not a strong Malcev basis")
    if labels is None:
        labels = alg.labels if malcev is None else tuple(
            m if isinstance(m, str) else (alg.labels[m] if isinstance(m, int) else f"V{i + 1}")
            for i, m in enumerate(malcev))
    new_alg = change_basis(alg, BasisChange(vecs), labels)
    spec = LatticeSpec(vecs, [ONE] * alg.n, tuple(labels), new_alg, source=alg)
    return spec, FundamentalDomain("reversed", alg.n)


def lattice_for_chr(chr_: ChRBasis, source: LieAlgebra) -> LatticeSpec:
    return LatticeSpec([list(v) for v in chr_.vectors], [ONE] * source.n, chr_.labels, chr_.alg,
                       K=1, kind="quasi_lattice", r=chr_.r, d=chr_.d, source=source)


def _split(spec: LatticeSpec, domain: FundamentalDomain):
    G = spec.group
    if domain.chart == "malcev":
        polys = G.law.polys
    else:
        polys = G.st_polys[0]
    return G, polys


def lattice_element(spec: LatticeSpec, k):
    return [to_scalar(x) for x in k]


def decompose(spec: LatticeSpec, domain: FundamentalDomain, g):
    """Unique (t, k) with g = sigma(t) * gamma(k), t in [0,1)^n, by top-down peeling."""
    G, polys = _split(spec, domain)
    n = G.n
    g = [to_scalar(x) for x in g]
    t = [None] * n
    k = [None] * n
    for j in range(n - 1, -1, -1):
        tail = polys[j] - MPoly.var(polys[j].vars, G.t_vars[j]) - MPoly.var(polys[j].vars, G.s_vars[j])
        point = [t[i] if t[i] is not None else ZERO for i in range(n)] + \
                [Scalar(k[i]) if k[i] is not None else ZERO for i in range(n)]
        val = g[j] - tail.eval(point) if tail else g[j]
        k[j] = val.floor()
        t[j] = val - k[j]
    return t, k


def compose(spec: LatticeSpec, domain: FundamentalDomain, t, k):
    G = spec.group
    return G.mul(domain.element(spec, t), lattice_element(spec, k))


# ---------------------------------------------------------------------------
def quotient_algebra(alg: LieAlgebra, r: int) -> LieAlgebra:
    """g / span(first r basis vectors), in the remaining coordinates."""
    table = {}
    for (i, j) in alg.nonzero_pairs():
        if i < r or j < r:
            continue
        coeffs = {k - r: c for k, c in alg.c(i, j).items() if k >= r}
        if coeffs:
            table[(i - r, j - r)] = coeffs
    return LieAlgebra(alg.labels[r:], table, alg.radicand)


def project_quotient(spec: LatticeSpec, domain: FundamentalDomain, ideal: Subspace):
    k = ideal.dim
    first = Subspace([spec.alg.basis_vector(i) for i in range(k)], spec.n)
    if first != ideal:
        raise BasisNotThroughIdeal("the lattice basis does not start with a basis of the ideal")
    q_alg = quotient_algebra(spec.alg, k)
    vecs = [[ONE if a == b else ZERO for b in range(spec.n - k)] for a in range(spec.n - k)]
    out = LatticeSpec(vecs, spec.scales[k:], spec.labels[k:], q_alg, K=spec.K, kind=spec.kind,
                      r=max(spec.r - k, 0), d=spec.d, source=q_alg)
    return out, FundamentalDomain(domain.chart, spec.n - k)


def ideal_in_spec(spec: LatticeSpec, idx: int) -> Subspace:
    return Subspace([spec.alg.basis_vector(i) for i in range(idx)], spec.n)


# ---------------------------------------------------------------------------
def doubling_scales(K: int, r: int, d: int) -> list:
    """Z's: K^{-2^{d+1}}; Y_j: K^{-2^{d+1-j}}; Xt_{d+1-j} at position j: K^{2^j}."""
    Kq = Fraction(K)
    scales = [Scalar(Kq ** -(2 ** (d + 1))) for _ in range(r)]
    scales += [Scalar(Kq ** -(2 ** (d + 1 - j))) for j in range(1, d + 1)]
    scales += [Scalar(Kq ** (2 ** j)) for j in range(1, d + 1)]
    return scales


def coefficient_denominators(polys) -> int:
    den = 1
    for p in polys:
        for c in p.coefficients():
            if not c.is_rational():
                raise IrrationalScaling(f"group-law coefficient {c} is irrational")
            den = lcm(den, c.rational().denominator)
    return den


def _rescaled_law(group: MalcevGroup, scales):
    """P'_j(t, s) = P_j(q t, q s) / q_j."""
    law = group.law
    allv = law.variables
    n = group.n
    subs = [MPoly.var(allv, v).scale(scales[i % n]) for i, v in enumerate(allv)]
    return [p.substitute(subs).scale(scales[j].inverse()) for j, p in enumerate(law.polys)]


def uniformize(chr_: ChRBasis, source: LieAlgebra, K: int | None = None, max_retries: int = 6) -> LatticeSpec:
    """Uniform subgroup from a rational Ch-R basis via the doubling rescaling."""
    base = lattice_for_chr(chr_, source)
    group = base.group
    polys = group.law.polys
    lcoef = chr_.l_new.coords
    for c in lcoef:
        if not to_scalar(c).is_rational():
            raise IrrationalScaling(f"functional coordinate {c} is irrational")
    den = coefficient_denominators(polys)
    K = den if K is None else int(K)
    r, d = chr_.r, chr_.d
    tried = []
    for _ in range(max_retries + 1):
        scales = doubling_scales(K, r, d)
        new_polys = _rescaled_law(group, scales)
        bad = 1
        for p in new_polys:
            for c in p.coefficients():
                if not c.is_integer():
                    bad = lcm(bad, c.rational().denominator)
        tried.append(K)
        if bad == 1:
            break
        K *= bad
    else:
        raise IrrationalScaling(f"no integral rescaling found after K = {tried}")
    vecs = [[x * q for x in v] for v, q in zip(chr_.vectors, scales)]
    S = BasisChange(vecs)
    w_alg = change_basis(source, S, chr_.labels)
    return LatticeSpec(vecs, scales, chr_.labels, w_alg, K=K, kind="uniform_subgroup", r=r, d=d,
                       source=source, K_lcm=den, K_tried=tried)


def integral_law_check(spec: LatticeSpec) -> bool:
    return all(c.is_integer() for p in spec.group.law.polys for c in p.coefficients())


def dilated_spec(spec: LatticeSpec, vectors, source: LieAlgebra | None = None) -> LatticeSpec:
    source = source or spec.source
    S = BasisChange(vectors)
    return LatticeSpec([list(v) for v in vectors], list(spec.scales), spec.labels,
                       change_basis(source, S, spec.labels), K=spec.K, kind=spec.kind,
                       r=spec.r, d=spec.d, source=source)


@dataclass
class DiscreteSet:
    gamma_M: list
    gamma_H: list
    K: int
    C: int
    F: str

    def to_json(self):
        return {"Gamma_M": self.gamma_M, "Gamma_H": self.gamma_H, "K": self.K, "C": self.C,
                "F": self.F}


def discrete_set(spec: LatticeSpec) -> DiscreteSet:
    r, d = spec.r, spec.d
    gm = [{"label": spec.labels[r + j], "scale": str(spec.scales[r + j])} for j in range(d)]
    gh = [{"label": spec.labels[r + d + j], "scale": str(spec.scales[r + d + j])} for j in range(d)]
    axes = ", ".join(f"t{j} in [0,{spec.template_scale})" for j in range(1, d + 1))
    F = f"q(exp(t1 W[{spec.labels[-1]}]) ... ) with {axes}"
    return DiscreteSet(gm, gh, spec.K, spec.C, F)


def member_index_element(spec: LatticeSpec, theta, eta):
    """theta * eta^{-1} with theta = exp(theta_1 W_Y1)...exp(theta_d W_Yd) and
    eta = exp(eta_d W_Xt_d)...exp(eta_1 W_Xt_1) (Malcev order), central part zero."""
    G = spec.group
    r, d = spec.r, spec.d
    th = [ZERO] * G.n
    for j in range(d):
        th[r + j] = to_scalar(theta[j])
    et = [ZERO] * G.n
    for k in range(d):
        # Malcev position r+d+k carries Xt_{d-k}
        et[r + d + k] = to_scalar(eta[d - 1 - k])
    return G.mul(th, G.inv(et)), th, et


# ---------------------------------------------------------------------------
def _quotient_coords(source: LieAlgebra, vectors, r: int):
    z = center(source)
    comp = complement(z, source.n)
    M = [list(v) for v in z.basis] + comp
    Minv = la.inverse(M)
    rows = [la.vecmat(v, Minv)[z.dim:] for v in vectors[r:]]
    return rows


def covolume(spec: LatticeSpec, d_pi=None) -> Scalar:
    """Measure of pr(Sigma) in G/Z for the Haar measure of the source basis."""
    rows = _quotient_coords(spec.source, spec.vectors, spec.r)
    vol = abs(la.det(rows))
    s = to_scalar(spec.template_scale)
    if s != ONE:
        vol = vol * s ** spec.d
    if d_pi is not None and vol * d_pi != ONE:
        raise CovolumeMismatch(f"covolume {vol} times formal degree {d_pi} is {vol * d_pi}",
                               covolume=str(vol), product=str(vol * d_pi))
    return vol
