"""The induced representation on functions of the quotient coordinates, and the
orthonormal families built from it."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import DegenerateForm, NotPolarizingIdeal
from .lattice import LatticeSpec, member_index_element
from .poly import MPoly
from .scalar import ONE, ZERO, Scalar, to_scalar


def quotient_names(spec: LatticeSpec) -> tuple:
    taken = set(spec.group.t_vars)
    names = tuple(f"t{j}" for j in range(1, spec.d + 1))
    if taken & set(names):
        names = tuple(f"t_{j}" for j in range(1, spec.d + 1))
    return names


@dataclass
class RepFormula:
    """(pi(g) f)(t) = exp(2 pi i phase(g, t)) f(arg_map(g, t))."""
    spec: LatticeSpec
    l_coords: list            # functional in the W basis
    phase: MPoly              # over g variables + t variables
    arg_map: list             # t'_1..t'_d over the same variables
    g_vars: tuple
    t_vars: tuple
    central_coeff: Scalar

    @property
    def r(self):
        return self.spec.r

    @property
    def d(self):
        return self.spec.d

    def h_position(self, j: int) -> int:
        """Malcev index of the coordinate t_j (1-based j)."""
        return self.spec.r + self.spec.d + (self.spec.d - j)

    def _point(self, g, t):
        return [to_scalar(x) for x in g] + [to_scalar(x) for x in t]

    def eval_phase(self, g, t) -> Scalar:
        return self.phase.eval(self._point(g, t))

    def eval_arg(self, g, t) -> list:
        pt = self._point(g, t)
        return [a.eval(pt) for a in self.arg_map]

    def specialize(self, g):
        """Phase and argument polynomials in t alone for a fixed group element."""
        ng = len(self.g_vars)
        assign = {i: to_scalar(x) for i, x in enumerate(g)}
        keep = list(range(ng, ng + self.d))
        return self.phase.partial(assign, keep), [a.partial(assign, keep) for a in self.arg_map]

    def jacobian_is_one(self) -> bool:
        """The t-Jacobian of the argument map is the constant 1 (it is unipotent triangular)."""
        ng = len(self.g_vars)
        d = self.d
        for j, a in enumerate(self.arg_map):
            for k in range(d):
                dk = a.derivative(ng + k)
                if k == j:
                    if dk != MPoly.const(a.vars, 1):
                        return False
                elif k > j and dk:
                    return False
        return True

    def to_json(self):
        return {
            "phase": self.phase.to_text(),
            "arg_map": {f"{v}'": a.to_text() for v, a in zip(self.t_vars, self.arg_map)},
            "central_coeff": str(self.central_coeff),
            "group_variables": list(self.g_vars),
            "quotient_variables": list(self.t_vars),
        }


def _first_arg_quotient(spec: LatticeSpec, t_vars, variables):
    """Substitutions placing sigma(t) = phi(0; t) in the first slot of the group law."""
    r, d, n = spec.r, spec.d, spec.n
    subs = []
    for i in range(n):
        if i < r + d:
            subs.append(MPoly.zero(variables))
        else:
            subs.append(MPoly.var(variables, t_vars[d - 1 - (i - r - d)]))
    return subs


def induce(spec: LatticeSpec, l_coords, check: bool = True) -> RepFormula:
    """Phase and argument maps of the representation induced from exp(m)."""
    G = spec.group
    r, d, n = spec.r, spec.d, spec.n
    l_coords = [to_scalar(x) for x in l_coords]
    alg = spec.alg
    if check:
        for i in range(r + d):
            for j in range(r + d):
                for k, c in alg.c(i, j).items():
                    if k >= r + d:
                        raise NotPolarizingIdeal("span of the first r+d basis vectors is not closed")
        m_idx = range(r + d)
        for i in range(n):
            for j in m_idx:
                if any(k >= r + d for k in alg.c(i, j)):
                    raise NotPolarizingIdeal("span of the first r+d basis vectors is not an ideal")
        for i in m_idx:
            for j in m_idx:
                if sum((l_coords[k] * c for k, c in alg.c(i, j).items()), ZERO):
                    raise NotPolarizingIdeal("l does not vanish on [m, m]")
    t_vars = quotient_names(spec)
    g_vars = G.t_vars
    variables = g_vars + t_vars
    subs = _first_arg_quotient(spec, t_vars, variables) + [MPoly.var(variables, v) for v in g_vars]
    P = [p.substitute(subs, G.limit) for p in G.law.polys]
    # M-part of h' g in exponential coordinates
    msubs = [P[i] if i < r + d else MPoly.zero(variables) for i in range(n)]
    phase = MPoly.zero(variables)
    for k in range(n):
        if l_coords[k]:
            phase = phase + G.exp_coords[k].substitute(msubs, G.limit).scale(l_coords[k])
    arg_map = [P[r + d + (d - j)] for j in range(1, d + 1)]
    central = sum((phase.coefficient([1 if v == g_vars[i] else 0 for v in variables])
                   for i in range(r)), ZERO)
    return RepFormula(spec, l_coords, phase, arg_map, g_vars, t_vars, central)


def coadjoint_phase(rep: RepFormula) -> MPoly:
    """<Ad*(h'^-1) l, log m> + <l, log p(h' h)>, computed from products in the group."""
    spec = rep.spec
    G = spec.group
    r, d, n = spec.r, spec.d, spec.n
    variables = rep.g_vars + rep.t_vars
    law = G.law.polys
    h_prime = _first_arg_quotient(spec, rep.t_vars, variables)
    gv = [MPoly.var(variables, v) for v in rep.g_vars]
    m = [gv[i] if i < r + d else MPoly.zero(variables) for i in range(n)]
    h = [gv[i] if i >= r + d else MPoly.zero(variables) for i in range(n)]
    inv = [p.substitute(h_prime, G.limit) for p in G.inverse_polys]

    def mul(a, b):
        return [p.substitute(a + b, G.limit) for p in law]

    conj = mul(mul(h_prime, m), inv)
    hh = mul(h_prime, h)
    p_part = [hh[i] if i < r + d else MPoly.zero(variables) for i in range(n)]
    total = MPoly.zero(variables)
    for k in range(n):
        if rep.l_coords[k]:
            total = total + G.exp_coords[k].substitute(conj, G.limit).scale(rep.l_coords[k])
            total = total + G.exp_coords[k].substitute(p_part, G.limit).scale(rep.l_coords[k])
    return total


# ---------------------------------------------------------------------------
@dataclass
class Member:
    theta: tuple
    eta: tuple
    gamma: list               # theta * eta^{-1}, central coordinate zeroed
    phase: MPoly              # in t
    shift: list               # argument map in t: member = e^{2 pi i phase} 1_F(shift)

    @property
    def index(self):
        return self.theta + self.eta

    def to_json(self):
        return {"theta": list(self.theta), "eta": list(self.eta),
                "phase": self.phase.to_text(), "shift": [s.to_text() for s in self.shift]}


@dataclass
class OnbFamily:
    rep: RepFormula
    spec: LatticeSpec
    radius: int
    d_pi: Scalar
    members: list = field(default_factory=list)

    @property
    def d(self):
        return self.spec.d

    @property
    def mu_F(self) -> Scalar:
        """Measure of F: C^2 / d_pi, times s^d for a dilated template."""
        s = to_scalar(self.spec.template_scale)
        return Scalar(self.spec.C ** 2) / self.d_pi * s ** self.d

    @property
    def normalization(self) -> float:
        return normalization(self.spec, self.d_pi)["float"]

    def by_eta(self):
        groups: dict = {}
        for i, m in enumerate(self.members):
            groups.setdefault(m.eta, []).append(i)
        return groups

    def summary(self):
        norm = normalization(self.spec, self.d_pi)
        return {"radius": self.radius, "members": len(self.members), "mu_F": str(self.mu_F),
                "normalization": norm["text"], "normalization_float": norm["float"]}

    def to_json(self, with_members: bool = True):
        out = self.summary()
        out["formula"] = member_formula(self)
        if with_members:
            out["member_list"] = [m.to_json() for m in self.members]
        return out


def make_member(rep: RepFormula, theta, eta) -> Member:
    spec = rep.spec
    gamma, _, _ = member_index_element(spec, theta, eta)
    for i in range(spec.r):
        gamma[i] = ZERO
    phase, shift = rep.specialize(gamma)
    return Member(tuple(int(x) for x in theta), tuple(int(x) for x in eta), gamma, phase, shift)


def onb_family(rep: RepFormula, spec: LatticeSpec, radius: int, d_pi) -> OnbFamily:
    d = spec.d
    rng = range(-radius, radius + 1)
    fam = OnbFamily(rep, spec, radius, to_scalar(d_pi))
    for eta in itertools.product(rng, repeat=d):
        for theta in itertools.product(rng, repeat=d):
            fam.members.append(make_member(rep, theta, eta))
    return fam


def normalization(spec: LatticeSpec, d_pi) -> dict:
    """mu(F)^{-1/2} = C^{-1} d_pi^{1/2} (times s^{-d/2} for a dilated template)."""
    d_pi = to_scalar(d_pi)
    if d_pi.sign() <= 0:
        raise DegenerateForm("formal degree must be positive")
    s = to_scalar(spec.template_scale)
    mu = Scalar(spec.C ** 2) / d_pi * s ** spec.d
    value = 1.0 / math.sqrt(float(mu))
    text = f"C^-1 * d_pi^(1/2) with C = {spec.C}, d_pi = {d_pi}"
    if s != ONE:
        text += f", template scale {s}"
    return {"mu_F": str(mu), "text": text, "float": value}


def member_formula(fam: OnbFamily) -> str:
    """Symbolic member in the index variables theta_j, eta_j."""
    rep, spec = fam.rep, fam.spec
    d = spec.d
    th = tuple(f"theta{j}" for j in range(1, d + 1))
    et = tuple(f"eta{j}" for j in range(1, d + 1))
    try:
        phase, shift = symbolic_member(rep, th, et)
    except Exception:
        return ""
    return f"exp(2 pi i ({phase.to_text()})) * 1_F({', '.join(s.to_text() for s in shift)})"


def symbolic_member(rep: RepFormula, th_names, eta_names):
    """Phase and shift of pi(theta eta^{-1}) 1_F as polynomials in t, theta, eta."""
    spec = rep.spec
    G = spec.group
    r, d, n = spec.r, spec.d, spec.n
    variables = tuple(rep.t_vars) + tuple(th_names) + tuple(eta_names)
    theta = [MPoly.zero(variables) for _ in range(n)]
    for j in range(d):
        theta[r + j] = MPoly.var(variables, th_names[j])
    eta = [MPoly.zero(variables) for _ in range(n)]
    for k in range(d):
        eta[r + d + k] = MPoly.var(variables, eta_names[d - 1 - k])
    eta_inv = [p.substitute(eta, G.limit) for p in G.inverse_polys]
    gamma = [p.substitute(theta + eta_inv, G.limit) for p in G.law.polys]
    for i in range(r):
        gamma[i] = MPoly.zero(variables)
    subs = gamma + [MPoly.var(variables, v) for v in rep.t_vars]
    phase = rep.phase.substitute(subs, G.limit)
    shift = [a.substitute(subs, G.limit) for a in rep.arg_map]
    return phase, shift
