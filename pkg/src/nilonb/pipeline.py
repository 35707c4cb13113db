"""End-to-end analysis: validate, orbit data, polarization, orbit-adapted basis,
lattice, induced representation, family, and (optionally) numerical checks."""
from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass

from . import linalg as la
from .algebra import (
    BasisChange,
    Functional,
    LieAlgebra,
    Subspace,
    center,
    check_valid,
    from_dict,
    load,
    same_structure,
    validate,
)
from .builtins import builtin_data
from .errors import NilError, SchemaError
from .gradation import (
    Gradation,
    chr_basis_graded,
    dilate,
    pairing_dims,
    polarization_from_gradation,
    rational_compat_check,
    validate_gradation,
)
from .lattice import (
    LatticeSpec,
    covolume,
    dilated_spec,
    discrete_set,
    integral_law_check,
    lattice_for_chr,
    uniformize,
)
from .orbit import ChRBasis, chr_basis, complement, formal_degree, orbit_flatness_check, symplectic_form
from .poly import MPoly
from .representation import OnbFamily, RepFormula, induce, normalization, onb_family
from .scalar import ONE, Scalar, parse_scalar, to_scalar
from .symbolic import MalcevGroup
from .verify import (
    QuadratureSpec,
    covolume_completeness_check,
    gram,
    member_as_term,
    parseval_probe,
    trig_polynomial,
)

log = logging.getLogger("nilonb")

MODES = ("quasi_lattice", "uniform")


class StageError(Exception):
    def __init__(self, stage: str, error: NilError):
        super().__init__(f"{stage}: {error}")
        self.stage = stage
        self.error = error

    def to_dict(self):
        out = self.error.to_dict()
        out["stage"] = self.stage
        return out


@dataclass
class AnalysisRequest:
    source: str                       # builtin name or path to a JSON file
    lam: str | None = "1"
    functional: dict | None = None    # label -> value, overrides lam
    mode: str = "quasi_lattice"
    polarization: list | None = None
    gradation: str | None = None
    radius: int = 2
    tol: float = 1e-8
    scale: str | None = None          # test hook: dilate F only

    def __post_init__(self):
        if self.mode not in MODES:
            raise SchemaError(f"mode must be one of {MODES}")
        if self.radius < 0:
            raise SchemaError("radius must be >= 0")


def load_source(source: str) -> LieAlgebra:
    if source.endswith(".json") or "/" in source:
        return load(source)
    return from_dict(builtin_data(source))


def central_functional(alg: LieAlgebra, lam, z: Subspace | None = None) -> Functional:
    """lam Z* for a one-dimensional center: lam on the center, 0 on its standard complement."""
    z = z or center(alg)
    if z.dim != 1:
        raise SchemaError(f"--lambda needs a one-dimensional center (dimension {z.dim}); "
                          "pass the functional by labels instead")
    lam = parse_scalar(lam, alg.radicand) if not isinstance(lam, Scalar) else lam
    rows = [list(v) for v in z.basis] + complement(z, alg.n)
    inv = la.inverse(rows)
    coords = [inv[i][0] * lam for i in range(alg.n)]
    return Functional(coords)


def resolve_functional(alg: LieAlgebra, req: AnalysisRequest) -> Functional:
    if req.functional:
        for lab in req.functional:
            if lab not in alg.labels:
                raise SchemaError(f"functional: unknown label {lab!r}")
        return Functional([parse_scalar(req.functional.get(lab, "0"), alg.radicand)
                           for lab in alg.labels])
    return central_functional(alg, req.lam if req.lam is not None else "1")


def lemma_iii_residuals(group: MalcevGroup) -> dict:
    """P_j(t, -t) for the second-kind group law; nonzero entries are reported."""
    law = group.law
    allv = law.variables
    n = group.n
    subs = [MPoly.var(allv, allv[i]) for i in range(n)] + \
           [-MPoly.var(allv, allv[i]) for i in range(n)]
    out = {}
    for lab, p in zip(law.labels, law.polys):
        r = p.substitute(subs)
        if not r.is_zero():
            out[lab] = r.partial({}, list(range(n))).to_text()
    return out


@dataclass
class Context:
    """Intermediate objects kept for commands that go past the report."""
    alg: LieAlgebra
    l: Functional
    chr: ChRBasis | None = None
    spec: LatticeSpec | None = None
    d_pi: Scalar | None = None
    rep: RepFormula | None = None
    family: OnbFamily | None = None
    gradation: Gradation | None = None


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except NilError as exc:
        raise StageError(name, exc) from exc


def _vec_json(alg: LieAlgebra, v):
    return {alg.labels[i]: x.to_json() for i, x in enumerate(v) if x}


def lattice_functional(spec: LatticeSpec, l: Functional) -> list:
    return BasisChange(spec.vectors).functional(l).coords


def analyze(req: AnalysisRequest, alg: LieAlgebra | None = None, build_family: bool = True):
    """Run the pipeline; returns (report dict, Context)."""
    report: dict = {}
    alg = alg if alg is not None else _stage("load", load_source, req.source)
    report["algebra"] = {"name": alg.meta.get("name", req.source), "dim": alg.n,
                         "labels": list(alg.labels), "radicand": alg.radicand}
    val = validate(alg)
    report["validation"] = val.to_json()
    if not val.passed:
        try:
            check_valid(alg)
        except NilError as exc:
            raise StageError("validate", exc) from exc
    l = _stage("functional", resolve_functional, alg, req)
    ctx = Context(alg, l)
    z = center(alg)
    r = z.dim
    report["center"] = {"dim": r, "basis": [_vec_json(alg, v) for v in z.basis]}
    report["functional"] = {alg.labels[i]: x.to_json() for i, x in enumerate(l.coords) if x}
    sym = _stage("orbit", symplectic_form, alg, l)
    report["symplectic"] = sym.to_json()
    report["si_z"] = sym.nondegenerate
    d_pi = _stage("orbit", formal_degree, alg, l)
    ctx.d_pi = d_pi
    report["formal_degree"] = {"exact": str(d_pi), "float": float(d_pi)}
    chr_, pol_source = _stage("polarize", _polarize, alg, l, req, ctx)
    ctx.chr = chr_
    report["polarization"] = {
        "source": pol_source,
        "basis": [_vec_json(alg, v) for v in chr_.vectors[: chr_.r + chr_.d]],
        "labels": list(chr_.m_labels()),
    }
    if ctx.gradation is not None:
        g = ctx.gradation
        report["gradation"] = g.to_json(alg)
        report["gradation"]["rational_compatible"] = rational_compat_check(alg, g)
        report["gradation"]["pairing"] = {str(k): v for k, v in pairing_dims(alg, g, l).items()}
    report["chr_basis"] = chr_.to_json(alg)
    report["orbit_flat"] = _stage("orbit", orbit_flatness_check, alg, l, None, chr_)
    chr_group = MalcevGroup(chr_.alg, check=False)
    report["group_law"] = chr_group.law.to_text()
    flags = []
    resid = lemma_iii_residuals(chr_group)
    if resid:
        flags.append({"flag": "second_kind_inverse_identity",
                      "note": "P(t,-t) is not identically 0 in coordinates of the second kind",
                      "residuals": resid})
    spec = _stage("lattice", _lattice, alg, chr_, req)
    ctx.spec = spec
    lat = spec.to_json()
    lat.update({"K_lcm": spec.K_lcm, "K_tried": spec.K_tried, "integral_law": integral_law_check(spec)})
    cov = covolume(spec)
    lat["covolume"] = {"exact": str(cov), "float": float(cov)}
    lat["covolume_times_formal_degree"] = str(cov * d_pi)
    lat["covolume_identity"] = covolume_completeness_check(spec, d_pi)
    lat["discrete_set"] = discrete_set(spec).to_json()
    lat["group_law"] = spec.group.law.to_text()
    report["lattice"] = lat
    rep = _stage("representation", induce, spec, lattice_functional(spec, l))
    ctx.rep = rep
    report["representation"] = rep.to_json()
    report["representation"]["jacobian_one"] = rep.jacobian_is_one()
    norm = _stage("family", normalization, spec, d_pi)
    report["normalization"] = norm
    if req.mode == "uniform" and spec.d:
        ref = f"K^-{2 ** spec.d - 1} * d_pi^(-1/2)"
        flags.append({"flag": "normalization_constant",
                      "note": "normalization is mu(F)^(-1/2) = C^-1 d_pi^(1/2); the reference "
                              f"constant {ref} has the opposite power of d_pi",
                      "computed": norm["text"], "reference": ref})
    report["flags"] = flags
    if build_family:
        fam = _stage("family", onb_family, rep, spec, req.radius, d_pi)
        ctx.family = fam
        report["family"] = fam.summary()
        report["family"]["formula"] = _member_formula(fam)
    return report, ctx


def _member_formula(fam):
    from .representation import member_formula
    return member_formula(fam)


def _polarize(alg: LieAlgebra, l: Functional, req: AnalysisRequest, ctx: Context):
    if req.polarization:
        m = Subspace.from_labels(alg, req.polarization)
        return chr_basis(alg, l, m), "request"
    if req.gradation:
        grad = validate_gradation(alg, req.gradation)
        ctx.gradation = grad
        polarization_from_gradation(alg, grad, l)
        return chr_basis_graded(alg, grad, l), f"gradation:{grad.name}"
    if alg.meta.get("polarization"):
        m = Subspace.from_labels(alg, alg.meta["polarization"])
        return chr_basis(alg, l, m), "default"
    if len(alg.gradations) == 1:
        name = next(iter(alg.gradations))
        grad = validate_gradation(alg, name)
        ctx.gradation = grad
        polarization_from_gradation(alg, grad, l)
        return chr_basis_graded(alg, grad, l), f"gradation:{grad.name}"
    raise SchemaError("no polarization: pass --polarization labels or --gradation name")


def _lattice(alg: LieAlgebra, chr_: ChRBasis, req: AnalysisRequest) -> LatticeSpec:
    spec = uniformize(chr_, alg) if req.mode == "uniform" else lattice_for_chr(chr_, alg)
    if req.scale is not None:
        spec.template_scale = parse_scalar(req.scale, alg.radicand)
    return spec


# ---------------------------------------------------------------------------
def probes(fam: OnbFamily, quad: QuadratureSpec) -> dict:
    """Parseval probes: self-expansion of a few members and a trigonometric polynomial."""
    out = {}
    picks = sorted({0, len(fam.members) // 2, len(fam.members) - 1})
    fr = []
    for i in picks:
        m = fam.members[i]
        res = parseval_probe(fam, [member_as_term(fam, m)], quad)
        fr.append({"member": list(m.index), "fraction": res["fraction"]})
    out["self_expansion"] = fr
    deg = fam.radius
    coefs = {}
    for k in itertools.product(range(-deg, deg + 1), repeat=fam.d):
        coefs[k] = 1.0 / (1 + sum(abs(x) for x in k))
    res = parseval_probe(fam, trig_polynomial(fam, coefs), quad)
    out["trig_polynomial"] = {"degree": deg, "fraction": res["fraction"]}
    return out


def run_verify(req: AnalysisRequest, alg: LieAlgebra | None = None, entries: bool = False):
    report, ctx = analyze(req, alg)
    quad = QuadratureSpec(tolerance=min(1e-11, req.tol / 100))
    g = _stage("verify", gram, ctx.family, quad)
    report["gram"] = g.to_json(entries=entries, tol=req.tol)
    log.info("gram: %d members, %d integrals in %.3f s", len(g.indices), g.integrals, g.seconds)
    passed = g.passed(req.tol)
    if ctx.spec.template_scale == ONE:
        pr = _stage("verify", probes, ctx.family, quad)
        report["parseval"] = pr
        passed = passed and all(abs(p["fraction"] - 1.0) < 1e-9 for p in pr["self_expansion"])
    report["covolume_identity"] = report["lattice"]["covolume_identity"]
    passed = passed and report["covolume_identity"]
    report["verified"] = passed
    return report, ctx, passed


# ---------------------------------------------------------------------------
def transport(ctx: Context, grad: Gradation, s, radius: int = 1):
    """Dilate the lattice by delta_{1/s} and the functional by delta_s; build the family."""
    alg, spec, l = ctx.alg, ctx.spec, ctx.l
    s = to_scalar(s)
    data = dilate(alg, grad, s, l, spec.vectors)
    l_s = data["functional"]
    new_spec = dilated_spec(spec, data["basis"], alg)
    new_spec.K_lcm, new_spec.K_tried = spec.K_lcm, list(spec.K_tried)
    d_pi = formal_degree(alg, l_s)
    rep = induce(new_spec, lattice_functional(new_spec, l_s))
    fam = onb_family(rep, new_spec, radius, d_pi)
    return {"functional": l_s, "spec": new_spec, "d_pi": d_pi, "rep": rep, "family": fam,
            "same_structure": same_structure(spec.alg, new_spec.alg),
            "automorphism": data["dilation"].is_automorphism(alg)}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_default)


def _default(o):
    if isinstance(o, Scalar):
        return str(o)
    if hasattr(o, "to_json"):
        return o.to_json()
    if isinstance(o, (set, tuple)):
        return list(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)
