"""Coadjoint orbits of flat type: the form l([., .]), Pfaffians, polarizations
and the orbit-adapted (Chevalley-Rosenlicht) bases."""
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
    is_subalgebra,
    verify_strong_malcev,
)
from .errors import (
    CenterMismatch,
    DegenerateForm,
    NoChRBasis,
    NotPolarizingIdeal,
    NotStrongMalcev,
    NotSubalgebra,
)
from .poly import MPoly
from .scalar import ONE, ZERO, Scalar, to_scalar
from .symbolic import MalcevGroup


def as_functional(alg: LieAlgebra, l) -> Functional:
    if isinstance(l, Functional):
        return l
    if isinstance(l, dict):
        return Functional(alg.vector(l))
    return Functional([to_scalar(x) for x in l])


def complement(space: Subspace, n: int, inside: Subspace | None = None) -> list:
    """Standard basis vectors (in index order) completing ``space`` to ``inside``."""
    cur = Subspace(list(space.basis), n)
    out = []
    for i in range(n):
        e = [ONE if k == i else ZERO for k in range(n)]
        if inside is not None and not inside.contains(e):
            continue
        if not cur.contains(e):
            out.append(e)
            cur = Subspace(cur.basis + [e], n)
    if inside is not None and cur.dim < inside.dim:
        # the subspace is not spanned by basis vectors; extend by its own rref rows
        for v in inside.basis:
            if not cur.contains(v):
                out.append(list(v))
                cur = Subspace(cur.basis + [list(v)], n)
    return out


def check_central(alg: LieAlgebra, l: Functional, z: Subspace | None = None):
    """l must be a representative in z(g)*: zero on the standard complement of z."""
    z = z or center(alg)
    for v in complement(z, alg.n):
        if l(v):
            raise CenterMismatch("functional has components outside the center's dual",
                                 vector=[str(x) for x in v])
    return z


@dataclass
class SymplecticData:
    B: list
    pfaffian: Scalar
    nondegenerate: bool
    splitting: list

    def to_json(self):
        return {"B": [[str(x) for x in row] for row in self.B],
                "pfaffian": str(self.pfaffian), "pfaffian_float": float(self.pfaffian),
                "nondegenerate": self.nondegenerate}


def symplectic_form(alg: LieAlgebra, l, splitting=None) -> SymplecticData:
    l = as_functional(alg, l)
    z = center(alg)
    check_central(alg, l, z)
    vecs = splitting if splitting is not None else complement(z, alg.n)
    B = [[l(alg.bracket(u, v)) for v in vecs] for u in vecs]
    pf = la.pfaffian(B) if len(B) % 2 == 0 else ZERO
    return SymplecticData(B, pf, bool(pf), [list(v) for v in vecs])


def is_si_z(alg: LieAlgebra, l) -> bool:
    return symplectic_form(alg, l).nondegenerate


def formal_degree(alg: LieAlgebra, l, splitting=None) -> Scalar:
    """|Pf(l)|, the formal degree for Haar measure given by the unit cube of the basis."""
    data = symplectic_form(alg, l, splitting)
    if not data.nondegenerate:
        raise DegenerateForm("the form l([., .]) is degenerate on g/z")
    return abs(data.pfaffian)


def isotropic(alg: LieAlgebra, l: Functional, s: Subspace) -> bool:
    return all(not l(alg.bracket(u, v)) for u in s.basis for v in s.basis)


def is_polarization(alg: LieAlgebra, l, s: Subspace) -> bool:
    l = as_functional(alg, l)
    if not is_subalgebra(alg, s):
        raise NotSubalgebra("candidate polarization is not a subalgebra")
    r = center(alg).dim
    d2 = alg.n - r
    if d2 % 2:
        return False
    return s.dim == r + d2 // 2 and isotropic(alg, l, s)


# ---------------------------------------------------------------------------
@dataclass
class ChRBasis:
    """Ordered basis Z's, Y's, Xt_d..Xt_1 adapted to the orbit of l."""
    vectors: list           # in original coordinates, Malcev order
    labels: tuple
    r: int
    d: int
    l: Functional           # in original coordinates
    A: list                 # l([X_j, Y_k]) for the plain complement
    A_tilde: list           # l([Xt_j, Y_k])
    Q: list                 # Q_1..Q_d in variables t1..td
    change: BasisChange
    alg: LieAlgebra         # structure constants in this basis
    distinguished: bool = True
    provenance: dict = field(default_factory=dict)

    @property
    def l_new(self) -> Functional:
        return self.change.functional(self.l)

    def m_labels(self):
        return self.labels[: self.r + self.d]

    def to_json(self, orig: LieAlgebra):
        def vec(v):
            return {orig.labels[i]: x.to_json() for i, x in enumerate(v) if x}
        return {
            "basis": {lab: vec(v) for lab, v in zip(self.labels, self.vectors)},
            "order": list(self.labels),
            "A_tilde": [[str(x) for x in row] for row in self.A_tilde],
            "Q": {f"Q{j + 1}": q.to_text() for j, q in enumerate(self.Q)},
            "det": str(self.change.det),
            "distinguished": self.distinguished,
        }


def _label_for(orig: LieAlgebra, v, fallback: str) -> str:
    nz = [i for i, x in enumerate(v) if x]
    if len(nz) == 1 and v[nz[0]] == ONE:
        return orig.labels[nz[0]]
    return fallback


def default_malcev(alg: LieAlgebra, m: Subspace, z: Subspace | None = None) -> list:
    """Basis through z and m: stored-order basis vectors of z, then of m, then the rest."""
    z = z or center(alg)
    zs = complement(Subspace.zero(alg.n), alg.n, z)
    ms = complement(z, alg.n, m)
    rest = complement(m, alg.n)
    vecs = zs + ms + rest
    if not verify_strong_malcev(alg, vecs):
        raise NotStrongMalcev("no strong Malcev basis through z and m in stored order; "
                              "pass an explicit ordering")
    return vecs


def orbit_polys(alg: LieAlgebra, l_coords, r: int, d: int, group: MalcevGroup | None = None):
    """Y*-components (and Z*-components) of l . exp(t_d W_d)...exp(t_1 W_1).

    ``alg`` is in Ch-R layout; the last d basis vectors are Xt_d..Xt_1.
    Returns (Q_1..Q_d, Z-component polys) in variables t1..td."""
    group = group or MalcevGroup(alg, check=False)
    n = alg.n
    tvars = tuple(f"t{j}" for j in range(1, d + 1))
    ad = group.adjoint_polys()
    # variable of Malcev position r+d+k is Xt_{d-k}'s coordinate t_{d-k}
    subs = [MPoly.zero(tvars) for _ in range(n)]
    for k in range(d):
        subs[r + d + k] = MPoly.var(tvars, f"t{d - k}")
    ad = [[p.substitute(subs, group.limit) if p else MPoly.zero(tvars) for p in row] for row in ad]

    def component(col):
        acc = MPoly.zero(tvars)
        for k in range(n):
            if l_coords[k] and ad[k][col]:
                acc = acc + ad[k][col].scale(l_coords[k])
        return acc

    Q = [component(r + j) for j in range(d)]
    Zc = [component(i) for i in range(r)]
    return Q, Zc


def chr_basis(alg: LieAlgebra, l, m: Subspace, malcev=None, distinguished: bool = True) -> ChRBasis:
    l = as_functional(alg, l)
    z = center(alg)
    check_central(alg, l, z)
    if not is_ideal(alg, m):
        raise NotPolarizingIdeal("m is not an ideal")
    try:
        pol = is_polarization(alg, l, m)
    except NotSubalgebra:
        pol = False
    if not pol:
        raise NotPolarizingIdeal("m is not a polarization for l")
    r = z.dim
    d = (alg.n - r) // 2
    vecs = [list(v) for v in (malcev if malcev is not None else default_malcev(alg, m, z))]
    if Subspace(vecs[:r], alg.n) != z or Subspace(vecs[: r + d], alg.n) != m:
        raise NotStrongMalcev("ordering does not pass through z and m")
    if not verify_strong_malcev(alg, vecs):
        raise NotStrongMalcev("ordering is not a strong Malcev basis")
    Ys = vecs[r: r + d]
    # plain X_j: Malcev position k of the h-part is X_{d+1-k}
    hpart = vecs[r + d:]
    Xs = [hpart[d - 1 - j] for j in range(d)]
    A = [[l(alg.bracket(x, y)) for y in Ys] for x in Xs]
    try:
        Ainv = la.inverse(A)
    except Exception:
        raise DegenerateForm("pairing between h and m/z is singular") from None
    if distinguished:
        C = Ainv
    else:
        C = la.identity(d)
    Xt = [[sum((C[j][k] * Xs[k][i] for k in range(d)), ZERO) for i in range(alg.n)]
          for j in range(d)]
    ordered = vecs[: r + d] + [Xt[d - 1 - k] for k in range(d)]
    if not verify_strong_malcev(alg, ordered):
        raise NoChRBasis("the orbit-adapted recombination breaks the prefix-ideal property")
    A_t = [[l(alg.bracket(x, y)) for y in Ys] for x in Xt]
    for j in range(d):
        if A_t[j][j] != ONE or any(A_t[j][k] for k in range(j)):
            raise NoChRBasis(f"condition l.Xt_{j + 1} = Y*_{j + 1} mod higher fails")
    labels = []
    for i, v in enumerate(vecs[:r]):
        labels.append(_label_for(alg, v, f"Z{i + 1}" if r > 1 else "Z"))
    for i, v in enumerate(Ys):
        labels.append(_label_for(alg, v, f"Y{i + 1}"))
    labels += [f"Xt{d - k}" for k in range(d)]
    if len(set(labels)) != len(labels):
        labels = [f"Z{i + 1}" for i in range(r)] + [f"Y{i + 1}" for i in range(d)] + labels[r + d:]
    change = BasisChange(ordered)
    new_alg = change_basis(alg, change, labels)
    l_new = change.functional(l)
    Q, Zc = orbit_polys(new_alg, l_new.coords, r, d)
    out = ChRBasis(ordered, tuple(labels), r, d, l, A, A_t, Q, change, new_alg, distinguished)
    check_q_shape(out.Q)
    return out


def check_q_shape(Q) -> bool:
    for j, q in enumerate(Q):
        rest = q - MPoly.var(q.vars, f"t{j + 1}")
        bad = [q.vars[i] for i in rest.support() if int(q.vars[i][1:]) > j]
        if bad:
            raise NoChRBasis(f"Q_{j + 1} depends on {bad}")
    return True


def orbit_flatness_check(alg: LieAlgebra, l, m: Subspace, chr_: ChRBasis) -> bool:
    """Z*-components of the orbit map are constant and its Y*-components are the Q_j."""
    Q, Zc = orbit_polys(chr_.alg, chr_.l_new.coords, chr_.r, chr_.d)
    l_new = chr_.l_new.coords
    const_ok = all(zc == MPoly.const(zc.vars, l_new[i]) for i, zc in enumerate(Zc))
    return const_ok and all(a == b for a, b in zip(Q, chr_.Q))
