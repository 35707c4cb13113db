"""Symbolic BCH products and the coordinate polynomials of a nilpotent group.

Coordinates of the second kind follow the basis order low-to-high:
``phi(t) = exp(t_1 X_1) ... exp(t_n X_n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .algebra import LieAlgebra, check_valid, verify_strong_malcev
from .errors import NotStrongMalcev
from .poly import MPoly
from .scalar import ONE, ZERO, Scalar, to_scalar


class SymbolicVector:
    """A g-valued polynomial: one MPoly per basis coordinate."""

    __slots__ = ("comps",)

    def __init__(self, comps: Sequence[MPoly]):
        self.comps = list(comps)

    @classmethod
    def zero(cls, n: int, variables) -> "SymbolicVector":
        return cls([MPoly.zero(variables) for _ in range(n)])

    @classmethod
    def basis(cls, n: int, variables, j: int, coef: MPoly) -> "SymbolicVector":
        v = cls.zero(n, variables)
        v.comps[j] = coef
        return v

    @classmethod
    def constant(cls, coords, variables) -> "SymbolicVector":
        return cls([MPoly.const(variables, to_scalar(x)) for x in coords])

    @property
    def vars(self):
        return self.comps[0].vars

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __add__(self, other):
        return SymbolicVector([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return SymbolicVector([a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return SymbolicVector([-a for a in self.comps])

    def scale(self, c) -> "SymbolicVector":
        return SymbolicVector([a.scale(c) for a in self.comps])

    def __eq__(self, other):
        return isinstance(other, SymbolicVector) and self.comps == other.comps

    def eval(self, point):
        return [c.eval(point) for c in self.comps]

    def substitute(self, subs):
        return SymbolicVector([c.substitute(subs) for c in self.comps])

    def embed(self, variables):
        return SymbolicVector([c.embed(variables) for c in self.comps])

    def to_text(self, labels=None):
        labels = labels or [f"e{i}" for i in range(len(self.comps))]
        return {lab: c.to_text() for lab, c in zip(labels, self.comps) if not c.is_zero()}


def sym_bracket(alg: LieAlgebra, a: SymbolicVector, b: SymbolicVector) -> SymbolicVector:
    out = SymbolicVector.zero(alg.n, a.vars)
    prods: dict = {}
    for i, j, k, c in alg.structure_items():
        key = (i, j)
        if key not in prods:
            ai, aj, bi, bj = a.comps[i], a.comps[j], b.comps[i], b.comps[j]
            term = MPoly.zero(a.vars)
            if ai and bj:
                term = term + ai * bj
            if aj and bi:
                term = term - aj * bi
            prods[key] = term
        term = prods[key]
        if term:
            out.comps[k] = out.comps[k] + term.scale(c)
    return out


# ---------------------------------------------------------------------------
# Dynkin's formula: log(e^x e^y) = sum over words w in {x, y} of c_w [w],
# where [w] is the right-nested bracket and c_w collects every way of cutting
# w into blocks x^r y^s.

@lru_cache(maxsize=None)
def dynkin_coefficient(word: tuple) -> Fraction:
    n = len(word)
    # ways[p] maps block count k -> sum of prod 1/(r! s!) over cuttings of word[:p]
    ways = [dict() for _ in range(n + 1)]
    ways[0][0] = Fraction(1)
    for p in range(n):
        if not ways[p]:
            continue
        r = s = 0
        for q in range(p, n):
            if word[q] == 0:
                if s:
                    break
                r += 1
            else:
                s += 1
            w = Fraction(1, factorial(r) * factorial(s))
            for k, val in ways[p].items():
                ways[q + 1][k + 1] = ways[q + 1].get(k + 1, 0) + val * w
    total = Fraction(0)
    for k, val in ways[n].items():
        total += Fraction((-1) ** (k - 1), k) * val
    return total / n


@lru_cache(maxsize=None)
def dynkin_words(step: int) -> tuple:
    """Words with nonzero coefficient whose right-nested bracket can be nonzero."""
    out = []

    def rec(word):
        if word:
            # a nested bracket ending in a repeated letter vanishes
            if len(word) >= 2 and word[-1] == word[-2]:
                return
            c = dynkin_coefficient(word)
            if c:
                out.append((word, c))
        if len(word) < step:
            # grow at the front so the innermost pair is fixed once chosen
            for letter in (0, 1):
                rec((letter,) + word)

    rec(())
    out.sort(key=lambda item: (len(item[0]), item[0]))
    return tuple(out)


def bch(alg: LieAlgebra, x: SymbolicVector, y: SymbolicVector, step: int | None = None,
        limit: int | None = None) -> SymbolicVector:
    """Exact x * y = log(exp x exp y) truncated at the nilpotency step."""
    if step is None:
        step = alg.step
    if x.is_zero():
        return y
    if y.is_zero():
        return x
    letters = (x, y)
    nested: dict = {}

    def bracket_of(word):
        if word in nested:
            return nested[word]
        if len(word) == 1:
            val = letters[word[0]]
        else:
            inner = bracket_of(word[1:])
            val = inner if inner is None else sym_bracket(alg, letters[word[0]], inner)
            if val is not None and val.is_zero():
                val = None
        nested[word] = val
        return val

    result = SymbolicVector.zero(alg.n, x.vars)
    for word, c in dynkin_words(step):
        val = bracket_of(word)
        if val is not None:
            result = result + val.scale(Scalar(c))
    if limit is not None:
        for comp in result.comps:
            comp.guard(limit)
    return result


def bch_numeric(alg: LieAlgebra, x, y, step: int | None = None):
    """BCH product of two constant coordinate vectors."""
    xs = SymbolicVector.constant(x, ())
    ys = SymbolicVector.constant(y, ())
    return [c.constant() for c in bch(alg, xs, ys, step).comps]


# ---------------------------------------------------------------------------
def coord_names(labels: Sequence[str]) -> tuple:
    low = [lab.lower() for lab in labels]
    return tuple(low) if len(set(low)) == len(low) else tuple(labels)


def _ad_power_matrices(alg: LieAlgebra, j: int):
    """Powers ad(X_j)^k / k! as exact constant matrices (columns act on vectors)."""
    ad = alg.ad_matrix(alg.basis_vector(j))
    mats = []
    n = alg.n
    cur = [[ONE if a == b else ZERO for b in range(n)] for a in range(n)]
    k = 0
    while any(any(x for x in row) for row in cur):
        mats.append([[x / factorial(k) for x in row] for row in cur])
        k += 1
        cur = [[sum((ad[a][m] * cur[m][b] for m in range(n) if ad[a][m] and cur[m][b]), ZERO)
                for b in range(n)] for a in range(n)]
    return mats


def _matmul_poly(a, b, variables):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(len(b[0])):
            acc = MPoly.zero(variables)
            for m in range(len(b)):
                if a[i][m] and b[m][j]:
                    acc = acc + a[i][m] * b[m][j]
            row.append(acc)
        out.append(row)
    return out


def adjoint(alg: LieAlgebra, x: SymbolicVector, step: int | None = None):
    """Ad(exp x) = sum_k ad(x)^k / k! as a matrix of MPoly acting on columns."""
    if step is None:
        step = alg.step
    n = alg.n
    variables = x.vars
    # ad(x)_{k j} = sum_i x_i c_{ij}^k
    ad = [[MPoly.zero(variables) for _ in range(n)] for _ in range(n)]
    for (i, j) in alg.nonzero_pairs():
        if x.comps[i]:
            for k, c in alg.c(i, j).items():
                ad[k][j] = ad[k][j] + x.comps[i].scale(c)
    result = [[MPoly.const(variables, 1 if a == b else 0) for b in range(n)] for a in range(n)]
    power = [row[:] for row in result]
    for k in range(1, step + 1):
        power = _matmul_poly(ad, power, variables)
        inv_fact = Scalar(Fraction(1, factorial(k)))
        result = [[result[a][b] + power[a][b].scale(inv_fact) for b in range(n)] for a in range(n)]
    return result


def coadjoint_row(l_coords, ad_matrix):
    """(l . g)_j = sum_k l_k Ad(g)_{k j}: the right coadjoint action."""
    n = len(ad_matrix)
    variables = ad_matrix[0][0].vars
    out = []
    for j in range(n):
        acc = MPoly.zero(variables)
        for k in range(n):
            if l_coords[k] and ad_matrix[k][j]:
                acc = acc + ad_matrix[k][j].scale(l_coords[k])
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
@dataclass
class GroupLaw:
    polys: list
    t_vars: tuple
    s_vars: tuple
    labels: tuple

    @property
    def variables(self):
        return self.t_vars + self.s_vars

    def __call__(self, t, s):
        point = list(t) + list(s)
        return [p.eval(point) for p in self.polys]

    def to_text(self):
        return {lab: p.to_text() for lab, p in zip(self.labels, self.polys)}


class MalcevGroup:
    """The simply connected group of a validated algebra, in second-kind coordinates."""

    def __init__(self, alg: LieAlgebra, check: bool = True, tag: str | None = None):
        if check:
            check_valid(alg)
            if not verify_strong_malcev(alg):
                raise NotStrongMalcev("basis order is not a strong Malcev basis")
        self.alg = alg
        self.n = alg.n
        self.step = alg.step
        self.limit = 2 * self.n * max(self.step, 1)
        self.t_vars = coord_names(alg.labels)
        self.s_vars = tuple(v + "'" for v in self.t_vars)
        self.tag = tag or "|".join(alg.labels)
        self._R = None
        self._P = None
        self._inv = None
        self._st = None

    # generators --------------------------------------------------------
    def _one_param(self, j: int, variables, name) -> SymbolicVector:
        return SymbolicVector.basis(self.n, variables, j, MPoly.var(variables, name))

    def log_of_product(self, factors, variables) -> SymbolicVector:
        """log of exp(v_1) exp(v_2) ... for symbolic vectors v_i."""
        acc = SymbolicVector.zero(self.n, variables)
        for v in factors:
            acc = bch(self.alg, acc, v, self.step, self.limit)
        return acc

    @property
    def exp_coords(self) -> list:
        """R_j(t) with phi(t) = exp(sum_j R_j(t) X_j)."""
        if self._R is None:
            tv = self.t_vars
            v = self.log_of_product([self._one_param(j, tv, tv[j]) for j in range(self.n)], tv)
            self._R = v.comps
            self._check_triangular(self._R, tv, "exp_coords")
        return self._R

    def _check_triangular(self, polys, tv, what):
        for j, p in enumerate(polys):
            rest = p - MPoly.var(p.vars, tv[j])
            bad = [i for i in rest.support() if p.vars[i] in tv and tv.index(p.vars[i]) <= j]
            if bad:
                raise NotStrongMalcev(f"{what}: coordinate {self.alg.labels[j]} depends on "
                                      f"lower-index variables")

    def malcev_from_log(self, v: SymbolicVector) -> list:
        """Second-kind coordinates u with phi(u) = exp(v), solved top-down."""
        R = self.exp_coords
        tv = self.t_vars
        variables = v.vars
        u = [None] * self.n
        for j in range(self.n - 1, -1, -1):
            tail = R[j] - MPoly.var(tv, tv[j])
            if tail.is_zero():
                u[j] = v.comps[j]
                continue
            subs = [u[k] if u[k] is not None else MPoly.zero(variables) for k in range(self.n)]
            u[j] = v.comps[j] - tail.substitute(subs, self.limit)
        return u

    # the polynomials ---------------------------------------------------
    @property
    def law(self) -> GroupLaw:
        if self._P is None:
            allv = self.t_vars + self.s_vars
            Rt = SymbolicVector(self.exp_coords).embed(allv)
            Rs = SymbolicVector([p.rename(self.s_vars) for p in self.exp_coords]).embed(allv)
            w = bch(self.alg, Rt, Rs, self.step, self.limit)
            polys = self.malcev_from_log(w)
            self._P = GroupLaw(polys, self.t_vars, self.s_vars, self.alg.labels)
            self._check_law(polys)
        return self._P

    def _check_law(self, polys):
        n = self.n
        for j, p in enumerate(polys):
            rest = p - MPoly.var(p.vars, self.t_vars[j]) - MPoly.var(p.vars, self.s_vars[j])
            for i in rest.support():
                name = p.vars[i]
                idx = self.t_vars.index(name) if name in self.t_vars else self.s_vars.index(name)
                if idx <= j:
                    raise NotStrongMalcev(f"group law for {self.alg.labels[j]} is not triangular")
        if n >= 1:
            for j in (n - 1, n - 2):
                if j >= 0:
                    rest = polys[j] - MPoly.var(polys[j].vars, self.t_vars[j]) \
                        - MPoly.var(polys[j].vars, self.s_vars[j])
                    if not rest.is_zero():
                        raise NotStrongMalcev("top coordinates are not additive")

    @property
    def inverse_polys(self) -> list:
        if self._inv is None:
            self._inv = self.malcev_from_log(-SymbolicVector(self.exp_coords))
        return self._inv

    @property
    def st_polys(self):
        """S and T with
        exp(t_n X_n)..exp(t_1 X_1) exp(s_1 X_1)..exp(s_n X_n) = phi(S(t, s)) and
        exp(t_1 X_1)..exp(t_n X_n) exp(s_n X_n)..exp(s_1 X_1) = phi(T(t, s))."""
        if self._st is None:
            allv = self.t_vars + self.s_vars
            rev_t = self.log_of_product(
                [self._one_param(j, allv, self.t_vars[j]) for j in reversed(range(self.n))], allv)
            fwd_s = self.log_of_product(
                [self._one_param(j, allv, self.s_vars[j]) for j in range(self.n)], allv)
            fwd_t = self.log_of_product(
                [self._one_param(j, allv, self.t_vars[j]) for j in range(self.n)], allv)
            rev_s = self.log_of_product(
                [self._one_param(j, allv, self.s_vars[j]) for j in reversed(range(self.n))], allv)
            S = self.malcev_from_log(bch(self.alg, rev_t, fwd_s, self.step, self.limit))
            T = self.malcev_from_log(bch(self.alg, fwd_t, rev_s, self.step, self.limit))
            self._st = (S, T)
        return self._st

    # exact numeric operations ------------------------------------------
    def mul(self, a, b):
        return self.law(a, b)

    def inv(self, a):
        return [p.eval(a) for p in self.inverse_polys]

    def log(self, a):
        return [p.eval(a) for p in self.exp_coords]

    def exp(self, v):
        sv = SymbolicVector.constant(v, ())
        return [p.constant() for p in self.malcev_from_log(sv)]

    def product(self, *elements):
        acc = [ZERO] * self.n
        for e in elements:
            acc = self.mul(acc, e)
        return acc

    def one_param(self, j: int, x) -> list:
        e = [ZERO] * self.n
        e[j] = to_scalar(x)
        return e

    def adjoint_polys(self):
        """Ad(phi(t)) as a polynomial matrix in the t variables."""
        tv = self.t_vars
        mats = None
        for j in range(self.n):
            x = SymbolicVector.basis(self.n, tv, j, MPoly.var(tv, tv[j]))
            a = adjoint(self.alg, x, self.step)
            mats = a if mats is None else _matmul_poly(mats, a, tv)
        return mats


def group_law(alg: LieAlgebra, ordering=None) -> GroupLaw:
    return _group(alg, ordering).law


def exp_coords(alg: LieAlgebra, ordering=None) -> list:
    return _group(alg, ordering).exp_coords


def st_polys(alg: LieAlgebra, ordering=None):
    return _group(alg, ordering).st_polys


def _group(alg, ordering):
    if ordering is not None:
        from .algebra import BasisChange, change_basis, ordering_vectors

        vecs = ordering_vectors(alg, ordering)
        if not verify_strong_malcev(alg, vecs):
            raise NotStrongMalcev("ordering is not a strong Malcev basis")
        labels = [o if isinstance(o, str) else (alg.labels[o] if isinstance(o, int) else f"V{i + 1}")
                  for i, o in enumerate(ordering)]
        alg = change_basis(alg, BasisChange(vecs), labels)
    return MalcevGroup(alg)
