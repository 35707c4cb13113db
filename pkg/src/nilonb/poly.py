"""Sparse multivariate polynomials with exact Scalar coefficients."""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .errors import DegreeOverflow
from .scalar import ONE, ZERO, Scalar, to_scalar


class MPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        self.vars = tuple(variables)
        self.terms: dict[tuple, Scalar] = {}
        if terms:
            for e, c in terms.items():
                c = to_scalar(c)
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def _raw(cls, variables, terms):
        p = object.__new__(cls)
        p.vars = variables
        p.terms = terms
        return p

    @classmethod
    def const(cls, variables, c) -> "MPoly":
        c = to_scalar(c)
        n = len(variables)
        return cls._raw(tuple(variables), {(0,) * n: c} if c else {})

    @classmethod
    def zero(cls, variables) -> "MPoly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def var(cls, variables, which) -> "MPoly":
        variables = tuple(variables)
        i = variables.index(which) if isinstance(which, str) else which
        e = [0] * len(variables)
        e[i] = 1
        return cls._raw(variables, {tuple(e): ONE})

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def constant(self) -> Scalar:
        return self.terms.get((0,) * len(self.vars), ZERO)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def support(self) -> set[int]:
        out = set()
        for e in self.terms:
            out.update(i for i, k in enumerate(e) if k)
        return out

    def support_names(self) -> set[str]:
        return {self.vars[i] for i in self.support()}

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)

    def coefficient(self, exps) -> Scalar:
        return self.terms.get(tuple(exps), ZERO)

    def coefficients(self):
        return list(self.terms.values())

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.terms.values())

    def is_integral(self) -> bool:
        return all(c.is_integer() for c in self.terms.values())

    def items(self):
        return sorted(self.terms.items(), key=_term_key)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable sets differ: {self.vars} vs {other.vars}")
            return other
        c = to_scalar(other)
        if c is NotImplemented:
            return NotImplemented
        return MPoly.const(self.vars, c)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e)
            if v is None:
                terms[e] = c
            else:
                v = v + c
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return MPoly._raw(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MPoly":
        c = to_scalar(c)
        if not c:
            return MPoly.zero(self.vars)
        return MPoly._raw(self.vars, {e: x * c for e, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = to_scalar(other)
            if c is NotImplemented:
                return NotImplemented
            return self.scale(c)
        if other.vars != self.vars:
            raise ValueError(f"variable sets differ: {self.vars} vs {other.vars}")
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e)
                terms[e] = c1 * c2 if v is None else v + c1 * c2
        return MPoly._raw(self.vars, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(to_scalar(c).inverse())

    def __pow__(self, k: int):
        result = MPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        c = to_scalar(other)
        if c is NotImplemented:
            return NotImplemented
        return self == MPoly.const(self.vars, c)

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def guard(self, limit: int) -> "MPoly":
        if self.degree() > limit:
            raise DegreeOverflow(f"polynomial degree {self.degree()} exceeds bound {limit}")
        return self

    # evaluation and substitution -------------------------------------------
    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return self.eval(point)

    def eval(self, point) -> Scalar:
        point = [to_scalar(x) for x in point]
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * (x ** k)
            total = total + t
        return total

    def eval_float(self, points) -> np.ndarray:
        """Vectorized evaluation; ``points`` has shape (..., nvars)."""
        pts = np.asarray(points, dtype=float)
        out = np.zeros(pts.shape[:-1])
        for e, c in self.terms.items():
            t = np.full(pts.shape[:-1], float(c))
            for i, k in enumerate(e):
                if k:
                    t = t * pts[..., i] ** k
            out = out + t
        return out

    def partial(self, assign: Mapping[int, object], keep: Sequence[int] | None = None) -> "MPoly":
        """Fix some variables to values; the result lives on the others."""
        assign = {i: to_scalar(v) for i, v in assign.items()}
        if keep is None:
            keep = [i for i in range(len(self.vars)) if i not in assign]
        new_vars = tuple(self.vars[i] for i in keep)
        terms: dict = {}
        for e, c in self.terms.items():
            t = c
            for i, x in assign.items():
                if e[i]:
                    t = t * (x ** e[i])
            if not t:
                continue
            ne = tuple(e[i] for i in keep)
            v = terms.get(ne)
            terms[ne] = t if v is None else v + t
        return MPoly._raw(new_vars, {e: c for e, c in terms.items() if c})

    def substitute(self, subs: Sequence["MPoly"], limit: int | None = None) -> "MPoly":
        """Compose: replace variable i by subs[i] (all over one variable set)."""
        if len(subs) != len(self.vars):
            raise ValueError("need one substitution per variable")
        target = subs[0].vars if subs else ()
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = subs[i] if k == 1 else power(i, k - 1) * subs[i]
            return powers[key]

        result = MPoly.zero(target)
        for e, c in self.terms.items():
            t = MPoly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            result = result + t
            if limit is not None:
                result.guard(limit)
        return result

    def embed(self, variables: Sequence[str]) -> "MPoly":
        """Re-express over a variable set containing all current variables."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.vars]
        n = len(variables)
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for p, k in zip(pos, e):
                ne[p] = k
            terms[tuple(ne)] = c
        return MPoly._raw(variables, terms)

    def rename(self, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        if len(variables) != len(self.vars):
            raise ValueError("rename needs the same number of variables")
        return MPoly._raw(variables, dict(self.terms))

    def derivative(self, i: int) -> "MPoly":
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return MPoly._raw(self.vars, terms)

    # text ---------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            parts.append(_signed(c, mono))
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    __str__ = to_text

    def __repr__(self):
        return f"MPoly({self.to_text()})"


def _term_key(item):
    e, _ = item
    return (-sum(e), tuple(-k for k in e))


def _signed(c: Scalar, mono: str) -> str:
    if not mono:
        return str(c)
    if c == ONE:
        return mono
    if c == -ONE:
        return "-" + mono
    if c.is_rational():
        return f"{c}*{mono}"
    if c.a == 0:
        return f"{c}*{mono}"
    return f"({c})*{mono}"


def vars_named(prefix_names: Sequence[str]) -> tuple:
    return tuple(prefix_names)


def poly_from_text(variables: Sequence[str], text: str) -> MPoly:
    """Parse the canonical text form (rational coefficients only)."""
    from fractions import Fraction

    variables = tuple(variables)
    result = MPoly.zero(variables)
    expr = text.replace(" ", "")
    if expr == "0":
        return result
    if expr[0] not in "+-":
        expr = "+" + expr
    # split on +/- that start a term; variable names never contain + or -
    terms = []
    cur = ""
    depth = 0
    for ch in expr:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and cur[-1] not in "*^/":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    for t in terms:
        sign = -1 if t[0] == "-" else 1
        body = t[1:]
        coef = Fraction(sign)
        exps = [0] * len(variables)
        for factor in body.split("*"):
            if not factor:
                continue
            name, _, power = factor.partition("^")
            if name in variables:
                exps[variables.index(name)] += int(power or 1)
            else:
                coef *= Fraction(factor)
        result = result + MPoly(variables, {tuple(exps): Scalar(coef)})
    return result
