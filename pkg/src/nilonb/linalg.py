"""Exact linear algebra over Scalar.

Matrices are lists of row lists.  Pivoting always takes the first nonzero
entry, so results are deterministic.
"""
from __future__ import annotations

from .errors import SingularMatrix
from .scalar import ONE, ZERO, Scalar, to_scalar


def as_matrix(rows) -> list[list[Scalar]]:
    return [[to_scalar(x) for x in row] for row in rows]


def zeros(n: int, m: int | None = None) -> list[list[Scalar]]:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> list[list[Scalar]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def matmul(a, b):
    bt = transpose(b)
    out = []
    for row in a:
        out.append([_dot(row, col) for col in bt])
    return out


def matvec(a, v):
    return [_dot(row, v) for row in a]


def vecmat(v, a):
    return [_dot(v, col) for col in transpose(a)]


def _dot(u, v):
    total = ZERO
    for x, y in zip(u, v):
        if x and y:
            total = total + x * y
    return total


dot = _dot


def rref(rows):
    """Reduced row echelon form.  Returns (rows, pivot columns)."""
    a = [list(r) for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(a, ncols: int | None = None):
    """Basis of {x : a x = 0}."""
    if not a:
        n = ncols or 0
        return identity(n)
    n = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def det(a) -> Scalar:
    n = len(a)
    m = [list(r) for r in a]
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result = result * p
        inv = p.inverse()
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a):
    n = len(a)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in red]


def solve(a, b):
    """Solve a x = b for square invertible a."""
    return matvec(inverse(a), b)


def in_span(basis_rref, pivots, v) -> bool:
    """Membership of v in the row space given by an rref basis."""
    w = list(v)
    for row, p in zip(basis_rref, pivots):
        if w[p]:
            f = w[p]
            w = [x - f * y for x, y in zip(w, row)]
    return not any(w)


def pfaffian(a) -> Scalar:
    """Pfaffian of an antisymmetric matrix by exact skew elimination."""
    n = len(a)
    if n % 2:
        return ZERO
    m = [list(r) for r in a]
    result = ONE
    while m:
        k = next((j for j in range(1, len(m)) if m[0][j]), None)
        if k is None:
            return ZERO
        if k != 1:
            # symmetric swap of indices 1 and k flips the sign
            m[1], m[k] = m[k], m[1]
            for row in m:
                row[1], row[k] = row[k], row[1]
            result = -result
        p = m[0][1]
        result = result * p
        inv = p.inverse()
        c0 = m[0][2:]
        c1 = m[1][2:]
        rest = []
        for i, row in enumerate(m[2:]):
            new = []
            for j, x in enumerate(row[2:]):
                # D + (c1 c0^T - c0 c1^T)/p with c read as columns
                new.append(x + (c1[i] * c0[j] - c0[i] * c1[j]) * inv)
            rest.append(new)
        m = rest
    return result
