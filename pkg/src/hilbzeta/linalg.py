"""Exact linear algebra over the rationals and over prime fields.

Matrices are lists of rows; vectors are lists.  Nothing here touches floating
point.
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows, ncols: int | None = None):
    """Reduced row echelon form over Q.  Returns ``(rows, pivot_columns)``."""
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(matrix, ncols: int | None = None):
    """Basis of ``{x : matrix @ x = 0}`` over Q."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    red, pivots = rref(matrix, ncols) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matsub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def is_zero(a) -> bool:
    return all(x == 0 for row in a for x in row)


def span(vectors, dim: int):
    """A basis (RREF rows) of the span of ``vectors`` in Q^dim."""
    if not vectors:
        return []
    return rref(vectors, dim)[0]


def image(matrix, dim: int):
    """Column space of a square ``dim x dim`` matrix, as basis rows."""
    cols = [list(c) for c in zip(*matrix)] if matrix else []
    return span(cols, dim)


def kernel(matrix, dim: int):
    return nullspace(matrix, dim) if matrix else [
        [Fraction(int(i == j)) for j in range(dim)] for i in range(dim)
    ]


def intersect(a, b, dim: int):
    """Basis of the intersection of the row spans of ``a`` and ``b``."""
    if not a or not b:
        return []
    # x.a = y.b  <=>  (x, -y) in the left kernel of [a; b]
    stacked = [list(r) for r in a] + [[-x for x in r] for r in b]
    cols = [list(c) for c in zip(*stacked)]
    coeffs = nullspace(cols, len(stacked))
    vecs = []
    for c in coeffs:
        vecs.append([sum(c[i] * a[i][k] for i in range(len(a))) for k in range(dim)])
    return span(vecs, dim)


# --- prime fields -----------------------------------------------------------


def rref_mod(rows, p: int, ncols: int):
    """Reduced row echelon form over F_p.  Returns ``(rows, pivots)`` as tuples."""
    m = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        inv = pow(row[c], p - 2, p)
        if inv != 1:
            row = [(x * inv) % p for x in row]
            m[r] = row
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    mi = m[i]
                    m[i] = [(a - f * b) % p for a, b in zip(mi, row)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(x) for x in m[:r]), tuple(pivots)


def reduce_mod(v, basis, pivots, p: int):
    """Reduce ``v`` against an RREF basis over F_p."""
    v = list(v)
    for row, c in zip(basis, pivots):
        f = v[c]
        if f:
            v = [(a - f * b) % p for a, b in zip(v, row)]
    return v
