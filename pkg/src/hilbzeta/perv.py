"""Rank and weight bookkeeping for the decomposition theorem on relative Hilbert schemes.

Rank tables follow Macdonald's description of the cohomology of symmetric
products,

    R^i Sym^d = sum_{k <= i/2} wedge^(i-2k) R^1 (-k)       (i <= d),

extended to ``i > d`` by hard Lefschetz, and its restatement through the
Jacobian, ``R^i J = wedge^i R^1``.

The monodromy part builds ``H^1`` of a smooth fibre near a curve with
``delta`` nodes and normalization genus ``r``: ``2r`` invariant vectors and
``delta`` Picard-Lefschetz pairs ``(zeta_k, eta_k)`` with
``T_k eta_k = eta_k + zeta_k``.  The linear-algebra operation of Macdonald's
formula is applied to these matrices, invariants are taken, and weights come
from the monodromy weight filtration of ``N = sum_k log T_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from . import linalg
from .report import Verdict
from .ringkit import QPoly, QSeries, Ring, WPoly, series_invert_unit


@dataclass(frozen=True)
class RankTable:
    context: str  # "hilbert" or "jacobian"
    g: int
    ranks: tuple
    d: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))

    def is_palindromic(self) -> bool:
        return self.ranks == self.ranks[::-1]

    def __str__(self):
        return " ".join(map(str, self.ranks))


def macdonald_ranks(g: int, d: int) -> RankTable:
    if g < 0 or d < 0:
        raise ValueError("g and d must be non-negative")
    low = [sum(comb(2 * g, i - 2 * k) for k in range(i // 2 + 1)) for i in range(d + 1)]
    return RankTable("hilbert", g, low + low[:d][::-1], d)


def jacobian_ranks(g: int) -> RankTable:
    if g < 0:
        raise ValueError("g must be non-negative")
    return RankTable("jacobian", g, [comb(2 * g, i) for i in range(2 * g + 1)])


def hilb_from_jac(g: int, d: int) -> RankTable:
    jac = jacobian_ranks(g).ranks
    low = []
    for i in range(d + 1):
        low.append(sum(jac[i - 2 * k] for k in range(i // 2 + 1) if i - 2 * k < len(jac)))
    return RankTable("hilbert", g, low + low[:d][::-1], d)


def series_identity_check(g: int, truncation: int) -> Verdict:
    """``sum_d q^d sum_i rank(R^i Sym^d) t^i`` against ``(1 + tq)^(2g) / ((1 - q)(1 - t^2 q))``.

    A summand ``wedge^(i-2k)(-k)`` has weight ``i - 2k + 2k = i``, hence ``t^i``.
    """
    name = f"Macdonald series identity (g={g}, q^{truncation})"
    lhs = QSeries(
        Ring.WEIGHT, truncation, [WPoly(macdonald_ranks(g, d).ranks) for d in range(truncation + 1)]
    )
    num = QPoly(Ring.WEIGHT, [WPoly.monomial(i, comb(2 * g, i)) for i in range(2 * g + 1)])
    den = QPoly(Ring.WEIGHT, [1, -1]) * QPoly(Ring.WEIGHT, [1, -WPoly.monomial(2)])
    rhs = num.to_series(truncation) * series_invert_unit(den.to_series(truncation))
    d = lhs.first_mismatch(rhs)
    if d is not None:
        return Verdict(name, False, f"q^{d}: ranks give {lhs.coeffs[d]}, series gives {rhs.coeffs[d]}")
    return Verdict(name, True)


def perverse_relation(jac_perverse, g: int, d: int) -> tuple:
    """Perverse ranks of the relative Hilbert scheme from those of the compactified Jacobian.

    ``jac_perverse`` is indexed by perverse degree ``-g..g``; the result is
    indexed ``-d..d`` with ``out(i - d) = sum_k jac(i - g - 2k)`` for ``i <= d``
    and the remaining half filled in by symmetry.
    """
    jac = list(jac_perverse)
    if len(jac) != 2 * g + 1:
        raise ValueError(f"expected {2 * g + 1} entries indexed -{g}..{g}, got {len(jac)}")
    if jac != jac[::-1]:
        raise ValueError("perverse ranks of the Jacobian must be symmetric under j -> -j")

    def at(j):
        return jac[j + g] if -g <= j <= g else 0

    low = [sum(at(i - g - 2 * k) for k in range(i // 2 + 1)) for i in range(d + 1)]
    return tuple(low + low[:d][::-1])


def projective_bundle_ranks(jac_perverse, g: int, d: int) -> tuple:
    """Perverse ranks of a ``P^(d-g)``-bundle over the Jacobian, indexed ``-d..d``."""
    if d < g:
        raise ValueError("a P^(d-g) bundle needs d >= g")
    n = d - g
    out = [0] * (2 * d + 1)
    for j, v in enumerate(jac_perverse):
        for s in range(-n, n + 1, 2):
            out[(j - g) + s + d] += v
    return tuple(out)


# --- exterior powers and monodromy ------------------------------------------


def wedge_power(matrix, j: int):
    """Matrix of ``wedge^j`` of ``matrix`` on the basis of sorted index tuples.

    Matrices act on column vectors: ``matrix[r][c]`` is the ``e_r`` coefficient
    of the image of ``e_c``.
    """
    n = len(matrix)
    basis = list(combinations(range(n), j))
    index = {s: i for i, s in enumerate(basis)}
    cols = [[(r, matrix[r][c]) for r in range(n) if matrix[r][c]] for c in range(n)]
    out = [[0] * len(basis) for _ in basis]
    for ci, s in enumerate(basis):
        cur = {(): 1}
        for c in s:
            nxt = {}
            for key, coef in cur.items():
                for r, v in cols[c]:
                    if r in key:
                        continue
                    # append r, then sort it into place
                    sign = -1 if sum(1 for x in key if x > r) % 2 else 1
                    new = tuple(sorted(key + (r,)))
                    nxt[new] = nxt.get(new, 0) + sign * coef * v
            cur = {k: v for k, v in nxt.items() if v}
        for key, coef in cur.items():
            out[index[key]][ci] += coef
    return out


def matrix_log_unipotent(t):
    """``log t`` for unipotent ``t`` via the terminating series in ``t - 1``."""
    n = len(t)
    x = linalg.matsub(t, linalg.identity(n))
    acc = [[Fraction(0)] * n for _ in range(n)]
    power = x
    m = 1
    while not linalg.is_zero(power):
        if m > n:
            raise ValueError("matrix is not unipotent")
        sign = Fraction((-1) ** (m + 1), m)
        acc = [[a + sign * p for a, p in zip(ra, rp)] for ra, rp in zip(acc, power)]
        power = linalg.matmul(power, x)
        m += 1
    return acc


@dataclass(frozen=True)
class MonodromyRep:
    """Monodromy on ``H^1`` of the smooth fibre and on ``S^{i,[d]} H^1``."""

    delta: int
    r: int

    @property
    def dim(self) -> int:
        return 2 * self.r + 2 * self.delta

    def generators(self):
        """``T_1..T_delta`` on ``H^1``; basis ``zeta_0, eta_0, zeta_1, ..., then 2r fixed``."""
        out = []
        for k in range(self.delta):
            t = linalg.identity(self.dim)
            t[2 * k][2 * k + 1] = 1
            out.append(t)
        return out

    def construction(self, i: int, d: int):
        """Summands ``(j, twist)`` meaning ``wedge^j H^1 (-twist)`` in degree ``i`` of ``Sym^d``."""
        if not 0 <= i <= 2 * d:
            raise ValueError(f"degree {i} outside 0..{2 * d}")
        base, extra = (i, 0) if i <= d else (2 * d - i, i - d)
        return [
            (base - 2 * k, k + extra) for k in range(base // 2 + 1) if base - 2 * k <= self.dim
        ]

    def summand_matrices(self, j: int):
        return [wedge_power(t, j) for t in self.generators()]


def _invariants(mats, n: int):
    if not mats:
        return linalg.kernel([], n)
    stacked = []
    for m in mats:
        stacked.extend(linalg.matsub(m, linalg.identity(n)))
    return linalg.nullspace(stacked, n)


def nodal_invariants(delta: int, r: int, i: int, d: int) -> int:
    """Dimension of the monodromy invariants on ``S^{i,[d]} H^1``."""
    rep = MonodromyRep(delta, r)
    total = 0
    for j, _ in rep.construction(i, d):
        n = comb(rep.dim, j)
        total += len(_invariants(rep.summand_matrices(j), n))
    return total


def weight_filtration(nilp, n: int) -> dict:
    """Monodromy weight filtration of nilpotent ``nilp`` centered at 0.

    ``W_k = sum_{a - b = k} ker N^(a+1) cap im N^b``; returns ``{k: basis}`` for
    every ``k`` where ``W_k`` differs from both 0 and the whole space, plus the
    bounds.
    """
    powers = [linalg.identity(n)]
    while not linalg.is_zero(powers[-1]):
        powers.append(linalg.matmul(powers[-1], nilp))
        if len(powers) > n + 2:
            raise ValueError("matrix is not nilpotent")
    ell = len(powers) - 2  # N^(ell+1) = 0
    kers = [linalg.kernel(pw, n) for pw in powers]
    ims = [linalg.image(pw, n) for pw in powers]
    filt = {}
    for k in range(-ell - 1, ell + 1):
        vecs = []
        for b in range(ell + 1):
            a = k + b
            if a < 0 or a + 1 >= len(kers):
                if a >= 0 and b < len(ims):
                    vecs.extend(ims[b])  # ker N^(a+1) is everything
                continue
            vecs.extend(linalg.intersect(kers[a + 1], ims[b], n))
        filt[k] = linalg.span(vecs, n)
    return filt


def _dim_cap(a, b, n):
    if not a or not b:
        return 0
    return len(a) + len(b) - linalg.rank(list(a) + list(b))


def invariant_weights(delta: int, r: int, i: int, d: int) -> dict:
    """``{weight: dim}`` of the graded pieces of the invariants in degree ``i``."""
    rep = MonodromyRep(delta, r)
    out = {}
    for j, twist in rep.construction(i, d):
        n = comb(rep.dim, j)
        ts = rep.summand_matrices(j)
        inv = _invariants(ts, n)
        if not ts:
            out[j + 2 * twist] = out.get(j + 2 * twist, 0) + len(inv)
            continue
        nilp = [[Fraction(0)] * n for _ in range(n)]
        for t in ts:
            lg = matrix_log_unipotent(t)
            nilp = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(nilp, lg)]
        filt = weight_filtration(nilp, n)
        prev = 0
        for k in sorted(filt):
            cur = _dim_cap(filt[k], inv, n)
            if cur > prev:
                w = k + j + 2 * twist
                out[w] = out.get(w, 0) + cur - prev
            prev = cur
    return out


def nodal_weight_polynomial(delta: int, r: int, d: int) -> WPoly:
    """``sum_{i,w} t^w (-1)^(w+i) dim Gr_w`` of the invariant part of ``H^*`` of ``Sym^d``."""
    acc = {}
    for i in range(2 * d + 1):
        for w, dim in invariant_weights(delta, r, i, d).items():
            acc[w] = acc.get(w, 0) + (-1) ** (w + i) * dim
    top = max(acc, default=-1)
    return WPoly([acc.get(w, 0) for w in range(top + 1)])
