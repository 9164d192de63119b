"""Hilbert-function strata of the compactified Jacobian of a rational curve.

A degree-0 rank-1 torsion-free sheaf ``F`` on a curve of arithmetic genus ``g``
has Hilbert function ``h(d) = dim H^0(F(d))``: zero for ``d < 0``, equal to
``d + 1 - g`` past ``2g - 2``, and rising by 0 or 1 at each step in between.
Each stratum of constant ``h`` contributes

    Z_h(q) = sum_{d in phi_-} q^d L^(h(d)-1) - sum_{d in phi_+} q^d L^(h(d-1))

to the zeta numerator, where ``phi_pm`` are the degrees at which the second
difference ``2h(d-1) - h(d-2) - h(d)`` equals ``pm 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .linalg import nullspace, rref
from .report import Verdict
from .ringkit import LPoly, QPoly, Ring, SubstitutionError, laurent_substitute


class NoDecompositionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class HilbertFn:
    """Hilbert function stored by its values on ``[0, 2g - 2]``."""

    g: int
    values: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.g < 0:
            raise ValueError("genus must be non-negative")
        want = max(2 * self.g - 1, 0)
        if len(self.values) != want:
            raise ValueError(f"genus {self.g} needs {want} values, got {len(self.values)}")

    def __call__(self, d: int) -> int:
        if d < 0:
            return 0
        if d > 2 * self.g - 2:
            return d + 1 - self.g
        return self.values[d]

    def is_admissible(self) -> bool:
        return all(self(d) - self(d - 1) in (0, 1) for d in range(0, 2 * self.g))

    def __str__(self):
        return "(" + ",".join(map(str, self.values)) + ")"


def enumerate_admissible(g: int) -> list[HilbertFn]:
    """All admissible Hilbert functions of genus ``g``, lexicographically."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    if g == 0:
        return [HilbertFn(0)]
    out = []
    # steps h(d) - h(d-1) for d = 0..2g-1; exactly g of the 2g steps are up
    for steps in product((0, 1), repeat=2 * g):
        if sum(steps) != g:
            continue
        vals, acc = [], 0
        for s in steps[:-1]:
            acc += s
            vals.append(acc)
        out.append(HilbertFn(g, vals))
    return sorted(out, key=lambda h: h.values)


def phi_sets(h: HilbertFn) -> tuple[frozenset, frozenset]:
    minus, plus = set(), set()
    for d in range(-1, 2 * h.g + 3):
        s = 2 * h(d - 1) - h(d - 2) - h(d)
        if s == -1:
            minus.add(d)
        elif s == 1:
            plus.add(d)
        elif s != 0:
            raise ValueError(f"{h} is not admissible: second difference {s} at {d}")
    return frozenset(minus), frozenset(plus)


def z_h(h: HilbertFn) -> QPoly:
    minus, plus = phi_sets(h)
    terms = [(d, LPoly.monomial(h(d) - 1)) for d in minus]
    terms += [(d, -LPoly.monomial(h(d - 1))) for d in plus]
    return QPoly.from_terms(Ring.LEFSCHETZ, terms)


def dual(h: HilbertFn) -> HilbertFn:
    """``h^v(d) = h(2g - 2 - d) + d + 1 - g``; raises if the result is not admissible."""
    g = h.g
    out = HilbertFn(g, [h(2 * g - 2 - d) + d + 1 - g for d in range(max(2 * g - 1, 0))])
    if not out.is_admissible():
        raise ValueError(f"dual {out} of {h} is not admissible (malformed input)")
    return out


def check_zh_duality(h: HilbertFn) -> Verdict:
    name = f"Z_h duality h={h}"
    try:
        hv = dual(h)
        lhs = laurent_substitute(z_h(h), h.g)
    except (ValueError, SubstitutionError) as exc:
        return Verdict(name, False, str(exc))
    rhs = z_h(hv)
    if lhs != rhs:
        return Verdict(name, False, f"substituted {lhs} != Z_(h^v) {rhs}", {"dual": str(hv)})
    return Verdict(name, True, "", {"dual": str(hv), "z_h": str(z_h(h))})


@dataclass
class StrataDecomp:
    g: int
    entries: list = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for h, _ in self.entries:
            if h.g != self.g:
                raise ValueError(f"{h} has genus {h.g}, decomposition has {self.g}")
            if h in seen:
                raise ValueError(f"duplicate stratum {h}")
            seen.add(h)

    def as_dict(self) -> dict:
        return dict(self.entries)

    def total_class(self) -> LPoly:
        acc = LPoly()
        for _, cls in self.entries:
            acc = acc + cls
        return acc


def assemble(decomp: StrataDecomp) -> QPoly:
    acc = QPoly(Ring.LEFSCHETZ)
    for h, cls in decomp.entries:
        acc = acc + z_h(h) * cls
    return acc


@dataclass
class StrataSolution:
    """Solutions ``x_h`` of ``sum_h x_h Z_h = Z`` with ``deg_L x_h <= bound``.

    Vectors are indexed by ``(h, L-power)`` in the order of ``unknowns``.
    The particular solution sets free variables to zero.
    """

    g: int
    bound: int
    unknowns: list
    particular: list
    kernel: list

    @property
    def unique(self) -> bool:
        return not self.kernel

    def _classes(self, vec):
        out = {}
        for (h, k), x in zip(self.unknowns, vec):
            out.setdefault(h, [Fraction(0)] * (self.bound + 1))[k] = x
        return out

    def particular_decomp(self) -> StrataDecomp:
        entries = []
        for h, cs in self._classes(self.particular).items():
            if any(c.denominator != 1 for c in cs):
                raise NoDecompositionError(f"particular class of {h} is not integral: {cs}")
            cls = LPoly([c.numerator for c in cs])
            if cls:
                entries.append((h, cls))
        return StrataDecomp(self.g, entries)

    def kernel_classes(self) -> list[dict]:
        return [
            {h: [str(c) for c in cs] for h, cs in self._classes(v).items() if any(cs)}
            for v in self.kernel
        ]


def solve_strata(z: QPoly, g: int, bound: int | None = None) -> StrataSolution:
    """Invert strata assembly over Q for classes of L-degree at most ``bound``.

    ``bound`` defaults to ``max(deg_L z, g)``.  Raises
    :class:`NoDecompositionError` if no solution exists.
    """
    if z.degree > 2 * g:
        raise NoDecompositionError(f"q-degree {z.degree} exceeds the span 2g = {2 * g}")
    if bound is None:
        bound = max([c.degree for c in z.coeffs] + [g])
    hs = enumerate_admissible(g)
    zs = {h: z_h(h) for h in hs}
    unknowns = [(h, k) for h in hs for k in range(bound + 1)]
    top_l = bound + max([c.degree for zh in zs.values() for c in zh.coeffs] + [0])
    top_l = max(top_l, max([c.degree for c in z.coeffs] + [0]))
    rows, rhs = [], []
    for d in range(2 * g + 1):
        for e in range(top_l + 1):
            rows.append([zs[h].coefficient(d)[e - k] if e >= k else 0 for h, k in unknowns])
            rhs.append(z.coefficient(d)[e])
    n = len(unknowns)
    aug = [row + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        raise NoDecompositionError(f"{z} is not a strata assembly for g = {g}")
    part = [Fraction(0)] * n
    for row, c in zip(red, pivots):
        part[c] = row[n]
    kern = nullspace(rows, n)
    return StrataSolution(g, bound, unknowns, part, kern)
