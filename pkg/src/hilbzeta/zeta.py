"""Generating series of Hilbert schemes of points on integral planar curves.

The series ``sum_n q^n [C^[n]]`` splits as the series of the normalization times
one polynomial factor per singular point,

    (1 - q)^b(p) * sum_n q^n [(C,p)^[n]],

a polynomial of degree ``2 delta_p`` in ``q``.  Their product ``Z_C`` satisfies
``Z_C(q) = (q^2 L)^delta Z_C(1/(qL))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .report import Verdict
from .ringkit import (
    WEIGHT,
    LPoly,
    QPoly,
    QSeries,
    Ring,
    RingMismatchError,
    SubstitutionError,
    WPoly,
    laurent_substitute,
    series_invert_unit,
    specialize,
)


class NeedsOracleError(LookupError):
    """A germ has no known local factor and no oracle data was supplied."""


def _lq(terms) -> QPoly:
    """Lefschetz ``QPoly`` from ``{q_degree: [L coefficients]}``."""
    return QPoly.from_terms(Ring.LEFSCHETZ, {d: LPoly(c) for d, c in terms.items()})


def check_functional_equation(z: QPoly, delta: int) -> Verdict:
    """Check ``z(q) = (q^2 L)^delta z(1/(qL))`` and ``deg_q z <= 2 delta``.

    The substitution pairs ``q^d`` with ``q^(2delta-d)``; mismatches are scanned
    from the top degree down, so a failure is blamed on the higher member of
    the offending pair.
    """
    name = f"functional equation (delta={delta})"
    if z.ring is not Ring.LEFSCHETZ:
        return Verdict(name, False, "numerator must be over the Lefschetz ring")
    data = {"delta": delta, "degree": z.degree, "numerator": str(z)}
    if z.degree > 2 * delta:
        data["first_offending"] = z.degree
        return Verdict(name, False, f"q-degree {z.degree} exceeds 2*delta = {2 * delta}", data)
    try:
        image = laurent_substitute(z, delta)
    except SubstitutionError as exc:
        return Verdict(name, False, str(exc), data)
    data["substituted"] = str(image)
    bad = [d for d in range(2 * delta, -1, -1) if image.coefficient(d) != z.coefficient(d)]
    if bad:
        d = bad[0]
        data["first_offending"] = d
        data["mismatches"] = bad
        return Verdict(
            name,
            False,
            f"q^{d} coefficient is {z.coefficient(d)}, substitution gives {image.coefficient(d)}",
            data,
        )
    return Verdict(name, True, "", data)


@dataclass(frozen=True)
class GermSpec:
    """A singular point: branch count ``b``, cogenus ``delta`` and optionally its factor.

    A stored ``local_factor`` is validated on construction: degree ``2 delta``,
    constant term 1, and the functional equation with exponent ``delta``.
    """

    label: str
    branches: int
    cogenus: int
    equation: str | None = None
    local_factor: QPoly | None = None

    def __post_init__(self):
        if self.branches < 1:
            raise ValueError("a germ has at least one branch")
        if self.cogenus < 0:
            raise ValueError("cogenus must be non-negative")
        if self.cogenus == 0 and self.branches != 1:
            raise ValueError("a point of cogenus 0 is smooth and has one branch")
        z = self.local_factor
        if z is not None:
            if z.ring is not Ring.LEFSCHETZ:
                raise RingMismatchError("local factors live over the Lefschetz ring")
            if z.degree != 2 * self.cogenus:
                raise ValueError(
                    f"{self.label}: factor has q-degree {z.degree}, expected {2 * self.cogenus}"
                )
            if z.coefficient(0) != 1:
                raise ValueError(f"{self.label}: factor must have constant term 1")
            verdict = check_functional_equation(z, self.cogenus)
            if not verdict:
                raise ValueError(f"{self.label}: {verdict.message}")


BUILTIN_GERMS = {
    "node": GermSpec("node", 2, 1, "x*y", _lq({0: [1], 1: [-1], 2: [0, 1]})),
    "cusp": GermSpec("cusp", 1, 1, "y^2 - x^3", _lq({0: [1], 2: [0, 1]})),
    "tacnode": GermSpec(
        "tacnode", 2, 2, "y^2 - x^4", _lq({0: [1], 1: [-1], 2: [0, 1], 3: [0, -1], 4: [0, 0, 1]})
    ),
    "ramphoid": GermSpec(
        "ramphoid",
        1,
        3,
        "y^3 - x^4",
        _lq({0: [1], 2: [0, 1], 3: [0, 0, 1], 4: [0, 0, 1], 6: [0, 0, 0, 1]}),
    ),
}

SMOOTH_POINT = GermSpec("smooth", 1, 0, "y")


def builtin_germ(label: str) -> GermSpec:
    try:
        return BUILTIN_GERMS[label]
    except KeyError:
        raise NeedsOracleError(f"unknown germ {label!r}; built-ins are {sorted(BUILTIN_GERMS)}") from None


@dataclass(frozen=True)
class CurveSpec:
    """Integral curve with normalization of genus ``r`` and the listed singular points."""

    normalization_genus: int
    germs: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.normalization_genus < 0:
            raise ValueError("normalization genus must be non-negative")
        object.__setattr__(self, "germs", tuple(self.germs))

    @property
    def cogenus(self) -> int:
        return sum(g.cogenus for g in self.germs)

    @property
    def arithmetic_genus(self) -> int:
        return self.normalization_genus + self.cogenus


def local_factor(germ: GermSpec, primes: Sequence[int] | None = None, jobs: int = 1) -> QPoly:
    """``(1 - q)^b * sum_n q^n [(C,p)^[n]]`` for one germ.

    Uses the stored factor when present; otherwise, with ``primes`` given and
    an equation on record, the factor is computed by the point-counting oracle.
    """
    if germ.local_factor is not None:
        return germ.local_factor
    if germ.cogenus == 0:
        return QPoly.one(Ring.LEFSCHETZ)
    if germ.equation is None or primes is None:
        raise NeedsOracleError(
            f"germ {germ.label!r} needs oracle: supply its equation and a prime set"
        )
    from .oracle import GermEq, oracle_local_factor

    eq = GermEq.parse(germ.equation, germ.cogenus, germ.branches, germ.label)
    factor, _ = oracle_local_factor(eq, primes, jobs=jobs)
    # re-run construction checks on the computed factor
    GermSpec(germ.label, germ.branches, germ.cogenus, germ.equation, factor)
    return factor


def _geometric_denominator(ring: Ring, truncation: int) -> QSeries:
    """``1/((1 - q)(1 - q L))``, with ``L`` read as ``t^2`` in the weight ring."""
    l_class = LPoly.gen() if ring is Ring.LEFSCHETZ else WPoly.monomial(2)
    den = QPoly(ring, [1, -1]) * QPoly(ring, [1, -l_class])
    return series_invert_unit(den.to_series(truncation))


def smooth_series(r: int, ring: Ring, truncation: int) -> QSeries:
    """``sum_d q^d [Sym^d]`` of a smooth curve of genus ``r``.

    Over the Lefschetz ring only ``r = 0`` is representable; the weight form is
    ``(1 + tq)^(2r) / ((1 - q)(1 - t^2 q))``.
    """
    ring = Ring(ring)
    if ring is Ring.LEFSCHETZ:
        if r != 0:
            raise ValueError(f"genus-{r} curve classes are not in Z[L]; use the weight ring")
        return _geometric_denominator(ring, truncation)
    odd = QPoly(Ring.WEIGHT, [1, WPoly([0, 1])]) ** (2 * r)
    return _geometric_denominator(ring, truncation) * odd


def _in_ring(z: QPoly, ring: Ring) -> QPoly:
    return z if ring is Ring.LEFSCHETZ else specialize(z, WEIGHT)


def numerator(curve: CurveSpec, primes: Sequence[int] | None = None) -> QPoly:
    """``Z_C``: the product of the local factors, of degree ``2 delta``."""
    z = QPoly.one(Ring.LEFSCHETZ)
    for g in curve.germs:
        z = z * local_factor(g, primes)
    return z


def curve_series(
    curve: CurveSpec, ring: Ring, truncation: int, primes: Sequence[int] | None = None
) -> QSeries:
    """``sum_n q^n [C^[n]]``: normalization series times all local factors."""
    ring = Ring(ring)
    s = smooth_series(curve.normalization_genus, ring, truncation)
    return s * _in_ring(numerator(curve, primes), ring)


@dataclass(frozen=True)
class RationalZeta:
    """``numerator / ((1 - q)^denom_q (1 - qL)^denom_qL)``; ``L`` reads ``t^2`` in the weight ring."""

    numerator: QPoly
    denom_q: int = 1
    denom_qL: int = 1

    @property
    def ring(self) -> Ring:
        return self.numerator.ring

    def expand(self, truncation: int) -> QSeries:
        ring = self.ring
        l_class = LPoly.gen() if ring is Ring.LEFSCHETZ else WPoly.monomial(2)
        den = QPoly(ring, [1, -1]) ** self.denom_q * QPoly(ring, [1, -l_class]) ** self.denom_qL
        return self.numerator.to_series(truncation) * series_invert_unit(den.to_series(truncation))

    @classmethod
    def from_series(cls, series: QSeries, degree: int, denom_q: int = 1, denom_qL: int = 1):
        """Recover the numerator of known degree; the series must reach past it."""
        ring = series.ring
        l_class = LPoly.gen() if ring is Ring.LEFSCHETZ else WPoly.monomial(2)
        den = QPoly(ring, [1, -1]) ** denom_q * QPoly(ring, [1, -l_class]) ** denom_qL
        prod = series * den
        if prod.truncation < degree:
            raise ValueError(f"series truncation {series.truncation} is below degree {degree}")
        tail = [d for d in range(degree + 1, prod.truncation + 1) if prod.coeffs[d]]
        if tail:
            raise ValueError(f"series is not rational of numerator degree {degree}: q^{tail[0]} survives")
        return cls(QPoly(ring, prod.coeffs[: degree + 1]), denom_q, denom_qL)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.value,
            "numerator": str(self.numerator),
            "numerator_terms": self.numerator.terms(),
            "denominator": self.denominator_str(),
            "degree": self.numerator.degree,
        }

    def denominator_str(self) -> str:
        second = "(1 - q*L)" if self.ring is Ring.LEFSCHETZ else "(1 - q*t^2)"
        parts = []
        for base, e in (("(1 - q)", self.denom_q), (second, self.denom_qL)):
            if e:
                parts.append(base if e == 1 else f"{base}^{e}")
        return "*".join(parts) or "1"


def rational_zeta(curve: CurveSpec, ring: Ring = Ring.LEFSCHETZ, primes=None) -> RationalZeta:
    ring = Ring(ring)
    z = numerator(curve, primes)
    if ring is Ring.LEFSCHETZ:
        if curve.normalization_genus != 0:
            raise ValueError("the Lefschetz form needs a rational normalization")
        return RationalZeta(z)
    odd = QPoly(Ring.WEIGHT, [1, WPoly([0, 1])]) ** (2 * curve.normalization_genus)
    return RationalZeta(odd * specialize(z, WEIGHT))


def nodal_weight_series(delta: int, r: int, truncation: int) -> QSeries:
    """``(1 - q + t^2 q^2)^delta (1 + tq)^(2r) / ((1 - q)(1 - t^2 q))`` by explicit coefficients.

    Expands each factor by its binomial/multinomial formula rather than by
    series multiplication.
    """
    if delta < 0 or r < 0:
        raise ValueError("delta and r must be non-negative")
    coeffs = []
    for d in range(truncation + 1):
        acc = {}
        # (1 - q + t^2 q^2)^delta: j copies of -q and k copies of t^2 q^2
        for k in range(delta + 1):
            for j in range(delta - k + 1):
                if j + 2 * k > d:
                    continue
                mult = comb(delta, k) * comb(delta - k, j) * (-1) ** j
                for m in range(min(2 * r, d - j - 2 * k) + 1):
                    c = mult * comb(2 * r, m)
                    rest = d - j - 2 * k - m
                    for l in range(rest + 1):
                        e = 2 * k + m + 2 * l
                        acc[e] = acc.get(e, 0) + c
        top = max(acc, default=-1)
        coeffs.append(WPoly([acc.get(e, 0) for e in range(top + 1)]))
    return QSeries(Ring.WEIGHT, truncation, coeffs)


def weight_crosscheck(delta: int, r: int, truncation: int) -> Verdict:
    """Closed nodal weight series versus the weight specialization of the node product."""
    name = f"weight cross-check (delta={delta}, r={r}, q^{truncation})"
    closed = nodal_weight_series(delta, r, truncation)
    curve = CurveSpec(r, [BUILTIN_GERMS["node"]] * delta)
    motivic = curve_series(curve, Ring.WEIGHT, truncation)
    sides = [("weight-ring product", motivic)]
    if r == 0:
        sides.append(("specialized Lefschetz series", specialize(curve_series(curve, Ring.LEFSCHETZ, truncation), WEIGHT)))
    for label, other in sides:
        d = closed.first_mismatch(other)
        if d is not None:
            a, b = closed.coeffs[d], other.coeffs[d]
            i = next(i for i in range(max(a.degree, b.degree) + 1) if a[i] != b[i])
            return Verdict(
                name,
                False,
                f"{label} differs at q^{d} t^{i}: closed {a}, product {b}",
                {"d": d, "i": i},
            )
    return Verdict(name, True, "", {"series": str(closed)})
