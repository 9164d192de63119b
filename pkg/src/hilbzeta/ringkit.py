"""Exact coefficient rings and q-series.

Two coefficient rings are used throughout the package:

* ``LPoly``: polynomials in the Lefschetz class ``L`` (class of the affine line),
* ``WPoly``: weight polynomials in ``t``.

On top of them sit ``QPoly`` (exact polynomials in ``q``) and ``QSeries``
(power series in ``q`` known up to an explicit truncation order).  All values
are immutable; all coefficients are Python integers, so nothing overflows.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence


class Ring(str, Enum):
    LEFSCHETZ = "lefschetz"
    WEIGHT = "weight"


class RingMismatchError(TypeError):
    """Raised when operands live in different coefficient rings."""


class SubstitutionError(ValueError):
    """Raised when ``q -> 1/(qL)`` leaves a negative power of ``q`` or ``L``."""


class NotPolynomialCountError(ValueError):
    """Raised when sample values are not explained by an integer polynomial."""


class _Poly:
    """Dense univariate polynomial with integer coefficients, lowest degree first."""

    __slots__ = ("coeffs",)
    var = "x"
    ring: Ring

    def __init__(self, coeffs: int | Iterable[int] = ()):
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        out = []
        for c in coeffs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"non-integer coefficient {c}")
                c = c.numerator
            if not isinstance(c, int):
                raise TypeError(f"coefficient {c!r} is not an integer")
            out.append(int(c))
        while out and out[-1] == 0:
            out.pop()
        object.__setattr__(self, "coeffs", tuple(out))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def monomial(cls, k: int, c: int = 1):
        if k < 0:
            raise ValueError("negative exponent")
        return cls([0] * k + [c])

    @classmethod
    def gen(cls):
        return cls.monomial(1)

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c) == 1

    def __getitem__(self, k: int) -> int:
        if k < 0:
            return 0
        return self.coeffs[k] if k < len(self.coeffs) else 0

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, _Poly):
            raise RingMismatchError(
                f"cannot combine {type(self).__name__} with {type(other).__name__}"
            )
        if isinstance(other, int):
            return type(self)(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return type(self)(
            (a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)
        )

    __radd__ = __add__

    def __neg__(self):
        return type(self)(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return type(self)()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return type(self)(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = type(self)(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k: int):
        """Multiply by ``var**k``; negative ``k`` is allowed only if exact."""
        if k >= 0:
            return type(self)((0,) * k + self.coeffs)
        v = self.valuation
        if v is not None and v + k < 0:
            raise SubstitutionError(f"negative power of {self.var} in {self} * {self.var}^{k}")
        return type(self)(self.coeffs[-k:])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == type(self)(other).coeffs
        if isinstance(other, _Poly):
            return type(self) is type(other) and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                mag = str(abs(c))
            else:
                p = self.var if k == 1 else f"{self.var}^{k}"
                mag = p if abs(c) == 1 else f"{abs(c)}*{p}"
            parts.append((c < 0, mag))
        return _join_signed(parts)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.coeffs)})"


class LPoly(_Poly):
    """Polynomial in the Lefschetz class ``L``."""

    __slots__ = ()
    var = "L"
    ring = Ring.LEFSCHETZ


class WPoly(_Poly):
    """Weight polynomial in ``t``."""

    __slots__ = ()
    var = "t"
    ring = Ring.WEIGHT


def coefficient_class(ring: Ring):
    return LPoly if Ring(ring) is Ring.LEFSCHETZ else WPoly


def _join_signed(parts):
    out = ""
    for i, (neg, mag) in enumerate(parts):
        if i == 0:
            out = ("-" if neg else "") + mag
        else:
            out += (" - " if neg else " + ") + mag
    return out


def _coerce_coeffs(ring: Ring, coeffs):
    cls = coefficient_class(ring)
    out = []
    for c in coeffs:
        if isinstance(c, _Poly):
            if not isinstance(c, cls):
                raise RingMismatchError(f"{type(c).__name__} coefficient in {ring.value} ring")
            out.append(c)
        else:
            out.append(cls(c))
    return out


def _q_term(d: int, c: _Poly):
    qpart = "" if d == 0 else ("q" if d == 1 else f"q^{d}")
    if c.is_monomial():
        k = c.valuation
        a = c.coeffs[k]
        pieces = []
        if abs(a) != 1 or (d == 0 and k == 0):
            pieces.append(str(abs(a)))
        if qpart:
            pieces.append(qpart)
        if k:
            pieces.append(c.var if k == 1 else f"{c.var}^{k}")
        return a < 0, "*".join(pieces)
    inner = f"({c})"
    return False, inner if not qpart else f"{qpart}*{inner}"


class QPoly:
    """Exact polynomial in ``q`` with ``LPoly`` or ``WPoly`` coefficients."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs: Sequence = ()):
        ring = Ring(ring)
        cs = _coerce_coeffs(ring, coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("QPoly is immutable")

    @classmethod
    def from_terms(cls, ring: Ring, terms):
        """Build from ``{q_degree: coefficient}`` or ``[(q_degree, coefficient), ...]``."""
        items = terms.items() if isinstance(terms, dict) else terms
        items = list(items)
        if not items:
            return cls(ring)
        n = max(d for d, _ in items) + 1
        cs = [coefficient_class(ring)()] * n
        for d, c in items:
            if d < 0:
                raise ValueError("negative q-degree")
            cs[d] = cs[d] + _coerce_coeffs(ring, [c])[0]
        return cls(ring, cs)

    @classmethod
    def one(cls, ring: Ring):
        return cls(ring, [1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, d: int):
        if 0 <= d < len(self.coeffs):
            return self.coeffs[d]
        return coefficient_class(self.ring)()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _other(self, other):
        if isinstance(other, QPoly):
            if other.ring is not self.ring:
                raise RingMismatchError(f"{self.ring.value} vs {other.ring.value}")
            return other
        if isinstance(other, (int, _Poly)):
            return QPoly(self.ring, [other])
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, QSeries):
            return other + self
        o = self._other(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        return QPoly(self.ring, [self.coefficient(d) + o.coefficient(d) for d in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return QPoly(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return other * self
        o = self._other(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return QPoly(self.ring)
        zero = coefficient_class(self.ring)()
        out = [zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return QPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = QPoly.one(self.ring), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def map_coeffs(self, fn, ring: Ring):
        return QPoly(ring, [fn(c) for c in self.coeffs])

    def to_series(self, truncation: int) -> "QSeries":
        return QSeries(self.ring, truncation, [self.coefficient(d) for d in range(truncation + 1)])

    def terms(self):
        """``[[q_degree, [coefficients...]], ...]`` for the nonzero coefficients."""
        return [[d, list(c.coeffs)] for d, c in enumerate(self.coeffs) if c]

    @classmethod
    def from_json_terms(cls, ring: Ring, terms):
        return cls.from_terms(ring, [(int(d), coefficient_class(ring)(cs)) for d, cs in terms])

    def __eq__(self, other):
        if isinstance(other, QPoly):
            return self.ring is other.ring and self.coeffs == other.coeffs
        if isinstance(other, (int, _Poly)):
            try:
                return self == self._other(other)
            except RingMismatchError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __str__(self):
        parts = [_q_term(d, c) for d, c in enumerate(self.coeffs) if c]
        return _join_signed(parts) if parts else "0"

    def __repr__(self):
        return f"QPoly({self.ring.value}, {self})"


class QSeries:
    """Power series in ``q`` whose coefficients are known for degrees ``0..truncation``.

    Coefficients past the truncation are undefined: asking for one raises, and
    combining two series keeps the smaller truncation.
    """

    __slots__ = ("ring", "truncation", "coeffs")

    def __init__(self, ring: Ring, truncation: int, coeffs: Sequence = ()):
        ring = Ring(ring)
        if truncation < 0:
            raise ValueError("truncation must be non-negative")
        cs = _coerce_coeffs(ring, list(coeffs)[: truncation + 1])
        zero = coefficient_class(ring)()
        cs += [zero] * (truncation + 1 - len(cs))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "truncation", truncation)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    def coefficient(self, d: int):
        if d < 0:
            return coefficient_class(self.ring)()
        if d > self.truncation:
            raise IndexError(f"coefficient of q^{d} is beyond truncation O(q^{self.truncation + 1})")
        return self.coeffs[d]

    def truncate(self, n: int) -> "QSeries":
        if n > self.truncation:
            raise ValueError(f"cannot extend truncation {self.truncation} to {n}")
        return QSeries(self.ring, n, self.coeffs[: n + 1])

    def _other(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            if other.ring is not self.ring:
                raise RingMismatchError(f"{self.ring.value} vs {other.ring.value}")
            return other
        if isinstance(other, QPoly):
            if other.ring is not self.ring:
                raise RingMismatchError(f"{self.ring.value} vs {other.ring.value}")
            return other.to_series(self.truncation)
        if isinstance(other, (int, _Poly)):
            return QPoly(self.ring, [other]).to_series(self.truncation)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        n = min(self.truncation, o.truncation)
        return QSeries(self.ring, n, [self.coeffs[d] + o.coeffs[d] for d in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.ring, self.truncation, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        n = min(self.truncation, o.truncation)
        zero = coefficient_class(self.ring)()
        out = [zero] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(n + 1 - i):
                b = o.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return QSeries(self.ring, n, out)

    __rmul__ = __mul__

    def to_qpoly(self) -> QPoly:
        """The truncated polynomial ``sum_{d <= N} c_d q^d`` (drops the O-term)."""
        return QPoly(self.ring, self.coeffs)

    def first_mismatch(self, other) -> int | None:
        """Lowest q-degree where the two series differ, compared up to the common truncation."""
        o = self._other(other)
        for d in range(min(self.truncation, o.truncation) + 1):
            if self.coeffs[d] != o.coeffs[d]:
                return d
        return None

    def __eq__(self, other):
        if isinstance(other, QSeries):
            return (self.ring, self.truncation, self.coeffs) == (
                other.ring,
                other.truncation,
                other.coeffs,
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.truncation, self.coeffs))

    def __str__(self):
        body = str(self.to_qpoly())
        big_o = f"O(q^{self.truncation + 1})"
        return big_o if body == "0" else f"{body} + {big_o}"

    def __repr__(self):
        return f"QSeries({self.ring.value}, {self})"


def series_invert_unit(u: QSeries) -> QSeries:
    """Inverse of a series with constant term 1, to the same truncation."""
    if u.coeffs[0] != 1:
        raise ValueError(f"constant term {u.coeffs[0]} is not the unit 1")
    zero = coefficient_class(u.ring)()
    v = [coefficient_class(u.ring)(1)]
    for n in range(1, u.truncation + 1):
        acc = zero
        for k in range(1, n + 1):
            if u.coeffs[k]:
                acc = acc + u.coeffs[k] * v[n - k]
        v.append(-acc)
    return QSeries(u.ring, u.truncation, v)


def laurent_substitute(z: QPoly, delta: int) -> QPoly:
    """Return ``(q^2 L)^delta * z(1/(qL))``.

    The monomial ``q^d L^k`` goes to ``q^(2delta-d) L^(k+delta-d)``.  Raises
    :class:`SubstitutionError` if any exponent would be negative.
    """
    if z.ring is not Ring.LEFSCHETZ:
        raise RingMismatchError("q -> 1/(qL) is defined over the Lefschetz ring only")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if z.degree > 2 * delta:
        raise SubstitutionError(
            f"q-degree {z.degree} exceeds 2*delta = {2 * delta}; q^{2 * delta - z.degree} would survive"
        )
    terms = {}
    for d, c in enumerate(z.coeffs):
        if not c:
            continue
        try:
            terms[2 * delta - d] = c.shift(delta - d)
        except SubstitutionError:
            raise SubstitutionError(
                f"coefficient {c} of q^{d} has L-valuation below {d - delta}"
            ) from None
    return QPoly.from_terms(Ring.LEFSCHETZ, terms)


EULER = "euler"
WEIGHT = "weight"


def specialize(p, target: str):
    """Specialize Lefschetz data: ``euler`` sends L to 1, ``weight`` sends L to t^2.

    Accepts an ``LPoly`` (returning ``int`` or ``WPoly``) or a ``QPoly`` /
    ``QSeries`` over the Lefschetz ring, specialized coefficient-wise.  Euler
    specializations of q-objects come back as a tuple of integers by q-degree.
    """
    if target not in (EULER, WEIGHT):
        raise ValueError(f"unknown specialization target {target!r}")
    if isinstance(p, LPoly):
        if target == EULER:
            return sum(p.coeffs)
        out = [0] * (2 * len(p.coeffs))
        for k, c in enumerate(p.coeffs):
            out[2 * k] = c
        return WPoly(out)
    if isinstance(p, int):
        return p if target == EULER else WPoly(p)
    if isinstance(p, (QPoly, QSeries)):
        if p.ring is not Ring.LEFSCHETZ:
            raise RingMismatchError("specialization starts from the Lefschetz ring")
        if target == EULER:
            return tuple(sum(c.coeffs) for c in p.coeffs)
        cs = [specialize(c, WEIGHT) for c in p.coeffs]
        if isinstance(p, QPoly):
            return QPoly(Ring.WEIGHT, cs)
        return QSeries(Ring.WEIGHT, p.truncation, cs)
    raise RingMismatchError(f"cannot specialize {type(p).__name__}")


def interpolate_exact(samples: Sequence[tuple[int, int]], max_degree: int) -> LPoly:
    """Fit integer samples ``(point, value)`` by an integer polynomial in ``L``.

    The first ``max_degree + 1`` samples determine the fit; any further samples
    must agree with it.  Raises :class:`NotPolynomialCountError` otherwise.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    points = [x for x, _ in samples]
    if len(set(points)) != len(points):
        raise ValueError("sample points must be distinct")
    if len(samples) < max_degree + 1:
        raise ValueError(f"need at least {max_degree + 1} samples, got {len(samples)}")
    base = samples[: max_degree + 1]
    # Lagrange basis expanded in exact rationals
    coeffs = [Fraction(0)] * (max_degree + 1)
    for i, (xi, yi) in enumerate(base):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(base):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, b in enumerate(basis):
            coeffs[k] += yi * b / denom
    bad = [c for c in coeffs if c.denominator != 1]
    if bad:
        raise NotPolynomialCountError(
            f"interpolant has non-integer coefficients {[str(c) for c in coeffs]}"
        )
    fitted = LPoly([c.numerator for c in coeffs])
    for x, y in samples:
        if fitted(x) != y:
            raise NotPolynomialCountError(
                f"fitted {fitted} predicts {fitted(x)} at {x}, sample has {y}"
            )
    return fitted
