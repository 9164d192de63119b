"""Finite-field point counts of punctual Hilbert schemes of plane curve germs.

For a germ ``f(x, y) = 0`` and a prime ``p`` we count ideals of colength ``n``
in ``F_p[[x, y]]/(f)``.  Every such ideal contains ``m^n``, so the count takes
place in the finite-dimensional algebra ``F_p[x, y]/(f, m^N)`` with ``N >= n``.

Ideals are enumerated colength by colength: an ideal ``I`` of colength ``k+1``
sits inside some ideal ``J`` of colength ``k`` with ``mJ <= I``, so the
children of ``J`` are the hyperplanes of ``J`` that contain ``mJ``.  Each
child is put in reduced echelon form and deduplicated.

Counts over several primes are then fitted to a polynomial in ``L``.
"""

from __future__ import annotations

import itertools
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import reduce_mod, rref_mod
from .ringkit import (
    LPoly,
    NotPolynomialCountError,
    QPoly,
    QSeries,
    Ring,
    interpolate_exact,
)

DEFAULT_PRIMES = (2, 3, 5, 7)


class GermParseError(ValueError):
    pass


class DegenerateReductionError(ValueError):
    """The germ does not survive reduction modulo the chosen prime."""


class OracleMismatchError(ValueError):
    """Fitted counts are inconsistent with the declared germ data."""


# --- bivariate polynomials ---------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])|(\*\*|[-+*^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise GermParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} at {pos}")
        num, var, op = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif var is not None:
            out.append(("var", var))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def _padd(a, b, sign=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
        if not out[k]:
            del out[k]
    return out


def _pmul(a, b):
    out = {}
    for (i, j), u in a.items():
        for (k, l), v in b.items():
            key = (i + k, j + l)
            out[key] = out.get(key, 0) + u * v
    return {k: v for k, v in out.items() if v}


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise GermParseError(f"expected {want}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = 1 if self.take()[1] == "+" else -1
            acc = _padd(acc, self.term(), sign)
        return acc

    def term(self):
        acc = self.unary()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                acc = _pmul(acc, self.unary())
            elif tok[0] in ("int", "var") or tok == ("op", "("):
                acc = _pmul(acc, self.unary())  # juxtaposition, e.g. 2x
            else:
                return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return {k: -v for k, v in self.unary().items()}
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            e = self.take("int")[1]
            out = {(0, 0): 1}
            for _ in range(e):
                out = _pmul(out, base)
            return out
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            return {(0, 0): val} if val else {}
        if kind == "var":
            self.take()
            return {(1, 0): 1} if val == "x" else {(0, 1): 1}
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise GermParseError("unexpected end of input" if val is None else f"unexpected {val!r}")


def parse_poly(text: str) -> dict:
    """Parse ``f(x, y)`` into ``{(deg_x, deg_y): coefficient}``."""
    p = _Parser(text)
    if not p.toks:
        raise GermParseError("empty equation")
    out = p.expr()
    if p.i != len(p.toks):
        raise GermParseError(f"trailing input starting at {p.peek()[1]!r}")
    return out


def format_poly(f: dict) -> str:
    if not f:
        return "0"
    parts = []
    for (a, b) in sorted(f, key=lambda m: (m[0] + m[1], m[1])):
        c = f[(a, b)]
        mono = [v if e == 1 else f"{v}^{e}" for v, e in (("x", a), ("y", b)) if e]
        if not mono:
            mag = str(abs(c))
        else:
            mag = "*".join(([str(abs(c))] if abs(c) != 1 else []) + mono)
        parts.append(((" - " if parts else "-") if c < 0 else (" + " if parts else "")) + mag)
    return "".join(parts)


def order(f: dict) -> int:
    return min(a + b for a, b in f) if f else -1


@dataclass(frozen=True)
class GermEq:
    """A plane curve germ ``f = 0`` at the origin with declared invariants."""

    f: dict
    cogenus: int | None = None
    branches: int | None = None
    label: str = ""

    def __post_init__(self):
        if not self.f:
            raise ValueError("f must be a nonzero polynomial")
        if self.f.get((0, 0), 0):
            raise ValueError("f(0, 0) must vanish: the germ must pass through the origin")

    @classmethod
    def parse(cls, text: str, cogenus=None, branches=None, label=""):
        return cls(parse_poly(text), cogenus, branches, label or text.strip())

    def __hash__(self):
        return hash((tuple(sorted(self.f.items())), self.cogenus, self.branches, self.label))

    @property
    def equation(self) -> str:
        return format_poly(self.f)


# --- the finite quotient -----------------------------------------------------


def _monomials(n: int):
    return [(d - b, b) for d in range(n) for b in range(d + 1)]


@dataclass(frozen=True)
class FiniteQuotient:
    """``F_p[x, y]/(f, m^N)`` with a monomial basis and multiplication matrices.

    Row ``i`` of ``mult_x`` holds the coordinates of ``x * basis[i]``.
    """

    p: int
    truncation: int
    basis: tuple
    mult_x: tuple
    mult_y: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def permuted(self, perm: Sequence[int]) -> "FiniteQuotient":
        """Same algebra with ``new_basis[i] = basis[perm[i]]``."""
        def conj(m):
            return tuple(
                tuple(m[perm[i]][perm[j]] for j in range(len(perm))) for i in range(len(perm))
            )

        return FiniteQuotient(
            self.p,
            self.truncation,
            tuple(self.basis[i] for i in perm),
            conj(self.mult_x),
            conj(self.mult_y),
        )


def build_quotient(germ: GermEq | dict, p: int, n: int) -> FiniteQuotient:
    """Basis and multiplication tables of ``F_p[x, y]/(f, m^n)``."""
    f = germ.f if isinstance(germ, GermEq) else germ
    fp = {k: v % p for k, v in f.items() if v % p}
    if not fp:
        raise DegenerateReductionError(f"f vanishes identically mod {p}")
    low = order(f)
    if not any(a + b == low for a, b in fp):
        raise DegenerateReductionError(
            f"{p} divides the lowest-order part of f; the reduction is a different germ"
        )
    monos = _monomials(n)
    index = {m: i for i, m in enumerate(monos)}
    ncols = len(monos)
    # columns in reverse so that pivots land on the largest monomials
    rel_rows = []
    for (i, j) in monos:
        if i + j + low >= n:
            continue
        row = [0] * ncols
        for (a, b), c in fp.items():
            if i + a + j + b < n:
                row[ncols - 1 - index[(i + a, j + b)]] = c
        rel_rows.append(row)
    rel, piv = rref_mod(rel_rows, p, ncols) if rel_rows else ((), ())
    pivot_monos = {monos[ncols - 1 - c] for c in piv}
    basis = tuple(m for m in monos if m not in pivot_monos)
    bidx = {m: i for i, m in enumerate(basis)}

    def normal_form(mono):
        if mono[0] + mono[1] >= n:
            return [0] * len(basis)
        v = [0] * ncols
        v[ncols - 1 - index[mono]] = 1
        v = reduce_mod(v, rel, piv, p)
        out = [0] * len(basis)
        for c, x in enumerate(v):
            if x:
                out[bidx[monos[ncols - 1 - c]]] = x
        return out

    mx = tuple(tuple(normal_form((a + 1, b))) for a, b in basis)
    my = tuple(tuple(normal_form((a, b + 1))) for a, b in basis)
    return FiniteQuotient(p, n, basis, mx, my)


def _apply(v, m, p):
    out = [0] * len(m)
    for i, x in enumerate(v):
        if x:
            for j, y in enumerate(m[i]):
                if y:
                    out[j] += x * y
    return [z % p for z in out]


def _children(rows, quot: FiniteQuotient):
    p, dim = quot.p, quot.dim
    gens = []
    for v in rows:
        gens.append(_apply(v, quot.mult_x, p))
        gens.append(_apply(v, quot.mult_y, p))
    mj, mpiv = rref_mod(gens, p, dim)
    comp, _ = rref_mod([reduce_mod(v, mj, mpiv, p) for v in rows], p, dim)
    mu = len(comp)
    for j in range(mu):
        fixed = [list(comp[i]) for i in range(j)]
        cj = comp[j]
        for tail in itertools.product(range(p), repeat=mu - 1 - j):
            ker = list(fixed)
            for a, ci in zip(tail, comp[j + 1 :]):
                ker.append([(x - a * y) % p for x, y in zip(ci, cj)] if a else list(ci))
            child, _ = rref_mod(list(mj) + ker, p, dim)
            yield child


def count_ideals_by_colength(quot: FiniteQuotient, n: int) -> list[int]:
    """Number of ideals of colength ``k`` in the quotient, for ``k = 0..n``."""
    if n > quot.truncation:
        raise ValueError(f"colength {n} needs truncation >= {n}, have {quot.truncation}")
    dim = quot.dim
    level = {tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))}
    counts = [1]
    for _ in range(n):
        nxt = set()
        for rows in level:
            nxt.update(_children(rows, quot))
        level = nxt
        counts.append(len(level))
    return counts


def count_ideals(quot: FiniteQuotient, n: int) -> int:
    """Number of ideals of colength ``n``."""
    return count_ideals_by_colength(quot, n)[n]


# --- fitting -----------------------------------------------------------------


@dataclass
class OracleReport:
    label: str
    n: int
    samples: list
    fitted: LPoly | None
    surplus_checked: bool
    max_degree: int
    diagnostic: str | None = None
    suspect_primes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "samples": [[p, c] for p, c in self.samples],
            "fitted": None if self.fitted is None else list(self.fitted.coeffs),
            "fitted_str": None if self.fitted is None else str(self.fitted),
            "max_degree": self.max_degree,
            "surplus_checked": self.surplus_checked,
            "diagnostic": self.diagnostic,
            "suspect_primes": list(self.suspect_primes),
        }


def _counts_for_prime(args):
    f, p, n_max = args
    quot = build_quotient(f, p, n_max)
    return count_ideals_by_colength(quot, n_max)


def point_counts(germ: GermEq, n_max: int, primes: Sequence[int], jobs: int = 1) -> dict:
    """``{p: [count of colength 0..n_max]}``; deterministic for any ``jobs``."""
    tasks = [(germ.f, p, n_max) for p in primes]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_counts_for_prime, tasks))
    else:
        results = [_counts_for_prime(t) for t in tasks]
    return dict(zip(primes, results))


def fit(
    germ: GermEq,
    n_max: int,
    primes: Sequence[int] = DEFAULT_PRIMES,
    degree_cap: int | None = None,
    jobs: int = 1,
) -> list[OracleReport]:
    """One report per colength ``0..n_max``.

    Counts of colength ``n`` are fitted by a polynomial of degree at most
    ``n - 1`` (further capped by ``degree_cap``).  Primes beyond the number
    needed serve as surplus checks.
    """
    primes = list(primes)
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    top = max(n_max - 1, 0) if degree_cap is None else min(max(n_max - 1, 0), degree_cap)
    if len(primes) < top + 1:
        raise ValueError(f"{len(primes)} primes cannot fit degree {top}; need {top + 1}")
    counts = point_counts(germ, n_max, primes, jobs=jobs)
    reports = []
    for n in range(n_max + 1):
        deg = max(n - 1, 0) if degree_cap is None else min(max(n - 1, 0), degree_cap)
        samples = [(p, counts[p][n]) for p in primes]
        rep = OracleReport(germ.label, n, samples, None, len(samples) > deg + 1, deg)
        try:
            rep.fitted = interpolate_exact(samples, deg)
        except NotPolynomialCountError as exc:
            rep.diagnostic = f"not polynomial-count: {exc}"
            rep.suspect_primes = _suspects(samples, deg)
        reports.append(rep)
    return reports


def _suspects(samples, deg):
    """Primes whose removal leaves a fit that still passes a surplus check."""
    out = []
    if len(samples) - 1 <= deg + 1:
        return out
    for i, (p, _) in enumerate(samples):
        rest = samples[:i] + samples[i + 1 :]
        try:
            interpolate_exact(rest, deg)
        except NotPolynomialCountError:
            continue
        out.append(p)
    return out


def punctual_series(reports: Sequence[OracleReport]) -> QSeries:
    """``sum_n q^n [(C,p)^[n]]`` truncated at the largest fitted colength."""
    cs = []
    for rep in sorted(reports, key=lambda r: r.n):
        if rep.fitted is None:
            raise NotPolynomialCountError(f"colength {rep.n}: {rep.diagnostic}")
        cs.append(rep.fitted)
    return QSeries(Ring.LEFSCHETZ, len(cs) - 1, cs)


def normalized_series(reports: Sequence[OracleReport], branches: int) -> QSeries:
    """``(1 - q)^b * sum_n q^n [(C,p)^[n]]`` to the available truncation."""
    s = punctual_series(reports)
    return s * (QPoly(Ring.LEFSCHETZ, [1, -1]) ** branches)


def complete_factor(head: Sequence[LPoly], delta: int) -> QPoly:
    """Extend coefficients ``c_0..c_delta`` by ``c_(2delta-d) = L^(delta-d) c_d``."""
    cs = list(head[: delta + 1])
    if len(cs) < delta + 1:
        raise ValueError(f"need {delta + 1} leading coefficients, got {len(cs)}")
    full = cs + [LPoly()] * delta
    for d in range(delta):
        full[2 * delta - d] = cs[d].shift(delta - d)
    return QPoly(Ring.LEFSCHETZ, full)


def oracle_local_factor(
    germ: GermEq,
    primes: Sequence[int] = DEFAULT_PRIMES,
    n_max: int | None = None,
    degree_cap: int | None = None,
    jobs: int = 1,
):
    """Local factor of degree ``2 delta`` from point counts.

    Counts up to colength ``n_max`` (default ``delta + 1``) give the leading
    coefficients; the rest follow from the functional equation, and every
    computed coefficient past ``delta`` is checked against that completion.
    Returns ``(factor, reports)``.
    """
    if germ.cogenus is None or germ.branches is None:
        raise ValueError("germ needs declared cogenus and branch count")
    delta, b = germ.cogenus, germ.branches
    if n_max is None:
        n_max = delta + 1
    if n_max < delta:
        raise ValueError(f"n_max = {n_max} is below the cogenus {delta}")
    reports = fit(germ, n_max, primes, degree_cap=degree_cap, jobs=jobs)
    series = normalized_series(reports, b)
    if series.coeffs[0] != 1:
        raise OracleMismatchError(f"constant term {series.coeffs[0]} is not 1")
    factor = complete_factor(series.coeffs, delta)
    for d in range(delta + 1, n_max + 1):
        if series.coeffs[d] != factor.coefficient(d):
            raise OracleMismatchError(
                f"q^{d}: counted {series.coeffs[d]}, functional equation predicts "
                f"{factor.coefficient(d)} (check cogenus/branches or exclude bad primes)"
            )
    return factor, reports
