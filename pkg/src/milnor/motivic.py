"""Grothendieck-ring and rational-series calculus.

Classes live in the Laurent subring Z[L, L^-1] of the localized Grothendieck
ring.  Rational series are finite sums of terms c * T^j * prod T^b/(T^b - L^a);
the module provides the ring operations, truncated expansion (the oracle for
all identities), the limit "leading coefficient" morphism, coefficient
extraction along arithmetic progressions, the normalization of T^q/(T^r - L^p)
into the subring, and the nearby-cycles class of a semi-stable model.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import DomainError, MissingClass, NotInRPrime
from .strata import StrataModel


class GClass:
    """Element of Z[L, L^-1]: a Laurent polynomial in the Lefschetz class."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Mapping[int, int]] = None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c != 0}

    @staticmethod
    def of(n: int) -> "GClass":
        return GClass({0: n})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = GClass.of(other)
        return isinstance(other, GClass) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = GClass.of(other)
        if not isinstance(other, GClass):
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return GClass(out)

    __radd__ = __add__

    def __neg__(self):
        return GClass({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = GClass.of(other)
        return self + (-other)

    def __rsub__(self, other):
        return GClass.of(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            other = GClass.of(other)
        if not isinstance(other, GClass):
            return NotImplemented
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return GClass(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers of general classes are undefined")
        out = GClass.of(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "GClass":
        """Multiply by L^k."""
        return GClass({e + k: c for e, c in self.coeffs.items()})

    def euler(self) -> int:
        """Evaluate at L = 1 (topological Euler characteristic)."""
        return sum(self.coeffs.values())

    def to_dict(self) -> dict:
        return {"L": {str(e): c for e, c in sorted(self.coeffs.items())}}

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mono = "1" if e == 0 else ("L" if e == 1 else f"L^{e}")
            if e != 0:
                if c == 1:
                    term = mono
                elif c == -1:
                    term = f"-{mono}"
                else:
                    term = f"{c}*{mono}"
            else:
                term = str(c)
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    __repr__ = __str__


L = GClass({1: 1})
ONE = GClass.of(1)


# a factor (a, b) stands for T^b / (T^b - L^a); b > 0


class RationalSeries:
    """Finite sum of terms coef * T^j * prod_i T^{b_i}/(T^{b_i} - L^{a_i}).

    Canonical form: factor tuples sorted, terms merged on (j, factors), zero
    coefficients dropped.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged: dict[tuple, GClass] = {}
        for coef, j, factors in terms:
            if j < 0:
                raise DomainError("T-exponent must be non-negative")
            key = (j, tuple(sorted(factors)))
            merged[key] = merged.get(key, GClass()) + coef
        self.terms = tuple(
            (c, j, f) for (j, f), c in sorted(merged.items(), key=lambda kv: kv[0]) if c
        )

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(c) -> "RationalSeries":
        if isinstance(c, int):
            c = GClass.of(c)
        return RationalSeries([(c, 0, ())])

    @staticmethod
    def monomial(c, j: int) -> "RationalSeries":
        if isinstance(c, int):
            c = GClass.of(c)
        return RationalSeries([(c, j, ())])

    @staticmethod
    def generator(a: int, b: int) -> "RationalSeries":
        """T^b / (T^b - L^a)."""
        if b <= 0:
            raise DomainError("generator needs b > 0")
        return RationalSeries([(ONE, 0, ((a, b),))])

    # -- ring structure ----------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, RationalSeries) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if isinstance(other, int):
            other = RationalSeries.constant(other)
        return RationalSeries(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return RationalSeries([(-c, j, f) for c, j, f in self.terms])

    def __sub__(self, other):
        if isinstance(other, int):
            other = RationalSeries.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return RationalSeries.constant(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, GClass)):
            other = RationalSeries.constant(other)
        out = []
        for c1, j1, f1 in self.terms:
            for c2, j2, f2 in other.terms:
                out.append((c1 * c2, j1 + j2, f1 + f2))
        return RationalSeries(out)

    __rmul__ = __mul__

    def expand(self, N: int) -> list[GClass]:
        """Coefficients of T^0 .. T^N of the represented power series."""
        if N < 0:
            raise DomainError("expansion order must be >= 0")
        out = [GClass() for _ in range(N + 1)]
        for coef, j, factors in self.terms:
            poly = {j: coef}
            for a, b in factors:
                # T^b/(T^b - L^a) = -sum_{m>=1} L^{-ma} T^{mb}
                nxt: dict[int, GClass] = {}
                for e, c in poly.items():
                    m = 1
                    while e + m * b <= N:
                        key = e + m * b
                        nxt[key] = nxt.get(key, GClass()) + (-c).shift(-m * a)
                        m += 1
                poly = nxt
            for e, c in poly.items():
                if e <= N:
                    out[e] = out[e] + c
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, j, f in self.terms:
            bits = [f"({c})"]
            if j:
                bits.append(f"T^{j}")
            bits.extend(f"gen({a},{b})" for a, b in f)
            parts.append("*".join(bits))
        return " + ".join(parts)

    __repr__ = __str__


def series_add(x: RationalSeries, y: RationalSeries) -> RationalSeries:
    return x + y


def series_mul(x: RationalSeries, y: RationalSeries) -> RationalSeries:
    return x * y


# ---------------------------------------------------------------------------
# the limit morphism


def limit_T_inf(x: RationalSeries) -> GClass:
    """The morphism sending P(T)/Q(T) (deg P <= deg Q, Q monic) to the
    coefficient of T^{deg Q} in P."""
    # common denominator: for each factor, its maximal multiplicity over terms
    denom: Counter = Counter()
    for _, _, factors in x.terms:
        denom |= Counter(factors)
    deg_q = sum(b * mult for (_, b), mult in denom.items())
    # numerator as a polynomial in T with Laurent coefficients
    numer: dict[int, GClass] = {}
    for coef, j, factors in x.terms:
        missing = denom - Counter(factors)
        poly = {j + sum(b for _, b in factors): coef}
        for (a, b), mult in missing.items():
            for _ in range(mult):
                nxt: dict[int, GClass] = {}
                for e, c in poly.items():
                    nxt[e + b] = nxt.get(e + b, GClass()) + c
                    nxt[e] = nxt.get(e, GClass()) - c.shift(a)
                poly = nxt
        for e, c in poly.items():
            numer[e] = numer.get(e, GClass()) + c
    for e, c in numer.items():
        if e > deg_q and c:
            raise NotInRPrime(
                f"numerator degree {e} exceeds denominator degree {deg_q}"
            )
    return numer.get(deg_q, GClass())


# ---------------------------------------------------------------------------
# normalization of T^q/(T^r - L^p) into the subring


def normalize_DR(p: int, q: int, r: int) -> RationalSeries:
    """A RationalSeries whose expansion equals that of T^q/(T^r - L^p),
    for 0 <= q <= r."""
    if not 0 <= q <= r or r == 0:
        raise DomainError(f"need 0 <= q <= r with r > 0, got q={q}, r={r}")
    if q == r:
        return RationalSeries.generator(p, r)
    gen = RationalSeries.generator(p, r)
    if q == 0:
        return GClass({-p: 1}) * (gen - 1)
    head = gen * (RationalSeries.generator(0, r - q) - 1)
    if q <= r - q:
        tail = (GClass({-p: 1}) * (gen - 1)) * normalize_DR(0, q, r - q)
    else:
        tail = normalize_DR(p, 2 * q - r, r) * RationalSeries.generator(0, r - q)
    return head - tail


# ---------------------------------------------------------------------------
# coefficient extraction along arithmetic progressions


def _max_extract_d() -> int:
    return int(os.environ.get("MILNOR_MAX_D", "12"))


def extract_d(x: RationalSeries, d: int) -> RationalSeries:
    """Keep the expansion coefficients at exponents divisible by d."""
    if d <= 0:
        raise DomainError("d must be positive")
    if d == 1:
        return x
    if d > _max_extract_d():
        raise DomainError(f"d = {d} exceeds the extraction cap {_max_extract_d()}")
    out = RationalSeries()
    for coef, j, factors in x.terms:
        out = out + _extract_term(coef, j, factors, d)
    return out


def _extract_term(coef: GClass, j: int, factors, d: int) -> RationalSeries:
    n = len(factors)
    if n == 0:
        return RationalSeries.monomial(coef, j) if j % d == 0 else RationalSeries()
    if n > 6:
        raise DomainError("extraction supports at most 6 factors per term")
    a = [f[0] for f in factors]
    b = [f[1] for f in factors]
    e = [math.lcm(bi, d) // bi for bi in b]
    m = [bi * ei for bi, ei in zip(b, e)]
    total_m = sum(m)
    gens = tuple((ai * ei, mi) for ai, ei, mi in zip(a, e, m))

    # the term expands as coef*(-1)^n sum_{w >= 1} L^{-a.w} T^{j + b.w};
    # writing w = u + e*v (1 <= u_i <= e_i) the divisibility only constrains u
    out = RationalSeries()
    for u in _tuples(e):
        exp_t = j + sum(bi * ui for bi, ui in zip(b, u))
        if exp_t % d != 0:
            continue
        scale = coef.shift(sum(ai * (ei - ui) for ai, ei, ui in zip(a, e, u)))
        shift = exp_t - total_m  # T-power in front of prod T^{m_i}/(T^{m_i}-L^{A_i})
        if shift >= 0:
            out = out + RationalSeries([(scale, shift, gens)])
        else:
            # spread the available T-power over the factors: prod T^{q_i}/(...)
            remaining = total_m + shift
            piece = RationalSeries.constant(scale)
            for (A, M) in gens:
                qi = min(M, remaining)
                remaining -= qi
                piece = piece * normalize_DR(A, qi, M)
            out = out + piece
    return out


def _tuples(e: Sequence[int]):
    if not e:
        yield ()
        return
    for head in range(1, e[0] + 1):
        for rest in _tuples(e[1:]):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# nearby cycles of a semi-stable model


@dataclass(frozen=True)
class SemiStableModelClassData:
    """A model whose strata all carry Grothendieck classes, with the relative
    dimension and the ramification index of the base extension."""

    model: StrataModel
    d_rel: int = 0
    d: int = 1

    def __post_init__(self):
        missing = [s.id for s in self.model.strata if s.id not in self.model.classes]
        if missing:
            raise MissingClass(f"strata without classes: {missing}")
        if self.d_rel < 0 or self.d <= 0:
            raise DomainError("need d_rel >= 0 and d >= 1")


def nearby_cycles(data: SemiStableModelClassData) -> GClass:
    """The class sum over non-empty J of (1-L)^{|J|-1} [E_J^o]."""
    out = GClass()
    for s in data.model.strata:
        out = out + (ONE - L) ** (len(s.psi) - 1) * data.model.classes[s.id]
    return out


def motivic_volume(data: SemiStableModelClassData) -> GClass:
    """The normalized volume: L^{d_rel} times the nearby-cycles class."""
    return nearby_cycles(data).shift(data.d_rel)


def euler_specialize(x: GClass) -> int:
    return x.euler()
