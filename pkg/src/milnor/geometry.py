"""Piecewise-linear geometry of the skeleton.

Points of the geometric realization of the dual complex are stored per cell,
either in barycentric coordinates (positive, summing to 1) or in q-coloured
coordinates (values in [0,1] with product q, or with a zero entry when q = 0).
This module implements the coordinate changes, the fibration homeomorphism
between colour levels, the specialization retraction tau, and the strong
deformation retract onto a sub-skeleton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DomainError, NotInDeltaE
from .strata import StrataModel

TOL = 1e-12


@dataclass(frozen=True)
class SkeletonPoint:
    """Point of a cell in barycentric coordinates."""

    stratum: str
    bary: Mapping[str, float]

    def __post_init__(self):
        total = sum(self.bary.values())
        if abs(total - 1.0) > TOL or any(v <= 0 for v in self.bary.values()):
            raise DomainError(f"invalid barycentric coordinates {dict(self.bary)}")

    def to_dict(self) -> dict:
        return {"stratum": self.stratum, "bary": dict(sorted(self.bary.items()))}


@dataclass(frozen=True)
class ColouredPoint:
    """Point of a cell in q-coloured coordinates."""

    stratum: str
    u: Mapping[str, float]
    q: float

    def __post_init__(self):
        vals = list(self.u.values())
        if any(v < -TOL or v > 1 + TOL for v in vals):
            raise DomainError(f"coloured coordinates outside [0,1]: {dict(self.u)}")
        if self.q > 0:
            prod = math.prod(vals)
            if abs(prod - self.q) > TOL:
                raise DomainError(f"product {prod} differs from colour {self.q}")
        elif min(vals) > TOL:
            raise DomainError("0-coloured point must have a zero coordinate")

    def to_dict(self) -> dict:
        return {"stratum": self.stratum, "u": dict(sorted(self.u.items())), "q": self.q}


@dataclass(frozen=True)
class AnalyticSample:
    """Monomial point data over a stratum: the absolute values |T_i| and the
    valuation parameter r of the base, with product |T_0|...|T_p| = r."""

    stratum: str
    values: Mapping[str, float]
    r: float

    def __post_init__(self):
        vals = list(self.values.values())
        if not 0.0 <= self.r < 1.0:
            raise DomainError(f"r must lie in [0,1), got {self.r}")
        if any(v < 0 or v > 1 for v in vals):
            raise DomainError("sample values must lie in [0,1]")
        if self.r > 0:
            if abs(math.prod(vals) - self.r) > TOL:
                raise DomainError("product of sample values must equal r")
        elif min(vals) > TOL:
            raise DomainError("a sample with r = 0 needs a zero value")

    def check_against(self, model: StrataModel):
        if not model.has_stratum(self.stratum):
            raise DomainError(f"unknown stratum {self.stratum!r}")
        if set(self.values) != set(model.psi(self.stratum)):
            raise DomainError(
                f"sample values must be indexed by psi({self.stratum!r})"
            )

    def to_dict(self) -> dict:
        return {
            "stratum": self.stratum,
            "values": dict(sorted(self.values.items())),
            "r": self.r,
        }


# ---------------------------------------------------------------------------
# coordinate changes


def colour(u: Sequence[float], q: float) -> tuple[float, ...]:
    """Barycentric -> q-coloured coordinates on one cell."""
    if abs(sum(u) - 1.0) > TOL or any(v < 0 for v in u):
        raise DomainError("barycentric coordinates must be nonnegative with sum 1")
    if not 0.0 <= q < 1.0:
        raise DomainError(f"colour must lie in [0,1), got {q}")
    if q > 0:
        return tuple(q ** v for v in u)
    top = max(u)
    return tuple(1.0 - v / top for v in u)


def uncolour(c: Sequence[float], q: float) -> tuple[float, ...]:
    """Inverse of :func:`colour`."""
    if any(v < -TOL or v > 1 + TOL for v in c):
        raise DomainError("coloured coordinates must lie in [0,1]")
    if q > 0:
        if abs(math.prod(c) - q) > TOL:
            raise DomainError("product of coloured coordinates must equal q")
        return tuple(math.log(v) / math.log(q) for v in c)
    if min(c) > TOL:
        raise DomainError("0-coloured coordinates must contain a zero")
    total = sum(1.0 - v for v in c)
    return tuple((1.0 - v) / total for v in c)


# ---------------------------------------------------------------------------
# the fibration homeomorphism between colour levels


def fiber_homeo(y: Sequence[float], rho: float) -> tuple[float, ...]:
    """Push a 0-coloured point to colour rho along the segment toward (1,...,1).

    Returns x = y + s(1-y) where s solves prod(y_i + s(1-y_i)) = rho.
    """
    if min(y) > TOL:
        raise DomainError("input must be 0-coloured (some coordinate zero)")
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho must lie in [0,1), got {rho}")
    if rho == 0.0:
        return tuple(y)

    def prod_at(s: float) -> float:
        return math.prod(v + s * (1.0 - v) for v in y)

    # bisect essentially to machine precision: the product's sensitivity in s
    # can amplify the bracket width, and downstream checks want 1e-12 exactly
    lo, hi = 0.0, 1.0
    for _ in range(64):
        mid = (lo + hi) / 2
        if prod_at(mid) < rho:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16:
            break
    s = (lo + hi) / 2
    return tuple(v + s * (1.0 - v) for v in y)


def fiber_homeo_inverse(x: Sequence[float]) -> tuple[tuple[float, ...], float]:
    """Recover (y, rho) from a point x of colour rho = prod(x).

    The segment through x and (1,...,1) meets the 0-coloured boundary where the
    smallest coordinate vanishes: s = min(x), y = 1 - (1-x)/(1-s).
    """
    if any(v < 0 or v > 1 for v in x):
        raise DomainError("coordinates must lie in [0,1]")
    s = min(x)
    if s >= 1.0 - TOL:
        raise DomainError("the point (1,...,1) lies on no fiber")
    y = tuple(1.0 - (1.0 - v) / (1.0 - s) for v in x)
    rho = math.prod(x)
    return y, rho


# ---------------------------------------------------------------------------
# the retraction tau


def _collapse_ones(model: StrataModel, stratum: str, values: Mapping[str, float]):
    """Drop coordinates equal to 1 by moving onto the corresponding face."""
    keep = {c for c, v in values.items() if v < 1.0 - TOL}
    if not keep:
        raise DomainError("all coordinates equal 1")
    target = model.iterated_face(stratum, keep)
    return target, {c: values[c] for c in keep}


def tau_retract(model: StrataModel, z: AnalyticSample) -> SkeletonPoint:
    """The specialization retraction: the skeleton point whose r-coloured
    representation is (sp(z), |T_i(z)|)."""
    z.check_against(model)
    stratum, vals = _collapse_ones(model, z.stratum, z.values)
    comps = sorted(vals)
    coords = uncolour([vals[c] for c in comps], z.r)
    return SkeletonPoint(stratum, dict(zip(comps, coords)))


def restrict_sample(model: StrataModel, z: AnalyticSample, E: Iterable[str]) -> AnalyticSample:
    """View a sample through the sub-model on E: keep the values over
    psi ∩ E; the product of the kept values is the valuation parameter there."""
    Eset = frozenset(E)
    keep = set(z.values) & Eset
    if not keep:
        raise NotInDeltaE(f"psi({z.stratum!r}) does not meet E")
    target = model.iterated_face(z.stratum, keep)
    vals = {c: z.values[c] for c in keep}
    return AnalyticSample(target, vals, math.prod(vals.values()))


# ---------------------------------------------------------------------------
# the strong deformation retract Phi


def _phi_one_component(
    model: StrataModel, stratum: str, u: dict[str, float], a: str, rho: float
):
    """One stage of the deformation: push the point off component `a`.

    The point is 0-coloured on its cell.  Case 1: `a` is not involved.  Case 2:
    some remaining coordinate is zero; u(a) rises to 1 on [1/2,1] and the
    support collapses.  Case 3: all remaining coordinates are positive; they
    drain by the minimum of the remaining coordinates on [0,1/2], then Case 2.
    """
    psi = model.psi(stratum)
    if a not in psi:
        return stratum, u
    staying = sorted(psi - {a})
    if min(u[c] for c in staying) > TOL:
        # Case 3 on [0,1/2]: u(a) = 0; drain the others toward their minimum
        m = min(u[c] for c in staying)
        t = min(rho, 0.5)
        u = {c: (u[c] - 2.0 * t * m if c in staying else u[c]) for c in u}
        if rho <= 0.5:
            return stratum, u
    if rho <= 0.5:
        return stratum, u
    ua = u[a] + (1.0 - u[a]) * (2.0 * rho - 1.0)
    u = dict(u)
    u[a] = ua
    if rho >= 1.0 - TOL:
        return _collapse_ones(model, stratum, u)
    return stratum, u


def phi_retract(
    model: StrataModel,
    E: Iterable[str],
    z: ColouredPoint,
    rho: float,
    order: Optional[Sequence[str]] = None,
) -> ColouredPoint:
    """Strong deformation retract of the E-cell union onto the sub-skeleton.

    `z` is a 0-coloured point whose cell meets E; components outside E are
    removed one at a time (reverse lexicographic by default), each within its
    own equal share of [0,1].  rho = 0 is the identity, rho = 1 lands in the
    sub-skeleton of E, and points already there never move.
    """
    Eset = frozenset(E)
    if z.q != 0:
        raise DomainError("phi_retract expects a 0-coloured point")
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"rho must lie in [0,1], got {rho}")
    if not set(model.psi(z.stratum)) & Eset:
        raise NotInDeltaE(f"psi({z.stratum!r}) does not meet E")

    stratum, u = _collapse_ones(model, z.stratum, z.u)
    removal = [c for c in model.components if c not in Eset]
    if order is not None:
        if sorted(order) != sorted(removal):
            raise DomainError("order must list the components outside E exactly once each")
        removal = list(order)
    else:
        removal = sorted(removal, reverse=True)

    m = len(removal)
    for k, a in enumerate(removal):
        local = min(1.0, max(0.0, m * rho - k))
        if local == 0.0:
            break
        stratum, u = _phi_one_component(model, stratum, u, a, local)
    return ColouredPoint(stratum, u, 0.0)


# ---------------------------------------------------------------------------
# semi-norms on the disc and rescaling between bases


def disc_point(coeffs: Sequence[float], r: float) -> float:
    """The multiplicative semi-norm p_r on polynomials over a trivially valued
    field: max of r^i over the nonzero coefficients (with 0^0 = 1)."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0,1), got {r}")
    best = 0.0
    for i, a in enumerate(coeffs):
        if a != 0:
            best = max(best, 1.0 if i == 0 else r ** i)
    return best


def rescale_point(z: AnalyticSample, r_new: float) -> AnalyticSample:
    """Move a sample to another base radius: v -> v^(log_r r'), which carries
    fibers over radius r to fibers over r' without moving the retraction."""
    if z.r <= 0.0:
        raise DomainError("samples over r = 0 cannot be rescaled")
    if not 0.0 < r_new < 1.0:
        raise DomainError(f"target radius must lie in (0,1), got {r_new}")
    e = math.log(r_new) / math.log(z.r)
    return AnalyticSample(z.stratum, {c: v ** e for c, v in z.values.items()}, r_new)
