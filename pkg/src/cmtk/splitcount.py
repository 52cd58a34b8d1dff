"""Exact split-prime counting and the explicit density window that feeds it.

A splitting spec is a list of imaginary quadratic radicands m_1..m_r;
the compositum M = k(sqrt m_1, ..., sqrt m_r) is multiquadratic, and a
prime splits in M iff every quadratic character chi(m_i, p) is +1.  The
degree [M:k] and its constant/geometric split (n_c, n_g) are computed
exactly from the span of the radicands' square classes; the genus of M
is bounded by iterating the Castelnuovo inequality pairwise.

The effective density statement: for n_c | t, the exact count pi_M(t)
differs from q^t/(n_g t) by less than 4(g_M + 2) q^{t/2} (the base
k = F_q(T) has e = 1, g_k = 0).  For odd t the radius is irrational, so
window membership is decided by comparing squares; every emitted value
is an exact integer or rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import DomainError
from .ffpoly import (
    DEFAULT_ENUM_BUDGET,
    Poly,
    factor_monic,
    irreducibles,
    jacobi_symbol,
    parse_poly,
)
from .quadfield import analyze_quadratic


def castelnuovo_bound(g1, n1, g2, n2):
    """Genus bound n2*g1 + n1*g2 + (n1-1)(n2-1) for a compositum.

    n_i is the degree [F_i : k]; under linear disjointness [F1F2 : F1]
    equals n2, which is the classical statement's co-degree.
    """
    if n1 < 1 or n2 < 1 or g1 < 0 or g2 < 0:
        raise DomainError("degrees must be >= 1 and genera >= 0")
    return n2 * g1 + n1 * g2 + (n1 - 1) * (n2 - 1)


def _square_class(m):
    """(odd-multiplicity prime set, leading-coefficient non-square flag)."""
    F = m.field
    primes = frozenset(
        p.coeffs for p, mult in factor_monic(m.monic()) if mult % 2 == 1
    )
    return primes, F.legendre(m.leading) == -1


@dataclass(frozen=True)
class SplittingSpec:
    """The compositum of quadratic extensions given by a radicand list."""

    field: object
    radicands: tuple
    n_c: int  # constant extension degree (1 or 2)
    n_g: int  # geometric extension degree
    genus_bound: int  # iterated Castelnuovo bound for g_M

    @classmethod
    def make(cls, field, radicands):
        polys = tuple(parse_poly(field, m) for m in radicands)
        analyzed = [analyze_quadratic(field, m) for m in polys]
        # span of the square classes inside k^x / (k^x)^2
        span = {(frozenset(), False)}
        for m in polys:
            cls_m = _square_class(m)
            span |= {
                (ps ^ cls_m[0], flag ^ cls_m[1]) for ps, flag in span
            }
        n = len(span)
        n_c = 2 if (frozenset(), True) in span else 1
        g_bound, deg = 0, 1
        for K in analyzed:
            g_bound = castelnuovo_bound(g_bound, deg, K.genus, 2)
            deg *= 2
        return cls(field, polys, n_c, n // n_c, g_bound)

    @property
    def degree(self):
        return self.n_c * self.n_g

    def json_obj(self):
        return {
            "q": self.field.q,
            "radicands": [m.text() for m in self.radicands],
            "n_c": self.n_c,
            "n_g": self.n_g,
            "genus_bound": self.genus_bound,
        }


def count_split_primes(spec, t, budget=DEFAULT_ENUM_BUDGET):
    """Exact number of monic primes of degree t split in the compositum."""
    count = 0
    for p in irreducibles(spec.field, t, budget):
        if all(jacobi_symbol(m, p) == 1 for m in spec.radicands):
            count += 1
    return count


@dataclass(frozen=True)
class DensityWindow:
    """Exact window |pi_M(t) - center| < radius, radius^2 rational."""

    t: int
    center: Fraction
    radius_sq: Fraction

    @property
    def radius_exact(self):
        """The radius as a Fraction when it is rational (even t), else None."""
        r2 = self.radius_sq
        num, den = r2.numerator, r2.denominator
        rn, rd = isqrt(num), isqrt(den)
        if rn * rn == num and rd * rd == den:
            return Fraction(rn, rd)
        return None

    def contains(self, count):
        """Strict membership, decided exactly by comparing squares."""
        return (Fraction(count) - self.center) ** 2 < self.radius_sq

    def json_obj(self):
        obj = {
            "t": self.t,
            "center": str(self.center),
            "radius_squared": str(self.radius_sq),
        }
        r = self.radius_exact
        if r is not None:
            obj["radius"] = str(r)
        return obj


def cebotarev_window(spec, t):
    """Window for pi_M(t): center q^t/(n_g t), radius 4(g_M + 2) q^{t/2}.

    Requires n_c | t (otherwise the density statement does not apply and
    the exact count is 0 for n_c = 2 anyway).  g_M is replaced by its
    Castelnuovo bound, which only widens the window.
    """
    if t < 1:
        raise DomainError("t must be >= 1")
    if t % spec.n_c:
        raise DomainError(f"window needs n_c = {spec.n_c} dividing t = {t}")
    q = spec.field.q
    center = Fraction(q**t, spec.n_g * t)
    coeff = 4 * (spec.genus_bound + 2)
    return DensityWindow(t, center, Fraction(coeff * coeff * q**t))


PINNED_C1 = Fraction(1, 4)
PINNED_C2 = 8
PINNED_C3 = 12


def pi_lower_bound(spec, t):
    """Exact lower bound q^t/(n_g t) - 4(g_M_bound + 2) q^{t/2}, even t."""
    if t % 2:
        raise DomainError("the lower bound is used at even t only")
    w = cebotarev_window(spec, t)
    return w.center - 4 * (spec.genus_bound + 2) * spec.field.q ** (t // 2)


def pi_lower_bound_genera(q, g1, g2, t):
    """Two-quadratic worst-case bound with pinned constants C1, C2, C3.

    C1 = 1/4 (geometric degree at most 4), C2 = 8 and C3 = 12 come from
    the window radius with e = 1, g_k = 0 and the Castelnuovo bound
    g_M <= 2 g1 + 2 g2 + 1; valid for any compositum of two imaginary
    quadratic fields of genera g1, g2.  Even t only.
    """
    if t % 2:
        raise DomainError("the lower bound is used at even t only")
    return PINNED_C1 * Fraction(q**t, t) - (
        PINNED_C2 * (g1 + g2) + PINNED_C3
    ) * q ** (t // 2)


def split_audit(spec, t, budget=DEFAULT_ENUM_BUDGET):
    """JSON-ready record tying the exact count to the window and bound."""
    exact = count_split_primes(spec, t, budget)
    obj = {"spec": spec.json_obj(), "exact": exact}
    if t % spec.n_c == 0:
        window = cebotarev_window(spec, t)
        obj.update(window.json_obj())
        obj["inside_window"] = window.contains(exact)
    else:
        obj["t"] = t
        obj["inside_window"] = None
    if t % 2 == 0:
        obj["lower_bound"] = str(pi_lower_bound(spec, t))
    obj["constants"] = {
        "C1": str(Fraction(1, spec.n_g)),
        "C2": str(PINNED_C2),
        "C3": str(PINNED_C3),
        "g_M_bound": spec.genus_bound,
    }
    return obj
