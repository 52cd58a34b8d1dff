"""Imaginary quadratic extensions K = F_q(T)(sqrt(m)) and their orders.

A radicand m must be squarefree and "imaginary": the degree valuation has
a single extension to K.  That happens in exactly two ways — deg m odd
(infinity ramifies) or deg m even with non-square leading coefficient
(infinity is inert, residue degree 2).  Constant extensions (m a constant
times a square) are rejected so that the unit group of every order is
F_q^* and all unit indices collapse to 1.

Class groups are computed two independent ways:

* the zeta / point-counting oracle: count affine points of y^2 = m(t)
  over F_{q^i} for i <= genus, assemble the numerator L(u) of the zeta
  function through Newton's identities and the functional equation, and
  read off h = L(1);

* reduced binary forms (a, b) with b^2 = D mod a for the order radicand
  D = f^2 m, composed by the classical extended-gcd composition and
  reduced by the degree-dropping step.  This path needs deg D odd
  (ramified type); inert fields go through the oracle and only for the
  maximal order.

Both are exact; tests pit one against the other and against the
conductor formula h(R) = h_K |f| prod_{p | f} (1 - chi(p)/|p|).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, DomainError, FieldRejected, UnsupportedPath
from .ffpoly import (
    DEFAULT_ENUM_BUDGET,
    Poly,
    PrimePoly,
    factor_monic,
    irreducibles,
    kadd,
    kdec,
    kdiv_exact,
    kdivmod,
    kenc,
    kgcd,
    kmod,
    kmonic,
    kmul,
    kneg,
    ksub,
    kxgcd,
    parse_poly,
    quadratic_character,
)

# ---------------------------------------------------------------------------
# the field


@dataclass(frozen=True, slots=True)
class ImagQuadField:
    """An imaginary quadratic extension of F_q(T), defined by y^2 = m."""

    field: object  # FqSpec
    m: Poly
    infinity_type: str  # "ramified" | "inert"
    genus: int

    @property
    def constant_field_degree(self):
        return 1  # constant extensions are rejected at construction

    def json_obj(self):
        return {
            "q": self.field.q,
            "m": self.m.text(),
            "genus": self.genus,
            "infinity_type": self.infinity_type,
        }

    def __repr__(self):
        return (
            f"ImagQuadField(q={self.field.q}, m={self.m.text()}, "
            f"{self.infinity_type}, g={self.genus})"
        )


def analyze_quadratic(field, m):
    """Validate a radicand and build the field record.

    Raises FieldRejected with reason "zero", "constant_extension",
    "not_squarefree", or "real" when m does not define an imaginary
    quadratic (geometric) extension.
    """
    m = parse_poly(field, m)
    if m.is_zero:
        raise FieldRejected("zero", "radicand is zero")
    if m.degree == 0:
        raise FieldRejected(
            "constant_extension",
            f"m = {m.text()} is constant: sqrt(m) generates a constant extension",
        )
    monic_part = m.monic()
    if not monic_part.is_squarefree():
        if all(mult % 2 == 0 for _, mult in factor_monic(monic_part)):
            raise FieldRejected(
                "constant_extension",
                f"m = {m.text()} is a constant times a square: constant extension",
            )
        raise FieldRejected("not_squarefree", f"m = {m.text()} is not squarefree")
    if m.degree % 2 == 1:
        return ImagQuadField(field, m, "ramified", (m.degree - 1) // 2)
    if field.legendre(m.leading) == 1:
        raise FieldRejected(
            "real",
            f"m = {m.text()} has even degree and square leading coefficient: "
            "infinity splits (real type)",
        )
    return ImagQuadField(field, m, "inert", m.degree // 2 - 1)


# ---------------------------------------------------------------------------
# point-counting / zeta oracle

_RING_SQUARES = {}


def _ring_squares(field, w):
    """Set of nonzero squares in F_q[T]/(w), as residue tuples."""
    key = (field, w)
    got = _RING_SQUARES.get(key)
    if got is None:
        d = len(w) - 1
        got = frozenset(
            kmod(field, kmul(field, r, r), w)
            for r in (kdec(field, code) for code in range(1, field.q**d))
        )
        _RING_SQUARES[key] = got
    return got


def affine_point_count(K, i):
    """Number of t in F_{q^i} weighted by solutions of y^2 = m(t)."""
    F = K.field
    w = irreducibles(F, i)[0].coeffs
    squares = _ring_squares(F, w)
    mc = K.m.coeffs
    total = 0
    for code in range(F.q**i):
        t = kdec(F, code)
        v = ()
        for c in reversed(mc):
            v = kmod(F, kadd(F, kmul(F, v, t), (c,)), w)
        if not v:
            total += 1
        elif v in squares:
            total += 2
    return total


def point_count(K, i):
    """N_i: points of the smooth projective model over F_{q^i}."""
    n = affine_point_count(K, i)
    if K.infinity_type == "ramified":
        return n + 1
    return n + (2 if i % 2 == 0 else 0)


def zeta_numerator(K, budget=DEFAULT_ENUM_BUDGET):
    """Coefficients [a_0..a_{2g}] of L(u) = prod (1 - alpha_j u).

    Built from the power sums s_i = q^i + 1 - N_i via Newton's identities
    for i <= g, then completed by the functional equation
    a_{2g-k} = q^{g-k} a_k.
    """
    g, q = K.genus, K.field.q
    if g == 0:
        return [1]
    if g * q**g > budget:
        raise BudgetError(
            f"point counting needs ~ {g * q ** g} evaluations > budget {budget}",
            genus=g,
            q=q,
            budget=budget,
        )
    s = [0] * (g + 1)
    for i in range(1, g + 1):
        s[i] = q**i + 1 - point_count(K, i)
    a = [0] * (2 * g + 1)
    a[0] = 1
    for k in range(1, g + 1):
        acc = sum(s[i] * a[k - i] for i in range(1, k + 1))
        if acc % k:
            raise AssertionError("Newton identity produced a non-integer")
        a[k] = -acc // k
    for k in range(g):
        a[2 * g - k] = q ** (g - k) * a[k]
    return a


def class_number_zeta(K, budget=DEFAULT_ENUM_BUDGET):
    """h of the maximal order, as L(1); independent of the form machinery."""
    h = sum(zeta_numerator(K, budget))
    if h < 1:
        raise AssertionError("zeta numerator evaluated to a non-positive h")
    return h


# ---------------------------------------------------------------------------
# orders and forms


@dataclass(frozen=True, slots=True)
class QuadOrder:
    """The order R = A + f O_K inside K, modeled as A[sqrt(D)], D = f^2 m."""

    K: ImagQuadField
    conductor: Poly

    @classmethod
    def make(cls, K, conductor=None):
        if conductor is None:
            conductor = Poly.constant(K.field, 1)
        else:
            conductor = parse_poly(K.field, conductor)
        if conductor.is_zero or not conductor.is_monic:
            raise DomainError("conductor must be monic and nonzero")
        return cls(K, conductor)

    @property
    def D(self):
        return self.conductor * self.conductor * self.K.m

    @property
    def is_maximal(self):
        return self.conductor.degree == 0

    @property
    def conductor_norm(self):
        return self.conductor.norm

    @property
    def genus_parameter(self):
        """g_D: reduced forms have deg a <= g_D (ramified type only)."""
        return (self.D.degree - 1) // 2

    def json_obj(self):
        return {
            "field": self.K.json_obj(),
            "conductor": self.conductor.text(),
            "D": self.D.text(),
        }


_SQRT_TABLES = {}


def _sqrt_table(field, a):
    """Map r^2 mod a -> sorted tuple of residues r, cached per (field, a)."""
    key = (field, a)
    got = _SQRT_TABLES.get(key)
    if got is None:
        d = len(a) - 1
        table = {}
        for code in range(field.q**d):
            r = kdec(field, code)
            sq = kmod(field, kmul(field, r, r), a)
            table.setdefault(sq, []).append(r)
        got = {sq: tuple(sorted(rs, key=lambda r: kenc(field, r))) for sq, rs in table.items()}
        _SQRT_TABLES[key] = got
    return got


def sqrtmod(field, value, a):
    """All residues r mod a with r^2 = value (mod a), canonically ordered."""
    return _sqrt_table(field, a).get(kmod(field, value, a), ())


@dataclass(frozen=True, slots=True)
class FormClass:
    """Binary form (a, b) of radicand D: a monic, deg b < deg a, a | b^2 - D.

    Corresponds to the R-ideal aA + (b + sqrt(D))A; the third coefficient
    is c = (b^2 - D)/a.  Invertible (proper) iff gcd(a, b, c) = 1.
    """

    order: QuadOrder
    a: Poly
    b: Poly

    def __post_init__(self):
        F = self.order.K.field
        bb = kmul(F, self.b.coeffs, self.b.coeffs)
        if kmod(F, ksub(F, bb, self.order.D.coeffs), self.a.coeffs):
            raise DomainError("b^2 is not congruent to D modulo a")
        if not self.a.is_monic:
            raise DomainError("form coefficient a must be monic")
        if self.b.degree >= self.a.degree and not self.b.is_zero:
            raise DomainError("form requires deg b < deg a")

    @property
    def c(self):
        F = self.order.K.field
        num = ksub(F, kmul(F, self.b.coeffs, self.b.coeffs), self.order.D.coeffs)
        return Poly(F, kdiv_exact(F, num, self.a.coeffs))

    @property
    def is_invertible(self):
        F = self.order.K.field
        g = kgcd(F, kgcd(F, self.a.coeffs, self.b.coeffs), self.c.coeffs)
        return g == (1,)

    @property
    def is_reduced(self):
        return self.a.degree <= self.order.genus_parameter

    @property
    def is_principal_rep(self):
        return self.a.degree == 0

    def inverse(self):
        F = self.order.K.field
        return FormClass(self.order, self.a, Poly(F, kmod(F, kneg(F, self.b.coeffs), self.a.coeffs)))

    def key(self):
        F = self.order.K.field
        return (kenc(F, self.a.coeffs), kenc(F, self.b.coeffs))

    def json_obj(self):
        return [self.a.text(), self.b.text()]

    def __repr__(self):
        return f"FormClass(a={self.a.text()}, b={self.b.text()})"


def principal_form(order):
    one = Poly.constant(order.K.field, 1)
    zero = Poly(order.K.field, ())
    return FormClass(order, one, zero)


def compose_raw(f1, f2):
    """Gauss composition, no reduction: ideal product divided by its content.

    With e = gcd(a1, a2, b1 + b2) the product ideal is e * (a3, b3 + sqrt D),
    a3 = a1 a2 / e^2 and b3 = (u a1 b2 + v a2 b1 + w (b1 b2 + D)) / e mod a3,
    where u a1 + v a2 + w (b1 + b2) = e comes from two extended gcds.
    """
    if f1.order is not f2.order and f1.order != f2.order:
        raise DomainError("cannot compose forms of different orders")
    order = f1.order
    F = order.K.field
    a1, b1 = f1.a.coeffs, f1.b.coeffs
    a2, b2 = f2.a.coeffs, f2.b.coeffs
    D = order.D.coeffs
    d1, u1, v1 = kxgcd(F, a1, a2)
    e, u2, w = kxgcd(F, d1, kadd(F, b1, b2))
    a3 = kdiv_exact(F, kdiv_exact(F, kmul(F, a1, a2), e), e)
    u = kmul(F, u2, u1)
    v = kmul(F, u2, v1)
    num = kadd(
        F,
        kadd(F, kmul(F, kmul(F, u, a1), b2), kmul(F, kmul(F, v, a2), b1)),
        kmul(F, w, kadd(F, kmul(F, b1, b2), D)),
    )
    b3 = kmod(F, kdiv_exact(F, num, e), a3)
    return FormClass(order, Poly(F, a3), Poly(F, b3))


def reduce_form(form):
    """Apply (a, b) -> ((b^2 - D)/a monic, -b mod new a) until reduced.

    Each step strictly drops deg a while deg a > g_D, so this terminates;
    only valid for ramified-type radicands (deg D odd).
    """
    order = form.order
    if order.D.degree % 2 == 0:
        raise UnsupportedPath("form reduction requires a ramified-type radicand")
    F = order.K.field
    gD = order.genus_parameter
    a, b = form.a.coeffs, form.b.coeffs
    D = order.D.coeffs
    while len(a) - 1 > gD:
        c = kdiv_exact(F, ksub(F, kmul(F, b, b), D), a)
        new_a, _ = kmonic(F, c)
        if len(new_a) >= len(a):
            raise AssertionError("reduction failed to drop the degree")
        a = new_a
        b = kmod(F, kneg(F, b), a)
    return FormClass(order, Poly(F, a), Poly(F, b))


def compose(f1, f2):
    """Composition followed by reduction: the class-group operation."""
    return reduce_form(compose_raw(f1, f2))


# ---------------------------------------------------------------------------
# class groups


@dataclass(frozen=True)
class ClassGroup:
    """Pic(R) for an order R: h plus (on the forms path) representatives."""

    order: QuadOrder
    h: int
    path: str  # "forms" | "zeta"
    forms: tuple = ()

    def index_of(self, form):
        reduced = reduce_form(form) if not form.is_reduced else form
        key = reduced.key()
        for i, f in enumerate(self.forms):
            if f.key() == key:
                return i
        raise DomainError("form does not belong to this class group")

    def element_order(self, form):
        """Multiplicative order of the class of `form` in Pic(R)."""
        if self.path != "forms":
            raise UnsupportedPath("element orders need the forms path")
        ident = principal_form(self.order).key()
        cur = reduce_form(form) if not form.is_reduced else form
        n = 1
        while cur.key() != ident:
            cur = compose(cur, form)
            n += 1
            if n > self.h:
                raise AssertionError("element order exceeded the group order")
        return n

    def composition_table(self):
        n = len(self.forms)
        return [
            [self.index_of(compose(self.forms[i], self.forms[j])) for j in range(n)]
            for i in range(n)
        ]

    def json_obj(self, include_table=False):
        obj = {
            "order": self.order.json_obj(),
            "h": str(self.h),
            "path": self.path,
        }
        if self.path == "forms":
            obj["representatives"] = [f.json_obj() for f in self.forms]
        if include_table and self.path == "forms":
            obj["composition_table"] = self.composition_table()
        return obj


def enumerate_reduced_forms(order, budget=DEFAULT_ENUM_BUDGET):
    """All invertible reduced forms of radicand D, canonically ordered."""
    if order.D.degree % 2 == 0:
        raise UnsupportedPath(
            "reduced-form enumeration requires a ramified-type radicand"
        )
    F = order.K.field
    gD = order.genus_parameter
    if F.q ** (2 * gD) > budget:
        raise BudgetError(
            f"form enumeration needs ~ {F.q ** (2 * gD)} square tests > budget {budget}",
            deg_D=order.D.degree,
            budget=budget,
        )
    D = order.D.coeffs
    out = []
    for d in range(gD + 1):
        for lower in range(F.q**d):
            a = kdec(F, F.q**d + lower)
            for b in sqrtmod(F, D, a):
                form = FormClass(order, Poly(F, a), Poly(F, b))
                if form.is_invertible:
                    out.append(form)
    out.sort(key=FormClass.key)
    return tuple(out)


def class_group(order, budget=DEFAULT_ENUM_BUDGET):
    """Pic(R): forms path for ramified radicands, zeta path for inert f=1."""
    if order.K.infinity_type == "inert":
        if not order.is_maximal:
            raise UnsupportedPath(
                "inert-type class groups are supported only for the maximal "
                "order (conductor 1): the form-reduction path needs deg D odd"
            )
        return ClassGroup(order, class_number_zeta(order.K, budget), "zeta")
    forms = enumerate_reduced_forms(order, budget)
    return ClassGroup(order, len(forms), "forms", forms)


def order_class_number(K, conductor=None, budget=DEFAULT_ENUM_BUDGET):
    """Conductor formula h(R) = h_K |f| prod_{p|f} (1 - chi(p)/|p|).

    Returns (h, audit); every factor is exact (the product of local
    factors |p|^{e-1} (|p| - chi(p)) is an integer).  h_K comes from the
    point-counting oracle, so this path is independent of form
    enumeration.  The unit index [O_K^* : R^*] is 1 because constant
    extensions are rejected.
    """
    order = QuadOrder.make(K, conductor)
    h_max = class_number_zeta(K, budget)
    audit = {
        "h_max": str(h_max),
        "unit_index": "1",
        "conductor": order.conductor.text(),
        "conductor_norm": str(order.conductor_norm),
        "local_factors": [],
    }
    h = h_max
    for p, mult in factor_monic(order.conductor):
        chi = quadratic_character(K.m, p)
        local = p.norm ** (mult - 1) * (p.norm - chi)
        audit["local_factors"].append(
            {
                "prime": p.text(),
                "norm": str(p.norm),
                "multiplicity": mult,
                "chi": chi,
                "factor": str(local),
            }
        )
        h *= local
    audit["h"] = str(h)
    return h, audit


def hK_lower_bound(q, g):
    """Exact rational lower bound for h_K in terms of q and the genus.

    (q - 1)(q^{2g} - 2 g q^g + 1) / (2 g (q^{g+1} - 1)); by convention 1
    for g = 0 (where h_K is literally 1).
    """
    if g < 0:
        raise DomainError("genus must be nonnegative")
    if g == 0:
        return Fraction(1)
    return Fraction((q - 1) * (q ** (2 * g) - 2 * g * q**g + 1), 2 * g * (q ** (g + 1) - 1))
