"""CM points: heights, bounded catalogues, and the class-group Galois action.

A CM point is a Drinfeld module with complex multiplication by an order R
of conductor f inside an imaginary quadratic K = k(sqrt m); its height is
H_CM = q^g |f|.  For a fixed height bound B only finitely many (m, f)
qualify, and each pair carries exactly |Pic(R)| points, so catalogues
list (m, f, genus, h, H_CM) rows.

The Galois action on the points with endomorphism ring R factors through
Pic(R): the Frobenius attached to a monic n whose prime factors all split
in R (and avoid the conductor) acts as composition with [N]^-1, where N
is the canonical product of split primes above n — for each p | n the
prime (p, b) with the smaller canonical root b.  Composing the N-form
without reduction keeps its first coefficient equal to n, which is the
norm bookkeeping that makes the isogeny degree visible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetError, DomainError, FieldRejected, NotSplitError, UnsupportedPath
from .ffpoly import (
    DEFAULT_ENUM_BUDGET,
    Poly,
    factor_monic,
    kdec,
    kenc,
    parse_poly,
    quadratic_character,
)
from .quadfield import (
    FormClass,
    QuadOrder,
    analyze_quadratic,
    class_group,
    compose_raw,
    order_class_number,
    principal_form,
    reduce_form,
    sqrtmod,
)


@dataclass(frozen=True, slots=True)
class CMPoint:
    """A CM point: an order R plus a class of Pic(R) picking the module."""

    order: QuadOrder
    cls: FormClass

    @property
    def height(self):
        return self.order.K.field.q**self.order.K.genus * self.order.conductor_norm

    def json_obj(self):
        return {
            "m": self.order.K.m.text(),
            "f": self.order.conductor.text(),
            "genus": self.order.K.genus,
            "H_CM": str(self.height),
            "class": self.cls.json_obj(),
        }


def cm_height(point_or_tuple):
    """H_CM = q^g |f| for a point; max over coordinates for a tuple."""
    if isinstance(point_or_tuple, CMPoint):
        return point_or_tuple.height
    if isinstance(point_or_tuple, int):
        return point_or_tuple
    heights = [cm_height(x) for x in point_or_tuple]
    if not heights:
        raise DomainError("empty tuple has no CM height")
    return max(heights)


# ---------------------------------------------------------------------------
# bounded enumeration


@dataclass(frozen=True, slots=True)
class CatalogueRow:
    """One endomorphism-ring stratum: (m, f) plus its point count h."""

    m: Poly
    conductor: Poly
    genus: int
    h: int
    height: int

    def sort_key(self):
        F = self.m.field
        return (self.height, kenc(F, self.m.coeffs), kenc(F, self.conductor.coeffs))

    def json_obj(self, row_id=None):
        obj = {
            "m": self.m.text(),
            "f": self.conductor.text(),
            "genus": self.genus,
            "h": str(self.h),
            "H_CM": str(self.height),
        }
        if row_id is not None:
            obj["id"] = row_id
        return obj


def _imaginary_radicands_of_genus(field, g):
    """Squarefree imaginary radicands of genus g, one per square-scaling class.

    Ramified type (deg 2g+1) contributes monic m and c0*m for the
    canonical non-square c0; inert type (deg 2g+2) contributes c0*m only,
    since a square leading coefficient would make the field real.
    """
    c0 = field.canonical_nonsquare()
    out = []
    for degree, scalings in ((2 * g + 1, (1, c0)), (2 * g + 2, (c0,))):
        base = field.q**degree
        for lower in range(base):
            m = Poly(field, kdec(field, base + lower))
            if not m.is_squarefree():
                continue
            for c in scalings:
                out.append(m * c)
    return out


def enumerate_cm_points(field, bound, budget=DEFAULT_ENUM_BUDGET):
    """Catalogue of all (m, f) with q^g |f| < bound, canonically sorted.

    Radicands are listed once per F_q^x-square scaling class; each row
    carries h = |Pic(R)| from the conductor formula, so the total number
    of CM points of height < bound is the sum of the h column.
    """
    if bound < 1:
        raise DomainError("height bound must be >= 1")
    q = field.q
    rows = []
    # q^g |f| < bound  =>  g + deg f <= level_max
    level_max = -1
    while q ** (level_max + 1) < bound:
        level_max += 1
    work = sum(
        2 * q ** (2 * g + 2) * q ** (level_max - g) for g in range(level_max + 1)
    )
    if work > budget:
        raise BudgetError(
            f"CM catalogue scan needs ~ {work} candidates > budget {budget}",
            bound=bound,
            budget=budget,
        )
    for g in range(level_max + 1):
        radicands = _imaginary_radicands_of_genus(field, g)
        for deg_f in range(level_max - g + 1):
            base = q**deg_f
            conductors = [Poly(field, kdec(field, base + lo)) for lo in range(base)]
            for m in radicands:
                K = analyze_quadratic(field, m)
                for f in conductors:
                    height = q**g * f.norm
                    if height >= bound:
                        continue
                    h, _ = order_class_number(K, f)
                    rows.append(CatalogueRow(m, f, g, h, height))
    rows.sort(key=CatalogueRow.sort_key)
    return rows


def catalogue_total(rows):
    """Total number of CM points represented by a catalogue."""
    return sum(row.h for row in rows)


def catalogue_json(rows):
    return [row.json_obj(row_id=i) for i, row in enumerate(rows)]


def point_from_row(row, field):
    """The principal-class CM point of a catalogue row."""
    K = analyze_quadratic(field, row.m)
    order = QuadOrder.make(K, row.conductor)
    return CMPoint(order, principal_form(order))


# ---------------------------------------------------------------------------
# Galois action


def split_prime_form(order, p, conjugate=False):
    """The canonical prime form (p, b) above a split prime p.

    Requires chi(m, p) = +1 and p coprime to the conductor; of the two
    square roots of D modulo p the canonically smaller one is chosen
    (the other via conjugate=True).
    """
    F = order.K.field
    p = parse_poly(F, p) if not isinstance(p, Poly) else p
    chi = quadratic_character(order.K.m, p)
    if chi != 1:
        raise NotSplitError(
            f"prime {p.text()} has character {chi}, not split", prime=p.text()
        )
    if (order.conductor % p).is_zero:
        raise NotSplitError(
            f"prime {p.text()} divides the conductor", prime=p.text()
        )
    roots = sqrtmod(F, order.D.coeffs, p.coeffs)
    if len(roots) != 2:
        raise AssertionError("split prime must carry exactly two roots")
    b = roots[1] if conjugate else roots[0]
    return FormClass(order, p, Poly(F, b))


def acting_ideal_form(order, n, conjugate=False):
    """Unreduced form of the canonical ideal N above monic n, norm <n>.

    Built by raw (unreduced) composition of the split prime forms, one
    factor per prime multiplicity; the first coefficient stays exactly n
    because every composition gcd is 1.
    """
    F = order.K.field
    n = parse_poly(F, n)
    if n.is_zero or not n.is_monic:
        raise DomainError("the acting modulus n must be monic and nonzero")
    if n.degree == 0:
        return principal_form(order)
    result = None
    for p, mult in factor_monic(n):
        prime_form = split_prime_form(order, p.poly, conjugate)
        for _ in range(mult):
            result = prime_form if result is None else compose_raw(result, prime_form)
    if result.a != n:
        raise AssertionError("acting ideal lost its norm during composition")
    return result


def galois_isogeny_step(point, n, conjugate=False):
    """Apply the Frobenius attached to n: compose with [N]^-1 and reduce."""
    if point.order.K.infinity_type != "ramified":
        raise UnsupportedPath(
            "the class-group action needs the forms path (ramified radicand)"
        )
    ideal = acting_ideal_form(point.order, n, conjugate)
    stepped = reduce_form(compose_raw(point.cls, reduce_form(ideal).inverse()))
    return CMPoint(point.order, stepped)


def galois_orbit(point, p, conjugate=False, max_steps=None):
    """Orbit of a point under repeated sigma_p; returns (points, cycle length).

    The cycle length is the multiplicative order of [P] in Pic(R).
    """
    F = point.order.K.field
    p = parse_poly(F, p) if not isinstance(p, Poly) else p
    start_key = (reduce_form(point.cls) if not point.cls.is_reduced else point.cls).key()
    orbit = [point]
    cur = point
    steps = 0
    while True:
        cur = galois_isogeny_step(cur, p, conjugate)
        steps += 1
        if cur.cls.key() == start_key:
            return orbit, steps
        orbit.append(cur)
        if max_steps is not None and steps > max_steps:
            raise BudgetError(
                f"orbit did not close within {max_steps} steps", max_steps=max_steps
            )
        if steps > 10_000_000:
            raise AssertionError("orbit failed to close")


def find_split_prime(order, min_degree=1, budget_degree=8):
    """Code-smallest prime that splits in R and misses the conductor."""
    from .ffpoly import irreducibles

    F = order.K.field
    for t in range(min_degree, budget_degree + 1):
        for p in irreducibles(F, t):
            if quadratic_character(order.K.m, p) != 1:
                continue
            if (order.conductor % p.poly).is_zero:
                continue
            return p
    raise BudgetError(
        f"no split prime of degree <= {budget_degree} found",
        budget_degree=budget_degree,
    )
