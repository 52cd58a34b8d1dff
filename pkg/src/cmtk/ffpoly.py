"""Exact arithmetic in F_q and the polynomial ring A = F_q[T], q odd.

Field elements are encoded as integers 0..q-1: for prime q the residue
itself, for q = p^e the base-p digit string of a residue modulo a fixed
primitive modulus (the canonical modulus is recorded on the FqSpec and in
all emitted metadata, so encodings are reproducible).

Polynomials are coefficient tuples, constant term first, with no trailing
zeros; the zero polynomial is the empty tuple.  The absolute value is
|a| = q^deg(a).  Every polynomial has a stable integer code (base-q value
of its coefficient string); code order coincides with the canonical
ordering used for deterministic output: degree first, then coefficients
compared from the leading one down.

The private k* functions operate on raw coefficient tuples and carry the
hot loops; the Poly / PrimePoly wrappers are the public surface.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass

from .errors import BudgetError, DomainError

DEFAULT_ENUM_BUDGET = 10_000_000
MAX_Q = 1 << 16

# ---------------------------------------------------------------------------
# small integer helpers


def _is_prime_int(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factor_int(n):
    """Trial-division factorization of a positive integer, {prime: mult}."""
    if n < 1:
        raise DomainError("factor_int needs a positive integer")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _moebius(n):
    mu = 1
    for _, m in factor_int(n).items():
        if m > 1:
            return 0
        mu = -mu
    return mu


# ---------------------------------------------------------------------------
# the coefficient field


class FqSpec:
    """Arithmetic in F_q, q = p^e with p an odd prime and q <= 2^16.

    Elements are integer codes 0..q-1.  For e > 1 the code is the base-p
    digit string of the residue written on the power basis of T modulo
    `modulus`, the canonical primitive modulus: the code-smallest monic
    irreducible of degree e over F_p whose residue class of T generates
    the multiplicative group.  Since T is then a generator, exp/log
    tables drive multiplication.
    """

    __slots__ = ("p", "e", "q", "modulus", "_exp", "_log", "_leg")

    def __init__(self, p, e, modulus, exp, log):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus  # coefficient tuple over F_p, None for e == 1
        self._exp = exp
        self._log = log
        if e == 1:
            self._leg = tuple(
                0 if c == 0 else (1 if pow(c, (p - 1) // 2, p) == 1 else -1)
                for c in range(p)
            )
        else:
            self._leg = tuple(
                0 if c == 0 else (1 if log[c] % 2 == 0 else -1) for c in range(self.q)
            )

    # -- element operations (codes in, codes out) ---------------------------

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        p, out, mult = self.p, 0, 1
        for _ in range(self.e):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        p, out, mult = self.p, 0, 1
        for _ in range(self.e):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow_elt(self, a, k):
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        if self.e == 1:
            return pow(a, k % (self.p - 1) if k >= 0 else k, self.p)
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def legendre(self, c):
        """Quadratic character of a constant: +1 square, -1 non-square, 0 zero."""
        return self._leg[c]

    def is_square(self, c):
        return self._leg[c] >= 0

    def canonical_nonsquare(self):
        """Code-smallest non-square unit; exists since q is odd."""
        for c in range(1, self.q):
            if self._leg[c] == -1:
                return c
        raise AssertionError("odd q must have a non-square")

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def json_obj(self):
        obj = {"p": self.p, "e": self.e, "q": self.q}
        if self.modulus is not None:
            obj["modulus"] = list(self.modulus)
        return obj

    def __repr__(self):
        return f"FqSpec(q={self.q})"

    def __eq__(self, other):
        return isinstance(other, FqSpec) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((FqSpec, self.p, self.e))


def _canonical_primitive_modulus(p, e):
    """Code-smallest monic primitive polynomial of degree e over F_p."""
    base = Fq(p)
    q = p**e
    order_primes = list(factor_int(q - 1))
    for lower in range(p**e):
        f = kdec(base, p**e + lower)
        if not kis_irreducible(base, f):
            continue
        # primitive: T generates (F_p[T]/f)^* of order q-1
        x = (0, 1)
        if any(
            kpow_mod(base, x, (q - 1) // ell, f) == (1,) for ell in order_primes
        ):
            continue
        return f
    raise AssertionError("no primitive polynomial found")


def Fq(p, e=1):
    """Construct (and cache) the field F_{p^e}; p odd prime, p^e <= 2^16.

    Specs are interned: the same (p, e) always returns the same object.
    """
    return _fq_interned(int(p), int(e))


@functools.lru_cache(maxsize=None)
def _fq_interned(p, e):
    if not _is_prime_int(p) or p == 2:
        raise DomainError(f"p must be an odd prime, got {p}")
    if e < 1 or p**e > MAX_Q:
        raise DomainError(f"q = p^e must satisfy 1 <= e and q <= {MAX_Q}")
    if e == 1:
        return FqSpec(p, 1, None, None, None)
    modulus = _canonical_primitive_modulus(p, e)
    base = Fq(p)
    q = p**e
    exp = [0] * (q - 1)
    log = [0] * q
    cur = (1,)
    for i in range(q - 1):
        code = kenc_base(cur, p)
        exp[i] = code
        log[code] = i
        cur = kmod(base, kmulx(cur), modulus)
    return FqSpec(p, e, modulus, tuple(exp), tuple(log))


def fq_from_q(q):
    """Field with q elements from q alone (q an odd prime power)."""
    fac = factor_int(q)
    if len(fac) != 1:
        raise DomainError(f"q = {q} is not a prime power")
    (p, e), = fac.items()
    return Fq(p, e)


# ---------------------------------------------------------------------------
# raw polynomial kernels: coefficient tuples, constant first, trimmed


def ktrim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def kdeg(a):
    return len(a) - 1  # zero polynomial gets -1


def kenc_base(a, q):
    code = 0
    for c in reversed(a):
        code = code * q + c
    return code


def kenc(F, a):
    return kenc_base(a, F.q)


def kdec(F, code):
    q = F.q
    out = []
    while code:
        out.append(code % q)
        code //= q
    return tuple(out)


def kmulx(a):
    """Multiply by T."""
    return (0,) + a if a else ()


def kadd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    if F.e == 1:
        p = F.p
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
    else:
        add = F.add
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
    return ktrim(out)


def kneg(F, a):
    if F.e == 1:
        p = F.p
        return tuple((-c) % p for c in a)
    return tuple(F.neg(c) for c in a)


def ksub(F, a, b):
    return kadd(F, a, kneg(F, b))


def kscale(F, a, c):
    if c == 0:
        return ()
    if F.e == 1:
        p = F.p
        return tuple(x * c % p for x in a)
    mul = F.mul
    return tuple(mul(x, c) for x in a)


def kmul(F, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    if F.e == 1:
        p = F.p
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return ktrim([v % p for v in out])
    mul, add = F.mul, F.add
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = add(out[i + j], mul(ai, bj))
    return ktrim(out)


def kdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return (), a
    inv_lc = F.inv(b[-1])
    if F.e == 1:
        p = F.p
        rem = list(a)
        quot = [0] * (da - db + 1)
        for i in range(da - db, -1, -1):
            c = rem[i + db] % p
            if c:
                c = c * inv_lc % p
                quot[i] = c
                for j in range(db + 1):
                    rem[i + j] = (rem[i + j] - c * b[j]) % p
        return ktrim(quot), ktrim(rem[:db])
    mul, sub = F.mul, F.sub
    rem = list(a)
    quot = [0] * (da - db + 1)
    for i in range(da - db, -1, -1):
        c = rem[i + db]
        if c:
            c = mul(c, inv_lc)
            quot[i] = c
            for j in range(db + 1):
                rem[i + j] = sub(rem[i + j], mul(c, b[j]))
    return ktrim(quot), ktrim(rem[:db])


def kmod(F, a, b):
    return kdivmod(F, a, b)[1]


def kdiv_exact(F, a, b):
    q, r = kdivmod(F, a, b)
    if r:
        raise AssertionError("inexact polynomial division")
    return q


def kmonic(F, a):
    """(monic multiple of a, leading coefficient)."""
    if not a:
        raise DomainError("zero polynomial has no monic normalization")
    lc = a[-1]
    if lc == 1:
        return a, lc
    return kscale(F, a, F.inv(lc)), lc


def kgcd(F, a, b):
    while b:
        a, b = b, kmod(F, a, b)
    if not a:
        return ()
    return kmonic(F, a)[0]


def kxgcd(F, a, b):
    """(g, u, v) with g = u*a + v*b, g monic (or zero)."""
    r0, r1 = a, b
    u0, u1 = (1,), ()
    v0, v1 = (), (1,)
    while r1:
        q, r = kdivmod(F, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, ksub(F, u0, kmul(F, q, u1))
        v0, v1 = v1, ksub(F, v0, kmul(F, q, v1))
    if not r0:
        return (), u0, v0
    lc = r0[-1]
    if lc != 1:
        c = F.inv(lc)
        r0, u0, v0 = kscale(F, r0, c), kscale(F, u0, c), kscale(F, v0, c)
    return r0, u0, v0


def kpow_mod(F, a, k, mod):
    if k < 0:
        raise DomainError("negative exponent in kpow_mod")
    result = kmod(F, (1,), mod)
    a = kmod(F, a, mod)
    while k:
        if k & 1:
            result = kmod(F, kmul(F, result, a), mod)
        a = kmod(F, kmul(F, a, a), mod)
        k >>= 1
    return result


def keval(F, a, x):
    """Evaluate at a field element code (Horner)."""
    if F.e == 1:
        p = F.p
        acc = 0
        for c in reversed(a):
            acc = (acc * x + c) % p
        return acc
    acc = 0
    mul, add = F.mul, F.add
    for c in reversed(a):
        acc = add(mul(acc, x), c)
    return acc


def kderiv(F, a):
    if len(a) < 2:
        return ()
    if F.e == 1:
        p = F.p
        return ktrim([(i * c) % p for i, c in enumerate(a)][1:])
    out = []
    for i, c in enumerate(a):
        if i == 0:
            continue
        n = i % F.p
        acc = 0
        for _ in range(n):
            acc = F.add(acc, c)
        out.append(acc)
    return ktrim(out)


def kmonic_by_code(F, d, lower):
    """Monic polynomial of degree d with lower-coefficient code `lower`."""
    return kdec(F, F.q**d + lower)


def kmonics(F, d):
    """All monic polynomials of degree d in canonical order."""
    for lower in range(F.q**d):
        yield kdec(F, F.q**d + lower)


# ---------------------------------------------------------------------------
# irreducibility, factorization


def kis_irreducible(F, f):
    """Deterministic full irreducibility test (Rabin) for monic f."""
    t = kdeg(f)
    if t < 1:
        return False
    if f[0] == 0 and t > 1:
        return False
    x = (0, 1)
    # powers of Frobenius applied to T modulo f
    frob = [kmod(F, x, f)]
    for _ in range(t):
        frob.append(kpow_mod(F, frob[-1], F.q, f))
    for ell in factor_int(t):
        g = kgcd(F, ksub(F, frob[t // ell], frob[0]), f)
        if g != (1,):
            return False
    return frob[t] == frob[0]


def _kpth_root(F, f):
    """p-th root of f when f' = 0 (all exponents divisible by p)."""
    p = F.p
    k = F.p ** (F.e - 1)
    out = []
    for i in range(0, len(f), p):
        out.append(F.pow_elt(f[i], k))
    return ktrim(out)


def _edf(F, f, d):
    """Split monic squarefree f, all of whose prime factors have degree d."""
    n = kdeg(f)
    if n == d:
        return [f]
    half = (F.q**d - 1) // 2
    code = F.q  # first non-constant candidate in canonical order
    while True:
        r = kmod(F, kdec(F, code), f)
        code += 1
        if kdeg(r) < 1:
            continue
        g = kgcd(F, r, f)
        if 0 < kdeg(g) < n:
            return _edf(F, g, d) + _edf(F, kdiv_exact(F, f, g), d)
        s = kpow_mod(F, r, half, f)
        g = kgcd(F, ksub(F, s, (1,)), f)
        if 0 < kdeg(g) < n:
            return _edf(F, g, d) + _edf(F, kdiv_exact(F, f, g), d)


def _factor_squarefree(F, f):
    """Distinct-degree then equal-degree splitting of monic squarefree f."""
    out = []
    x = (0, 1)
    cur = f
    h = kmod(F, x, cur)
    d = 0
    while kdeg(cur) > 0:
        d += 1
        if 2 * d > kdeg(cur):
            out.append(cur)
            break
        h = kpow_mod(F, h, F.q, cur)
        g = kgcd(F, ksub(F, h, kmod(F, x, cur)), cur)
        if kdeg(g) > 0:
            out.extend(_edf(F, g, d))
            cur = kdiv_exact(F, cur, g)
            h = kmod(F, h, cur)
    return out


def kfactor_monic(F, f):
    """Factor monic f into {prime tuple: multiplicity}."""
    if kdeg(f) <= 0:
        return {}
    df = kderiv(F, f)
    if not df:
        sub = kfactor_monic(F, _kpth_root(F, f))
        return {pp: F.p * m for pp, m in sub.items()}
    s = kdiv_exact(F, f, kgcd(F, f, df))
    out = {}
    rem = f
    for prime in _factor_squarefree(F, s):
        m = 0
        while True:
            quot, r = kdivmod(F, rem, prime)
            if r:
                break
            rem = quot
            m += 1
        out[prime] = m
    for pp, m in kfactor_monic(F, rem).items():
        out[pp] = out.get(pp, 0) + m
    return out


def kis_squarefree(F, f):
    if kdeg(f) <= 0:
        return kdeg(f) == 0
    df = kderiv(F, f)
    if not df:
        return False
    return kgcd(F, f, df) == (1,)


# ---------------------------------------------------------------------------
# quadratic characters


def kchar(F, m, prime):
    """Quadratic character of m modulo an irreducible: Euler criterion."""
    r = kmod(F, m, prime)
    if not r:
        return 0
    s = kpow_mod(F, r, (F.q ** kdeg(prime) - 1) // 2, prime)
    if s == (1,):
        return 1
    if kadd(F, s, (1,)) == ():
        return -1
    raise AssertionError("Euler criterion returned a non-sign")


def kjacobi(F, a, b):
    """Jacobi symbol (a/b) for monic b, via quadratic reciprocity.

    Agrees with kchar when b is irreducible; never factors anything.
    """
    if not b or b[-1] != 1:
        raise DomainError("kjacobi needs a monic lower argument")
    recip_sign_active = ((F.q - 1) // 2) % 2 == 1  # q = 3 mod 4
    result = 1
    a = kmod(F, a, b)
    while True:
        db = kdeg(b)
        if db == 0:
            return result
        if not a:
            return 0
        lc = a[-1]
        da = kdeg(a)
        if F.legendre(lc) == -1 and db % 2 == 1:
            result = -result
        if da == 0:
            return result
        a0 = kscale(F, a, F.inv(lc)) if lc != 1 else a
        if recip_sign_active and da % 2 == 1 and db % 2 == 1:
            result = -result
        a, b = kmod(F, b, a0), a0


# ---------------------------------------------------------------------------
# public wrappers


@dataclass(frozen=True, slots=True)
class Poly:
    """Polynomial over a fixed F_q; immutable, hashable, exact."""

    field: FqSpec
    coeffs: tuple

    @classmethod
    def make(cls, field, coeffs):
        return cls(field, ktrim(tuple(int(c) % field.q for c in coeffs)))

    @classmethod
    def constant(cls, field, c):
        return cls(field, ktrim((int(c) % field.q,)))

    @classmethod
    def gen(cls, field):
        return cls(field, (0, 1))

    # -- structure ----------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def leading(self):
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def norm(self):
        """|a| = q^deg(a); the zero polynomial has norm 0."""
        if self.is_zero:
            return 0
        return self.field.q**self.degree

    @property
    def code(self):
        """Integer code; realizes the canonical (degree, leading-lex) order."""
        return kenc(self.field, self.coeffs)

    # -- arithmetic -----------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.field is not self.field:
                raise DomainError("mixed coefficient fields")
            return other
        if isinstance(other, int):
            return Poly.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Poly(self.field, kadd(self.field, self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, kneg(self.field, self.coeffs))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Poly(self.field, ksub(self.field, self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Poly(self.field, kmul(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._lift(other)
        q, r = kdivmod(self.field, self.coeffs, other.coeffs)
        return Poly(self.field, q), Poly(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, k):
        if k < 0:
            raise DomainError("negative polynomial power")
        result = Poly.constant(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def powmod(self, k, mod):
        return Poly(self.field, kpow_mod(self.field, self.coeffs, k, mod.coeffs))

    def monic(self):
        return Poly(self.field, kmonic(self.field, self.coeffs)[0])

    def gcd(self, other):
        other = self._lift(other)
        return Poly(self.field, kgcd(self.field, self.coeffs, other.coeffs))

    def derivative(self):
        return Poly(self.field, kderiv(self.field, self.coeffs))

    def evaluate(self, x):
        return keval(self.field, self.coeffs, x)

    def is_squarefree(self):
        return kis_squarefree(self.field, self.coeffs)

    # -- text / JSON ----------------------------------------------------------

    def text(self):
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("T" if c == 1 else f"{c}*T")
            else:
                terms.append(f"T^{i}" if c == 1 else f"{c}*T^{i}")
        return "+".join(terms)

    def json_obj(self):
        obj = {"q": self.field.q, "coeffs": list(self.coeffs)}
        if self.field.e > 1:
            obj["p"] = self.field.p
            obj["modulus"] = list(self.field.modulus)
        return obj

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"Poly(q={self.field.q}, {self.text()})"


_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(T(?:\^(\d+))?)?$")


def poly_from_text(field, s):
    """Parse "2*T^3+T+1" style text; coefficients reduced into 0..q-1."""
    s = s.replace(" ", "").replace("−", "-")
    if not s:
        raise DomainError("empty polynomial text")
    chunks = re.findall(r"[+-]?[^+-]+", s)
    if "".join(chunks) != s:
        raise DomainError(f"cannot parse polynomial text {s!r}")
    acc = {}
    for chunk in chunks:
        sign = 1
        body = chunk
        if body[0] in "+-":
            sign = -1 if body[0] == "-" else 1
            body = body[1:]
        m = _TERM_RE.match(body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise DomainError(f"cannot parse polynomial term {chunk!r}")
        coef = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            exp = 0
        elif m.group(3) is not None:
            exp = int(m.group(3))
        else:
            exp = 1
        if coef >= field.q and field.e > 1:
            raise DomainError(
                f"coefficient {coef} is not an element code of F_{field.q}"
            )
        c = coef % field.q if field.e == 1 else coef
        if sign == -1:
            c = field.neg(c)
        acc[exp] = field.add(acc.get(exp, 0), c)
    if not acc:
        return Poly(field, ())
    coeffs = [0] * (max(acc) + 1)
    for exp, c in acc.items():
        coeffs[exp] = c
    return Poly(field, ktrim(coeffs))


def poly_from_json(obj, field=None):
    """Parse {"q": 3, "coeffs": [1, 1, 0, 2]} (constant term first)."""
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise DomainError("polynomial JSON needs a 'coeffs' list")
    if field is None:
        if "q" not in obj:
            raise DomainError("polynomial JSON needs 'q' when no field is given")
        field = fq_from_q(int(obj["q"]))
    elif "q" in obj and int(obj["q"]) != field.q:
        raise DomainError(
            f"polynomial JSON q={obj['q']} does not match the active field q={field.q}"
        )
    coeffs = obj["coeffs"]
    if not all(isinstance(c, int) and 0 <= c < field.q for c in coeffs):
        raise DomainError("polynomial JSON coefficients must be codes in 0..q-1")
    return Poly(field, ktrim(tuple(coeffs)))


def parse_poly(field, text_or_json):
    """Accept either the text form or a JSON object/string form."""
    if isinstance(text_or_json, Poly):
        return text_or_json
    if isinstance(text_or_json, dict):
        return poly_from_json(text_or_json, field)
    s = str(text_or_json).strip()
    if s.startswith("{"):
        import json as _json

        return poly_from_json(_json.loads(s), field)
    return poly_from_text(field, s)


@dataclass(frozen=True, slots=True)
class PrimePoly:
    """Monic irreducible polynomial with its irreducibility witnessed.

    The default construction path runs the full deterministic test; the
    internal constructors record the exhaustive method that certified the
    factor instead.  No root-free or degree shortcut is ever stored.
    """

    poly: Poly
    witness: str = "unchecked"

    def __post_init__(self):
        if self.witness == "unchecked":
            if not self.poly.is_monic or not kis_irreducible(
                self.poly.field, self.poly.coeffs
            ):
                raise DomainError(f"{self.poly!r} is not monic irreducible")
            object.__setattr__(self, "witness", "rabin")

    @property
    def degree(self):
        return self.poly.degree

    @property
    def norm(self):
        return self.poly.norm

    @property
    def field(self):
        return self.poly.field

    @property
    def coeffs(self):
        return self.poly.coeffs

    def text(self):
        return self.poly.text()

    def __repr__(self):
        return f"PrimePoly(q={self.poly.field.q}, {self.poly.text()})"


def as_prime(field, p):
    """Coerce a Poly / text / PrimePoly to a verified PrimePoly."""
    if isinstance(p, PrimePoly):
        return p
    return PrimePoly(parse_poly(field, p))


# ---------------------------------------------------------------------------
# factorization and enumeration (public)


def factor_monic(f):
    """Factor a monic polynomial; list of (PrimePoly, multiplicity).

    Primes are sorted canonically; the product of prime powers equals f.
    """
    if f.is_zero:
        raise DomainError("cannot factor the zero polynomial")
    if not f.is_monic:
        raise DomainError("factor_monic needs a monic polynomial")
    F = f.field
    fac = kfactor_monic(F, f.coeffs)
    out = [
        (PrimePoly(Poly(F, pp), witness="split-recombine"), m)
        for pp, m in fac.items()
    ]
    out.sort(key=lambda t: kenc(F, t[0].coeffs))
    return out


def factor_any(f):
    """(leading coefficient, factorization of the monic part)."""
    if f.is_zero:
        raise DomainError("cannot factor the zero polynomial")
    return f.leading, factor_monic(f.monic())


def irreducible_count(q, t):
    """Number of monic irreducibles of degree t over F_q (divisor sum)."""
    if t < 1:
        raise DomainError("degree must be >= 1")
    total = 0
    for d in range(1, t + 1):
        if t % d == 0:
            total += _moebius(d) * q ** (t // d)
    assert total % t == 0
    return total // t


_IRR_CACHE = {}


def irreducibles(field, t, budget=DEFAULT_ENUM_BUDGET):
    """All monic irreducibles of degree t, canonically ordered.

    Sieve by striking products (smallest factor has degree <= t/2), so
    membership in the output is itself an exhaustive irreducibility
    witness.  Enumeration work ~ t*q^t is checked against the budget.
    """
    key = (field, t)
    if key in _IRR_CACHE:
        return _IRR_CACHE[key]
    if t < 1:
        raise DomainError("degree must be >= 1")
    if t * field.q**t > budget:
        raise BudgetError(
            f"irreducible enumeration needs work ~ {t * field.q ** t} > budget {budget}",
            q=field.q,
            t=t,
            budget=budget,
        )
    q = field.q
    size = q**t
    composite = bytearray(size)
    for d in range(1, t // 2 + 1):
        for g in irreducibles(field, d, budget):
            gc = g.coeffs
            for lower in range(q ** (t - d)):
                h = kdec(field, q ** (t - d) + lower)
                prod = kmul(field, gc, h)
                composite[kenc(field, prod) - size] = 1
    out = []
    for lower in range(size):
        if not composite[lower]:
            out.append(
                PrimePoly(Poly(field, kdec(field, size + lower)), witness="sieve")
            )
    result = tuple(out)
    expected = irreducible_count(q, t)
    if len(result) != expected:
        raise AssertionError(
            f"sieve found {len(result)} irreducibles of degree {t}, expected {expected}"
        )
    _IRR_CACHE[key] = result
    return result


def quadratic_character(m, prime):
    """chi(m mod p): +1 if a nonzero square in A/p, -1 if not, 0 if p | m.

    Completely multiplicative in m for m coprime to p; +1 on all of
    F_q^* when deg p is even.
    """
    if isinstance(m, PrimePoly):
        m = m.poly
    p = as_prime(m.field, prime)
    if m.is_zero:
        raise DomainError("character of the zero polynomial")
    return kchar(m.field, m.coeffs, p.coeffs)


def jacobi_symbol(m, b):
    """Reciprocity-chain Jacobi symbol (m/b), b monic; no factoring."""
    if isinstance(m, PrimePoly):
        m = m.poly
    if isinstance(b, PrimePoly):
        b = b.poly
    return kjacobi(m.field, m.coeffs, b.coeffs)


def monic_polys(field, degree):
    """Iterator over monic polynomials of the given degree, canonical order."""
    for c in kmonics(field, degree):
        yield Poly(field, c)
