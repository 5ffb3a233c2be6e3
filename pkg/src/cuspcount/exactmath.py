"""Ring-generic exact arithmetic and univariate polynomial utilities.

Base rings are Z, Q, Z/mZ (composite m allowed), truncated p-adics
Z/p^kZ with a valuation accessor, and float64 reals.  Ring elements are
plain Python objects (int, Fraction, float); a Ring instance supplies
the arithmetic so that higher layers stay ring-generic.

Polynomial discriminants are computed by a subresultant polynomial
remainder sequence over Z (no coefficient blowup, no divisions that can
fail), with the Sylvester determinant kept alongside as an independent
oracle for tests.  Real-root counting is an exact Sturm chain over Q;
float inputs are converted to their exact dyadic rationals first, so the
count is deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateInput, HalvingError, NotASquare, RingTooSmall


# ---------------------------------------------------------------------------
# rings


class Ring:
    """Arithmetic for one base ring; elements are plain Python values."""

    tag = "?"
    is_field = False
    exact = True

    def coerce(self, x):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        """Exact division; raises if b does not divide a."""
        raise NotImplementedError

    def half(self, a):
        """a/2, raising HalvingError when 2 does not divide a."""
        return self.div(a, self.coerce(2))

    def sqrt(self, a):
        raise NotASquare(f"no square root implementation in {self.tag}")

    def __repr__(self):
        return f"Ring({self.tag})"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)


class IntegerRing(Ring):
    tag = "Z"

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return int(x)
        if isinstance(x, bool) or not isinstance(x, int):
            raise ValueError(f"{x!r} is not an integer")
        return x

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a in (1, -1):
            return a
        raise ZeroDivisionError(f"{a} is not a unit in Z")

    def div(self, a, b):
        if b == 0 or a % b != 0:
            if b == 2:
                raise HalvingError(f"{a} is odd")
            raise ZeroDivisionError(f"{b} does not divide {a} in Z")
        return a // b

    def sqrt(self, a):
        if a < 0:
            raise NotASquare(str(a))
        r = math.isqrt(a)
        if r * r != a:
            raise NotASquare(str(a))
        return r


class RationalRing(Ring):
    tag = "Q"
    is_field = True

    def coerce(self, x):
        if isinstance(x, float):
            return Fraction(x)
        return Fraction(x)

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / Fraction(b)

    def sqrt(self, a):
        a = Fraction(a)
        if a < 0:
            raise NotASquare(str(a))
        pn, pd = math.isqrt(a.numerator), math.isqrt(a.denominator)
        if pn * pn != a.numerator or pd * pd != a.denominator:
            raise NotASquare(str(a))
        return Fraction(pn, pd)


class RealRing(Ring):
    tag = "R"
    is_field = True
    exact = False

    def coerce(self, x):
        return float(x)

    def is_zero(self, a):
        return a == 0.0

    def is_unit(self, a):
        return a != 0.0

    def inv(self, a):
        return 1.0 / a

    def div(self, a, b):
        return a / b

    def half(self, a):
        return a / 2.0

    def sqrt(self, a):
        if a < 0:
            raise NotASquare(str(a))
        return math.sqrt(a)


class ModRing(Ring):
    """Z/mZ with least-nonnegative representatives; m may be composite."""

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must be >= 2")
        self.m = m
        self.tag = f"mod:{m}"
        self.is_field = _is_prime(m)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.m, x.denominator % self.m)
        return int(x) % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def is_unit(self, a):
        return math.gcd(a, self.m) == 1

    def inv(self, a):
        return pow(a, -1, self.m)

    def div(self, a, b):
        a, b = a % self.m, b % self.m
        g = math.gcd(b, self.m)
        if g == 1:
            return (a * pow(b, -1, self.m)) % self.m
        if a % g != 0:
            if b == 2:
                raise HalvingError(f"{a} not divisible by 2 mod {self.m}")
            raise ZeroDivisionError(f"{b} does not divide {a} mod {self.m}")
        # not unique in general; return the lift-compatible representative
        mm = self.m // g
        r = ((a // g) * pow(b // g, -1, mm)) % mm
        return r

    def elements(self):
        return range(self.m)

    def units(self):
        return [a for a in range(1, self.m) if math.gcd(a, self.m) == 1]

    def sqrt(self, a):
        a %= self.m
        for r in range(self.m):
            if (r * r) % self.m == a:
                return r
        raise NotASquare(f"{a} mod {self.m}")


class PadicTruncRing(ModRing):
    """Z/p^kZ plus a valuation accessor (valuations >= k collapse to k)."""

    def __init__(self, p: int, k: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        super().__init__(p**k)
        self.p = p
        self.k = k
        self.tag = f"padic:{p}:{k}"
        self.is_field = k == 1

    def val(self, a):
        a %= self.m
        if a == 0:
            return self.k
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v


Z = IntegerRing()
Q = RationalRing()
R = RealRing()


def integers_mod(m: int) -> ModRing:
    return ModRing(m)


def padic_trunc(p: int, k: int) -> PadicTruncRing:
    return PadicTruncRing(p, k)


def ring_from_tag(tag: str) -> Ring:
    if tag == "Z":
        return Z
    if tag == "Q":
        return Q
    if tag == "R":
        return R
    if tag.startswith("mod:"):
        return ModRing(int(tag.split(":")[1]))
    if tag.startswith("padic:"):
        _, p, k = tag.split(":")
        return PadicTruncRing(int(p), int(k))
    raise ValueError(f"unknown ring tag {tag!r}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


is_prime = _is_prime


# ---------------------------------------------------------------------------
# monic polynomials


@dataclass(frozen=True)
class MonicPoly:
    """x^n + sum_i coeffs[i-1] * x^(n-i); exactly n stored coefficients."""

    n: int
    coeffs: tuple
    ring: Ring

    def __post_init__(self):
        if self.n < 1 or len(self.coeffs) != self.n:
            raise ValueError("need exactly n coefficients")

    @staticmethod
    def make(coeffs, ring=Z) -> "MonicPoly":
        cs = tuple(ring.coerce(c) for c in coeffs)
        return MonicPoly(len(cs), cs, ring)

    def coeff(self, i: int):
        """Coefficient of x^(n-i); coeff(0) is the leading 1."""
        if i == 0:
            return self.ring.coerce(1)
        return self.coeffs[i - 1]

    def dense(self):
        """[1, f1, ..., fn], highest degree first."""
        return [self.ring.coerce(1), *self.coeffs]

    def __call__(self, x):
        acc = self.ring.coerce(1)
        for c in self.coeffs:
            acc = self.ring.add(self.ring.mul(acc, x), c)
        return acc

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n, "ring": self.ring.tag, "coeffs": [str(c) for c in self.coeffs]}
        )

    @staticmethod
    def from_json(s: str) -> "MonicPoly":
        d = json.loads(s)
        ring = ring_from_tag(d["ring"])
        return MonicPoly.make([_parse_scalar(c, ring) for c in d["coeffs"]], ring)


def _parse_scalar(s: str, ring: Ring):
    if "/" in s:
        return ring.coerce(Fraction(s))
    if "." in s or "e" in s or "E" in s:
        return ring.coerce(float(s))
    return ring.coerce(int(s))


def scalar_str(x) -> str:
    """Decimal-string form used by every JSON schema (exact for Q/Z)."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(x) if isinstance(x, float) else str(x)


# --- integer resultants / discriminants ------------------------------------


def _int_poly(coeffs):
    """Clear denominators: returns (integer coeff list, common denominator)."""
    den = 1
    for c in coeffs:
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    out = []
    for c in coeffs:
        c = Fraction(c) * den
        assert c.denominator == 1
        out.append(int(c))
    return out, den


def _strip(p):
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return p[i:]


def _prem(a, b):
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a reduced mod b."""
    r = list(a)
    db = len(b) - 1
    delta = len(r) - 1 - db
    r = [c * b[0] ** (delta + 1) for c in r]
    while len(r) - 1 >= db:
        lead = r[0]
        if lead != 0:
            f, rem = divmod(lead, b[0])
            assert rem == 0
            for k in range(db + 1):
                r[k] -= f * b[k]
        r = r[1:]
    return _strip(r)


def resultant_int(p, q) -> int:
    """Resultant of integer polynomials (dense, highest degree first),
    by the subresultant pseudo-remainder sequence: every division in the
    g*h^delta corrections is exact, so coefficients stay polynomial-size.
    """
    p, q = _strip(list(p)), _strip(list(q))
    if not p or not q:
        return 0
    sign = 1
    if len(p) < len(q):
        if ((len(p) - 1) * (len(q) - 1)) % 2 == 1:
            sign = -sign
        p, q = q, p
    if len(q) == 1:
        return sign * q[0] ** (len(p) - 1)
    g, h = 1, 1
    while True:
        dp, dq = len(p) - 1, len(q) - 1
        delta = dp - dq
        if (dp % 2 == 1) and (dq % 2 == 1):
            sign = -sign
        r = _prem(p, q)
        if not r:
            return 0
        den = g * h**delta
        assert all(c % den == 0 for c in r)
        p, q = q, [c // den for c in r]
        g = p[0]
        if delta > 0:
            num = g**delta
            hd = h ** (delta - 1)
            assert num % hd == 0
            h = num // hd
        if len(q) == 1:
            dA = len(p) - 1
            if dA == 0:
                return sign
            num = q[0] ** dA
            hd = h ** (dA - 1)
            assert num % hd == 0
            return sign * (num // hd)


def sylvester_resultant(p, q) -> int:
    """Determinant of the Sylvester matrix; brute-force oracle."""
    p, q = _strip(list(p)), _strip(list(q))
    m, n = len(p) - 1, len(q) - 1
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return p[0] ** n
    if n == 0:
        return q[0] ** m
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + p + [0] * (size - i - m - 1))
    for i in range(m):
        rows.append([0] * i + q + [0] * (size - i - n - 1))
    return _int_det(rows)


def _int_det(rows) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    a = [row[:] for row in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def poly_disc(f: MonicPoly):
    """disc(f) = (-1)^(n(n-1)/2) Res(f, f'), exact in f's ring.

    Z/mZ coefficients are lifted to Z, the integer discriminant is taken
    there, and reduced back; this is exact because disc is a polynomial
    identity in the coefficients.
    """
    ring = f.ring
    if isinstance(ring, ModRing):
        dense = [1] + [int(c) for c in f.coeffs]
        return ring.coerce(_disc_int(dense))
    if ring.tag == "R":
        dense = [Fraction(1)] + [Fraction(c) for c in f.coeffs]
        ints, den = _int_poly(dense)
        d = _disc_int(ints)
        return float(Fraction(d, den ** (2 * f.n - 2)))
    dense = [Fraction(1)] + [Fraction(c) for c in f.coeffs]
    ints, den = _int_poly(dense)
    d = Fraction(_disc_int(ints), den ** (2 * f.n - 2))
    return ring.coerce(d)


def _disc_int(dense) -> int:
    n = len(dense) - 1
    deriv = [(n - i) * dense[i] for i in range(n)]
    res = resultant_int(dense, deriv)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    assert res % dense[0] == 0
    return sign * (res // dense[0])


# --- Sturm chains -----------------------------------------------------------


def _sturm_chain(dense):
    """Signed-remainder chain over Q for a squarefree rational polynomial."""
    p0 = [Fraction(c) for c in dense]
    n = len(p0) - 1
    p1 = [(n - i) * p0[i] for i in range(n)]
    chain = [p0, p1]
    while True:
        r = _poly_mod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _poly_mod(a, b):
    r = list(a)
    db = len(b) - 1
    while len(r) - 1 >= db:
        if r[0] == 0:
            r = r[1:]
            continue
        f = r[0] / b[0]
        for k in range(db + 1):
            r[k] -= f * b[k]
        r = r[1:]
    return _strip(r)


def _sign_changes(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def sturm_real_roots(f: MonicPoly) -> int:
    """Number of distinct real roots, via sign changes of the Sturm chain
    at -inf and +inf (leading-coefficient signs)."""
    if f.ring.tag not in ("Q", "R", "Z"):
        raise ValueError("real-root counts need an archimedean coefficient ring")
    dense = [Fraction(1)] + [Fraction(c) for c in f.coeffs]
    if poly_disc(MonicPoly.make([Fraction(c) for c in f.coeffs], Q)) == 0:
        raise DegenerateInput("vanishing discriminant")
    chain = _sturm_chain(dense)
    at_pos = [1 if p[0] > 0 else -1 for p in chain]
    at_neg = [
        (1 if p[0] > 0 else -1) * (1 if (len(p) - 1) % 2 == 0 else -1) for p in chain
    ]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def sturm_count_interval(f: MonicPoly, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in (lo, hi]; used by the grid oracle in tests."""
    dense = [Fraction(1)] + [Fraction(c) for c in f.coeffs]
    chain = _sturm_chain(dense)

    def ev(p, x):
        acc = Fraction(0)
        for c in p:
            acc = acc * x + c
        return acc

    def sgn(v):
        return 0 if v == 0 else (1 if v > 0 else -1)

    lo_s = [sgn(ev(p, Fraction(lo))) for p in chain]
    hi_s = [sgn(ev(p, Fraction(hi))) for p in chain]
    return _sign_changes(lo_s) - _sign_changes(hi_s)


def padic_val(x, p: int):
    """v_p(x) for integers and rationals; v_p(0) = +inf sentinel."""
    if isinstance(x, Fraction):
        if x == 0:
            return math.inf
        return padic_val(x.numerator, p) - padic_val(x.denominator, p)
    x = int(x)
    if x == 0:
        return math.inf
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v
