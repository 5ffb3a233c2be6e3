"""The symmetry groups and their action on symmetric matrices.

For odd n the group is the split special orthogonal group of the
anti-diagonal form: matrices m with m^t A m = A and det m = 1.  For even
n it is the projective similitude model: classes [m] of matrices with
m^t A m = mult * A for a unit multiplier, taken modulo scalars.  This is
the correct point set of the quotient group scheme over non-closed
rings: the twisted classes (multiplier a non-square) are needed, e.g.
to rescale the central slicing entry by an arbitrary unit.

The action used everywhere is

    act(g, B) = mult(g)^(-1) * (m B m^t),

a left action that preserves the reducible hyperplane for the
lower-triangular subgroup and leaves the invariant polynomial fixed.
(The familiar transpose-inverse form of the action corresponds to the
substitution m -> (m^t)^(-1), which swaps lower for upper triangular;
with lower-triangular parabolics pinned, this is the compatible form.)
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .errors import NotASquare
from .exactmath import ModRing, Q, R, Ring, Z, ring_from_tag, scalar_str, _parse_scalar
from .repcore import SymMatrix, antidiag_rows, w0_layout


# ---------------------------------------------------------------------------
# small generic matrix helpers (dense lists of ring elements)


def mat_mul(ring: Ring, a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ring.coerce(0)
            for k in range(n):
                acc = ring.add(acc, ring.mul(a[i][k], b[k][j]))
            row.append(acc)
        out.append(row)
    return out


def mat_transpose(a):
    n = len(a)
    return [[a[j][i] for j in range(n)] for i in range(n)]


def mat_det(ring: Ring, a):
    n = len(a)
    if n == 1:
        return a[0][0]
    # cofactor expansion is fine at these sizes and needs no division
    total = ring.coerce(0)
    for j in range(n):
        if ring.is_zero(a[0][j]):
            continue
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        term = ring.mul(a[0][j], mat_det(ring, minor))
        total = ring.add(total, ring.neg(term) if j % 2 else term)
    return total


def identity_rows(n: int, ring: Ring):
    z, one = ring.coerce(0), ring.coerce(1)
    return [[one if i == j else z for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# group elements


class GroupElem:
    """Matrix in the symmetry group; for even n, a similitude class."""

    __slots__ = ("n", "ring", "mat", "mult", "_parabolic")

    def __init__(self, n: int, ring: Ring, mat, mult=None, check: bool = True):
        self.n = n
        self.ring = ring
        mult = ring.coerce(1) if mult is None else ring.coerce(mult)
        mat = [list(r) for r in mat]
        if n % 2 == 0:
            mat, mult = _normalize_class(ring, mat, mult)
        self.mat = tuple(tuple(r) for r in mat)
        self.mult = mult
        self._parabolic = None
        if check:
            self._check_membership()

    def _check_membership(self):
        ring, n = self.ring, self.n
        a = antidiag_rows(n, ring)
        lhs = mat_mul(ring, mat_mul(ring, mat_transpose(self.mat), a), self.mat)
        rhs = [[ring.mul(self.mult, v) for v in row] for row in a]
        assert lhs == rhs, "not a similitude of the split form"
        if n % 2 == 1:
            assert self.ring.is_unit(self.mult) and self.mult == ring.coerce(1)
            d = mat_det(ring, [list(r) for r in self.mat])
            assert d == ring.coerce(1), f"det {d} != 1"
        else:
            assert ring.is_unit(self.mult), "multiplier must be a unit"

    @staticmethod
    def identity(n: int, ring: Ring = Z) -> "GroupElem":
        return GroupElem(n, ring, identity_rows(n, ring), check=False)

    def mul(self, other: "GroupElem") -> "GroupElem":
        assert self.ring == other.ring and self.n == other.n
        m = mat_mul(self.ring, self.mat, other.mat)
        return GroupElem(
            self.n, self.ring, m, self.ring.mul(self.mult, other.mult), check=False
        )

    def inverse(self) -> "GroupElem":
        """m^(-1) = mult^(-1) A m^t A, exact whenever mult is a unit."""
        ring = self.ring
        a = antidiag_rows(self.n, ring)
        m = mat_mul(ring, mat_mul(ring, a, mat_transpose(self.mat)), a)
        mi = ring.inv(self.mult)
        m = [[ring.mul(mi, v) for v in row] for row in m]
        return GroupElem(self.n, ring, m, mi, check=False)

    def key(self):
        return (self.mat, self.mult)

    def __eq__(self, other):
        return isinstance(other, GroupElem) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GroupElem(n={self.n}, {self.ring.tag}, mult={self.mult})"

    def to_json(self) -> str:
        d = {
            "n": self.n,
            "ring": self.ring.tag,
            "rows": [[scalar_str(v) for v in row] for row in self.mat],
        }
        if self.n % 2 == 0:
            d["sign_class"] = True
            d["mult"] = scalar_str(self.mult)
        return json.dumps(d)

    @staticmethod
    def from_json(s: str) -> "GroupElem":
        d = json.loads(s)
        ring = ring_from_tag(d["ring"])
        rows = [[_parse_scalar(v, ring) for v in row] for row in d["rows"]]
        mult = _parse_scalar(d.get("mult", "1"), ring)
        return GroupElem(d["n"], ring, rows, mult)


def _normalize_class(ring: Ring, mat, mult):
    """Canonical representative of [m] modulo scalars (even n only)."""
    n = len(mat)
    flat = [mat[i][j] for i in range(n) for j in range(n)]
    if ring.tag in ("Z", "Q"):
        fr = [Fraction(v) for v in flat]
        den = 1
        for v in fr:
            den = den * v.denominator // math.gcd(den, v.denominator)
        ints = [int(v * den) for v in fr]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if g == 0:
            raise ZeroDivisionError("zero matrix is not a group element")
        lead = next(v for v in ints if v != 0)
        if lead < 0:
            g = -g
        lam = Fraction(g, den)  # mat/lam is primitive with positive lead
        out = [[ring.coerce(Fraction(v) / lam) for v in row] for row in mat]
        return out, ring.coerce(Fraction(mult) / lam**2)
    if isinstance(ring, ModRing):
        best = None
        for lam in ring.units():
            li = ring.inv(lam)
            cand = tuple(
                tuple(ring.mul(li, v) for v in row) for row in mat
            )
            cm = ring.mul(ring.mul(li, li), mult)
            if best is None or (cand, cm) < best:
                best = (cand, cm)
        return [list(r) for r in best[0]], best[1]
    if ring.tag == "R":
        lead = next((v for row in mat for v in row if v != 0.0), None)
        if lead is None:
            raise ZeroDivisionError("zero matrix")
        s = 1.0 if lead > 0 else -1.0
        return [[s * v for v in row] for row in mat], mult
    return mat, mult


def act(g: GroupElem, b: SymMatrix) -> SymMatrix:
    """Left action on symmetric matrices; preserves the invariant."""
    assert g.n == b.n and g.ring == b.ring
    ring = g.ring
    m = [list(r) for r in g.mat]
    out = mat_mul(ring, mat_mul(ring, m, b.rows), mat_transpose(m))
    if g.mult != ring.coerce(1):
        mi = ring.inv(g.mult)
        out = [[ring.mul(mi, v) for v in row] for row in out]
    return SymMatrix(b.n, ring, out)


def act_w0(g: GroupElem, b) -> "ReducibleMatrix":
    """Action of a parabolic element on the hyperplane (membership is
    re-validated by the constructor)."""
    from .repcore import ReducibleMatrix

    return ReducibleMatrix.from_sym(act(g, b))


# ---------------------------------------------------------------------------
# unipotent generators


def unipotent_gen(ring: Ring, n: int, i: int, j: int, v) -> GroupElem:
    """The one-parameter unipotent element with free coordinate v at
    (i, j): identity plus v(E_ij - E_{n+1-j, n+1-i}), with the quadratic
    correction -(v^2/2) E_{n+1-j, j} exactly in the middle-row case of
    odd n (where the two elementary positions interact).  Over rings
    without 1/2 the middle-row coordinate must be even.
    """
    if not (2 <= i <= n - 1 and 1 <= j <= min(i - 1, n - i)):
        raise IndexError(f"no unipotent coordinate at ({i}, {j}) for n={n}")
    v = ring.coerce(v)
    rows = identity_rows(n, ring)
    rows[i - 1][j - 1] = ring.add(rows[i - 1][j - 1], v)
    rows[n - j][n - i] = ring.sub(rows[n - j][n - i], v)
    if n % 2 == 1 and i == (n + 1) // 2:
        corr = ring.half(ring.mul(v, v))  # HalvingError if v is odd
        rows[n - j][j - 1] = ring.sub(rows[n - j][j - 1], corr)
    return GroupElem(n, ring, rows, check=False)


def unipotent_from_coords(ring: Ring, n: int, coords: dict) -> GroupElem:
    """Ordered product of unipotent generators over all free coordinates."""
    g = GroupElem.identity(n, ring)
    for (i, j) in w0_layout(n).n_coords:
        v = coords.get((i, j))
        if v is not None and not ring.is_zero(ring.coerce(v)):
            g = g.mul(unipotent_gen(ring, n, i, j, v))
    return g


# ---------------------------------------------------------------------------
# torus


def torus_diag(ring: Ring, n: int, t_upper, mult=None):
    """Diagonal element from its first ceil(n/2) entries; the rest are
    forced by t_i * t_{n+1-i} = mult."""
    mult = ring.coerce(1) if mult is None else ring.coerce(mult)
    t = [ring.coerce(v) for v in t_upper]
    assert len(t) == (n + 1) // 2
    full = list(t)
    if n % 2 == 1:
        assert ring.mul(t[-1], t[-1]) == mult, "middle entry must square to mult"
        start = n // 2 - 1
    else:
        start = n // 2 - 1
    for i in range(start, -1, -1):
        full.append(ring.mul(mult, ring.inv(t[i])))
    rows = [[ring.coerce(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = full[i]
    return GroupElem(n, ring, rows, mult)


def torus_elem(ring: Ring, n: int, s) -> GroupElem:
    """Diagonal torus element from the cusp coordinates s_1..s_{floor(n/2)}.

    Odd n:  t_i = prod_{l>=i} s_l^(-1) for i <= g, middle entry 1.
    Even n: with sq = sqrt(s_{g} s_{g+1}) (g = (n-2)/2, NotASquare if the
    product has no square root in the ring),
            t_i = sq^(-1) prod_{i<=l<=g-1} s_l^(-1) for i <= g-1,
            t_g = sq^(-1),  t_{g+1} = sq^(-1) s_g.
    """
    s = [ring.coerce(v) for v in s]
    g = n // 2
    assert len(s) == g
    if n % 2 == 1:
        t = []
        for i in range(1, g + 1):
            acc = ring.coerce(1)
            for l in range(i, g + 1):
                acc = ring.mul(acc, ring.inv(s[l - 1]))
            t.append(acc)
        t.append(ring.coerce(1))
        return torus_diag(ring, n, t)
    h = (n - 2) // 2
    prod = ring.mul(s[h - 1], s[h])
    sq = ring.sqrt(prod)  # NotASquare propagates
    sqi = ring.inv(sq)
    t = []
    for i in range(1, h):
        acc = sqi
        for l in range(i, h):
            acc = ring.mul(acc, ring.inv(s[l - 1]))
        t.append(acc)
    t.append(sqi)
    t.append(ring.mul(sqi, s[h - 1]))
    return torus_diag(ring, n, t)


def haar_delta(n: int, s):
    """The torus factor of the Haar measure in cusp coordinates."""
    s = [Fraction(v) for v in s]
    g = n // 2
    assert len(s) == g
    acc = Fraction(1)
    if n % 2 == 1:
        for i in range(1, g + 1):
            acc *= s[i - 1] ** (i * i - 2 * i * g)
        return acc
    h = (n - 2) // 2
    acc *= (s[h - 1] * s[h]) ** (-(n * n - 2 * n) // 8)
    for i in range(1, (n - 4) // 2 + 1):
        acc *= s[i - 1] ** (i * i - i * (n - 1))
    return acc


def w0_scaling_character(g: GroupElem) -> Fraction:
    """For diagonal g: the factor by which act(g, .) scales the measure
    |lambda| dB on the hyperplane (coordinate scalings times the weight
    ratio).  Equals 1/haar_delta(s) for torus elements."""
    n = g.n
    lay = w0_layout(n)
    t = [Fraction(g.mat[i][i]) for i in range(n)]
    assert all(
        g.mat[i][j] == g.ring.coerce(0) for i in range(n) for j in range(n) if i != j
    ), "character formula needs a diagonal element"
    mu = Fraction(g.mult)
    chi = Fraction(1)
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if i + j >= n:
                chi *= t[i - 1] * t[j - 1] / mu
    for (i, j), e in zip(lay.slicing, lay.lambda_exponents):
        chi *= (t[i - 1] * t[j - 1] / mu) ** e
    return chi


# ---------------------------------------------------------------------------
# the finite diagonal subgroup


def gamma_group(n: int, ring: Ring = Z, include_all: bool = False):
    """Integer diagonal elements of the orthogonal group: sign patterns
    symmetric under i -> n+1-i; 2^ceil(n/2) of them before filtering.
    The filtered list keeps group members: det 1 for odd n, one
    representative per scalar class for even n."""
    half = (n + 1) // 2
    out = []
    seen = set()
    for mask in range(1 << half):
        eps = [1 if (mask >> i) & 1 == 0 else -1 for i in range(half)]
        full = list(eps) + [eps[n - 1 - i] for i in range(half, n)]
        rows = [[ring.coerce(0)] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = ring.coerce(full[i])
        if include_all:
            out.append(rows)
            continue
        if n % 2 == 1:
            det = 1
            for v in full:
                det *= v
            if det != 1:
                continue
        g = GroupElem(n, ring, rows, check=False)
        if g.key() in seen:
            continue
        seen.add(g.key())
        out.append(g)
    return out


def integral_diag_flips(n: int, ring: Ring = Z):
    """All diagonal +-1 similitudes over Z (multiplier +-1); for even n
    these include the central-entry sign flip that plain orthogonal
    diagonals cannot reach."""
    if n % 2 == 1:
        return gamma_group(n, ring)
    out = []
    seen = set()
    half = n // 2
    for mult in (1, -1):
        for mask in range(1 << half):
            t = [1 if (mask >> i) & 1 == 0 else -1 for i in range(half)]
            full = t + [mult * t[n - 1 - i] for i in range(half, n)]
            rows = [[ring.coerce(0)] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = ring.coerce(full[i])
            g = GroupElem(n, ring, rows, ring.coerce(mult), check=False)
            if g.key() not in seen:
                seen.add(g.key())
                out.append(g)
    return out


# ---------------------------------------------------------------------------
# the parabolic subgroup


def is_lower_parabolic(g: GroupElem) -> bool:
    """Lower-triangular test (scalar normalization keeps the zero
    pattern, so testing the stored representative suffices)."""
    if g._parabolic is None:
        ring = g.ring
        g._parabolic = all(
            ring.is_zero(g.mat[i][j])
            for i in range(g.n)
            for j in range(i + 1, g.n)
        )
    return g._parabolic


def random_parabolic(ring: Ring, n: int, bound: int, rng) -> GroupElem:
    """Random element of the lower parabolic with coordinates drawn
    uniformly from the integer box [-bound, bound]; deterministic in the
    caller-supplied rng."""
    half = (n + 1) // 2
    t = []
    for _ in range(half - (1 if n % 2 == 1 else 0)):
        v = 0
        while v == 0:
            v = rng.randint(-bound, bound)
        t.append(ring.coerce(v))
    if n % 2 == 1:
        t.append(ring.coerce(1))
    g = torus_diag(ring, n, t)
    lay = w0_layout(n)
    for (i, j) in lay.n_coords:
        v = rng.randint(-bound, bound)
        if n % 2 == 1 and i == (n + 1) // 2 and ring.tag == "Z":
            v *= 2
        if v:
            g = g.mul(unipotent_gen(ring, n, i, j, v))
    return g


def parabolic_mod_p(n: int, p: int):
    """Every element of the parabolic over F_p, by the triangular
    parametrization torus x unipotent (even n: similitude classes over
    both square classes of the multiplier).  Feasible for small n, p."""
    ring = ModRing(p)
    lay = w0_layout(n)
    units = ring.units()
    mults = [1]
    if n % 2 == 0:
        nonsq = next(u for u in units if not _is_square_mod(u, p))
        mults = [1, nonsq] if p > 2 else [1]
    out = []
    seen = set()
    half = (n + 1) // 2
    from itertools import product

    coord_ranges = []
    for (i, j) in lay.n_coords:
        if n % 2 == 1 and i == (n + 1) // 2 and p == 2:
            coord_ranges.append([0])  # middle coordinates are even
        else:
            coord_ranges.append(list(range(p)))
    for mult in mults:
        torus_axes = [units] * (half - (1 if n % 2 == 1 else 0))
        for t_tuple in product(*torus_axes):
            t = list(t_tuple)
            if n % 2 == 1:
                t.append(1)
            try:
                tor = torus_diag(ring, n, t, mult if n % 2 == 0 else 1)
            except AssertionError:
                continue
            for vs in product(*coord_ranges):
                u = unipotent_from_coords(
                    ring, n, dict(zip(lay.n_coords, vs))
                )
                g = tor.mul(u)
                if g.key() not in seen:
                    seen.add(g.key())
                    out.append(g)
    return out


def _is_square_mod(a: int, p: int) -> bool:
    return pow(a, (p - 1) // 2, p) == 1 if p > 2 else True


def parabolic_order_mod_p(n: int, p: int) -> int:
    """(p-1)^floor(n/2) * p^dim(N); agrees with len(parabolic_mod_p)."""
    lay = w0_layout(n)
    dim_n = len(lay.n_coords)
    if p == 2 and n % 2 == 1:
        dim_n -= sum(1 for (i, _j) in lay.n_coords if i == (n + 1) // 2)
    return (p - 1) ** (n // 2) * p**dim_n
