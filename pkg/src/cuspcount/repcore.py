"""Objects of the representation: symmetric matrices, the reducible
hyperplane, the invariant polynomial, heights, the weight monomials, and
the explicit polynomial section into the hyperplane.

Conventions (fixed once, used by every module):

* indices are 1-based in the math-facing API;
* the split form is the anti-diagonal matrix of ones;
* W0 is the subspace of symmetric B with b_ij = 0 whenever i + j < n;
* the "slicing" entries of B in W0 are the anti-diagonal ones b_{i,n-i}
  (plus the central diagonal entry b_{n/2,n/2} for even n);
* inv(B) = (-1)^floor(n/2) det(x*A + B), which is monic of degree n.

The section writes, for each k, the coefficient f_k into a single entry
just below the anti-diagonal: a diagonal entry (full value) when the
level n+k is even, an off-diagonal pair (halved value) when odd.  The
entry signs are calibrated once against the identity inv(section(f)) = f
(see ``calibrate_section``); the result is eps_k = (-1)^(k+1) with one
quadratic correction +f_1^2/4 on the k=2 entry for even n, and is
hard-coded below.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DegenerateInput, InvalidParity, LengthMismatch, RingTooSmall
from .exactmath import (
    MonicPoly,
    Q,
    R,
    Ring,
    Z,
    ModRing,
    _int_det,
    _parse_scalar,
    padic_val,
    poly_disc,
    ring_from_tag,
    scalar_str,
    sturm_real_roots,
)


# ---------------------------------------------------------------------------
# matrices


class SymMatrix:
    """n x n symmetric matrix; rows stored densely, entry(i, j) 1-based."""

    __slots__ = ("n", "ring", "rows")

    def __init__(self, n: int, ring: Ring, rows):
        self.n = n
        self.ring = ring
        self.rows = [list(r) for r in rows]
        assert len(self.rows) == n and all(len(r) == n for r in self.rows)

    @staticmethod
    def from_entries(n: int, ring: Ring, entries: dict) -> "SymMatrix":
        """entries maps (i, j) with i <= j to values; the rest are zero."""
        z = ring.coerce(0)
        rows = [[z for _ in range(n)] for _ in range(n)]
        for (i, j), v in entries.items():
            v = ring.coerce(v)
            rows[i - 1][j - 1] = v
            rows[j - 1][i - 1] = v
        return SymMatrix(n, ring, rows)

    def entry(self, i: int, j: int):
        return self.rows[i - 1][j - 1]

    def set_entry(self, i: int, j: int, v):
        self.rows[i - 1][j - 1] = v
        self.rows[j - 1][i - 1] = v

    def copy(self) -> "SymMatrix":
        return SymMatrix(self.n, self.ring, self.rows)

    def key(self):
        return tuple(tuple(r) for r in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, SymMatrix)
            and self.n == other.n
            and self.ring == other.ring
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash((self.ring.tag, self.key()))

    def __repr__(self):
        return f"SymMatrix({self.n}, {self.ring.tag}, {self.rows})"

    def in_hyperplane(self) -> bool:
        for i in range(1, self.n + 1):
            for j in range(i, self.n + 1):
                if i + j < self.n and not self.ring.is_zero(self.entry(i, j)):
                    return False
        return True

    def to_json(self) -> str:
        ent = []
        for i in range(1, self.n + 1):
            for j in range(i, self.n + 1):
                v = self.entry(i, j)
                if not self.ring.is_zero(v):
                    ent.append([i, j, scalar_str(v)])
        return json.dumps({"n": self.n, "ring": self.ring.tag, "entries": ent})

    @staticmethod
    def from_json(s: str) -> "SymMatrix":
        d = json.loads(s)
        ring = ring_from_tag(d["ring"])
        ent = {(i, j): _parse_scalar(v, ring) for i, j, v in d["entries"]}
        return SymMatrix.from_entries(d["n"], ring, ent)


class ReducibleMatrix(SymMatrix):
    """Symmetric matrix on the reducible hyperplane: b_ij = 0 for i+j < n."""

    def __init__(self, n, ring, rows):
        super().__init__(n, ring, rows)
        if not self.in_hyperplane():
            raise ValueError("entries above the anti-diagonal must vanish")

    @staticmethod
    def from_sym(b: SymMatrix) -> "ReducibleMatrix":
        return ReducibleMatrix(b.n, b.ring, b.rows)

    def copy(self) -> "ReducibleMatrix":
        return ReducibleMatrix(self.n, self.ring, self.rows)


def antidiag_rows(n: int, ring: Ring):
    z, one = ring.coerce(0), ring.coerce(1)
    return [[one if i + j == n - 1 else z for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class AntiDiagonalForm:
    """The split Gram matrix: anti-diagonal ones; det = (-1)^(n(n-1)/2)."""

    n: int

    def rows(self, ring: Ring = Z):
        return antidiag_rows(self.n, ring)

    def det_sign(self) -> int:
        return -1 if (self.n * (self.n - 1) // 2) % 2 else 1


# ---------------------------------------------------------------------------
# the combinatorial layout of W0


@dataclass(frozen=True)
class SweepStep:
    """One clearing move: the generator at (row, col) shifts the target
    entry by multiples of the slicing entry with index slice_idx."""

    k: int
    target: tuple
    gen: tuple
    slice_idx: int
    middle: bool


class W0Layout:
    """Index bookkeeping for W0(n): slicing entries, weight exponents,
    the clearing sweep, and the level decomposition of the coordinates."""

    def __init__(self, n: int):
        assert n >= 3
        self.n = n
        self.g = n // 2  # number of slicing entries
        odd = n % 2 == 1
        self.odd = odd

        self.slicing = [(i, n - i) for i in range(1, (n + 1) // 2)]
        if not odd:
            self.slicing.append((n // 2, n // 2))
        assert len(self.slicing) == self.g

        if odd:
            self.lambda_exponents = [2 * i - 1 for i in range(1, self.g + 1)]
            self.z_exponents = [2 * i for i in range(1, self.g + 1)]
        else:
            h = (n - 2) // 2
            self.lambda_exponents = [2 * i - 1 for i in range(1, h + 1)] + [h]
            self.z_exponents = [2 * i for i in range(1, h + 1)] + [h + 1]

        # free coordinates of the unipotent group: (row, col) index pairs
        self.n_coords = [
            (i, j) for i in range(2, n) for j in range(1, min(i - 1, n - i) + 1)
        ]
        self.middle_row = (n + 1) // 2 if odd else None

        # section entries: coefficient k lives at level k below the slicing
        self.center = {}
        for k in range(1, n + 1):
            if (n + k) % 2 == 0:
                self.center[k] = ((n + k) // 2, (n + k) // 2, "diag")
            else:
                self.center[k] = ((n + k - 1) // 2, (n + k + 1) // 2, "off")

        # clearing sweep of rows 1..n-2, innermost targets first
        self.sweep = []
        for k in range(1, n - 1):
            for j in range(min(k, n - k - 1), 0, -1):
                tgt = (k, n + 1 - j)
                gen = (k + 1, j)
                self.sweep.append(
                    SweepStep(
                        k=k,
                        target=tgt,
                        gen=gen,
                        slice_idx=min(k, n - k),
                        middle=odd and (k + 1 == self.middle_row),
                    )
                )
        assert len(self.sweep) == len(self.n_coords)

        # level decomposition: coordinates (i, j), i <= j, at level i+j-n
        self.coords_by_level = {}
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                lvl = i + j - n
                if lvl >= 0:
                    self.coords_by_level.setdefault(lvl, []).append((i, j))
        targets = {s.target for s in self.sweep}
        self.forced = {}
        for k in range(1, n + 1):
            i, j, _ = self.center[k]
            assert (i, j) not in targets
            self.forced[k] = (i, j)
        for lvl in range(1, n + 1):
            free = [c for c in self.coords_by_level[lvl] if c in targets]
            assert len(free) == len(self.coords_by_level[lvl]) - 1

    def slice_index_of(self, i: int, j: int) -> int:
        """1-based index of a slicing position."""
        return self.slicing.index((min(i, j), max(i, j))) + 1

    def slicing_values(self, b: SymMatrix):
        return [b.entry(i, j) for (i, j) in self.slicing]


@lru_cache(maxsize=None)
def w0_layout(n: int) -> W0Layout:
    return W0Layout(n)


# ---------------------------------------------------------------------------
# the invariant polynomial


def _mat_lift_int(b: SymMatrix):
    """Lift to an integer matrix together with a common denominator."""
    if isinstance(b.ring, ModRing):
        return [[int(v) for v in row] for row in b.rows], 1
    den = 1
    for row in b.rows:
        for v in row:
            f = Fraction(v)
            den = den * f.denominator // math.gcd(den, f.denominator)
    rows = []
    for row in b.rows:
        rows.append([int(Fraction(v) * den) for v in row])
    return rows, den


def _char_coeffs_int(n: int, rows) -> list:
    """Coefficients [c_0..c_n] of det(x*A + M), x^n first, M integer."""
    xs = list(range(n + 1))
    vals = []
    for x in xs:
        m = [
            [rows[i][j] + (x if i + j == n - 1 else 0) for j in range(n)]
            for i in range(n)
        ]
        vals.append(_int_det(m))
    # Newton's divided differences; nodes are integers so all exact
    coef = [Fraction(v) for v in vals]
    for k in range(1, n + 1):
        for i in range(n, k - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - k])
    poly = [Fraction(0)] * (n + 1)
    cur = [Fraction(1)]
    for k in range(n + 1):
        for d, c in enumerate(cur):
            poly[d] += coef[k] * c
        nxt = [Fraction(0)] * (len(cur) + 1)
        for d, c in enumerate(cur):
            nxt[d + 1] += c
            nxt[d] -= c * xs[k]
        cur = nxt
    out = [poly[n - d] for d in range(n + 1)]
    assert all(c.denominator == 1 for c in out)
    return [int(c) for c in out]


def invariant_poly(b: SymMatrix) -> MonicPoly:
    """inv(B) = (-1)^floor(n/2) det(x*A + B); always monic of degree n.

    Exact for every supported ring: entries are lifted to Z (clearing
    denominators for Q, taking least residues for Z/m), the determinant
    polynomial is interpolated at x = 0..n over Z, and mapped back.
    """
    n = b.n
    ring = b.ring
    rows, den = _mat_lift_int(b)
    cs = _char_coeffs_int(n, rows)
    sign = (-1) ** (n // 2)
    cs = [sign * c for c in cs]
    # undo the scaling: entries were multiplied by den, and the x^(n-k)
    # coefficient of det(xA + den*B) is den^k times the monic one
    assert cs[0] == 1
    if isinstance(ring, ModRing):
        coeffs = [ring.coerce(cs[k]) for k in range(1, n + 1)]
        assert ring.coerce(cs[0]) == ring.coerce(1)
        return MonicPoly(n, tuple(coeffs), ring)
    coeffs = []
    for k in range(1, n + 1):
        coeffs.append(ring.coerce(Fraction(cs[k], den**k)))
    return MonicPoly(n, tuple(coeffs), ring)


def interpolation_points(ring: Ring, count: int):
    """Distinct evaluation points, or RingTooSmall (kept for the direct
    interpolation path; ``invariant_poly`` lifts to Z instead)."""
    if isinstance(ring, ModRing) and ring.m <= count - 1:
        raise RingTooSmall(f"need {count} points in {ring.tag}")
    return [ring.coerce(i) for i in range(count)]


# ---------------------------------------------------------------------------
# height


def height(f) -> float:
    """H(f) = max_i |f_i|^(1/i); accepts MonicPoly or SymMatrix."""
    if isinstance(f, SymMatrix):
        f = invariant_poly(f)
    h = 0.0
    for i, c in enumerate(f.coeffs, start=1):
        h = max(h, float(abs(Fraction(c))) ** (1.0 / i))
    return h


def height_lt(f, x: int) -> bool:
    """Exact integer predicate: H(f) < X iff |f_i| < X^i for all i."""
    if isinstance(f, SymMatrix):
        f = invariant_poly(f)
    for i, c in enumerate(f.coeffs, start=1):
        c = Fraction(c)
        if abs(c) >= Fraction(x) ** i:
            return False
    return True


# ---------------------------------------------------------------------------
# weight monomials


def lambda_weight(b: ReducibleMatrix):
    """Product of slicing entries with the orbit-density exponents."""
    lay = w0_layout(b.n)
    ring = b.ring
    acc = ring.coerce(1)
    for (i, j), e in zip(lay.slicing, lay.lambda_exponents):
        v = b.entry(i, j)
        for _ in range(e):
            acc = ring.mul(acc, v)
    return acc


def slice_poly(n: int, bs, ring: Ring = Z):
    """The slice monomial prod b_k^(2k) (last exponent (n/2) for even n)."""
    lay = w0_layout(n)
    bs = list(bs)
    if len(bs) != lay.g:
        raise LengthMismatch(f"need {lay.g} slicing values for n={n}")
    acc = ring.coerce(1)
    for v, e in zip(bs, lay.z_exponents):
        v = ring.coerce(v)
        for _ in range(e):
            acc = ring.mul(acc, v)
    return acc


def slice_poly_of(b: ReducibleMatrix):
    lay = w0_layout(b.n)
    return slice_poly(b.n, lay.slicing_values(b), b.ring)


# ---------------------------------------------------------------------------
# the polynomial section


# Entry signs making inv(section(f)) = f hold exactly: eps_k = (-1)^(k+1),
# plus the quadratic correction +f_1^2/4 on the k=2 diagonal entry for
# even n.  Found once by calibrate_section() for n <= 8 and frozen here.


def _section_entries(n: int, fs, ring: Ring):
    """Entry dict of the section matrix for coefficients fs = [f_1..f_n]."""
    lay = w0_layout(n)
    ent = {}
    for i in range(1, n):
        ent[(i, n - i)] = ring.coerce(1)
    for k in range(1, n + 1):
        i, j, kind = lay.center[k]
        sgn = -1 if k % 2 == 0 else 1
        v = ring.mul(ring.coerce(sgn), fs[k - 1])
        if kind == "off":
            v = ring.half(v)
        if n % 2 == 0 and k == 2:
            quarter = ring.half(ring.half(ring.mul(fs[0], fs[0])))
            v = ring.add(v, quarter)
        ent[(i, j)] = v
    return ent


def section_matrix(f: MonicPoly, ring: Ring | None = None) -> ReducibleMatrix:
    """The explicit section: a hyperplane matrix with inv(section(f)) = f.

    Halved entries require division by 2 in the ring: for odd n those are
    the even-index coefficients, for even n the odd-index ones (so over Z
    the section exists for even n exactly when f_i is even for odd i).
    """
    ring = ring or f.ring
    fs = [ring.coerce(c) for c in f.coeffs]
    ent = _section_entries(f.n, fs, ring)
    b = ReducibleMatrix.from_sym(SymMatrix.from_entries(f.n, ring, ent))
    return b


def calibrate_section(n: int, trials: int = 20, seed: int = 11):
    """Re-derive the section's sign vector and quadratic correction from
    the identity inv(section(f)) = f; returns (signs, quad) and raises if
    the frozen table would disagree.  Run by the test suite for n <= 8.
    """
    import random

    rnd = random.Random(seed)
    signs = {}
    for k in range(1, n + 1):
        probe = [Fraction(0)] * n
        probe[k - 1] = Fraction(2)
        got = invariant_poly(section_matrix(MonicPoly.make(probe, Q)))
        # the frozen sign already multiplies the entry; +2 means agreement
        if got.coeffs[k - 1] == 2:
            signs[k] = -1 if k % 2 == 0 else 1
        else:
            raise AssertionError(f"sign calibration drifted at n={n}, k={k}")
    quad = {(2, 1, 1): Fraction(1, 4)} if n % 2 == 0 else {}
    for _ in range(trials):
        fs = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 4)) for _ in range(n)]
        f = MonicPoly.make(fs, Q)
        assert invariant_poly(section_matrix(f)).coeffs == f.coeffs
    return signs, quad


def section_rescaled(f: MonicPoly) -> ReducibleMatrix:
    """Height-rescaled section: entries are O(H(f)), inv still exactly f.

    The rescale factor is the exact dyadic value of float(H(f)); the
    section identity holds for any positive factor, so the computation
    stays in Q and is exact even for float inputs (which are themselves
    exact dyadics).  Float matrices are produced by rounding at the end.
    """
    if poly_disc(MonicPoly.make([Fraction(c) for c in f.coeffs], Q)) == 0:
        raise DegenerateInput("rescaled section needs nonzero discriminant")
    n = f.n
    yq = Fraction(height(f))
    fs = [Fraction(f.coeffs[i - 1]) / yq**i for i in range(1, n + 1)]
    b1 = section_matrix(MonicPoly.make(fs, Q))
    rows = [[yq * Fraction(v) for v in row] for row in b1.rows]
    if f.ring.tag == "R":
        return ReducibleMatrix(n, R, [[float(v) for v in row] for row in rows])
    return ReducibleMatrix(n, Q, rows)


# ---------------------------------------------------------------------------
# stratification by real root count


def stratify(f: MonicPoly) -> int:
    """Number r of distinct real roots; enforces the parity constraint
    (r odd iff n odd for squarefree real polynomials of degree n)."""
    d = poly_disc(MonicPoly.make([Fraction(c) for c in f.coeffs], Q))
    if d == 0:
        raise DegenerateInput("stratification needs nonzero discriminant")
    r = sturm_real_roots(f)
    if (r - f.n) % 2 != 0:
        raise InvalidParity(f"r={r} impossible for degree {f.n}")
    return r


def valid_root_counts(n: int):
    if n % 2 == 1:
        return [r for r in range(1, n + 1, 2)]
    return [r for r in range(0, n + 1, 2)]
