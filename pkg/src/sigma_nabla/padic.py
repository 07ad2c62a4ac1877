"""Scalar arithmetic: capped-relative p-adic numbers, an unramified
extension model, integer polynomials, and Newton-polygon utilities.

A ``PadicNumber`` is one of three things:

* an exact zero (valuation ``+inf``),
* a regular value ``p^val * unit`` with ``unit`` a unit known modulo
  ``p^prec`` (``1 <= prec <= nrel``), or
* an inexact zero ``O(p^floor)``: indistinguishable from zero, known only
  to have valuation ``>= floor``.

``nrel`` caps the relative precision.  Arithmetic never claims more digits
than the inputs support; subtraction of nearly equal values degrades
``prec`` and may collapse to an inexact zero.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import AmbiguousValuation, DivisionByZero, NumericalFailure

INF = math.inf

# three-valued comparison results
EQUAL = "equal"
UNEQUAL = "unequal"
INDISTINGUISHABLE = "indistinguishable"


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicNumber:
    __slots__ = ("p", "nrel", "val", "unit", "prec")

    def __init__(self, p, nrel, val, unit, prec):
        # raw constructor; use the classmethods or _make for normalisation
        self.p = p
        self.nrel = nrel
        self.val = val        # int, or None for exact zero
        self.unit = unit      # unit mod p^prec, or None for zeros
        self.prec = prec      # known relative digits, or None for zeros

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, p, nrel):
        return cls(p, nrel, None, None, None)

    @classmethod
    def inexact_zero(cls, p, nrel, floor):
        return cls(p, nrel, int(floor), None, None)

    @classmethod
    def _make(cls, p, nrel, val, raw, prec):
        """Normalise ``p^val * raw`` known to ``prec`` relative digits."""
        if prec > nrel:
            prec = nrel
        if prec <= 0:
            return cls.inexact_zero(p, nrel, val)
        raw %= p ** prec
        if raw == 0:
            return cls.inexact_zero(p, nrel, val + prec)
        t = vp_int(raw, p)
        if t >= prec:
            return cls.inexact_zero(p, nrel, val + prec)
        if t:
            val += t
            prec -= t
            raw //= p ** t
            raw %= p ** prec
        return cls(p, nrel, val, raw, prec)

    @classmethod
    def from_int(cls, p, nrel, n):
        if n == 0:
            return cls.zero(p, nrel)
        v = vp_int(n, p)
        return cls._make(p, nrel, v, n // p ** v, nrel)

    @classmethod
    def from_rational(cls, p, nrel, q) -> "PadicNumber":
        q = Fraction(q)
        if q == 0:
            return cls.zero(p, nrel)
        num, den = q.numerator, q.denominator
        vn = vp_int(num, p)
        vd = vp_int(den, p)
        un = num // p ** vn
        ud = den // p ** vd
        inv = pow(ud, -1, p ** nrel)
        return cls._make(p, nrel, vn - vd, un * inv, nrel)

    # -- predicates ----------------------------------------------------

    @property
    def is_exact_zero(self):
        return self.val is None

    @property
    def is_zero_at_precision(self):
        """Exact zero or inexact zero: no provable nonzero digit."""
        return self.unit is None

    @property
    def is_regular(self):
        return self.unit is not None

    @property
    def valuation(self):
        """Valuation; +inf for an exact zero, the floor for an inexact one."""
        if self.is_exact_zero:
            return INF
        return self.val

    @property
    def abs_floor(self):
        """The value is known modulo p^abs_floor; +inf when exact."""
        if self.is_exact_zero:
            return INF
        if self.unit is None:
            return self.val
        return self.val + self.prec

    # -- arithmetic ----------------------------------------------------

    def _check(self, other):
        if self.p != other.p:
            raise ValueError("mixed primes %d and %d" % (self.p, other.p))

    def __add__(self, other):
        if not isinstance(other, PadicNumber):
            return NotImplemented
        self._check(other)
        p = self.p
        nrel = min(self.nrel, other.nrel)
        a, b = self, other
        if a.is_exact_zero:
            return b if b.nrel <= nrel else b._cap(nrel)
        if b.is_exact_zero:
            return a if a.nrel <= nrel else a._cap(nrel)
        if a.unit is None and b.unit is None:
            return PadicNumber.inexact_zero(p, nrel, min(a.val, b.val))
        if a.unit is None or b.unit is None:
            z, r = (a, b) if a.unit is None else (b, a)
            # z = O(p^f), r regular
            if r.val < z.val:
                return PadicNumber._make(p, nrel, r.val, r.unit,
                                         min(r.prec, z.val - r.val))
            return PadicNumber.inexact_zero(p, nrel, z.val)
        if a.val > b.val:
            a, b = b, a
        shift = b.val - a.val
        prec = min(a.prec, b.prec + shift, nrel)
        raw = a.unit + b.unit * p ** shift
        return PadicNumber._make(p, nrel, a.val, raw, prec)

    def __neg__(self):
        if self.unit is None:
            return self
        return PadicNumber(self.p, self.nrel, self.val,
                           (-self.unit) % self.p ** self.prec, self.prec)

    def __sub__(self, other):
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PadicNumber):
            return NotImplemented
        self._check(other)
        p = self.p
        nrel = min(self.nrel, other.nrel)
        a, b = self, other
        if a.is_exact_zero or b.is_exact_zero:
            return PadicNumber.zero(p, nrel)
        if a.unit is None or b.unit is None:
            # O(p^f) * (p^v unit) = O(p^(f+v)); O * O likewise
            return PadicNumber.inexact_zero(p, nrel, a.val + b.val)
        return PadicNumber._make(p, nrel, a.val + b.val,
                                 a.unit * b.unit, min(a.prec, b.prec))

    def __truediv__(self, other):
        if not isinstance(other, PadicNumber):
            return NotImplemented
        self._check(other)
        p = self.p
        nrel = min(self.nrel, other.nrel)
        if other.unit is None:
            raise DivisionByZero(
                "divisor is zero at working precision"
                if not other.is_exact_zero else "division by exact zero")
        if self.is_exact_zero:
            return PadicNumber.zero(p, nrel)
        if self.unit is None:
            return PadicNumber.inexact_zero(p, nrel, self.val - other.val)
        prec = min(self.prec, other.prec)
        inv = pow(other.unit % p ** prec, -1, p ** prec)
        return PadicNumber._make(p, nrel, self.val - other.val,
                                 self.unit * inv, prec)

    def _cap(self, nrel):
        if self.is_exact_zero:
            return PadicNumber.zero(self.p, nrel)
        if self.unit is None:
            return PadicNumber.inexact_zero(self.p, nrel, self.val)
        return PadicNumber._make(self.p, nrel, self.val, self.unit,
                                 min(self.prec, nrel))

    def truncate_floor(self, floor):
        """Forget digits at and above p^floor (lower the absolute floor)."""
        if self.is_exact_zero:
            return self
        if self.val >= floor:
            return PadicNumber.inexact_zero(self.p, self.nrel, floor)
        if self.unit is None:
            return self
        return PadicNumber._make(self.p, self.nrel, self.val, self.unit,
                                 min(self.prec, floor - self.val))

    # -- comparisons ----------------------------------------------------

    def compare(self, other):
        """Three-valued comparison: EQUAL / UNEQUAL / INDISTINGUISHABLE."""
        d = self - other
        if d.is_exact_zero:
            return EQUAL
        if d.unit is None:
            return INDISTINGUISHABLE
        return UNEQUAL

    def agrees(self, other):
        """Not provably different at the shared working precision."""
        return self.compare(other) != UNEQUAL

    def __repr__(self):
        if self.is_exact_zero:
            return "0"
        if self.unit is None:
            return f"O({self.p}^{self.val})"
        return f"{self.p}^{self.val}*{self.unit} mod {self.p}^{self.prec}"

    def to_rational(self):
        """Exact rational p^val * unit of the stored representative."""
        if self.is_exact_zero:
            return Fraction(0)
        if self.unit is None:
            raise ValueError("inexact zero has no representative")
        return Fraction(self.unit) * Fraction(self.p) ** self.val


def padic_sum(values, p, nrel):
    acc = PadicNumber.zero(p, nrel)
    for v in values:
        acc = acc + v
    return acc


# ---------------------------------------------------------------------------
# Unramified extension Q_q / Q_p of degree f, with the canonical Frobenius.
# ---------------------------------------------------------------------------


def _polymul_mod(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _polyrem(a, g, p):
    """a mod g over F_p, g monic."""
    a = list(a)
    dg = len(g) - 1
    while len(a) - 1 >= dg:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - dg
            for i in range(dg + 1):
                a[shift + i] = (a[shift + i] - lead * g[i]) % p
        a.pop()
    while len(a) > 1 and a[-1] % p == 0:
        a.pop()
    return [c % p for c in a]


def _poly_pow_x(e, g, p):
    """x^e modulo (g, p) by square and multiply."""
    result = [1]
    base = [0, 1]
    base = _polyrem(base, g, p)
    while e:
        if e & 1:
            result = _polyrem(_polymul_mod(result, base, p), g, p)
        base = _polyrem(_polymul_mod(base, base, p), g, p)
        e >>= 1
    return result


def _is_irreducible(g, p):
    """Monic g irreducible over F_p: x^(p^f) = x and x^(p^d) != x for d|f."""
    f = len(g) - 1
    x = [0, 1]
    if _poly_pow_x(p ** f, g, p) != _polyrem(x, g, p):
        return False
    for d in range(1, f):
        if f % d == 0:
            if _poly_pow_x(p ** d, g, p) == _polyrem(x, g, p):
                return False
    return True


def find_irreducible(p, f):
    """Small monic irreducible of degree f over F_p, deterministic."""
    if f == 1:
        return [0, 1]
    # enumerate low-coefficient candidates in a fixed order
    bound = 1
    while True:
        rng = range(-bound, bound + 1)
        for tail_int in range((2 * bound + 1) ** f):
            tail = []
            t = tail_int
            for _ in range(f):
                tail.append(list(rng)[t % (2 * bound + 1)])
                t //= 2 * bound + 1
            g = [c % p for c in tail] + [1]
            if g[0] % p == 0:
                continue
            if _is_irreducible(g, p):
                return g
        bound += 1


class UnramifiedField:
    """Q_q = Q_p[x]/(g) with q = p^f and the canonical Frobenius lift.

    The Frobenius is computed by Hensel-lifting the root x^p of g mod p to
    a root of g in Z_p[x]/(g); its matrix in the power basis is stored as
    exact integers modulo p^kwork.
    """

    def __init__(self, p, f, nrel):
        self.p = p
        self.f = f
        self.nrel = nrel
        self.kwork = nrel + 2
        self.modulus = find_irreducible(p, f)  # integer coefficients, monic
        self.frob_matrix = self._lift_frobenius()

    def _mulmod(self, a, b, pk):
        g = self.modulus
        f = self.f
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % pk
        # reduce by monic g
        while len(out) > f:
            lead = out[-1]
            if lead:
                shift = len(out) - 1 - f
                for i in range(f + 1):
                    out[shift + i] = (out[shift + i] - lead * g[i]) % pk
            out.pop()
        out += [0] * (f - len(out))
        return out

    def _eval_poly(self, coeffs, at, pk):
        """Evaluate an integer polynomial at an algebra element."""
        acc = [0] * self.f
        for c in reversed(coeffs):
            acc = self._mulmod(acc, at, pk)
            acc[0] = (acc[0] + c) % pk
        return acc

    def _lift_frobenius(self):
        p, f = self.p, self.f
        pk = p ** self.kwork
        g = self.modulus
        dg = [(i * g[i]) for i in range(1, len(g))]
        # start from the root x^p of g modulo p
        r = _poly_pow_x(p, g, p) + [0] * f
        r = r[:f]
        # Newton: r <- r - g(r)/g'(r), doubling p-adic accuracy
        known = 1
        while known < self.kwork:
            known = min(2 * known, self.kwork)
            gr = self._eval_poly(g, r, pk)
            dgr = self._eval_poly(dg, r, pk)
            inv = self._invert_vec(dgr, pk)
            corr = self._mulmod(gr, inv, pk)
            r = [(ri - ci) % pk for ri, ci in zip(r, corr)]
        # columns: coordinates of r^j
        cols = []
        acc = [1] + [0] * (f - 1)
        for j in range(f):
            cols.append(list(acc))
            acc = self._mulmod(acc, r, pk)
        # row-major matrix: frob(x^j) = sum_i M[i][j] x^i
        return [[cols[j][i] for j in range(f)] for i in range(f)]

    def _invert_vec(self, a, pk):
        """Inverse in (Z/pk)[x]/(g) for a vector that is a unit mod p."""
        p, f = self.p, self.f
        # invert mod p by brute extended power: a^(p^f - 2) mod (g, p)
        ap = [c % p for c in a]
        inv = [1] + [0] * (f - 1)
        e = p ** f - 2
        base = ap
        while e:
            if e & 1:
                inv = _polyrem(_polymul_mod(inv, base, p), self.modulus, p)
            base = _polyrem(_polymul_mod(base, base, p), self.modulus, p)
            e >>= 1
        inv += [0] * (f - len(inv))
        # Newton lift: b <- b(2 - ab)
        known = 1
        b = [c % pk for c in inv]
        while known < self.kwork:
            known = min(2 * known, self.kwork)
            ab = self._mulmod(a, b, pk)
            two_minus = [(-c) % pk for c in ab]
            two_minus[0] = (two_minus[0] + 2) % pk
            b = self._mulmod(b, two_minus, pk)
        return b

    # -- scalar factory ------------------------------------------------

    def scalar(self, coords):
        coords = list(coords)
        if len(coords) != self.f:
            raise ValueError("expected %d coordinates" % self.f)
        out = []
        for c in coords:
            if isinstance(c, PadicNumber):
                out.append(c)
            else:
                out.append(PadicNumber.from_rational(self.p, self.nrel, c))
        return UnramifiedScalar(self, out)

    def from_int(self, n):
        return self.scalar([n] + [0] * (self.f - 1))

    def zero(self):
        return self.scalar([0] * self.f)

    def one(self):
        return self.from_int(1)

    def gen(self):
        return self.scalar([0, 1] + [0] * (self.f - 2))


class UnramifiedScalar:
    """Element of Q_q in the power basis, coordinates are PadicNumbers."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = list(coords)

    def _check(self, other):
        if self.field is not other.field:
            raise ValueError("mixed unramified fields")

    def __add__(self, other):
        if isinstance(other, PadicNumber):
            other = self.field.scalar(
                [other] + [PadicNumber.zero(self.field.p, self.field.nrel)]
                * (self.field.f - 1))
        self._check(other)
        return UnramifiedScalar(
            self.field, [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return UnramifiedScalar(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PadicNumber):
            return UnramifiedScalar(self.field,
                                    [a * other for a in self.coords])
        self._check(other)
        f = self.field.f
        p, nrel = self.field.p, self.field.nrel
        prod = [PadicNumber.zero(p, nrel) for _ in range(2 * f - 1)]
        for i, a in enumerate(self.coords):
            for j, b in enumerate(other.coords):
                prod[i + j] = prod[i + j] + a * b
        # reduce by the monic modulus with exact integer coefficients
        g = self.field.modulus
        for k in range(2 * f - 2, f - 1, -1):
            lead = prod[k]
            if lead.is_exact_zero:
                continue
            for i in range(f):
                gi = PadicNumber.from_int(p, nrel, g[i])
                prod[k - f + i] = prod[k - f + i] - lead * gi
        return UnramifiedScalar(self.field, prod[:f])

    def frobenius(self, power=1):
        """Apply the canonical lift of x -> x^p, ``power`` times."""
        p, nrel = self.field.p, self.field.nrel
        out = self
        for _ in range(power % self.field.f):
            m = self.field.frob_matrix
            coords = []
            for i in range(self.field.f):
                acc = PadicNumber.zero(p, nrel)
                for j in range(self.field.f):
                    acc = acc + PadicNumber.from_int(p, nrel, m[i][j]) * out.coords[j]
                coords.append(acc)
            out = UnramifiedScalar(self.field, coords)
        return out

    @property
    def is_zero_at_precision(self):
        return all(c.is_zero_at_precision for c in self.coords)

    def inverse(self):
        """Inverse via the multiplication-by-self matrix."""
        f = self.field.f
        p, nrel = self.field.p, self.field.nrel
        basis = []
        for j in range(f):
            e = [PadicNumber.zero(p, nrel)] * f
            e[j] = PadicNumber.from_int(p, nrel, 1)
            basis.append(UnramifiedScalar(self.field, e))
        cols = [(self * b).coords for b in basis]
        mat = [[cols[j][i] for j in range(f)] for i in range(f)]
        rhs = [PadicNumber.from_int(p, nrel, 1)] + \
              [PadicNumber.zero(p, nrel)] * (f - 1)
        sol = _solve_padic(mat, rhs)
        return UnramifiedScalar(self.field, sol)

    def __truediv__(self, other):
        return self * other.inverse()

    def agrees(self, other):
        return all(a.agrees(b) for a, b in zip(self.coords, other.coords))

    def __repr__(self):
        return "UnramifiedScalar(%s)" % ", ".join(repr(c) for c in self.coords)


def _solve_padic(mat, rhs):
    """Gaussian elimination over PadicNumbers with min-valuation pivoting."""
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv, pv = None, INF
        for r in range(col, n):
            x = a[r][col]
            if x.is_regular and x.valuation < pv:
                piv, pv = r, x.valuation
        if piv is None:
            raise DivisionByZero("singular system at working precision")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        for r in range(n):
            if r != col and a[r][col].is_regular:
                factor = a[r][col] / inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# Integer polynomials and archimedean root data.
# ---------------------------------------------------------------------------


class IntPolynomial:
    """Polynomial with exact integer (or rational) coefficients.

    ``coeffs[i]`` is the coefficient of t^i; trailing zeros are stripped so
    the leading coefficient of a nonzero polynomial is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [Fraction(0)]
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        if self.is_zero:
            return 0
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return IntPolynomial([c * other for c in self.coeffs])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            out[i] += a
        for i, b in enumerate(other.coeffs):
            out[i] += b
        return IntPolynomial(out)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return "IntPolynomial(%s)" % (list(self.coeffs),)


def complex_root_magnitudes(poly: IntPolynomial):
    """Magnitudes of the reciprocal roots of ``poly``, sorted ascending.

    For a local factor det(1 - t*F) with constant term 1 these are the
    archimedean absolute values of the Frobenius eigenvalues.  Computed
    numerically; relative error is below 1e-9 for degrees up to 64.
    The product of the returned magnitudes is |leading/constant|.
    """
    if poly.is_zero:
        raise ValueError("zero polynomial has no roots")
    if poly.coeffs[0] == 0:
        raise ValueError("constant term must be nonzero (reciprocal roots)")
    if poly.degree == 0:
        return []
    # reciprocal roots of P(t) are the roots of t^deg * P(1/t)
    rev = [float(c) for c in poly.coeffs]           # ascending in t
    # numpy wants descending powers of the reversed polynomial, which is
    # exactly the ascending list of the original one
    try:
        roots = np.roots(rev)
    except Exception as exc:       # pragma: no cover - numpy internal failure
        raise NumericalFailure(str(exc))
    if not np.all(np.isfinite(roots)):
        raise NumericalFailure("root finder returned non-finite values")
    mags = sorted(abs(complex(r)) for r in roots)
    return mags


# ---------------------------------------------------------------------------
# Newton polygons.
# ---------------------------------------------------------------------------


class NewtonPolygon:
    """Slopes (as root valuations) with multiplicities, plus the offset of
    the lowest provably nonzero coefficient."""

    def __init__(self, slopes, offset):
        self.slopes = tuple(sorted(slopes))   # list of (Fraction, int)
        self.offset = offset

    def multiset(self):
        out = []
        for s, m in self.slopes:
            out.extend([s] * m)
        return out

    def __eq__(self, other):
        return (isinstance(other, NewtonPolygon)
                and self.slopes == other.slopes and self.offset == other.offset)

    def __repr__(self):
        return f"NewtonPolygon(slopes={list(self.slopes)}, offset={self.offset})"


def newton_polygon(coeffs):
    """Newton polygon of sum(coeffs[i] * T^i) from coefficient valuations.

    Returns root valuations: the negated slopes of the lower convex hull of
    the points (i, v_p(a_i)).  Coefficients that are exact zeros are
    skipped; a coefficient that is merely zero at working precision raises
    ``AmbiguousValuation`` whenever its valuation floor could affect the
    hull.
    """
    pts = []
    indeterminate = []
    for i, c in enumerate(coeffs):
        if isinstance(c, PadicNumber):
            if c.is_exact_zero:
                continue
            if c.unit is None:
                indeterminate.append((i, c.val))
            else:
                pts.append((i, Fraction(c.val)))
        else:
            raise TypeError("newton_polygon expects PadicNumber coefficients")
    if not pts:
        raise AmbiguousValuation("no coefficient has a determined valuation")
    pts.sort()
    hull = _lower_hull(pts)
    i_lo, i_hi = pts[0][0], pts[-1][0]

    def hull_value(x):
        for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * Fraction(x - x0, x1 - x0)
        return None

    for i, floor in indeterminate:
        if i < i_lo or i > i_hi:
            raise AmbiguousValuation(
                f"coefficient {i} is zero only at precision and would extend "
                "the polygon")
        if Fraction(floor) < hull_value(i):
            raise AmbiguousValuation(
                f"coefficient {i} has undetermined valuation below the hull")

    slopes = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        s = -Fraction(y1 - y0, x1 - x0)
        slopes.append((s, x1 - x0))
    # merge equal slopes
    merged = {}
    for s, m in slopes:
        merged[s] = merged.get(s, 0) + m
    return NewtonPolygon(sorted(merged.items()), i_lo)


def _lower_hull(pts):
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # drop the middle point when it lies on or above the chord
            if (y1 - y0) * (pt[0] - x0) >= (pt[1] - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull
