"""Small matrix helpers over Laurent series and over plain scalars.

Matrices are lists of lists (row major).  The series helpers thread the
window cap through products; the scalar helpers are generic over Fraction,
PadicNumber and UnramifiedScalar entries via a tiny ops adapter.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SingularInput
from .padic import INF, PadicNumber, UnramifiedScalar
from .series import AgreementVerdict, LaurentSeries, series_agree


# ---------------------------------------------------------------------------
# Series matrices.
# ---------------------------------------------------------------------------


def smat_shape(a):
    return len(a), len(a[0]) if a else 0


def smat_identity(n, p, nrel, window=None, max_width=None):
    one = LaurentSeries.one(p, nrel, window, max_width)
    zero = LaurentSeries.zero(p, nrel, window, max_width)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def smat_zero(n, m, p, nrel, window=None, max_width=None):
    zero = LaurentSeries.zero(p, nrel, window, max_width)
    return [[zero for _ in range(m)] for _ in range(n)]


def smat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def smat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def smat_neg(a):
    return [[-x for x in row] for row in a]


def smat_mul(a, b, max_width=None, out_window=None):
    n, k = smat_shape(a)
    k2, m = smat_shape(b)
    if k != k2:
        raise ValueError("shape mismatch")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                term = a[i][t].mul(b[t][j], max_width, out_window)
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def smat_scale(a, c: PadicNumber):
    return [[x.scale(c) for x in row] for row in a]


def smat_map(a, fn):
    return [[fn(x) for x in row] for row in a]


def smat_sigma(a, power, max_width=None):
    return smat_map(a, lambda s: s.frobenius(power, max_width))


def smat_deriv(a):
    return smat_map(a, lambda s: s.derivative())


def smat_transpose(a):
    return [list(col) for col in zip(*a)]


def smat_agree(a, b) -> AgreementVerdict:
    """Entrywise agreement at precision; reports the worst finding."""
    floor = INF
    window = None
    for ra, rb in zip(a, b):
        for x, y in zip(ra, rb):
            v = series_agree(x, y)
            if not v.holds:
                return v
            if v.floor is not None and v.floor < floor:
                floor = v.floor
            window = v.window if window is None else window
    return AgreementVerdict(True, None if floor is INF else int(floor),
                            window or (0, 0))


def smat_first_disagreement(a, b):
    """Position and verdict of the first failing entry, or None."""
    for i, (ra, rb) in enumerate(zip(a, b)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            v = series_agree(x, y)
            if not v.holds:
                return (i, j), v
    return None


def smat_det(a, max_width=None):
    """Determinant by expansion; fine for the small ranks used here."""
    n, m = smat_shape(a)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return a[0][0]
    det = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j].mul(smat_det(minor, max_width), max_width)
        if j % 2:
            term = -term
        det = term if det is None else det + term
    return det


def smat_inv(a, target_window=None, max_width=None):
    """Inverse via the adjugate; the determinant must be a unit of E at
    working precision."""
    n, m = smat_shape(a)
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    det = smat_det(a, max_width)
    det_inv = det.invert(target_window, max_width)
    if n == 1:
        return [[det_inv]]
    adj = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [r[:i] + r[i + 1:] for k, r in enumerate(a) if k != j]
            cof = smat_det(minor, max_width)
            if (i + j) % 2:
                cof = -cof
            row.append(cof.mul(det_inv, max_width))
        adj.append(row)
    return adj


# ---------------------------------------------------------------------------
# Scalar matrices (Fraction / PadicNumber / UnramifiedScalar).
# ---------------------------------------------------------------------------


class FractionOps:
    name = "fraction"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def is_zero(self, x):
        return x == 0

    def agrees(self, x, y):
        return x == y

    def inv(self, x):
        if x == 0:
            raise SingularInput("division by zero")
        return 1 / Fraction(x)

    def pivot_quality(self, x):
        # any nonzero entry works over an exact field
        return 0 if x != 0 else None


class PadicOps:
    name = "padic"

    def __init__(self, p, nrel):
        self.p = p
        self.nrel = nrel

    def zero(self):
        return PadicNumber.zero(self.p, self.nrel)

    def one(self):
        return PadicNumber.from_int(self.p, self.nrel, 1)

    def from_int(self, n):
        return PadicNumber.from_int(self.p, self.nrel, n)

    def is_zero(self, x):
        return x.is_zero_at_precision

    def agrees(self, x, y):
        return x.agrees(y)

    def inv(self, x):
        return self.one() / x

    def pivot_quality(self, x):
        return x.valuation if x.is_regular else None


class UnramOps:
    name = "unramified"

    def __init__(self, field):
        self.field = field

    def zero(self):
        return self.field.zero()

    def one(self):
        return self.field.one()

    def from_int(self, n):
        return self.field.from_int(n)

    def is_zero(self, x):
        return x.is_zero_at_precision

    def agrees(self, x, y):
        return x.agrees(y)

    def inv(self, x):
        return x.inverse()

    def pivot_quality(self, x):
        vals = [c.valuation for c in x.coords if c.is_regular]
        return min(vals) if vals else None


def ops_for(x):
    """Pick the ops adapter matching a sample element."""
    if isinstance(x, PadicNumber):
        return PadicOps(x.p, x.nrel)
    if isinstance(x, UnramifiedScalar):
        return UnramOps(x.field)
    return FractionOps()


def mat_identity(n, ops):
    return [[ops.one() if i == j else ops.zero() for j in range(n)]
            for i in range(n)]


def mat_mul(a, b, ops=None):
    n, k = len(a), len(a[0])
    m = len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[x * c for x in row] for row in a]


def mat_map(a, fn):
    return [[fn(x) for x in row] for row in a]


def mat_agree(a, b, ops):
    return all(ops.agrees(x, y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_inv(a, ops, error=SingularInput):
    """Gauss-Jordan inverse with best-valuation pivoting."""
    n = len(a)
    work = [list(row) + list(ident_row)
            for row, ident_row in zip(a, mat_identity(n, ops))]
    for col in range(n):
        best, best_q = None, None
        for r in range(col, n):
            q = ops.pivot_quality(work[r][col])
            if q is not None and (best_q is None or q < best_q):
                best, best_q = r, q
        if best is None:
            raise error("matrix is singular at working precision")
        work[col], work[best] = work[best], work[col]
        piv_inv = ops.inv(work[col][col])
        work[col] = [x * piv_inv for x in work[col]]
        for r in range(n):
            if r != col and not ops.is_zero(work[r][col]):
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def mat_det(a, ops):
    n = len(a)
    if n == 1:
        return a[0][0]
    det = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * mat_det(minor, ops)
        if j % 2:
            term = ops.zero() - term
        det = term if det is None else det + term
    return det
