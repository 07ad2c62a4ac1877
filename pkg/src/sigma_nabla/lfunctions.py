"""Compatible systems of local Frobenius factors, truncated L-functions,
the trace-formula consistency check, pole orders and purity reports.

Everything here is exact rational arithmetic: L-function identities are
exact claims, so no p-adic truncation is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .padic import IntPolynomial
from .points import PurityVerdict, purity_check


@dataclass(frozen=True)
class LSeries:
    """Truncated power series with exact rational coefficients."""

    coeffs: tuple
    truncation: int

    def __post_init__(self):
        if len(self.coeffs) != self.truncation + 1:
            raise ValueError("coefficient count must be truncation + 1")
        if self.coeffs[0] != 1:
            raise ValueError("an L-series starts with constant term 1")

    @classmethod
    def one(cls, truncation):
        return cls(tuple([Fraction(1)] + [Fraction(0)] * truncation),
                   truncation)

    def mul(self, other: "LSeries") -> "LSeries":
        t = min(self.truncation, other.truncation)
        out = [Fraction(0)] * (t + 1)
        for i, a in enumerate(self.coeffs[:t + 1]):
            if a:
                for j, b in enumerate(other.coeffs[:t + 1 - i]):
                    out[i + j] += a * b
        return LSeries(tuple(out), t)

    def __eq__(self, other):
        return (isinstance(other, LSeries)
                and self.truncation == other.truncation
                and self.coeffs == other.coeffs)


def poly_series(poly: IntPolynomial, truncation) -> LSeries:
    coeffs = [Fraction(c) for c in poly.coeffs[:truncation + 1]]
    coeffs += [Fraction(0)] * (truncation + 1 - len(coeffs))
    return LSeries(tuple(coeffs), truncation)


def inverse_series(poly: IntPolynomial, truncation) -> LSeries:
    """1 / poly as a power series, constant term of poly must be 1."""
    if poly.coeffs[0] != 1:
        raise ValueError("inverse series needs constant term 1")
    out = [Fraction(1)] + [Fraction(0)] * truncation
    for k in range(1, truncation + 1):
        acc = Fraction(0)
        for j in range(1, min(k, poly.degree) + 1):
            acc += poly.coeffs[j] * out[k - j]
        out[k] = -acc
    return LSeries(tuple(out), truncation)


# ---------------------------------------------------------------------------
# Tables of local factors.
# ---------------------------------------------------------------------------


@dataclass
class CharPolyTable:
    """Per-place, per-point characteristic polynomials of Frobenius.

    ``polys[(place, point_id)]`` is det(1 - t^deg * Frob_x), constant term
    one, degree rank * deg in t.
    """

    q: int
    places: list
    points: list                  # list of (point_id, degree)
    polys: dict
    rank: Optional[int] = None

    def __post_init__(self):
        degs = dict(self.points)
        ranks = set()
        for (place, pid), poly in self.polys.items():
            if place not in self.places:
                raise ValueError(f"unknown place {place!r}")
            if pid not in degs:
                raise ValueError(f"unknown point {pid!r}")
            if poly.coeffs[0] != 1:
                raise ValueError(
                    f"local factor at ({place}, {pid}) lacks constant term 1")
            d = degs[pid]
            if poly.degree % d:
                raise ValueError(
                    f"degree of factor at ({place}, {pid}) is not a "
                    f"multiple of deg(x) = {d}")
            ranks.add(poly.degree // d)
        if self.rank is None and ranks:
            if len(ranks) != 1:
                raise ValueError(f"inconsistent ranks {sorted(ranks)}")
            self.rank = ranks.pop()

    def factor(self, place, pid) -> IntPolynomial:
        return self.polys[(place, pid)]


@dataclass(frozen=True)
class CompatibilityVerdict:
    compatible: bool
    point: Optional[object] = None
    place_a: Optional[str] = None
    place_b: Optional[str] = None

    def __bool__(self):
        return self.compatible


def check_compatible(table: CharPolyTable) -> CompatibilityVerdict:
    """Local factors must agree exactly across places at every point."""
    for pid, _deg in table.points:
        ref_place = None
        ref = None
        for place in table.places:
            poly = table.polys.get((place, pid))
            if poly is None:
                continue
            if ref is None:
                ref_place, ref = place, poly
            elif poly != ref:
                return CompatibilityVerdict(False, pid, ref_place, place)
    return CompatibilityVerdict(True)


def lfunction_truncated(table: CharPolyTable, place, truncation) -> LSeries:
    """Product of inverse local factors, expanded to O(t^(T+1)).

    The caller asserts the table holds every point of degree <= T for the
    chosen place; the product simply multiplies what it is given.
    """
    acc = LSeries.one(truncation)
    keys = sorted((pid for pid, _ in table.points), key=str)
    for pid in keys:
        poly = table.polys.get((place, pid))
        if poly is None:
            continue
        acc = acc.mul(inverse_series(poly, truncation))
    return acc


@dataclass(frozen=True)
class TraceFormulaVerdict:
    consistent: bool
    truncation: int
    first_bad_degree: Optional[int] = None

    def __bool__(self):
        return self.consistent


def trace_formula_check(table: CharPolyTable, place, cohomology,
                        truncation) -> TraceFormulaVerdict:
    """Euler product against P1 / (P0 P2) as truncated power series."""
    p0, p1, p2 = cohomology
    lhs = lfunction_truncated(table, place, truncation)
    rhs = poly_series(p1, truncation)
    rhs = rhs.mul(inverse_series(p0, truncation))
    rhs = rhs.mul(inverse_series(p2, truncation))
    for k in range(truncation + 1):
        if lhs.coeffs[k] != rhs.coeffs[k]:
            return TraceFormulaVerdict(False, truncation, k)
    return TraceFormulaVerdict(True, truncation)


def pole_order_at(poly: IntPolynomial, q, d) -> int:
    """Multiplicity of the root t = q^-d, by exact synthetic division."""
    at = Fraction(1, Fraction(q) ** d)
    order = 0
    current = poly
    while not current.is_zero and current(at) == 0:
        order += 1
        current = _deflate(current, Fraction(q) ** d)
    return order


def _deflate(poly: IntPolynomial, a):
    """Exact quotient by (1 - a t), assuming t = 1/a is a root."""
    out = []
    prev = Fraction(0)
    for k, c in enumerate(poly.coeffs):
        if k == 0:
            out.append(c)
            prev = c
        else:
            nxt = c + a * prev
            out.append(nxt)
            prev = nxt
    # the last accumulated value must be zero exactly
    if out[-1] != 0:
        raise ArithmeticError("deflation of a non-root")
    return IntPolynomial(out[:-1])


@dataclass
class PurityReport:
    weight: int
    entries: dict               # (place, point_id) -> PurityVerdict
    all_pure: bool


def check_pure_system(table: CharPolyTable, w, tol=1e-6) -> PurityReport:
    """Apply the purity check to every stored local factor."""
    degs = dict(table.points)
    entries = {}
    ok = True
    for key in sorted(table.polys, key=lambda k: (k[0], str(k[1]))):
        place, pid = key
        verdict = purity_check(table.polys[key], table.q, degs[pid], w, tol)
        entries[key] = verdict
        ok = ok and verdict.pure
    return PurityReport(w, entries, ok)
