"""Point-level F-isocrystal algebra: twisted Frobenius iterates, projector
averaging, block-companion matrices, Newton slopes, purity and the
characteristic-polynomial coefficient map.

Matrices here are plain scalar matrices; entries may be Fractions (exact
paths), PadicNumbers, or UnramifiedScalars (semilinear case, where sigma
acts on entries through the field's Frobenius).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    CocycleViolated,
    PreconditionFailed,
    SingularFrobenius,
)
from .linalg import mat_agree, mat_identity, mat_inv, mat_map, mat_mul, ops_for
from .padic import (
    IntPolynomial,
    PadicNumber,
    UnramifiedScalar,
    complex_root_magnitudes,
    newton_polygon,
)


def _sigma_entrywise(mat, power=1):
    """Entrywise Frobenius twist; trivial unless entries are unramified."""
    if power == 0:
        return mat
    sample = mat[0][0]
    if isinstance(sample, UnramifiedScalar):
        return mat_map(mat, lambda x: x.frobenius(power))
    return mat


def frob_iterate(mat, n):
    """The n-th twisted iterate F * sigma(F) * ... * sigma^(n-1)(F).

    n = 0 gives the identity; negative n the inverse of the |n|-th
    iterate.  For scalars fixed by sigma this is the plain matrix power.
    """
    ops = ops_for(mat[0][0])
    size = len(mat)
    if n == 0:
        return mat_identity(size, ops)
    if n < 0:
        pos = frob_iterate(mat, -n)
        return mat_inv(pos, ops, error=SingularFrobenius)
    acc = mat
    for k in range(1, n):
        acc = mat_mul(acc, _sigma_entrywise(mat, k))
    return acc


# ---------------------------------------------------------------------------
# Projector averaging.
# ---------------------------------------------------------------------------


def _check_projector(pi, ops):
    if not mat_agree(mat_mul(pi, pi), pi, ops):
        raise PreconditionFailed(
            "pi_not_idempotent", "pi * pi differs from pi at precision")


def average_projector(pi, frob, n):
    """(1/n) sum of F^[i] sigma^i(pi) F^[-i] for 0 <= i < n.

    Checked hypotheses, each named on failure:
      * pi is idempotent;
      * pi commutes with the n-th iterate (it is an endomorphism of the
        n-th power object);
      * the image of pi is Frobenius-stable for each 0 <= i < n.
    The output is idempotent, has the same image as pi, and is fixed by
    conjugation with the Frobenius.
    """
    ops = ops_for(pi[0][0])
    size = len(pi)
    _check_projector(pi, ops)
    fi = [frob_iterate(frob, i) for i in range(n + 1)]
    fi_inv = [frob_iterate(frob, -i) for i in range(n + 1)]
    twisted = [_sigma_entrywise(pi, i) for i in range(n + 1)]
    conj_n = mat_mul(mat_mul(fi[n], twisted[n]), fi_inv[n])
    if not mat_agree(conj_n, pi, ops):
        raise PreconditionFailed(
            "pi_not_endomorphism_of_iterate",
            "pi does not commute with the n-th Frobenius iterate")
    terms = []
    for i in range(n):
        conj = mat_mul(mat_mul(fi[i], twisted[i]), fi_inv[i])
        # image stability: pi must fix the image of the conjugate
        if not mat_agree(mat_mul(pi, conj), conj, ops):
            raise PreconditionFailed(
                "image_not_stable",
                f"F^[{i}] does not carry the image of pi into itself")
        terms.append(conj)
    inv_n = ops.inv(ops.from_int(n))
    acc = terms[0]
    for t in terms[1:]:
        acc = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(acc, t)]
    return [[x * inv_n for x in row] for row in acc]


def average_projector_group(pi, cocycle, group_table, actions=None):
    """Group-descent averaging: (1/|G|) sum of iota_g g*(pi) iota_g^-1.

    ``cocycle`` is a list of (label, matrix); ``group_table`` maps pairs of
    labels to their product; ``actions``, when given, maps labels to the
    entrywise Galois action.  The cocycle law iota_h h*(iota_g) = iota_hg
    is checked for every pair.
    """
    ops = ops_for(pi[0][0])
    labels = [g for g, _ in cocycle]
    mats = dict(cocycle)
    act = actions or {}

    def apply_action(g, mat):
        fn = act.get(g)
        return mat_map(mat, fn) if fn else mat

    for h in labels:
        for g in labels:
            lhs = mat_mul(mats[h], apply_action(h, mats[g]))
            hg = group_table[(h, g)]
            if not mat_agree(lhs, mats[hg], ops):
                raise CocycleViolated(g, h)
    _check_projector(pi, ops)
    inv = {g: mat_inv(mats[g], ops) for g in labels}
    for g in labels:
        conj = mat_mul(mat_mul(mats[g], apply_action(g, pi)), inv[g])
        if not mat_agree(mat_mul(pi, conj), conj, ops):
            raise PreconditionFailed(
                "image_not_stable",
                f"iota_{g} does not preserve the image of pi")
    acc = None
    for g in labels:
        conj = mat_mul(mat_mul(mats[g], apply_action(g, pi)), inv[g])
        acc = conj if acc is None else \
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(acc, conj)]
    inv_n = ops.inv(ops.from_int(len(labels)))
    return [[x * inv_n for x in row] for row in acc]


# ---------------------------------------------------------------------------
# Block companion matrices.
# ---------------------------------------------------------------------------


def block_companion(f_g, n):
    """The n*r block matrix with identity blocks on the superdiagonal and
    f_g in the lower-left corner; its n-th twisted iterate is block
    diagonal with sigma-twists of f_g on the diagonal."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ops = ops_for(f_g[0][0])
    r = len(f_g)
    size = n * r
    out = [[ops.zero() for _ in range(size)] for _ in range(size)]
    for blk in range(n - 1):
        for t in range(r):
            out[blk * r + t][(blk + 1) * r + t] = ops.one()
    for i in range(r):
        for j in range(r):
            out[(n - 1) * r + i][j] = f_g[i][j]
    return out


# ---------------------------------------------------------------------------
# Slopes, purity, characteristic polynomial.
# ---------------------------------------------------------------------------


def char_coeffs(mat):
    """Coefficients of det(T*I - F), leading first: (1, c_{n-1}, ..., c_0).

    Division-free expansion over the entry ring; intended for the small
    ranks this library works with.
    """
    n = len(mat)
    if n > 8:
        raise ValueError("char_coeffs is limited to rank <= 8")
    ops = ops_for(mat[0][0])
    zero, one = ops.zero(), ops.one()
    # polynomial in T, ascending coefficients, length n+1
    total = [zero] * (n + 1)
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        # product of (T*delta_{i,perm(i)} - ... ) entries of (T I - F)
        poly = [one]
        for i in range(n):
            entry_const = zero - mat[i][perm[i]]
            if perm[i] == i:
                # (T + entry_const)
                poly = _poly_mul_linear(poly, entry_const, one, zero)
            else:
                poly = [c * entry_const for c in poly]
        if sign < 0:
            poly = [zero - c for c in poly]
        for k, c in enumerate(poly):
            total[k] = total[k] + c
    return list(reversed(total))


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _poly_mul_linear(poly, const, one, zero):
    # poly * (T + const)
    out = [zero] * (len(poly) + 1)
    for k, c in enumerate(poly):
        out[k + 1] = out[k + 1] + c
        out[k] = out[k] + c * const
    return out


def newton_slopes_frob(mat):
    """Newton slopes of det(T*I - F): ascending coefficient order is what
    newton_polygon expects, so the list is reversed."""
    coeffs = char_coeffs(mat)
    sample = mat[0][0]
    if isinstance(sample, PadicNumber):
        asc = list(reversed(coeffs))
    else:
        raise TypeError("newton_slopes_frob expects PadicNumber entries")
    return newton_polygon(asc)


def is_unit_root(mat):
    poly = newton_slopes_frob(mat)
    return poly.offset == 0 and all(s == 0 for s, _ in poly.slopes)


@dataclass(frozen=True)
class PurityVerdict:
    pure: bool
    expected: float
    magnitudes: tuple
    witness: Optional[float] = None

    def __bool__(self):
        return self.pure


def purity_check(local_poly: IntPolynomial, q, deg, w,
                 tol=1e-6) -> PurityVerdict:
    """All reciprocal roots of det(1 - t^deg Frob) of size q^(w*deg/2)?

    The polynomial must be supported on powers of t^deg (it is a
    polynomial in t^deg); its reciprocal roots in that variable are the
    Frobenius eigenvalues, compared against q^(w*deg/2) within ``tol``
    relative error.
    """
    if local_poly.coeffs[0] != 1:
        raise ValueError("local factor must have constant term 1")
    compressed = []
    for i, c in enumerate(local_poly.coeffs):
        if i % deg == 0:
            compressed.append(c)
        elif c != 0:
            raise ValueError(
                f"coefficient of t^{i} nonzero; polynomial is not in t^{deg}")
    poly = IntPolynomial(compressed)
    mags = complex_root_magnitudes(poly)
    expected = float(q) ** (w * deg / 2.0)
    offenders = [m for m in mags
                 if abs(m - expected) > tol * max(expected, 1.0)]
    if offenders:
        worst = max(offenders, key=lambda m: abs(m - expected))
        return PurityVerdict(False, expected, tuple(mags), worst)
    return PurityVerdict(True, expected, tuple(mags))


@dataclass
class PointFrobenius:
    """Frobenius of a pulled-back isocrystal at a closed point."""

    q: int
    deg: int
    matrix: list

    def local_polynomial(self) -> IntPolynomial:
        """det(1 - t^deg * F) as a polynomial in t with constant term 1.

        Entries must be exact rationals for the L-function pipeline.
        """
        coeffs = char_coeffs(self.matrix)       # leading first
        if not all(isinstance(c, (int, Fraction)) for c in coeffs):
            raise TypeError("local polynomials need exact rational entries")
        # det(1 - sF) has s^k coefficient equal to the T^(n-k) coefficient
        expanded = []
        for k, c in enumerate(coeffs):
            expanded.extend([c] + [Fraction(0)] * (self.deg - 1))
        return IntPolynomial(expanded[:len(coeffs) * self.deg -
                                      (self.deg - 1)])
