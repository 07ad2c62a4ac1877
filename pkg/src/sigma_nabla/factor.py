"""Constructive matrix factorizations over the series rings, and the
descent / gluing operations built on them.

Two factorizations are provided:

* ``matfact_gamma``: X = Y * Z with Y invertible over Gamma (det of
  p-valuation 0) and Z constant, invertible over O[1/p].  Works on the
  class of X that actually admit such a factorization; the algorithm
  normalises the p-content of each column and then strips constant kernels
  of the mod-p reduction, so the determinant valuation strictly drops
  until it reaches zero.  Inputs outside the class are detected (no
  constant mod-p kernel despite positive determinant valuation) and
  rejected.

* ``matfact_robba``: X = Y * Z with Y a product of a diagonal of monomials
  and (I + strictly-negative-exponent corrections), Z free of negative
  exponents.  Implemented as a successive approximation that contracts in
  the p-adic valuation of the minus part; it requires the documented
  regime (minus part of D^-1 X - I of valuation >= 1) and raises
  NotConverged otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    MembershipViolated,
    NotConverged,
    PrecisionExhausted,
    SingularInput,
)
from .linalg import (
    smat_agree,
    smat_identity,
    smat_inv,
    smat_mul,
    smat_shape,
    smat_sub,
)
from .modules import (
    SigmaNablaModule,
    basis_transform,
    check_compat,
    check_fv,
    module_at_floor,
)
from .padic import INF, PadicNumber
from .series import (
    E_DAGGER,
    E_PLUS,
    GAMMA_PLUS,
    R_PLUS,
    LaurentSeries,
    RingLabel,
    membership,
    require_membership,
)


@dataclass
class GammaFactorization:
    y: list                    # series matrix, invertible over Gamma
    z: list                    # constant series matrix over O[1/p]
    det_valuation: int
    rounds: int
    product_verdict: object

    @property
    def z_constants(self):
        """Z as a matrix of PadicNumbers."""
        return [[s.coefficient(0) for s in row] for row in self.z]


def _col_min_valuation(a, j):
    vals = []
    exhausted = False
    for row in a:
        s = row[j]
        for c in s.coeffs.values():
            if c.unit is not None:
                vals.append(c.val)
        if s.base_floor is not None and s.base_floor <= 0:
            exhausted = True
    if not vals:
        if exhausted:
            raise PrecisionExhausted(
                f"column {j} is indistinguishable from zero")
        raise SingularInput(f"column {j} is exactly zero")
    return min(vals)


def _det_valuation(a, max_width):
    from .linalg import smat_det
    det = smat_det(a, max_width)
    vals = [c.val for c in det.coeffs.values() if c.unit is not None]
    if not vals:
        if det.abs_floor() is not INF:
            raise PrecisionExhausted(
                "determinant is indistinguishable from zero")
        raise SingularInput("determinant is exactly zero")
    return min(vals)


def _mod_p_kernel(a, p):
    """A constant vector c over F_p with A c = 0 mod p, or None.

    Every valuation-zero coefficient of every entry contributes one linear
    condition per (row, exponent) pair.
    """
    n = len(a[0])
    rows = {}
    for i, row in enumerate(a):
        for j, s in enumerate(row):
            for e, c in s.coeffs.items():
                if c.unit is not None and c.val == 0:
                    rows.setdefault((i, e), [0] * n)[j] = c.unit % p
    system = list(rows.values())
    # Gauss-Jordan over F_p so each pivot row touches only its own column
    pivots = {}
    for eq in system:
        eq = eq[:]
        for col, req in pivots.items():
            if eq[col] % p:
                f = eq[col] % p
                eq = [(x - f * y) % p for x, y in zip(eq, req)]
        lead = next((c for c in range(n) if eq[c] % p), None)
        if lead is None:
            continue
        inv = pow(eq[lead], -1, p)
        eq = [(x * inv) % p for x in eq]
        for col, req in pivots.items():
            if req[lead] % p:
                f = req[lead] % p
                pivots[col] = [(x - f * y) % p for x, y in zip(req, eq)]
        pivots[lead] = eq
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    j = free[0]
    vec = [0] * n
    vec[j] = 1
    for col, eq in pivots.items():
        vec[col] = (-eq[j]) % p
    return vec


def matfact_gamma(x, max_width=None, verify=True) -> GammaFactorization:
    """Factor X over E as Y * Z, Y invertible over Gamma, Z constant.

    Column operations (all constant, hence absorbed into Z) normalise the
    p-content and strip constant mod-p kernels until det(Y) has valuation
    zero.  Raises SingularInput when X admits no such factorization.
    """
    n, m = smat_shape(x)
    if n != m:
        raise ValueError("matfact_gamma expects a square matrix")
    p = x[0][0].p
    nrel = x[0][0].nrel
    a = [row[:] for row in x]
    # z_inv accumulates the constant column operations: A = X * z_inv
    z_inv = [[Fraction(i == j) for j in range(n)] for i in range(n)]

    def scale_col(j, mval):
        if mval == 0:
            return
        for i in range(n):
            a[i][j] = a[i][j].shift_val(-mval)
        for i in range(n):
            z_inv[i][j] = z_inv[i][j] / Fraction(p) ** mval

    def combine_col(j, vec):
        # col_j <- sum_i vec[i] * col_i  (vec[j] == 1)
        for i in range(n):
            acc = None
            for t in range(n):
                if vec[t] == 0:
                    continue
                term = a[i][t] if vec[t] == 1 else a[i][t].scale(
                    PadicNumber.from_int(p, nrel, vec[t]))
                acc = term if acc is None else acc + term
            a[i][j] = acc
        for i in range(n):
            z_inv[i][j] = sum((Fraction(vec[t]) * z_inv[i][t]
                               for t in range(n)), Fraction(0))

    rounds = 0
    for j in range(n):
        scale_col(j, _col_min_valuation(a, j))
    dv = _det_valuation(a, max_width)
    while dv > 0:
        rounds += 1
        if rounds > 16 * (dv + n + 4):
            raise SingularInput("factorization did not terminate")
        vec = _mod_p_kernel(a, p)
        if vec is None:
            raise SingularInput(
                "no constant-Z factorization exists at working precision: "
                "the mod-p reduction has no constant kernel")
        j = max(i for i, v in enumerate(vec) if v)
        inv = pow(vec[j], -1, p)
        vec = [(v * inv) % p for v in vec]
        combine_col(j, vec)
        v = _col_min_valuation(a, j)
        if v <= 0:
            raise PrecisionExhausted(
                "kernel column failed to gain a digit; entries are too "
                "imprecise to continue")
        scale_col(j, v)
        dv = _det_valuation(a, max_width)

    # Z = (z_inv)^-1 as exact rational constants
    z_const = _fraction_inverse(z_inv)
    z = [[LaurentSeries.from_terms(p, nrel, [(0, c)] if c else [])
          for c in row] for row in z_const]
    verdict = None
    if verify:
        prod = smat_mul(a, z, max_width)
        verdict = smat_agree(prod, x)
        if not verdict.holds:
            raise SingularInput("internal error: product check failed")
    return GammaFactorization(a, z, 0, rounds, verdict)


def _fraction_inverse(mat):
    n = len(mat)
    work = [list(row) + [Fraction(i == j) for j in range(n)]
            for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != 0), None)
        if piv is None:
            raise SingularInput("constant accumulator is singular")
        work[col], work[piv] = work[piv], work[col]
        pv = work[col][col]
        work[col] = [v / pv for v in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [v - f * w for v, w in zip(work[r], work[col])]
    return [row[n:] for row in work]


# ---------------------------------------------------------------------------
# Robba-side factorization.
# ---------------------------------------------------------------------------


@dataclass
class RobbaFactorization:
    y: list
    z: list
    y_inv: list
    iterations: int
    y_label: RingLabel
    product_verdict: object


def _minus_part(s: LaurentSeries):
    return {e: c for e, c in s.coeffs.items() if e < 0}


def _mat_minus(a):
    return [[_minus_part(s) for s in row] for row in a]


def _minus_min_val(minus):
    vals = [c.val for row in minus for d in row for c in d.values()
            if c.unit is not None]
    return min(vals) if vals else None


def _dominant_monomial(s: LaurentSeries):
    best = None
    for e, c in s.coeffs.items():
        if c.unit is None:
            continue
        key = (c.val, e)
        if best is None or key < best[0]:
            best = (key, e, c)
    return best


def matfact_robba(x, max_width=None, max_iterations=None,
                  verify=True) -> RobbaFactorization:
    """Factor X = Y * Z, Y over E-dagger, Z over R-plus (restricted regime).

    Requires X = D (I + M) with D a diagonal of monomials and the minus
    part of M of valuation >= 1.  The iteration multiplies unit-plus-minus
    corrections onto Y until the minus part of Y^-1 X vanishes at working
    precision; stalling valuations raise NotConverged.
    """
    n, m = smat_shape(x)
    if n != m:
        raise ValueError("matfact_robba expects a square matrix")
    p = x[0][0].p
    nrel = x[0][0].nrel
    max_iterations = max_iterations or (4 * nrel + 16)

    # peel off the diagonal of dominant monomials
    d_fwd, d_inv = [], []
    for i in range(n):
        dom = _dominant_monomial(x[i][i])
        if dom is None:
            raise NotConverged(
                f"diagonal entry {i} is zero at precision; outside regime",
                iterations=0)
        _, e, c = dom
        d_fwd.append((e, c))
        d_inv.append((-e, PadicNumber.from_int(p, nrel, 1) / c))

    def apply_d_inv(mat):
        return [[mat[i][j].scale(d_inv[i][1]).shift_exp(d_inv[i][0])
                 for j in range(n)] for i in range(n)]

    w = apply_d_inv(x)          # I + M
    ident = smat_identity(n, p, nrel)
    minus = _mat_minus(smat_sub(w, ident))
    mu = _minus_min_val(minus)
    if mu is not None and mu < 1:
        raise NotConverged(
            "minus part has valuation < 1; input is outside the "
            "implemented contraction regime", iterations=0)

    # working window: wide enough that neglected tails sit beyond nrel
    depth = 0
    for row in minus:
        for d in row:
            if d:
                depth = max(depth, -min(d))
    wlo = min(s.window[0] for r in x for s in r) - (depth + 1) * (nrel + 1)
    whi = max(s.window[1] for r in x for s in r) + (depth + 1) * (nrel + 1)
    work = (wlo, whi)
    big_width = whi - wlo + 1 + 8

    def poly(mat):
        return [[LaurentSeries(p, nrel, s.coeffs, work, True, s.base_floor)
                 for s in row] for row in mat]

    w = poly(w)
    y_corr = smat_identity(n, p, nrel)
    y_corr_inv = smat_identity(n, p, nrel)
    iterations = 0
    stall = 0
    last_mu = 0
    while True:
        minus = _mat_minus(smat_sub(w, ident))
        mu = _minus_min_val(minus)
        if mu is None or mu >= nrel:
            break
        iterations += 1
        if iterations > max_iterations:
            raise NotConverged("iteration budget exhausted",
                               iterations=iterations)
        if mu <= last_mu:
            stall += 1
            if stall >= 3:
                raise NotConverged(
                    f"minus part stalled at valuation {mu}",
                    iterations=iterations)
        else:
            stall = 0
        last_mu = mu
        mk = [[LaurentSeries(p, nrel, d, work, True, None)
               for j, d in enumerate(row)] for i, row in enumerate(minus)]
        corr = smat_add_ident(mk, p, nrel)
        corr_inv = _neumann_inverse(mk, p, nrel, big_width, work)
        y_corr = poly(smat_mul(y_corr, corr, big_width, work))
        y_corr_inv = poly(smat_mul(corr_inv, y_corr_inv, big_width, work))
        w = poly(smat_mul(corr_inv, w, big_width, work))

    # Y = D * (I + corrections), entries of E-dagger type
    y = [[y_corr[i][j].scale(d_fwd[i][1]).shift_exp(d_fwd[i][0])
          for j in range(n)] for i in range(n)]
    y_inv = [[y_corr_inv[i][j].scale(d_inv[j][1]).shift_exp(d_inv[j][0])
              for j in range(n)] for i in range(n)]
    z = w

    def honest(mat):
        # results live at the uniform working floor p^nrel: coefficients the
        # iteration could not distinguish from zero are absorbed into it
        out = []
        for row in mat:
            new_row = []
            for s in row:
                s = LaurentSeries(
                    p, nrel, s.coeffs,
                    (max(s.window[0], wlo), min(s.window[1], whi)),
                    False, s.base_floor)
                new_row.append(s.widen_floor(nrel))
            out.append(new_row)
        return out

    y, z, y_inv = honest(y), honest(z), honest(y_inv)

    verdict = None
    if verify:
        prod = smat_mul(y, z, big_width)
        verdict = smat_agree(prod, x)
        if not verdict.holds:
            raise NotConverged("product verification failed",
                               iterations=iterations)

    lam, cc = _dagger_certificate(y)
    y_label = RingLabel(E_DAGGER, lam, cc)
    for i, row in enumerate(y):
        for j, s in enumerate(row):
            require_membership(s, y_label, f"Y[{i}][{j}]")
    rp = RingLabel(R_PLUS)
    for i, row in enumerate(z):
        for j, s in enumerate(row):
            require_membership(s, rp, f"Z[{i}][{j}]")

    return RobbaFactorization(y, z, y_inv, iterations, y_label, verdict)


def smat_add_ident(a, p, nrel):
    out = [row[:] for row in a]
    one = LaurentSeries.one(p, nrel)
    for i in range(len(a)):
        out[i][i] = out[i][i] + one
    return out


def _neumann_inverse(mk, p, nrel, max_width, out_window=None):
    """(I + mk)^-1 for mk with positive valuation: sum of (-mk)^j."""
    n = len(mk)
    acc = smat_identity(n, p, nrel)
    term = smat_identity(n, p, nrel)
    neg = [[-s for s in row] for row in mk]
    for _ in range(nrel + 1):
        term = smat_mul(term, neg, max_width, out_window)
        if out_window is not None:
            term = [[LaurentSeries(p, nrel, s.coeffs, out_window, True,
                                   s.base_floor) for s in row]
                    for row in term]
        vals = [c.val for row in term for s in row
                for c in s.coeffs.values() if c.unit is not None]
        acc = [[acc[i][j] + term[i][j] for j in range(n)] for i in range(n)]
        if not vals or min(vals) >= nrel:
            break
    return acc


def _dagger_certificate(y):
    """A certificate (lam, c) the stored minus terms actually satisfy:
    v_p(x_e) >= lam * (-e) - c for every stored e < 0."""
    lam = Fraction(1, 2)
    c = Fraction(0)
    for row in y:
        for s in row:
            for e, coef in s.coeffs.items():
                if e < 0 and coef.unit is not None:
                    need = lam * (-e) - Fraction(coef.val)
                    if need > c:
                        c = need
    return lam, c


# ---------------------------------------------------------------------------
# Descent to E-plus and gluing over Gamma-plus.
# ---------------------------------------------------------------------------


@dataclass
class DescentResult:
    module: SigmaNablaModule
    factorization: RobbaFactorization
    compat: object


def descend_to_eplus(mod: SigmaNablaModule, x, max_width=None,
                     check_hypothesis=True) -> DescentResult:
    """Rewrite an E-dagger module in a basis where it lives over E-plus.

    ``x`` is the matrix over R carrying the module into R-plus; the
    hypothesis (conjugated matrices consistent with R-plus) is checked,
    then x = Y Z is factored and the Y-basis is taken.
    """
    rp = RingLabel(R_PLUS)
    nrel = mod.nrel
    if check_hypothesis:
        x_inv = smat_inv(x, None, max_width)
        conj = module_at_floor(
            basis_transform(mod, x, x_inv, None, max_width), nrel)
        for name, s in conj.entries():
            require_membership(s, rp, f"conjugated {name}")
    fact = matfact_robba(x, max_width)
    out = module_at_floor(
        basis_transform(mod, fact.y, fact.y_inv, None, max_width), nrel)
    target = RingLabel(E_PLUS)
    for name, s in out.entries():
        require_membership(s, target, name)
    out = SigmaNablaModule(target, out.q, out.phi, out.nmat, out.bmat)
    compat = check_compat(out, max_width)
    return DescentResult(out, fact, compat)


@dataclass
class GlueResult:
    module: SigmaNablaModule
    factorization: GammaFactorization
    compat: object
    fv: object


def glue_dieudonne(m1: SigmaNablaModule, m2: Optional[SigmaNablaModule], x,
                   max_width=None, check_hypothesis=True) -> GlueResult:
    """Glue a Dieudonne module over Gamma with one over E-plus into one
    over Gamma-plus, via the constant-Z factorization of x.

    ``m2``, when given, pins down the E-plus side: the x-conjugates of
    m1's matrices must agree with m2's at precision.
    """
    if m1.bmat is None:
        raise ValueError("m1 must carry a Verschiebung matrix")
    ep = RingLabel(E_PLUS)
    nrel = m1.nrel
    if check_hypothesis:
        x_inv = smat_inv(x, None, max_width)
        conj = module_at_floor(
            basis_transform(m1, x, x_inv, None, max_width), nrel)
        for name, s in conj.entries():
            require_membership(s, ep, f"conjugated {name}")
        if m2 is not None:
            for (pa, pb) in (("phi", "phi"), ("nmat", "nmat"),
                             ("bmat", "bmat")):
                va = getattr(conj, pa)
                vb = getattr(m2, pb)
                if vb is None:
                    continue
                verdict = smat_agree(va, vb)
                if not verdict.holds:
                    raise MembershipViolated(
                        f"x does not carry m1 into m2: {pa} disagrees at "
                        f"{verdict.witness}")
    fact = matfact_gamma(x, max_width)
    y_inv = smat_inv(fact.y, None, max_width)
    out = module_at_floor(
        basis_transform(m1, fact.y, y_inv, None, max_width), nrel)
    target = RingLabel(GAMMA_PLUS)
    for name, s in out.entries():
        require_membership(s, target, name)
    out = SigmaNablaModule(target, out.q, out.phi, out.nmat, out.bmat)
    compat = check_compat(out, max_width)
    fv = check_fv(out, max_width)
    return GlueResult(out, fact, compat, fv)
