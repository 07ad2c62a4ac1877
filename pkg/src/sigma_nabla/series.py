"""Truncated bidirectional Laurent series over Q_p with ring-membership
labels, the power-Frobenius endomorphism, the derivation d and its twist.

Representation
--------------
A series stores a sparse map ``exponent -> PadicNumber`` together with a
window ``[lo, hi]`` and two honesty markers:

* ``tail_free``: True when the series is a genuine Laurent polynomial
  (no support outside the stored terms); inverses and other truncated
  results carry ``tail_free=False`` and make no claim outside the window.
* ``base_floor``: absent exponents inside the window are zero modulo
  p^base_floor (``None`` means exactly zero).

Windows behave as regions of faithfulness: addition intersects them,
multiplication uses the convolution-correct window (the full Minkowski sum
for polynomial operands, shrunk by the partner's support radius when an
operand is a truncation).  A configurable maximum width caps blowup;
``WindowOverflow`` signals that genuinely populated exponents no longer
fit.

Ring membership for the eight series rings is refutation-only: a finite
truncation can contradict a growth condition but never prove it, so checks
return Consistent / Violated(witness) rather than yes/no.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import MembershipViolated, NotAUnit, WindowOverflow
from .padic import INF, PadicNumber, vp_int

DEFAULT_MAX_WIDTH = int(os.environ.get("SIGMA_NABLA_MAX_WINDOW", "256"))


# ---------------------------------------------------------------------------
# Ring labels and their inclusion lattice.
# ---------------------------------------------------------------------------

GAMMA_PLUS = "GammaPlus"
GAMMA = "Gamma"
GAMMA_DAGGER = "GammaDagger"
E_PLUS = "EPlus"
E = "E"
E_DAGGER = "EDagger"
R_PLUS = "RPlus"
R = "R"

RING_KINDS = (GAMMA_PLUS, GAMMA, GAMMA_DAGGER, E_PLUS, E, E_DAGGER, R_PLUS, R)

_DAGGER_KINDS = (GAMMA_DAGGER, E_DAGGER, R)

# covering relations of the inclusion lattice
_COVERS = (
    (GAMMA_PLUS, GAMMA_DAGGER),
    (GAMMA_PLUS, E_PLUS),
    (GAMMA_DAGGER, GAMMA),
    (GAMMA_DAGGER, E_DAGGER),
    (GAMMA, E),
    (E_PLUS, E_DAGGER),
    (E_PLUS, R_PLUS),
    (E_DAGGER, E),
    (E_DAGGER, R),
    (R_PLUS, R),
)


def _transitive_closure():
    reach = {k: {k} for k in RING_KINDS}
    changed = True
    while changed:
        changed = False
        for a, b in _COVERS:
            new = reach[b] - reach[a]
            if new:
                reach[a] |= new
                changed = True
    return reach

_REACH = _transitive_closure()


@dataclass(frozen=True)
class RingLabel:
    """One of the eight series rings; dagger/Robba labels carry a
    certificate (lam, c) asserting v_p(x_i) >= lam*(-i) - c for i < 0."""

    kind: str
    lam: Fraction = Fraction(1, 2)
    c: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in RING_KINDS:
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind in _DAGGER_KINDS and self.lam <= 0:
            raise ValueError("dagger/Robba certificates need lam > 0")

    def included_in(self, other: "RingLabel") -> bool:
        return other.kind in _REACH[self.kind]


@dataclass(frozen=True)
class MembershipResult:
    consistent: bool
    witness: Optional[int] = None   # offending exponent when violated

    def __bool__(self):
        return self.consistent


# ---------------------------------------------------------------------------
# The series type.
# ---------------------------------------------------------------------------


def _pad_window(hull, width):
    """Symmetric padding of a support hull to the requested width."""
    lo, hi = hull
    room = width - (hi - lo + 1)
    if room < 0:
        raise WindowOverflow(f"support {hull} exceeds window width {width}")
    pad_lo = room // 2
    return (lo - pad_lo, hi + (room - pad_lo))


class LaurentSeries:
    __slots__ = ("p", "nrel", "coeffs", "window", "tail_free", "base_floor")

    def __init__(self, p, nrel, coeffs, window, tail_free, base_floor):
        self.p = p
        self.nrel = nrel
        self.window = (int(window[0]), int(window[1]))
        if self.window[0] > self.window[1]:
            raise WindowOverflow("empty exponent window")
        cleaned = {}
        dropped = False
        for e, c in coeffs.items():
            if not self.window[0] <= e <= self.window[1]:
                dropped = True
                continue
            if c.is_exact_zero:
                continue
            if base_floor is not None:
                # uniform-floor contract: nothing is claimed at or beyond
                # p^base_floor anywhere in the window
                c = c.truncate_floor(base_floor)
                if c.unit is None:
                    continue
            cleaned[e] = c
        self.coeffs = cleaned
        # a polynomial truncated to a smaller window is no longer tail-free
        self.tail_free = tail_free and not dropped
        self.base_floor = base_floor

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_terms(cls, p, nrel, terms, window=None, max_width=None):
        """Laurent polynomial from (exponent, value) pairs; values may be
        ints, Fractions or PadicNumbers."""
        items = terms.items() if isinstance(terms, dict) else terms
        coeffs = {}
        for e, v in items:
            if not isinstance(v, PadicNumber):
                v = PadicNumber.from_rational(p, nrel, v)
            if not v.is_exact_zero:
                coeffs[int(e)] = v
        if window is None:
            width = max_width or DEFAULT_MAX_WIDTH
            if coeffs:
                hull = (min(coeffs), max(coeffs))
            else:
                hull = (0, 0)
            hull = (min(hull[0], 0), max(hull[1], 0))
            window = _pad_window(hull, width)
        return cls(p, nrel, coeffs, window, True, None)

    @classmethod
    def zero(cls, p, nrel, window=None, max_width=None):
        return cls.from_terms(p, nrel, [], window, max_width)

    @classmethod
    def one(cls, p, nrel, window=None, max_width=None):
        return cls.from_terms(p, nrel, [(0, 1)], window, max_width)

    @classmethod
    def monomial(cls, p, nrel, value, exponent, window=None, max_width=None):
        return cls.from_terms(p, nrel, [(exponent, value)], window, max_width)

    # -- structural helpers ----------------------------------------------

    @property
    def support_hull(self):
        if not self.coeffs:
            return None
        return (min(self.coeffs), max(self.coeffs))

    @property
    def is_zero_at_precision(self):
        return all(c.unit is None for c in self.coeffs.values())

    @property
    def is_exact_zero(self):
        return not self.coeffs and self.base_floor is None

    def min_valuation(self):
        """Smallest coefficient valuation floor; INF for the exact zero."""
        vals = [c.val for c in self.coeffs.values()]
        if self.base_floor is not None:
            vals.append(self.base_floor)
        return min(vals) if vals else INF

    def abs_floor(self):
        """Everything in the window is known modulo p^abs_floor."""
        floors = [c.abs_floor for c in self.coeffs.values()]
        if self.base_floor is not None:
            floors.append(self.base_floor)
        return min(floors) if floors else INF

    def coefficient(self, e):
        if e in self.coeffs:
            return self.coeffs[e]
        if self.base_floor is not None and self.window[0] <= e <= self.window[1]:
            return PadicNumber.inexact_zero(self.p, self.nrel, self.base_floor)
        return PadicNumber.zero(self.p, self.nrel)

    def items(self):
        return sorted(self.coeffs.items())

    def restrict(self, window):
        lo = max(window[0], self.window[0])
        hi = min(window[1], self.window[1])
        return LaurentSeries(self.p, self.nrel, dict(self.coeffs), (lo, hi),
                             self.tail_free, self.base_floor)

    def widen_floor(self, floor):
        """Weaken the series to be known only modulo p^floor."""
        if floor is None:
            return self
        new = {e: c.truncate_floor(floor) for e, c in self.coeffs.items()}
        bf = floor if self.base_floor is None else min(self.base_floor, floor)
        return LaurentSeries(self.p, self.nrel, new, self.window,
                             self.tail_free, bf)

    def __repr__(self):
        terms = ", ".join(f"u^{e}: {c!r}" for e, c in self.items())
        tail = "" if self.tail_free else ", truncated"
        fl = "" if self.base_floor is None else f", O(p^{self.base_floor})"
        return f"LaurentSeries[{self.window}]({terms}{fl}{tail})"

    # -- ring operations ---------------------------------------------------

    def _check(self, other):
        if self.p != other.p:
            raise ValueError("mixed primes")

    def __neg__(self):
        return LaurentSeries(self.p, self.nrel,
                             {e: -c for e, c in self.coeffs.items()},
                             self.window, self.tail_free, self.base_floor)

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check(other)
        nrel = min(self.nrel, other.nrel)
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        coeffs = {}
        for e in set(self.coeffs) | set(other.coeffs):
            # coefficient() materialises the partner's floor at absent spots
            coeffs[e] = self.coefficient(e) + other.coefficient(e)
        tail_free = self.tail_free and other.tail_free
        if tail_free and coeffs:
            lo = min(lo, min(coeffs))
            hi = max(hi, max(coeffs))
        floors = [f for f in (self.base_floor, other.base_floor)
                  if f is not None]
        bf = min(floors) if floors else None
        return LaurentSeries(self.p, nrel, coeffs, (lo, hi), tail_free, bf)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c: PadicNumber):
        """Multiply every coefficient by a scalar."""
        if c.is_exact_zero:
            return LaurentSeries(self.p, self.nrel, {}, self.window,
                                 self.tail_free, self.base_floor)
        coeffs = {e: x * c for e, x in self.coeffs.items()}
        bf = self.base_floor
        if bf is not None:
            bf += c.valuation if c.unit is not None else c.val
            bf = int(bf)
        return LaurentSeries(self.p, self.nrel, coeffs, self.window,
                             self.tail_free, bf)

    def shift_val(self, m: int):
        """Multiply by p^m (exact)."""
        return self.scale(PadicNumber.from_rational(
            self.p, self.nrel, Fraction(self.p) ** m))

    def shift_exp(self, k: int, max_width=None):
        """Multiply by u^k (exact)."""
        coeffs = {e + k: c for e, c in self.coeffs.items()}
        window = (self.window[0] + k, self.window[1] + k)
        return LaurentSeries(self.p, self.nrel, coeffs, window,
                             self.tail_free, self.base_floor)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check(other)
        return _mul(self, other, None)

    def mul(self, other, max_width=None, out_window=None):
        return _mul(self, other, max_width, out_window)

    # -- endomorphisms ------------------------------------------------------

    def frobenius(self, power=1, max_width=None):
        """Power-Frobenius: x u^e -> x u^(e*p), applied ``power`` times.

        Coefficients in Q_p are fixed by the canonical lift, so only the
        exponents move.
        """
        if power < 0:
            raise ValueError("frobenius power must be nonnegative")
        scale = self.p ** power
        if scale == 1 or not power:
            return self
        width = max_width or DEFAULT_MAX_WIDTH
        coeffs = {e * scale: c for e, c in self.coeffs.items()}
        window = (self.window[0] * scale, self.window[1] * scale)
        if coeffs:
            hull = (min(coeffs), max(coeffs))
            if hull[1] - hull[0] + 1 > width:
                raise WindowOverflow(
                    "frobenius image support exceeds the window cap")
            window = _clip_window(window, hull, width)
        else:
            window = _clip_window(window, (0, 0), width)
        return LaurentSeries(self.p, self.nrel, coeffs, window,
                             self.tail_free, self.base_floor)

    def derivative(self):
        """Termwise u-derivative: sum(j x_j u^(j-1))."""
        coeffs = {}
        for e, c in self.coeffs.items():
            if e == 0:
                continue
            j = PadicNumber.from_int(self.p, self.nrel, e)
            coeffs[e - 1] = c * j
        window = (self.window[0] - 1, self.window[1] - 1)
        return LaurentSeries(self.p, self.nrel, coeffs, window,
                             self.tail_free, self.base_floor)

    # -- inversion -----------------------------------------------------------

    def invert(self, target_window=None, max_width=None):
        """Multiplicative inverse on ``target_window`` at working precision.

        The reduction modulo p (after normalising by p^v and u^ord) must be
        invertible in k((t)); in a truncation this means some coefficient
        has valuation 0 after removing the p-power content.

        The computation runs on a window padded by (minus-depth)*(nrel+1)
        so that every neglected tail term has valuation beyond the working
        precision; the result is verified by multiplying back.
        """
        p, nrel = self.p, self.nrel
        regs = [(e, c) for e, c in self.coeffs.items() if c.unit is not None]
        if not regs:
            raise NotAUnit("series is zero at working precision")
        vmin = min(c.val for _, c in regs)
        a1 = self.shift_val(-vmin)
        ordl = min(e for e, c in a1.coeffs.items()
                   if c.unit is not None and c.val == 0)
        c0 = a1.coeffs[ordl]
        cinv = PadicNumber.from_int(p, nrel, 1) / c0
        a3 = a1.shift_exp(-ordl).scale(cinv)     # 1 + g, constant term 1

        if target_window is None:
            target_window = self.window
        hull = self.support_hull
        span = hull[1] - hull[0]
        # compute on a window padded by the support span so the multiply-back
        # verification has a nonempty provable window around the target
        wide_target = (target_window[0] - span, target_window[1] + span)
        tw = (wide_target[0] + ordl, wide_target[1] + ordl)

        g_plus = {e: c for e, c in a3.coeffs.items()
                  if e > 0 and c.unit is not None}
        g_minus = {e: c for e, c in a3.coeffs.items()
                   if e < 0 and c.unit is not None}
        const = a3.coefficient(0) - PadicNumber.from_int(p, nrel, 1)
        if const.unit is not None:
            raise NotAUnit("normalised constant term is not 1")

        depth = -min(g_minus) if g_minus else 0
        pad = depth * (nrel + 1)
        wlo = min(tw[0], 0) - pad
        whi = max(tw[1], 0) + pad
        big_width = whi - wlo + 1 + depth + 8

        # one-sided inverse of (1 + g_plus) by the convolution recursion
        h = {0: PadicNumber.from_int(p, nrel, 1)}
        gp = sorted(g_plus.items())
        for k in range(1, whi + 1):
            acc = PadicNumber.zero(p, nrel)
            for j, gj in gp:
                if j > k:
                    break
                prev = h.get(k - j)
                if prev is not None:
                    acc = acc + gj * prev
            if not acc.is_exact_zero:
                h[k] = -acc

        # internal polynomial surrogates; honesty is restored by the final
        # verification and the truncated window of the returned value
        hs = LaurentSeries(p, nrel, h, (wlo, whi), True, None)
        if g_minus:
            gm = LaurentSeries(p, nrel, g_minus,
                               (min(g_minus), max(g_minus)), True, None)
            total = hs
            term = hs
            for _ in range(nrel + 1):
                # polynomial surrogates on the working window: neglected
                # products carry valuation beyond nrel or sit outside tw
                term = _mul(gm, term, big_width, out_window=(wlo, whi))
                term = _mul(term, hs, big_width, out_window=(wlo, whi))
                term = LaurentSeries(p, nrel, term.coeffs, (wlo, whi),
                                     True, term.base_floor)
                term = -term
                if term.min_valuation() > nrel:
                    break
                total = total + term
            hfull = total
        else:
            hfull = hs
        hfull = hfull.restrict(tw)
        b = hfull.scale(cinv).shift_exp(-ordl).shift_val(-vmin)
        mv = b.min_valuation()
        floor = None if mv is INF else int(mv) + nrel
        b_wide = LaurentSeries(p, nrel, b.coeffs, wide_target, False, floor)
        residual = self.mul(b_wide, max_width) - LaurentSeries.one(
            p, nrel, window=wide_target)
        for e in sorted(residual.coeffs):
            if residual.coeffs[e].unit is not None:
                raise NotAUnit(
                    f"inverse failed to converge at exponent {e}; the input "
                    "is not a unit on this window at working precision")
        return b_wide.restrict(target_window)


def _clip_window(window, hull, width):
    lo, hi = window
    if hi - lo + 1 <= width:
        return window
    hlo, hhi = hull
    if hhi - hlo + 1 > width:
        raise WindowOverflow("populated exponents exceed the window cap")
    room = width - (hhi - hlo + 1)
    lo2 = max(lo, hlo - room // 2)
    hi2 = lo2 + width - 1
    if hi2 > hi:
        hi2 = hi
        lo2 = hi2 - width + 1
    return (lo2, hi2)


def _summaries(s: LaurentSeries):
    """(minval, abs_floor) treating inexact zeros as valuation=floor."""
    vals, floors = [], []
    for c in s.coeffs.values():
        vals.append(c.val)
        floors.append(c.abs_floor)
    if s.base_floor is not None:
        vals.append(s.base_floor)
        floors.append(s.base_floor)
    mv = min(vals) if vals else None
    fl = min(floors) if floors else None
    return mv, fl


def _mul(a: LaurentSeries, b: LaurentSeries, max_width, out_window=None):
    p = a.p
    nrel = min(a.nrel, b.nrel)
    width = max_width or DEFAULT_MAX_WIDTH

    def clamp(window):
        if out_window is None:
            return window
        lo = max(window[0], out_window[0])
        hi = min(window[1], out_window[1])
        if lo > hi:
            raise WindowOverflow("requested output window is not provable")
        return (lo, hi)

    mva, fla = _summaries(a)
    mvb, flb = _summaries(b)

    # zero cases: exact zero wins; a pure floor keeps its pessimism
    if mva is None or mvb is None:
        if (mva is None and a.base_floor is None) or \
           (mvb is None and b.base_floor is None):
            window = clamp(_window_of_product(a, b, width, (0, 0)))
            return LaurentSeries(p, nrel, {}, window, True, None)
        window = clamp(_window_of_product(a, b, width, (0, 0)))
        floors = [f + (mvb if mvb is not None else 0)
                  for f in (fla,) if f is not None]
        floors += [f + (mva if mva is not None else 0)
                   for f in (flb,) if f is not None]
        bf = min(floors) if floors else None
        return LaurentSeries(p, nrel, {}, window,
                             a.tail_free and b.tail_free, bf)

    # floor of the product
    if fla is INF and flb is INF:
        f_res = None
    else:
        f_res = min(
            (fla if fla is not None else INF) + mvb,
            (flb if flb is not None else INF) + mva)
        f_res = None if f_res is INF else int(f_res)

    ha = (min(a.coeffs), max(a.coeffs)) if a.coeffs else (0, 0)
    hb = (min(b.coeffs), max(b.coeffs)) if b.coeffs else (0, 0)
    full_hull = (ha[0] + hb[0], ha[1] + hb[1])
    hull = full_hull
    if out_window is not None:
        hull = (max(hull[0], out_window[0]), min(hull[1], out_window[1]))
        if hull[0] > hull[1]:
            hull = (out_window[0], out_window[0])
    window = clamp(_window_of_product(a, b, width, hull))
    lo, hi = window
    truncated_support = not (lo <= full_hull[0] and full_hull[1] <= hi)
    n_cells = hi - lo + 1

    # raw integer convolution relative to base = mva + mvb
    base = mva + mvb
    exact_path = f_res is None
    if exact_path:
        pk = None
    else:
        K = f_res - base + 2
        pk = p ** max(K, 1)

    items_a = [(e, c) for e, c in a.coeffs.items() if c.unit is not None]
    items_b = [(e, c) for e, c in b.coeffs.items() if c.unit is not None]
    raw_b = [(e, c.unit * p ** (c.val - mvb)) for e, c in items_b]
    res = [0] * n_cells

    for ea, ca in items_a:
        ra = ca.unit * p ** (ca.val - mva)
        if pk is not None:
            ra %= pk
        for eb, rb in raw_b:
            k = ea + eb
            if lo <= k <= hi:
                res[k - lo] += ra * rb

    coeffs = {}
    for idx, raw in enumerate(res):
        if pk is not None:
            raw %= pk
        if raw == 0:
            continue
        t = vp_int(raw, p)
        val = base + t
        if f_res is not None and val >= f_res:
            continue
        # the uniform absolute floor f_res carries the precision claim
        prec = nrel if f_res is None else min(nrel, f_res - val)
        unit = (raw // p ** t) % p ** prec
        if unit == 0:
            continue
        coeffs[idx + lo] = PadicNumber(p, nrel, val, unit, prec)

    tail_free = a.tail_free and b.tail_free and not truncated_support
    return LaurentSeries(p, nrel, coeffs, window, tail_free, f_res)


def _window_of_product(a, b, width, hull):
    ifa = a.tail_free
    ifb = b.tail_free
    ha = (min(a.coeffs), max(a.coeffs)) if a.coeffs else (0, 0)
    hb = (min(b.coeffs), max(b.coeffs)) if b.coeffs else (0, 0)
    if ifa and ifb:
        window = (a.window[0] + b.window[0], a.window[1] + b.window[1])
        return _clip_window(window, hull, width)
    los, his = [], []
    if not ifa:
        los.append(a.window[0] + hb[1])
        his.append(a.window[1] + hb[0])
    if not ifb:
        los.append(b.window[0] + ha[1])
        his.append(b.window[1] + ha[0])
    lo, hi = max(los), min(his)
    if lo > hi:
        raise WindowOverflow("provable window of product is empty")
    return _clip_window((lo, hi), hull, width)


# ---------------------------------------------------------------------------
# Spec-level operation names.
# ---------------------------------------------------------------------------


def series_arith(a, b, op, max_width=None):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a.mul(b, max_width)
    raise ValueError(f"unknown op {op!r}")


def series_invert(a, target_window=None, max_width=None):
    return a.invert(target_window, max_width)


def sigma_apply(a, power=1, max_width=None):
    return a.frobenius(power, max_width)


@dataclass(frozen=True)
class OneForm:
    """A 1-form g(u) du."""
    coefficient: LaurentSeries


def derivation_d(a: LaurentSeries) -> OneForm:
    return OneForm(a.derivative())


def d_sigma(w: OneForm, q: int) -> OneForm:
    """Twisted differential: g du -> sigma(g) * q * u^(q-1) du."""
    s = w.coefficient
    fpow = _log_p(q, s.p)
    g = s.frobenius(fpow)
    qc = PadicNumber.from_int(s.p, s.nrel, q)
    return OneForm(g.scale(qc).shift_exp(q - 1))


def _log_p(q, p):
    f = 0
    while q > 1:
        if q % p:
            raise ValueError(f"{q} is not a power of {p}")
        q //= p
        f += 1
    if f == 0:
        raise ValueError("q must be at least p")
    return f


# ---------------------------------------------------------------------------
# Membership (refutation-only).
# ---------------------------------------------------------------------------


def membership(a: LaurentSeries, label: RingLabel) -> MembershipResult:
    """Check stored coefficients against the label's defining conditions.

    Only provably nonzero coefficients can refute; truncation cannot prove
    membership, so Consistent means consistent-on-the-visible-window.
    """
    kind = label.kind
    for e in sorted(a.coeffs):
        c = a.coeffs[e]
        if c.unit is None:
            continue
        v = Fraction(c.val)
        if kind == GAMMA_PLUS:
            if e < 0 or v < 0:
                return MembershipResult(False, e)
        elif kind == GAMMA:
            if v < 0:
                return MembershipResult(False, e)
        elif kind == GAMMA_DAGGER:
            if v < 0:
                return MembershipResult(False, e)
            if e < 0 and v < label.lam * (-e) - label.c:
                return MembershipResult(False, e)
        elif kind == E_PLUS:
            if e < 0:
                return MembershipResult(False, e)
        elif kind == E:
            pass
        elif kind == E_DAGGER:
            if e < 0 and v < label.lam * (-e) - label.c:
                return MembershipResult(False, e)
        elif kind == R_PLUS:
            if e < 0:
                return MembershipResult(False, e)
        elif kind == R:
            if e < 0 and v < label.lam * (-e) - label.c:
                return MembershipResult(False, e)
    return MembershipResult(True)


def require_membership(a, label, what="entry"):
    res = membership(a, label)
    if not res:
        raise MembershipViolated(
            f"{what} violates {label.kind} at exponent {res.witness}",
            entry=what, exponent=res.witness)


# ---------------------------------------------------------------------------
# Comparison at precision.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AgreementVerdict:
    """Outcome of comparing two series on their common window."""
    holds: bool
    floor: Optional[int]          # decided modulo p^floor (None = exact)
    window: tuple
    witness: Optional[int] = None         # first discrepant exponent
    residual_valuation: Optional[int] = None


def series_agree(a: LaurentSeries, b: LaurentSeries) -> AgreementVerdict:
    d = a - b
    window = d.window
    floor = d.abs_floor()
    floor = None if floor is INF else int(floor)
    for e in sorted(d.coeffs):
        c = d.coeffs[e]
        if c.unit is not None:
            return AgreementVerdict(False, floor, window, e, c.val)
    return AgreementVerdict(True, floor, window)
