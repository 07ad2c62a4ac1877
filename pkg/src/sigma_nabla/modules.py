"""Sigma-modules, (sigma, nabla)-modules and Dieudonne modules as matrix
data, with the compatibility law, base change, Verschiebung recovery and
the quasi-nilpotence probe.

Conventions (fixed across the library):

* Frobenius acts by ``F e_j = sum_i Phi[i][j] e_i`` and the connection by
  ``nabla e_j = sum_i N[i][j] e_i (x) du``.
* The compatibility diagram in coordinates reads

      N * Phi + d(Phi) = q * u^(q-1) * Phi * sigma(N)

  where d is the entrywise du-coefficient of the derivative and sigma
  scales exponents by q.
* A change of basis by an invertible Y transforms
  ``Phi -> Y^-1 Phi sigma(Y)``, ``N -> Y^-1 N Y + Y^-1 d(Y)`` and, when a
  Verschiebung B is present, ``B -> sigma(Y^-1) B Y``.
* A section f (coordinate column) is horizontal iff f' + N f = 0, and the
  differential operator of the probe is D(f) = f' + N f.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .errors import MembershipViolated, SingularFrobenius
from .linalg import (
    smat_add,
    smat_agree,
    smat_deriv,
    smat_first_disagreement,
    smat_identity,
    smat_inv,
    smat_map,
    smat_mul,
    smat_scale,
    smat_shape,
    smat_sigma,
)
from .padic import INF, PadicNumber
from .series import LaurentSeries, RingLabel, membership


def _log_p(q, p):
    f = 0
    qq = q
    while qq > 1:
        if qq % p:
            raise ValueError(f"q={q} is not a power of p={p}")
        qq //= p
        f += 1
    if f == 0:
        raise ValueError("q must be at least p")
    return f


@dataclass
class SigmaNablaModule:
    """Rank-n module data (Phi, N, optional B) over a labelled ring."""

    ring: RingLabel
    q: int
    phi: list
    nmat: list
    bmat: Optional[list] = None

    def __post_init__(self):
        n, m = smat_shape(self.phi)
        if n != m:
            raise ValueError("Phi must be square")
        if smat_shape(self.nmat) != (n, n):
            raise ValueError("N must match Phi")
        if self.bmat is not None and smat_shape(self.bmat) != (n, n):
            raise ValueError("B must match Phi")
        self.p = self.phi[0][0].p
        self.nrel = self.phi[0][0].nrel
        self.f = _log_p(self.q, self.p)

    @property
    def rank(self):
        return len(self.phi)

    def entries(self):
        mats = [("Phi", self.phi), ("N", self.nmat)]
        if self.bmat is not None:
            mats.append(("B", self.bmat))
        for name, mat in mats:
            for i, row in enumerate(mat):
                for j, s in enumerate(row):
                    yield f"{name}[{i}][{j}]", s


@dataclass(frozen=True)
class CompatVerdict:
    """Result of the compatibility check, with the precision floor it was
    decided at."""
    holds: bool
    floor: Optional[int]
    window: tuple
    position: Optional[tuple] = None
    residual_valuation: Optional[int] = None

    def __bool__(self):
        return self.holds


def _u_power_q(p, nrel, q):
    return LaurentSeries.monomial(p, nrel, q, q - 1)


def check_compat(mod: SigmaNablaModule, max_width=None) -> CompatVerdict:
    """Verify N*Phi + d(Phi) = q*u^(q-1)*Phi*sigma(N) at precision."""
    p, nrel, q = mod.p, mod.nrel, mod.q
    lhs = smat_add(smat_mul(mod.nmat, mod.phi, max_width),
                   smat_deriv(mod.phi))
    sig_n = smat_sigma(mod.nmat, mod.f, max_width)
    rhs = smat_mul(mod.phi, sig_n, max_width)
    rhs = smat_map(rhs, lambda s: s.mul(
        _u_power_q(p, nrel, q), max_width))
    bad = smat_first_disagreement(lhs, rhs)
    verdict = smat_agree(lhs, rhs)
    if bad is None:
        return CompatVerdict(True, verdict.floor, verdict.window)
    pos, v = bad
    return CompatVerdict(False, v.floor, v.window, pos, v.residual_valuation)


def check_fv(mod: SigmaNablaModule, max_width=None):
    """Phi*B = B*Phi = p*Identity, at precision; the B-side diagram
    d(B) + q*u^(q-1)*sigma(N)*B = B*N comes with it."""
    if mod.bmat is None:
        raise ValueError("module has no Verschiebung matrix")
    p, nrel, q = mod.p, mod.nrel, mod.q
    n = mod.rank
    p_id = smat_scale(smat_identity(n, p, nrel),
                      PadicNumber.from_int(p, nrel, p))
    v1 = smat_agree(smat_mul(mod.phi, mod.bmat, max_width), p_id)
    v2 = smat_agree(smat_mul(mod.bmat, mod.phi, max_width), p_id)
    lhs = smat_add(smat_deriv(mod.bmat),
                   smat_map(smat_mul(smat_sigma(mod.nmat, mod.f, max_width),
                                     mod.bmat, max_width),
                            lambda s: s.mul(_u_power_q(p, nrel, q),
                                            max_width)))
    rhs = smat_mul(mod.bmat, mod.nmat, max_width)
    v3 = smat_agree(lhs, rhs)
    floors = [v.floor for v in (v1, v2, v3) if v.floor is not None]
    return CompatVerdict(v1.holds and v2.holds and v3.holds,
                         min(floors) if floors else None, v1.window)


def base_change(mod: SigmaNablaModule, target: RingLabel) -> SigmaNablaModule:
    """Relabel the module over a larger ring of the inclusion lattice.

    Entries are re-checked against the target label; a provable violation
    raises MembershipViolated.
    """
    if not mod.ring.included_in(target):
        raise ValueError(
            f"{mod.ring.kind} is not contained in {target.kind}")
    for name, s in mod.entries():
        res = membership(s, target)
        if not res:
            raise MembershipViolated(
                f"{name} violates {target.kind} at exponent {res.witness}",
                entry=name, exponent=res.witness)
    return replace(mod, ring=target)


def recover_verschiebung(mod: SigmaNablaModule,
                         target_window=None, max_width=None):
    """B = p * Phi^-1, the unique Verschiebung (FV = VF = p)."""
    p, nrel = mod.p, mod.nrel
    try:
        inv = smat_inv(mod.phi, target_window, max_width)
    except Exception as exc:
        raise SingularFrobenius(f"Phi is not invertible: {exc}") from exc
    b = smat_scale(inv, PadicNumber.from_int(p, nrel, p))
    return replace(mod, bmat=b)


def module_at_floor(mod: SigmaNablaModule, floor) -> SigmaNablaModule:
    """Weaken every entry to the uniform absolute floor p^floor."""

    def cap(mat):
        if mat is None:
            return None
        return [[s.widen_floor(floor) for s in row] for row in mat]

    return replace(mod, phi=cap(mod.phi), nmat=cap(mod.nmat),
                   bmat=cap(mod.bmat))


def basis_transform(mod: SigmaNablaModule, y, y_inv=None,
                    target_window=None, max_width=None) -> SigmaNablaModule:
    """Rewrite the module in the basis v_j = sum_i Y[i][j] e_i."""
    if y_inv is None:
        y_inv = smat_inv(y, target_window, max_width)
    y_sigma = smat_sigma(y, mod.f, max_width)
    phi = smat_mul(smat_mul(y_inv, mod.phi, max_width), y_sigma, max_width)
    nmat = smat_add(
        smat_mul(smat_mul(y_inv, mod.nmat, max_width), y, max_width),
        smat_mul(y_inv, smat_deriv(y), max_width))
    bmat = None
    if mod.bmat is not None:
        y_inv_sigma = smat_sigma(y_inv, mod.f, max_width)
        bmat = smat_mul(smat_mul(y_inv_sigma, mod.bmat, max_width), y,
                        max_width)
    return replace(mod, phi=phi, nmat=nmat, bmat=bmat)


# ---------------------------------------------------------------------------
# Quasi-nilpotence probe.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NilpotenceVerdict:
    refuted: bool
    profiles: tuple            # per basis vector: tuple of valuations
    refuted_at: Optional[int] = None
    reached_target: bool = False

    @property
    def plausible(self):
        return not self.refuted


def quasi_nilpotence_probe(mod: SigmaNablaModule, n_max, v_target,
                           max_width=None) -> NilpotenceVerdict:
    """Iterate D = (d/du + N) on basis vectors and watch valuations.

    Refuted when, over a full period of p consecutive steps, the minimum
    valuation stays below zero and never gains a digit; Plausible with the
    recorded profile otherwise (reaching v_target ends the scan early).
    Truncation makes this a probe, never a proof.
    """
    p, nrel = mod.p, mod.nrel
    n = mod.rank
    profiles = []
    refuted_at = None
    reached = True
    for j in range(n):
        vec = [LaurentSeries.zero(p, nrel) for _ in range(n)]
        vec[j] = LaurentSeries.one(p, nrel)
        vals = []
        hit_target = False
        for step in range(1, n_max + 1):
            nxt = []
            for i in range(n):
                acc = vec[i].derivative()
                for k in range(n):
                    acc = acc + mod.nmat[i][k].mul(vec[k], max_width)
                nxt.append(acc)
            vec = nxt
            v = min((s.min_valuation() for s in vec))
            vals.append(v)
            if v is INF or v >= v_target:
                hit_target = True
                break
            window = max(0, len(vals) - p)
            recent = vals[window:]
            if (len(recent) == p and all(x < 0 for x in recent)
                    and all(recent[i + 1] <= recent[i]
                            for i in range(len(recent) - 1))
                    and recent[-1] <= recent[0]):
                profiles.append(tuple(vals))
                return NilpotenceVerdict(True, tuple(profiles),
                                         refuted_at=step)
        profiles.append(tuple(vals))
        reached = reached and hit_target
    return NilpotenceVerdict(False, tuple(profiles), reached_target=reached)
