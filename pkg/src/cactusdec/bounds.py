"""Rank bounds and certificates for re-homogenized polynomials and
subspaces: cactus-rank upper bounds with verified certificate ideals,
exact border cactus rank under the documented hypotheses, the weak
degree-growth obstruction, and the apolarity containment check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import exactla
from .apolar import (ann_inhom, apolar_dim, catalecticant, graded_hf_of_form)
from .groebner import Ideal, homogenize_ideal
from .poly import (Poly, PreconditionError, Subspace, as_subspace, contract,
                   hom_extend, monomials_of_degree, triangle)


class StandardHFSpec:
    """Admissible Hilbert-function shapes for length-r subschemes in
    projective space on nvars_plus_1 variables: capped by
    h_r(a) = min(dim T*_a, r), non-decreasing, and frozen at r as soon as
    two consecutive values agree."""

    def __init__(self, r, nvars_plus_1):
        self.r = r
        self.nvars_plus_1 = nvars_plus_1

    def ambient_dim(self, a):
        n = self.nvars_plus_1
        return math.comb(a + n - 1, n - 1)

    def cap(self, a):
        return min(self.ambient_dim(a), self.r)

    def admissible(self, values):
        vals = list(values)
        for a, v in enumerate(vals):
            if not 0 <= v <= self.cap(a):
                return False
        for a in range(len(vals) - 1):
            if vals[a] > vals[a + 1]:
                return False
            if vals[a] == vals[a + 1] and vals[a] != self.r:
                return False
        return True


@dataclass(frozen=True)
class BoundReport:
    r: int
    kind: str                 # "upper" | "exact"
    d1: int
    d2: int
    flags: dict = field(default_factory=dict)
    certificate: Ideal | None = None
    note: str = ""


def apolarity_certificate(igens: Ideal, v) -> bool:
    """True iff every generator contracts every basis element of v to zero.

    Checks only the containment I subset Ann(v); whether the ideal cuts
    out a scheme of the right length and saturation is the caller's
    responsibility.
    """
    w = as_subspace(v)
    if any(not f.is_homogeneous() for f in w.basis()):
        raise PreconditionError("certificate check needs homogeneous forms")
    basis = w.basis()
    for g in igens.gens:
        for f in basis:
            if not contract(g, f).is_zero():
                return False
    return True


def _ambient(x):
    if isinstance(x, Poly):
        return max(x.degree(), 1)
    return max(x.d1, 1)


def cactus_upper(x, d2):
    """Cactus rank of the d2-re-homogenization is at most the apolar
    dimension r; the certificate ideal (the homogenized annihilator) is
    verified against the re-homogenized space before reporting."""
    w = as_subspace(x)
    if w.dim == 0:
        raise PreconditionError("zero input")
    d1 = _ambient(x)
    r = apolar_dim(w)
    cert = homogenize_ideal(ann_inhom(w))
    target = hom_extend(w.with_ambient(d1), d2, d1)
    if not apolarity_certificate(cert, target):
        raise RuntimeError("certificate containment failed; this is a bug")
    return BoundReport(r, "upper", d1, d2, {"certificate_verified": True}, cert)


def _top_is_power_of_linear(f_top):
    """A nonzero form is a power of a linear form iff its first
    catalecticant has rank at most 1."""
    if f_top.is_zero():
        return True
    if f_top.degree() == 0:
        return True
    return exactla.rank(catalecticant(f_top, 1), f_top.ring.p) <= 1


def border_cactus_exact(x, d2):
    """Exact border cactus rank of the re-homogenization, when the
    hypotheses hold: subspaces need d2 >= d1; a single polynomial also
    qualifies at d2 = d1 - 1 provided the top form is not a power of a
    linear form.  Outside those ranges only the upper bound is claimed
    (smaller d2 genuinely fails: a binary length-4 example already drops
    below its apolar dimension two steps down)."""
    report = cactus_upper(x, d2)
    d1 = report.d1
    r = report.r
    flags = dict(report.flags)
    flags["d2_ge_d1"] = d2 >= d1
    flags["r_gt_2d1"] = r > 2 * d1

    poly_case = isinstance(x, Poly)
    if poly_case:
        top = x.homogeneous_part(x.degree())
        flags["top_not_power"] = not _top_is_power_of_linear(top)

    # guard: the degree rescaling must not move the apolar dimension
    r_scaled = apolar_dim(triangle(d1 + d2, as_subspace(x)))
    flags["rescale_consistent"] = (r_scaled == r)

    exact = False
    reason = ""
    if not flags["rescale_consistent"]:
        reason = "apolar dimension moves under degree rescaling"
    elif d2 >= d1:
        exact = True
    elif poly_case and d2 == d1 - 1:
        if flags["top_not_power"]:
            exact = True
        else:
            reason = ("refused: top form is a power of a linear form, so "
                      "d2 = d1 - 1 is not enough")
    else:
        reason = (f"refused: d2 = {d2} is below the exactness range "
                  f"(need d2 >= {d1 - 1 if poly_case else d1})")
    if exact:
        return BoundReport(r, "exact", d1, d2, flags, report.certificate)
    return BoundReport(r, "upper", d1, d2, flags, report.certificate, reason)


@dataclass(frozen=True)
class ObstructionReport:
    kind: str                 # "obstructed" | "inconclusive"
    r: int
    witness_degree: int | None
    mode: str | None          # "cap" | "growth"
    hf: tuple
    detail: str = ""

    def __bool__(self):
        return self.kind == "obstructed"


def weak_obstruction(F, r):
    """Necessary-condition test: can some homogeneous ideal inside Ann(F)
    have an admissible length-r Hilbert function?

    Obstructed when (a) the Hilbert function of the apolar algebra exceeds
    the cap min(dim T*_e, r) at some degree, or (b) it reaches r at degree
    e while the annihilator grows too fast: dim T*_1 (Ann F)_e exceeds
    dim T*_(e+1) - r, so no admissible ideal can match degree e+1.
    Obstructed at r implies border cactus rank above r; the negative
    outcome is only ever "inconclusive".
    """
    if not isinstance(F, Poly) or not F.is_homogeneous() or F.is_zero():
        raise PreconditionError("expected a nonzero homogeneous form")
    ring = F.ring
    p = ring.p
    d = F.degree()
    spec = StandardHFSpec(r, ring.nvars)
    hf = tuple(graded_hf_of_form(F).values)
    hf = hf + (0,) * (d + 1 - len(hf))
    for e in range(d + 1):
        if hf[e] > spec.cap(e):
            return ObstructionReport(
                "obstructed", r, e, "cap", hf,
                f"H = {hf[e]} exceeds cap {spec.cap(e)} at degree {e}")
    for e in range(d + 1):
        if hf[e] != r:
            continue
        kern = exactla.kernel_basis(catalecticant(F, e), p)
        if kern.shape[0] == 0:
            continue
        lifted = []
        src = monomials_of_degree(ring.nvars, e)
        dst = {m: i for i, m in enumerate(monomials_of_degree(ring.nvars, e + 1))}
        for var in range(ring.nvars):
            block = np.zeros((kern.shape[0], len(dst)), dtype=np.int64)
            for k, m in enumerate(src):
                w = list(m)
                w[var] += 1
                block[:, dst[tuple(w)]] = kern[:, k]
            lifted.append(block)
        grown = exactla.rank(np.vstack(lifted), p)
        allowed = len(dst) - r
        if grown > allowed:
            return ObstructionReport(
                "obstructed", r, e, "growth", hf,
                f"dim T*_1 Ann_{e} = {grown} > {allowed} = dim T*_{e + 1} - {r}")
    return ObstructionReport("inconclusive", r, None, None, hf)
