"""Inverse systems: annihilators, catalecticants, apolar dimensions,
graded and local Hilbert functions, and the (1,6,6,1) / (1,4,3)
signature tests.

The contraction pairing identifies the degree-e graded piece of the
apolar algebra of W with the space of degree-e partials of W; every
Hilbert-function computation below is a rank computation on contraction
matrices, no Groebner step involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactla
from .groebner import Ideal
from .poly import (PRIMAL, Poly, PreconditionError, RingMismatchError,
                   Subspace, as_subspace, contract, monomial_index,
                   monomials_of_degree, monomials_up_to)


@dataclass(frozen=True)
class HilbertData:
    values: tuple
    kind: str  # "graded" | "local"

    def __post_init__(self):
        vals = list(self.values)
        while vals and vals[-1] == 0:
            vals.pop()
        object.__setattr__(self, "values", tuple(vals))

    def __eq__(self, other):
        if isinstance(other, HilbertData):
            return self.kind == other.kind and self.values == other.values
        return tuple(self.values) == tuple(other)

    def __iter__(self):
        return iter(self.values)

    def total(self):
        return sum(self.values)

    def __repr__(self):
        return f"HilbertData({self.values}, {self.kind})"


def _require_primal(x):
    ring = x.ring
    if ring.flavor != PRIMAL:
        raise RingMismatchError("expected a primal-ring input")
    return ring


# ---------------------------------------------------------------------------
# catalecticants

def catalecticant(g: Poly, e):
    """Matrix of contraction by degree-e duals: rows index the degree
    (d-e) monomials of the primal ring, columns the degree-e monomials of
    the dual ring.  rank = Hilbert function of the apolar algebra at e."""
    ring = _require_primal(g)
    if not g.is_homogeneous() or g.is_zero():
        raise PreconditionError("catalecticant needs a nonzero homogeneous form")
    d = g.degree()
    if not 0 <= e <= d:
        raise PreconditionError(f"degree {e} outside 0..{d}")
    cols = monomials_of_degree(ring.nvars, e)
    rows = monomials_of_degree(ring.nvars, d - e)
    ridx = {m: i for i, m in enumerate(rows)}
    dualring = ring.dual()
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, u in enumerate(cols):
        img = contract(Poly(dualring, {u: 1}), g)
        for v, c in img.terms.items():
            mat[ridx[v], j] = c
    return mat


def catalecticant_stacked(x, e):
    """Per-generator catalecticants of a subspace of forms, stacked so the
    kernel is the intersection of the per-generator kernels."""
    if isinstance(x, Poly):
        return catalecticant(x, e)
    blocks = [catalecticant(f, e) for f in x.basis()]
    return np.vstack(blocks)


def graded_hf_of_form(g, up_to=None):
    """Hilbert function of the apolar algebra of a homogeneous form,
    via catalecticant ranks."""
    x = as_subspace(g) if isinstance(g, Poly) else g
    d = max(f.degree() for f in x.basis())
    if up_to is None:
        up_to = d
    p = x.ring.p
    vals = [exactla.rank(catalecticant_stacked(x, e), p) if e <= d else 0
            for e in range(up_to + 1)]
    return HilbertData(tuple(vals), "graded")


# ---------------------------------------------------------------------------
# annihilators

def ann_graded(x, up_to):
    """Generators of the annihilator in degrees <= up_to: for each degree
    e a canonical kernel basis of the (stacked) catalecticant."""
    x0 = x if isinstance(x, Poly) else x
    ring = _require_primal(x0)
    basis = [x0] if isinstance(x0, Poly) else x0.basis()
    if any(not f.is_homogeneous() for f in basis):
        raise PreconditionError("graded annihilator needs homogeneous input")
    d = max(f.degree() for f in basis)
    if up_to > d:
        raise PreconditionError("graded annihilator only defined up to the degree")
    dualring = ring.dual()
    p = ring.p
    gens = []
    for e in range(up_to + 1):
        mat = catalecticant_stacked(x0, e)
        kern = exactla.kernel_basis(mat, p)
        cols = monomials_of_degree(ring.nvars, e)
        for v in kern:
            gens.append(Poly(dualring, {cols[i]: int(c)
                                        for i, c in enumerate(v) if c}))
    return Ideal(dualring, tuple(gens))


def ann_homogeneous(g):
    """The full annihilator ideal of homogeneous input: graded kernels in
    every degree up to d plus all degree-(d+1) monomials."""
    basis = [g] if isinstance(g, Poly) else g.basis()
    ring = _require_primal(basis[0])
    d = max(f.degree() for f in basis)
    base = ann_graded(g, d)
    dualring = base.ring
    tops = [Poly(dualring, {m: 1}) for m in monomials_of_degree(ring.nvars, d + 1)]
    return Ideal(dualring, base.gens + tuple(tops), mprimary_power=d + 1)


def _contraction_rows(w: Subspace, lows, highs=None):
    """Rows of the map theta -> (theta . w_i)_i for dual monomials of the
    degrees in `lows` (one row per monomial, coordinates stacked over the
    basis of w in S_{<= d1})."""
    ring = w.ring
    d1 = w.d1
    idx = monomial_index(ring.nvars, d1)
    width = len(idx) * w.dim
    dualring = ring.dual()
    basis = w.basis()
    rows = []
    tags = []
    for e in lows:
        for u in monomials_of_degree(ring.nvars, e):
            theta = Poly(dualring, {u: 1})
            v = np.zeros(width, dtype=np.int64)
            for i, f in enumerate(basis):
                img = contract(theta, f)
                for exps, c in img.terms.items():
                    v[i * len(idx) + idx[exps]] = c
            rows.append(v)
            tags.append((e, u))
    return np.array(rows, dtype=np.int64), tags


def ann_inhom(x):
    """Annihilator of a polynomial or subspace W in S_{<= m}: the kernel
    of the contraction map on dual degrees <= m, plus every degree-(m+1)
    monomial."""
    w = as_subspace(x)
    if w.dim == 0:
        raise PreconditionError("annihilator of the zero subspace")
    ring = w.ring
    m = w.d1
    dualring = ring.dual()
    mat, tags = _contraction_rows(w, range(m + 1))
    kern = exactla.kernel_basis(mat.T, ring.p)
    gens = []
    for v in kern:
        terms = {}
        for i, c in enumerate(v):
            if c:
                terms[tags[i][1]] = int(c)
        gens.append(Poly(dualring, terms))
    tops = [Poly(dualring, {u: 1})
            for u in monomials_of_degree(ring.nvars, m + 1)]
    return Ideal(dualring, tuple(gens) + tuple(tops), mprimary_power=m + 1)


def apolar_dim(x):
    """Length of the apolar algebra: the dimension of the space of all
    partials of W, invariant under linear changes of the S-variables."""
    w = as_subspace(x)
    if w.dim == 0:
        raise PreconditionError("apolar dimension of the zero subspace")
    stack = _partials_matrix(w)
    return exactla.rank(stack, w.ring.p)


def _partials_matrix(w: Subspace):
    """All contractions (dual monomials of degree <= d1) of the basis of w,
    as vectors in S_{<= d1}; its rank is the apolar dimension."""
    ring = w.ring
    d1 = w.d1
    idx = monomial_index(ring.nvars, d1)
    dualring = ring.dual()
    rows = []
    for e in range(d1 + 1):
        for u in monomials_of_degree(ring.nvars, e):
            theta = Poly(dualring, {u: 1})
            for f in w.basis():
                img = contract(theta, f)
                if img.is_zero():
                    continue
                v = np.zeros(len(idx), dtype=np.int64)
                for exps, c in img.terms.items():
                    v[idx[exps]] = c
                rows.append(v)
    if not rows:
        return np.zeros((0, len(idx)), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def local_hilbert(x):
    """Local Hilbert function of the apolar algebra of W.

    Ranks of the contraction map restricted to dual degrees >= k drop by
    exactly the Hilbert function value at k, so one incremental
    elimination (degrees inserted high to low) produces every value.
    """
    w = as_subspace(x)
    if w.dim == 0:
        raise PreconditionError("Hilbert function of the zero subspace")
    ring = w.ring
    m = w.d1
    idx = monomial_index(ring.nvars, m)
    width = len(idx) * w.dim
    inc = exactla.IncrementalRREF(width, ring.p)
    ranks = [0] * (m + 2)  # ranks[k] = rank of the map on degrees >= k
    for k in range(m, -1, -1):
        mat, _ = _contraction_rows(w, [k])
        inc.insert(mat)
        ranks[k] = inc.rank
    vals = tuple(ranks[k] - ranks[k + 1] for k in range(m + 1))
    return HilbertData(vals, "local")


# ---------------------------------------------------------------------------
# signature characterizations

@dataclass(frozen=True)
class SignatureCheck:
    value: bool
    hf: HilbertData
    direct: bool
    structural: bool
    detail: dict

    def __bool__(self):
        return self.value


def _span_product(u_basis, ring):
    """The subspace U . S_1 inside S_2."""
    prods = []
    for u in u_basis:
        for v in ring.variables():
            prods.append(u * v)
    return Subspace.span(prods, 2)


def is_1661(f: Poly):
    """Signature test for cubics: local Hilbert function (1,6,6,1).

    Cross-checked against the structural description: the second partials
    of the top form span a 6-dimensional space of linear forms U and the
    quadratic part lies in U.S_1.  The two routes must agree.
    """
    ring = _require_primal(f)
    if f.degree() > 3:
        raise PreconditionError("expected a polynomial of degree at most 3")
    hf = local_hilbert(as_subspace(f, 3))
    direct = hf == (1, 6, 6, 1)

    f3 = f.homogeneous_part(3)
    f2 = f.homogeneous_part(2)
    structural = False
    u_dim = 0
    if not f3.is_zero():
        dualring = ring.dual()
        u_vecs = []
        for u in monomials_of_degree(ring.nvars, 2):
            img = contract(Poly(dualring, {u: 1}), f3)
            if not img.is_zero():
                u_vecs.append(img)
        if u_vecs:
            uspan = Subspace.span(u_vecs, 1)
            u_dim = uspan.dim
            if u_dim == 6:
                if f2.is_zero():
                    structural = True
                else:
                    us1 = _span_product(uspan.basis(), ring)
                    structural = us1.contains(f2)
    if direct != structural:
        raise AssertionError(
            "internal mismatch between the Hilbert-function and structural "
            f"routes for {f}")
    return SignatureCheck(direct, hf, direct, structural,
                          {"u_dim": u_dim})


def is_143(w) -> SignatureCheck:
    """Signature test for 3-dimensional spaces of quadrics: local Hilbert
    function (1,4,3), cross-checked on the leading (degree-2) subspace."""
    w = as_subspace(w, 2)
    if w.dim != 3:
        raise PreconditionError("expected a 3-dimensional subspace")
    hf = local_hilbert(w)
    direct = hf == (1, 4, 3)

    lead = [f.homogeneous_part(2) for f in w.basis()]
    lead = [f for f in lead if not f.is_zero()]
    structural = False
    w2_dim = 0
    if lead:
        w2 = Subspace.span(lead, 2)
        w2_dim = w2.dim
        if w2.dim == 3:
            structural = local_hilbert(w2) == (1, 4, 3)
    if direct != structural:
        raise AssertionError(
            "internal mismatch between the Hilbert-function and leading-"
            "subspace routes")
    return SignatureCheck(direct, hf, direct, structural,
                          {"w2_dim": w2_dim})
