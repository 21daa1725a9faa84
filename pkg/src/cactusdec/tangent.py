"""Dimension of Hom(I, R*/I) for an artinian affine ideal supported at
the origin: the tangent space to the punctual locus used as the last
filter of both membership decisions.

Every module map I -> R*/I kills I^2, so the computation happens on
finite models: with m^N inside I, the images of I and I^2 inside
R*/m^(2N) are exact models of I/I^2, and a map is R*-linear exactly when
it commutes with multiplication by each variable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactla
from .groebner import (GREVLEX, Ideal, _GBData, _nf_terms, groebner_basis,
                       is_unit_ideal, is_zero_dimensional,
                       minimalize_gens_mprimary, standard_monomials)
from .poly import (Poly, PreconditionError, monomial_index,
                   monomials_of_degree, monomials_up_to)


@dataclass(frozen=True)
class TangentReport:
    dim_hom: int
    nvars: int
    threshold: int | None
    truncation: int
    length: int
    nilpotency: int     # minimal N with m^N inside I

    def exceeds_threshold(self):
        if self.threshold is None:
            raise ValueError("no threshold recorded")
        return self.dim_hom > self.threshold


import functools


@functools.lru_cache(maxsize=None)
def _dense_lut(nvars, bound):
    """Flat exponent-tuple -> column-index table over (bound+1)^nvars."""
    strides = np.array([(bound + 1) ** (nvars - 1 - i) for i in range(nvars)],
                       dtype=np.int64)
    lut = np.full((bound + 1) ** nvars, -1, dtype=np.int64)
    for m, j in monomial_index(nvars, bound).items():
        lut[int(np.dot(np.array(m, dtype=np.int64), strides))] = j
    return lut, strides


@functools.lru_cache(maxsize=None)
def _shift_map(nvars, bound, var):
    """Column map for multiplication by a variable inside the model of
    monomials of degree <= bound; -1 where the product overflows."""
    idx = monomial_index(nvars, bound)
    src = monomials_up_to(nvars, bound)
    out = np.full(len(src), -1, dtype=np.int64)
    for k, m in enumerate(src):
        w = list(m)
        w[var] += 1
        out[k] = idx.get(tuple(w), -1)
    return out


def _shifted_rows(rows, var, nvars, bound):
    """Multiply each row (a vector over monomials of degree <= bound) by
    the given variable, truncating at the model bound."""
    smap = _shift_map(nvars, bound, var)
    out = np.zeros_like(rows)
    keep = smap >= 0
    out[:, smap[keep]] = rows[:, keep]
    return out


def _model_rows(polys, nvars, bound, width):
    """Vectors of all monomial multiples mu*g (deg mu + ord g <= bound)
    inside the model spanned by monomials of degree <= bound."""
    lut, strides = _dense_lut(nvars, bound)
    blocks = []
    for g in polys:
        o = g.order()
        if o is None or o > bound:
            continue
        exps = np.array(list(g.terms.keys()), dtype=np.int64)
        coeffs = np.array(list(g.terms.values()), dtype=np.int64)
        mus = np.array(monomials_up_to(nvars, bound - o), dtype=np.int64)
        mus = mus.reshape(-1, nvars)
        shifted = (mus[:, None, :] + exps[None, :, :]).reshape(-1, nvars)
        flat = shifted @ strides
        inside = shifted.sum(axis=1) <= bound
        cols = np.where(inside, lut[np.minimum(flat, lut.shape[0] - 1)], -1)
        rows = np.zeros((mus.shape[0], width), dtype=np.int64)
        rowidx = np.repeat(np.arange(mus.shape[0]), exps.shape[0])
        keep = cols >= 0
        rows[rowidx[keep], cols[keep]] = np.tile(coeffs, mus.shape[0])[keep]
        blocks.append(rows)
    if not blocks:
        return np.zeros((0, width), dtype=np.int64)
    return np.vstack(blocks)


def tangent_dimension(ideal: Ideal, threshold=None, truncation=None):
    """dim Hom(I, R*/I) for an artinian ideal supported at the origin.

    Raises PreconditionError when the quotient is not finite-dimensional
    or the support is not concentrated at the origin.
    """
    ring = ideal.ring
    p = ring.p
    nv = ring.nvars
    if is_unit_ideal(ideal):
        raise PreconditionError("unit ideal has no tangent data")
    if not is_zero_dimensional(ideal):
        raise PreconditionError("quotient is not finite-dimensional")
    gb = groebner_basis(ideal, GREVLEX)
    std = standard_monomials(ideal)
    length = len(std)

    gbdata = _GBData([g.terms for g in gb], GREVLEX, p, nv)

    def nf(terms):
        return _nf_terms(terms, gbdata)

    # minimal N with m^N inside I
    nilp = None
    for cand in range(1, length + 1):
        if all(not nf({m: 1}) for m in monomials_of_degree(nv, cand)):
            nilp = cand
            break
    if nilp is None:
        raise PreconditionError("ideal is not supported at the origin")

    gens = minimalize_gens_mprimary(ring, gb, nilp)
    o_min = min(g.order() for g in gens)
    prods = []
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            prods.append(gens[i] * gens[j])

    def i2_model(bound):
        width = len(monomials_up_to(nv, bound))
        inc = exactla.IncrementalRREF(width, p)
        inc.insert(_model_rows(prods, nv, bound, width))
        return inc

    if truncation is not None:
        if truncation < 2 * nilp:
            raise PreconditionError(
                "truncation below twice the nilpotency degree")
        bound_total = truncation
        bound = bound_total - 1
        i2 = i2_model(bound)
    else:
        # the model only needs m^M inside I^2; 2N always works, but a
        # smaller probe degree is certified by reducing its monomials
        # (exact by Nakayama for this m-primary situation)
        bound_total = 2 * nilp
        bound = bound_total - 1
        i2 = None
        for probe in range(max(2 * o_min, nilp + 1), 2 * nilp):
            cand = i2_model(probe)
            lut, strides = _dense_lut(nv, probe)
            mono = np.array(monomials_of_degree(nv, probe), dtype=np.int64)
            vecs = np.zeros((mono.shape[0], cand.ncols), dtype=np.int64)
            vecs[np.arange(mono.shape[0]), lut[mono @ strides]] = 1
            if not cand.reduce(vecs).any():
                bound_total, bound, i2 = probe + 1, probe, cand
                break
        if i2 is None:
            i2 = i2_model(bound)

    enum = monomials_up_to(nv, bound)
    width = len(enum)

    # basis of I / I^2: mu*g is congruent to NF(mu)*g mod I^2, so products
    # of standard monomials with the generators already span it
    small_span = []
    for g in gens:
        for m in std:
            small_span.append(Poly(ring, {m: 1}) * g)
    raw = _model_rows(small_span, nv, bound, width)
    residual = i2.reduce(raw)
    basis_rows, basis_pivots = exactla.rref(residual, p)
    t = basis_rows.shape[0]

    # multiplication on R*/I over the standard-monomial basis
    sidx = {m: i for i, m in enumerate(std)}
    xmats = []
    for k in range(nv):
        x = np.zeros((length, length), dtype=np.int64)
        for j, m in enumerate(std):
            w = list(m)
            w[k] += 1
            r = nf({tuple(w): 1})
            for e, c in r.items():
                x[sidx[e], j] = c
        xmats.append(x)

    # multiplication on I/I^2 in the chosen basis
    mmats = []
    plist = list(basis_pivots)
    for k in range(nv):
        lifted = _shifted_rows(basis_rows, k, nv, bound)
        red = i2.reduce(lifted)
        mk = red[:, plist].T % p     # column j = coordinates of x_k . b_j
        mmats.append(mk)

    # linear maps I/I^2 -> R*/I commuting with every variable
    lt = length * t
    z = np.eye(lt, dtype=np.int64)
    for k in range(nv):
        c = (np.kron(np.eye(length, dtype=np.int64), mmats[k].T)
             - np.kron(xmats[k], np.eye(t, dtype=np.int64))) % p
        w = exactla.matmul_mod(c, z, p)
        kern = exactla.kernel_basis(w, p)
        z = exactla.matmul_mod(z, kern.T, p)
        if z.shape[1] == 0:
            break
    dim_hom = z.shape[1]
    return TangentReport(dim_hom, nv, threshold, bound_total, length, nilp)
