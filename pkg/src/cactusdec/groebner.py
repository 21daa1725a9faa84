"""Buchberger engine and ideal-level machinery over F_p.

Covers reduced Groebner bases, normal forms, graded Hilbert data through
per-degree elimination, a finite-window Hilbert-polynomial probe through
the leading-term staircase, homogenization, minimal-generator counts,
ideal quotients by the tag-variable method, zero-dimensional radicals by
squarefree minimal polynomials, and the degree-one part of the radical of
a homogeneous ideal (chart by chart).
"""

from __future__ import annotations

import functools
import heapq
from dataclasses import dataclass

import numpy as np

from . import exactla
from .poly import (DUAL, Poly, PreconditionError, Ring, RingMismatchError,
                   grevlex_key, monomial_index, monomials_of_degree,
                   monomials_up_to, widened_ring)


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"           # grevlex | grlex | lex | homprod
    priority: tuple | None = None   # variable positions, most significant first

    def key(self, exps):
        e = exps if self.priority is None else tuple(exps[i] for i in self.priority)
        if self.kind == "grevlex":
            return (sum(e), tuple(-x for x in reversed(e)))
        if self.kind == "grlex":
            return (sum(e), e)
        if self.kind == "lex":
            return e
        if self.kind == "homprod":
            # compare the non-hom part by grevlex first, then the hom exponent
            rest = e[1:]
            return (sum(rest), tuple(-x for x in reversed(rest)), e[0])
        raise ValueError(f"unknown order kind {self.kind!r}")

    def respects_degree(self):
        return self.kind in ("grevlex", "grlex")


GREVLEX = MonomialOrder("grevlex")
GRLEX = MonomialOrder("grlex")
LEX = MonomialOrder("lex")
HOMPROD = MonomialOrder("homprod")


class Ideal:
    """Finite generator list in a dual ring, with cached reduced Groebner
    bases per monomial order and cached per-degree spans."""

    __slots__ = ("ring", "gens", "mprimary_power", "_gb", "_deg")

    def __init__(self, ring, gens, mprimary_power=None):
        if ring.flavor != DUAL:
            raise RingMismatchError("ideals live in dual rings")
        clean = []
        for g in gens:
            if g.ring != ring:
                raise RingMismatchError("generator in the wrong ring")
            if not g.is_zero() and g not in clean:
                clean.append(g)
        self.ring = ring
        self.gens = tuple(clean)
        self.mprimary_power = mprimary_power
        self._gb = {}
        self._deg = {}

    def is_homogeneous(self):
        return all(g.is_homogeneous() for g in self.gens)

    def max_gen_degree(self):
        return max((g.degree() for g in self.gens), default=0)

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens, {self.ring})"


# ---------------------------------------------------------------------------
# division and Buchberger

class _GBData:
    __slots__ = ("terms", "lt", "ltmat", "invlc", "order", "p")

    def __init__(self, polys_terms, order, p, nvars):
        self.terms = []
        self.lt = []
        self.invlc = []
        self.order = order
        self.p = p
        for t in polys_terms:
            lt = max(t, key=order.key)
            self.terms.append(t)
            self.lt.append(lt)
            self.invlc.append(pow(t[lt], p - 2, p))
        if self.lt:
            self.ltmat = np.array(self.lt, dtype=np.int64)
        else:
            self.ltmat = np.zeros((0, nvars), dtype=np.int64)


def _nf_terms(fterms, gb: _GBData):
    """Remainder of division by the polynomials in gb (deterministic:
    always cancels the largest term, always by the first divisor)."""
    p = gb.p
    order = gb.order
    work = dict(fterms)
    out = {}
    ltmat = gb.ltmat
    have = ltmat.shape[0] > 0
    while work:
        m = max(work, key=order.key)
        c = work.pop(m)
        j = -1
        if have:
            hits = np.all(ltmat <= np.array(m, dtype=np.int64), axis=1)
            if hits.any():
                j = int(np.argmax(hits))
        if j < 0:
            out[m] = c
            continue
        shift = tuple(a - b for a, b in zip(m, gb.lt[j]))
        factor = c * gb.invlc[j] % p
        for e2, c2 in gb.terms[j].items():
            if e2 == gb.lt[j]:
                continue
            key = tuple(a + b for a, b in zip(e2, shift))
            v = (work.get(key, 0) - factor * c2) % p
            if v:
                work[key] = v
            elif key in work:
                del work[key]
    return out


def _monic(terms, order, p):
    lt = max(terms, key=order.key)
    inv = pow(terms[lt], p - 2, p)
    return {e: c * inv % p for e, c in terms.items()}


def _poly_sort_key(terms, order):
    return (order.key(max(terms, key=order.key)),
            tuple(sorted(terms.items())))


def buchberger(gen_terms, order, p, nvars):
    """Reduced Groebner basis of the ideal generated by the given term
    dicts; returns a list of term dicts, monic, sorted by leading term."""
    # seed: insert one by one, reducing against what is already there
    seed = [t for t in gen_terms if t]
    seed.sort(key=lambda t: _poly_sort_key(t, order))
    G = []
    for t in seed:
        h = _nf_terms(t, _GBData(G, order, p, nvars))
        if h:
            G.append(_monic(h, order, p))

    lts = [max(t, key=order.key) for t in G]

    def lcm(a, b):
        return tuple(max(x, y) for x, y in zip(a, b))

    heap = []
    pending = set()

    def push(i, j):
        m = lcm(lts[i], lts[j])
        heapq.heappush(heap, (order.key(m), i, j))
        pending.add((i, j))

    for j in range(len(G)):
        for i in range(j):
            push(i, j)

    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        m = lcm(lts[i], lts[j])
        # product criterion
        if all(a + b == c for a, b, c in zip(lts[i], lts[j], m)):
            continue
        # chain criterion
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if all(a <= b for a, b in zip(lts[k], m)):
                ik = (min(i, k), max(i, k))
                jk = (min(j, k), max(j, k))
                if ik not in pending and jk not in pending:
                    skip = True
                    break
        if skip:
            continue
        # S-polynomial
        s = {}
        for (t, lt) in ((G[i], lts[i]), (G[j], lts[j])):
            shift = tuple(a - b for a, b in zip(m, lt))
            sign = 1 if t is G[i] else -1
            for e, c in t.items():
                key = tuple(a + b for a, b in zip(e, shift))
                v = (s.get(key, 0) + sign * c) % p
                if v:
                    s[key] = v
                elif key in s:
                    del s[key]
        h = _nf_terms(s, _GBData(G, order, p, nvars))
        if h:
            h = _monic(h, order, p)
            G.append(h)
            lts.append(max(h, key=order.key))
            t = len(G) - 1
            for i2 in range(t):
                push(i2, t)

    # minimalize: keep leading terms not divisible by another kept one
    idx = sorted(range(len(G)), key=lambda i: order.key(lts[i]))
    kept = []
    for i in idx:
        if not any(all(a <= b for a, b in zip(lts[k], lts[i])) for k in kept):
            kept.append(i)
    # tail-reduce
    final = []
    kept_terms = [G[i] for i in kept]
    for pos in range(len(kept_terms)):
        others = kept_terms[:pos] + kept_terms[pos + 1:]
        h = _nf_terms(kept_terms[pos], _GBData(others, order, p, nvars))
        final.append(_monic(h, order, p))
        kept_terms[pos] = final[-1]
    final.sort(key=lambda t: order.key(max(t, key=order.key)))
    return final


def groebner_basis(ideal: Ideal, order: MonomialOrder = GREVLEX):
    """Reduced Groebner basis, cached per order."""
    if order in ideal._gb:
        return ideal._gb[order]
    if not ideal.gens:
        raise PreconditionError("Groebner basis of the zero ideal")
    ring = ideal.ring
    gen_terms = _prepared_generators(ideal)
    gb_terms = buchberger(gen_terms, order, ring.p, ring.nvars)
    gb = tuple(Poly(ring, t) for t in gb_terms)
    ideal._gb[order] = gb
    return gb


def _prepared_generators(ideal: Ideal):
    """Generator term dicts, pre-minimalized when a cheap certificate is
    available (homogeneous ideals degree by degree; m-primary ideals in a
    truncated power model).  The returned set generates the same ideal."""
    if len(ideal.gens) <= 12:
        return [dict(g.terms) for g in ideal.gens]
    if ideal.is_homogeneous():
        return [dict(g.terms) for g in minimal_generators(ideal)]
    if ideal.mprimary_power is not None:
        return [dict(g.terms)
                for g in minimalize_gens_mprimary(ideal.ring, ideal.gens,
                                                  ideal.mprimary_power)]
    return [dict(g.terms) for g in ideal.gens]


def normal_form(f: Poly, ideal: Ideal, order: MonomialOrder = GREVLEX):
    """Remainder of f modulo the reduced Groebner basis; linear in f."""
    if f.ring != ideal.ring:
        raise RingMismatchError("polynomial not in the ideal's ring")
    gb = groebner_basis(ideal, order)
    data = _GBData([g.terms for g in gb], order, ideal.ring.p, ideal.ring.nvars)
    return Poly(ideal.ring, _nf_terms(f.terms, data))


def ideal_contains(ideal: Ideal, f: Poly, order=GREVLEX):
    return normal_form(f, ideal, order).is_zero()


def ideal_equals(a: Ideal, b: Ideal, order=GREVLEX):
    """Ideal equality by mutual normal-form containment."""
    if a.ring != b.ring:
        return False
    return (all(ideal_contains(b, g, order) for g in a.gens)
            and all(ideal_contains(a, g, order) for g in b.gens))


# ---------------------------------------------------------------------------
# per-degree spans of homogeneous ideals

def _homog_vec(f, e):
    enum = monomials_of_degree(f.ring.nvars, e)
    idx = {m: i for i, m in enumerate(enum)}
    v = np.zeros(len(enum), dtype=np.int64)
    for exps, c in f.terms.items():
        v[idx[exps]] = c
    return v


@functools.lru_cache(maxsize=None)
def _shift_index(nvars, e, i):
    """Column map sending a degree-e monomial to its product with var i."""
    src = monomials_of_degree(nvars, e)
    dst = {m: k for k, m in enumerate(monomials_of_degree(nvars, e + 1))}
    out = np.empty(len(src), dtype=np.int64)
    for k, m in enumerate(src):
        lifted = list(m)
        lifted[i] += 1
        out[k] = dst[tuple(lifted)]
    return out


def _degree_data(ideal: Ideal, e):
    """Per-degree RREF data of a homogeneous ideal: for each degree d <= e,
    a canonical basis of I_d, its rank, the rank of T*_1 . I_{d-1}, and
    canonical new-generator rows."""
    if not ideal.is_homogeneous():
        raise PreconditionError("per-degree spans need a homogeneous ideal")
    cache = ideal._deg
    ring = ideal.ring
    p = ring.p
    nv = ring.nvars
    gens_by_deg = {}
    for g in ideal.gens:
        d = g.degree()
        if d == 0:
            raise PreconditionError("homogeneous ideal with a unit generator")
        gens_by_deg.setdefault(d, []).append(g)
    start = len(cache)
    for d in range(start, e + 1):
        width = len(monomials_of_degree(nv, d))
        inc = exactla.IncrementalRREF(width, p)
        if d > 0 and cache[d - 1]["rank"] > 0:
            prev = cache[d - 1]["rows"]
            for i in range(nv):
                idxmap = _shift_index(nv, d - 1, i)
                lifted = np.zeros((prev.shape[0], width), dtype=np.int64)
                lifted[:, idxmap] = prev
                inc.insert(lifted)
        mult_rank = inc.rank
        new_rows = np.zeros((0, width), dtype=np.int64)
        if d in gens_by_deg:
            gvecs = np.array([_homog_vec(g, d) for g in gens_by_deg[d]],
                             dtype=np.int64)
            residuals = inc.reduce(gvecs)
            new_rows, _ = exactla.rref(residuals, p)
            inc.insert(gvecs)
        rows, pivots = inc.snapshot()
        cache[d] = {"rows": rows, "pivots": pivots, "rank": inc.rank,
                    "mult_rank": mult_rank, "new_rows": new_rows}
    return cache[e]


def hf_graded_quotient(ideal: Ideal, e):
    """Hilbert function of T*/I at degree e (count of degree-e standard
    monomials, computed by per-degree elimination)."""
    data = _degree_data(ideal, e)
    return len(monomials_of_degree(ideal.ring.nvars, e)) - data["rank"]


def graded_piece(ideal: Ideal, e):
    """Canonical RREF basis of I_e over the degree-e monomial basis."""
    return _degree_data(ideal, e)["rows"]


def min_gens_by_degree(ideal: Ideal):
    """Number of minimal generators per degree: dim I_e - dim T*_1 I_{e-1}."""
    out = {}
    top = ideal.max_gen_degree()
    for e in range(top + 1):
        data = _degree_data(ideal, e)
        c = data["rank"] - data["mult_rank"]
        if c:
            out[e] = c
    return out


def minimal_generators(ideal: Ideal):
    """A minimal homogeneous generating set (canonical rows per degree)."""
    out = []
    ring = ideal.ring
    for e in range(ideal.max_gen_degree() + 1):
        data = _degree_data(ideal, e)
        enum = monomials_of_degree(ring.nvars, e)
        for row in data["new_rows"]:
            out.append(Poly(ring, {enum[i]: int(c)
                                   for i, c in enumerate(row) if c}))
    return out


def minimalize_gens_mprimary(ring, gens, power):
    """Prune a generating set of an m-primary ideal known to contain
    m^power.  Works degree group by degree group in the model R/m^(power+1);
    the Nakayama argument makes the certificate exact for m-primary ideals."""
    p = ring.p
    trunc = power  # keep degrees <= power
    idx = monomial_index(ring.nvars, trunc)
    width = len(idx)

    def vec(terms):
        v = np.zeros(width, dtype=np.int64)
        for e, c in terms.items():
            if sum(e) <= trunc:
                v[idx[e]] = c
        return v

    groups = {}
    for g in gens:
        o = g.order()
        if o is None:
            continue
        groups.setdefault(o, []).append(g)

    kept = []
    span = exactla.IncrementalRREF(width, p)

    def close_under_monomials(polys):
        """Insert all monomial multiples of the polys into the span."""
        for g in polys:
            o = g.order()
            base = {e: c for e, c in g.terms.items() if sum(e) <= trunc}
            rows = []
            for mu in monomials_up_to(ring.nvars, trunc - o):
                shifted = {}
                for e, c in base.items():
                    w = tuple(a + b for a, b in zip(e, mu))
                    if sum(w) <= trunc:
                        shifted[w] = c
                if shifted:
                    rows.append(vec(shifted))
            if rows:
                span.insert(np.array(rows, dtype=np.int64))

    enum = monomials_up_to(ring.nvars, trunc)
    for o in sorted(groups):
        vecs = np.array([vec(g.terms) for g in groups[o]], dtype=np.int64)
        residuals = span.reduce(vecs)
        rows, _ = exactla.rref(residuals, p)
        new = [Poly(ring, {enum[i]: int(c) for i, c in enumerate(r) if c})
               for r in rows]
        kept.extend(new)
        close_under_monomials(new)
    return kept


# ---------------------------------------------------------------------------
# staircase window for the Hilbert polynomial

def standard_monomial_counts(lt_exps, nvars, up_to):
    """Counts of monomials outside the monomial ideal generated by lt_exps,
    degree by degree up to up_to (breadth-first over the staircase)."""
    lt = np.array(sorted(lt_exps), dtype=np.int64)
    if lt.shape[0] and not lt.any(axis=1).all():
        return [0] * (up_to + 1)  # a unit leading term
    counts = []
    frontier = np.zeros((1, nvars), dtype=np.int64)
    for e in range(up_to + 1):
        if e > 0:
            if frontier.shape[0] == 0:
                counts.append(0)
                continue
            cand = np.repeat(frontier, nvars, axis=0)
            bump = np.tile(np.eye(nvars, dtype=np.int64), (frontier.shape[0], 1))
            cand = cand + bump
            cand = np.unique(cand, axis=0)
            if lt.shape[0]:
                inside = (cand[:, None, :] >= lt[None, :, :]).all(axis=2).any(axis=1)
                cand = cand[~inside]
            frontier = cand
        counts.append(frontier.shape[0])
    return counts


@dataclass(frozen=True)
class HilbertWindow:
    kind: str          # "constant" | "not-constant"
    constant: int | None
    window: int
    values: tuple

    def is_constant(self):
        return self.kind == "constant"


def hilbert_polynomial_constant(ideal: Ideal, order=GREVLEX):
    """Probe whether the Hilbert function of T*/I is eventually a constant.

    The Hilbert function is evaluated on the leading-term staircase up to
    degree (max GB degree + nvars + 2); the tail of nvars+1 values decides.
    The window is part of the result so a report can show what was checked.
    """
    if not ideal.is_homogeneous():
        raise PreconditionError("needs a homogeneous ideal")
    gb = groebner_basis(ideal, order)
    lts = [max(g.terms, key=order.key) for g in gb]
    nv = ideal.ring.nvars
    window = max(sum(l) for l in lts) + nv + 2
    values = standard_monomial_counts(lts, nv, window)
    tail = values[-(nv + 1):]
    if all(v == tail[0] for v in tail):
        return HilbertWindow("constant", tail[0], window, tuple(values))
    return HilbertWindow("not-constant", None, window, tuple(values))


# ---------------------------------------------------------------------------
# homogenization and dehomogenization

def _homogenize_terms(terms, degree):
    return {(degree - sum(e),) + e: c for e, c in terms.items()}


def homogenize_ideal(ideal: Ideal):
    """Homogenize with a fresh first variable: the generators are the
    homogenizations of a degree-respecting reduced Groebner basis, which
    form a Groebner basis of the homogenized ideal for the product order.
    The result is saturated with respect to the irrelevant maximal ideal."""
    gb = groebner_basis(ideal, GREVLEX)
    target = widened_ring(ideal.ring)
    gens = tuple(Poly(target, _homogenize_terms(g.terms, g.degree()))
                 for g in gb)
    out = Ideal(target, gens)
    out._gb[HOMPROD] = gens
    return out


def dehomogenize_chart(ideal: Ideal, position):
    """Set the variable at `position` to 1 and drop it from the ring."""
    ring = ideal.ring
    sub_indices = tuple(ix for k, ix in enumerate(ring.indices) if k != position)
    target = Ring(ring.p, ring.letter, sub_indices, ring.flavor, ring.budget)
    gens = []
    for g in ideal.gens:
        terms = {}
        for e, c in g.terms.items():
            w = tuple(x for k, x in enumerate(e) if k != position)
            terms[w] = (terms.get(w, 0) + c) % ring.p
        gens.append(Poly(target, terms))
    return Ideal(target, tuple(g for g in gens if not g.is_zero()))


def eliminate_variable(ideal: Ideal, position=0):
    """Contraction I \\cap k[other vars] via a lex elimination order."""
    ring = ideal.ring
    prio = (position,) + tuple(i for i in range(ring.nvars) if i != position)
    order = MonomialOrder("lex", prio)
    gb = groebner_basis(ideal, order)
    sub_indices = tuple(ix for k, ix in enumerate(ring.indices) if k != position)
    target = Ring(ring.p, ring.letter, sub_indices, ring.flavor, ring.budget)
    gens = []
    for g in gb:
        if all(e[position] == 0 for e in g.terms):
            gens.append(Poly(target, {
                tuple(x for k, x in enumerate(e) if k != position): c
                for e, c in g.terms.items()}))
    return Ideal(target, tuple(gens))


# ---------------------------------------------------------------------------
# quotients, intersections, saturation checks

def exact_divide(g: Poly, f: Poly):
    """Quotient g/f when f divides g exactly; raises otherwise."""
    ring = g.ring
    p = ring.p
    order = GREVLEX
    flt = max(f.terms, key=order.key)
    finv = pow(f.terms[flt], p - 2, p)
    work = dict(g.terms)
    q = {}
    while work:
        m = max(work, key=order.key)
        c = work[m]
        if not all(a >= b for a, b in zip(m, flt)):
            raise ValueError("division is not exact")
        shift = tuple(a - b for a, b in zip(m, flt))
        factor = c * finv % p
        q[shift] = factor
        for e2, c2 in f.terms.items():
            key = tuple(a + b for a, b in zip(e2, shift))
            v = (work.get(key, 0) - factor * c2) % p
            if v:
                work[key] = v
            elif key in work:
                del work[key]
    return Poly(ring, q)


def _tag_ring(ring):
    return Ring(ring.p, ring.letter, ring.indices + (max(ring.indices) + 1,),
                ring.flavor, ring.budget)


def _with_tag(f, tring, tag_exp=0):
    return Poly(tring, {e + (tag_exp,): c for e, c in f.terms.items()})


def _drop_tag(f, ring):
    return Poly(ring, {e[:-1]: c for e, c in f.terms.items()})


def intersect_ideals(a: Ideal, b: Ideal):
    """a \\cap b by the tag-variable trick: eliminate t from t a + (1-t) b."""
    if a.ring != b.ring:
        raise RingMismatchError("intersection needs a common ring")
    ring = a.ring
    tring = _tag_ring(ring)
    tpos = tring.nvars - 1
    gens = [_with_tag(g, tring, 1) for g in a.gens]
    for g in b.gens:
        gens.append(_with_tag(g, tring, 0) - _with_tag(g, tring, 1))
    big = Ideal(tring, tuple(gens))
    elim = eliminate_variable(big, tpos)
    return Ideal(ring, tuple(Poly(ring, g.terms) for g in elim.gens))


def ideal_quotient(ideal: Ideal, f: Poly):
    """(I : f) via intersection with (f) and exact division."""
    if f.ring != ideal.ring:
        raise RingMismatchError("divisor in the wrong ring")
    if f.is_zero():
        raise ValueError("quotient by the zero polynomial")
    if f.degree() == 0:
        return Ideal(ideal.ring, ideal.gens)
    inter = intersect_ideals(ideal, Ideal(ideal.ring, (f,)))
    gens = tuple(exact_divide(g, f) for g in inter.gens)
    return Ideal(ideal.ring, gens)


def saturation_wrt_irrelevant(ideal: Ideal):
    """(I : m) for the irrelevant maximal ideal, as an ideal."""
    parts = [ideal_quotient(ideal, v) for v in
             (ideal.ring.variables())]
    out = parts[0]
    for q in parts[1:]:
        out = intersect_ideals(out, q)
    return out


# ---------------------------------------------------------------------------
# zero-dimensional radicals

def _upoly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _upoly_monic(a, p):
    inv = pow(a[-1], p - 2, p)
    return [c * inv % p for c in a]


def _upoly_mod(a, b, p):
    a = a[:]
    db, inv = len(b) - 1, pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        f = a[-1] * inv % p
        sh = len(a) - 1 - db
        for i, c in enumerate(b):
            a[sh + i] = (a[sh + i] - f * c) % p
        _upoly_trim(a)
        if not a:
            break
    return a


def _upoly_gcd(a, b, p):
    a, b = _upoly_trim(a[:]), _upoly_trim(b[:])
    while b:
        a, b = b, _upoly_mod(a, b, p)
    return _upoly_monic(a, p) if a else []


def _upoly_derivative(a, p):
    return _upoly_trim([c * i % p for i, c in enumerate(a)][1:])


def _upoly_divide(a, b, p):
    q = [0] * (len(a) - len(b) + 1)
    a = a[:]
    db, inv = len(b) - 1, pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        f = a[-1] * inv % p
        sh = len(a) - 1 - db
        q[sh] = f
        for i, c in enumerate(b):
            a[sh + i] = (a[sh + i] - f * c) % p
        _upoly_trim(a)
    if a:
        raise ValueError("inexact univariate division")
    return q


def squarefree_part(a, p):
    """a / gcd(a, a'); valid in F_p while deg a < p."""
    if len(a) - 1 >= p:
        raise PreconditionError("degree must stay below the modulus")
    d = _upoly_derivative(a, p)
    if not d:
        raise PreconditionError("inseparable univariate polynomial")
    g = _upoly_gcd(a, d, p)
    if len(g) == 1:
        return _upoly_monic(a[:], p)
    return _upoly_monic(_upoly_divide(a, g, p), p)


def is_unit_ideal(ideal: Ideal, order=GREVLEX):
    gb = groebner_basis(ideal, order)
    return len(gb) == 1 and gb[0].degree() == 0


def is_zero_dimensional(ideal: Ideal, order=GREVLEX):
    """Finite vanishing set: every variable has a pure-power leading term."""
    gb = groebner_basis(ideal, order)
    nv = ideal.ring.nvars
    seen = [False] * nv
    for g in gb:
        lt = max(g.terms, key=order.key)
        nz = [i for i, e in enumerate(lt) if e]
        if len(nz) == 0:
            return True  # unit ideal
        if len(nz) == 1:
            seen[nz[0]] = True
    return all(seen)


def standard_monomials(ideal: Ideal, order=GREVLEX):
    """All monomials outside LT(I); requires a zero-dimensional ideal."""
    gb = groebner_basis(ideal, order)
    lts = [max(g.terms, key=order.key) for g in gb]
    nv = ideal.ring.nvars
    lt = np.array(lts, dtype=np.int64)
    out = []
    frontier = [tuple([0] * nv)]
    guard = 0
    limit = nv * max(sum(l) for l in lts) + 2
    while frontier:
        out.extend(frontier)
        guard += 1
        if guard > limit:
            raise PreconditionError("not zero-dimensional (staircase grows)")
        nxt = set()
        for m in frontier:
            for i in range(nv):
                w = list(m)
                w[i] += 1
                nxt.add(tuple(w))
        keep = []
        for m in sorted(nxt, key=grevlex_key):
            if not (lt <= np.array(m, dtype=np.int64)).all(axis=1).any():
                keep.append(m)
        frontier = keep
    out.sort(key=grevlex_key)
    return out


def zero_dim_radical(ideal: Ideal, order=GREVLEX):
    """Radical of a zero-dimensional affine ideal: adjoin the squarefree
    part of each variable's minimal polynomial (Seidenberg)."""
    if is_unit_ideal(ideal, order):
        return Ideal(ideal.ring, (ideal.ring.one(),))
    if not is_zero_dimensional(ideal, order):
        raise PreconditionError("ideal is not zero-dimensional")
    ring = ideal.ring
    p = ring.p
    std = standard_monomials(ideal, order)
    idx = {m: i for i, m in enumerate(std)}
    gbdata = _GBData([g.terms for g in groebner_basis(ideal, order)],
                     order, p, ring.nvars)

    def nf_vec(terms):
        r = _nf_terms(terms, gbdata)
        v = np.zeros(len(std), dtype=np.int64)
        for e, c in r.items():
            v[idx[e]] = c
        return v

    extra = []
    for i in range(ring.nvars):
        rows = []
        inc = exactla.IncrementalRREF(len(std), p)
        power = {tuple([0] * ring.nvars): 1}
        k = 0
        while True:
            v = nf_vec(power)
            before = inc.rank
            inc.insert(v.reshape(1, -1))
            if inc.rank == before:
                coeffs = exactla.solve_or_witness(
                    np.array(rows, dtype=np.int64).T, v, p)
                mp = [(-int(c)) % p for c in coeffs] + [1]
                break
            rows.append(v)
            k += 1
            bump = {}
            for e, c in power.items():
                w = list(e)
                w[i] += 1
                bump[tuple(w)] = c
            power = bump
        sf = squarefree_part(mp, p)
        terms = {}
        for j, c in enumerate(sf):
            if c:
                e = [0] * ring.nvars
                e[i] = j
                terms[tuple(e)] = c
        extra.append(Poly(ring, terms))
    return Ideal(ring, ideal.gens + tuple(extra))


# ---------------------------------------------------------------------------
# linear part of the radical of a homogeneous ideal

@dataclass(frozen=True)
class RadicalLinearPart:
    kind: str                  # "basis" | "positive-dimensional" | "empty-locus"
    basis: tuple               # linear Poly generators of (sqrt I)_1
    hilbert: HilbertWindow

    @property
    def dim(self):
        return len(self.basis)


def radical_linear_part(ideal: Ideal):
    """Degree-one part of sqrt(I) for homogeneous I.

    A finite staircase window classifies the Hilbert function of T*/I:
    a growing window means a positive-dimensional locus (enough for the
    membership pipelines); constant 0 means the empty projective locus
    (the linear part is all of degree one); a positive constant leads to
    chart-by-chart zero-dimensional radicals, and the linear part is cut
    out by the stacked normal-form conditions over the charts.
    """
    hp = hilbert_polynomial_constant(ideal)
    ring = ideal.ring
    if not hp.is_constant():
        return RadicalLinearPart("positive-dimensional", (), hp)
    if hp.constant == 0:
        return RadicalLinearPart("empty-locus", tuple(ring.variables()), hp)
    nv = ring.nvars
    blocks = []
    any_points = False
    for j in range(nv):
        chart = dehomogenize_chart(ideal, j)
        if is_unit_ideal(chart):
            continue
        if not is_zero_dimensional(chart):
            return RadicalLinearPart("positive-dimensional", (), hp)
        any_points = True
        rad = zero_dim_radical(chart)
        std = standard_monomials(rad)
        idx = {m: i for i, m in enumerate(std)}
        gbdata = _GBData([g.terms for g in groebner_basis(rad)],
                         GREVLEX, ring.p, rad.ring.nvars)
        block = np.zeros((len(std), nv), dtype=np.int64)
        for k in range(nv):
            if k == j:
                terms = {tuple([0] * rad.ring.nvars): 1}
            else:
                kk = k if k < j else k - 1
                e = [0] * rad.ring.nvars
                e[kk] = 1
                terms = {tuple(e): 1}
            r = _nf_terms(terms, gbdata)
            for e2, c in r.items():
                block[idx[e2], k] = c
        blocks.append(block)
    if not any_points:
        return RadicalLinearPart("empty-locus", tuple(ring.variables()), hp)
    stacked = np.vstack(blocks)
    kern = exactla.kernel_basis(stacked, ring.p)
    basis = []
    for v in kern:
        terms = {}
        for i, c in enumerate(v):
            if c:
                e = [0] * nv
                e[i] = 1
                terms[tuple(e)] = int(c)
        basis.append(Poly(ring, terms))
    return RadicalLinearPart("basis", tuple(basis), hp)
