"""Multivariate polynomials over F_p with a contraction (differentiation)
pairing between a dual ring and a primal ring.

Conventions
-----------
* Plain monomial basis everywhere internally.  A divided-power token
  ``x1^[k]`` is accepted by the parser and means ``x1^k / k!``; output is
  always printed in the plain basis.
* A ring is a frozen descriptor: prime, variable letter, index tuple and
  flavor (primal or dual).  The dual of x0..xn / y1..yn is a0..an / a1..an,
  paired variable-by-variable through the shared indices.
* Contraction acts as scaled partial differentiation:
  a^u . x^v = (v! / (v-u)!) x^(v-u) when v >= u componentwise, else 0.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass

import numpy as np

from . import exactla

PRIMAL = "primal"
DUAL = "dual"

DEFAULT_PRIME = 7919
DEFAULT_BUDGET = 40


class ParseError(ValueError):
    def __init__(self, message, line=1, col=1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class RingMismatchError(ValueError):
    pass


class PreconditionError(ValueError):
    """A documented precondition of an operation was violated."""


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Ring:
    p: int
    letter: str
    indices: tuple
    flavor: str
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if self.p >= exactla.MAX_PRIME:
            raise ValueError(f"prime {self.p} too large (limit {exactla.MAX_PRIME})")
        if self.p <= self.budget:
            raise ValueError("prime must exceed the degree budget")
        if self.flavor not in (PRIMAL, DUAL):
            raise ValueError(f"bad flavor {self.flavor!r}")
        if (self.flavor == DUAL) != (self.letter == "a"):
            raise ValueError("dual rings use letter 'a', primal rings do not")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("repeated variable index")

    @property
    def nvars(self):
        return len(self.indices)

    @property
    def names(self):
        return tuple(f"{self.letter}{i}" for i in self.indices)

    def dual(self):
        if self.flavor == DUAL:
            return self
        return Ring(self.p, "a", self.indices, DUAL, self.budget)

    def primal(self, letter="x"):
        if self.flavor == PRIMAL:
            return self
        return Ring(self.p, letter, self.indices, PRIMAL, self.budget)

    def variable(self, position):
        e = [0] * self.nvars
        e[position] = 1
        return Poly(self, {tuple(e): 1})

    def variables(self):
        return [self.variable(i) for i in range(self.nvars)]

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {(0,) * self.nvars: 1})

    def __repr__(self):
        return f"Ring(F{self.p}[{', '.join(self.names)}])"


def primal_ring(p=DEFAULT_PRIME, nvars=1, letter="x", start=0, budget=DEFAULT_BUDGET):
    return Ring(p, letter, tuple(range(start, start + nvars)), PRIMAL, budget)


def dual_ring(p=DEFAULT_PRIME, nvars=1, start=0, budget=DEFAULT_BUDGET):
    return Ring(p, "a", tuple(range(start, start + nvars)), DUAL, budget)


# factorial tables, one pair per (p, budget)
@functools.lru_cache(maxsize=None)
def _fact_tables(p, budget):
    fact = [1] * (budget + 1)
    for k in range(1, budget + 1):
        fact[k] = fact[k - 1] * k % p
    inv = [pow(f, p - 2, p) for f in fact]
    return tuple(fact), tuple(inv)


def factorial(k, ring):
    if k > ring.budget:
        raise PreconditionError(f"factorial {k}! exceeds degree budget {ring.budget}")
    return _fact_tables(ring.p, ring.budget)[0][k]


def inv_factorial(k, ring):
    if k > ring.budget:
        raise PreconditionError(f"factorial {k}! exceeds degree budget {ring.budget}")
    return _fact_tables(ring.p, ring.budget)[1][k]


# ---------------------------------------------------------------------------
# monomial enumeration (canonical column order: grevlex-descending)

def grevlex_key(exps):
    """Key such that bigger key means bigger monomial in grevlex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


@functools.lru_cache(maxsize=None)
def monomials_of_degree(nvars, d):
    """All exponent tuples of total degree d, grevlex-descending."""
    if nvars == 0:
        return ((),) if d == 0 else ()
    out = []

    def rec(prefix, rest, remaining):
        if rest == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), rest - 1, remaining - e)

    rec((), nvars, d)
    out.sort(key=grevlex_key, reverse=True)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def monomials_up_to(nvars, d):
    """All exponent tuples of degree <= d, grevlex-descending
    (degree descending, grevlex-descending within a degree)."""
    out = []
    for e in range(d, -1, -1):
        out.extend(monomials_of_degree(nvars, e))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def monomial_index(nvars, d):
    """Index map for monomials_up_to(nvars, d)."""
    return {m: i for i, m in enumerate(monomials_up_to(nvars, d))}


class Poly:
    """Immutable polynomial: ring plus {exponent tuple: coefficient}."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        clean = {}
        p = ring.p
        n = ring.nvars
        for e, c in terms.items():
            c %= p
            if c:
                if len(e) != n:
                    raise ValueError("exponent tuple has wrong length")
                clean[e] = c
        self.terms = clean

    # -- basic structure ----------------------------------------------------
    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def order(self):
        """Lowest total degree present; None for zero."""
        return min((sum(e) for e in self.terms), default=None)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, j):
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == j})

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        p = self.ring.p
        for e, c in other.terms.items():
            out[e] = (out.get(e, 0) + c) % p
        return Poly(self.ring, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        p = self.ring.p
        for e, c in other.terms.items():
            out[e] = (out.get(e, 0) - c) % p
        return Poly(self.ring, out)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c %= self.ring.p
        return Poly(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.ring.p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- presentation ---------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]),
                      reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    # -- conversions -----------------------------------------------------------
    def to_vector(self, d1):
        """Coefficient vector over monomials_up_to(nvars, d1)."""
        if self.degree() > d1:
            raise ValueError("polynomial exceeds the requested ambient degree")
        idx = monomial_index(self.ring.nvars, d1)
        v = np.zeros(len(idx), dtype=np.int64)
        for e, c in self.terms.items():
            v[idx[e]] = c
        return v

    @staticmethod
    def from_vector(ring, d1, vec):
        enum = monomials_up_to(ring.nvars, d1)
        return Poly(ring, {enum[i]: int(c) for i, c in enumerate(vec) if c})


def format_poly(f):
    if f.is_zero():
        return "0"
    p = f.ring.p
    names = f.ring.names
    parts = []
    for e, c in f.sorted_terms():
        signed = c if c <= p // 2 else c - p
        sign = "-" if signed < 0 else "+"
        mag = abs(signed)
        factors = [f"{names[i]}^{k}" if k > 1 else names[i]
                   for i, k in enumerate(e) if k]
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = str(mag) + "*" + "*".join(factors)
        parts.append((sign, body))
    sign0, body0 = parts[0]
    text = ("-" if sign0 == "-" else "") + body0
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"(?P<num>\d+)|(?P<var>[A-Za-z]\d+)|(?P<op>[-+*^\[\]−])")


def _tokenize(text, line):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "op" and val == "−":
            val = "-"
        out.append((kind, val, pos + 1))
        pos = m.end()
    return out


def _parse_term(toks, i, ring, line):
    name_pos = {n: k for k, n in enumerate(ring.names)}
    p = ring.p
    coeff = 1
    exps = [0] * ring.nvars
    seen = False

    if toks[i][0] == "num":
        coeff = int(toks[i][1]) % p
        i += 1
        seen = True
        if i < len(toks) and toks[i] [0] == "op" and toks[i][1] == "*":
            if i + 1 >= len(toks) or toks[i + 1][0] != "var":
                raise ParseError("expected variable after '*'", line, toks[i][2])
            i += 1

    while i < len(toks) and toks[i][0] == "var":
        vname, col = toks[i][1], toks[i][2]
        if vname not in name_pos:
            raise ParseError(f"unknown variable {vname!r}", line, col)
        vpos = name_pos[vname]
        i += 1
        k = 1
        divided = False
        if i < len(toks) and toks[i][0] == "op" and toks[i][1] == "^":
            i += 1
            if i < len(toks) and toks[i][0] == "op" and toks[i][1] == "[":
                divided = True
                i += 1
            if i >= len(toks) or toks[i][0] != "num":
                raise ParseError("expected exponent", line, col)
            k = int(toks[i][1])
            i += 1
            if divided:
                if i >= len(toks) or toks[i][1] != "]":
                    raise ParseError("expected closing bracket", line, col)
                i += 1
                if k > ring.budget:
                    raise ParseError(
                        f"divided power exceeds degree budget {ring.budget}",
                        line, col)
                coeff = coeff * inv_factorial(k, ring) % p
        exps[vpos] += k
        seen = True
        if i < len(toks) and toks[i][0] == "op" and toks[i][1] == "*":
            if i + 1 >= len(toks) or toks[i + 1][0] != "var":
                raise ParseError("expected variable after '*'", line, toks[i][2])
            i += 1

    if not seen:
        raise ParseError("expected a term", line, toks[i][2] if i < len(toks) else 1)
    if sum(exps) > ring.budget:
        raise ParseError(f"term degree exceeds budget {ring.budget}", line, 1)
    return i, coeff, tuple(exps)


def parse_poly(text, ring, line=1):
    """Parse one polynomial in the shared grammar.

    Terms are joined by + or -; a term is an optional integer
    coefficient, optional '*', and variable powers like ``x3^2`` or the
    divided form ``x3^[2]`` (meaning x3^2/2!).
    """
    toks = _tokenize(text, line)
    if not toks:
        raise ParseError("empty polynomial", line, 1)
    p = ring.p
    terms = {}
    i = 0
    first = True
    while i < len(toks):
        if not first and not (toks[i][0] == "op" and toks[i][1] in "+-"):
            raise ParseError("expected '+' or '-' between terms", line, toks[i][2])
        sign = 1
        while i < len(toks) and toks[i][0] == "op" and toks[i][1] in "+-":
            if toks[i][1] == "-":
                sign = -sign
            i += 1
        if i >= len(toks):
            raise ParseError("dangling sign", line, toks[-1][2])
        i, coeff, e = _parse_term(toks, i, ring, line)
        terms[e] = (terms.get(e, 0) + sign * coeff) % p
        first = False
    return Poly(ring, terms)


def parse_polys(text, ring):
    """One polynomial per nonblank line."""
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        if raw.strip():
            out.append(parse_poly(raw, ring, line=ln))
    if not out:
        raise ParseError("no polynomials in input", 1, 1)
    return out


def infer_ring(text, p=DEFAULT_PRIME, budget=DEFAULT_BUDGET, nvars=None,
               start=None, letter=None):
    """Guess the ring of a polynomial file from its variable tokens.

    Letters x/y are primal, a is dual.  Index range starts at 0 when an
    index-0 variable appears (or start=0 is forced), else at 1; nvars may
    widen the ring beyond the largest index used.
    """
    seen = re.findall(r"[A-Za-z]\d+", text)
    if not seen:
        raise ParseError("no variables found in input", 1, 1)
    letters = {s[0] for s in seen}
    if len(letters) > 1:
        raise ParseError(f"mixed variable letters {sorted(letters)}", 1, 1)
    lt = letter or letters.pop()
    if lt not in ("x", "y", "a"):
        raise ParseError(f"unsupported variable letter {lt!r}", 1, 1)
    idx = [int(s[1:]) for s in seen]
    if start is None:
        start = 0 if (min(idx) == 0 or lt == "x") else 1
        if lt == "y":
            start = 1
    if min(idx) < start:
        raise ParseError(f"variable index below ring start {start}", 1, 1)
    count = max(idx) - start + 1
    if nvars is not None:
        if nvars < count:
            raise ParseError("nvars smaller than the largest index used", 1, 1)
        count = nvars
    flavor = DUAL if lt == "a" else PRIMAL
    return Ring(p, lt, tuple(range(start, start + count)), flavor, budget)


# ---------------------------------------------------------------------------
# contraction

def contract(theta, f):
    """Contraction of a dual-ring element against a primal polynomial:
    a^u . x^v = (v!/(v-u)!) x^(v-u) when v >= u componentwise, else 0."""
    if theta.ring.flavor != DUAL or f.ring.flavor != PRIMAL:
        raise RingMismatchError("contract expects (dual, primal)")
    if theta.ring.indices != f.ring.indices or theta.ring.p != f.ring.p:
        raise RingMismatchError(f"{theta.ring} does not pair with {f.ring}")
    ring = f.ring
    p = ring.p
    fact, _ = _fact_tables(p, ring.budget)
    out = {}
    for u, cu in theta.terms.items():
        for v, cv in f.terms.items():
            w = []
            scale = 1
            ok = True
            for ui, vi in zip(u, v):
                if vi < ui:
                    ok = False
                    break
                w.append(vi - ui)
                if ui:
                    scale = scale * fact[vi] % p * pow(fact[vi - ui], p - 2, p) % p
            if ok:
                e = tuple(w)
                out[e] = (out.get(e, 0) + cu * cv % p * scale) % p
    return Poly(ring, out)


# ---------------------------------------------------------------------------
# subspaces

class Subspace:
    """Span of polynomials inside S_{<= d1}, kept as a canonical RREF basis
    over the grevlex-descending monomial enumeration."""

    __slots__ = ("ring", "d1", "rows", "pivots")

    def __init__(self, ring, d1, rows, pivots):
        self.ring = ring
        self.d1 = d1
        self.rows = rows
        self.pivots = pivots

    @classmethod
    def span(cls, polys, d1=None):
        polys = list(polys)
        if not polys:
            raise ValueError("empty spanning set; give the ring a zero poly instead")
        ring = polys[0].ring
        for f in polys:
            if f.ring != ring:
                raise RingMismatchError("mixed rings in span")
        maxdeg = max((f.degree() for f in polys), default=0)
        if d1 is None:
            d1 = max(maxdeg, 0)
        if maxdeg > d1:
            raise ValueError("ambient degree too small for the spanning set")
        mat = np.array([f.to_vector(d1) for f in polys], dtype=np.int64)
        rows, pivots = exactla.rref(mat, ring.p)
        return cls(ring, d1, rows, pivots)

    @property
    def dim(self):
        return self.rows.shape[0]

    def basis(self):
        return [Poly.from_vector(self.ring, self.d1, r) for r in self.rows]

    def contains(self, f):
        if f.ring != self.ring:
            raise RingMismatchError("wrong ring")
        if f.is_zero():
            return True
        if f.degree() > self.d1:
            return False
        v = f.to_vector(self.d1).reshape(1, -1)
        red = exactla.reduce_mod_rowspace(v, self.rows, self.pivots, self.ring.p)
        return not red.any()

    def with_ambient(self, d1):
        if d1 == self.d1:
            return self
        return Subspace.span(self.basis(), d1)

    def same_span(self, other):
        if self.ring != other.ring:
            return False
        d = max(self.d1, other.d1)
        a, b = self.with_ambient(d), other.with_ambient(d)
        return np.array_equal(a.rows, b.rows)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ring == other.ring
                and self.d1 == other.d1 and np.array_equal(self.rows, other.rows))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, d1={self.d1}, {self.ring})"


def as_subspace(x, d1=None):
    if isinstance(x, Subspace):
        return x if d1 is None else x.with_ambient(d1)
    return Subspace.span([x], d1)


def _map_subspace(w, func, d1=None):
    return Subspace.span([func(f) for f in w.basis()], d1)


# ---------------------------------------------------------------------------
# the degree-rescaling operator, re-homogenization, substitution

def triangle(d, x):
    """Rescale the degree-j part by (d-j)!: sum_j (d-j)! F_j.

    Accepts a Poly or a Subspace (basis-wise, then re-reduced).
    """
    if isinstance(x, Subspace):
        return _map_subspace(x, lambda f: triangle(d, f), d1=x.d1)
    f = x
    m = f.degree()
    if m > d:
        raise PreconditionError(f"triangle needs d >= deg f ({d} < {m})")
    if d > f.ring.budget:
        raise PreconditionError(f"degree {d} exceeds budget {f.ring.budget}")
    p = f.ring.p
    fact, _ = _fact_tables(p, f.ring.budget)
    return Poly(f.ring, {e: c * fact[d - sum(e)] % p for e, c in f.terms.items()})


def widened_ring(ring, letter="x"):
    """The ring with a fresh homogenization variable of index one below."""
    lo = min(ring.indices)
    if lo == 0:
        raise ValueError("ring already contains an index-0 variable")
    return Ring(ring.p, letter if ring.flavor == PRIMAL else "a",
                (lo - 1,) + ring.indices, ring.flavor, ring.budget)


def embed(f, target):
    """Reinterpret f inside a ring whose index set contains f's (same flavor)."""
    src = f.ring
    if src.flavor != target.flavor or src.p != target.p:
        raise RingMismatchError("embed needs matching flavor and prime")
    pos = {i: k for k, i in enumerate(target.indices)}
    try:
        table = [pos[i] for i in src.indices]
    except KeyError:
        raise RingMismatchError("target ring does not contain the source variables")
    out = {}
    for e, c in f.terms.items():
        w = [0] * target.nvars
        for k, ek in enumerate(e):
            w[table[k]] = ek
        out[tuple(w)] = c
    return Poly(target, out)


def embed_subspace(w, target, d1=None):
    return Subspace.span([embed(f, target) for f in w.basis()],
                         d1 if d1 is not None else w.d1)


def hom_extend(x, d2, d1=None, letter="x"):
    """Weighted re-homogenization: f = sum F_i maps to
    sum F_i x0^(d1+d2-i) / (d1+d2-i)!, homogeneous of degree d1+d2 in the
    ring widened by the new first variable.  Dimension is preserved on
    subspaces."""
    if isinstance(x, Subspace):
        if d1 is None:
            d1 = x.d1
        if d1 < 1:
            raise PreconditionError("ambient degree d1 must be >= 1")
        target_deg = d1 + d2
        return Subspace.span(
            [hom_extend(f, d2, d1, letter) for f in x.basis()], target_deg)
    f = x
    if d1 is None:
        d1 = max(f.degree(), 1)
    if d1 < 1 or d2 < 0:
        raise PreconditionError("need d1 >= 1 and d2 >= 0")
    if f.degree() > d1:
        raise PreconditionError("polynomial degree exceeds declared ambient d1")
    if d1 + d2 > f.ring.budget:
        raise PreconditionError(f"degree {d1 + d2} exceeds budget {f.ring.budget}")
    tring = widened_ring(f.ring, letter)
    p = tring.p
    _, invf = _fact_tables(p, tring.budget)
    out = {}
    for e, c in f.terms.items():
        k = d1 + d2 - sum(e)
        out[(k,) + e] = c * invf[k] % p
    return Poly(tring, out)


def linear_substitute(f, mat):
    """Substitute x_i -> sum_j mat[i][j] x_j and expand; composition obeys
    (f o M) o N = f o (M N)."""
    ring = f.ring
    n = ring.nvars
    m = np.asarray(mat, dtype=np.int64) % ring.p
    if m.shape != (n, n):
        raise ValueError("substitution matrix has wrong shape")
    if exactla.inverse(m, ring.p) is None:
        raise ValueError("singular substitution matrix")
    images = [Poly(ring, {tuple(int(k == j) for k in range(n)): int(m[i, j])
                          for j in range(n) if m[i, j]})
              for i in range(n)]
    # memoized powers of the variable images
    powers = [{0: ring.one()} for _ in range(n)]

    def power(i, k):
        store = powers[i]
        if k not in store:
            store[k] = power(i, k - 1) * images[i]
        return store[k]

    out = ring.zero()
    for e, c in f.terms.items():
        term = ring.one().scale(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def complete_to_basis(ell):
    """Invertible matrix C whose first row is ell's coefficient vector,
    filled greedily with standard basis vectors (deterministic)."""
    ring = ell.ring
    n = ring.nvars
    if ell.is_zero() or ell.degree() != 1:
        raise ValueError("need a nonzero linear form")
    c = np.zeros(n, dtype=np.int64)
    for e, v in ell.terms.items():
        if sum(e) != 1:
            raise ValueError("need a homogeneous linear form")
        c[e.index(1)] = v
    rows = [c]
    for i in range(n):
        cand = np.zeros(n, dtype=np.int64)
        cand[i] = 1
        trial = np.vstack(rows + [cand])
        if exactla.rank(trial, ring.p) == len(rows) + 1:
            rows.append(cand)
        if len(rows) == n:
            break
    return np.vstack(rows) % ring.p


def divisibility_order(ell, x):
    """Largest e with ell^e dividing x (a Poly or every member of a
    Subspace).  Computed by completing ell to a basis, substituting, and
    reading the minimal exponent of the new first coordinate."""
    if isinstance(x, Subspace):
        return min(divisibility_order(ell, f) for f in x.basis())
    f = x
    if f.is_zero():
        raise ValueError("divisibility order of the zero polynomial")
    ring = f.ring
    cmat = complete_to_basis(ell)
    cinv = exactla.inverse(cmat, ring.p)
    g = linear_substitute(f, cinv)
    return min(e[0] for e in g.terms)
