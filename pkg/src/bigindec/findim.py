"""Finite-dimensional k-algebra analysis over F_p.

The radical is the kernel of the trace form tr(L_x L_y), valid whenever
p > dim A (guarded); locality is decided on the semisimple quotient, and
non-local algebras yield an explicit idempotent, lifted through the radical
by the cubic Newton step e <- 3e^2 - 2e^3.  Algebras arrive either as raw
structure constants or as reductions End(M)/m^s End(M) of endomorphism
algebras.
"""

from __future__ import annotations

import random
from typing import Sequence

import numpy as np

from . import config
from .errors import AlgebraNotLocalError, CharacteristicGuardError
from .linalg import Span, inv_mod, nullspace, rank
from .modlib import (
    GradedModule,
    ModuleMap,
    length_and_hilbert,
    shifted,
)
from .ringkernel import Polynomial, power_monomials


# ---------------------------------------------------------------------------
# Univariate polynomial helpers over F_p (coefficient lists, ascending)
# ---------------------------------------------------------------------------

def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _padd(f, g, p):
    n = max(len(f), len(g))
    return _ptrim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def _pscale(f, c, p):
    c %= p
    return _ptrim([x * c % p for x in f])


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _ptrim(out)


def _pdivmod(f, g, p):
    f = list(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    inv = inv_mod(g[-1], p)
    while len(f) >= len(g) and f:
        c = f[-1] * inv % p
        d = len(f) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            f[d + i] = (f[d + i] - c * b) % p
        _ptrim(f)
    return _ptrim(q), f


def _pgcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        f, g = g, _pdivmod(f, g, p)[1]
    if f:
        f = _pscale(f, inv_mod(f[-1], p), p)
    return f


def _pmod_inv(f, mod, p):
    """Inverse of f modulo mod (assumes coprime)."""
    r0, r1 = list(mod), list(f)
    s0, s1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, _pscale(_pmul(q, s1, p), p - 1, p), p)
    inv = inv_mod(r0[-1] if r0 else 1, p)
    return _pscale(s0, inv, p)


def _ppow_mod(base, e, mod, p):
    result = [1]
    b = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, b, p), mod, p)[1]
        b = _pdivmod(_pmul(b, b, p), mod, p)[1]
        e >>= 1
    return result


def _pderiv(f, p):
    return _ptrim([(i * f[i]) % p for i in range(1, len(f))])


def coprime_split(f, p, rng: random.Random):
    """A factorization f = f1 * f2 with gcd(f1, f2) = 1, both nonconstant,
    or None when f is a power of a single irreducible of full degree...
    (i.e. no coprime split exists)."""
    f = _pscale(list(f), inv_mod(f[-1], p), p)
    if len(f) <= 2:
        return None
    sf = _pgcd(f, _pderiv(f, p), p)
    square_free = _pdivmod(f, sf, p)[0] if len(sf) > 1 else list(f)
    s = square_free
    if len(s) <= 2 and len(sf) > 1:
        # f = (irreducible)^e; no coprime split
        return None
    split = _squarefree_split(s, p, rng)
    if split is None:
        if len(sf) > 1:
            return None
        return None
    s1, _ = split
    # pull all f-factors dividing s1 into f1
    h = _ppow_mod(s1, len(f), f, p)
    f1 = _pgcd(f, h if h else [0], p)
    if len(f1) <= 1 or len(f1) >= len(f):
        # s1 itself may share no repeated structure; fall back to gcd power
        return None
    f2 = _pdivmod(f, f1, p)[0]
    return f1, f2


def _squarefree_split(s, p, rng: random.Random):
    """Coprime split of a monic squarefree nonconstant s, or None if
    irreducible."""
    n = len(s) - 1
    if n <= 1:
        return None
    x = [0, 1]
    # distinct-degree sieve
    w = list(x)
    for d in range(1, n // 2 + 1):
        w = _ppow_mod(w, p, s, p)
        g = _pgcd(_padd(w, _pscale(x, p - 1, p), p), s, p)
        if 1 < len(g) < len(s):
            return g, _pdivmod(s, g, p)[0]
        if len(g) == len(s):
            # product of irreducibles all of degree d
            if d == n:
                return None
            return _equal_degree_split(s, d, p, rng)
    return None


def _equal_degree_split(s, d, p, rng: random.Random):
    """Cantor-Zassenhaus split of a squarefree product of degree-d factors."""
    n = len(s) - 1
    exponent = (p ** d - 1) // 2
    for _ in range(128):
        r = [rng.randrange(p) for _ in range(n)]
        r = _ptrim(r)
        if len(r) <= 0:
            continue
        t = _ppow_mod(r, exponent, s, p)
        g = _pgcd(_padd(t, [p - 1], p), s, p)
        if 1 < len(g) < len(s):
            return g, _pdivmod(s, g, p)[0]
    raise AssertionError("equal-degree splitting failed repeatedly; check inputs")


# ---------------------------------------------------------------------------
# FinDimAlgebra
# ---------------------------------------------------------------------------

class FinDimAlgebra:
    """Associative unital algebra by a sparse multiplication table.

    ``pair_products[(a, b)]`` is a dict {c: coeff} giving e_a * e_b in the
    basis; missing pairs multiply to zero.  Associativity and the unit laws
    are validated on construction (sampled above a size cutoff).
    """

    def __init__(self, p: int, dim: int, pair_products: dict, unit, labels=None, validate=True, seed=None):
        self.p = p
        self.dim = dim
        self.pair_products = pair_products
        self.unit = np.array(unit, dtype=np.int64) % p
        self.labels = labels if labels is not None else list(range(dim))
        self._left_cache: dict = {}
        if validate:
            self._validate(seed if seed is not None else config.default_seed())

    @classmethod
    def from_structure(cls, p, table, unit, labels=None, validate=True):
        """table[a][b] = list/dict of coefficients of e_a e_b."""
        dim = len(table)
        pp = {}
        for a in range(dim):
            for b in range(dim):
                entry = table[a][b]
                if isinstance(entry, dict):
                    d = {c: v % p for c, v in entry.items() if v % p}
                else:
                    d = {c: v % p for c, v in enumerate(entry) if v % p}
                if d:
                    pp[(a, b)] = d
        return cls(p, dim, pp, unit, labels=labels, validate=validate)

    def mul(self, u, v):
        p = self.p
        out = np.zeros(self.dim, dtype=np.int64)
        un = np.nonzero(np.asarray(u) % p)[0]
        vn = np.nonzero(np.asarray(v) % p)[0]
        for a in un:
            ua = int(u[a]) % p
            for b in vn:
                prod = self.pair_products.get((int(a), int(b)))
                if not prod:
                    continue
                coeff = ua * (int(v[b]) % p) % p
                for c, val in prod.items():
                    out[c] = (out[c] + coeff * val) % p
        return out

    def basis_vector(self, a):
        v = np.zeros(self.dim, dtype=np.int64)
        v[a] = 1
        return v

    def left_mult_matrix(self, vec):
        p = self.p
        mat = np.zeros((self.dim, self.dim), dtype=np.int64)
        for b in range(self.dim):
            mat[:, b] = self.mul(vec, self.basis_vector(b))
        return mat % p

    def right_mult_matrix(self, vec):
        p = self.p
        mat = np.zeros((self.dim, self.dim), dtype=np.int64)
        for b in range(self.dim):
            mat[:, b] = self.mul(self.basis_vector(b), vec)
        return mat % p

    def power(self, vec, e):
        out = self.unit.copy()
        base = np.asarray(vec, dtype=np.int64) % self.p
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def _validate(self, seed):
        p = self.p
        for a in range(self.dim):
            ea = self.basis_vector(a)
            if not np.array_equal(self.mul(self.unit, ea), ea) or not np.array_equal(self.mul(ea, self.unit), ea):
                raise ValueError("unit laws fail on the basis")
        if self.dim <= config.ALGEBRA_VALIDATE_CUTOFF:
            triples = [(a, b, c) for a in range(self.dim) for b in range(self.dim) for c in range(self.dim)]
        else:
            rng = random.Random(seed)
            triples = [
                (rng.randrange(self.dim), rng.randrange(self.dim), rng.randrange(self.dim))
                for _ in range(config.ALGEBRA_VALIDATE_SAMPLES)
            ]
        for a, b, c in triples:
            ea, eb, ec = self.basis_vector(a), self.basis_vector(b), self.basis_vector(c)
            lhs = self.mul(self.mul(ea, eb), ec)
            rhs = self.mul(ea, self.mul(eb, ec))
            if not np.array_equal(lhs % p, rhs % p):
                raise ValueError(f"associativity fails on basis triple {(a, b, c)}")

    # -- radical ---------------------------------------------------------------
    def trace_vector(self):
        t = np.zeros(self.dim, dtype=np.int64)
        for (a, b), prod in self.pair_products.items():
            val = prod.get(b)
            if val:
                t[a] = (t[a] + val) % self.p
        return t

    def gram_matrix(self):
        p = self.p
        t = self.trace_vector()
        g = np.zeros((self.dim, self.dim), dtype=np.int64)
        for (a, b), prod in self.pair_products.items():
            acc = 0
            for c, val in prod.items():
                acc += val * int(t[c])
            g[a, b] = acc % p
        return g

    def radical_basis(self):
        """Rows spanning J(A); trace-form criterion, verified nilpotent and
        two-sided before returning."""
        if self.dim >= self.p:
            raise CharacteristicGuardError(
                f"dim A = {self.dim} >= p = {self.p}: raise the prime in the configuration"
            )
        jr = nullspace(self.gram_matrix(), self.p)
        self._check_ideal(jr)
        self._check_nilpotent(jr)
        return jr

    def _check_ideal(self, rows):
        span = Span(self.dim, self.p)
        for r in rows:
            span.add(r)
        for a in range(self.dim):
            ea = self.basis_vector(a)
            for r in rows:
                if not span.contains(self.mul(ea, r)) or not span.contains(self.mul(r, ea)):
                    raise AssertionError("trace-form radical is not a two-sided ideal")

    def _check_nilpotent(self, rows):
        current = [np.array(r, dtype=np.int64) for r in rows]
        for _ in range(self.dim + 1):
            if not current:
                return
            span = Span(self.dim, self.p)
            nxt = []
            for u in current:
                for r in rows:
                    w = self.mul(u, r)
                    if span.add(w):
                        nxt.append(w)
            current = nxt
        raise AssertionError("trace-form radical is not nilpotent")

    # -- quotients ---------------------------------------------------------------
    def quotient_by_ideal(self, ideal_rows, validate=False):
        """(quotient algebra, project fn, lift fn) for a two-sided ideal."""
        p = self.p
        span = Span(self.dim, p)
        for r in ideal_rows:
            span.add(r)
        pivot = set(span.pivots)
        free = [i for i in range(self.dim) if i not in pivot]

        def project(vec):
            res, _ = span.reduce(vec)
            return np.array([res[i] for i in free], dtype=np.int64)

        def lift(qvec):
            out = np.zeros(self.dim, dtype=np.int64)
            for val, pos in zip(qvec, free):
                out[pos] = val % p
            return out

        qdim = len(free)
        pp = {}
        for a in range(qdim):
            for b in range(qdim):
                prod = project(self.mul(lift(np.eye(qdim, dtype=np.int64)[a]), lift(np.eye(qdim, dtype=np.int64)[b])))
                entry = {c: int(v) for c, v in enumerate(prod) if v}
                if entry:
                    pp[(a, b)] = entry
        q = FinDimAlgebra(p, qdim, pp, project(self.unit), validate=validate)
        return q, project, lift

    # -- structure probes ----------------------------------------------------------
    def is_commutative(self) -> bool:
        for (a, b), prod in self.pair_products.items():
            other = self.pair_products.get((b, a), {})
            if prod != other:
                return False
        return True

    def center_rows(self):
        rows = []
        for a in range(self.dim):
            ea = self.basis_vector(a)
            diff = self.left_mult_matrix(ea) - self.right_mult_matrix(ea)
            rows.append(diff % self.p)
        stacked = np.vstack(rows) if rows else np.zeros((0, self.dim), dtype=np.int64)
        return nullspace(stacked, self.p)

    def minimal_polynomial(self, vec):
        """Monic minimal polynomial (ascending coefficients)."""
        p = self.p
        span = Span(self.dim, p, track=True)
        powers = [self.unit.copy()]
        span.add(self.unit)
        current = self.unit.copy()
        while True:
            current = self.mul(current, vec)
            combo = span.basis_coords(current)
            if combo is not None:
                d = len(powers)
                coeffs = [0] * (d + 1)
                coeffs[d] = 1
                for i, c in enumerate(combo):
                    coeffs[i] = (-int(c)) % p
                return coeffs
            span.add(current)
            powers.append(current.copy())

    def evaluate_poly(self, coeffs, vec):
        out = np.zeros(self.dim, dtype=np.int64)
        power = self.unit.copy()
        for i, c in enumerate(coeffs):
            if c % self.p:
                out = (out + (c % self.p) * power) % self.p
            if i + 1 < len(coeffs):
                power = self.mul(power, vec)
        return out


# ---------------------------------------------------------------------------
# Locality and idempotents
# ---------------------------------------------------------------------------

class LocalityResult:
    def __init__(self, local: bool, idempotent=None, radical_rows=None):
        self.local = local
        self.idempotent = idempotent
        self.radical_rows = radical_rows

    def __repr__(self):
        return "<local>" if self.local else "<idempotent found>"


def locality_and_idempotents(A: FinDimAlgebra, seed=None) -> LocalityResult:
    """Decide locality; when not local, return a verified nontrivial
    idempotent of A (lifted through the radical)."""
    p = A.p
    rng = random.Random(seed if seed is not None else config.default_seed())
    jrows = A.radical_basis()
    abar, project, lift = A.quotient_by_ideal(jrows)
    if abar.dim == 1:
        return LocalityResult(True, radical_rows=jrows)
    ebar = _semisimple_idempotent(abar, rng)
    if ebar is None:
        return LocalityResult(True, radical_rows=jrows)
    e = _lift_idempotent(A, lift(ebar))
    if not np.array_equal(A.mul(e, e) % p, e % p):
        raise AssertionError("idempotent lift failed to converge")
    if not e.any() or np.array_equal(e, A.unit):
        raise AssertionError("idempotent degenerated to 0 or 1 during the lift")
    return LocalityResult(False, idempotent=e, radical_rows=jrows)


def _semisimple_idempotent(abar: FinDimAlgebra, rng: random.Random):
    """Nontrivial idempotent of a semisimple algebra, or None if it is a
    (commutative) division algebra, i.e. a field."""
    p = abar.p
    center = abar.center_rows()
    if len(center) > 1:
        fixed = _frobenius_fixed(abar, center)
        if len(fixed) > 1:
            u = _nonscalar_vector(abar, fixed)
            e = _split_commutative_element(abar, u, rng)
            if e is not None:
                return e
        else:
            # single simple factor
            if len(center) == abar.dim:
                return None  # commutative single factor: a field
            return _random_idempotent_search(abar, rng)
    else:
        if abar.dim == 1:
            return None
        return _random_idempotent_search(abar, rng)
    # several factors but the splitting above failed; fall back to random
    return _random_idempotent_search(abar, rng)


def _frobenius_fixed(A: FinDimAlgebra, sub_rows):
    """Basis (rows, in A-coordinates) of {z in span(sub_rows): z^p = z};
    the subspace must be a commutative subalgebra containing 1."""
    p = A.p
    span = Span(A.dim, p, track=True)
    basis = []
    for r in sub_rows:
        if span.add(r):
            basis.append(np.array(r, dtype=np.int64))
    k = len(basis)
    frob = np.zeros((k, k), dtype=np.int64)
    for j, b in enumerate(basis):
        img = A.power(b, p)
        combo = span.basis_coords(img)
        if combo is None:
            raise AssertionError("Frobenius leaves the commutative subalgebra")
        frob[:, j] = combo
    fixed = nullspace((frob - np.eye(k, dtype=np.int64)) % p, p)
    return [(sum(int(c) * basis[i] for i, c in enumerate(row)) % p) for row in fixed]


def _nonscalar_vector(A: FinDimAlgebra, rows):
    span = Span(A.dim, A.p)
    span.add(A.unit)
    for r in rows:
        if not span.contains(r):
            return np.array(r, dtype=np.int64)
    raise AssertionError("subspace contained only scalars")


def _split_commutative_element(A: FinDimAlgebra, u, rng: random.Random):
    f = A.minimal_polynomial(u)
    split = coprime_split(f, A.p, rng)
    if split is None:
        return None
    f1, f2 = split
    inv = _pmod_inv(f2, f1, A.p)
    e_poly = _pmul(f2, inv, A.p)
    e = A.evaluate_poly(_pdivmod(e_poly, f, A.p)[1], u)
    if not e.any() or np.array_equal(e % A.p, A.unit):
        return None
    return e


def _random_idempotent_search(A: FinDimAlgebra, rng: random.Random, tries=256):
    for _ in range(tries):
        vec = np.array([rng.randrange(A.p) for _ in range(A.dim)], dtype=np.int64)
        e = _split_commutative_element(A, vec, rng)
        if e is not None and np.array_equal(A.mul(e, e) % A.p, e % A.p):
            return e
    raise AssertionError("no idempotent found in a semisimple non-division algebra")


def _lift_idempotent(A: FinDimAlgebra, e, max_iter=64):
    p = A.p
    e = np.array(e, dtype=np.int64) % p
    for _ in range(max_iter):
        e2 = A.mul(e, e)
        if np.array_equal(e2 % p, e % p):
            return e
        e3 = A.mul(e2, e)
        e = (3 * e2 - 2 * e3) % p
    raise AssertionError("idempotent lift did not stabilize")


# ---------------------------------------------------------------------------
# Degree-zero endomorphism algebra (dense, over the graded pieces)
# ---------------------------------------------------------------------------

class DegreeZeroEnd:
    """End_0(M): degree-preserving endomorphisms as a FinDimAlgebra.

    Representations are matrices on generators; two matrices are identified
    when their difference maps every generator into the relation submodule.
    """

    def __init__(self, M: GradedModule):
        ring = M.ring
        self.module = M
        self.ring = ring
        p = ring.char
        entries = []   # (i, j, mono)
        for i in range(M.ngens):
            for j in range(M.ngens):
                for u in ring.std_monomials_of_degree(M.gen_degs[j] - M.gen_degs[i]):
                    entries.append((i, j, u))
        self.entries = entries
        self.entry_index = {e: pos for pos, e in enumerate(entries)}
        width = len(entries)
        rows = []
        for rc in range(M.nrels):
            col = M.columns[rc]
            dc = M.col_degs[rc]
            piece = M.piece(dc)
            if piece.dim == 0:
                continue
            block = [[0] * width for _ in range(piece.dim)]
            for pos, (i, j, u) in enumerate(entries):
                f = col[j]
                if f.is_zero():
                    continue
                elem = [ring.zero()] * M.ngens
                elem[i] = ring.reduce(f.mono_multiple(u))
                cc = piece.coords(elem)
                for r, val in enumerate(cc):
                    if val:
                        block[r][pos] = val
            rows.extend(block)
        znull = nullspace(np.array(rows, dtype=np.int64), p) if rows else np.eye(width, dtype=np.int64)
        # trivial matrices: every column in the relation submodule
        bspan = Span(width, p, track=True)
        n_triv = 0
        for j in range(M.ngens):
            piece = M.piece(M.gen_degs[j])
            for rel_row in piece.rel_span.rows:
                vec = [0] * width
                for pos_amb, (u, i) in enumerate(piece.ambient_basis):
                    val = int(rel_row[pos_amb])
                    if val:
                        vec[self.entry_index[(i, j, u)]] = val
                if bspan.add(vec):
                    n_triv += 1
        reps = []
        for zvec in znull:
            if bspan.add([int(v) for v in zvec]):
                reps.append(np.array(zvec, dtype=np.int64))
        self._span = bspan
        self._n_triv = n_triv
        self.reps = reps
        self.dim = len(reps)
        self.width = width
        pp = {}
        for a in range(self.dim):
            ma = self.matrix_of(reps[a])
            for b in range(self.dim):
                mb = self.matrix_of(reps[b])
                prod = self._compose(ma, mb)
                coords = self.coords_of_matrix(prod)
                entry = {c: int(v) for c, v in enumerate(coords) if v}
                if entry:
                    pp[(a, b)] = entry
        unit = self.coords_of_matrix(_identity_matrix(M))
        self.algebra = FinDimAlgebra(p, self.dim, pp, unit, validate=(self.dim <= config.ALGEBRA_VALIDATE_CUTOFF))

    def matrix_of(self, wvec):
        ring = self.ring
        M = self.module
        mat = [[ring.zero() for _ in range(M.ngens)] for _ in range(M.ngens)]
        for pos, (i, j, u) in enumerate(self.entries):
            val = int(wvec[pos]) % ring.char
            if val:
                mat[i][j] = mat[i][j] + Polynomial(ring, {u: val})
        return mat

    def _compose(self, ma, mb):
        ring = self.ring
        g = self.module.ngens
        out = [[ring.zero() for _ in range(g)] for _ in range(g)]
        for i in range(g):
            for j in range(g):
                acc = ring.zero()
                for t in range(g):
                    a, b = ma[i][t], mb[t][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                out[i][j] = ring.reduce(acc)
        return out

    def _wcoords(self, mat):
        vec = [0] * self.width
        for i in range(self.module.ngens):
            for j in range(self.module.ngens):
                f = mat[i][j]
                for m, c in f.terms.items():
                    vec[self.entry_index[(i, j, m)]] = (vec[self.entry_index[(i, j, m)]] + c) % self.ring.char
        return vec

    def coords_of_matrix(self, mat):
        combo = self._span.basis_coords(self._wcoords(mat))
        if combo is None:
            raise AssertionError("matrix is not a degree-zero endomorphism")
        return [int(v) for v in combo[self._n_triv:]]

    def element_map(self, coords) -> ModuleMap:
        ring = self.ring
        M = self.module
        mat = [[ring.zero() for _ in range(M.ngens)] for _ in range(M.ngens)]
        for a, c in enumerate(coords):
            if int(c) % ring.char == 0:
                continue
            rep = self.matrix_of(self.reps[a])
            for i in range(M.ngens):
                for j in range(M.ngens):
                    mat[i][j] = mat[i][j] + rep[i][j].scale(int(c))
        mat = [[ring.reduce(f) for f in row] for row in mat]
        return ModuleMap(M, M, mat, check=False)


def _identity_matrix(M: GradedModule):
    ring = M.ring
    return [[ring.one() if i == j else ring.zero() for j in range(M.ngens)] for i in range(M.ngens)]


def degree_zero_end_algebra(M: GradedModule) -> DegreeZeroEnd:
    if "end0" not in M._cache:
        M._cache["end0"] = DegreeZeroEnd(M)
    return M._cache["end0"]


# ---------------------------------------------------------------------------
# Reductions End(M)/m^s End(M)
# ---------------------------------------------------------------------------

class EndReduction:
    """B/m^e B for an EndAlgebra B, as a FinDimAlgebra with coordinate maps.

    Basis elements are (block, hom-generator, standard monomial) triples,
    enumerated blockwise and degreewise; products come from the algebra's
    generator-level structure constants followed by graded-piece reduction.
    """

    def __init__(self, B, exponent: int):
        if exponent < 1:
            raise ValueError("reduction exponent must be >= 1")
        self.B = B
        self.exponent = exponent
        ring = B.ring
        p = ring.char
        self.blocks = self._block_keys()
        self.quot = {}
        self.basis = []  # (block, degree, piece_position)
        for bk in self.blocks:
            hom_mod = self._block_module(bk)
            q = _mod_power_quotient(hom_mod, exponent)
            data = length_and_hilbert(q)
            if not data.finite:
                raise AssertionError("End/m^e End must have finite length")
            degrees = sorted(d for d, v in data.table.items() if v)
            self.quot[bk] = (q, degrees)
            for d in degrees:
                piece = q.piece(d)
                for pos in range(piece.dim):
                    self.basis.append((bk, d, pos))
        self.index = {key: i for i, key in enumerate(self.basis)}
        self.dim = len(self.basis)
        pp = {}
        for a, (bk1, d1, pos1) in enumerate(self.basis):
            u = self._lift_coeffs(bk1, d1, pos1)
            for b, (bk2, d2, pos2) in enumerate(self.basis):
                if not self._composable(bk1, bk2):
                    continue
                v = self._lift_coeffs(bk2, d2, pos2)
                prod = self._compose_coeffs(u, v)
                coords = self.project_coeffs(prod)
                entry = {c: int(val) for c, val in enumerate(coords) if val}
                if entry:
                    pp[(a, b)] = entry
        unit = self.project_coeffs(dict(B.identity_coeffs()))
        self.algebra = FinDimAlgebra(
            p, self.dim, pp, unit,
            validate=(self.dim <= config.ALGEBRA_VALIDATE_CUTOFF),
        )

    # -- block plumbing ---------------------------------------------------------
    def _block_keys(self):
        if self.B.kind == "plain":
            return [None]
        r = len(self.B.parts)
        return [(i, j) for i in range(r) for j in range(r)]

    def _block_module(self, bk):
        if bk is None:
            return self.B.hom.module
        return self.B.homs[bk].module

    def _composable(self, bk1, bk2):
        if bk1 is None:
            return True
        return bk2[1] == bk1[0]

    def _label_block(self, label):
        if self.B.kind == "plain":
            return None
        return (label[0], label[1])

    def _label_gen(self, label):
        if self.B.kind == "plain":
            return label
        return label[2]

    def _lift_coeffs(self, bk, d, pos):
        """Basis element -> {algebra label: Polynomial} coefficients."""
        q, _ = self.quot[bk]
        piece = q.piece(d)
        elem = piece.lift([1 if t == pos else 0 for t in range(piece.dim)])
        out = {}
        for t, f in enumerate(elem):
            if f.is_zero():
                continue
            label = t if bk is None else (bk[0], bk[1], t)
            out[label] = f
        return out

    def _compose_coeffs(self, u: dict, v: dict) -> dict:
        ring = self.B.ring
        out: dict = {}
        for lu, cu in u.items():
            for lv, cv in v.items():
                struct = self.B.structure(lu, lv)
                if not struct:
                    continue
                w = cu * cv
                for lw, cw in struct.items():
                    acc = out.get(lw)
                    term = w * cw
                    out[lw] = term if acc is None else acc + term
        return {l: ring.reduce(c) for l, c in out.items() if not ring.reduce(c).is_zero()}

    def project_coeffs(self, coeffs: dict):
        """{label: Polynomial} -> coordinates in the reduction basis."""
        ring = self.B.ring
        p = ring.char
        out = np.zeros(self.dim, dtype=np.int64)
        per_block: dict = {}
        for label, c in coeffs.items():
            bk = self._label_block(label)
            per_block.setdefault(bk, {})[self._label_gen(label)] = c
        for bk, gen_coeffs in per_block.items():
            q, degrees = self.quot[bk]
            by_degree: dict = {}
            for t, c in gen_coeffs.items():
                gdeg = q.gen_degs[t]
                for m, val in c.terms.items():
                    d = ring.wdeg(m) + gdeg
                    by_degree.setdefault(d, {}).setdefault(t, {})[m] = val
            for d, gens in by_degree.items():
                piece = q.piece(d)
                if piece.dim == 0:
                    continue
                elem = [ring.zero()] * q.ngens
                for t, terms in gens.items():
                    elem[t] = Polynomial(ring, dict(terms))
                cc = piece.coords(elem)
                for pos, val in enumerate(cc):
                    if val:
                        out[self.index[(bk, d, pos)]] = (out[self.index[(bk, d, pos)]] + val) % p
        return out

    def project_map(self, phi) -> np.ndarray:
        return self.project_coeffs(self.B.express(phi))

    def lift_map(self, coords):
        """Coordinates -> a representative endomorphism coefficients dict."""
        ring = self.B.ring
        out: dict = {}
        for a, c in enumerate(coords):
            if int(c) % ring.char == 0:
                continue
            for label, f in self._lift_coeffs(*self.basis[a]).items():
                g = f.scale(int(c))
                out[label] = out.get(label, ring.zero()) + g
        return {l: ring.reduce(f) for l, f in out.items() if not ring.reduce(f).is_zero()}


def _mod_power_quotient(module: GradedModule, exponent: int) -> GradedModule:
    """module / m^exponent * module."""
    ring = module.ring
    cols = [list(c) for c in module.columns]
    for mono in power_monomials(ring, exponent):
        f = ring.reduce(Polynomial(ring, {mono: 1}))
        if f.is_zero():
            continue
        for t in range(module.ngens):
            col = [ring.zero()] * module.ngens
            col[t] = f
            cols.append(col)
    return GradedModule(ring, module.gen_degs, cols)


def reduce_mod_m(B, exponent: int) -> EndReduction:
    cache = getattr(B, "_reductions", None)
    if cache is None:
        cache = {}
        B._reductions = cache
    if exponent not in cache:
        cache[exponent] = EndReduction(B, exponent)
    return cache[exponent]


# ---------------------------------------------------------------------------
# Modules over finite-dimensional algebras
# ---------------------------------------------------------------------------

class FinDimModule:
    """Right module over a FinDimAlgebra: basis plus action matrices.

    ``action[a]`` is the matrix of v -> v * e_a on coordinates.
    """

    def __init__(self, algebra: FinDimAlgebra, action, validate=True):
        self.algebra = algebra
        self.p = algebra.p
        self.action = [np.array(m, dtype=np.int64) % self.p for m in action]
        self.dim = self.action[0].shape[0] if self.action else 0
        if validate:
            self._validate()

    def _validate(self):
        p = self.p
        unit_mat = sum(int(c) * self.action[a] for a, c in enumerate(self.algebra.unit) if c) % p
        if not np.array_equal(unit_mat % p, np.eye(self.dim, dtype=np.int64)):
            raise ValueError("unit does not act as the identity")
        for (a, b), prod in self.algebra.pair_products.items():
            lhs = (self.action[b] @ self.action[a]) % p
            rhs = np.zeros((self.dim, self.dim), dtype=np.int64)
            for c, val in prod.items():
                rhs = (rhs + val * self.action[c]) % p
            if not np.array_equal(lhs, rhs):
                raise ValueError("action matrices violate the structure constants")

    def act(self, vec, alg_vec):
        p = self.p
        mat = np.zeros((self.dim, self.dim), dtype=np.int64)
        for a, c in enumerate(np.asarray(alg_vec) % p):
            if c:
                mat = (mat + int(c) * self.action[a]) % p
        return (mat @ (np.asarray(vec) % p)) % p


def minimal_generators_over(A: FinDimAlgebra, V: FinDimModule, radical_rows=None):
    """(indices of V-basis vectors forming a minimal generating set, nu).

    A must be local; nu = dim_D V/VJ with D = A/J(A).  The returned basis
    vectors are selected greedily in basis order, so any prefix extends to a
    minimal generating set.
    """
    p = A.p
    if radical_rows is None:
        loc = locality_and_idempotents(A)
        if not loc.local:
            raise AlgebraNotLocalError("minimal generators require a local algebra")
        radical_rows = loc.radical_rows
    jspan = Span(A.dim, p)
    for r in radical_rows:
        jspan.add(r)
    d_dim = A.dim - jspan.dim
    # V J(A): image of every basis vector under every radical element
    vj = Span(V.dim, p)
    for r in radical_rows:
        mat = np.zeros((V.dim, V.dim), dtype=np.int64)
        for a, c in enumerate(np.asarray(r) % p):
            if c:
                mat = (mat + int(c) * V.action[a]) % p
        for b in range(V.dim):
            vj.add(mat[:, b])
    # lift a k-basis of D = A/J to A
    pivot = set(jspan.pivots)
    d_reps = []
    for i in range(A.dim):
        if i not in pivot:
            d_reps.append(A.basis_vector(i))
    assert len(d_reps) == d_dim
    selected = []
    span = Span(V.dim, p)
    for r in vj.rows:
        span.add(r)
    for b in range(V.dim):
        e = np.zeros(V.dim, dtype=np.int64)
        e[b] = 1
        if span.contains(e):
            continue
        selected.append(b)
        # the submodule e*A meets the span as e*D modulo VJ
        for d in d_reps:
            span.add(V.act(e, d))
    if span.dim != V.dim:
        raise AssertionError("greedy selection failed to generate the module")
    nu_k = V.dim - vj.dim
    if nu_k % d_dim:
        raise AssertionError("dim_k(V/VJ) is not a multiple of dim_k(D)")
    nu = nu_k // d_dim
    if len(selected) != nu:
        raise AssertionError("greedy generator count disagrees with nu")
    return selected, nu


def jacobson_containment(B, elements, exponent: int) -> bool:
    """True iff every element (coefficient dicts or coordinate vectors over
    the reduction of B mod m^exponent) lies in J(B/m^exponent B)."""
    red = reduce_mod_m(B, exponent)
    jrows = red.algebra.radical_basis()
    span = Span(red.dim, red.algebra.p)
    for r in jrows:
        span.add(r)
    for el in elements:
        coords = el if isinstance(el, np.ndarray) else red.project_coeffs(el)
        if not span.contains(coords):
            return False
    return True
