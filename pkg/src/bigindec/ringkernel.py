"""Exact arithmetic substrate: F_p coefficients, weighted-graded polynomials,
Groebner bases over free modules, syzygies, and ideal operations.

Everything is homogeneous for the ring's weights; non-homogeneous data is
rejected at construction time.  The monomial order is weighted
degree-reverse-lexicographic with the first declared variable largest, and
module orders refine it degree-first so that all computations proceed
degree by degree.  All basis computations use a fixed selection strategy
(S-pairs by degree, then insertion index) so results are reproducible.
"""

from __future__ import annotations

import heapq
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import HomogeneityError, RingMismatchError

Mono = tuple  # exponent vectors, one entry per ring variable


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Mono, b: Mono):
    """a / b, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


class GradedRing:
    """F_p[x_1..x_v]/I with positive weights and a fixed monomial order.

    ``ideal`` may be given as Polynomials over a previously built ring with
    the same variables (typically the free cover) or as raw term dicts
    {exponent tuple: coefficient}.
    """

    def __init__(self, char: int, variables: Sequence[str], weights=None, ideal=()):
        if not is_prime(char):
            raise ValueError(f"characteristic {char} is not prime")
        self.char = int(char)
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.nvars = len(self.variables)
        self.weights = tuple(weights) if weights is not None else (1,) * self.nvars
        if len(self.weights) != self.nvars or any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")
        gens = []
        for f in ideal:
            terms = f.terms if isinstance(f, Polynomial) else dict(f)
            poly = Polynomial(self, {tuple(m): c % self.char for m, c in terms.items() if c % self.char})
            if poly.is_zero():
                continue
            if not poly.is_homogeneous():
                raise HomogeneityError(f"ideal generator {poly} is not homogeneous")
            gens.append(poly)
        self.ideal_gens = tuple(gens)
        self._gb = None
        self._lead_set = None
        self._mono_cache = {}
        self._std_cache = {}
        self._krull = None

    # -- element construction ------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: 1})

    def const(self, c: int) -> "Polynomial":
        c %= self.char
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.variables.index(i)
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {mono: 1})

    def poly(self, terms: dict) -> "Polynomial":
        p = self.char
        return Polynomial(self, {tuple(m): c % p for m, c in terms.items() if c % p})

    def wdeg(self, mono: Mono) -> int:
        return sum(e * w for e, w in zip(mono, self.weights))

    def mono_key(self, mono: Mono):
        """Sort key; larger key = larger monomial (weighted grevlex)."""
        return (self.wdeg(mono), tuple(-mono[i] for i in range(self.nvars - 1, -1, -1)))

    # -- Groebner data ---------------------------------------------------------
    @property
    def groebner_basis(self):
        """Reduced Groebner basis of the defining ideal (over the free cover)."""
        if self._gb is None:
            handle = groebner_ideal(self, self.ideal_gens)
            self._gb = handle
            self._lead_set = tuple(g.lead_mono() for g in handle)
        return self._gb

    def lead_monomials(self):
        self.groebner_basis
        return self._lead_set

    def reduce(self, f: "Polynomial") -> "Polynomial":
        """Normal form of a representative modulo the defining ideal."""
        if not self.ideal_gens:
            return f
        return poly_normal_form(f, self.groebner_basis)

    def is_zero_mod(self, f: "Polynomial") -> bool:
        return self.reduce(f).is_zero()

    # -- monomial bases --------------------------------------------------------
    def monomials_of_degree(self, d: int):
        """All monomials of weighted degree d, descending in the order."""
        if d in self._mono_cache:
            return self._mono_cache[d]
        if d < 0:
            result = ()
        else:
            acc = []

            def rec(i, rem, partial):
                if i == self.nvars:
                    if rem == 0:
                        acc.append(tuple(partial))
                    return
                w = self.weights[i]
                for e in range(rem // w, -1, -1):
                    rec(i + 1, rem - e * w, partial + [e])

            rec(0, d, [])
            acc.sort(key=self.mono_key, reverse=True)
            result = tuple(acc)
        self._mono_cache[d] = result
        return result

    def std_monomials_of_degree(self, d: int):
        """Monomials of degree d not divisible by any initial-ideal lead."""
        if d in self._std_cache:
            return self._std_cache[d]
        leads = self.lead_monomials()
        result = tuple(
            m for m in self.monomials_of_degree(d)
            if not any(mono_div(m, l) is not None for l in leads)
        )
        self._std_cache[d] = result
        return result

    def hilbert_function(self, d: int) -> int:
        return len(self.std_monomials_of_degree(d))

    @property
    def krull_dim(self) -> int:
        if self._krull is None:
            self._krull = _monomial_dim(self.nvars, self.lead_monomials())
        return self._krull

    # -- misc -------------------------------------------------------------------
    def same_ring(self, other: "GradedRing"):
        if self is not other:
            raise RingMismatchError("operands belong to different rings")

    def __repr__(self):
        quot = f"/({', '.join(str(g) for g in self.ideal_gens)})" if self.ideal_gens else ""
        return f"GF({self.char})[{', '.join(self.variables)}]{quot}"


def _monomial_dim(nvars: int, leads) -> int:
    """Krull dimension of S/(monomial ideal): largest coordinate subspace
    avoiding the supports of all generators."""
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    if any(not s for s in supports):  # a unit lead: zero ring
        return -1
    best = 0
    for mask in range(1 << nvars):
        vs = frozenset(i for i in range(nvars) if mask >> i & 1)
        if len(vs) <= best:
            continue
        if all(not s <= vs for s in supports):
            best = len(vs)
    return best


class Polynomial:
    """Sparse homogeneous-friendly polynomial: {exponent tuple: coeff != 0}."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: GradedRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        degs = {self.ring.wdeg(m) for m in self.terms}
        return len(degs) <= 1

    def degree(self):
        """Weighted degree; None for 0, error when not homogeneous."""
        if not self.terms:
            return None
        degs = {self.ring.wdeg(m) for m in self.terms}
        if len(degs) > 1:
            raise HomogeneityError(f"{self} is not homogeneous")
        return degs.pop()

    def lead_mono(self) -> Mono:
        return max(self.terms, key=self.ring.mono_key)

    def lead_coeff(self) -> int:
        return self.terms[self.lead_mono()]

    def constant_coeff(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self.ring.same_ring(other.ring)
        p = self.ring.char
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    def __neg__(self) -> "Polynomial":
        p = self.ring.char
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.char
        c %= p
        if c == 0:
            return Polynomial(self.ring, {})
        return Polynomial(self.ring, {m: (v * c) % p for m, v in self.terms.items()})

    def mono_multiple(self, mono: Mono, coeff: int = 1) -> "Polynomial":
        p = self.ring.char
        coeff %= p
        if coeff == 0:
            return Polynomial(self.ring, {})
        return Polynomial(self.ring, {mono_mul(m, mono): (v * coeff) % p for m, v in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self.ring.same_ring(other.ring)
        p = self.ring.char
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = (out.get(m, 0) + c1 * c2) % p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial(self.ring, out)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.ring), frozenset(self.terms.items())))

    def __repr__(self):
        return poly_str(self)


def poly_str(f: Polynomial) -> str:
    """Canonical human-readable form: terms descending, symmetric coeffs."""
    if f.is_zero():
        return "0"
    ring = f.ring
    p = ring.char
    parts = []
    for m in sorted(f.terms, key=ring.mono_key, reverse=True):
        c = f.terms[m]
        sym = c - p if c > p // 2 else c
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(ring.variables[i])
            elif e > 1:
                factors.append(f"{ring.variables[i]}^{e}")
        mag = abs(sym)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        parts.append(("- " if sym < 0 else "+ ") + body)
    text = " ".join(parts)
    return "-" + text[2:] if text.startswith("- ") else text[2:]


# ---------------------------------------------------------------------------
# Free-module vectors: {(component, monomial): coeff}
# ---------------------------------------------------------------------------

def vec_from_polys(entries: Sequence[Polynomial]) -> dict:
    out = {}
    for i, f in enumerate(entries):
        for m, c in f.terms.items():
            out[(i, m)] = c
    return out


def vec_to_polys(ring: GradedRing, vec: dict, rank: int):
    cols = [dict() for _ in range(rank)]
    for (i, m), c in vec.items():
        cols[i][m] = c
    return [Polynomial(ring, t) for t in cols]


def vec_axpy(ring: GradedRing, target: dict, coeff: int, mono: Mono, src: dict):
    """target += coeff * mono * src (in place)."""
    p = ring.char
    for (i, m), c in src.items():
        key = (i, mono_mul(m, mono))
        v = (target.get(key, 0) + coeff * c) % p
        if v:
            target[key] = v
        else:
            target.pop(key, None)


def vec_scale(ring: GradedRing, vec: dict, coeff: int) -> dict:
    p = ring.char
    coeff %= p
    return {k: (c * coeff) % p for k, c in vec.items()} if coeff else {}


def vec_degree(ring: GradedRing, col_degs, vec: dict):
    """Common degree of a homogeneous vector; None for 0."""
    degs = {ring.wdeg(m) + col_degs[i] for (i, m) in vec}
    if not degs:
        return None
    if len(degs) > 1:
        raise HomogeneityError("vector is not homogeneous")
    return degs.pop()


class ModuleOrder:
    """Degree-first TOP order on a graded free module, with an optional
    elimination split: components >= ``elim_split`` are dominated by the
    leading block (used for syzygy bookkeeping columns)."""

    def __init__(self, ring: GradedRing, col_degs: Sequence[int], elim_split=None):
        self.ring = ring
        self.col_degs = tuple(col_degs)
        self.elim_split = elim_split

    def key(self, comp: int, mono: Mono):
        d = self.ring.wdeg(mono) + self.col_degs[comp]
        group = 1 if self.elim_split is None or comp < self.elim_split else 0
        return (group, d, self.ring.mono_key(mono), -comp)

    def lead(self, vec: dict):
        """(component, monomial, coeff) of the largest term."""
        comp, mono = max(vec, key=lambda k: self.key(*k))
        return comp, mono, vec[(comp, mono)]


class GroebnerModule:
    """Groebner basis of a submodule of a graded free module, with input
    cofactor tracking (for lifts) and zero-reduction syzygy collection.

    Deterministic: S-pairs are processed by (degree of lcm, i, j); the final
    basis is interreduced, monic, and sorted, hence unique for the order.
    """

    def __init__(self, ring: GradedRing, col_degs, vectors: Iterable[dict], order: ModuleOrder | None = None):
        self.ring = ring
        self.order = order or ModuleOrder(ring, col_degs)
        self.inputs = list(vectors)
        self.syzygies: list[dict] = []  # cofactor vectors over input indices
        self.basis: list[dict] = []
        self.cofs: list[dict] = []
        self._by_comp: dict = {}
        self._run()

    # cofactors live in a free module indexed by input positions; monomial
    # bookkeeping is the same dict shape {(idx, mono): coeff}.

    def _reduce(self, vec: dict, cof: dict):
        """Full normal form of (vec, cof) against the current basis."""
        ring, order = self.ring, self.order
        p = ring.char
        vec = dict(vec)
        cof = dict(cof)
        remainder: dict = {}
        while vec:
            comp, mono, coeff = order.lead(vec)
            hit = None
            for gi in self._by_comp.get(comp, ()):  # first match wins
                u = mono_div(mono, self._lead_mono[gi])
                if u is not None:
                    hit = (gi, u)
                    break
            if hit is None:
                remainder[(comp, mono)] = coeff
                del vec[(comp, mono)]
                continue
            gi, u = hit
            vec_axpy(ring, vec, p - coeff, u, self.basis[gi])
            vec_axpy(ring, cof, p - coeff, u, self.cofs[gi])
        return remainder, cof

    def _append(self, vec: dict, cof: dict):
        comp, mono, coeff = self.order.lead(vec)
        inv = pow(coeff, self.ring.char - 2, self.ring.char)
        vec = vec_scale(self.ring, vec, inv)
        cof = vec_scale(self.ring, cof, inv)
        idx = len(self.basis)
        self.basis.append(vec)
        self.cofs.append(cof)
        self._lead_mono.append(mono)
        self._lead_comp.append(comp)
        self._by_comp.setdefault(comp, []).append(idx)
        return idx

    def _pair_degree(self, i: int, j: int) -> int:
        l = mono_lcm(self._lead_mono[i], self._lead_mono[j])
        return self.ring.wdeg(l) + self.order.col_degs[self._lead_comp[i]]

    def _run(self):
        self._lead_mono: list[Mono] = []
        self._lead_comp: list[int] = []
        pairs: list = []
        for idx, vec in enumerate(self.inputs):
            if not vec:
                syz = {(idx, (0,) * self.ring.nvars): 1}
                self.syzygies.append(syz)
                continue
            cof = {(idx, (0,) * self.ring.nvars): 1}
            gi = self._append(vec, cof)
            for gj in range(gi):
                if self._lead_comp[gj] == self._lead_comp[gi]:
                    heapq.heappush(pairs, (self._pair_degree(gj, gi), gj, gi))
        while pairs:
            _, i, j = heapq.heappop(pairs)
            li, lj = self._lead_mono[i], self._lead_mono[j]
            l = mono_lcm(li, lj)
            ui = mono_div(l, li)
            uj = mono_div(l, lj)
            svec: dict = {}
            vec_axpy(self.ring, svec, 1, ui, self.basis[i])
            vec_axpy(self.ring, svec, self.ring.char - 1, uj, self.basis[j])
            scof: dict = {}
            vec_axpy(self.ring, scof, 1, ui, self.cofs[i])
            vec_axpy(self.ring, scof, self.ring.char - 1, uj, self.cofs[j])
            rem, cof = self._reduce(svec, scof)
            if rem:
                gi = self._append(rem, cof)
                for gj in range(gi):
                    if self._lead_comp[gj] == self._lead_comp[gi]:
                        heapq.heappush(pairs, (self._pair_degree(gj, gi), gj, gi))
            elif cof:
                self.syzygies.append(cof)
        self._interreduce()

    def _interreduce(self):
        order = self.order
        keep = []
        idx_sorted = sorted(range(len(self.basis)), key=lambda i: order.key(self._lead_comp[i], self._lead_mono[i]))
        kept_leads: list = []
        for i in idx_sorted:
            lead = (self._lead_comp[i], self._lead_mono[i])
            redundant = any(c == lead[0] and mono_div(lead[1], m) is not None for c, m in kept_leads)
            if not redundant:
                keep.append(i)
                kept_leads.append(lead)
        basis, cofs = [self.basis[i] for i in keep], [self.cofs[i] for i in keep]
        self.basis, self.cofs = basis, cofs
        self._lead_mono = [self._lead_mono[i] for i in keep]
        self._lead_comp = [self._lead_comp[i] for i in keep]
        self._by_comp = {}
        for pos, comp in enumerate(self._lead_comp):
            self._by_comp.setdefault(comp, []).append(pos)
        # tail-reduce each element by the others
        for pos in range(len(self.basis)):
            lead_key = (self._lead_comp[pos], self._lead_mono[pos])
            vec = dict(self.basis[pos])
            cof = dict(self.cofs[pos])
            coeff = vec.pop(lead_key)
            saved = self._by_comp
            self._by_comp = {c: [i for i in lst if i != pos] for c, lst in saved.items()}
            rem, cof = self._reduce(vec, cof)
            self._by_comp = saved
            rem[lead_key] = coeff
            self.basis[pos] = rem
            self.cofs[pos] = cof

    # -- public helpers ---------------------------------------------------------
    def normal_form(self, vec: dict):
        rem, _ = self._reduce(dict(vec), {})
        return rem

    def contains(self, vec: dict) -> bool:
        return not self.normal_form(vec)

    def express(self, vec: dict):
        """Cofactors of vec over the inputs, or None when not a member.

        vec == sum_i coeffs[i] * inputs[i] with coeffs in the cover ring.
        """
        rem, cof = self._reduce(dict(vec), {})
        if rem:
            return None
        p = self.ring.char
        return vec_scale(self.ring, cof, p - 1)


# ---------------------------------------------------------------------------
# Ring-level operations
# ---------------------------------------------------------------------------

def groebner_ideal(ring: GradedRing, gens: Sequence[Polynomial]):
    """Reduced Groebner basis (tuple of monic Polynomials) of an ideal in the
    free cover ring; callers pass I-augmented generators for quotient work."""
    for g in gens:
        if not g.is_homogeneous():
            raise HomogeneityError(f"generator {g} is not homogeneous")
    vectors = [vec_from_polys([g]) for g in gens if not g.is_zero()]
    gm = GroebnerModule(ring, (0,), vectors)
    polys = [vec_to_polys(ring, v, 1)[0] for v in gm.basis]
    return tuple(sorted(polys, key=lambda f: ring.mono_key(f.lead_mono())))


def poly_normal_form(f: Polynomial, gb: Sequence[Polynomial]) -> Polynomial:
    ring = f.ring
    p = ring.char
    work = dict(f.terms)
    remainder: dict = {}
    leads = [g.lead_mono() for g in gb]
    while work:
        mono = max(work, key=ring.mono_key)
        coeff = work.pop(mono)
        for g, lm in zip(gb, leads):
            u = mono_div(mono, lm)
            if u is not None:
                work[mono] = coeff
                fac = p - coeff  # gb is monic
                for m, c in g.terms.items():
                    key = mono_mul(m, u)
                    v = (work.get(key, 0) + fac * c) % p
                    if v:
                        work[key] = v
                    else:
                        work.pop(key, None)
                break
        else:
            remainder[mono] = coeff
    return Polynomial(ring, remainder)


class IdealHandle:
    """Homogeneous ideal of R = S/I; membership is normal form == 0 against
    the Groebner basis of (generators + defining ideal)."""

    def __init__(self, ring: GradedRing, generators: Sequence[Polynomial]):
        for g in generators:
            ring.same_ring(g.ring)
            if not g.is_homogeneous():
                raise HomogeneityError(f"ideal generator {g} is not homogeneous")
        self.ring = ring
        self.generators = tuple(ring.reduce(g) for g in generators)
        self._gb = None

    @property
    def groebner(self):
        if self._gb is None:
            self._gb = groebner_ideal(self.ring, tuple(g for g in self.generators if not g.is_zero()) + self.ring.ideal_gens)
        return self._gb

    def normal_form(self, f: Polynomial) -> Polynomial:
        self.ring.same_ring(f.ring)
        return poly_normal_form(f, self.groebner)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def is_unit(self) -> bool:
        return self.contains(self.ring.one())

    def is_proper(self) -> bool:
        return not self.is_unit()

    def is_zero(self) -> bool:
        return all(self.ring.is_zero_mod(g) for g in self.generators)

    def contains_ideal(self, other: "IdealHandle") -> bool:
        return all(self.contains(g) for g in other.generators)

    def equals(self, other: "IdealHandle") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def __repr__(self):
        return f"<ideal ({', '.join(str(g) for g in self.generators)})>"


def buchberger(gens: Sequence[Polynomial]) -> IdealHandle:
    """IdealHandle with its reduced Groebner basis forced."""
    if not gens:
        raise ValueError("need at least one generator (possibly zero)")
    ring = gens[0].ring
    handle = IdealHandle(ring, gens)
    handle.groebner
    return handle


def normal_form(f: Polynomial, handle: IdealHandle) -> Polynomial:
    return handle.normal_form(f)


def maximal_ideal(ring: GradedRing) -> IdealHandle:
    return IdealHandle(ring, [ring.var(i) for i in range(ring.nvars)])


def power_monomials(ring: GradedRing, n: int):
    """Monomials of exponent sum exactly n (generators of m^n), descending."""
    acc = []

    def rec(i, rem, partial):
        if i == ring.nvars:
            if rem == 0:
                acc.append(tuple(partial))
            return
        for e in range(rem, -1, -1):
            rec(i + 1, rem - e, partial + [e])

    rec(0, n, [])
    acc.sort(key=ring.mono_key, reverse=True)
    return tuple(acc)


def matrix_syzygies(ring: GradedRing, row_degs: Sequence[int], columns):
    """Generators of the syzygy module over R of the given columns.

    ``columns``: list of columns, each a list of Polynomials (one per row).
    Returns (syzygy columns, column degrees); each output column has one
    Polynomial per input column, reduced modulo the defining ideal.
    """
    ncols = len(columns)
    col_degs = []
    for col in columns:
        deg = None
        for i, f in enumerate(col):
            if f.is_zero():
                continue
            if not f.is_homogeneous():
                raise HomogeneityError("matrix entry is not homogeneous")
            d = f.degree() + row_degs[i]
            if deg is None:
                deg = d
            elif deg != d:
                raise HomogeneityError("matrix column mixes degrees")
        col_degs.append(deg if deg is not None else 0)
    vectors = [vec_from_polys(col) for col in columns]
    aug = []
    for g in ring.groebner_basis if ring.ideal_gens else ():
        for i in range(len(row_degs)):
            aug.append({(i, m): c for m, c in g.terms.items()})
    gm = GroebnerModule(ring, tuple(row_degs), vectors + aug)
    out = []
    out_degs = []
    order = ModuleOrder(ring, tuple(col_degs))
    for syz in gm.syzygies:
        col = [ring.zero()] * ncols
        deg = None
        for (idx, m), c in syz.items():
            if idx >= ncols:
                continue
            col[idx] = col[idx] + Polynomial(ring, {m: c})
            d = ring.wdeg(m) + col_degs[idx]
            deg = d if deg is None else deg
        col = [ring.reduce(f) for f in col]
        if all(f.is_zero() for f in col):
            continue
        vec = vec_from_polys(col)
        _, _, lc = order.lead(vec)
        if lc != 1:
            inv = pow(lc, ring.char - 2, ring.char)
            col = [f.scale(inv) for f in col]
        out.append(col)
        out_degs.append(deg)
    return out, out_degs, col_degs


def module_membership_gb(ring: GradedRing, row_degs, columns) -> GroebnerModule:
    """GroebnerModule of the column span plus the defining-ideal columns;
    ``express`` coefficients on the first ``len(columns)`` indices give the
    R-combination."""
    vectors = [vec_from_polys(col) for col in columns]
    aug = []
    for g in ring.groebner_basis if ring.ideal_gens else ():
        for i in range(len(row_degs)):
            aug.append({(i, m): c for m, c in g.terms.items()})
    return GroebnerModule(ring, tuple(row_degs), vectors + aug)


def ideal_quotient(I: IdealHandle, f: Polynomial) -> IdealHandle:
    """(I : f) over R."""
    ring = I.ring
    ring.same_ring(f.ring)
    if ring.is_zero_mod(f):
        return IdealHandle(ring, [ring.one()])
    columns = [[f]] + [[g] for g in I.generators if not g.is_zero()]
    syz, _, _ = matrix_syzygies(ring, (0,), columns)
    gens = [col[0] for col in syz if not col[0].is_zero()]
    if not gens:
        gens = [ring.zero()]
    return IdealHandle(ring, gens)


def ideal_intersection(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    ring = I.ring
    cols = [[ring.one(), ring.one()]]
    for g in I.generators:
        if not g.is_zero():
            cols.append([g, ring.zero()])
    for g in J.generators:
        if not g.is_zero():
            cols.append([ring.zero(), g])
    syz, _, _ = matrix_syzygies(ring, (0, 0), cols)
    gens = [col[0] for col in syz if not col[0].is_zero()]
    if not gens:
        gens = [ring.zero()]
    return IdealHandle(ring, gens)


def ideal_quotient_ideal(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    out = None
    for f in J.generators:
        if f.is_zero():
            continue
        q = ideal_quotient(I, f)
        out = q if out is None else ideal_intersection(out, q)
    if out is None:
        return IdealHandle(I.ring, [I.ring.one()])
    return out


def saturation(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """(I : J^infinity), by iterating the ideal quotient until stable."""
    I.ring.same_ring(J.ring)
    current = I
    while True:
        nxt = ideal_quotient_ideal(current, J)
        if current.contains_ideal(nxt):
            return current
        current = nxt


def is_m_primary(I: IdealHandle) -> bool:
    """True iff V(I) = {m}: I proper and dim R/I = 0, decided on the
    initial ideal (a pure power of every variable appears among the leads)."""
    if I.is_unit():
        return False
    leads = [g.lead_mono() for g in I.groebner]
    for i in range(I.ring.nvars):
        if not any(all(e == 0 for j, e in enumerate(m) if j != i) and m[i] > 0 for m in leads):
            return False
    return True


def krull_dimension(ring: GradedRing) -> int:
    return ring.krull_dim
