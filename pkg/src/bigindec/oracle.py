"""Independent brute-force verification paths.

Everything here recomputes Hom/Ext dimensions, splittings, and idempotents
by dense exact linear algebra on graded slices built straight from the raw
presentation data: degree-d slices of an ideal or relation submodule are
spanned by monomial multiples of the given generators.  No Groebner bases,
normal forms, or resolutions enter; agreement with the main path is
therefore meaningful evidence, not a tautology.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import SearchExhaustedError
from .findim import _pmod_inv, _pdivmod, _pmul, coprime_split
from .linalg import Span, rank, nullspace, solve
from .ringkernel import GradedRing, Polynomial, mono_mul, power_monomials


class TruncatedRingModel:
    """k-bases of R_d = S_d / I_d for d <= bound, from raw ideal generators."""

    def __init__(self, ring: GradedRing, bound: int):
        self.ring = ring
        self.bound = bound
        self._mono_index: dict = {}
        self._ispan: dict = {}
        self._free: dict = {}

    def _ensure(self, d: int):
        if d in self._free or d < 0:
            if d < 0:
                self._mono_index[d] = {}
                self._free[d] = []
            return
        ring = self.ring
        monos = ring.monomials_of_degree(d)
        index = {m: i for i, m in enumerate(monos)}
        span = Span(len(monos), ring.char)
        for g in ring.ideal_gens:
            gd = g.degree()
            for u in ring.monomials_of_degree(d - gd):
                vec = [0] * len(monos)
                for m, c in g.terms.items():
                    vec[index[mono_mul(m, u)]] = c
                span.add(vec)
        pivots = set(span.pivots)
        self._mono_index[d] = index
        self._ispan[d] = span
        self._free[d] = [i for i in range(len(monos)) if i not in pivots]

    def dim(self, d: int) -> int:
        self._ensure(d)
        return len(self._free[d])

    def basis_monomials(self, d: int):
        self._ensure(d)
        monos = self.ring.monomials_of_degree(d)
        return [monos[i] for i in self._free[d]]

    def poly_coords(self, f: Polynomial, d: int):
        """Coordinates of a degree-d polynomial in the R_d basis."""
        self._ensure(d)
        index = self._mono_index[d]
        vec = [0] * len(index)
        for m, c in f.terms.items():
            vec[index[m]] = c
        if d in self._ispan and self._ispan[d].dim:
            res, _ = self._ispan[d].reduce(vec)
        else:
            res = np.array(vec, dtype=np.int64)
        return [int(res[i]) for i in self._free[d]]

    def coords_poly(self, coords, d: int) -> Polynomial:
        self._ensure(d)
        monos = self.ring.monomials_of_degree(d)
        terms = {}
        for c, pos in zip(coords, self._free[d]):
            if int(c) % self.ring.char:
                terms[monos[pos]] = int(c) % self.ring.char
        return Polynomial(self.ring, terms)


class TruncatedModuleModel:
    """Graded slices of coker(columns) in a graded free module, as quotient
    spaces of the TruncatedRingModel slices."""

    def __init__(self, rmodel: TruncatedRingModel, gen_degs, columns):
        self.rmodel = rmodel
        self.ring = rmodel.ring
        self.gen_degs = tuple(gen_degs)
        self.columns = [tuple(col) for col in columns]
        self.col_degs = []
        for col in self.columns:
            deg = None
            for i, f in enumerate(col):
                if not f.is_zero():
                    deg = f.degree() + self.gen_degs[i]
                    break
            self.col_degs.append(deg)
        self._layout: dict = {}
        self._kspan: dict = {}
        self._free: dict = {}

    @classmethod
    def of_module(cls, rmodel, module):
        return cls(rmodel, module.gen_degs, [list(c) for c in module.columns])

    def _ambient(self, d: int):
        if d in self._layout:
            return self._layout[d]
        offs = []
        width = 0
        for b in self.gen_degs:
            offs.append(width)
            width += self.rmodel.dim(d - b)
        self._layout[d] = (offs, width)
        return self._layout[d]

    def ambient_dim(self, d: int) -> int:
        return self._ambient(d)[1]

    def element_ambient(self, element, d: int):
        """F0-slice coordinates of a degree-d element (tuple of polys)."""
        offs, width = self._ambient(d)
        vec = [0] * width
        for i, f in enumerate(element):
            if f.is_zero():
                continue
            cc = self.rmodel.poly_coords(f, d - self.gen_degs[i])
            for pos, val in enumerate(cc):
                vec[offs[i] + pos] = (vec[offs[i] + pos] + val) % self.ring.char
        return vec

    def _ensure_k(self, d: int):
        if d in self._kspan:
            return
        offs, width = self._ambient(d)
        span = Span(width, self.ring.char)
        for col, cdeg in zip(self.columns, self.col_degs):
            if cdeg is None:
                continue
            for u in self.ring.monomials_of_degree(d - cdeg):
                moved = tuple(f.mono_multiple(u) for f in col)
                span.add(self.element_ambient(moved, d))
        pivots = set(span.pivots)
        self._kspan[d] = span
        self._free[d] = [i for i in range(width) if i not in pivots]

    def dim(self, d: int) -> int:
        self._ensure_k(d)
        return len(self._free[d])

    def coords(self, element, d: int):
        """Quotient coordinates of a degree-d element."""
        self._ensure_k(d)
        vec = self.element_ambient(element, d)
        res, _ = self._kspan[d].reduce(vec)
        return [int(res[i]) for i in self._free[d]]

    def lift(self, coords, d: int):
        self._ensure_k(d)
        offs, width = self._ambient(d)
        ring = self.ring
        element = [ring.zero() for _ in range(len(self.gen_degs))]
        for c, pos in zip(coords, self._free[d]):
            c = int(c) % ring.char
            if not c:
                continue
            gen = 0
            while gen + 1 < len(offs) and offs[gen + 1] <= pos:
                gen += 1
            local = pos - offs[gen]
            mono = self.rmodel.basis_monomials(d - self.gen_degs[gen])[local]
            element[gen] = element[gen] + Polynomial(ring, {mono: c})
        return tuple(element)

    def variable_action(self, v: int, d: int):
        """Matrix of x_v: slice_d -> slice_{d+w}, on quotient coordinates."""
        ring = self.ring
        w = ring.weights[v]
        cols = []
        for b in range(self.dim(d)):
            elem = self.lift([1 if t == b else 0 for t in range(self.dim(d))], d)
            moved = tuple(ring.var(v) * f for f in elem)
            cols.append(self.coords(moved, d + w))
        mat = np.zeros((self.dim(d + w), self.dim(d)), dtype=np.int64)
        for b, col in enumerate(cols):
            mat[:, b] = col
        return mat

    def mono_action(self, mono, d: int):
        """Matrix of multiplication by a monomial on quotient coordinates."""
        mat = np.eye(self.dim(d), dtype=np.int64)
        cur = d
        for v, e in enumerate(mono):
            for _ in range(e):
                mat = self.variable_action(v, cur) @ mat % self.ring.char
                cur += self.ring.weights[v]
        return mat


class SubmoduleModel:
    """Graded slices of the span of columns inside a graded free module,
    with coordinates on an explicit slice basis (for intertwiner solves)."""

    def __init__(self, rmodel: TruncatedRingModel, gen_degs, columns):
        self.rmodel = rmodel
        self.ring = rmodel.ring
        self.gen_degs = tuple(gen_degs)
        self.columns = [tuple(col) for col in columns]
        self.free = TruncatedModuleModel(rmodel, gen_degs, [])
        self.col_degs = []
        for col in self.columns:
            deg = None
            for i, f in enumerate(col):
                if not f.is_zero():
                    deg = f.degree() + self.gen_degs[i]
                    break
            self.col_degs.append(deg)
        self._span: dict = {}

    def _ensure(self, d: int):
        if d in self._span:
            return
        width = self.free.ambient_dim(d)
        span = Span(width, self.ring.char, track=True)
        for col, cdeg in zip(self.columns, self.col_degs):
            if cdeg is None:
                continue
            for u in self.ring.monomials_of_degree(d - cdeg):
                moved = tuple(f.mono_multiple(u) for f in col)
                span.add(self.free.element_ambient(moved, d))
        self._span[d] = span

    def dim(self, d: int) -> int:
        self._ensure(d)
        return self._span[d].dim

    def basis_ambient(self, d: int):
        self._ensure(d)
        return self._span[d].rows

    def coords(self, ambient_vec, d: int):
        """Coordinates on the slice basis, or None when outside."""
        self._ensure(d)
        return self._span[d].basis_coords(ambient_vec)


def _module_data(module):
    return module.gen_degs, [list(c) for c in module.columns]


def oracle_ext_dim(M, n: int) -> int:
    """dim_k Ext^1(M, R/m^n), via dim Hom(K, T) - rank(Hom(F0, T) -> .),
    where K = im(F1) from the presentation only."""
    ring = M.ring
    gen_degs, columns = _module_data(M)
    t_cols = [[Polynomial(ring, {mono: 1})] for mono in power_monomials(ring, n)]
    max_need = 2 * (max([n] + [d for d in gen_degs]) + n + 4)
    rmodel = TruncatedRingModel(ring, max_need)
    tmodel = TruncatedModuleModel(rmodel, (0,), t_cols)
    kmodel = SubmoduleModel(rmodel, gen_degs, columns)
    # T support
    t_support = []
    d = 0
    while True:
        dim = tmodel.dim(d)
        if dim:
            t_support.append(d)
        elif d > n * max(ring.weights) + 1:
            break
        d += 1
    if not t_support:
        return 0
    top_t = t_support[-1]
    if tmodel.dim(top_t + 1) or tmodel.dim(top_t + 2):
        raise SearchExhaustedError("truncation bound violated: top degrees do not vanish")
    col_degs = [cd for cd in kmodel.col_degs if cd is not None]
    if not col_degs:
        return 0
    min_k = min(col_degs)
    total = 0
    for e in range(t_support[0] - top_t - 1, top_t - min_k + 1):
        total += _ext_dim_one_degree(ring, kmodel, tmodel, gen_degs, min_k, top_t, e)
    return total


def _ext_dim_one_degree(ring, kmodel, tmodel, gen_degs, min_k, top_t, e):
    p = ring.char
    ds = [d for d in range(min_k, top_t - e + 1) if kmodel.dim(d) and tmodel.dim(d + e)]
    if not ds:
        return 0
    offs = {}
    width = 0
    for d in ds:
        offs[d] = width
        width += kmodel.dim(d) * tmodel.dim(d + e)

    def unknown(d, b, r):
        # value coordinate r of phi(kappa_b) for kappa_b in K_d
        return offs[d] + b * tmodel.dim(d + e) + r

    rows = []
    for d in ds:
        kd = kmodel.dim(d)
        for v in range(ring.nvars):
            w = ring.weights[v]
            d2 = d + w
            t2 = tmodel.dim(d2 + e)
            if t2 == 0 and kmodel.dim(d2) == 0:
                continue
            if t2 == 0:
                continue
            act = tmodel.variable_action(v, d + e) if tmodel.dim(d + e) else None
            for b in range(kd):
                amb = kmodel.basis_ambient(d)[b]
                moved = _ambient_var_mult(ring, kmodel.free, gen_degs, amb, d, v)
                gamma = kmodel.coords(moved, d2)
                if gamma is None:
                    raise AssertionError("submodule slice not closed under the variables")
                # one equation per target coordinate r
                for r in range(t2):
                    row = [0] * width
                    if d2 in offs:
                        for c, val in enumerate(gamma):
                            val = int(val) % p
                            if val:
                                row[unknown(d2, c, r)] = val
                    if act is not None:
                        for s in range(tmodel.dim(d + e)):
                            val = int(act[r, s]) % p
                            if val:
                                row[unknown(d, b, s)] = (row[unknown(d, b, s)] - val) % p
                    if any(row):
                        rows.append(row)
    mat = np.array(rows, dtype=np.int64) if rows else np.zeros((0, width), dtype=np.int64)
    dim_sol = width - rank(mat, p)
    # restriction of Hom(F0, T): basis (generator i, T-basis vector at b_i + e)
    restr = Span(width, p)
    restr_rank = 0
    sol_span = None
    for i, b_i in enumerate(gen_degs):
        tdim = tmodel.dim(b_i + e)
        for t_idx in range(tdim):
            vec = [0] * width
            tvec = np.zeros(tdim, dtype=np.int64)
            tvec[t_idx] = 1
            for d in ds:
                kd = kmodel.dim(d)
                t_target = tmodel.dim(d + e)
                if not t_target:
                    continue
                for b in range(kd):
                    amb = kmodel.basis_ambient(d)[b]
                    value = _apply_f0_hom(ring, kmodel.free, tmodel, gen_degs, amb, d, i, b_i, tvec, e)
                    for r, val in enumerate(value):
                        if val:
                            vec[unknown(d, b, r)] = int(val) % p
            if restr.add(vec):
                restr_rank += 1
    return dim_sol - restr_rank


def _ambient_var_mult(ring, free_model, gen_degs, ambient_vec, d, v):
    """Multiply an ambient slice vector by x_v, returning an ambient vector
    of degree d + w."""
    elem = _ambient_to_element(ring, free_model, gen_degs, ambient_vec, d)
    moved = tuple(ring.var(v) * f for f in elem)
    return free_model.element_ambient(moved, d + ring.weights[v])


def _ambient_to_element(ring, free_model, gen_degs, ambient_vec, d):
    offs, width = free_model._ambient(d)
    element = [ring.zero() for _ in range(len(gen_degs))]
    for i, b in enumerate(gen_degs):
        monos = free_model.rmodel.basis_monomials(d - b)
        for loc, mono in enumerate(monos):
            c = int(ambient_vec[offs[i] + loc]) % ring.char
            if c:
                element[i] = element[i] + Polynomial(ring, {mono: c})
    return tuple(element)


def _apply_f0_hom(ring, free_model, tmodel, gen_degs, ambient_vec, d, gen_i, b_i, tvec, e):
    """Value in T_{d+e} of the Hom(F0,T) basis element (gen_i -> tvec)
    applied to a degree-d ambient vector."""
    elem = _ambient_to_element(ring, free_model, gen_degs, ambient_vec, d)
    f = elem[gen_i]
    if f.is_zero():
        return np.zeros(tmodel.dim(d + e), dtype=np.int64)
    out = np.zeros(tmodel.dim(d + e), dtype=np.int64)
    for mono, c in f.terms.items():
        act = tmodel.mono_action(mono, b_i + e)
        out = (out + c * (act @ tvec)) % ring.char
    return out


# ---------------------------------------------------------------------------
# Splitting search
# ---------------------------------------------------------------------------

def oracle_split_search(S):
    """Exhaustive degree-zero section solve on the dense models.

    Returns ("found", sigma-matrix) or ("none", None); sound and complete
    since all constraints live in finitely many graded slices.
    """
    X, M = S.middle, S.right
    ring = X.ring
    p = ring.char
    bound = max([0] + list(M.gen_degs) + list(M.col_degs) + list(X.gen_degs)) + 2
    rmodel = TruncatedRingModel(ring, bound)
    xmodel = TruncatedModuleModel.of_module(rmodel, X)
    mmodel = TruncatedModuleModel.of_module(rmodel, M)
    entries = []
    for i in range(X.ngens):
        for j in range(M.ngens):
            for u in rmodel.basis_monomials(M.gen_degs[j] - X.gen_degs[i]):
                entries.append((i, j, u))
    width = len(entries)
    rows, rhs = [], []
    for rc in range(M.nrels):
        col = M.columns[rc]
        dc = M.col_degs[rc]
        dim_t = xmodel.dim(dc)
        if dim_t == 0:
            continue
        block = [[0] * width for _ in range(dim_t)]
        for pos, (i, j, u) in enumerate(entries):
            f = col[j]
            if f.is_zero():
                continue
            elem = [ring.zero()] * X.ngens
            elem[i] = f.mono_multiple(u)
            for r, val in enumerate(xmodel.coords(elem, dc)):
                if val:
                    block[r][pos] = val
        rows.extend(block)
        rhs.extend([0] * dim_t)
    for j in range(M.ngens):
        dj = M.gen_degs[j]
        dim_t = mmodel.dim(dj)
        if dim_t == 0:
            continue
        block = [[0] * width for _ in range(dim_t)]
        for pos, (i, jj, u) in enumerate(entries):
            if jj != j:
                continue
            elem = [ring.zero()] * M.ngens
            for k in range(M.ngens):
                f = S.pi.matrix[k][i]
                if not f.is_zero():
                    elem[k] = elem[k] + f.mono_multiple(u)
            for r, val in enumerate(mmodel.coords(elem, dj)):
                if val:
                    block[r][pos] = val
        gen_elem = [ring.one() if k == j else ring.zero() for k in range(M.ngens)]
        target = mmodel.coords(gen_elem, dj)
        rows.extend(block)
        rhs.extend(target)
    sol = solve(np.array(rows, dtype=np.int64), np.array(rhs, dtype=np.int64), p) if rows else np.zeros(width, dtype=np.int64)
    if sol is None:
        return "none", None
    mat = [[ring.zero() for _ in range(M.ngens)] for _ in range(X.ngens)]
    for pos, (i, j, u) in enumerate(entries):
        c = int(sol[pos]) % p
        if c:
            mat[i][j] = mat[i][j] + Polynomial(ring, {u: c})
    return "found", mat


# ---------------------------------------------------------------------------
# Random idempotent search
# ---------------------------------------------------------------------------

class _DenseEndZero:
    """Degree-zero endomorphisms on the dense model (no Groebner data)."""

    def __init__(self, M):
        ring = M.ring
        self.ring = ring
        self.module = M
        p = ring.char
        bound = max([0] + list(M.gen_degs) + list(M.col_degs)) + 2
        rmodel = TruncatedRingModel(ring, bound)
        self.rmodel = rmodel
        self.model = TruncatedModuleModel.of_module(rmodel, M)
        entries = []
        for i in range(M.ngens):
            for j in range(M.ngens):
                for u in rmodel.basis_monomials(M.gen_degs[j] - M.gen_degs[i]):
                    entries.append((i, j, u))
        self.entries = entries
        self.entry_index = {en: pos for pos, en in enumerate(entries)}
        width = len(entries)
        rows = []
        for rc in range(M.nrels):
            col = M.columns[rc]
            dc = M.col_degs[rc]
            dim_t = self.model.dim(dc)
            if dim_t == 0:
                continue
            block = [[0] * width for _ in range(dim_t)]
            for pos, (i, j, u) in enumerate(entries):
                f = col[j]
                if f.is_zero():
                    continue
                elem = [ring.zero()] * M.ngens
                elem[i] = f.mono_multiple(u)
                for r, val in enumerate(self.model.coords(elem, dc)):
                    if val:
                        block[r][pos] = val
            rows.extend(block)
        znull = nullspace(np.array(rows, dtype=np.int64), p) if rows else np.eye(width, dtype=np.int64)
        bspan = Span(width, p, track=True)
        n_triv = 0
        for j in range(M.ngens):
            dj = M.gen_degs[j]
            self.model._ensure_k(dj)
            for rel_row in self.model._kspan[dj].rows:
                vec = [0] * width
                offs, _ = self.model._ambient(dj)
                for i, b in enumerate(M.gen_degs):
                    monos = rmodel.basis_monomials(dj - b)
                    for loc, mono in enumerate(monos):
                        val = int(rel_row[offs[i] + loc]) % p
                        if val:
                            vec[self.entry_index[(i, j, mono)]] = val
                if bspan.add(vec):
                    n_triv += 1
        self._span = bspan
        self._n_triv = n_triv
        self.reps = [np.array(zv, dtype=np.int64) for zv in znull if bspan.add([int(v) for v in zv])]
        self.dim = len(self.reps)

    def matrix_of(self, wvec):
        ring = self.ring
        g = self.module.ngens
        mat = [[ring.zero() for _ in range(g)] for _ in range(g)]
        for pos, (i, j, u) in enumerate(self.entries):
            c = int(wvec[pos]) % ring.char
            if c:
                mat[i][j] = mat[i][j] + Polynomial(ring, {u: c})
        return mat

    def coords_of_matrix(self, mat):
        ring = self.ring
        g = self.module.ngens
        vec = [0] * len(self.entries)
        for i in range(g):
            for j in range(g):
                f = mat[i][j]
                if f.is_zero():
                    continue
                cc = self.rmodel.poly_coords(f, self.module.gen_degs[j] - self.module.gen_degs[i])
                monos = self.rmodel.basis_monomials(self.module.gen_degs[j] - self.module.gen_degs[i])
                for loc, val in enumerate(cc):
                    if val:
                        key = (i, j, monos[loc])
                        vec[self.entry_index[key]] = (vec[self.entry_index[key]] + val) % ring.char
        combo = self._span.basis_coords(vec)
        if combo is None:
            raise AssertionError("matrix is not a degree-zero endomorphism")
        return np.array([int(v) for v in combo[self._n_triv:]], dtype=np.int64)

    def compose_coords(self, ucoords, vcoords):
        ring = self.ring
        g = self.module.ngens
        mu = self._combined(ucoords)
        mv = self._combined(vcoords)
        out = [[ring.zero() for _ in range(g)] for _ in range(g)]
        for i in range(g):
            for j in range(g):
                acc = ring.zero()
                for t in range(g):
                    a, b = mu[i][t], mv[t][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                out[i][j] = acc
        return self.coords_of_matrix(out)

    def _combined(self, coords):
        ring = self.ring
        g = self.module.ngens
        mat = [[ring.zero() for _ in range(g)] for _ in range(g)]
        for a, c in enumerate(coords):
            c = int(c) % ring.char
            if not c:
                continue
            rep = self.matrix_of(self.reps[a])
            for i in range(g):
                for j in range(g):
                    if not rep[i][j].is_zero():
                        mat[i][j] = mat[i][j] + rep[i][j].scale(c)
        return mat

    def unit_coords(self):
        ring = self.ring
        g = self.module.ngens
        mat = [[ring.one() if i == j else ring.zero() for j in range(g)] for i in range(g)]
        return self.coords_of_matrix(mat)


def oracle_random_idempotent(M, trials: int, seed: int):
    """Sample random degree-zero endomorphisms and try to extract an
    idempotent from their minimal polynomials.

    Returns ("found", matrix) with a verified e^2 = e witness, or
    ("none", trials)."""
    if trials < 1:
        raise ValueError("need at least one trial")
    ring = M.ring
    p = ring.char
    end0 = _DenseEndZero(M)
    if end0.dim == 0:
        raise ValueError("zero module has no endomorphisms to sample")
    rng = random.Random(seed)
    unit = end0.unit_coords()
    for _ in range(trials):
        vec = np.array([rng.randrange(p) for _ in range(end0.dim)], dtype=np.int64)
        # minimal polynomial by power iteration
        span = Span(end0.dim, p, track=True)
        span.add(unit)
        powers = [unit.copy()]
        cur = unit.copy()
        minpoly = None
        while True:
            cur = end0.compose_coords(cur, vec)
            combo = span.basis_coords(cur)
            if combo is not None:
                d = len(powers)
                coeffs = [0] * (d + 1)
                coeffs[d] = 1
                for idx, c in enumerate(combo):
                    coeffs[idx] = (-int(c)) % p
                minpoly = coeffs
                break
            span.add(cur)
            powers.append(cur.copy())
        split = coprime_split(minpoly, p, rng)
        if split is None:
            continue
        f1, f2 = split
        inv = _pmod_inv(f2, f1, p)
        e_poly = _pdivmod(_pmul(f2, inv, p), minpoly, p)[1]
        # evaluate at vec by Horner on coordinates
        e = np.zeros(end0.dim, dtype=np.int64)
        power = unit.copy()
        for idx, c in enumerate(e_poly):
            if c % p:
                e = (e + (c % p) * power) % p
            if idx + 1 < len(e_poly):
                power = end0.compose_coords(power, vec)
        if not e.any():
            continue
        e2 = end0.compose_coords(e, e)
        if not np.array_equal(e2 % p, e % p):
            continue
        if np.array_equal(e % p, unit % p):
            continue
        return "found", end0._combined(e)
    return "none", trials
