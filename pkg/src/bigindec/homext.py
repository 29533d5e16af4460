"""Hom modules, endomorphism algebras, and Ext with explicit cocycles.

Hom(M, N) is the kernel of Hom(F0, N) -> Hom(F1, N), computed by syzygies;
its generators decode to honest ModuleMaps.  Ext^i(M, N) is computed from a
minimal free resolution of M; for i = 1 classes are carried as cocycles
Omega^1(M) -> N, and when N has finite length an explicit k-basis of
cocycles (with the variable actions on it) is produced degree by degree.
"""

from __future__ import annotations

from typing import Sequence

from .errors import NotFiniteLengthError, RingMismatchError
from .linalg import Span, nullspace
from .modlib import (
    GradedModule,
    ModuleMap,
    Piece,
    cokernel_presentation,
    direct_sum,
    free_resolution,
    identity_map,
    kernel_data,
    length_and_hilbert,
    minimal_presentation,
    resolution,
    shift_base,
    shifted,
    sum_parts,
    syzygy,
)
from .ringkernel import (
    GradedRing,
    Polynomial,
    module_membership_gb,
    power_monomials,
    vec_from_polys,
)


# ---------------------------------------------------------------------------
# Hom modules
# ---------------------------------------------------------------------------

class HomModule:
    """Hom_R(M, N) presented as a graded module, with generator decoding."""

    def __init__(self, M: GradedModule, N: GradedModule, module, inc_columns, flat_index):
        self.source = M
        self.target = N
        self.module = module          # minimal presentation of the Hom module
        self._inc_columns = inc_columns  # each: dict (i, k) -> Polynomial
        self._flat_index = flat_index    # (i, k) -> flat ambient position
        self._express_gb = None

    @property
    def ngens(self) -> int:
        return self.module.ngens

    def gen_degree(self, t: int) -> int:
        return self.module.gen_degs[t]

    def decode(self, t: int) -> ModuleMap:
        """ModuleMap M -> N represented by generator t."""
        ring = self.source.ring
        mat = [[ring.zero() for _ in range(self.source.ngens)] for _ in range(self.target.ngens)]
        for (i, k), f in self._inc_columns[t].items():
            mat[k][i] = f
        return ModuleMap(self.source, self.target, mat, shift=self.gen_degree(t), check=False)

    def decode_combination(self, coeffs: Sequence[Polynomial], shift=None) -> ModuleMap:
        ring = self.source.ring
        mat = [[ring.zero() for _ in range(self.source.ngens)] for _ in range(self.target.ngens)]
        for t, c in enumerate(coeffs):
            if c.is_zero():
                continue
            for (i, k), f in self._inc_columns[t].items():
                mat[k][i] = mat[k][i] + c * f
        mat = [[ring.reduce(f) for f in row] for row in mat]
        if shift is None:
            shifts = {self.gen_degree(t) + c.degree() for t, c in enumerate(coeffs) if not c.is_zero()}
            shift = shifts.pop() if len(shifts) == 1 else 0
        return ModuleMap(self.source, self.target, mat, shift=shift, check=False)

    def _ambient_rank(self) -> int:
        return self.source.ngens * self.target.ngens

    def _map_to_vector(self, phi: ModuleMap):
        """Flatten a map into the ambient free cover of Hom(F0, N)."""
        ring = self.source.ring
        rank = self._ambient_rank()
        cols = [ring.zero()] * rank
        for i in range(self.source.ngens):
            for k in range(self.target.ngens):
                f = phi.matrix[k][i]
                if not f.is_zero():
                    cols[self._flat_index[(i, k)]] = f
        return cols

    def express(self, phi: ModuleMap):
        """Coefficients over the Hom generators representing phi, or None."""
        ring = self.source.ring
        if self._express_gb is None:
            rank = self._ambient_rank()
            row_degs = [0] * rank
            for (i, k), pos in self._flat_index.items():
                row_degs[pos] = self.target.gen_degs[k] - self.source.gen_degs[i]
            cols = []
            for t in range(self.ngens):
                col = [ring.zero()] * rank
                for key, f in self._inc_columns[t].items():
                    col[self._flat_index[key]] = f
                cols.append(col)
            # relations of the ambient module Hom(F0, N) = sum of N copies
            for i in range(self.source.ngens):
                for rc in range(self.target.nrels):
                    col = [ring.zero()] * rank
                    for k in range(self.target.ngens):
                        f = self.target.columns[rc][k]
                        if not f.is_zero():
                            col[self._flat_index[(i, k)]] = f
                    cols.append(col)
            self._express_gb = (module_membership_gb(ring, row_degs, cols), row_degs)
        gb, _ = self._express_gb
        target = self._map_to_vector(phi)
        combo = gb.express(vec_from_polys(target))
        if combo is None:
            return None
        coeffs = [ring.zero()] * self.ngens
        for (idx, m), c in combo.items():
            if idx < self.ngens:
                coeffs[idx] = coeffs[idx] + Polynomial(ring, {m: c})
        return [ring.reduce(f) for f in coeffs]


def hom_module(M: GradedModule, N: GradedModule) -> HomModule:
    """Hom(M, N); cached through shift bases, so Hom between shifted copies
    is computed only once per underlying pair."""
    if M.ring is not N.ring:
        raise RingMismatchError("Hom of modules over different rings")
    baseM, aM = shift_base(M)
    baseN, aN = shift_base(N)
    cache = baseM._cache.setdefault("hom", {})
    key = id(baseN)
    if key not in cache:
        cache[key] = (baseN, _hom_module_raw(baseM, baseN))
    base_hom = cache[key][1]
    if aM == 0 and aN == 0:
        return base_hom
    # Hom(M(-aM), N(-aN)) = Hom(M, N)(aM - aN): same matrices, shifted degrees
    shifted_mod = shifted(base_hom.module, aN - aM)
    out = HomModule(M, N, shifted_mod, base_hom._inc_columns, base_hom._flat_index)
    out._express_gb = base_hom._express_gb
    return out


def _hom_module_raw(M: GradedModule, N: GradedModule) -> HomModule:
    ring = M.ring
    flat_index = {}
    pos = 0
    u0_parts = []
    for i in range(M.ngens):
        for k in range(N.ngens):
            flat_index[(i, k)] = pos
            pos += 1
        u0_parts.append(shifted(N, -M.gen_degs[i]))
    if M.ngens == 0:
        zero = GradedModule(ring, (), (), minimal=True)
        return HomModule(M, N, zero, [], flat_index)
    U0, _, _ = direct_sum(u0_parts)
    if M.nrels == 0:
        # Hom(free, N): every assignment of generators is a map
        mp = minimal_presentation(U0)
        inc_cols = []
        for t in range(mp.module.ngens):
            col = {}
            for flat in range(U0.ngens):
                f = mp.from_min.matrix[flat][t]
                if not f.is_zero():
                    i, k = divmod(flat, N.ngens)
                    col[(i, k)] = f
            inc_cols.append(col)
        return HomModule(M, N, mp.module, inc_cols, flat_index)
    u1_parts = [shifted(N, -cd) for cd in M.col_degs]
    U1, _, _ = direct_sum(u1_parts)
    mat = [[ring.zero() for _ in range(U0.ngens)] for _ in range(U1.ngens)]
    for j in range(M.nrels):
        for i in range(M.ngens):
            a = M.columns[j][i]
            if a.is_zero():
                continue
            for k in range(N.ngens):
                mat[j * N.ngens + k][i * N.ngens + k] = a
    phi = ModuleMap(U0, U1, mat, check=False)
    H, inc = kernel_data(phi)
    inc_cols = []
    for t in range(H.ngens):
        col = {}
        for flat in range(U0.ngens):
            f = inc.matrix[flat][t]
            if not f.is_zero():
                i, k = divmod(flat, N.ngens)
                col[(i, k)] = f
        inc_cols.append(col)
    return HomModule(M, N, H, inc_cols, flat_index)


# ---------------------------------------------------------------------------
# Endomorphism algebras
# ---------------------------------------------------------------------------

class EndAlgebra:
    """End(M) with composition re-expressed over module generators.

    For a recorded direct sum the algebra is assembled blockwise from the
    pairwise Hom modules, which keeps every Groebner problem at the size of
    a single summand pair.  Labels are generator indices (plain) or triples
    (i, j, a): the a-th generator of Hom(part_i, part_j).
    """

    def __init__(self, M: GradedModule):
        self.module = M
        parts = sum_parts(M)
        ring = M.ring
        self.ring = ring
        if parts is None:
            self.kind = "plain"
            self.hom = hom_module(M, M)
            self.labels = list(range(self.hom.ngens))
        else:
            self.kind = "blocks"
            self.parts, self.offsets = parts
            self.iotas, self.pis = _sum_maps(M)
            self.homs = {}
            r = len(self.parts)
            for i in range(r):
                for j in range(r):
                    self.homs[(i, j)] = hom_module(self.parts[i], self.parts[j])
            self.labels = [
                (i, j, a)
                for i in range(r)
                for j in range(r)
                for a in range(self.homs[(i, j)].ngens)
            ]
        self._struct_cache: dict = {}
        self._identity = None

    @property
    def h(self) -> int:
        """nu_R of the algebra as an R-module."""
        return len(self.labels)

    def gen_degree(self, label) -> int:
        if self.kind == "plain":
            return self.hom.gen_degree(label)
        i, j, a = label
        return self.homs[(i, j)].gen_degree(a)

    def decode(self, label) -> ModuleMap:
        if self.kind == "plain":
            return self.hom.decode(label)
        i, j, a = label
        block = self.homs[(i, j)].decode(a)
        return self.iotas[j].compose(block).compose(self.pis[i])

    def decode_combination(self, coeffs: dict) -> ModuleMap:
        ring = self.ring
        g = self.module.ngens
        mat = [[ring.zero() for _ in range(g)] for _ in range(g)]
        shift = 0
        for label, c in coeffs.items():
            if c.is_zero():
                continue
            dec = self.decode(label)
            shift = dec.shift + c.degree()
            for i in range(g):
                for j in range(g):
                    if not dec.matrix[i][j].is_zero():
                        mat[i][j] = mat[i][j] + c * dec.matrix[i][j]
        mat = [[ring.reduce(f) for f in row] for row in mat]
        return ModuleMap(self.module, self.module, mat, shift=shift, check=False)

    def express(self, phi: ModuleMap) -> dict:
        """Coefficients {label: Polynomial} with phi = sum coeff * decode."""
        if self.kind == "plain":
            coeffs = self.hom.express(phi)
            if coeffs is None:
                raise ValueError("map is not an endomorphism of the module")
            return {t: c for t, c in enumerate(coeffs) if not c.is_zero()}
        out = {}
        for i in range(len(self.parts)):
            for j in range(len(self.parts)):
                block = self.pis[j].compose(phi).compose(self.iotas[i])
                coeffs = self.homs[(i, j)].express(block)
                if coeffs is None:
                    raise ValueError("map is not an endomorphism of the module")
                for a, c in enumerate(coeffs):
                    if not c.is_zero():
                        out[(i, j, a)] = c
        return out

    def structure(self, u, v) -> dict:
        """Coefficients of decode(u) o decode(v) over the generators."""
        key = (u, v)
        if key in self._struct_cache:
            return self._struct_cache[key]
        if self.kind == "blocks":
            iu, ju, a = u
            iv, jv, b = v
            if iu != jv:
                result = {}
            else:
                comp = self.homs[(iu, ju)].decode(a).compose(self.homs[(iv, jv)].decode(b))
                coeffs = self.homs[(iv, ju)].express(comp)
                result = {(iv, ju, t): c for t, c in enumerate(coeffs) if not c.is_zero()}
        else:
            comp = self.hom.decode(u).compose(self.hom.decode(v))
            coeffs = self.hom.express(comp)
            result = {t: c for t, c in enumerate(coeffs) if not c.is_zero()}
        self._struct_cache[key] = result
        return result

    def identity_coeffs(self) -> dict:
        if self._identity is None:
            self._identity = self.express(identity_map(self.module))
        return self._identity


def _sum_maps(M: GradedModule):
    """Rebuild the canonical injections/projections of a recorded sum."""
    ring = M.ring
    parts, offsets = sum_parts(M)
    iotas, pis = [], []
    total = M.ngens
    for idx, P in enumerate(parts):
        off = offsets[idx]
        imat = [[ring.zero() for _ in range(P.ngens)] for _ in range(total)]
        pmat = [[ring.zero() for _ in range(total)] for _ in range(P.ngens)]
        for i in range(P.ngens):
            imat[off + i][i] = ring.one()
            pmat[i][off + i] = ring.one()
        iotas.append(ModuleMap(P, M, imat, check=False))
        pis.append(ModuleMap(M, P, pmat, check=False))
    return iotas, pis


def end_algebra(M: GradedModule) -> EndAlgebra:
    if minimal_presentation(M).nu == 0:
        raise ValueError("endomorphisms of the zero module")
    if "end_algebra" not in M._cache:
        M._cache["end_algebra"] = EndAlgebra(M)
    return M._cache["end_algebra"]


# ---------------------------------------------------------------------------
# Ext modules
# ---------------------------------------------------------------------------

class ExtClass:
    """Element of Ext^1(M, N): a homogeneous cocycle Omega^1(M) -> N,
    recorded as a matrix on the generators of F_1 in the minimal resolution
    of M (rows: generators of N)."""

    def __init__(self, M: GradedModule, N: GradedModule, matrix, degree: int):
        self.M = M
        self.N = N
        ring = M.ring
        self.matrix = tuple(tuple(ring.reduce(f) for f in row) for row in matrix)
        self.degree = degree

    def is_cocycle(self) -> bool:
        """The matrix must kill d_2 modulo the relations of N."""
        res = resolution(self.M)
        res.extend(2)
        d2 = res.differential(2)
        ring = self.M.ring
        for col in d2:
            img = [ring.zero() for _ in range(self.N.ngens)]
            for k in range(self.N.ngens):
                acc = ring.zero()
                for j, f in enumerate(col):
                    if not f.is_zero() and not self.matrix[k][j].is_zero():
                        acc = acc + self.matrix[k][j] * f
                img[k] = acc
            if not self.N.element_is_zero(img):
                return False
        return True

    def scale(self, c: int) -> "ExtClass":
        return ExtClass(self.M, self.N, [[f.scale(c) for f in row] for row in self.matrix], self.degree)

    def add(self, other: "ExtClass") -> "ExtClass":
        if other.degree != self.degree:
            raise ValueError("cannot add classes of different degrees")
        mat = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)]
        return ExtClass(self.M, self.N, mat, self.degree)

    def is_zero_matrix(self) -> bool:
        return all(f.is_zero() for row in self.matrix for f in row)


def zero_ext_class(M: GradedModule, N: GradedModule, degree: int = 0) -> ExtClass:
    res = resolution(M)
    res.extend(1)
    b1 = len(res.f_degs[1]) if res.length >= 1 else 0
    ring = M.ring
    return ExtClass(M, N, [[ring.zero()] * b1 for _ in range(N.ngens)], degree)


class ExtBasis:
    """k-basis of Ext^i(M, N) for finite-length N: per-degree cocycle and
    coboundary spaces with coordinate maps, plus the variable actions."""

    def __init__(self, M, N, i):
        self.M = M
        self.N = N
        self.i = i
        ring = M.ring
        self.ring = ring
        res = free_resolution(M, i + 1)
        self.res = res
        ldata = length_and_hilbert(N)
        if not ldata.finite:
            raise NotFiniteLengthError("Ext basis requires a finite-length target")
        if res.length < i:
            self.fi_degs = ()
        else:
            self.fi_degs = res.f_degs[i]
        self.elements = []            # list of (degree, coords-key, matrix)
        self._per_degree = {}         # degree -> dict with solver state
        if not self.fi_degs:
            self.dim = 0
            return
        support = sorted(d for d, v in ldata.table.items() if v)
        if not support:
            self.dim = 0
            return
        lo = support[0] - max(self.fi_degs)
        hi = support[-1] - min(self.fi_degs)
        d_ip1 = res.differential(i + 1)
        d_i = res.differential(i) if i >= 1 else []
        fim1_degs = res.f_degs[i - 1] if i >= 1 else ()
        for delta in range(lo, hi + 1):
            state = _ext_degree_state(ring, N, self.fi_degs, fim1_degs, d_ip1, d_i, res.f_degs[i + 1] if res.length >= i + 1 else (), delta)
            if state is None:
                continue
            self._per_degree[delta] = state
            positions = []
            for rep in state["reps"]:
                positions.append(len(self.elements))
                self.elements.append((delta, len(self.elements), rep))
            state["positions"] = positions
        self.dim = len(self.elements)

    def classes(self):
        return [ExtClass(self.M, self.N, mat, delta) for delta, _, mat in self.elements]

    def class_coords(self, cls: ExtClass):
        """Coordinates of a cocycle in the chosen basis (zeros off-degree)."""
        coords = [0] * self.dim
        state = self._per_degree.get(cls.degree)
        if state is None:
            if not _matrix_is_zero_cocycle_quick(cls):
                # a degree with no Ext support: class must be a coboundary
                pass
            return coords
        vec = state["matrix_to_vec"](cls.matrix)
        res, combo = state["span"].reduce(vec)
        if res.any():
            raise ValueError("matrix is not a cocycle in this degree")
        quot = state["coords_of_combo"](combo)
        for pos, val in zip(state["positions"], quot):
            coords[pos] = int(val)
        return coords

    def variable_action(self, var_index: int):
        """Matrix of multiplication by x_var on the basis (dim x dim)."""
        ring = self.ring
        x = ring.var(var_index)
        cols = []
        for delta, _, mat in self.elements:
            moved = [[ring.reduce(x * f) for f in row] for row in mat]
            cls = ExtClass(self.M, self.N, moved, delta + x.degree())
            cols.append(self.class_coords(cls))
        return [list(col) for col in cols]  # column-major: cols[j] = image of basis j

    def nu_R(self) -> int:
        """dim_k Ext / m Ext."""
        if self.dim == 0:
            return 0
        rows = []
        for v in range(self.ring.nvars):
            for col in self.variable_action(v):
                rows.append(col)
        from .linalg import rank as _rank
        import numpy as np
        if not rows:
            return self.dim
        return self.dim - _rank(np.array(rows, dtype=np.int64), self.ring.char)


def _matrix_is_zero_cocycle_quick(cls: ExtClass) -> bool:
    return cls.is_zero_matrix()


def _ext_degree_state(ring, N, fi_degs, fim1_degs, d_ip1, d_i, fip1_degs, delta):
    """Solve for cocycles/coboundaries of one internal degree.

    Unknowns: values psi(gen_j) in N_(fi_degs[j] + delta).  Constraints:
    psi . d_{i+1} = 0 in N.  Coboundaries: phi . d_i for phi on F_{i-1}.
    Returns None when the unknown space is empty.
    """
    pieces = [N.piece(d + delta) for d in fi_degs]
    offsets = []
    width = 0
    for pc in pieces:
        offsets.append(width)
        width += pc.dim
    if width == 0:
        return None

    def value_coords(j, element):
        return pieces[j].coords(element)

    # constraint rows: for each column of d_{i+1}, the image in N must vanish
    rows = []
    for col_idx, col in enumerate(d_ip1):
        cdeg = None
        for j, f in enumerate(col):
            if not f.is_zero():
                cdeg = f.degree() + fi_degs[j]
                break
        if cdeg is None:
            continue
        tgt_piece = N.piece(cdeg + delta)
        if tgt_piece.dim == 0:
            continue
        # constraint block: sum_j entry_j * psi(gen_j) = 0
        block = [[0] * width for _ in range(tgt_piece.dim)]
        for j, f in enumerate(col):
            if f.is_zero():
                continue
            src_piece = pieces[j]
            for b in range(src_piece.dim):
                elem = src_piece.lift([1 if t == b else 0 for t in range(src_piece.dim)])
                moved = tuple(ring.reduce(f * e) for e in elem)
                cc = tgt_piece.coords(moved)
                for rpos, val in enumerate(cc):
                    if val:
                        block[rpos][offsets[j] + b] = (block[rpos][offsets[j] + b] + val) % ring.char
        rows.extend(block)
    import numpy as np
    if rows:
        zbasis = nullspace(np.array(rows, dtype=np.int64), ring.char)
    else:
        zbasis = np.eye(width, dtype=np.int64)
    if zbasis.shape[0] == 0:
        return None

    # coboundaries: phi on F_{i-1} of degree delta, composed with d_i
    span = Span(width, ring.char, track=True)
    n_cob = 0
    for l, fdeg in enumerate(fim1_degs):
        src_piece = N.piece(fdeg + delta)
        for b in range(src_piece.dim):
            elem = src_piece.lift([1 if t == b else 0 for t in range(src_piece.dim)])
            vec = [0] * width
            for j in range(len(fi_degs)):
                f = d_i[j][l] if d_i else ring.zero()
                if f.is_zero():
                    continue
                moved = tuple(ring.reduce(f * e) for e in elem)
                cc = pieces[j].coords(moved)
                for pos, val in enumerate(cc):
                    if val:
                        vec[offsets[j] + pos] = (vec[offsets[j] + pos] + val) % ring.char
            if span.add(vec):
                n_cob += 1
    reps = []
    rep_positions = []
    for zvec in zbasis:
        if span.add([int(v) for v in zvec]):
            rep_positions.append(span.dim - 1)
            mat = _vec_to_matrix(ring, N, fi_degs, pieces, offsets, zvec, delta)
            reps.append(mat)
    # ExtBasis fills "positions" with the global indices of these reps
    state = {
        "reps": reps,
        "span": span,
        "n_cob": n_cob,
        "positions": [],
        "width": width,
    }

    def matrix_to_vec(matrix):
        vec = [0] * width
        for j in range(len(fi_degs)):
            col = [matrix[k][j] for k in range(N.ngens)]
            cc = pieces[j].coords(col)
            for pos, val in enumerate(cc):
                vec[offsets[j] + pos] = val
        return vec

    def coords_of_combo(combo):
        # combo indexes the inserted independent vectors: first the
        # coboundary ones, then the representatives
        return [int(combo[k]) % ring.char for k in range(n_cob, len(combo))]

    state["matrix_to_vec"] = matrix_to_vec
    state["coords_of_combo"] = coords_of_combo
    return state


def _vec_to_matrix(ring, N, fi_degs, pieces, offsets, vec, delta):
    mat = [[ring.zero() for _ in range(len(fi_degs))] for _ in range(N.ngens)]
    for j, pc in enumerate(pieces):
        coords = [int(vec[offsets[j] + b]) for b in range(pc.dim)]
        if not any(coords):
            continue
        elem = pc.lift(coords)
        for k in range(N.ngens):
            mat[k][j] = elem[k]
    return mat


class ExtModule:
    """Ext^i(M, N): graded presentation plus, when N has finite length, the
    explicit cocycle basis."""

    def __init__(self, M: GradedModule, N: GradedModule, i: int):
        if M.ring is not N.ring:
            raise RingMismatchError("Ext of modules over different rings")
        if i < 0:
            raise ValueError("homological degree must be >= 0")
        self.M = M
        self.N = N
        self.i = i
        self._module = None
        self._basis = None

    @property
    def module(self) -> GradedModule:
        if self._module is None:
            self._module = _ext_presentation(self.M, self.N, self.i)
        return self._module

    @property
    def basis(self) -> ExtBasis:
        if self._basis is None:
            self._basis = ExtBasis(self.M, self.N, self.i)
        return self._basis

    def dim_k(self) -> int:
        """Total k-dimension (finite-length N only)."""
        return self.basis.dim

    def length(self):
        data = length_and_hilbert(self.module)
        return data.length if data.finite else None

    def nonzero(self) -> bool:
        return self.module.ngens > 0

    def decode_generator(self, t: int) -> ExtClass:
        """Presentation generator t as a cocycle (i = 1 only)."""
        if self.i != 1:
            raise ValueError("cocycle decoding is provided for Ext^1 only")
        decode = self.module._cache.get("ext_decode")
        if decode is None:
            raise ValueError("presentation carries no decode data")
        return decode(t)


def ext_module(M: GradedModule, N: GradedModule, i: int) -> ExtModule:
    key = ("ext", id(N), i)
    if key not in M._cache:
        M._cache[key] = (N, ExtModule(M, N, i))
    return M._cache[key][1]


def _hom_complex_map(res, N, t):
    """The map Hom(F_{t-1}, N) -> Hom(F_t, N) as a ModuleMap of sums."""
    ring = N.ring
    degs_src = res.f_degs[t - 1]
    degs_tgt = res.f_degs[t]
    src_parts = [shifted(N, -d) for d in degs_src]
    tgt_parts = [shifted(N, -d) for d in degs_tgt]
    if not src_parts or not tgt_parts:
        return None
    U0, _, _ = direct_sum(src_parts)
    U1, _, _ = direct_sum(tgt_parts)
    dt = res.differential(t)
    mat = [[ring.zero() for _ in range(U0.ngens)] for _ in range(U1.ngens)]
    for j in range(len(degs_tgt)):
        for i in range(len(degs_src)):
            a = dt[j][i]
            if a.is_zero():
                continue
            for k in range(N.ngens):
                mat[j * N.ngens + k][i * N.ngens + k] = a
    return ModuleMap(U0, U1, mat, check=False), U0, U1


def _ext_presentation(M: GradedModule, N: GradedModule, i: int) -> GradedModule:
    ring = M.ring
    res = free_resolution(M, i + 1)
    if res.length < i or not res.f_degs[i]:
        return GradedModule(ring, (), (), minimal=True)
    if i == 0:
        return hom_module(M, N).module
    # Z = ker( Hom(F_i, N) -> Hom(F_{i+1}, N) )
    if res.length >= i + 1 and res.f_degs[i + 1]:
        made = _hom_complex_map(res, N, i + 1)
        phi_up, Ci, _ = made
        Z, z_inc = kernel_data(phi_up)
    else:
        parts = [shifted(N, -d) for d in res.f_degs[i]]
        Ci, _, _ = direct_sum(parts)
        mpz = minimal_presentation(Ci)
        Z, z_inc = mpz.module, mpz.from_min
    # image of Hom(F_{i-1}, N) inside Z
    made_dn = _hom_complex_map(res, N, i)
    if made_dn is None:
        ext_mod = Z
        lift_cols = []
    else:
        phi_dn, Cim1, _ = made_dn
        gb_cols = [
            [z_inc.matrix[r][t] for r in range(Ci.ngens)] for t in range(Z.ngens)
        ] + [list(c) for c in Ci.columns]
        gb = module_membership_gb(ring, Ci.gen_degs, gb_cols)
        lift_cols = []
        for g in range(Cim1.ngens):
            target = [phi_dn.matrix[r][g] for r in range(Ci.ngens)]
            combo = gb.express(vec_from_polys(target))
            if combo is None:
                raise AssertionError("boundary does not land in the cocycle kernel")
            col = [ring.zero()] * Z.ngens
            for (idx, m), c in combo.items():
                if idx < Z.ngens:
                    col[idx] = col[idx] + Polynomial(ring, {m: c})
            lift_cols.append([ring.reduce(f) for f in col])
    pres_cols = [list(c) for c in Z.columns] + lift_cols
    ext_raw = GradedModule(ring, Z.gen_degs, pres_cols)
    mp = minimal_presentation(ext_raw)
    ext = mp.module
    if i == 1:
        b1 = len(res.f_degs[1])

        def decode(t: int, _from_min=mp.from_min, _z_inc=z_inc, _ext=ext, _b1=b1):
            # generator t of ext -> element of Z -> cocycle matrix on F_1
            zcol = [_from_min.matrix[r][t] for r in range(_from_min.target.ngens)]
            flat = [ring.zero()] * (N.ngens * _b1)
            for r, c in enumerate(zcol):
                if c.is_zero():
                    continue
                for rr in range(_z_inc.target.ngens):
                    f = _z_inc.matrix[rr][r]
                    if not f.is_zero():
                        flat[rr] = flat[rr] + c * f
            mat = [[ring.zero() for _ in range(_b1)] for _ in range(N.ngens)]
            for flatpos in range(N.ngens * _b1):
                j, k = divmod(flatpos, N.ngens)
                mat[k][j] = ring.reduce(flat[flatpos])
            return ExtClass(M, N, mat, _ext.gen_degs[t])

        ext._cache["ext_decode"] = decode
    return ext


# ---------------------------------------------------------------------------
# Right action of End(M) on Ext^1(M, N) and class equality
# ---------------------------------------------------------------------------

def _d1_lift_gb(M: GradedModule):
    """Membership basis for expressing elements of Omega^1 over d_1 columns."""
    key = "d1_lift_gb"
    if key not in M._cache:
        res = resolution(M)
        res.extend(1)
        cols = [list(c) for c in res.differential(1)]
        f0 = res.f_degs[0]
        M._cache[key] = module_membership_gb(M.ring, f0, cols)
    return M._cache[key]


def chain_lift(M: GradedModule, b: ModuleMap):
    """Lift an endomorphism b of M to b1 on F_1 with d1 . b1 = b0 . d1.

    Returns the matrix of b1 (b1 x b1 ranks from the minimal resolution).
    """
    ring = M.ring
    res = resolution(M)
    res.extend(1)
    mp = res.mp
    b_min = mp.to_min.compose(b).compose(mp.from_min)
    d1 = res.differential(1)
    b1_rank = len(res.f_degs[1])
    gb = _d1_lift_gb(M)
    cols_out = []
    for j in range(b1_rank):
        col = d1[j]
        target = b_min.apply(list(col))
        combo = gb.express(vec_from_polys(list(target)))
        if combo is None:
            raise AssertionError("chain lift failed; invalid endomorphism input")
        out = [ring.zero()] * b1_rank
        for (idx, m), c in combo.items():
            if idx < b1_rank:
                out[idx] = out[idx] + Polynomial(ring, {m: c})
        cols_out.append([ring.reduce(f) for f in out])
    # matrix of b1, rows x cols
    return [[cols_out[j][t] for j in range(b1_rank)] for t in range(b1_rank)]


def ext_action(alpha: ExtClass, b: ModuleMap) -> ExtClass:
    """alpha . b: pull the class back along the endomorphism b of M."""
    if b.source is not alpha.M or b.target is not alpha.M:
        raise ValueError("action is by endomorphisms of the left module")
    ring = alpha.M.ring
    b1 = chain_lift(alpha.M, b)
    rank = len(b1)
    mat = []
    for k in range(alpha.N.ngens):
        row = []
        for j in range(rank):
            acc = ring.zero()
            for t in range(rank):
                f, g = alpha.matrix[k][t], b1[t][j]
                if not f.is_zero() and not g.is_zero():
                    acc = acc + f * g
            row.append(ring.reduce(acc))
        mat.append(row)
    return ExtClass(alpha.M, alpha.N, mat, alpha.degree + b.shift)


def is_coboundary(cls: ExtClass) -> bool:
    """Whether the cocycle represents the zero class."""
    M, N = cls.M, cls.N
    ring = M.ring
    if cls.is_zero_matrix():
        return True
    if length_and_hilbert(N).finite:
        basis = ext_module(M, N, 1).basis
        return not any(basis.class_coords(cls))
    # membership route: flatten into N^(b1) and test against coboundaries
    res = resolution(M)
    res.extend(1)
    d1 = res.differential(1)
    b1 = len(res.f_degs[1])
    f0 = res.f_degs[0]
    rank = b1 * N.ngens
    row_degs = [0] * rank

    def flat(j, k):
        return j * N.ngens + k

    for j in range(b1):
        for k in range(N.ngens):
            row_degs[flat(j, k)] = N.gen_degs[k] - res.f_degs[1][j]
    cols = []
    for l in range(len(f0)):
        for k in range(N.ngens):
            col = [ring.zero()] * rank
            for j in range(b1):
                f = d1[j][l]
                if not f.is_zero():
                    col[flat(j, k)] = f
            cols.append(col)
    for j in range(b1):
        for rc in range(N.nrels):
            col = [ring.zero()] * rank
            for k in range(N.ngens):
                f = N.columns[rc][k]
                if not f.is_zero():
                    col[flat(j, k)] = f
            cols.append(col)
    gb = module_membership_gb(ring, row_degs, cols)
    target = [ring.zero()] * rank
    for j in range(b1):
        for k in range(N.ngens):
            target[flat(j, k)] = cls.matrix[k][j]
    return gb.contains(vec_from_polys(target))


def ext_class_equal(a: ExtClass, b: ExtClass) -> bool:
    if a.M is not b.M or a.N is not b.N:
        raise ValueError("classes live over different module pairs")
    if a.degree != b.degree:
        return is_coboundary(a) and is_coboundary(b)
    diff = a.add(b.scale(-1))
    return is_coboundary(diff)


# ---------------------------------------------------------------------------
# Annihilator exponent
# ---------------------------------------------------------------------------

def annihilator_exponent(M: GradedModule) -> int:
    """Least s >= 0 with m^s Ext^1(M, Omega^1 M) = 0.

    Finiteness of that Ext is the computational meaning of "free on the
    punctured spectrum"; when it fails, NotFiniteLengthError is raised.
    """
    omega = syzygy(M, 1)
    if omega.ngens == 0:
        return 0
    ext = ext_module(M, omega, 1)
    pres = ext.module
    if pres.ngens == 0:
        return 0
    data = length_and_hilbert(pres)
    if not data.finite:
        raise NotFiniteLengthError(
            "Ext^1(M, Omega^1 M) has infinite length: M is not free on the punctured spectrum"
        )
    ring = M.ring
    top = max(d for d, v in data.table.items() if v)
    bottom = min(pres.gen_degs)
    cap = top - bottom + 1
    for s in range(cap + 1):
        killed = True
        for mono in power_monomials(ring, s):
            poly = Polynomial(ring, {mono: 1})
            for t in range(pres.ngens):
                elem = [poly if r == t else ring.zero() for r in range(pres.ngens)]
                if not pres.element_is_zero(elem):
                    killed = False
                    break
            if not killed:
                break
        if killed:
            return s
    raise AssertionError("annihilator exponent exceeded its degree bound")
