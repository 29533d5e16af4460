"""Finitely presented graded modules and maps over a GradedRing.

A module is a cokernel presentation: generator degrees plus a matrix of
homogeneous relation columns.  Elements are tuples of polynomials (one per
generator); maps are matrices on generators.  Heavy lifting (membership,
syzygies) is delegated to the Groebner engine; finite-dimensional questions
are answered degreewise through `piece`, the graded-slice machinery.
"""

from __future__ import annotations

from typing import Sequence

from . import config
from .errors import (
    HomogeneityError,
    MinorWorkGuardError,
    NotFiniteLengthError,
    RingMismatchError,
    ZeroModuleError,
)
from .linalg import Span
from .ringkernel import (
    GradedRing,
    IdealHandle,
    Polynomial,
    matrix_syzygies,
    maximal_ideal,
    module_membership_gb,
    mono_div,
    power_monomials,
    saturation,
    is_m_primary,
    vec_from_polys,
)


class GradedModule:
    """coker( F1 --relations--> F0 ), F0 graded free with ``gen_degs``.

    ``relations`` is stored column-wise: each column is one relation, a list
    with one Polynomial per generator.  Entries are kept reduced modulo the
    defining ideal; zero columns are dropped.
    """

    def __init__(self, ring: GradedRing, gen_degs: Sequence[int], relations=(), minimal=False):
        self.ring = ring
        self.gen_degs = tuple(int(d) for d in gen_degs)
        cols = []
        col_degs = []
        for col in relations:
            if len(col) != len(self.gen_degs):
                raise ValueError("relation column has wrong length")
            red = [ring.reduce(f) for f in col]
            deg = None
            for i, f in enumerate(red):
                if f.is_zero():
                    continue
                if not f.is_homogeneous():
                    raise HomogeneityError(f"relation entry {f} is not homogeneous")
                d = f.degree() + self.gen_degs[i]
                if deg is None:
                    deg = d
                elif deg != d:
                    raise HomogeneityError("relation column mixes degrees")
            if deg is None:
                continue
            cols.append(tuple(red))
            col_degs.append(deg)
        self.columns = tuple(cols)
        self.col_degs = tuple(col_degs)
        self.minimal = minimal
        self._cache: dict = {}

    # -- basic views -------------------------------------------------------
    @property
    def ngens(self) -> int:
        return len(self.gen_degs)

    @property
    def nrels(self) -> int:
        return len(self.columns)

    def relation_matrix(self):
        """Row-major view (ngens x nrels) of the relation matrix."""
        return [[self.columns[j][i] for j in range(self.nrels)] for i in range(self.ngens)]

    def zero_element(self):
        return tuple(self.ring.zero() for _ in range(self.ngens))

    def generator(self, i: int):
        return tuple(self.ring.one() if k == i else self.ring.zero() for k in range(self.ngens))

    def is_zero_presentation(self) -> bool:
        return self.ngens == 0

    # -- membership in the relation submodule -------------------------------
    @property
    def rel_gb(self):
        if "rel_gb" not in self._cache:
            self._cache["rel_gb"] = module_membership_gb(self.ring, self.gen_degs, [list(c) for c in self.columns])
        return self._cache["rel_gb"]

    def element_is_zero(self, element) -> bool:
        vec = vec_from_polys([self.ring.reduce(f) for f in element])
        if not vec:
            return True
        return self.rel_gb.contains(vec)

    def elements_equal(self, a, b) -> bool:
        return self.element_is_zero(tuple(x - y for x, y in zip(a, b)))

    # -- graded pieces -------------------------------------------------------
    def piece(self, d: int) -> "Piece":
        key = ("piece", d)
        if key not in self._cache:
            self._cache[key] = Piece(self, d)
        return self._cache[key]

    def element_degree(self, element):
        degs = set()
        for i, f in enumerate(element):
            if f.is_zero():
                continue
            degs.add(f.degree() + self.gen_degs[i])
        if not degs:
            return None
        if len(degs) > 1:
            raise HomogeneityError("element is not homogeneous")
        return degs.pop()

    def __repr__(self):
        return f"<GradedModule over {self.ring!r}: {self.ngens} gens {list(self.gen_degs)}, {self.nrels} relations>"


class Piece:
    """Degree-d slice of a module as an explicit F_p vector space."""

    def __init__(self, module: GradedModule, d: int):
        ring = module.ring
        self.module = module
        self.degree = d
        basis = []
        for i, b in enumerate(module.gen_degs):
            for u in ring.std_monomials_of_degree(d - b):
                basis.append((u, i))
        self.ambient_basis = basis
        self.index = {key: pos for pos, key in enumerate(basis)}
        self.dim_ambient = len(basis)
        span = Span(self.dim_ambient, ring.char)
        for j, col in enumerate(module.columns):
            cdeg = module.col_degs[j]
            for u in ring.std_monomials_of_degree(d - cdeg):
                vec = self._ambient_vec(tuple(f.mono_multiple(u) for f in col))
                span.add(vec)
        self.rel_span = span
        pivot_positions = set(span.pivots)
        self.free_positions = [pos for pos in range(self.dim_ambient) if pos not in pivot_positions]
        self.dim = len(self.free_positions)

    def _ambient_vec(self, element):
        ring = self.module.ring
        vec = [0] * self.dim_ambient
        for i, f in enumerate(element):
            red = ring.reduce(f)
            for m, c in red.terms.items():
                pos = self.index.get((m, i))
                if pos is None:
                    raise HomogeneityError("element does not live in this graded piece")
                vec[pos] = (vec[pos] + c) % ring.char
        return vec

    def coords(self, element):
        """Coordinates in the quotient basis (free positions)."""
        vec = self._ambient_vec(element)
        res, _ = self.rel_span.reduce(vec)
        return [int(res[pos]) for pos in self.free_positions]

    def lift(self, coords):
        ring = self.module.ring
        element = [ring.zero() for _ in range(self.module.ngens)]
        for val, pos in zip(coords, self.free_positions):
            if val % ring.char == 0:
                continue
            u, i = self.ambient_basis[pos]
            element[i] = element[i] + Polynomial(ring, {u: val % ring.char})
        return tuple(element)


class ModuleMap:
    """Map of graded modules given on generators.

    ``matrix`` is row-major: (target.ngens) x (source.ngens); the map sends
    source generator j to sum_i matrix[i][j] * target generator i, raising
    degrees by ``shift``.
    """

    def __init__(self, source: GradedModule, target: GradedModule, matrix, shift: int = 0, check: bool = True):
        if source.ring is not target.ring:
            raise RingMismatchError("map between modules over different rings")
        self.source = source
        self.target = target
        self.ring = source.ring
        self.shift = shift
        rows = []
        for i in range(target.ngens):
            row = [self.ring.reduce(matrix[i][j]) for j in range(source.ngens)]
            rows.append(tuple(row))
        self.matrix = tuple(rows)
        for i in range(target.ngens):
            for j in range(source.ngens):
                f = self.matrix[i][j]
                if f.is_zero():
                    continue
                if not f.is_homogeneous():
                    raise HomogeneityError("map entry is not homogeneous")
                want = source.gen_degs[j] + shift - target.gen_degs[i]
                if f.degree() != want:
                    raise HomogeneityError(
                        f"map entry ({i},{j}) has degree {f.degree()}, expected {want}"
                    )
        if check:
            self.validate()

    def validate(self):
        """Relations of the source must map into the target's relations."""
        for j in range(self.source.nrels):
            col = [self.source.columns[j][i] for i in range(self.source.ngens)]
            image = self.apply(col)
            if not self.target.element_is_zero(image):
                raise ValueError("matrix does not map relations into relations")

    def apply(self, element):
        ring = self.ring
        out = [ring.zero() for _ in range(self.target.ngens)]
        for i in range(self.target.ngens):
            acc = ring.zero()
            for j in range(self.source.ngens):
                f = self.matrix[i][j]
                if not f.is_zero() and not element[j].is_zero():
                    acc = acc + f * element[j]
            out[i] = ring.reduce(acc)
        return tuple(out)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other (apply other first)."""
        if other.target is not self.source:
            raise ValueError("maps are not composable")
        ring = self.ring
        mat = []
        for i in range(self.target.ngens):
            row = []
            for j in range(other.source.ngens):
                acc = ring.zero()
                for k in range(self.source.ngens):
                    a, b = self.matrix[i][k], other.matrix[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(ring.reduce(acc))
            mat.append(row)
        return ModuleMap(other.source, self.target, mat, shift=self.shift + other.shift, check=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if self.source is not other.source or self.target is not other.target or self.shift != other.shift:
            raise ValueError("maps not addable")
        mat = [[self.matrix[i][j] + other.matrix[i][j] for j in range(self.source.ngens)]
               for i in range(self.target.ngens)]
        return ModuleMap(self.source, self.target, mat, shift=self.shift, check=False)

    def scale(self, c: int) -> "ModuleMap":
        mat = [[f.scale(c) for f in row] for row in self.matrix]
        return ModuleMap(self.source, self.target, mat, shift=self.shift, check=False)

    def is_zero_map(self) -> bool:
        for j in range(self.source.ngens):
            col = [self.matrix[i][j] for i in range(self.target.ngens)]
            if not self.target.element_is_zero(col):
                return False
        return True

    def equals(self, other: "ModuleMap") -> bool:
        if self.source is not other.source or self.target is not other.target:
            return False
        for j in range(self.source.ngens):
            col = [self.matrix[i][j] - other.matrix[i][j] for i in range(self.target.ngens)]
            if not self.target.element_is_zero(col):
                return False
        return True

    def __repr__(self):
        return f"<ModuleMap {self.source.ngens}->{self.target.ngens} shift {self.shift}>"


def identity_map(M: GradedModule) -> ModuleMap:
    ring = M.ring
    mat = [[ring.one() if i == j else ring.zero() for j in range(M.ngens)] for i in range(M.ngens)]
    return ModuleMap(M, M, mat, check=False)


def zero_map(M: GradedModule, N: GradedModule, shift: int = 0) -> ModuleMap:
    ring = M.ring
    mat = [[ring.zero() for _ in range(M.ngens)] for _ in range(N.ngens)]
    return ModuleMap(M, N, mat, shift=shift, check=False)


def free_module(ring: GradedRing, degs: Sequence[int]) -> GradedModule:
    return GradedModule(ring, degs, (), minimal=True)


def residue_field(ring: GradedRing) -> GradedModule:
    """k = R/m as a cyclic module."""
    key = "residue_field"
    cache = getattr(ring, "_module_cache", None)
    if cache is None:
        cache = {}
        ring._module_cache = cache
    if key not in cache:
        cols = [[ring.var(i)] for i in range(ring.nvars)]
        cache[key] = GradedModule(ring, (0,), cols, minimal=True)
    return cache[key]


def shifted(M: GradedModule, a: int) -> GradedModule:
    """M(-a): generator degrees raised by a; records the base for caching."""
    if a == 0:
        return M
    out = GradedModule(M.ring, tuple(d + a for d in M.gen_degs), [list(c) for c in M.columns], minimal=M.minimal)
    base, base_a = getattr(M, "_shift_base", (M, 0))
    out._shift_base = (base, base_a + a)
    return out


def shift_base(M: GradedModule):
    return getattr(M, "_shift_base", (M, 0))


# ---------------------------------------------------------------------------
# Minimal presentations
# ---------------------------------------------------------------------------

def minimal_column_generators(ring: GradedRing, gen_degs, columns, col_degs):
    """Indices of a minimal generating subset of the given homogeneous
    columns (as a submodule of the graded free module mod I), by graded
    Nakayama: process degrees upward, keep what enlarges the span."""
    order = sorted(range(len(columns)), key=lambda j: (col_degs[j], j))
    kept: list[int] = []
    pieces: dict[int, tuple] = {}

    def piece_state(d):
        if d not in pieces:
            basis = []
            for i, b in enumerate(gen_degs):
                for u in ring.std_monomials_of_degree(d - b):
                    basis.append((u, i))
            index = {key: pos for pos, key in enumerate(basis)}
            span = Span(len(basis), ring.char)
            for kj in kept:
                for u in ring.std_monomials_of_degree(d - col_degs[kj]):
                    span.add(_coords(ring, index, len(basis), columns[kj], u))
            pieces[d] = (index, span, len(basis))
        return pieces[d]

    for j in order:
        d = col_degs[j]
        index, span, width = piece_state(d)
        vec = _coords(ring, index, width, columns[j], None)
        if span.add(vec):
            kept.append(j)
            for dd, (index2, span2, width2) in pieces.items():
                if dd <= d:
                    continue
                for u in ring.std_monomials_of_degree(dd - d):
                    span2.add(_coords(ring, index2, width2, columns[j], u))
    return kept


def _coords(ring, index, width, column, mono):
    vec = [0] * width
    for i, f in enumerate(column):
        g = f if mono is None else f.mono_multiple(mono)
        g = ring.reduce(g)
        for m, c in g.terms.items():
            vec[index[(m, i)]] = (vec[index[(m, i)]] + c) % ring.char
    return vec


class MinimalPresentation:
    """Result of minimalization: the minimal module plus witness maps."""

    def __init__(self, module, nu, to_min, from_min):
        self.module = module
        self.nu = nu
        self.to_min = to_min
        self.from_min = from_min


def minimal_presentation(M: GradedModule) -> MinimalPresentation:
    ring = M.ring
    gen_degs = list(M.gen_degs)
    orig_index = list(range(M.ngens))
    cols = [list(c) for c in M.columns]
    col_degs = list(M.col_degs)
    # expressions of the ORIGINAL generators in the current ones
    expr = [[ring.one() if i == j else ring.zero() for i in range(M.ngens)] for j in range(M.ngens)]

    def find_unit():
        for j, col in enumerate(cols):
            for i, f in enumerate(col):
                if not f.is_zero() and f.degree() == 0:
                    return i, j
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        i, j = hit
        u = cols[j][i].constant_coeff()
        inv = pow(u, ring.char - 2, ring.char)
        # substitution: gen_i = -(1/u) * sum_{k != i} cols[j][k] * gen_k
        sub = [cols[j][k].scale(-inv % ring.char) for k in range(len(gen_degs))]
        for jj, col in enumerate(cols):
            if jj == j:
                continue
            f = col[i]
            if f.is_zero():
                continue
            for k in range(len(gen_degs)):
                if k == i:
                    continue
                col[k] = ring.reduce(col[k] + f * sub[k])
            col[i] = ring.zero()
        for row in expr:
            f = row[i]
            if f.is_zero():
                continue
            for k in range(len(gen_degs)):
                if k == i:
                    continue
                row[k] = ring.reduce(row[k] + f * sub[k])
            row[i] = ring.zero()
        del gen_degs[i], orig_index[i]
        del cols[j], col_degs[j]
        for col in cols:
            del col[i]
        for row in expr:
            del row[i]
        # drop columns that became zero
        live = [jj for jj, col in enumerate(cols) if any(not f.is_zero() for f in col)]
        cols = [cols[jj] for jj in live]
        col_degs = [col_degs[jj] for jj in live]

    kept = minimal_column_generators(ring, tuple(gen_degs), cols, col_degs)
    cols = [cols[j] for j in kept]
    Mmin = GradedModule(ring, gen_degs, cols, minimal=True)
    # to_min: original generator j maps to expr[j]; from_min: kept gens embed.
    to_mat = [[expr[j][k] for j in range(M.ngens)] for k in range(len(gen_degs))]
    from_mat = [[ring.one() if orig_index[k] == i and gen_degs[k] == M.gen_degs[i] else ring.zero()
                 for k in range(len(gen_degs))] for i in range(M.ngens)]
    # from_min columns: kept generator k is the class of original orig_index[k]
    from_mat = [[ring.zero() for _ in range(len(gen_degs))] for _ in range(M.ngens)]
    for k, oi in enumerate(orig_index):
        from_mat[oi][k] = ring.one()
    to_min = ModuleMap(M, Mmin, to_mat, check=False)
    from_min = ModuleMap(Mmin, M, from_mat, check=False)
    return MinimalPresentation(Mmin, Mmin.ngens, to_min, from_min)


def minimal_generator_count(M: GradedModule) -> int:
    key = "nu"
    if key not in M._cache:
        M._cache[key] = M.ngens if M.minimal else minimal_presentation(M).nu
    return M._cache[key]


# ---------------------------------------------------------------------------
# Kernels, cokernels, images
# ---------------------------------------------------------------------------

def _preimage_columns(phi: ModuleMap, target_cols, target_col_degs):
    """Generators v of {v in F0(source): phi(v) in span(target_cols)}."""
    ring = phi.ring
    src, tgt = phi.source, phi.target
    columns = []
    degs = []
    for j in range(src.ngens):
        columns.append([phi.matrix[i][j] for i in range(tgt.ngens)])
        degs.append(src.gen_degs[j] + phi.shift)
    for col in target_cols:
        columns.append(list(col))
    syz, _, _ = matrix_syzygies(ring, tgt.gen_degs, columns)
    out = []
    for col in syz:
        head = col[: src.ngens]
        if any(not f.is_zero() for f in head):
            out.append(tuple(head))
    return out


def kernel_data(phi: ModuleMap):
    """(kernel module, inclusion map) of phi: source -> target."""
    src = phi.source
    pre = _preimage_columns(phi, [list(c) for c in phi.target.columns], phi.target.col_degs)
    # present the submodule generated by `pre` inside the source module
    return submodule_presentation(src, pre)


def submodule_presentation(M: GradedModule, element_gens):
    """Present the submodule of M generated by the given elements; returns
    (module, inclusion ModuleMap into M) with a minimal presentation."""
    ring = M.ring
    gens = []
    gdegs = []
    for e in element_gens:
        red = tuple(ring.reduce(f) for f in e)
        if M.element_is_zero(red):
            continue
        gens.append(red)
        d = M.element_degree(red)
        gdegs.append(d)
    if not gens:
        sub = GradedModule(ring, (), (), minimal=True)
        return sub, ModuleMap(sub, M, [[] for _ in range(M.ngens)], check=False)
    columns = [list(e) for e in gens] + [list(c) for c in M.columns]
    syz, sdegs, _ = matrix_syzygies(ring, M.gen_degs, columns)
    rel_cols = []
    for col in syz:
        head = col[: len(gens)]
        if any(not f.is_zero() for f in head):
            rel_cols.append(head)
    sub = GradedModule(ring, gdegs, rel_cols)
    mp = minimal_presentation(sub)
    inc_mat = [[gens[j][i] for j in range(len(gens))] for i in range(M.ngens)]
    inclusion = ModuleMap(sub, M, inc_mat, check=False)
    # carry minimalization through the inclusion
    inc_min = inclusion.compose(mp.from_min)
    return mp.module, ModuleMap(mp.module, M, inc_min.matrix, check=False)


def image_presentation(phi: ModuleMap):
    """(image module, inclusion into target)."""
    cols = [tuple(phi.matrix[i][j] for i in range(phi.target.ngens)) for j in range(phi.source.ngens)]
    return submodule_presentation(phi.target, cols)


def cokernel_presentation(phi: ModuleMap):
    """(cokernel module, projection from target)."""
    tgt = phi.target
    cols = [list(c) for c in tgt.columns]
    for j in range(phi.source.ngens):
        cols.append([phi.matrix[i][j] for i in range(tgt.ngens)])
    cok = GradedModule(tgt.ring, tgt.gen_degs, cols)
    mp = minimal_presentation(cok)
    proj = mp.to_min  # generators of tgt and cok coincide
    return mp.module, ModuleMap(tgt, mp.module, proj.matrix, check=False)


def map_kernel_cokernel(phi: ModuleMap):
    """(kernel + inclusion, cokernel + projection, image + inclusion)."""
    ker, ker_inc = kernel_data(phi)
    cok, cok_proj = cokernel_presentation(phi)
    img, img_inc = image_presentation(phi)
    return (ker, ker_inc), (cok, cok_proj), (img, img_inc)


# ---------------------------------------------------------------------------
# Resolutions
# ---------------------------------------------------------------------------

class Resolution:
    """Minimal graded free resolution prefix of a module.

    ``f_degs[i]`` are the generator degrees of F_i; ``diffs[i]`` is the
    matrix of d_{i+1}: F_{i+1} -> F_i, stored column-wise.  ``mp`` is the
    minimal presentation the resolution starts from.
    """

    def __init__(self, M: GradedModule):
        self.module = M
        self.mp = minimal_presentation(M)
        M0 = self.mp.module
        self.f_degs = [tuple(M0.gen_degs)]
        self.diffs: list[list] = []
        self._frontier_cols = [list(c) for c in M0.columns]
        self._frontier_degs = list(M0.col_degs)

    @property
    def length(self) -> int:
        return len(self.f_degs) - 1

    def betti(self, i: int) -> int:
        self.extend(i)
        if i > self.length:
            return 0
        return len(self.f_degs[i])

    def extend(self, length: int):
        ring = self.module.ring
        while self.length < length:
            cols = self._frontier_cols
            degs = self._frontier_degs
            if not cols:
                if not self.f_degs[-1]:
                    return  # resolution already terminated
                self.f_degs.append(())
                self.diffs.append([])
                self._frontier_cols = []
                self._frontier_degs = []
                continue
            self.f_degs.append(tuple(degs))
            self.diffs.append([tuple(c) for c in cols])
            row_degs = self.f_degs[-1]
            syz, sdegs, _ = matrix_syzygies(ring, self.f_degs[-2], cols)
            kept = minimal_column_generators(ring, row_degs, syz, sdegs)
            self._frontier_cols = [syz[j] for j in kept]
            self._frontier_degs = [sdegs[j] for j in kept]

    def differential(self, i: int):
        """Columns of d_i: F_i -> F_{i-1} (1-based)."""
        self.extend(i)
        if i < 1 or i > self.length:
            return []
        return self.diffs[i - 1]

    def syzygy_module(self, i: int) -> GradedModule:
        """Omega^i = image of d_i, presented as coker(d_{i+1})."""
        if i == 0:
            return self.mp.module
        self.extend(i + 1)
        if i > self.length:
            return GradedModule(self.module.ring, (), (), minimal=True)
        gen_degs = self.f_degs[i]
        rels = self.differential(i + 1)
        return GradedModule(self.module.ring, gen_degs, rels, minimal=True)


def resolution(M: GradedModule) -> Resolution:
    if "resolution" not in M._cache:
        M._cache["resolution"] = Resolution(M)
    return M._cache["resolution"]


def free_resolution(M: GradedModule, length: int) -> Resolution:
    res = resolution(M)
    res.extend(length)
    return res


def syzygy(M: GradedModule, i: int) -> GradedModule:
    return resolution(M).syzygy_module(i)


# ---------------------------------------------------------------------------
# Direct sums
# ---------------------------------------------------------------------------

def direct_sum(parts: Sequence[GradedModule]):
    """Block sum with recorded injections and projections.

    Returns (module, iotas, pis); the module remembers its parts, which the
    Hom/Ext machinery exploits.
    """
    if not parts:
        raise ValueError("direct sum of nothing")
    ring = parts[0].ring
    for P in parts:
        ring.same_ring(P.ring)
    gen_degs = []
    offsets = []
    for P in parts:
        offsets.append(len(gen_degs))
        gen_degs.extend(P.gen_degs)
    total = len(gen_degs)
    cols = []
    for pi_idx, P in enumerate(parts):
        off = offsets[pi_idx]
        for col in P.columns:
            big = [ring.zero()] * total
            for i, f in enumerate(col):
                big[off + i] = f
            cols.append(big)
    M = GradedModule(ring, gen_degs, cols, minimal=all(P.minimal for P in parts))
    M._sum_parts = (tuple(parts), tuple(offsets))
    iotas = []
    pis = []
    for pi_idx, P in enumerate(parts):
        off = offsets[pi_idx]
        imat = [[ring.zero() for _ in range(P.ngens)] for _ in range(total)]
        for i in range(P.ngens):
            imat[off + i][i] = ring.one()
        pmat = [[ring.zero() for _ in range(total)] for _ in range(P.ngens)]
        for i in range(P.ngens):
            pmat[i][off + i] = ring.one()
        iotas.append(ModuleMap(P, M, imat, check=False))
        pis.append(ModuleMap(M, P, pmat, check=False))
    return M, iotas, pis


def sum_parts(M: GradedModule):
    return getattr(M, "_sum_parts", None)


# ---------------------------------------------------------------------------
# Length, Hilbert data, truncations
# ---------------------------------------------------------------------------

class LengthData:
    def __init__(self, module, finite, length, table):
        self.module = module
        self.finite = finite
        self.length = length  # None when not finite
        self.table = table    # degree -> dim, complete when finite

    def hilbert_function(self, d: int) -> int:
        if d in self.table:
            return self.table[d]
        return self.module.piece(d).dim


def length_and_hilbert(M: GradedModule) -> LengthData:
    ring = M.ring
    gb = M.rel_gb
    # leading monomial ideal per component
    leads: dict[int, list] = {i: [] for i in range(M.ngens)}
    for pos, vec in enumerate(gb.basis):
        comp, mono, _ = gb.order.lead(vec)
        leads[comp].append(mono)
    total = 0
    table: dict[int, int] = {}
    for i in range(M.ngens):
        L = leads[i]
        bounds = []
        for v in range(ring.nvars):
            pure = [m[v] for m in L if all(e == 0 for w, e in enumerate(m) if w != v) and m[v] > 0]
            if not pure:
                return LengthData(M, False, None, {})
            bounds.append(min(pure))
        # enumerate the finite box of standard monomials
        def rec(v, partial):
            nonlocal total
            if v == ring.nvars:
                mono = tuple(partial)
                if not any(mono_div(mono, l) is not None for l in L):
                    d = ring.wdeg(mono) + M.gen_degs[i]
                    table[d] = table.get(d, 0) + 1
                    total += 1
                return
            for e in range(bounds[v]):
                rec(v + 1, partial + [e])
        rec(0, [])
    return LengthData(M, True, total, table)


def truncation_module(ring: GradedRing, n: int) -> GradedModule:
    """R/m^n, presented by the exponent-sum-n monomials."""
    if n < 1:
        raise ValueError("truncation exponent must be >= 1")
    cols = []
    seen = set()
    for mono in power_monomials(ring, n):
        f = ring.reduce(Polynomial(ring, {mono: 1}))
        if f.is_zero():
            continue
        key = frozenset(f.terms.items())
        if key in seen:
            continue
        seen.add(key)
        cols.append([f])
    return GradedModule(ring, (0,), cols)


# ---------------------------------------------------------------------------
# Finite-length submodule, depth
# ---------------------------------------------------------------------------

def annihilated_by_power(M: GradedModule, t: int):
    """Generators of (0 :_M m^t) as elements of M."""
    ring = M.ring
    monos = power_monomials(ring, t)
    tgt_parts = [shifted(M, ring.wdeg(mono)) for mono in monos]
    big, _, _ = direct_sum(tgt_parts)
    mat = [[ring.zero() for _ in range(M.ngens)] for _ in range(big.ngens)]
    for b, mono in enumerate(monos):
        off = b * M.ngens
        for i in range(M.ngens):
            mat[off + i][i] = Polynomial(ring, {mono: 1})
    phi = ModuleMap(M, big, mat, check=False)
    ker, inc = kernel_data(phi)
    return ker, inc


def finite_length_submodule(M: GradedModule):
    """(H0, inclusion, quotient, projection): the largest finite-length
    submodule, by stabilizing (0 : m^t)."""
    ring = M.ring
    prev_mod, prev_inc = annihilated_by_power(M, 1)
    t = 1
    while True:
        t += 1
        cur_mod, cur_inc = annihilated_by_power(M, t)
        # stabilized when every new generator lies in the old submodule
        old_cols = [tuple(prev_inc.matrix[i][j] for i in range(M.ngens)) for j in range(prev_mod.ngens)]
        gb = module_membership_gb(ring, M.gen_degs, [list(c) for c in old_cols] + [list(c) for c in M.columns])
        stable = True
        for j in range(cur_mod.ngens):
            col = [cur_inc.matrix[i][j] for i in range(M.ngens)]
            if not gb.contains(vec_from_polys(col)):
                stable = False
                break
        if stable:
            break
        prev_mod, prev_inc = cur_mod, cur_inc
    quot, proj = cokernel_presentation(prev_inc)
    return prev_mod, prev_inc, quot, proj


def depth(M: GradedModule) -> int:
    """min { i : Ext^i(k, M) != 0 }, scanned up to dim R."""
    if minimal_generator_count(M) == 0:
        raise ZeroModuleError("depth of the zero module is undefined")
    from .homext import ext_module  # local import; homext depends on modlib
    ring = M.ring
    k = residue_field(ring)
    top = ring.krull_dim
    for i in range(top + 1):
        ext = ext_module(k, M, i)
        if ext.nonzero():
            return i
    raise AssertionError("Ext^i(k, M) vanished through dim R; impossible for M != 0")


# ---------------------------------------------------------------------------
# Fitting ideals and the punctured-spectrum rank certificate
# ---------------------------------------------------------------------------

class MinorEngine:
    """Memoized sparse Laplace expansion of minors of a polynomial matrix.

    Intermediate minors are kept unreduced (over the cover ring); only
    ``reduced_minor`` normal-forms the result, so each distinct top-level
    minor costs one reduction."""

    def __init__(self, ring: GradedRing, rows, work_cap=None):
        self.ring = ring
        self.rows = rows  # row-major entries, reduced
        self.memo: dict = {}
        self.work = 0
        self.work_cap = work_cap or config.DEFAULT_MINOR_WORK_CAP

    def minor(self, row_idx: tuple, col_idx: tuple) -> Polynomial:
        ring = self.ring
        if not row_idx:
            return ring.one()
        key = (row_idx, col_idx)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.work += 1
        if self.work > self.work_cap:
            raise MinorWorkGuardError(
                f"minor enumeration exceeded the work cap ({self.work_cap}); raise it in the call"
            )
        # expand along the sparsest row of the submatrix
        best, best_count = None, None
        for pos, r in enumerate(row_idx):
            count = sum(1 for c in col_idx if not self.rows[r][c].is_zero())
            if best_count is None or count < best_count:
                best, best_count = pos, count
            if count == 0:
                break
        r = row_idx[best]
        rest_rows = row_idx[:best] + row_idx[best + 1:]
        acc = ring.zero()
        for cpos, c in enumerate(col_idx):
            entry = self.rows[r][c]
            if entry.is_zero():
                continue
            sub = self.minor(rest_rows, col_idx[:cpos] + col_idx[cpos + 1:])
            if sub.is_zero():
                continue
            term = entry * sub
            if (best + cpos) % 2:
                term = -term
            acc = acc + term
        self.memo[key] = acc
        return acc

    def reduced_minor(self, row_idx: tuple, col_idx: tuple) -> Polynomial:
        return self.ring.reduce(self.minor(row_idx, col_idx))


def _has_column_matching(supports, size: int) -> bool:
    """Hall feasibility: can the chosen columns be matched injectively into
    their support rows?  A failed matching forces every minor on these
    columns to vanish."""
    match: dict = {}

    def augment(c, seen):
        for r in supports[c]:
            if r in seen:
                continue
            seen.add(r)
            if r not in match or augment(match[r], seen):
                match[r] = c
                return True
        return False

    count = 0
    for c in range(len(supports)):
        if augment(c, set()):
            count += 1
    return count >= size


def _fitting_minors_iter(M: GradedModule, size: int, engine: MinorEngine):
    """All size x size minors that are not structurally zero, reduced.

    Rows are drawn from the union of the chosen columns' supports; column
    subsets failing the Hall condition (no injective column -> support-row
    matching) are pruned before any polynomial arithmetic."""
    from itertools import combinations

    supports = []
    for j in range(M.nrels):
        supports.append(frozenset(i for i in range(M.ngens) if not M.columns[j][i].is_zero()))
    ncols = M.nrels

    def rec(start, chosen, union):
        if len(chosen) == size:
            if len(union) < size:
                return
            if not _has_column_matching([supports[j] for j in chosen], size):
                return
            for rsub in combinations(sorted(union), size):
                if not _has_column_matching([supports[j] & set(rsub) for j in chosen], size):
                    continue
                yield engine.reduced_minor(tuple(rsub), tuple(chosen))
            return
        remaining = ncols - start
        if remaining < size - len(chosen):
            return
        reachable = set(union)
        for j in range(start, ncols):
            reachable |= supports[j]
        if len(reachable) < size:
            return
        for j in range(start, ncols):
            yield from rec(j + 1, chosen + [j], union | supports[j])

    yield from rec(0, [], frozenset())


def fitting_ideal(M: GradedModule, j: int, work_cap=None) -> IdealHandle:
    """Fitt_j(M): ideal of (ngens - j)-minors of the presentation matrix."""
    if j < 0:
        raise ValueError("fitting index must be >= 0")
    ring = M.ring
    size = M.ngens - j
    if size <= 0:
        return IdealHandle(ring, [ring.one()])
    if size > M.ngens or size > M.nrels:
        return IdealHandle(ring, [ring.zero()])
    engine = MinorEngine(ring, M.relation_matrix(), work_cap)
    gens = []
    seen = set()
    for val in _fitting_minors_iter(M, size, engine):
        if val.is_zero():
            continue
        if val.degree() == 0:
            return IdealHandle(ring, [ring.one()])
        key = frozenset(val.terms.items())
        if key not in seen:
            seen.add(key)
            gens.append(val)
    if not gens:
        gens = [ring.zero()]
    return IdealHandle(ring, gens)


def zero_saturation_ideal(ring: GradedRing) -> IdealHandle:
    """H^0_m(R) = (0 : m^infinity) as an ideal of R."""
    zero = IdealHandle(ring, [ring.zero()])
    return saturation(zero, maximal_ideal(ring))


class RankCertificate:
    """Outcome of the punctured-spectrum local-freeness check at rank t."""

    def __init__(self, module, t):
        self.module = module
        self.t = t
        self.fitt_low_zero = False
        self.fitt_t_m_primary = False
        self.witnesses = []
        self.passed = False
        self.notes = []

    def as_dict(self):
        return {
            "t": self.t,
            "fitt_low_zero": self.fitt_low_zero,
            "fitt_t_m_primary": self.fitt_t_m_primary,
            "witnesses": self.witnesses,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def rank_punctured_certificate(M: GradedModule, t: int, witness_primes=(), work_cap=None) -> RankCertificate:
    """Certify that M is free of rank t away from the irrelevant maximal
    ideal: Fitt_{t-1} must vanish into H^0_m(R) and Fitt_t must be m-primary
    (or the unit ideal).  Witness primes get spot checks."""
    if t < 0:
        raise ValueError("rank must be >= 0")
    ring = M.ring
    cert = RankCertificate(M, t)
    h0 = zero_saturation_ideal(ring)
    h0_is_zero = h0.is_zero()

    low_size = M.ngens - (t - 1)
    if t == 0:
        cert.fitt_low_zero = True
        cert.notes.append("Fitt_{-1} = 0 by convention")
        low_gens = []
    elif low_size <= 0:
        cert.fitt_low_zero = h0.is_unit()
        cert.notes.append("Fitt_low is the unit ideal")
        low_gens = [ring.one()]
    elif low_size > M.nrels:
        cert.fitt_low_zero = True
        cert.notes.append("Fitt_low = 0: no minors of that size")
        low_gens = []
    else:
        engine = MinorEngine(ring, M.relation_matrix(), work_cap)
        low_gens = []
        ok = True
        for val in _fitting_minors_iter(M, low_size, engine):
            if val.is_zero():
                continue
            low_gens.append(val)
            if h0_is_zero or not h0.contains(val):
                if h0_is_zero:
                    ok = False
                    cert.notes.append(f"nonzero minor of size {low_size}: {val}")
                    break
                ok = False
                cert.notes.append(f"minor of size {low_size} outside H0_m(R): {val}")
                break
        cert.fitt_low_zero = ok

    t_size = M.ngens - t
    if t_size <= 0:
        cert.fitt_t_m_primary = True
        cert.notes.append("Fitt_t is the unit ideal")
        t_gens = [ring.one()]
    elif t_size > M.nrels:
        cert.fitt_t_m_primary = False
        cert.notes.append("Fitt_t = 0: no minors of that size")
        t_gens = []
    else:
        engine = MinorEngine(ring, M.relation_matrix(), work_cap)
        t_gens = []
        found = False
        pending = 0
        for val in _fitting_minors_iter(M, t_size, engine):
            if val.is_zero():
                continue
            if val.degree() == 0:
                t_gens = [ring.one()]
                found = True
                break
            t_gens.append(val)
            pending += 1
            if pending >= 8:
                pending = 0
                if is_m_primary(IdealHandle(ring, t_gens)):
                    found = True
                    break
        if not found and t_gens:
            found = is_m_primary(IdealHandle(ring, t_gens))
        cert.fitt_t_m_primary = found

    for prime in witness_primes:
        entry = {"prime": [str(g) for g in prime.generators]}
        entry["fitt_t_not_contained"] = any(not prime.contains(g) for g in t_gens)
        if not low_gens:
            entry["fitt_low_locally_zero"] = True
        else:
            ok = True
            for g in low_gens:
                if ring.is_zero_mod(g):
                    continue
                ann = _annihilator_of_element(ring, g)
                if not any(not prime.contains(a) for a in ann.generators):
                    ok = False
                    break
            entry["fitt_low_locally_zero"] = ok
        cert.witnesses.append(entry)

    cert.passed = (
        cert.fitt_low_zero
        and cert.fitt_t_m_primary
        and all(w["fitt_t_not_contained"] and w["fitt_low_locally_zero"] for w in cert.witnesses)
    )
    return cert


def _annihilator_of_element(ring: GradedRing, f: Polynomial) -> IdealHandle:
    """(0 : f) over R."""
    cols = [[f]]
    syz, _, _ = matrix_syzygies(ring, (0,), cols)
    gens = [col[0] for col in syz if not col[0].is_zero()]
    if not gens:
        gens = [ring.zero()]
    return IdealHandle(ring, gens)


def punctured_rank(M: GradedModule, witness_primes=(), work_cap=None):
    """Smallest t whose rank certificate passes, with the certificate; or
    (None, last failing certificate)."""
    last = None
    for t in range(0, M.ngens + 1):
        cert = rank_punctured_certificate(M, t, witness_primes, work_cap)
        if cert.passed:
            return t, cert
        last = cert
    return None, last
