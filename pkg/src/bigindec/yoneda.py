"""Extensions as first-class short exact sequences.

Pullbacks realize the right action of Hom on extension classes; pushouts
materialize a cocycle as an explicit middle module.  The splitting test is
an exact inhomogeneous linear solve in the degree-zero part of Hom(M, X):
unsolvability certifies non-splitting with no numerics involved.
"""

from __future__ import annotations

import numpy as np

from .errors import RingMismatchError
from .linalg import solve
from .homext import ExtClass, ext_module, resolution
from .modlib import (
    GradedModule,
    ModuleMap,
    cokernel_presentation,
    direct_sum,
    kernel_data,
    minimal_generator_count,
    shifted,
    sum_parts,
)
from .ringkernel import Polynomial, module_membership_gb, vec_from_polys


class ShortExactSequence:
    """0 -> N --iota--> X --pi--> M -> 0 (degree-zero graded maps)."""

    def __init__(self, iota: ModuleMap, pi: ModuleMap):
        if iota.target is not pi.source:
            raise ValueError("iota and pi do not share the middle module")
        self.iota = iota
        self.pi = pi
        self.verified = False

    @property
    def left(self) -> GradedModule:
        return self.iota.source

    @property
    def middle(self) -> GradedModule:
        return self.iota.target

    @property
    def right(self) -> GradedModule:
        return self.pi.target

    def __repr__(self):
        return f"<SES {self.left.ngens} -> {self.middle.ngens} -> {self.right.ngens}>"


class ExactnessReport:
    def __init__(self, ok: bool, failure: str | None = None):
        self.ok = ok
        self.failure = failure

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "<exact>" if self.ok else f"<not exact: {self.failure}>"


def verify_exact(S: ShortExactSequence) -> ExactnessReport:
    """Check pi o iota = 0, injectivity, surjectivity, ker pi = im iota."""
    comp = S.pi.compose(S.iota)
    if not comp.is_zero_map():
        return ExactnessReport(False, "compose_nonzero")
    ker_iota, _ = kernel_data(S.iota)
    if minimal_generator_count(ker_iota) != 0:
        return ExactnessReport(False, "iota_not_injective")
    coker_pi, _ = cokernel_presentation(S.pi)
    if coker_pi.ngens != 0:
        return ExactnessReport(False, "pi_not_surjective")
    ker_pi, ker_inc = kernel_data(S.pi)
    X = S.middle
    iota_cols = [tuple(S.iota.matrix[i][j] for i in range(X.ngens)) for j in range(S.left.ngens)]
    ker_cols = [tuple(ker_inc.matrix[i][j] for i in range(X.ngens)) for j in range(ker_pi.ngens)]
    gb_image = module_membership_gb(X.ring, X.gen_degs, [list(c) for c in iota_cols] + [list(c) for c in X.columns])
    for col in ker_cols:
        if not gb_image.contains(vec_from_polys(list(col))):
            return ExactnessReport(False, "kernel_not_in_image")
    gb_kernel = module_membership_gb(X.ring, X.gen_degs, [list(c) for c in ker_cols] + [list(c) for c in X.columns])
    for col in iota_cols:
        if not gb_kernel.contains(vec_from_polys(list(col))):
            return ExactnessReport(False, "image_not_in_kernel")
    S.verified = True
    return ExactnessReport(True)


def find_splitting(S: ShortExactSequence):
    """A section sigma: M -> X with pi o sigma = id, or None.

    Solved exactly as a linear system over k in the degree-zero graded
    piece; a degree-zero section exists whenever any section does.
    """
    X, M = S.middle, S.right
    ring = X.ring
    p = ring.char
    entries = []
    for i in range(X.ngens):
        for j in range(M.ngens):
            for u in ring.std_monomials_of_degree(M.gen_degs[j] - X.gen_degs[i]):
                entries.append((i, j, u))
    width = len(entries)
    rows = []
    rhs = []
    # well-definedness: sigma kills the relations of M (in X)
    for rc in range(M.nrels):
        col = M.columns[rc]
        dc = M.col_degs[rc]
        piece = X.piece(dc)
        if piece.dim == 0:
            continue
        block = [[0] * width for _ in range(piece.dim)]
        for pos, (i, j, u) in enumerate(entries):
            f = col[j]
            if f.is_zero():
                continue
            elem = [ring.zero()] * X.ngens
            elem[i] = ring.reduce(f.mono_multiple(u))
            for r, val in enumerate(piece.coords(elem)):
                if val:
                    block[r][pos] = val
        rows.extend(block)
        rhs.extend([0] * len(block))
    # section property: pi(sigma(gen_j)) = gen_j in M
    for j in range(M.ngens):
        piece = M.piece(M.gen_degs[j])
        if piece.dim == 0:
            continue
        block = [[0] * width for _ in range(piece.dim)]
        for pos, (i, jj, u) in enumerate(entries):
            if jj != j:
                continue
            elem = [ring.zero()] * M.ngens
            for k in range(M.ngens):
                f = S.pi.matrix[k][i]
                if not f.is_zero():
                    elem[k] = elem[k] + f.mono_multiple(u)
            elem = [ring.reduce(f) for f in elem]
            for r, val in enumerate(piece.coords(elem)):
                if val:
                    block[r][pos] = val
        target = piece.coords(M.generator(j))
        rows.extend(block)
        rhs.extend(target)
    if not rows:
        sol = np.zeros(width, dtype=np.int64)
    else:
        sol = solve(np.array(rows, dtype=np.int64), np.array(rhs, dtype=np.int64), p)
    if sol is None:
        return None
    mat = [[ring.zero() for _ in range(M.ngens)] for _ in range(X.ngens)]
    for pos, (i, j, u) in enumerate(entries):
        c = int(sol[pos]) % p
        if c:
            mat[i][j] = mat[i][j] + Polynomial(ring, {u: c})
    return ModuleMap(M, X, mat, check=False)


def is_split(S: ShortExactSequence) -> bool:
    return find_splitting(S) is not None


# ---------------------------------------------------------------------------
# Pullback / pushout
# ---------------------------------------------------------------------------

def _express_in_columns(ring, row_degs, columns, extra_columns, target):
    """Coefficients of target over `columns`, allowing slack in extras."""
    gb = module_membership_gb(ring, row_degs, [list(c) for c in columns] + [list(c) for c in extra_columns])
    combo = gb.express(vec_from_polys(list(target)))
    if combo is None:
        return None
    out = [ring.zero()] * len(columns)
    for (idx, m), c in combo.items():
        if idx < len(columns):
            out[idx] = out[idx] + Polynomial(ring, {m: c})
    return [ring.reduce(f) for f in out]


def pullback(S: ShortExactSequence, f: ModuleMap) -> ShortExactSequence:
    """The sequence alpha.f: pull S back along f: M' -> M.

    A degree-d map is first normalized to a degree-zero map out of the
    shifted module, so the result is a graded sequence over M'(-d).
    """
    if f.target is not S.right:
        raise ValueError("pullback map must land in the right module")
    if f.shift != 0:
        f = ModuleMap(shifted(f.source, f.shift), f.target, f.matrix, 0, check=False)
    X, M, Mp = S.middle, S.right, f.source
    ring = X.ring
    big, _, _ = direct_sum([X, Mp])
    mat = [[ring.zero() for _ in range(big.ngens)] for _ in range(M.ngens)]
    for k in range(M.ngens):
        for i in range(X.ngens):
            mat[k][i] = S.pi.matrix[k][i]
        for j in range(Mp.ngens):
            mat[k][X.ngens + j] = -f.matrix[k][j]
    phi = ModuleMap(big, M, mat, check=False)
    Q, inc = kernel_data(phi)
    # iota_Q: N -> Q via (iota(n), 0)
    q_cols = [tuple(inc.matrix[i][j] for i in range(big.ngens)) for j in range(Q.ngens)]
    iq_mat = [[ring.zero() for _ in range(S.left.ngens)] for _ in range(Q.ngens)]
    for n in range(S.left.ngens):
        target = [S.iota.matrix[i][n] for i in range(X.ngens)] + [ring.zero()] * Mp.ngens
        coeffs = _express_in_columns(ring, big.gen_degs, q_cols, big.columns, target)
        if coeffs is None:
            raise AssertionError("left module failed to embed into the pullback")
        for t, c in enumerate(coeffs):
            iq_mat[t][n] = c
    iota_q = ModuleMap(S.left, Q, iq_mat, check=False)
    # pi_Q: Q -> M': the M' block of the inclusion
    pq_mat = [[inc.matrix[X.ngens + j][t] for t in range(Q.ngens)] for j in range(Mp.ngens)]
    pi_q = ModuleMap(Q, Mp, pq_mat, check=False)
    out = ShortExactSequence(iota_q, pi_q)
    report = verify_exact(out)
    if not report:
        raise AssertionError(f"pullback produced a non-exact sequence: {report.failure}")
    return out


def pushout_extension(c: ExtClass) -> ShortExactSequence:
    """Materialize a cocycle as 0 -> N(shift) -> X -> M -> 0.

    X is presented on the generators of N and F0 with one relation per
    generator z of Omega^1(M): (c(z), -z)."""
    M, N = c.M, c.N
    ring = M.ring
    res = resolution(M)
    res.extend(1)
    f0 = res.f_degs[0]
    d1 = res.differential(1)
    b1 = len(res.f_degs[1]) if res.length >= 1 else 0
    Nsh = shifted(N, -c.degree)
    gen_degs = list(Nsh.gen_degs) + list(f0)
    nN = N.ngens
    cols = []
    for col in Nsh.columns:
        cols.append(list(col) + [ring.zero()] * len(f0))
    for t in range(b1):
        col = [c.matrix[k][t] for k in range(nN)] + [ring.zero()] * len(f0)
        for l in range(len(f0)):
            col[nN + l] = -d1[t][l]
        cols.append(col)
    X = GradedModule(ring, gen_degs, cols)
    imat = [[ring.zero() for _ in range(nN)] for _ in range(X.ngens)]
    for k in range(nN):
        imat[k][k] = ring.one()
    iota = ModuleMap(Nsh, X, imat, check=False)
    mp = res.mp
    pmat = [[ring.zero() for _ in range(X.ngens)] for _ in range(M.ngens)]
    for l in range(len(f0)):
        for i in range(M.ngens):
            pmat[i][nN + l] = mp.from_min.matrix[i][l]
    pi = ModuleMap(X, M, pmat, check=False)
    out = ShortExactSequence(iota, pi)
    report = verify_exact(out)
    if not report:
        raise AssertionError(f"pushout produced a non-exact sequence: {report.failure}")
    return out


def extension_class(S: ShortExactSequence, N: GradedModule | None = None, degree: int | None = None) -> ExtClass:
    """The class of a verified sequence as a cocycle Omega^1(M) -> N.

    By default the class is taken over (right, left) with degree 0; pass the
    unshifted N and its degree to re-express a shifted sequence."""
    M = S.right
    ring = M.ring
    res = resolution(M)
    res.extend(1)
    f0 = res.f_degs[0]
    d1 = res.differential(1)
    b1 = len(res.f_degs[1]) if res.length >= 1 else 0
    X = S.middle
    mp = res.mp
    # lift each minimal generator of M through pi
    pi_cols = [tuple(S.pi.matrix[i][j] for i in range(M.ngens)) for j in range(X.ngens)]
    lifts = []
    for l in range(len(f0)):
        target = [mp.from_min.matrix[i][l] for i in range(M.ngens)]
        coeffs = _express_in_columns(ring, M.gen_degs, pi_cols, M.columns, target)
        if coeffs is None:
            raise AssertionError("pi is not surjective; cannot take the class")
        lifts.append(coeffs)  # element of X per F0-generator
    iota_cols = [tuple(S.iota.matrix[i][j] for i in range(X.ngens)) for j in range(S.left.ngens)]
    mat = [[ring.zero() for _ in range(b1)] for _ in range(S.left.ngens)]
    for t in range(b1):
        elem = [ring.zero()] * X.ngens
        for l in range(len(f0)):
            f = d1[t][l]
            if f.is_zero():
                continue
            for i in range(X.ngens):
                elem[i] = elem[i] + f * lifts[l][i]
        elem = [ring.reduce(e) for e in elem]
        coeffs = _express_in_columns(ring, X.gen_degs, iota_cols, X.columns, elem)
        if coeffs is None:
            raise AssertionError("sigma of a syzygy escaped the image of iota")
        for k in range(S.left.ngens):
            mat[k][t] = coeffs[k]
    if N is None:
        return ExtClass(M, S.left, mat, 0)
    return ExtClass(M, N, mat, degree if degree is not None else 0)


# ---------------------------------------------------------------------------
# phi and psi: splitting Ext over direct sums, End as a matrix algebra
# ---------------------------------------------------------------------------

def _block_column_map(Msum: GradedModule):
    """For a recorded sum: per summand, the positions of its Omega^1
    generators among the columns of d_1(Msum), by content matching."""
    parts, offsets = sum_parts(Msum)
    res = resolution(Msum)
    res.extend(1)
    d1 = res.differential(1)
    mapping = []  # column index -> (part index, column index in the part)
    counters = {}
    part_cols = {}
    for pi_idx, P in enumerate(parts):
        pres = resolution(P)
        pres.extend(1)
        part_cols[pi_idx] = pres.differential(1)
    for t, col in enumerate(d1):
        support = {i for i, f in enumerate(col) if not f.is_zero()}
        owners = set()
        for pi_idx, P in enumerate(parts):
            off = offsets[pi_idx]
            if any(off <= i < off + P.ngens for i in support):
                owners.add(pi_idx)
        if len(owners) != 1:
            raise AssertionError("direct-sum resolution mixed its blocks")
        pi_idx = owners.pop()
        off = offsets[pi_idx]
        resticted = [col[off + i] for i in range(parts[pi_idx].ngens)]
        match = None
        for tt, pcol in enumerate(part_cols[pi_idx]):
            if all(a == b for a, b in zip(resticted, pcol)):
                if counters.get((pi_idx, tt)):
                    continue
                match = tt
                break
        if match is None:
            raise AssertionError("summand column did not match the block resolution")
        counters[(pi_idx, match)] = True
        mapping.append((pi_idx, match))
    return mapping


def phi_split(alpha: ExtClass):
    """[alpha . iota_1, ..., alpha . iota_n] for alpha over a recorded sum."""
    Msum = alpha.M
    parts_info = sum_parts(Msum)
    if parts_info is None:
        raise ValueError("phi requires a recorded direct sum")
    parts, _ = parts_info
    mapping = _block_column_map(Msum)
    ring = Msum.ring
    out = []
    for pi_idx, P in enumerate(parts):
        pres = resolution(P)
        pres.extend(1)
        b1 = len(pres.f_degs[1]) if pres.length >= 1 else 0
        mat = [[ring.zero() for _ in range(b1)] for _ in range(alpha.N.ngens)]
        for t, (owner, tt) in enumerate(mapping):
            if owner != pi_idx:
                continue
            for k in range(alpha.N.ngens):
                mat[k][tt] = alpha.matrix[k][t]
        out.append(ExtClass(P, alpha.N, mat, alpha.degree))
    return tuple(out)


def phi_inverse(classes, Msum: GradedModule | None = None) -> ExtClass:
    """Assemble one class over the direct sum from classes over the parts,
    through the pushout of the summed sequences along the addition map."""
    if not classes:
        raise ValueError("need at least one class")
    N = classes[0].N
    ring = N.ring
    for c in classes:
        if c.N is not N:
            raise ValueError("classes must share the right-hand module")
        if c.degree != classes[0].degree:
            raise ValueError("classes must share one degree (shift the left modules)")
    if Msum is None:
        Msum, _, _ = direct_sum([c.M for c in classes])
    parts_info = sum_parts(Msum)
    if parts_info is None or len(parts_info[0]) != len(classes):
        raise ValueError("Msum must be the recorded sum of the classes' modules")
    seqs = [pushout_extension(c) for c in classes]
    Xsum, x_iotas, _ = direct_sum([s.middle for s in seqs])
    Nsh = seqs[0].left
    Nsum, n_iotas, _ = direct_sum([s.left for s in seqs])
    # iota_sum: Nsum -> Xsum, pi_sum: Xsum -> Msum (blockwise)
    isum = [[ring.zero() for _ in range(Nsum.ngens)] for _ in range(Xsum.ngens)]
    psum = [[ring.zero() for _ in range(Xsum.ngens)] for _ in range(Msum.ngens)]
    xoff = 0
    noff = 0
    moff = 0
    for s in seqs:
        for i in range(s.middle.ngens):
            for j in range(s.left.ngens):
                isum[xoff + i][noff + j] = s.iota.matrix[i][j]
        for i in range(s.right.ngens):
            for j in range(s.middle.ngens):
                psum[moff + i][xoff + j] = s.pi.matrix[i][j]
        xoff += s.middle.ngens
        noff += s.left.ngens
        moff += s.right.ngens
    # nabla: Nsum -> Nsh, the addition of the copies
    nabla = [[ring.zero() for _ in range(Nsum.ngens)] for _ in range(Nsh.ngens)]
    noff = 0
    for s in seqs:
        for k in range(Nsh.ngens):
            nabla[k][noff + k] = ring.one()
        noff += s.left.ngens
    # pushout P = coker(Nsum -> Xsum + Nsh)
    gen_degs = list(Xsum.gen_degs) + list(Nsh.gen_degs)
    cols = []
    for col in Xsum.columns:
        cols.append(list(col) + [ring.zero()] * Nsh.ngens)
    for col in Nsh.columns:
        cols.append([ring.zero()] * Xsum.ngens + list(col))
    for j in range(Nsum.ngens):
        col = [isum[i][j] for i in range(Xsum.ngens)] + [-nabla[k][j] for k in range(Nsh.ngens)]
        cols.append(col)
    P = GradedModule(ring, gen_degs, cols)
    imat = [[ring.zero() for _ in range(Nsh.ngens)] for _ in range(P.ngens)]
    for k in range(Nsh.ngens):
        imat[Xsum.ngens + k][k] = ring.one()
    iota_p = ModuleMap(Nsh, P, imat, check=False)
    pmat = [[ring.zero() for _ in range(P.ngens)] for _ in range(Msum.ngens)]
    for i in range(Msum.ngens):
        for j in range(Xsum.ngens):
            pmat[i][j] = psum[i][j]
    pi_p = ModuleMap(P, Msum, pmat, check=False)
    S = ShortExactSequence(iota_p, pi_p)
    report = verify_exact(S)
    if not report:
        raise AssertionError(f"phi_inverse produced a non-exact sequence: {report.failure}")
    return extension_class(S, N=N, degree=classes[0].degree)


def psi_matrix(b: ModuleMap):
    """psi(b) = B^T for b in End(sum M_i), B = (pi_j o b o iota_i).

    Entry (u, v) of the result is a map M_v -> M_u, so products of psi
    matrices compose entrywise."""
    Msum = b.source
    parts_info = sum_parts(Msum)
    if parts_info is None:
        raise ValueError("psi requires a recorded direct sum")
    from .homext import _sum_maps
    iotas, pis = _sum_maps(Msum)
    n = len(parts_info[0])
    return [[pis[u].compose(b).compose(iotas[v]) for v in range(n)] for u in range(n)]


def psi_mul(P, Q):
    """Matrix product of psi matrices with entrywise composition."""
    n = len(P)
    out = []
    for u in range(n):
        row = []
        for v in range(n):
            acc = None
            for w in range(n):
                term = P[u][w].compose(Q[w][v])
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def psi_equal(P, Q) -> bool:
    n = len(P)
    return all(P[u][v].equals(Q[u][v]) for u in range(n) for v in range(n))
