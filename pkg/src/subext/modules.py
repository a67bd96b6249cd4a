"""Finite modules over a ring handle, presented as D-modules with actions.

A CoeffModule is D^f + D/t^a1 + ... + D/t^ak together with one commuting
action matrix per ring generator.  Free coordinates come first, torsion
coordinates follow with nondecreasing exponents.  All functors (Hom, syzygy,
transpose, socle, ...) reduce to exact linear algebra over D through the
Subquotient machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dcoeff import (Mat, Subquotient, hstack, kernel, smith, solve_matrix)
from .errors import (BudgetExceeded, InfiniteLengthError, NotAModuleError,
                     SubextError)
from .rings import FracIdeal, RingElement, canonical_ideal


class CoeffModule:
    """Finite module over a ring handle, as a D-module with ring actions."""

    __slots__ = ("handle", "exps", "actions", "n", "_basis_act", "_cache")

    def __init__(self, handle, exps, actions):
        self.handle = handle
        self.exps = tuple(exps)
        self.n = len(self.exps)
        self.actions = {g: normalize_rows(self.exps, actions[g])
                        for g in handle.gen_names}
        self._basis_act = {}
        self._cache = {}

    # -- structure -----------------------------------------------------------

    def free_rank(self):
        return sum(1 for e in self.exps if e is None)

    def torsion(self):
        return tuple(e for e in self.exps if e is not None)

    def is_zero(self):
        return self.n == 0

    def rel(self):
        """Relation columns: t^a * e_i for each torsion coordinate."""
        base = self.handle.base
        cols = []
        for i, e in enumerate(self.exps):
            if e is not None:
                col = [base.zero()] * self.n
                col[i] = base.t_power(e)
                cols.append(col)
        return Mat.from_cols(base, self.n, cols)

    def reduce_vec(self, vec):
        out = list(vec)
        if self.handle.base.local:
            for i, e in enumerate(self.exps):
                if e is not None:
                    out[i] = out[i].reduce_mod(e)
        return out

    def length(self):
        if self.handle.base.local:
            if self.free_rank():
                raise InfiniteLengthError("module has a free D-summand")
            return sum(self.torsion())
        return self.n

    # -- actions -------------------------------------------------------------

    def basis_action(self, i):
        """Action of the i-th ring basis monomial."""
        if i not in self._basis_act:
            h = self.handle
            out = Mat.identity(h.base, self.n)
            for g in h.basis_factor[i]:
                out = self.actions[g] @ out
            self._basis_act[i] = normalize_rows(self.exps, out)
        return self._basis_act[i]

    def element_action(self, elem):
        h = self.handle
        out = Mat.zeros(h.base, self.n, self.n)
        for i, c in enumerate(elem.coords):
            if c.num:
                ba = self.basis_action(i)
                for r in range(self.n):
                    row, orow = ba.rows[r], out.rows[r]
                    for j in range(self.n):
                        if row[j].num:
                            orow[j] = orow[j] + c * row[j]
        return normalize_rows(self.exps, out)

    def __repr__(self):
        return f"CoeffModule({self.handle.label}; exps={self.exps})"


def normalize_rows(exps, mat):
    """Reduce each torsion row of a matrix into its canonical representative."""
    if not mat.base.local:
        return mat
    rows = []
    for i, row in enumerate(mat.rows):
        e = exps[i] if i < len(exps) else None
        if e is None:
            rows.append(list(row))
        else:
            rows.append([a.reduce_mod(e) for a in row])
    return Mat(mat.base, rows)


class ModMap:
    """R-linear map between CoeffModules, as a D-matrix on coordinates."""

    __slots__ = ("src", "dst", "mat")

    def __init__(self, src, dst, mat):
        self.src = src
        self.dst = dst
        self.mat = normalize_rows(dst.exps, mat)

    @staticmethod
    def identity(M):
        return ModMap(M, M, Mat.identity(M.handle.base, M.n))

    @staticmethod
    def zero(src, dst):
        return ModMap(src, dst, Mat.zeros(src.handle.base, dst.n, src.n))

    def __matmul__(self, other):
        assert other.dst is self.src or other.dst.exps == self.src.exps
        return ModMap(other.src, self.dst, self.mat @ other.mat)

    def __add__(self, other):
        return ModMap(self.src, self.dst, self.mat + other.mat)

    def __sub__(self, other):
        return ModMap(self.src, self.dst, self.mat - other.mat)

    def __neg__(self):
        return ModMap(self.src, self.dst, -self.mat)

    def apply(self, vec):
        return self.dst.reduce_vec(self.mat @ list(vec))

    def is_zero_map(self):
        # rows are normalized modulo the torsion exponents at construction
        return self.mat_is_rel()

    def __eq__(self, other):
        return (isinstance(other, ModMap) and (self - other).is_zero_map())

    def is_r_linear(self):
        """Check commutation with every ring generator (modulo relations)."""
        for g in self.src.handle.gen_names:
            diff = (self.mat @ self.src.actions[g]) - (self.dst.actions[g] @ self.mat)
            if not ModMap(self.src, self.dst, diff).mat_is_rel():
                return False
        # torsion compatibility of columns
        base = self.src.handle.base
        if base.local:
            for j, e in enumerate(self.src.exps):
                if e is not None:
                    col = [a * base.t_power(e) for a in self.mat.col(j)]
                    if any(c.num for c in self.dst.reduce_vec(col)):
                        return False
        return True

    def mat_is_rel(self):
        return all(not a.num for row in normalize_rows(self.dst.exps, self.mat).rows
                   for a in row)


def solve_like(A, b):
    if A.n == 0:
        return all(not x.num for x in b)
    from .dcoeff import solve
    return solve(A, b) is not None


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def free_module(handle, k):
    base = handle.base
    n = k * handle.nR
    actions = {}
    for g in handle.gen_names:
        A = Mat.zeros(base, n, n)
        G = handle.gen_action[g]
        for b in range(k):
            off = b * handle.nR
            for i in range(handle.nR):
                for j in range(handle.nR):
                    if G.rows[i][j].num:
                        A.rows[off + i][off + j] = G.rows[i][j]
        actions[g] = A
    return CoeffModule(handle, (None,) * n, actions)


def regular_module(handle):
    return free_module(handle, 1)


def zero_module(handle):
    return CoeffModule(handle, (),
                       {g: Mat.zeros(handle.base, 0, 0) for g in handle.gen_names})


def residue_field(handle):
    base = handle.base
    if base.local:
        exps = (1,)
    else:
        exps = (None,)
    z = Mat.zeros(base, 1, 1)
    return CoeffModule(handle, exps, {g: z for g in handle.gen_names})


def subquotient_module(handle, ambient_actions, n, U_gens, V_gens):
    """Module U/V in ambient D^n with the given actions; returns (M, sq)."""
    base = handle.base
    sq = Subquotient(base, n, U_gens, V_gens)
    k = len(sq.exps)
    new_actions = {}
    for g in handle.gen_names:
        A = ambient_actions[g]
        cols = []
        for j in range(k):
            ej = [base.zero()] * k
            ej[j] = base.one()
            w = sq.lift(ej)
            cols.append(sq.project(A @ w))
        new_actions[g] = Mat.from_cols(base, k, cols)
    return CoeffModule(handle, sq.exps, new_actions), sq


def submodule(M, gens_mat):
    """Submodule of M spanned (over R) by the given coordinate columns.

    The span must be R-stable; returns (K, incl: K -> M).
    """
    base = M.handle.base
    # close under the R-action: multiply by all ring basis monomials
    cols = []
    for j in range(gens_mat.n):
        v = gens_mat.col(j)
        for b in range(M.handle.nR):
            cols.append(M.basis_action(b) @ v)
    closed = Mat.from_cols(base, M.n, cols)
    rel = M.rel()
    U = hstack(base, [closed, rel], m=M.n)
    K, sq = subquotient_module(M.handle, M.actions, M.n, U, rel)
    incl_cols = []
    for j in range(K.n):
        ej = [base.zero()] * K.n
        ej[j] = base.one()
        incl_cols.append(sq.lift(ej))
    incl = ModMap(K, M, Mat.from_cols(base, M.n, incl_cols))
    return K, incl


def quotient_module(M, gens_mat):
    """M / (R-span of the columns); returns (Q, proj: M -> Q)."""
    base = M.handle.base
    rel = M.rel()
    cols = []
    for j in range(gens_mat.n):
        v = gens_mat.col(j)
        for b in range(M.handle.nR):
            cols.append(M.basis_action(b) @ v)
    closed = Mat.from_cols(base, M.n, cols)
    V = hstack(base, [closed, rel], m=M.n)
    Q, sq = subquotient_module(M.handle, M.actions, M.n,
                               Mat.identity(base, M.n), V)
    proj_cols = []
    for i in range(M.n):
        ei = [base.zero()] * M.n
        ei[i] = base.one()
        proj_cols.append(sq.project(ei))
    proj = ModMap(M, Q, Mat.from_cols(base, Q.n, proj_cols))
    return Q, proj


def from_quotient_ideal(handle, J):
    """R/J as a CoeffModule (J an ideal contained in R)."""
    R = regular_module(handle)
    sp = J.as_ring_ideal().span_basis()
    Q, _ = quotient_module(R, sp)
    return Q


def from_fractional_ideal(handle, J):
    """The fractional ideal J as a CoeffModule (isomorphic to its numerator)."""
    R = regular_module(handle)
    sp = J.span_basis()
    K, _ = submodule(R, sp)
    return K


def direct_sum(mods):
    """Direct sum; returns (S, injections, projections).

    Coordinates of the summands are permuted into the canonical order
    (free first, torsion ascending).
    """
    handle = mods[0].handle
    base = handle.base
    pieces = []  # (exp_sortkey, module_index, coord_index)
    for mi, M in enumerate(mods):
        for ci, e in enumerate(M.exps):
            key = (-1,) if e is None else (0, e)
            pieces.append((key, mi, ci))
    pieces.sort(key=lambda x: (x[0],))
    n = len(pieces)
    pos = {(mi, ci): i for i, (_, mi, ci) in enumerate(pieces)}
    exps = tuple(None if k == (-1,) else k[1] for k, _, _ in pieces)
    actions = {}
    for g in handle.gen_names:
        A = Mat.zeros(base, n, n)
        for mi, M in enumerate(mods):
            G = M.actions[g]
            for i in range(M.n):
                for j in range(M.n):
                    if G.rows[i][j].num:
                        A.rows[pos[(mi, i)]][pos[(mi, j)]] = G.rows[i][j]
        actions[g] = A
    S = CoeffModule(handle, exps, actions)
    injections, projections = [], []
    for mi, M in enumerate(mods):
        inj = Mat.zeros(base, n, M.n)
        prj = Mat.zeros(base, M.n, n)
        for ci in range(M.n):
            inj.rows[pos[(mi, ci)]][ci] = base.one()
            prj.rows[ci][pos[(mi, ci)]] = base.one()
        injections.append(ModMap(M, S, inj))
        projections.append(ModMap(S, M, prj))
    return S, injections, projections


def canonical_module(handle):
    """The canonical module: Matlis dual for artin, omega-ideal for dim 1."""
    if handle.dim == 0:
        actions = {g: handle.gen_action[g].transpose() for g in handle.gen_names}
        return CoeffModule(handle, (None,) * handle.nR, actions)
    return from_fractional_ideal(handle, canonical_ideal(handle))


def validate_module(M):
    """Check commutation, torsion compatibility, the designated D-scalar
    identity, and (artin) vanishing of the ideal monomials."""
    h = M.handle
    base = h.base
    for g1 in h.gen_names:
        for g2 in h.gen_names:
            d = (M.actions[g1] @ M.actions[g2]) - (M.actions[g2] @ M.actions[g1])
            if not ModMap(M, M, d).mat_is_rel():
                raise NotAModuleError(f"actions of {g1} and {g2} do not commute")
    if base.local:
        for j, e in enumerate(M.exps):
            if e is None:
                continue
            for g in h.gen_names:
                col = [a * base.t_power(e) for a in M.actions[g].col(j)]
                if any(c.num for c in M.reduce_vec(col)):
                    raise NotAModuleError("action violates torsion exponents")
        s = base.t_power(1)
        emb_act = M.element_action(h.t_elt(h.embed_exp))
        d = emb_act - Mat.identity(base, M.n).scale(s)
        if not ModMap(M, M, d).mat_is_rel():
            raise NotAModuleError("designated generator does not act as the D-scalar")
    else:
        for mono in h.spec.ideal_monomials:
            A = Mat.identity(base, M.n)
            for i, e in enumerate(mono):
                for _ in range(e):
                    A = M.actions[h.spec.variables[i]] @ A
            if not A.is_zero():
                raise NotAModuleError("ideal monomial does not annihilate module")
    return True


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def mu(M):
    """Minimal number of generators (dim_k M/mM)."""
    if M.is_zero():
        return 0
    base = M.handle.base
    V = hstack(base, [M.actions[g] for g in M.handle.gen_names] + [M.rel()],
               m=M.n)
    return len(Subquotient(base, M.n, Mat.identity(base, M.n), V).exps)


def length(M):
    return M.length()


def nu(J, M):
    """nu_J(M) = lambda(M / JM) for an ideal J <= R."""
    if M.is_zero():
        return 0
    base = M.handle.base
    gens = [g for g in J.as_ring_ideal().gens]
    cols = [M.element_action(g) for g in gens]
    V = hstack(base, cols + [M.rel()], m=M.n)
    sq = Subquotient(base, M.n, Mat.identity(base, M.n), V)
    out = sq.length()
    if out is None:
        raise InfiniteLengthError("J M has infinite colength")
    return out


def tensor_length_with_quotient(J, M):
    """lambda(M (x) R/J) = lambda(M/JM); same as nu."""
    return nu(J, M)


def socle(M):
    """Submodule killed by m; returns (S, incl)."""
    base = M.handle.base
    if M.is_zero():
        return M, ModMap.identity(M)
    rel = M.rel()
    blocks = []
    slack = rel.n
    names = M.handle.gen_names
    total_slack = slack * len(names)
    for bi, g in enumerate(names):
        A = M.actions[g]
        for i in range(M.n):
            line = list(A.rows[i])
            pad = [base.zero()] * total_slack
            for j in range(slack):
                pad[bi * slack + j] = -rel.rows[i][j]
            blocks.append(line + pad)
    K = kernel(Mat(base, blocks)) if blocks else Mat.identity(base, M.n)
    gens = Mat.from_cols(base, M.n, [K.col(j)[:M.n] for j in range(K.n)])
    return submodule(M, gens)


def torsion_part(M):
    """H^0_m(M): everything for artin; the D-torsion part in dim 1."""
    base = M.handle.base
    if not base.local:
        return M, ModMap.identity(M)
    cols = []
    for i, e in enumerate(M.exps):
        if e is not None:
            col = [base.zero()] * M.n
            col[i] = base.one()
            cols.append(col)
    return submodule(M, Mat.from_cols(base, M.n, cols))


def annihilator(M):
    """ann_R(M) as an honest ideal of R."""
    h = M.handle
    base = h.base
    if M.is_zero():
        return FracIdeal.unit_ideal(h)
    rel = M.rel()
    slack = rel.n
    total_slack = slack * M.n
    big = []
    for j in range(M.n):
        # sum_i r_i * (basis_action(i) e_j) = 0 mod rel
        cols_of_r = [M.basis_action(i).col(j) for i in range(h.nR)]
        for row in range(M.n):
            line = [cols_of_r[i][row] for i in range(h.nR)]
            pad = [base.zero()] * total_slack
            for c in range(slack):
                pad[j * slack + c] = -rel.rows[row][c]
            big.append(line + pad)
    K = kernel(Mat(base, big))
    gens = []
    for j in range(K.n):
        col = K.col(j)[:h.nR]
        if any(c.num for c in col):
            gens.append(RingElement(h, col))
    if not gens:
        gens = [h.zero_elt()]
    return FracIdeal(h, gens).reduce_gens()


def loewy_length(M):
    """Least c with m^c * H^0_m(M) = 0."""
    base = M.handle.base
    if M.is_zero():
        return 0
    T, incl = torsion_part(M)
    cur = incl.mat  # columns spanning the torsion part inside M
    rel = M.rel()
    c = 0
    while True:
        sq = Subquotient(base, M.n, hstack(base, [cur, rel], m=M.n), rel)
        if not sq.exps:
            return c
        cols = []
        for g in M.handle.gen_names:
            A = M.actions[g] @ cur
            cols.append(A)
        cur = hstack(base, cols, m=M.n)
        c += 1
        if c > 10000:
            raise SubextError("loewy length did not terminate")


def colon_in_module(M, W_cols, elems):
    """{x in M : g*x in <W_cols> + rel for all g in elems}; returns (K, incl)."""
    base = M.handle.base
    rel = M.rel()
    span = hstack(base, [W_cols, rel], m=M.n)
    slack = span.n
    total_slack = slack * len(elems)
    big = []
    for bi, g in enumerate(elems):
        A = M.element_action(g) if isinstance(g, RingElement) else M.actions[g]
        for i in range(M.n):
            line = list(A.rows[i])
            pad = [base.zero()] * total_slack
            for j in range(slack):
                pad[bi * slack + j] = -span.rows[i][j]
            big.append(line + pad)
    K = kernel(Mat(base, big)) if big else Mat.identity(base, M.n)
    gens = Mat.from_cols(base, M.n, [K.col(j)[:M.n] for j in range(K.n)])
    return submodule(M, gens)


def is_mcm(M):
    """Maximal Cohen-Macaulay (zero module counts as MCM)."""
    if M.is_zero():
        return True
    if M.handle.dim == 0:
        return True
    return not M.torsion()


def depth01(M):
    if M.is_zero():
        return 1 if M.handle.dim == 1 else 0
    if M.handle.dim == 0:
        return 0
    return 1 if not M.torsion() else 0


# ---------------------------------------------------------------------------
# Hom
# ---------------------------------------------------------------------------


@dataclass
class HomPres:
    module: CoeffModule
    maps: list                 # ModMap lifts of the canonical generators
    sq: Subquotient
    src: CoeffModule
    dst: CoeffModule

    def coords_of(self, phi):
        return self.sq.project(_vec(phi.mat))

    def map_from_coords(self, coords):
        w = self.sq.lift(coords)
        return ModMap(self.src, self.dst, _unvec(self.dst.handle.base, w,
                                                 self.dst.n, self.src.n))


def _vec(mat):
    out = []
    for j in range(mat.n):
        out.extend(mat.col(j))
    return out


def _unvec(base, vec, nrows, ncols):
    cols = [vec[j * nrows:(j + 1) * nrows] for j in range(ncols)]
    return Mat.from_cols(base, nrows, cols)


def hom(M, N):
    """Hom_R(M, N) as a CoeffModule with lifted generator maps."""
    key = ("hom", id(N))
    if key in M._cache:
        return M._cache[key]
    h = M.handle
    base = h.base
    if M.is_zero() or N.is_zero():
        Z = zero_module(h)
        out = HomPres(module=Z, maps=[],
                      sq=Subquotient(base, 0, Mat.zeros(base, 0, 0),
                                     Mat.zeros(base, 0, 0)),
                      src=M, dst=N)
        M._cache[key] = out
        return out
    nM, nN = M.n, N.n
    relN = N.rel()
    tau = relN.n
    blocks = []  # list of (rows, slack owner count)
    # condition rows; unknown layout u[(j, i)] = j*nN + i, then slacks
    cond_blocks = []
    for g in h.gen_names:
        A, B = M.actions[g], N.actions[g]
        for j in range(nM):
            rows = []
            for i in range(nN):
                line = [base.zero()] * (nM * nN)
                for k in range(nM):
                    a = A.rows[k][j]
                    if a.num:
                        line[k * nN + i] = line[k * nN + i] + a
                for i2 in range(nN):
                    b = B.rows[i][i2]
                    if b.num:
                        line[j * nN + i2] = line[j * nN + i2] - b
                rows.append(line)
            cond_blocks.append(rows)
    if base.local:
        for j, e in enumerate(M.exps):
            if e is None:
                continue
            s_e = base.t_power(e)
            rows = []
            for i in range(nN):
                line = [base.zero()] * (nM * nN)
                line[j * nN + i] = s_e
                rows.append(line)
            cond_blocks.append(rows)
    nb = len(cond_blocks)
    total_slack = nb * tau
    big = []
    for bi, rows in enumerate(cond_blocks):
        for i, line in enumerate(rows):
            pad = [base.zero()] * total_slack
            for c in range(tau):
                pad[bi * tau + c] = -relN.rows[i % nN][c]
            big.append(line + pad)
    if big:
        K = kernel(Mat(base, big))
        sols = Mat.from_cols(base, nM * nN,
                             [K.col(j)[:nM * nN] for j in range(K.n)])
    else:
        sols = Mat.identity(base, nM * nN)
    # ambient N^{nM}: relations block-diagonal, action of g block-diag B_g
    amb_n = nM * nN
    amb_rel_cols = []
    for j in range(nM):
        for c in range(tau):
            col = [base.zero()] * amb_n
            for i in range(nN):
                if relN.rows[i][c].num:
                    col[j * nN + i] = relN.rows[i][c]
            amb_rel_cols.append(col)
    amb_rel = Mat.from_cols(base, amb_n, amb_rel_cols)
    amb_actions = {}
    for g in h.gen_names:
        B = N.actions[g]
        A = Mat.zeros(base, amb_n, amb_n)
        for j in range(nM):
            off = j * nN
            for i in range(nN):
                for i2 in range(nN):
                    if B.rows[i][i2].num:
                        A.rows[off + i][off + i2] = B.rows[i][i2]
        amb_actions[g] = A
    U = hstack(base, [sols, amb_rel], m=amb_n)
    Hmod, sq = subquotient_module(h, amb_actions, amb_n, U, amb_rel)
    maps = []
    for j in range(Hmod.n):
        ej = [base.zero()] * Hmod.n
        ej[j] = base.one()
        w = sq.lift(ej)
        maps.append(ModMap(M, N, _unvec(base, w, nN, nM)))
    out = HomPres(module=Hmod, maps=maps, sq=sq, src=M, dst=N)
    M._cache[key] = out
    return out


def dualize_omega(M, omega=None):
    """M^dagger = Hom(M, omega)."""
    if omega is None:
        omega = canonical_module(M.handle)
    return hom(M, omega).module


# ---------------------------------------------------------------------------
# minimal presentations and resolutions
# ---------------------------------------------------------------------------


@dataclass
class Resolution:
    """Minimal free resolution data up to the requested length.

    cover : ModMap F0 -> M
    diffs : D-matrices d_i : F_i -> F_{i-1} (i >= 1)
    betti : ranks of the free modules
    rmx   : R-matrix entries of each differential (rows x cols of RingElement)
    frees : the free CoeffModules F_i
    """
    cover: ModMap
    diffs: list
    betti: list
    rmx: list
    frees: list


def _min_gens_of_submodule(handle, amb_free_n, K_cols, module_actions):
    """Minimal generator columns of an R-submodule of a free ambient."""
    base = handle.base
    if K_cols.n == 0:
        return K_cols
    mcols = [module_actions[g] @ K_cols for g in handle.gen_names]
    V = hstack(base, mcols, m=amb_free_n)
    sq = Subquotient(base, amb_free_n, K_cols, V)
    gens = []
    for j in range(len(sq.exps)):
        ej = [base.zero()] * len(sq.exps)
        ej[j] = base.one()
        gens.append(sq.lift(ej))
    return Mat.from_cols(base, amb_free_n, gens)


def _free_cover_matrix(handle, target_basis_action, gens_cols):
    """D-matrix of R^mu -> target sending generator j to column j."""
    base = handle.base
    nR = handle.nR
    cols = []
    for j in range(gens_cols.n):
        v = gens_cols.col(j)
        for b in range(nR):
            cols.append(target_basis_action(b) @ v)
    return Mat.from_cols(base, gens_cols.m, cols)


def _rmatrix_of(handle, mat, beta_src):
    """Extract the R-matrix (rows = target generators) of a map between free
    modules, from its D-matrix."""
    nR = handle.nR
    beta_dst = mat.m // nR
    out = []
    for bi in range(beta_dst):
        row = []
        for bj in range(beta_src):
            col = mat.col(bj * nR)  # image of generator bj
            coords = col[bi * nR:(bi + 1) * nR]
            row.append(RingElement(handle, coords))
        out.append(row)
    return out


def minimal_presentation(M):
    return resolution(M, 1)


def resolution(M, length_):
    """Minimal free resolution F_len -> ... -> F_0 -> M -> 0."""
    cached = M._cache.get("resolution")
    if cached is not None and len(cached.diffs) >= length_:
        return cached
    h = M.handle
    base = h.base
    if M.is_zero():
        frees = [zero_module(h) for _ in range(length_ + 1)]
        res = Resolution(cover=ModMap.zero(frees[0], M),
                         diffs=[Mat.zeros(base, 0, 0)] * length_,
                         betti=[0] * (length_ + 1),
                         rmx=[[] for _ in range(length_)], frees=frees)
        M._cache["resolution"] = res
        return res
    if cached is None:
        # step 0: minimal generators of M
        V = hstack(base, [M.actions[g] for g in h.gen_names] + [M.rel()],
                   m=M.n)
        sqmu = Subquotient(base, M.n, Mat.identity(base, M.n), V)
        gens = Mat.from_cols(
            base, M.n,
            [sqmu.lift([base.one() if i == j else base.zero()
                        for i in range(len(sqmu.exps))])
             for j in range(len(sqmu.exps))])
        cover_mat = _free_cover_matrix(h, M.basis_action, gens)
        F0 = free_module(h, gens.n)
        cover = ModMap(F0, M, cover_mat)
        res = Resolution(cover=cover, diffs=[], betti=[gens.n], rmx=[],
                         frees=[F0])
        M._cache["resolution"] = res
        cached = res
    res = cached
    while len(res.diffs) < length_:
        i = len(res.diffs)
        F_prev = res.frees[i]
        if i == 0:
            # kernel of the cover, modulo relations of M
            A = hstack(base, [res.cover.mat, M.rel()], m=M.n)
            K = kernel(A)
            cols = [K.col(j)[:F_prev.n] for j in range(K.n)]
            cols = [c for c in cols if any(x.num for x in c)]
            Kc = Mat.from_cols(base, F_prev.n, cols)
        else:
            Kc = kernel(res.diffs[i - 1])
        gens = _min_gens_of_submodule(h, F_prev.n, Kc, F_prev.actions)
        d = _free_cover_matrix(h, F_prev.basis_action, gens)
        res.betti.append(gens.n)
        res.frees.append(free_module(h, gens.n))
        res.diffs.append(d)
        res.rmx.append(_rmatrix_of(h, d, gens.n) if gens.n else [])
    return res


def assert_minimal(res):
    """Every differential entry (and cover kernel) must lie in m."""
    h = res.frees[0].handle
    for idx, d in enumerate(res.diffs):
        F = res.frees[idx]
        base = h.base
        mcols = hstack(base, [F.actions[g] for g in h.gen_names], m=F.n)
        for j in range(d.n):
            if not solve_like(mcols, d.col(j)):
                raise SubextError("resolution differential is not minimal")
    return True


def syzygy(M, j):
    """Omega^j M as a CoeffModule (a submodule of F_{j-1})."""
    if j == 0:
        return M
    res = resolution(M, j)
    h = M.handle
    base = h.base
    F_prev = res.frees[j - 1]
    if F_prev.n == 0:
        return zero_module(h)
    if j == 1:
        A = hstack(base, [res.cover.mat, M.rel()], m=M.n)
        K = kernel(A)
        cols = [K.col(jj)[:F_prev.n] for jj in range(K.n)]
        cols = [c for c in cols if any(x.num for x in c)]
        Kc = Mat.from_cols(base, F_prev.n, cols)
    else:
        Kc = kernel(res.diffs[j - 2])
    S, _ = submodule(F_prev, Kc)
    return S


def transpose(M):
    """Auslander transpose from the minimal presentation."""
    h = M.handle
    res = resolution(M, 1)
    b0, b1 = res.betti[0], res.betti[1]
    base = h.base
    if b1 == 0:
        return zero_module(h)
    F = free_module(h, b0)
    Fdual_target = free_module(h, b1)
    # dual map R^{b0} -> R^{b1}: entry (j, i) = rmx[i][j]
    rmx = res.rmx[0]
    cols = []
    for i in range(b0):
        for b in range(h.nR):
            col = [base.zero()] * (b1 * h.nR)
            for j in range(b1):
                elem = rmx[i][j]
                em = elem.mult_matrix()
                for r in range(h.nR):
                    col[j * h.nR + r] = em.rows[r][b]
            cols.append(col)
    dual = Mat.from_cols(base, b1 * h.nR, cols)
    T, _ = quotient_module(Fdual_target, dual)
    return T


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------


def is_surjective(phi):
    base = phi.dst.handle.base
    V = hstack(base, [phi.mat, phi.dst.rel()], m=phi.dst.n)
    sq = Subquotient(base, phi.dst.n, Mat.identity(base, phi.dst.n), V)
    return not sq.exps


def is_isomorphic(M, N, budget=2 ** 20):
    """Equal invariants plus a surjective homomorphism found by enumerating
    Hom/mHom representatives."""
    if M.exps != N.exps:
        return False
    if M.is_zero():
        return True
    H = hom(M, N)
    hb = H.module
    base = M.handle.base
    mv = hstack(base, [hb.actions[g] for g in hb.handle.gen_names] + [hb.rel()],
                m=hb.n)
    sqm = Subquotient(base, hb.n, Mat.identity(base, hb.n), mv)
    kappa = len(sqm.exps)
    p = base.p
    if p ** kappa > budget:
        raise BudgetExceeded(f"{p ** kappa} hom classes exceed budget {budget}")
    lifts = []
    for j in range(kappa):
        ej = [base.one() if i == j else base.zero() for i in range(kappa)]
        coords = hb.reduce_vec(sqm.lift(ej))
        lifts.append(H.map_from_coords(coords))
    import itertools as it
    for combo in it.product(range(p), repeat=kappa):
        if not any(combo):
            continue
        phi = None
        for c, lift_map in zip(combo, lifts):
            if c:
                term = ModMap(M, N, lift_map.mat.scale(base.from_int(c)))
                phi = term if phi is None else phi + term
        if phi is not None and is_surjective(phi):
            return True
    return False
