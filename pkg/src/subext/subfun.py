"""Numerical functions on modules and the Ext subfunctors they induce.

A numerical function assigns a nonnegative integer to each module (number of
generators, colength against an ideal, Hom or tensor lengths against a fixed
test module, stabilized Tor multiplicity).  Each such function carves out the
set of degree-1 extension classes on whose sequence it is additive; when that
set is a submodule of Ext^1 we certify it by cardinality count against the
span of its members.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .dcoeff import Mat, Subquotient, hstack
from .errors import (BudgetExceeded, CertificateError, InfiniteLengthError,
                     StabilizationBudget, SubextError)
from .ext import (SES, _block_ambient, _coord_values, _delta_matrix, classify,
                  enumerate_classes, ext, hom_induced, middle, pullback_seq,
                  pushout_seq, split_sequence)
from .modules import (ModMap, direct_sum, from_fractional_ideal,
                      from_quotient_ideal, hom, is_mcm, length, mu, nu,
                      regular_module, residue_field, resolution)
from .rings import m_ideal


# ---------------------------------------------------------------------------
# tensor lengths
# ---------------------------------------------------------------------------


def tensor_length(X, C):
    """lambda(X (x)_R C), via a minimal presentation of C."""
    if X.is_zero() or C.is_zero():
        return 0
    base = X.handle.base
    res = resolution(C, 1)
    b0, b1 = res.betti[0], res.betti[1]
    amb_n, amb_rel, _ = _block_ambient(X, b0)
    if b1:
        rmxT = [[res.rmx[0][r][c] for r in range(b0)] for c in range(b1)]
        V = hstack(base, [_delta_matrix(X, rmxT), amb_rel], m=amb_n)
    else:
        V = amb_rel
    sq = Subquotient(base, amb_n, Mat.identity(base, amb_n), V)
    out = sq.length()
    if out is None:
        raise InfiniteLengthError("tensor product has infinite length")
    return out


def _tensor_image_length(f, C):
    """Length of the image of f (x) C : A (x) C -> B (x) C for f : A -> B."""
    A, B = f.src, f.dst
    base = A.handle.base
    res = resolution(C, 1)
    b0, b1 = res.betti[0], res.betti[1]
    if b0 == 0 or A.is_zero() or B.is_zero():
        return 0
    ambB, relB, _ = _block_ambient(B, b0)
    if b1:
        rmxT = [[res.rmx[0][r][c] for r in range(b0)] for c in range(b1)]
        VB = hstack(base, [_delta_matrix(B, rmxT), relB], m=ambB)
    else:
        VB = relB
    # block-diagonal f per presentation slot
    cols = []
    for j in range(b0):
        for a in range(A.n):
            col = [base.zero()] * ambB
            for i in range(B.n):
                if f.mat.rows[i][a].num:
                    col[j * B.n + i] = f.mat.rows[i][a]
            cols.append(col)
    F = Mat.from_cols(base, ambB, cols)
    sq = Subquotient(base, ambB, hstack(base, [F, VB], m=ambB), VB)
    out = sq.length()
    if out is None:
        raise InfiniteLengthError("tensor image has infinite length")
    return out


# ---------------------------------------------------------------------------
# stabilized Tor multiplicity
# ---------------------------------------------------------------------------


def tor_multiplicity(I, M, window=3, nmax=24):
    """Stabilized value of lambda(Tor_1(M, R/I^{n+1})); defined for maximal
    Cohen-Macaulay modules (and the zero module)."""
    from .ext import tor1_length
    if M.is_zero():
        return 0
    if not is_mcm(M):
        raise SubextError("Tor multiplicity is defined on MCM modules only")
    vals = []
    for n in range(nmax + 1):
        vals.append(tor1_length(M, I.power(n + 1)))
        if len(vals) > window and len(set(vals[-window - 1:])) == 1:
            return vals[-1]
    raise StabilizationBudget(
        f"Tor lengths did not stabilize within {nmax} steps: {vals}")


# ---------------------------------------------------------------------------
# numerical functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumFn:
    """A numerical function on modules.

    kind is one of "mu", "colength", "hom_from", "hom_to", "tensor",
    "tor_mult"; payload is the ideal or test module it refers to.
    """
    kind: str
    payload: object = None
    label: str = ""

    def __call__(self, M):
        if self.kind == "mu":
            return mu(M)
        if self.kind == "colength":
            return nu(self.payload, M)
        if self.kind == "hom_from":
            return length(hom(self.payload, M).module)
        if self.kind == "hom_to":
            return length(hom(M, self.payload).module)
        if self.kind == "tensor":
            return tensor_length(M, self.payload)
        if self.kind == "tor_mult":
            return tor_multiplicity(self.payload, M)
        raise SubextError(f"unknown numerical function kind {self.kind!r}")


def fn_mu():
    return NumFn(kind="mu", label="mu")


def fn_colength(I, label=None):
    return NumFn(kind="colength", payload=I, label=label or "colength")


def fn_hom_from(C, label=None):
    return NumFn(kind="hom_from", payload=C, label=label or "hom_from")


def fn_hom_to(C, label=None):
    return NumFn(kind="hom_to", payload=C, label=label or "hom_to")


def fn_tensor(C, label=None):
    return NumFn(kind="tensor", payload=C, label=label or "tensor")


def fn_tor_mult(I, label=None):
    return NumFn(kind="tor_mult", payload=I, label=label or "tor_mult")


def is_additive_on(fn, ses):
    return fn(ses.B) == fn(ses.A) + fn(ses.C)


# ---------------------------------------------------------------------------
# half-exactness agreement
# ---------------------------------------------------------------------------


def _image_len(module, mat):
    base = module.handle.base
    if module.n == 0 or mat.n == 0 or mat.m == 0:
        return 0
    rel = module.rel()
    sq = Subquotient(base, module.n,
                     hstack(base, [mat, rel], m=module.n), rel)
    out = sq.length()
    if out is None:
        raise InfiniteLengthError("image has infinite length")
    return out


def exactness_on(fn, ses):
    """Whether the half-exact functor behind fn stays exact on ses,
    decided directly (not via lengths of the middle)."""
    if fn.kind in ("mu", "hom_to"):
        C = residue_field(ses.B.handle) if fn.kind == "mu" else fn.payload
        hp_B, hp_A = hom(ses.B, C), hom(ses.A, C)
        mat = hom_induced(ses.i, C, hp_B, hp_A)
        return _image_len(hp_A.module, mat) == length(hp_A.module)
    if fn.kind == "hom_from":
        C = fn.payload
        hp_B, hp_C = hom(C, ses.B), hom(C, ses.C)
        base = C.handle.base
        cols = []
        for c in range(hp_B.module.n):
            ec = [base.one() if t == c else base.zero()
                  for t in range(hp_B.module.n)]
            phim = hp_B.map_from_coords(ec)
            cols.append(hp_C.coords_of(ModMap(C, ses.C,
                                              ses.p.mat @ phim.mat)))
        mat = Mat.from_cols(base, hp_C.module.n, cols)
        return _image_len(hp_C.module, mat) == length(hp_C.module)
    if fn.kind in ("colength", "tensor"):
        if fn.kind == "colength":
            C = from_quotient_ideal(ses.B.handle, fn.payload)
        else:
            C = fn.payload
        return _tensor_image_length(ses.i, C) == tensor_length(ses.A, C)
    raise SubextError(f"no direct exactness test for kind {fn.kind!r}")


def half_exact_agreement(fn, ses):
    """Compare additivity of fn on ses with direct exactness of the
    underlying functor; raises CertificateError if they disagree."""
    add = is_additive_on(fn, ses)
    exa = exactness_on(fn, ses)
    if add != exa:
        raise CertificateError(
            f"additivity ({add}) and exactness ({exa}) disagree for "
            f"{fn.kind}")
    return add


# ---------------------------------------------------------------------------
# Ext subfunctors by enumeration
# ---------------------------------------------------------------------------


@dataclass
class SubfunResult:
    members: list               # ExtClass members
    total: int                  # order of the full Ext group
    span_length: int            # length of the span of the members
    certified: bool             # members form exactly a submodule


def submodule_members(module, cols, budget=2 ** 20):
    """All elements (as reduced coordinate tuples) of the submodule of
    `module` spanned over R by the given coordinate columns."""
    base = module.handle.base
    if module.n == 0:
        return {()}
    closed = []
    for j in range(cols.n):
        v = cols.col(j)
        for b in range(module.handle.nR):
            closed.append(module.basis_action(b) @ v)
    rel = module.rel()
    U = hstack(base, [Mat.from_cols(base, module.n, closed), rel], m=module.n)
    sq = Subquotient(base, module.n, U, rel)
    exps = sq.exps
    if base.local and any(e is None for e in exps):
        raise InfiniteLengthError("submodule has a free summand")
    count = base.p ** (sum(e for e in exps) if base.local else len(exps))
    if count > budget:
        raise BudgetExceeded(f"{count} elements exceed budget {budget}")
    basis = []
    for j in range(len(exps)):
        ej = [base.one() if t == j else base.zero() for t in range(len(exps))]
        basis.append(sq.lift(ej))
    import itertools
    out = set()
    ranges = [_coord_values(base, e if e is not None else 1) for e in exps]
    for combo in itertools.product(*ranges):
        vec = [base.zero()] * module.n
        for c, b in zip(combo, basis):
            if c.num:
                vec = [x + c * y for x, y in zip(vec, b)]
        out.add(tuple(module.reduce_vec(vec)))
    if not out:
        out.add(tuple([base.zero()] * module.n))
    return out


def _certify_submodule(pres, members, budget=2 ** 20):
    """Certify that the member classes form exactly a submodule of Ext^1 by
    comparing their count against the order of the span of their coords."""
    base = pres.N.handle.base
    module = pres.module
    cols = Mat.from_cols(base, module.n,
                         [list(c.coords) for c in members])
    span = submodule_members(module, cols, budget)
    span_len = 0
    p = base.p
    n = len(span)
    while p ** span_len < n:
        span_len += 1
    certified = (len(members) == len(span)
                 and all(c.coords in span for c in members))
    return span_len, certified


def ext1_subfunctor(pres, predicate, budget=2 ** 20):
    """Member classes {c : predicate(middle(c))} of Ext^1, with a
    submodule-closure certificate."""
    members = []
    total = 0
    for cls in enumerate_classes(pres, budget):
        total += 1
        if cls.is_zero():
            ok = predicate(split_sequence(pres.N, pres.M))
        else:
            ok = predicate(middle(cls))
        if ok:
            members.append(cls)
    if not members:
        return SubfunResult(members=[], total=total, span_length=0,
                            certified=True)
    span_len, certified = _certify_submodule(pres, members, budget)
    return SubfunResult(members=members, total=total, span_length=span_len,
                        certified=certified)


def ext1_additive(pres, fn, budget=2 ** 20):
    """Classes on whose sequence the numerical function fn is additive."""
    return ext1_subfunctor(pres, lambda ses: is_additive_on(fn, ses), budget)


def ext1_ulrich(pres, I, budget=2 ** 20):
    """Classes whose middle term is I-Ulrich."""
    from .ulrich import is_ulrich
    return ext1_subfunctor(pres, lambda ses: is_ulrich(I, ses.B), budget)


def ideal_times_ext(pres, J, budget=2 ** 20):
    """The coordinate set of the submodule J . Ext^1 inside the Ext group."""
    base = pres.N.handle.base
    module = pres.module
    if module.n == 0:
        return {()}
    gens = J.as_ring_ideal().gens
    cols = hstack(base, [module.element_action(g) for g in gens], m=module.n)
    return submodule_members(module, cols, budget)


def member_coords(result):
    return {c.coords for c in result.members}


# ---------------------------------------------------------------------------
# closure axioms
# ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    checks: int
    violations: list


def check_closure_axioms(handle, predicate, pairs, scalars=None, maps=None,
                         rng_seed=0, budget=2 ** 14, baer_limit=6):
    """Exercise the closure axioms of a sequence predicate on the given
    (M, N) pairs: split sequences are members; members are closed under Baer
    sum, ring scalars (pushout and pullback), pushouts along maps out of N,
    and pullbacks along maps into M.  Returns an AxiomReport listing every
    violation found."""
    rng = random.Random(rng_seed)
    checks = 0
    violations = []

    def note(ok, desc):
        nonlocal checks
        checks += 1
        if not ok:
            violations.append(desc)

    for (M, N) in pairs:
        pres = ext(M, N, 1)
        try:
            classes = enumerate_classes(pres, budget)
        except BudgetExceeded:
            continue
        membership = {}
        for cls in classes:
            ses = split_sequence(N, M) if cls.is_zero() else middle(cls)
            membership[cls.coords] = (cls, ses, predicate(ses))
        mem = [v for v in membership.values() if v[2]]
        note(membership[pres.zero_class().coords][2],
             "split sequence rejected")
        # Baer closure
        sample = mem if len(mem) <= baer_limit else rng.sample(mem, baer_limit)
        for c1, _, _ in sample:
            for c2, _, _ in sample:
                s = c1 + c2
                note(membership[s.coords][2],
                     f"Baer sum of members {c1.coords} + {c2.coords} left")
        # scalar closure
        if scalars is not None:
            elems = scalars
        elif handle.base.local:
            elems = [handle.t_elt(v) for v in handle.semigroup[:2]]
        else:
            elems = [handle.gen_elt(g) for g in handle.spec.variables[:2]]
        for c, _, _ in sample:
            for r in elems:
                s = c.scale(r)
                note(membership[s.coords][2],
                     f"scalar multiple {c.coords} * {r} left")
        # pushout / pullback closure along multiplication maps (these
        # realize the scalar action through the universal constructions)
        for c, ses, _ in sample:
            for r in elems:
                f = ModMap(N, N, N.element_action(r))
                note(predicate(pushout_seq(ses, f)),
                     f"pushout of {c.coords} along *{r} left")
                g = ModMap(M, M, M.element_action(r))
                note(predicate(pullback_seq(ses, g)),
                     f"pullback of {c.coords} along *{r} left")
        # pushout / pullback closure along supplied maps
        for f in (maps or []):
            for c, ses, _ in sample:
                if c.is_zero():
                    continue
                if f.src is N:
                    po = pushout_seq(ses, f)
                    note(predicate(po), f"pushout of {c.coords} left")
                if f.dst is M:
                    pb = pullback_seq(ses, f)
                    note(predicate(pb), f"pullback of {c.coords} left")
        # composition of deflations: compose the epi of a member sequence
        # with a split epi on top and test the kernel sequence
        for c, ses, _ in sample[:3]:
            note(predicate(_composed_deflation(ses)),
                 f"composed deflation of {c.coords} left")
    return AxiomReport(checks=checks, violations=violations)


def _composed_deflation(ses):
    """Given 0 -> A -> B -> C -> 0, stack the split epi A + B -> B on top of
    p and return the kernel sequence 0 -> ker -> A + B -> C -> 0."""
    from .ext import _preimage_cols
    from .modules import submodule
    A, B, C = ses.A, ses.B, ses.C
    base = A.handle.base
    S, injs, projs = direct_sum([A, B])
    comp = ModMap(S, C, ses.p.mat @ projs[1].mat)
    K = _preimage_cols(comp.mat, C.rel())
    Kmod, incl = submodule(S, K)
    out = SES(A=Kmod, B=S, C=C, i=incl, p=comp)
    out.certify()
    return out


def default_pairs(handle):
    """A stock of (M, N) pairs with small Ext groups for axiom checking."""
    k = residue_field(handle)
    F = regular_module(handle)
    m = m_ideal(handle)
    out = [(k, F), (k, k)]
    if handle.dim == 1:
        Mm = from_fractional_ideal(handle, m)
        out.append((Mm, Mm))
        out.append((k, Mm))
    else:
        Q = from_quotient_ideal(handle, m)
        out.append((Q, F))
    return out
