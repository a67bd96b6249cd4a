"""Multiplicity, Ulrich modules, and blow-up module structures.

Multiplicities are always computed by two independent routes (principal
reduction and stabilized Hilbert function) and compared.  Ulrich-ness of M
with respect to an ideal I means: M is maximal Cohen-Macaulay and
lambda(M/IM) equals the multiplicity e_I(M); this is cross-checked against
IM = xM for a principal reduction x of I.
"""

from __future__ import annotations

from .dcoeff import Mat, Subquotient, hstack, solve_matrix
from .errors import (CertificateError, InfiniteLengthError, ReductionNotFound,
                     StabilizationBudget, SubextError)
from .ext import SES, _has_section, classify, ext, hom_induced
from .modules import (CoeffModule, ModMap, canonical_module, colon_in_module,
                      direct_sum, from_fractional_ideal, hom, is_mcm,
                      length, mu, nu, quotient_module, regular_module,
                      residue_field, submodule, validate_module, zero_module)
from .rings import (FracIdeal, blow_up, m_ideal, principal_reduction)


# ---------------------------------------------------------------------------
# multiplicity
# ---------------------------------------------------------------------------


def _power_colength(M, I, n):
    """lambda(I^n M / I^{n+1} M)."""
    base = M.handle.base
    gens_n = I.power(n).as_ring_ideal().gens if n else [M.handle.one_elt()]
    gens_n1 = I.power(n + 1).as_ring_ideal().gens
    rel = M.rel()
    U = hstack(base, [M.element_action(g) for g in gens_n] + [rel], m=M.n)
    V = hstack(base, [M.element_action(g) for g in gens_n1] + [rel], m=M.n)
    sq = Subquotient(base, M.n, U, V)
    out = sq.length()
    if out is None:
        raise InfiniteLengthError("Hilbert function value is infinite")
    return out


def multiplicity_hilbert(M, I, window=3, nmax=24):
    """e_I(M) as the stabilized value of lambda(I^n M / I^{n+1} M)."""
    vals = []
    for n in range(nmax + 1):
        vals.append(_power_colength(M, I, n))
        if len(vals) > window and len(set(vals[-window - 1:])) == 1:
            return vals[-1]
    raise StabilizationBudget(
        f"Hilbert function did not stabilize within {nmax} steps: {vals}")


def multiplicity_reduction(M, I):
    """e_I(M) = lambda(M/xM) - lambda(0 :_M x) for a principal reduction x."""
    h = M.handle
    base = h.base
    red, _ = principal_reduction(I)
    if red.den != h.one_elt():
        raise ReductionNotFound("reduction has a non-trivial denominator")
    x = red.num
    rel = M.rel()
    V = hstack(base, [M.element_action(x), rel], m=M.n)
    sq = Subquotient(base, M.n, Mat.identity(base, M.n), V)
    co = sq.length()
    if co is None:
        raise InfiniteLengthError("M/xM is infinite; x is not a parameter on M")
    K, _ = colon_in_module(M, Mat.zeros(base, M.n, 0), [x])
    return co - length(K)


def multiplicity(M, I=None):
    """e_I(M), computed twice (reduction and Hilbert function) and compared."""
    h = M.handle
    if M.is_zero():
        return 0
    if I is None:
        I = m_ideal(h)
    if h.dim == 0:
        return length(M)
    e1 = multiplicity_reduction(M, I)
    e2 = multiplicity_hilbert(M, I)
    if e1 != e2:
        raise CertificateError(
            f"multiplicity routes disagree: reduction {e1}, hilbert {e2}")
    return e1


def phi(I, M):
    """phi_I(M) = lambda(M/IM) - e_I(M); zero exactly on I-Ulrich modules."""
    if M.is_zero():
        return 0
    return nu(I, M) - multiplicity(M, I)


def is_ulrich(I, M):
    """M is I-Ulrich: MCM with lambda(M/IM) = e_I(M); cross-checked by
    IM = xM for a principal reduction x of I."""
    if M.is_zero():
        return True
    if not is_mcm(M):
        return False
    by_phi = phi(I, M) == 0
    # cross-check: IM = xM (needs a principal reduction, dimension 1 only)
    h = M.handle
    base = h.base
    if h.dim == 0:
        return by_phi
    try:
        red, _ = principal_reduction(I)
    except ReductionNotFound:
        return by_phi
    if red.den != h.one_elt():
        return by_phi
    rel = M.rel()
    IM = hstack(base, [M.element_action(g)
                       for g in I.as_ring_ideal().gens] + [rel], m=M.n)
    xM = hstack(base, [M.element_action(red.num), rel], m=M.n)
    sq = Subquotient(base, M.n, IM, xM)
    by_span = not sq.exps
    if by_phi != by_span:
        raise CertificateError(
            f"Ulrich tests disagree: phi gives {by_phi}, IM = xM gives {by_span}")
    return by_phi


def ulrich_samples(handle, I=None, powers=3):
    """Stock of I-Ulrich candidates: the blow-up algebra as a module, high
    powers of I, and small direct sums."""
    if I is None:
        I = m_ideal(handle)
    B, _ = blow_up(I)
    out = []
    Bmod = from_fractional_ideal(handle, B)
    out.append(("blowup", Bmod))
    for n in range(1, powers + 1):
        out.append((f"I^{n}", from_fractional_ideal(handle, I.power(n))))
    S, _, _ = direct_sum([Bmod, Bmod])
    out.append(("blowup^2", S))
    return out


# ---------------------------------------------------------------------------
# module structures over the blow-up
# ---------------------------------------------------------------------------


def restrict_to_blowup(M, bh, red):
    """Give the R-module M its module structure over the blow-up ring handle
    bh (built from an ideal with monomial principal reduction red).

    Fails with SubextError if M is not stable under the blow-up algebra.
    """
    h = M.handle
    base = h.base
    a = red.num.valuation()
    b = red.den.valuation()
    if red.num != h.t_elt(a) or red.den != h.t_elt(b):
        raise ReductionNotFound("blow-up restriction needs monomial reductions")
    member = _semigroup_member(h.semigroup, 4096)
    actions = {}
    for v in bh.semigroup:
        # t^v * t^(N a) = t^(v + N(a-b)) * t^(N b) with all factors in R
        N = 0
        while True:
            w = v + N * (a - b)
            if w >= 0 and member(w) and member(N * a) and member(N * b):
                break
            N += 1
            if N > 64:
                raise SubextError("no representative for blow-up generator")
        A = M.element_action(h.t_elt(N * a))
        B = M.element_action(h.t_elt(w)) @ M.element_action(h.t_elt(N * b))
        X = solve_matrix(A.transpose(), B.transpose())
        if X is None:
            raise SubextError(
                f"module is not stable under the blow-up element t^{v}")
        actions[f"t^{v}"] = X.transpose()
    out = CoeffModule(bh, M.exps, actions)
    validate_module(out)
    return out


def restrict_to_base(E, rh, bh):
    """View a module over the blow-up handle bh as a module over rh."""
    actions = {}
    for g, v in zip(rh.gen_names, rh.semigroup):
        actions[g] = E.element_action(bh.t_elt(v))
    out = CoeffModule(rh, E.exps, actions)
    validate_module(out)
    return out


def _semigroup_member(gens, bound):
    from .rings import semigroup_closure
    table = semigroup_closure(list(gens), bound)

    def member(v):
        if v < 0:
            return False
        if v < len(table):
            return bool(table[v])
        return True
    return member


def blowup_sequence_comparison(Mb, Nb, rh, bh, pres_R):
    """Classify every extension of Mb by Nb over the blow-up ring as an
    R-extension; returns the list of (B-class, R-class) pairs.

    Mb, Nb are bh-modules; pres_R is Ext^1 over rh of their restrictions.
    """
    from .ext import enumerate_classes, middle
    pres_B = ext(Mb, Nb, 1)
    pairs = []
    for cb in enumerate_classes(pres_B):
        ses_b = middle(cb)
        A = restrict_to_base(ses_b.A, rh, bh)
        B = restrict_to_base(ses_b.B, rh, bh)
        C = restrict_to_base(ses_b.C, rh, bh)
        ses_r = SES(A=A, B=B, C=C,
                    i=ModMap(A, B, ses_b.i.mat),
                    p=ModMap(B, C, ses_b.p.mat))
        ses_r.certify()
        pairs.append((cb, classify(ses_r, pres_R)))
    return pairs


# ---------------------------------------------------------------------------
# add-closure and MCM approximations
# ---------------------------------------------------------------------------


def in_add(M, X):
    """Is M a direct summand of a finite direct sum of copies of X?

    Criterion: the evaluation map X^r -> M over all Hom generators is a
    split surjection.
    """
    if M.is_zero():
        return True
    if X.is_zero():
        return False
    H = hom(X, M)
    r = len(H.maps)
    if r == 0:
        return False
    S, injs, projs = direct_sum([X] * r)
    base = M.handle.base
    mat = Mat.zeros(base, M.n, S.n)
    for idx, phim in enumerate(H.maps):
        part = phim.mat @ projs[idx].mat
        for i in range(M.n):
            for j in range(S.n):
                if part.rows[i][j].num:
                    mat.rows[i][j] = mat.rows[i][j] + part.rows[i][j]
    Phi = ModMap(S, M, mat)
    from .modules import is_surjective
    if not is_surjective(Phi):
        return False
    return _has_section(Phi)


def mcm_approximation_of_k(handle):
    """The sequence 0 -> omega -> Hom(m, omega) -> k' -> 0 obtained by
    dualizing 0 -> m -> R -> k -> 0 into the canonical module.

    Returns (ses, pres) where pres is Ext^1(k', omega); the cokernel k' is
    the residue field whenever the ring is not regular.
    """
    h = handle
    base = h.base
    F = regular_module(h)
    m = m_ideal(h)
    Mm, incl = submodule(F, m.span_basis())
    w = canonical_module(h)
    hp_R = hom(F, w)
    hp_m = hom(Mm, w)
    imat = hom_induced(incl, w, hp_R, hp_m)
    A = hp_R.module       # = omega
    B = hp_m.module       # = m-dual
    i = ModMap(A, B, imat)
    C, p = quotient_module(B, imat)
    ses = SES(A=A, B=B, C=C, i=i, p=p)
    ses.certify()
    pres = ext(C, A, 1)
    return ses, pres
