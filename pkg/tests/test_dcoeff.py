import random

import pytest
from hypothesis import given, settings, strategies as st

from subext.dcoeff import (
    Base, Mat, Scalar, Subquotient, cokernel_invariants, hstack, in_span,
    kernel, pgcd, pinv_series, pmod_tk, pmul, smith, solve, solve_matrix,
)
from subext.errors import ExactDivisionError, NotInSpanError

F5 = Base(5, local=False)
L2 = Base(2, local=True)
L3 = Base(3, local=True)


def rand_scalar(base, rng, maxdeg=3, frac=True):
    p = base.p
    if not base.local:
        return base.from_int(rng.randrange(p))
    num = tuple(rng.randrange(p) for _ in range(rng.randrange(maxdeg + 1)))
    if frac and rng.random() < 0.3:
        den = (1,) + tuple(rng.randrange(p) for _ in range(rng.randrange(2)))
        return base.scalar(num, den)
    return base.poly(num)


def rand_mat(base, rng, m, n, **kw):
    return Mat(base, [[rand_scalar(base, rng, **kw) for _ in range(n)]
                      for _ in range(m)])


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def test_scalar_field_arithmetic():
    a = F5.from_int(3)
    b = F5.from_int(4)
    assert (a * b) == F5.from_int(12)
    assert (a + b) == F5.from_int(2)
    assert a.inverse() == F5.from_int(2)  # 3*2 = 6 = 1 mod 5


def test_scalar_local_normalization_is_canonical():
    # (t + t^2) / (1 + t) == t
    a = L2.scalar((0, 1, 1), (1, 1))
    assert a == L2.t_power(1)
    assert a.val() == 1
    # 2t == 0 over F_2
    assert L2.scalar((0, 2)).is_zero()


def test_scalar_unit_and_inverse():
    u = L3.scalar((1, 2), (1,))  # 1 + 2t, a unit
    assert u.is_unit()
    assert (u * u.inverse()) == L3.one()
    nonunit = L3.t_power(2)
    with pytest.raises(ExactDivisionError):
        nonunit.inverse()


def test_scalar_exact_division():
    a = L3.t_power(3)
    b = L3.scalar((0, 1, 1))  # t + t^2 = t(1+t)
    q = a.div(b)
    assert (q * b) == a
    with pytest.raises(ExactDivisionError):
        b.div(a)  # val 1 by val 3: quotient not in D


def test_reduce_mod_matches_series_inverse():
    a = L3.scalar((1,), (1, 1))  # 1/(1+t) = 1 - t + t^2 - ...
    r = a.reduce_mod(4)
    assert r.num == (1, 2, 1, 2)  # mod 3: 1, -1, 1, -1


@given(st.integers(0, 3 ** 5 - 1), st.integers(0, 3 ** 5 - 1), st.integers(0, 3 ** 5 - 1))
@settings(max_examples=60)
def test_scalar_ring_axioms_local(x, y, z):
    def dec(v):
        return L3.poly([(v // 3 ** i) % 3 for i in range(5)])
    a, b, c = dec(x), dec(y), dec(z)
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a + (-a) == L3.zero()


def test_pinv_series():
    a = (1, 1, 2)
    inv = pinv_series(a, 6, 3)
    assert pmod_tk(pmul(a, inv, 3), 6) == (1,)


def test_pgcd_monic():
    # (t+1)(t+2) and (t+1)t over F_3
    a = pmul((1, 1), (2, 1), 3)
    b = pmul((1, 1), (0, 1), 3)
    assert pgcd(a, b, 3) == (1, 1)


# ---------------------------------------------------------------------------
# smith / kernel / solve
# ---------------------------------------------------------------------------

def check_smith(A):
    snf = smith(A, want_u=True, want_uinv=True, want_v=True, want_vinv=True)
    base = A.base
    S = snf.U @ A @ snf.V
    for i in range(A.m):
        for j in range(A.n):
            want = base.zero()
            if i == j and i < snf.rank:
                want = base.t_power(snf.exps[i]) if base.local else base.one()
            assert S.rows[i][j] == want, (i, j, S.rows[i][j], want)
    assert (snf.U @ snf.Uinv) == Mat.identity(base, A.m)
    assert (snf.V @ snf.Vinv) == Mat.identity(base, A.n)
    assert snf.exps == sorted(snf.exps)
    return snf


def test_smith_known_local():
    # diag-able example: [[t, t^2], [t^2, t^2]] over F_2[t]_(t)
    A = Mat(L2, [[L2.t_power(1), L2.t_power(2)],
                 [L2.t_power(2), L2.t_power(2)]])
    snf = check_smith(A)
    # det = t^3 + t^4 ~ val 3, min entry val 1 -> exps [1, 2]
    assert snf.exps == [1, 2]


def test_smith_random_roundtrip():
    rng = random.Random(7)
    for base in (F5, L2, L3):
        for _ in range(25):
            m, n = rng.randrange(1, 5), rng.randrange(1, 5)
            check_smith(rand_mat(base, rng, m, n))


def test_kernel_is_saturated_and_exact():
    rng = random.Random(11)
    for base in (F5, L3):
        for _ in range(20):
            A = rand_mat(base, rng, rng.randrange(1, 4), rng.randrange(1, 5))
            K = kernel(A)
            assert (A @ K).is_zero()
            snfA = smith(A)
            assert K.n == A.n - snfA.rank
            if K.n:
                # saturated: invariant factors of the kernel basis are units
                assert all(e == 0 for e in smith(K).exps)


def test_solve_consistency():
    rng = random.Random(13)
    for base in (F5, L2):
        for _ in range(30):
            A = rand_mat(base, rng, rng.randrange(1, 4), rng.randrange(1, 4))
            x = [rand_scalar(base, rng) for _ in range(A.n)]
            b = A @ x
            got = solve(A, b)
            assert got is not None
            assert (A @ got) == b


def test_solve_insolvable():
    # t*x = 1 has no solution in D
    A = Mat(L2, [[L2.t_power(1)]])
    assert solve(A, [L2.one()]) is None


def test_solve_matrix():
    A = Mat(L3, [[L3.t_power(1), L3.one()], [L3.zero(), L3.t_power(2)]])
    B = A @ Mat(L3, [[L3.one(), L3.zero()], [L3.t_power(1), L3.one()]])
    X = solve_matrix(A, B)
    assert X is not None and (A @ X) == B


def test_cokernel_invariants():
    # D^2 / <(t,0),(0,t^3)> = D/t + D/t^3
    A = Mat(L2, [[L2.t_power(1), L2.zero()], [L2.zero(), L2.t_power(3)]])
    assert cokernel_invariants(A) == (0, (1, 3))
    # one free generator left
    B = Mat(L2, [[L2.t_power(2)], [L2.zero()]])
    assert cokernel_invariants(B) == (1, (2,))


# ---------------------------------------------------------------------------
# subquotients
# ---------------------------------------------------------------------------

def test_subquotient_basic():
    # U = D^2, V = <(t^2,0),(0,t^3)>: invariants (2,3) ascending
    U = Mat.identity(L2, 2)
    V = Mat(L2, [[L2.t_power(2), L2.zero()], [L2.zero(), L2.t_power(3)]])
    sq = Subquotient(L2, 2, U, V)
    assert sq.exps == (2, 3)
    assert sq.length() == 5
    # round trip project(lift) = id
    for coords in ([L2.one(), L2.zero()], [L2.t_power(1), L2.one()]):
        w = sq.lift(coords)
        back = sq.project(w)
        assert back == [c.reduce_mod(e) for c, e in zip(coords, sq.exps)]


def test_subquotient_free_part_and_membership():
    # U = <(1,0)>, V = 0 inside D^2: one free invariant
    U = Mat.from_cols(L3, 2, [[L3.one(), L3.zero()]])
    V = Mat.zeros(L3, 2, 0)
    sq = Subquotient(L3, 2, U, V)
    assert sq.exps == (None,)
    assert sq.length() is None
    assert sq.contains([L3.t_power(2), L3.zero()])
    assert not sq.contains([L3.zero(), L3.one()])
    with pytest.raises(NotInSpanError):
        sq.project([L3.zero(), L3.one()])


def test_subquotient_random_roundtrip():
    rng = random.Random(17)
    for base in (F5, L3):
        for _ in range(15):
            n = rng.randrange(1, 4)
            Ug = rand_mat(base, rng, n, rng.randrange(1, 4))
            # V: random D-combinations of U times non-units, plus t*U
            combos = []
            for _ in range(rng.randrange(0, 3)):
                coeffs = [rand_scalar(base, rng) for _ in range(Ug.n)]
                v = Ug @ coeffs
                s = base.t_power(rng.randrange(1, 3)) if base.local else base.zero()
                combos.append([x * s for x in v])
            Vg = Mat.from_cols(base, n, combos)
            sq = Subquotient(base, n, Ug, Vg)
            # every U generator projects and lifts consistently
            for j in range(Ug.n):
                w = Ug.col(j)
                c = sq.project(w)
                w2 = sq.lift(c)
                diff = [a - b for a, b in zip(w, w2)]
                # difference must lie in V + (torsion kill): project to zero
                assert all(x.is_zero() for x in sq.project(diff))


def test_in_span_and_hstack():
    A = Mat(L2, [[L2.t_power(1)], [L2.t_power(2)]])
    assert in_span(A, [L2.t_power(2), L2.t_power(3)])
    assert not in_span(A, [L2.one(), L2.zero()])
    H = hstack(L2, [A, Mat.identity(L2, 2)])
    assert H.n == 3 and in_span(H, [L2.one(), L2.zero()])
