"""Exact scalars and linear algebra over the coefficient base D.

D is either the finite field F_p or the localization F_p[t]_(t).  Scalars of
the local base are stored as reduced fractions num/den of polynomials in t,
with den constant-term normalized to 1; this representation is canonical, so
equality and hashing are structural.

The linear algebra here is the workhorse for everything else: a local Smith
normal form (diagonal entries are exact powers of t, exponents nondecreasing),
kernels, deterministic solves, cokernel invariants, and a Subquotient helper
that puts U/V (for V <= U <= D^n) into the canonical form
D^f + D/t^a1 + ... + D/t^ak together with coordinate maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ExactDivisionError, NotInSpanError

# ---------------------------------------------------------------------------
# polynomials over F_p, as coefficient tuples (index = power of t)
# ---------------------------------------------------------------------------


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _trim(out)


def pneg(a, p):
    return tuple((-x) % p for x in a)

def psub(a, b, p):
    return padd(a, pneg(b, p), p)


def pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def pdivmod(a, b, p):
    """Polynomial division; b must be nonzero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], p - 2, p)
    for i in range(len(a) - len(b), -1, -1):
        c = (a[i + len(b) - 1] * inv_lead) % p
        if c:
            q[i] = c
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - c * y) % p
    return _trim(q), _trim(a)


def pgcd(a, b, p):
    """Monic gcd."""
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    if a:
        inv_lead = pow(a[-1], p - 2, p)
        a = tuple((x * inv_lead) % p for x in a)
    return a


def pord(a):
    """t-adic order; None for the zero polynomial."""
    for i, x in enumerate(a):
        if x:
            return i
    return None


def pshift(a, k):
    """Multiply by t^k (k >= 0)."""
    if not a:
        return ()
    return (0,) * k + tuple(a)


def pmod_tk(a, k):
    return _trim(a[:k])


def pinv_series(a, k, p):
    """Inverse of a (a[0] != 0) modulo t^k."""
    inv0 = pow(a[0], p - 2, p)
    out = (inv0,)
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        # Newton: out <- out * (2 - a*out) mod t^prec
        t2 = padd(pconst(2, p), pneg(pmul(pmod_tk(a, prec), out, p), p), p)
        out = pmod_tk(pmul(out, t2, p), prec)
    return pmod_tk(out, k)


def pconst(c, p):
    c = c % p
    return (c,) if c else ()


# ---------------------------------------------------------------------------
# the base D and its scalars
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Base:
    """Coefficient base: F_p (local=False) or F_p[t] localized at (t)."""

    p: int
    local: bool = False

    def scalar(self, num, den=(1,)):
        return Scalar(self, num, den)

    def from_int(self, c):
        return Scalar(self, pconst(c, self.p), (1,))

    def zero(self):
        return Scalar(self, (), (1,))

    def one(self):
        return Scalar(self, (1,), (1,))

    def t_power(self, k):
        if not self.local:
            raise ValueError("t only exists over the local base")
        return Scalar(self, pshift((1,), k), (1,))

    def poly(self, coeffs):
        return Scalar(self, _trim(tuple(c % self.p for c in coeffs)), (1,))


class Scalar:
    """Element of D, stored as a reduced fraction num/den with den[0] = 1."""

    __slots__ = ("base", "num", "den", "_hash")

    def __init__(self, base, num, den=(1,), _normalized=False):
        self.base = base
        if _normalized:
            self.num, self.den = num, den
        else:
            self.num, self.den = self._norm(base, _trim(num), _trim(den))
        self._hash = None

    @staticmethod
    def _norm(base, num, den):
        p = base.p
        num = _trim(tuple(x % p for x in num))
        den = _trim(tuple(x % p for x in den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not base.local and (len(num) > 1 or len(den) > 1):
            raise ValueError("non-constant polynomial over a field base")
        if not num:
            if den[0] == 0:
                raise ExactDivisionError("denominator must be a unit of D")
            return (), (1,)
        g = pgcd(num, den, p)
        if len(g) > 1 or (g and g != (1,)):
            num = pdivmod(num, g, p)[0]
            den = pdivmod(den, g, p)[0]
        if den[0] == 0:
            raise ExactDivisionError("denominator must be a unit of D")
        # scale so den[0] == 1
        if den[0] != 1:
            inv0 = pow(den[0], p - 2, p)
            num = tuple((x * inv0) % p for x in num)
            den = tuple((x * inv0) % p for x in den)
        return num, den

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_unit(self):
        return bool(self.num) and self.num[0] != 0

    def val(self):
        """t-adic valuation; None for zero.  Over a field: 0 for nonzero."""
        return pord(self.num)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        p = self.base.p
        if self.den == other.den:
            return Scalar(self.base, padd(self.num, other.num, p), self.den)
        num = padd(pmul(self.num, other.den, p), pmul(other.num, self.den, p), p)
        return Scalar(self.base, num, pmul(self.den, other.den, p))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Scalar(self.base, pneg(self.num, self.base.p), self.den, _normalized=True)

    def __mul__(self, other):
        if not self.num or not other.num:
            return Scalar(self.base, (), (1,), _normalized=True)
        p = self.base.p
        return Scalar(self.base, pmul(self.num, other.num, p), pmul(self.den, other.den, p))

    def inverse(self):
        if not self.is_unit():
            raise ExactDivisionError("not a unit of D")
        return Scalar(self.base, self.den, self.num)

    def div(self, other):
        """Exact division in D; raises if the quotient is not in D."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if self.is_zero():
            return self
        return Scalar(self.base, pmul(self.num, other.den, self.base.p),
                      pmul(self.den, other.num, self.base.p))

    def reduce_mod(self, k):
        """Canonical polynomial representative modulo t^k (degree < k)."""
        p = self.base.p
        if not self.num:
            return self.base.zero()
        num = pmod_tk(pmul(self.num, pinv_series(self.den, k, p), p), k)
        return Scalar(self.base, num, (1,))

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Scalar) and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        def side(c):
            terms = []
            for i, x in enumerate(c):
                if x:
                    if i == 0:
                        terms.append(str(x))
                    elif i == 1:
                        terms.append(f"{x}t" if x != 1 else "t")
                    else:
                        terms.append(f"{x}t^{i}" if x != 1 else f"t^{i}")
            return "+".join(terms) or "0"

        if self.den == (1,):
            return side(self.num)
        return f"({side(self.num)})/({side(self.den)})"


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


class Mat:
    """Dense matrix of Scalars (desk scale; row operations skip zeros)."""

    __slots__ = ("base", "m", "n", "rows")

    def __init__(self, base, rows):
        self.base = base
        self.rows = [list(r) for r in rows]
        self.m = len(self.rows)
        self.n = len(self.rows[0]) if self.rows else 0

    @staticmethod
    def zeros(base, m, n):
        z = base.zero()
        return Mat(base, [[z] * n for _ in range(m)])

    @staticmethod
    def identity(base, n):
        z, o = base.zero(), base.one()
        return Mat(base, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def from_cols(base, m, cols):
        out = Mat.zeros(base, m, len(cols))
        for j, c in enumerate(cols):
            for i in range(m):
                out.rows[i][j] = c[i]
        return out

    def col(self, j):
        return [r[j] for r in self.rows]

    def cols(self):
        return [self.col(j) for j in range(self.n)]

    def copy(self):
        return Mat(self.base, self.rows)

    def __matmul__(self, other):
        if isinstance(other, list):
            out = [self.base.zero()] * self.m
            for i, row in enumerate(self.rows):
                acc = self.base.zero()
                for j, a in enumerate(row):
                    if a.num and other[j].num:
                        acc = acc + a * other[j]
                out[i] = acc
            return out
        assert self.n == other.m, (self.n, other.m)
        out = Mat.zeros(self.base, self.m, other.n)
        for i, row in enumerate(self.rows):
            orow = out.rows[i]
            for k, a in enumerate(row):
                if a.num:
                    brow = other.rows[k]
                    for j, b in enumerate(brow):
                        if b.num:
                            orow[j] = orow[j] + a * b
        return out

    def __add__(self, other):
        return Mat(self.base, [[a + b for a, b in zip(r1, r2)]
                               for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Mat(self.base, [[a - b for a, b in zip(r1, r2)]
                               for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return Mat(self.base, [[-a for a in r] for r in self.rows])

    def scale(self, s):
        return Mat(self.base, [[a * s for a in r] for r in self.rows])

    def transpose(self):
        return Mat(self.base, [[self.rows[i][j] for i in range(self.m)]
                               for j in range(self.n)])

    def is_zero(self):
        return all(a.is_zero() for r in self.rows for a in r)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.m == other.m and self.n == other.n
                and all(a == b for r1, r2 in zip(self.rows, other.rows)
                        for a, b in zip(r1, r2)))

    def __repr__(self):
        return "Mat[" + "; ".join(" ".join(repr(a) for a in r) for r in self.rows) + "]"


def hstack(base, mats, m=None):
    mats = [x for x in mats if x is not None and x.n > 0]
    if not mats:
        return Mat.zeros(base, m or 0, 0)
    rows = [[] for _ in range(mats[0].m)]
    for mat in mats:
        for i in range(mat.m):
            rows[i].extend(mat.rows[i])
    return Mat(base, rows)


def vstack(base, mats):
    rows = []
    for mat in mats:
        rows.extend(mat.rows)
    return Mat(base, rows)


# ---------------------------------------------------------------------------
# local Smith normal form
# ---------------------------------------------------------------------------


@dataclass
class SNF:
    """U @ A @ V = diag(t^e for e in exps), padded by zeros; rank = len(exps)."""

    exps: list
    rank: int
    U: Mat = None
    Uinv: Mat = None
    V: Mat = None
    Vinv: Mat = None


def smith(A, want_u=False, want_uinv=False, want_v=False, want_vinv=False):
    """Local Smith normal form.

    Pivots are chosen by minimal t-valuation, ties broken by smallest row then
    smallest column index.  Diagonal entries are normalized to exact powers t^e
    (over a field base, to 1), with exponents nondecreasing.
    """
    base = A.base
    W = [row[:] for row in A.rows]
    m, n = A.m, A.n
    U = Mat.identity(base, m) if want_u else None
    Uinv = Mat.identity(base, m) if want_uinv else None
    V = Mat.identity(base, n) if want_v else None
    Vinv = Mat.identity(base, n) if want_vinv else None
    exps = []
    r = 0
    while r < min(m, n) or (r < m and r < n):
        # find pivot of minimal valuation in W[r:, r:]
        best = None
        for i in range(r, m):
            row = W[i]
            for j in range(r, n):
                a = row[j]
                if a.num:
                    v = pord(a.num)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        if pi != r:
            W[r], W[pi] = W[pi], W[r]
            if U is not None:
                U.rows[r], U.rows[pi] = U.rows[pi], U.rows[r]
            if Uinv is not None:
                for row in Uinv.rows:
                    row[r], row[pi] = row[pi], row[r]
        if pj != r:
            for row in W:
                row[r], row[pj] = row[pj], row[r]
            if V is not None:
                for row in V.rows:
                    row[r], row[pj] = row[pj], row[r]
            if Vinv is not None:
                Vinv.rows[r], Vinv.rows[pj] = Vinv.rows[pj], Vinv.rows[r]
        # normalize pivot to exact t^v: scale row r by the unit part inverse
        piv = W[r][r]
        unit = Scalar(base, piv.num[v:], piv.den)  # piv = t^v * unit
        uinv = unit.inverse()
        if not (unit.num == (1,) and unit.den == (1,)):
            W[r] = [a * uinv if a.num else a for a in W[r]]
            if U is not None:
                U.rows[r] = [a * uinv if a.num else a for a in U.rows[r]]
            if Uinv is not None:
                for row in Uinv.rows:
                    if row[r].num:
                        row[r] = row[r] * unit
        tpow = base.t_power(v) if base.local else base.one()
        # clear column r below/above using row ops
        nz_cols = [j for j in range(n) if W[r][j].num]
        for i in range(m):
            if i == r or not W[i][r].num:
                continue
            f = W[i][r].div(tpow)
            Wi, Wr = W[i], W[r]
            for j in nz_cols:
                Wi[j] = Wi[j] - f * Wr[j]
            if U is not None:
                Ur = U.rows[r]
                Ui = U.rows[i]
                for j in range(m):
                    if Ur[j].num:
                        Ui[j] = Ui[j] - f * Ur[j]
            if Uinv is not None:
                for row in Uinv.rows:
                    if row[i].num:
                        row[r] = row[r] + f * row[i]
        # clear row r using column ops
        for j in range(n):
            if j == r or not W[r][j].num:
                continue
            g = W[r][j].div(tpow)
            for i in range(m):
                if W[i][r].num:
                    W[i][j] = W[i][j] - g * W[i][r]
            if V is not None:
                for row in V.rows:
                    if row[r].num:
                        row[j] = row[j] - g * row[r]
            if Vinv is not None:
                Vr = Vinv.rows[r]
                Vj = Vinv.rows[j]
                for k in range(n):
                    if Vj[k].num:
                        Vr[k] = Vr[k] + g * Vj[k]
        exps.append(v)
        r += 1
    return SNF(exps=exps, rank=len(exps), U=U, Uinv=Uinv, V=V, Vinv=Vinv)


def kernel(A):
    """Free, saturated basis of {x : A x = 0}, as columns of a matrix."""
    snf = smith(A, want_v=True)
    cols = [snf.V.col(j) for j in range(snf.rank, A.n)]
    return Mat.from_cols(A.base, A.n, cols)


def solve(A, b):
    """One solution x of A x = b (deterministic), or None if insolvable."""
    snf = smith(A, want_u=True, want_v=True)
    return _solve_with(A, snf, b)


def _solve_with(A, snf, b):
    base = A.base
    y = snf.U @ b
    x1 = [base.zero()] * A.n
    for i in range(A.m):
        if i < snf.rank:
            if y[i].is_zero():
                x1[i] = y[i]
                continue
            t_e = base.t_power(snf.exps[i]) if base.local else base.one()
            try:
                x1[i] = y[i].div(t_e)
            except ExactDivisionError:
                return None
            if not base.local and snf.exps[i] != 0:
                return None
        elif not y[i].is_zero():
            return None
    return snf.V @ x1


def solve_matrix(A, B):
    """Columnwise solve; returns X with A X = B, or None."""
    snf = smith(A, want_u=True, want_v=True)
    cols = []
    for j in range(B.n):
        x = _solve_with(A, snf, B.col(j))
        if x is None:
            return None
        cols.append(x)
    return Mat.from_cols(A.base, A.n, cols)


def in_span(A, b):
    return solve(A, b) is not None


def cokernel_invariants(A):
    """Invariants of D^m / colspan(A): (free_rank, torsion exponents)."""
    snf = smith(A)
    free = A.m - snf.rank
    torsion = tuple(e for e in snf.exps if e > 0)
    return free, torsion


# ---------------------------------------------------------------------------
# canonical subquotients U/V for V <= U <= D^n
# ---------------------------------------------------------------------------


class Subquotient:
    """Canonical form of U/V with coordinate maps.

    U and V are given by generator matrices (columns) inside ambient D^n,
    with V <= U required.  Canonical coordinates list free invariants first,
    then torsion invariants with nondecreasing exponents; ``exps`` holds None
    for each free invariant and the exponent for each torsion one.
    """

    def __init__(self, base, n, U_gens, V_gens):
        self.base = base
        self.n = n
        self._snfU = smith(U_gens, want_u=True, want_uinv=True)
        self.rankU = self._snfU.rank
        X = self._coord_matrix(V_gens)
        self._snfX = smith(X, want_u=True, want_uinv=True)
        free_idx = list(range(self._snfX.rank, self.rankU))
        tors_idx = [i for i in range(self._snfX.rank) if self._snfX.exps[i] > 0]
        self.kept = free_idx + tors_idx
        self.exps = tuple([None] * len(free_idx)
                          + [self._snfX.exps[i] for i in tors_idx])

    # coordinates of an ambient vector w inside U (basis from smith of U_gens)
    def _coords_in_U(self, w):
        base = self.base
        y = self._snfU.U @ w
        c = [base.zero()] * self.rankU
        for i in range(len(y)):
            if i < self.rankU:
                if y[i].is_zero():
                    continue
                t_e = base.t_power(self._snfU.exps[i]) if base.local else base.one()
                try:
                    c[i] = y[i].div(t_e)
                except ExactDivisionError:
                    raise NotInSpanError("vector not in U")
                if not base.local and self._snfU.exps[i] != 0:
                    raise NotInSpanError("vector not in U")
            elif not y[i].is_zero():
                raise NotInSpanError("vector not in U")
        return c

    def _coord_matrix(self, M):
        cols = [self._coords_in_U(M.col(j)) for j in range(M.n)]
        return Mat.from_cols(self.base, self.rankU, cols)

    def contains(self, w):
        try:
            self._coords_in_U(w)
            return True
        except NotInSpanError:
            return False

    def project(self, w):
        """Canonical coordinates of the class of w (w must lie in U)."""
        c = self._coords_in_U(w)
        z = self._snfX.U @ c
        out = []
        for pos, i in enumerate(self.kept):
            a = z[i]
            e = self.exps[pos]
            if e is not None and self.base.local:
                a = a.reduce_mod(e)
            out.append(a)
        return out

    def lift(self, coords):
        """Ambient representative of canonical coordinates."""
        base = self.base
        z = [base.zero()] * self.rankU
        for pos, i in enumerate(self.kept):
            z[i] = coords[pos]
        c = self._snfX.Uinv @ z
        # w = P[:, :rankU] @ diag(t^e) @ c  with P = Uinv of the U-smith
        scaled = []
        for i in range(self.rankU):
            t_e = base.t_power(self._snfU.exps[i]) if base.local else base.one()
            scaled.append(c[i] * t_e)
        P = self._snfU.Uinv
        w = [base.zero()] * self.n
        for i in range(self.n):
            acc = base.zero()
            row = P.rows[i]
            for j in range(self.rankU):
                if row[j].num and scaled[j].num:
                    acc = acc + row[j] * scaled[j]
            w[i] = acc
        return w

    # -- invariants ---------------------------------------------------------

    def free_rank(self):
        return sum(1 for e in self.exps if e is None)

    def torsion(self):
        return tuple(e for e in self.exps if e is not None)

    def length(self):
        """F_p-length; None if infinite."""
        if self.base.local:
            if any(e is None for e in self.exps):
                return None
            return sum(self.exps)
        return len(self.exps)

    def is_zero_module(self):
        return not self.exps
