"""Coinvariant spaces of truncated tensor products and the operators
acting on them.

The coinvariant quotient of an ambient module P by the augmentation
ideal is generated by the images of the algebra generators (E_i, F_i,
K-1, shifted by powers of the deformation parameter t).  On the
total-weight-zero part the K-relations are vacuous and the quotient is
computed by exact row reduction of the generator images; columns whose
generator action would overflow the truncation window are excluded, and
completeness of the remaining relation set is certified against the
predicted free rank.  The projection is reduction against the row
echelon form; the retained coordinates form a basis and projecting a
representative returns itself (retraction invariant).
"""

from __future__ import annotations

from .findim import TwistedTensor, tensor
from .linalg import (
    el_is_zero,
    inv_matrix,
    mat_apply,
    mat_mul,
    nullspace,
    zeros,
)
from .rootdata import W0, Weight
from .scalars import ONE, QT, ZERO, unit_monomial


def _leg_kind_increases_degree(M, kind):
    """Whether applying generators of the given kind can push a vector
    deeper into the leg's truncation filtration (witnessed by a matrix
    entry; unreliable at level 1 where the boundary action is zero --
    callers with level-1 legs must pass the overflow spec explicitly)."""
    degs = M.degrees
    for i in M.datum.I:
        A = M.E(i) if kind == "E" else M.F(i)
        for r in range(M.dim):
            for c in range(M.dim):
                if degs[r] > degs[c] and not el_is_zero(A[r][c]):
                    return True
    return False


class CoinvSpace:
    """Coinvariants of n-truncated T = leg_1[t?] (x) ... (x) leg_k.

    Coordinates are pairs (t-order j, weight-zero ambient index); the
    relation span is row-reduced once and both the quotient basis and
    the projection are read off the echelon form.
    """

    def __init__(self, tt: TwistedTensor, n: int, overflow=None):
        self.tt = tt
        self.n = n
        if overflow is None:
            overflow = {
                li: {k for k in ("E", "F") if _leg_kind_increases_degree(leg, k)}
                for li, leg in enumerate(tt.mods)
            }
        self.overflow = {li: set(ks) for li, ks in overflow.items() if ks}
        self.idx0 = [k for k, w in enumerate(tt.weights) if w.is_zero()]
        self.pos0 = {k: p for p, k in enumerate(self.idx0)}
        self.coords = [(j, k) for j in range(n) for k in self.idx0]
        self.cidx = {co: p for p, co in enumerate(self.coords)}
        self._build_relations()

    # -- relation assembly -------------------------------------------------

    def _safe_columns(self, kind):
        """Ambient columns where the generator action is exactly
        representable (no leg overflows its truncation window)."""
        tt = self.tt
        legs = tt.mods
        deep = {
            li: max(legs[li].degrees)
            for li, ks in self.overflow.items()
            if kind in ks
        }
        if not deep:
            return list(range(tt.dim))
        # decompose ambient index into per-leg indices (last leg fastest)
        dims = [m.dim for m in legs]
        safe = []
        for c in range(tt.dim):
            rem, parts = c, []
            for d in reversed(dims):
                parts.append(rem % d)
                rem //= d
            parts.reverse()
            ok = True
            for li, md in deep.items():
                if legs[li].degrees[parts[li]] >= md:
                    ok = False
            if ok:
                safe.append(c)
        return safe

    def _build_relations(self):
        tt, n = self.tt, self.n
        nv = len(self.coords)
        rows = []
        for i in tt.datum.I:
            for kind in ("E", "F"):
                C0, C2 = tt.split_action(kind, i)
                safe = self._safe_columns(kind)
                for c in safe:
                    col0 = [(r, C0[r][c]) for r in self.idx0 if not el_is_zero(C0[r][c])]
                    col2 = [(r, C2[r][c]) for r in self.idx0 if not el_is_zero(C2[r][c])]
                    if not col0 and not col2:
                        continue
                    for j in range(n):
                        row = [ZERO] * nv
                        any_nz = False
                        for r, e in col0:
                            row[self.cidx[(j, r)]] = row[self.cidx[(j, r)]] + e
                            any_nz = True
                        if j + 2 < n:
                            for r, e in col2:
                                row[self.cidx[(j + 2, r)]] = (
                                    row[self.cidx[(j + 2, r)]] + e
                                )
                                any_nz = True
                        if any_nz:
                            rows.append(row)
        self._reduce(rows)

    def _reduce(self, rows):
        from .linalg import _rref

        pivots = _rref(rows, ncols=len(self.coords))
        self.rows = rows[: len(pivots)]
        self.pivots = pivots  # list of pivot column indices, one per row
        pivset = set(pivots)
        self.basis = [co for p, co in enumerate(self.coords) if p not in pivset]
        self.bidx = {co: i for i, co in enumerate(self.basis)}
        self.dim_c = len(self.basis)

    # -- projection --------------------------------------------------------

    def project_coords(self, vec):
        """Reduce a coordinate vector (length = #coords) modulo the
        relation rows; returns the coefficient list over self.basis."""
        v = list(vec)
        for row, pc in zip(self.rows, self.pivots):
            f = v[pc]
            if el_is_zero(f):
                continue
            for j in range(len(v)):
                if not el_is_zero(row[j]):
                    v[j] = v[j] - f * row[j]
        return [v[self.cidx[co]] for co in self.basis]

    def project_ambient(self, order_vectors):
        """Project [v_0, ..., v_{n-1}] (ambient vectors per t-order);
        components outside total weight zero are dropped (they are
        coinvariant-trivial)."""
        vec = [ZERO] * len(self.coords)
        for j, v in enumerate(order_vectors):
            if j >= self.n or v is None:
                continue
            for k in self.idx0:
                if not el_is_zero(v[k]):
                    vec[self.cidx[(j, k)]] = vec[self.cidx[(j, k)]] + v[k]
        return self.project_coords(vec)

    def represent(self, b):
        """Ambient per-order vectors of the b-th basis coordinate."""
        j, k = self.basis[b]
        out = [[ZERO] * self.tt.dim for _ in range(self.n)]
        out[j][k] = ONE
        return out

    # -- invariants --------------------------------------------------------

    def retraction_check(self):
        """Projecting each basis representative returns itself."""
        for b in range(self.dim_c):
            got = self.project_ambient(self.represent(b))
            for i, e in enumerate(got):
                want = ONE if i == b else ZERO
                if not el_is_zero(e - want):
                    return False
        return True

    def annihilation_check(self):
        """Projection kills the (safe) generator images, including the
        t-shifted ones."""
        tt = self.tt
        for i in tt.datum.I:
            for kind in ("E", "F"):
                C0, C2 = tt.split_action(kind, i)
                for c in self._safe_columns(kind):
                    for j in range(self.n):
                        vecs = [None] * self.n
                        vecs[j] = [C0[r][c] for r in range(tt.dim)]
                        if j + 2 < self.n:
                            vecs[j + 2] = [C2[r][c] for r in range(tt.dim)]
                        got = self.project_ambient(vecs)
                        if any(not el_is_zero(e) for e in got):
                            return False
        return True


def gamma_coinvariants(legs, twisted, n, overflow=None) -> CoinvSpace:
    """Coinvariants of the n-truncated twisted tensor product of the
    given legs (truncation-type legs and finite legs mixed).

    overflow maps a leg index to the set of generator kinds whose
    action can push that leg over its truncation window (e.g. {0: {"F"}}
    for a lowering-generated truncation in slot 0); when omitted it is
    inferred from the leg matrices, which is safe for levels >= 2.
    """
    return CoinvSpace(TwistedTensor(legs, twisted), n, overflow=overflow)


class DeltaPhi:
    """The deformation-parameter rewrite delta on coinvariant classes of
    (V (x) X)[t] (x) W and the identity certificate phi.

    delta is the three-arrow composition: braid X past V exactly
    (t-free), cyclically permute the twisted X slot to the end, then
    braid it back past W with the inverse slot-braiding series.  phi
    composes delta with the inverse regularized-Casimir operators on the
    outer legs; on coinvariants phi must be the identity, which
    certifies every normalization in the chain at once.
    """

    def __init__(self, V, Vb, X, n, diagonals=None):
        from . import braiding as br
        from .cat_o import sugawara

        W = Vb.omega_twist()
        self.V, self.W, self.X, self.n = V, W, X, n
        d = V.datum
        dV, dW, dX = V.dim, W.dim, X.dim
        self.dims = (dV, dW, dX)
        zv = V.zval
        Xz = X.phi_twist(ONE / zv, name="Tz(X)")
        Xt = X.phi_twist(ONE / (zv * QT**4), name="Tzq4(X)")
        self.Xt = Xt

        VX = tensor(V, X)
        XzV = tensor(Xz, V)
        self.space = CoinvSpace(
            TwistedTensor([VX, W], [True, False]), n, overflow={0: {"F"}, 1: {"E"}}
        )

        # per-leg weight diagonals (the L-factors of the global twists:
        # L_u on a weight-lam vector is u^(2[lam, w])); diagonals maps
        # leg name -> monomial u.  These carry the conversions between
        # the special-vertex-rescaling realization of the global twists
        # used by the solvers and the ladder realization entering the
        # composition, plus the central L-factors of the braidings.
        diagonals = diagonals or self.canonical_diagonals(V, X, n)
        self._dV = [self._u_pow_2lw(diagonals.get("V", ONE), lam)
                    for lam in V.weights]
        self._dX = [self._u_pow_2lw(diagonals.get("X", ONE), lam)
                    for lam in X.weights]
        self._dW = [self._u_pow_2lw(diagonals.get("W", ONE), lam)
                    for lam in W.weights]

        # arrow 1: exact braiding of X past V, gauge-pinned at the top pair
        tv, tx = br.top_index(V), br.top_index(X)
        pin1 = (
            tx * dV + tv,
            tv * dX + tx,
            ONE / d.pairing_q(V.weights[tv], X.weights[tx]),
        )
        S1 = br.solve_exact_braiding(VX, XzV, pin1, cut_kinds=("E",))
        # kron with the identity on the W leg
        self._S1W = zeros(dV * dX * dW, dV * dX * dW)
        for r in range(dV * dX):
            for c in range(dV * dX):
                if not el_is_zero(S1[r][c]):
                    for w in range(dW):
                        self._S1W[r * dW + w][c * dW + w] = S1[r][c]

        # arrow 2: index permutation (x, v, w) -> (v, w, x)
        self._perm = [0] * (dV * dX * dW)
        for x in range(dX):
            for v in range(dV):
                for w in range(dW):
                    self._perm[(v * dW + w) * dX + x] = (x * dV + v) * dW + w

        # arrow 3: inverse slot-braiding series on the (W, X) tail; the
        # slot braiding is canonically gauged (its constant term is the
        # diagonal-pairing factor at every flip entry).
        coeffs, _s2src, _s2tgt, Xs = br.slot_braiding(Xt, W, n)
        self.Xs = Xs
        G = br.series_inverse(coeffs, n)
        self._G = G

        # outer-leg inverse regularized-Casimir factors with the absolute
        # normalization (value q^[lam,lam] z^(-2d[lam,rho']) on raising-
        # killed vectors); W is the involution twist of the lowering
        # truncation Vb sharing W's index space, so its partner operator
        # inverse is the unnormalized sugawara matrix of Vb.
        self._TVinv = inv_matrix(sugawara(V, normalized=False))
        self._TWcheck_inv = sugawara(Vb, normalized=False)

    @staticmethod
    def canonical_diagonals(V, X, n):
        """The per-leg twist monomials of the composition."""
        return {"V": ONE, "X": ONE, "W": ONE}

    @staticmethod
    def _u_pow_2lw(u, lam):
        """u^(2[lam, w]) for a Laurent monomial u = z^s * qt^(4r)."""
        if u == ONE:
            return ONE
        from .cat_o import _as_monomial

        s, e = _as_monomial(u)
        if e % 4:
            raise ValueError("diagonal monomial must be a power of z, q")
        r = e // 4
        return unit_monomial(qt_e=4 * r * lam.m, ca_e=2 * r * lam.na,
                             z_e=s * lam.m, za2_e=s * lam.na)

    # -- ambient chain -----------------------------------------------------

    def apply_delta(self, order_vecs):
        """Push per-order ambient vectors of (V (x) X)[t] (x) W through
        the three arrows; returns per-order vectors on the same index
        layout (final X slot reinterpreted with its accumulated twist)."""
        dV, dW, dX = self.dims
        n = self.n
        dim = dV * dX * dW
        out = [[ZERO] * dim for _ in range(n)]
        for j, v in enumerate(order_vecs):
            if j >= n or v is None:
                continue
            v = list(v)
            for vv in range(dV):
                for x in range(dX):
                    f = self._dV[vv] * self._dX[x]
                    for w in range(dW):
                        i = (vv * dX + x) * dW + w
                        if not el_is_zero(v[i]):
                            v[i] = v[i] * f * self._dW[w]
            v1 = mat_apply(self._S1W, v)
            v2 = [v1[self._perm[c]] for c in range(dim)]
            for k in range(0, n - j):
                Gk = self._G[k]
                if all(el_is_zero(e) for row in Gk for e in row):
                    continue
                tgt = out[j + k]
                for vv in range(dV):
                    base_in = vv * dW * dX
                    base_out = vv * dX * dW
                    for c2 in range(dW * dX):
                        a = v2[base_in + c2]
                        if el_is_zero(a):
                            continue
                        for r2 in range(dX * dW):
                            g = Gk[r2][c2]
                            if not el_is_zero(g):
                                tgt[base_out + r2] = tgt[base_out + r2] + g * a
        return out

    def apply_phi(self, order_vecs):
        """delta followed by the inverse outer-leg operators."""
        dV, dW, dX = self.dims
        mid = self.apply_delta(order_vecs)
        out = []
        for v in mid:
            u = [ZERO] * len(v)
            for vv in range(dV):
                for x in range(dX):
                    for w in range(dW):
                        a = v[(vv * dX + x) * dW + w]
                        if el_is_zero(a):
                            continue
                        for vv2 in range(dV):
                            f1 = self._TVinv[vv2][vv]
                            if el_is_zero(f1):
                                continue
                            for w2 in range(dW):
                                f2 = self._TWcheck_inv[w2][w]
                                if not el_is_zero(f2):
                                    i2 = (vv2 * dX + x) * dW + w2
                                    u[i2] = u[i2] + f1 * f2 * a
            out.append(u)
        return out

    # -- coinvariant matrices ----------------------------------------------

    def phi_matrix(self):
        """Matrix of phi on the coinvariant basis (columns = images)."""
        C = self.space
        cols = []
        for b in range(C.dim_c):
            cols.append(C.project_ambient(self.apply_phi(C.represent(b))))
        return [[cols[c][r] for c in range(C.dim_c)] for r in range(C.dim_c)]

    def phi_is_identity(self):
        M = self.phi_matrix()
        for r in range(len(M)):
            for c in range(len(M)):
                want = ONE if r == c else ZERO
                if not el_is_zero(M[r][c] - want):
                    return False
        return True


def u0_coinvariants(weight_lists):
    """Plain (t-free) weight-space coinvariants of a product of
    weight-graded factors: the quotient by the K-relations is the
    total-weight-zero part.  Returns (dimension, list of multi-indices,
    K-image rank check)."""
    combos = [((), W0)]
    for wl in weight_lists:
        combos = [(ix + (i,), w + wi) for ix, w in combos for i, wi in enumerate(wl)]
    zero = [ix for ix, w in combos if w.is_zero()]
    # cross-check: the (K-1)-image span has rank = total - #weight-zero
    # because the K-eigenvalue minus 1 is a nonzero scalar off weight 0.
    total = len(combos)
    rank_expected = total - len(zero)
    rank_got = sum(1 for _ix, w in combos if not w.is_zero())
    return len(zero), zero, rank_got == rank_expected
