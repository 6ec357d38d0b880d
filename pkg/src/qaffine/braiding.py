"""Spectral-parameter braidings s: X(t) (x) Y -> Y (x) X(t).

The braiding is computed order-by-order in the twist parameter t by
solving the intertwiner equations for the split generator actions of
`findim.TwistedTensor` as exact linear systems over the Scalar field.
For irreducible pairs the per-order solution space has rank one and the
remaining scalar-series freedom is fixed by a gauge: the matrix
coefficient from (top weight of X) (x) (top weight of Y) to the swapped
pair equals q^(-[top_X, top_Y]) identically in t.  With this gauge the
constant term is the weight-pairing diagonal Xi composed with the plain
swap.  Reducible pairs refuse the gauge and return the full solution
lattice instead.

Also provided: structural verification (hexagon, braid relation with
independent nested truncation variables, unit axiom, u-substitution
equivariance), exact rational fitting of the series entries with a
surplus-order certificate, and numeric pole sampling of the fitted
denominators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .findim import FinModule, ModuleMap, TwistedTensor, hom_space_t, tensor
from .linalg import (
    el_is_zero,
    identity,
    mat_eq,
    mat_mul,
    mat_scale,
    nullspace,
    solve_underdetermined,
    zeros,
)
from .scalars import ONE, TruncSeries, ZERO, evaluate_numeric, sc


# ---------------------------------------------------------------------------
# Xi and index helpers


def xi_operator(X, Y) -> ModuleMap:
    """Diagonal map on X (x) Y scaling the (lam, mu) block by q^(-[lam,mu])."""
    XY = tensor(X, Y)
    n = XY.dim
    H = zeros(n, n)
    for ix, lam in enumerate(X.weights):
        for iy, mu in enumerate(Y.weights):
            k = ix * Y.dim + iy
            H[k][k] = ONE / X.datum.pairing_q(lam, mu)
    return ModuleMap(XY, XY, H)


def swap_matrix(X, Y):
    """The permutation sigma: X (x) Y -> Y (x) X on tensor-basis indices."""
    H = zeros(X.dim * Y.dim, X.dim * Y.dim)
    for ix in range(X.dim):
        for iy in range(Y.dim):
            H[iy * X.dim + ix][ix * Y.dim + iy] = ONE
    return H


def top_index(X):
    """Index of the unique highest finite weight (maximal w-offset)."""
    best = max(w.m for w in X.weights)
    hits = [i for i, w in enumerate(X.weights) if w.m == best]
    if len(hits) != 1:
        raise ValueError("top finite weight is not unique")
    return hits[0]


# ---------------------------------------------------------------------------
# BraidSeries


@dataclass
class BraidSeries:
    """Order-n braiding X(t) (x) Y -> Y (x) X(t).

    coeffs[k] is the matrix of the t^k term over the Scalar field; gauge
    records the normalization ("xi-sigma-top") or None when the solution
    space had rank > 1 and the full basis is stored in `basis` instead.
    """

    X: object
    Y: object
    n: int
    coeffs: list
    gauge: str | None
    ranks: list = field(default_factory=list)
    basis: list | None = None

    def entry_series(self, r, c) -> TruncSeries:
        return TruncSeries(self.n, [self.coeffs[k][r][c] for k in range(self.n)])

    def substituted(self, u):
        """Coefficients of s with t replaced by u*t (u a Scalar unit)."""
        out = []
        pw = ONE
        for k in range(self.n):
            out.append(mat_scale(self.coeffs[k], pw))
            pw = pw * sc(u)
        return out

    def to_jsonable(self):
        from .scalars import scalar_str

        return {
            "X": getattr(self.X, "name", "?"),
            "Y": getattr(self.Y, "name", "?"),
            "order": self.n,
            "gauge": self.gauge,
            "ranks": self.ranks,
            "coeffs": [
                [[scalar_str(e) for e in row] for row in H] for H in self.coeffs
            ],
        }


def _intertwiner_system(src: TwistedTensor, tgt: TwistedTensor, cut_kinds=()):
    """Static data for the order-by-order solves.

    Returns (vars_, A, rhs_ops) where vars_ are the weight-matched
    entries of H, A is the order-0 operator H -> H S0 - T0 H as a row
    system over vars_, and rhs_ops maps a known H (matrix) to the
    right-hand side vector T2 H - H S2 stacked the same way.
    """
    nx, ny = src.dim, tgt.dim
    vars_ = [
        (r, c)
        for r in range(ny)
        for c in range(nx)
        if tgt.weights[r] == src.weights[c]
    ]
    vidx = {rc: k for k, rc in enumerate(vars_)}
    dmax_t = max(tgt.degrees)
    gens = []
    kinds = []
    for i in src.datum.I:
        for kind in ("E", "F"):
            S0, S2 = src.split_action(kind, i)
            T0, T2 = tgt.split_action(kind, i)
            gens.append((S0, S2, T0, T2))
            kinds.append(kind)
    A = []
    slots = []  # (gen index, r, c) per row of A
    for gi, (S0, _S2, T0, _T2) in enumerate(gens):
        for r in range(ny):
            if kinds[gi] in cut_kinds and tgt.degrees[r] > dmax_t - 1:
                continue
            for c in range(nx):
                row = [ZERO] * len(vars_)
                any_nz = False
                for m in range(nx):
                    if (r, m) in vidx and not el_is_zero(S0[m][c]):
                        row[vidx[(r, m)]] = row[vidx[(r, m)]] + S0[m][c]
                        any_nz = True
                for m in range(ny):
                    if (m, c) in vidx and not el_is_zero(T0[r][m]):
                        row[vidx[(m, c)]] = row[vidx[(m, c)]] - T0[r][m]
                        any_nz = True
                if any_nz:
                    A.append(row)
                    slots.append((gi, r, c))

    def rhs_of(Hprev):
        b = []
        for gi, r, c in slots:
            _S0, S2, _T0, T2 = gens[gi]
            v = ZERO
            for m in range(ny):
                if not el_is_zero(T2[r][m]):
                    v = v + T2[r][m] * Hprev[m][c]
            for m in range(nx):
                if not el_is_zero(S2[m][c]):
                    v = v - Hprev[r][m] * S2[m][c]
            b.append(v)
        return b

    return vars_, A, rhs_of


def solve_braiding(X, Y, n: int) -> BraidSeries:
    """The order-n braiding series X(t) (x) Y -> Y (x) X(t).

    Order-by-order inhomogeneous solves against the split actions; per
    order the homogeneous freedom must have rank one for the gauge to be
    fixed (top-pair coefficient q^(-[top,top]) identically in t).  An
    inconsistent order raises; rank > 1 returns the ungauged basis of
    the full A_n solution module.
    """
    if n > 24:
        raise ValueError("order exceeds the desk bound (24)")
    src = TwistedTensor([X, Y], [True, False])
    tgt = TwistedTensor([Y, X], [False, True])
    ixt, iyt = top_index(X), top_index(Y)
    col_top = ixt * Y.dim + iyt
    row_top = iyt * X.dim + ixt
    gauge_val = ONE / X.datum.pairing_q(X.weights[ixt], Y.weights[iyt])
    try:
        coeffs, ranks = solve_braiding_general(
            src, tgt, n, (row_top, col_top), gauge_val
        )
    except _RankError as err:
        dim, basis, free = hom_space_t(src, tgt, n)
        return BraidSeries(X, Y, n, [], None, ranks=[err.rank] * n, basis=basis)
    return BraidSeries(X, Y, n, coeffs, "xi-sigma-top", ranks=ranks)


class _RankError(ArithmeticError):
    def __init__(self, rank):
        super().__init__("solution space has rank %d (expected 1)" % rank)
        self.rank = rank


def solve_braiding_general(src, tgt, n, pin_rc, pin_value, cut_kinds=()):
    """Order-by-order braiding solve between twisted tensor products
    whose legs may be truncations (cut_kinds as in solve_exact_braiding).
    Gauge: the pinned entry equals pin_value identically in t.  Returns
    (coefficient matrices, per-order kernel ranks)."""
    vars_, A, rhs_of = _intertwiner_system(src, tgt, cut_kinds)
    if not vars_:
        raise ArithmeticError("no weight-matched entries: braiding cannot exist")
    ker = nullspace(A)
    nx, ny = src.dim, tgt.dim
    try:
        tslot = vars_.index(pin_rc)
    except ValueError:
        raise ArithmeticError("pinned entry is not weight-matched")
    if len(ker) != 1:
        raise _RankError(len(ker))
    if el_is_zero(ker[0][tslot]):
        raise ArithmeticError("gauge slot vanishes on the solution line")
    coeffs, ranks = [], []
    prev2 = None  # H_{k-2}
    prev1 = None  # H_{k-1}
    for k in range(n):
        if k == 0:
            part = [ZERO] * len(vars_)
            target = sc(pin_value)
        else:
            b = rhs_of(prev2) if k >= 2 else [ZERO] * len(A)
            part, _nf = solve_underdetermined(A, b)
            if part is None:
                raise ArithmeticError("inconsistent intertwiner system at order %d" % k)
            target = ZERO
        alpha = (target - part[tslot]) / ker[0][tslot]
        x = [part[j] + alpha * ker[0][j] for j in range(len(vars_))]
        H = zeros(ny, nx)
        for j, (r, c) in enumerate(vars_):
            H[r][c] = x[j]
        coeffs.append(H)
        ranks.append(1)
        prev2, prev1 = prev1, H
    return coeffs, ranks


def braiding_residual(coeffs, src: TwistedTensor, tgt: TwistedTensor):
    """Max-order residual check of H(t) = sum t^k coeffs[k] against the
    split actions; returns True when every order vanishes exactly."""
    n = len(coeffs)
    for i in src.datum.I:
        for kind in ("E", "F"):
            S0, S2 = src.split_action(kind, i)
            T0, T2 = tgt.split_action(kind, i)
            for k in range(n):
                R = mat_mul(coeffs[k], S0)
                R = [
                    [R[r][c] - e for c, e in enumerate(row)]
                    for r, row in enumerate(mat_mul(T0, coeffs[k]))
                ]
                if k >= 2:
                    P = mat_mul(coeffs[k - 2], S2)
                    Q = mat_mul(T2, coeffs[k - 2])
                    R = [
                        [R[r][c] + P[r][c] - Q[r][c] for c in range(len(R[0]))]
                        for r in range(len(R))
                    ]
                if any(not el_is_zero(e) for row in R for e in row):
                    return False
    return True


def solve_braiding_structured(
    src, tgt, n, allowed, pin_rc, pin_value, cut_rows=(), cut_cols=()
):
    """A_n braiding solve with a per-order support constraint.

    allowed(j, r, c) restricts the t^j coefficient to entries compatible
    with the order-by-order structure of the braiding (the order-2|nu|
    term carries a length-|nu| lowering word on the truncation slot, so
    its filtration drop is exactly |nu|).  cut_rows / cut_cols list the
    generator kinds whose equations are dropped on top-degree target
    rows / source columns respectively; which side is contaminated
    depends on whether the truncated leg's filtration is raised by the
    cold part of that kind.  The constrained solution space must be
    one-dimensional; the single scalar is fixed by the pin on the
    constant term.  Returns the coefficient matrices H_0..H_{n-1}.
    """
    nx, ny = src.dim, tgt.dim
    dmax_t = max(tgt.degrees)
    dmax_s = max(src.degrees)
    vars_ = [
        (j, r, c)
        for j in range(n)
        for r in range(ny)
        for c in range(nx)
        if tgt.weights[r] == src.weights[c] and allowed(j, r, c)
    ]
    vidx = {v: k for k, v in enumerate(vars_)}
    nv = len(vars_)
    rows = []
    for i in src.datum.I:
        for kind in ("E", "F"):
            S0, S2 = src.split_action(kind, i)
            T0, T2 = tgt.split_action(kind, i)
            for k in range(n):
                for r in range(ny):
                    if kind in cut_rows and tgt.degrees[r] > dmax_t - 1:
                        continue
                    for c in range(nx):
                        if kind in cut_cols and src.degrees[c] > dmax_s - 1:
                            continue
                        row = [ZERO] * nv
                        any_nz = False
                        for m in range(nx):
                            if (k, r, m) in vidx and not el_is_zero(S0[m][c]):
                                row[vidx[(k, r, m)]] = row[vidx[(k, r, m)]] + S0[m][c]
                                any_nz = True
                            if k >= 2 and (k - 2, r, m) in vidx and not el_is_zero(
                                S2[m][c]
                            ):
                                row[vidx[(k - 2, r, m)]] = (
                                    row[vidx[(k - 2, r, m)]] + S2[m][c]
                                )
                                any_nz = True
                        for m in range(ny):
                            if (k, m, c) in vidx and not el_is_zero(T0[r][m]):
                                row[vidx[(k, m, c)]] = row[vidx[(k, m, c)]] - T0[r][m]
                                any_nz = True
                            if k >= 2 and (k - 2, m, c) in vidx and not el_is_zero(
                                T2[r][m]
                            ):
                                row[vidx[(k - 2, m, c)]] = (
                                    row[vidx[(k - 2, m, c)]] - T2[r][m]
                                )
                                any_nz = True
                        if any_nz:
                            rows.append(row)
    ker = nullspace(rows) if rows else []
    if len(ker) != 1:
        raise _RankError(len(ker))
    pr, pc = pin_rc
    slot = vidx.get((0, pr, pc))
    if slot is None or el_is_zero(ker[0][slot]):
        raise ArithmeticError("pin entry not available on the solution line")
    alpha = sc(pin_value) / ker[0][slot]
    coeffs = [zeros(ny, nx) for _ in range(n)]
    for k, (j, r, c) in enumerate(vars_):
        coeffs[j][r][c] = alpha * ker[0][k]
    return coeffs


def slot_braiding(Xt, W, n, pin_value=None):
    """Braiding of a finite deformation slot past a lowering-type
    truncated module: Xs[t] (x) W -> W (x) Xt[t], where Xs carries the
    extra special-vertex rescaling by the inverse central value of W
    that the intertwiner equations require on the source side.

    The t^(2k) coefficient lowers the W filtration by exactly k, the
    constant term is the weight-pairing diagonal composed with the swap,
    and the solution is pinned at the (top of W, top of Xt) entry
    (default pin: inverse weight pairing of the two top weights, the
    same gauge as the finite braiding).  Returns (coeffs, src, tgt, Xs).
    """
    Xs = Xt.phi_twist(ONE / W.zval)
    src = TwistedTensor([Xs, W], [True, False])
    tgt = TwistedTensor([W, Xt], [False, True])
    dW, dX = W.dim, Xt.dim
    degW = W.degrees

    def allowed(j, r, c):
        return j % 2 == 0 and degW[c % dW] - degW[r // dX] == j // 2

    tx, tw = top_index(Xt), top_index(W)
    if pin_value is None:
        pin_value = ONE / Xt.datum.pairing_q(Xt.weights[tx], W.weights[tw])
    coeffs = solve_braiding_structured(
        src,
        tgt,
        n,
        allowed,
        (tw * dX + tx, tx * dW + tw),
        pin_value,
        cut_cols=("E",),
    )
    return coeffs, src, tgt, Xs


def series_inverse(coeffs, n):
    """Inverse of an A_n-map given by coefficient matrices H_0..H_{n-1}
    with invertible constant term: G_0 = H_0^(-1), G_k determined by
    sum_j H_j G_(k-j) = 0."""
    from .linalg import inv_matrix

    G0 = inv_matrix(coeffs[0])
    out = [G0]
    for k in range(1, n):
        acc = zeros(len(coeffs[0]), len(coeffs[0][0]))
        for j in range(1, k + 1):
            if j < len(coeffs):
                term = mat_mul(coeffs[j], out[k - j])
                for r in range(len(acc)):
                    for c in range(len(acc[0])):
                        acc[r][c] = acc[r][c] + term[r][c]
        out.append(mat_scale(mat_mul(G0, acc), -ONE))
    return out


# ---------------------------------------------------------------------------
# Relation verification


def _nested_lift_const(H, n):
    """Matrix of scalars -> matrix of outer-in-t2 series with scalar inner."""

    def lift(e):
        inner0 = TruncSeries(n, [e] + [ZERO] * (n - 1))
        innerz = TruncSeries(n, [ZERO] * n)
        return TruncSeries(n, [inner0] + [innerz] * (n - 1))

    return [[lift(e) for e in row] for row in H]


def _nested_from_coeffs(coeffs, n, variable):
    """Series sum_k t^k H_k as a nested matrix; variable in {"t1","t2","t1t2"}."""
    ny, nx = len(coeffs[0]), len(coeffs[0][0])
    out = []
    for r in range(ny):
        row = []
        for c in range(nx):
            outer = []
            for j in range(n):
                inner = [ZERO] * n
                for k in range(n):
                    e = coeffs[k][r][c] if k < len(coeffs) else ZERO
                    if variable == "t1" and j == 0:
                        inner[k] = inner[k] + e
                    elif variable == "t2" and k == j:
                        inner[0] = inner[0] + e
                    elif variable == "t1t2" and k == j:
                        inner[k] = inner[k] + e
                outer.append(TruncSeries(n, inner))
            row.append(TruncSeries(n, outer))
        out.append(row)
    return out


def _series_compose(A, B):
    """(A o B)_k = sum_j A_j B_{k-j} for lists of matrices."""
    n = max(len(A), len(B))
    out = []
    for k in range(n):
        M = zeros(len(A[0]), len(B[0][0]))
        for j in range(k + 1):
            if j < len(A) and k - j < len(B):
                P = mat_mul(A[j], B[k - j])
                M = [
                    [M[r][c] + P[r][c] for c in range(len(M[0]))]
                    for r in range(len(M))
                ]
        out.append(M)
    return out


def _tensor_id_left(coeffs, d):
    """id_{C^d} (x) H per order (identity on the left tensor factor)."""
    out = []
    for H in coeffs:
        ny, nx = len(H), len(H[0])
        M = zeros(d * ny, d * nx)
        for b in range(d):
            for r in range(ny):
                for c in range(nx):
                    M[b * ny + r][b * nx + c] = H[r][c]
        out.append(M)
    return out


def _tensor_id_right(coeffs, d):
    """H (x) id_{C^d} per order (identity on the right tensor factor)."""
    out = []
    for H in coeffs:
        ny, nx = len(H), len(H[0])
        M = zeros(ny * d, nx * d)
        for r in range(ny):
            for c in range(nx):
                if not el_is_zero(H[r][c]):
                    for b in range(d):
                        M[r * d + b][c * d + b] = H[r][c]
        out.append(M)
    return out


def verify_relations(X, Y, Z=None, n=4, which=("unit", "hexagon", "braid")):
    """Structural checks of the braiding family; returns a report dict.

    unit: s with the trivial module on either side is the identity.
    hexagon: s_{X(t), Y(x)Z} = (id_Y (x) s_{X(t),Z}) o (s_{X(t),Y} (x) id_Z).
    braid: on X(t1*t2) (x) Y(t2) (x) Z the two triple products agree,
    with t1 and t2 independent nested truncation variables.
    """
    from .findim import trivial_module

    report = {}
    if "unit" in which:
        triv = trivial_module(X.datum)
        s1 = solve_braiding(X, triv, n)
        s2 = solve_braiding(triv, X, n)
        ok = mat_eq(s1.coeffs[0], identity(X.dim)) and mat_eq(
            s2.coeffs[0], identity(X.dim)
        )
        for k in range(1, n):
            ok = ok and all(
                el_is_zero(e) for M in (s1.coeffs[k], s2.coeffs[k]) for row in M for e in row
            )
        report["unit"] = ok
    if Z is None:
        Z = Y
    if "hexagon" in which:
        YZ = tensor(Y, Z)
        lhs = solve_braiding(X, YZ, n)
        sxy = solve_braiding(X, Y, n)
        sxz = solve_braiding(X, Z, n)
        rhs = _series_compose(
            _tensor_id_left(sxz.coeffs, Y.dim), _tensor_id_right(sxy.coeffs, Z.dim)
        )
        ok = all(mat_eq(lhs.coeffs[k], rhs[k]) for k in range(n))
        report["hexagon"] = ok
    if "braid" in which:
        sxy = solve_braiding(X, Y, n)
        sxz = solve_braiding(X, Z, n)
        syz = solve_braiding(Y, Z, n)
        # X carries t1*t2, Y carries t2, Z untwisted; all pairwise
        # relative twists are then genuine power series:
        #   X vs Y -> t1,  X vs Z -> t1*t2,  Y vs Z -> t2.
        A = _nested_from_coeffs(_tensor_id_right(sxy.coeffs, Z.dim), n, "t1")
        B = _nested_from_coeffs(_tensor_id_left(sxz.coeffs, Y.dim), n, "t1t2")
        C = _nested_from_coeffs(_tensor_id_right(syz.coeffs, X.dim), n, "t2")
        D = _nested_from_coeffs(_tensor_id_left(syz.coeffs, X.dim), n, "t2")
        E = _nested_from_coeffs(_tensor_id_right(sxz.coeffs, Y.dim), n, "t1t2")
        F = _nested_from_coeffs(_tensor_id_left(sxy.coeffs, Z.dim), n, "t1")
        lhs = mat_mul(C, mat_mul(B, A))
        rhs = mat_mul(F, mat_mul(E, D))
        ok = all(
            el_is_zero(lhs[r][c] - rhs[r][c])
            for r in range(len(lhs))
            for c in range(len(lhs[0]))
        )
        report["braid"] = ok
    return report


def u_equivariance_check(s: BraidSeries, u):
    """Substituting t -> u*t must give a braiding for (psi_u-twisted X, Y)."""
    Xu = s.X.psi_twist(u)
    src = TwistedTensor([Xu, s.Y], [True, False])
    tgt = TwistedTensor([s.Y, Xu], [False, True])
    return braiding_residual(s.substituted(u), src, tgt)


# ---------------------------------------------------------------------------
# Rational fit and poles


def _reduce_series(coeffs):
    """Factor t^offset and detect the common step of the nonzero
    indices; returns (offset, step, reduced coefficient list)."""
    from math import gcd

    nz = [k for k, e in enumerate(coeffs) if not el_is_zero(e)]
    if not nz:
        return 0, 1, []
    offset = nz[0]
    step = 0
    for k in nz[1:]:
        step = gcd(step, k - offset)
    if step == 0:
        step = 1
    m = (len(coeffs) - 1 - offset) // step + 1
    return offset, step, [coeffs[offset + j * step] for j in range(m)]


def rational_fit_series(series: TruncSeries, maxdeg: int):
    """Minimal-degree rational fit of a truncated series.

    The series is first reduced: a monomial prefactor t^offset is
    factored off and the remaining coefficients, supported on an
    arithmetic progression of step s, are re-read as a series in the
    variable u = t^s.  The fit p(u)/q(u) (q(0)=1, degrees <= maxdeg)
    must match every reduced coefficient; returns
    (offset, step, p, q, surplus) or None.  surplus = reduced orders
    available beyond the number of fit parameters.
    """
    offset, step, co = _reduce_series(series.coeffs)
    if not co:
        return 0, 1, [ZERO], [ONE], series.n
    n = len(co)
    for total in range(0, 2 * maxdeg + 1):
        for dq in range(0, min(total, maxdeg) + 1):
            dp = total - dq
            if dp > maxdeg:
                continue
            # unknowns p_0..p_dp, q_1..q_dq ; eqn per order k:
            #   sum_{j=0..dq} q_j co[k-j] = p_k  (q_0 = 1, p_k = 0 for k > dp)
            nv = (dp + 1) + dq
            rows, rhs = [], []
            for k in range(n):
                row = [ZERO] * nv
                if k <= dp:
                    row[k] = row[k] - ONE
                for j in range(1, dq + 1):
                    if k - j >= 0:
                        row[dp + j] = row[dp + j] + co[k - j]
                rows.append(row)
                rhs.append(-co[k])
            x, _nf = solve_underdetermined(rows, rhs)
            if x is None:
                continue
            p = x[: dp + 1]
            q = [ONE] + x[dp + 1 :]
            surplus = n - (dp + dq + 1)
            return offset, step, p, q, max(surplus, 0)
    return None


def rational_eval_series(offset, step, p, q, n):
    """Expand t^offset * p(t^step)/q(t^step) back to a TruncSeries."""
    m = (n - 1 - offset) // step + 1 if n > offset else 0
    pu = TruncSeries(max(m, 1), [p[j] if j < len(p) else ZERO for j in range(max(m, 1))])
    qu = TruncSeries(max(m, 1), [q[j] if j < len(q) else ZERO for j in range(max(m, 1))])
    ru = pu * qu.inv()
    out = [ZERO] * n
    for j in range(m):
        k = offset + j * step
        if k < n:
            out[k] = ru.coeffs[j]
    return TruncSeries(n, out)


def rational_fit(s: BraidSeries, maxdeg: int):
    """Entry-wise exact rational fit of a gauged braiding series.

    Returns {"ok": bool, "surplus": min surplus over nonconstant
    entries, "entries": {(r,c): (p, q)}}; ok is False when some nonzero
    entry admits no fit within the degree bound.
    """
    if s.gauge is None:
        raise ValueError("ungauged braiding series cannot be fitted")
    if s.n < 2 * maxdeg + 2:
        raise ValueError("series order too small for the requested degree bound")
    entries = {}
    surplus = None
    ok = True
    for r in range(len(s.coeffs[0])):
        for c in range(len(s.coeffs[0][0])):
            ser = s.entry_series(r, c)
            if all(el_is_zero(e) for e in ser.coeffs):
                continue
            fit = rational_fit_series(ser, maxdeg)
            if fit is None:
                ok = False
                continue
            offset, step, p, q, sur = fit
            entries[(r, c)] = (offset, step, p, q)
            if len(p) + len(q) > 2:  # nonconstant: counts toward certification
                surplus = sur if surplus is None else min(surplus, sur)
    return {"ok": ok, "surplus": surplus, "entries": entries}


def pole_analysis(fit, assignment, region=(0.0, 10.0)):
    """Numeric pole sampling from the fitted denominators.

    assignment maps unit names to complex numbers; region is a radius
    window.  Returns {"zero_in_lambda": False, "poles": [...],
    "isolated": bool, "flagged": [...]} with poles the distinct
    denominator roots inside the window, in the reduced variable
    u = t^step of each entry's fit.
    """
    import numpy as np

    poles = []
    flagged = []
    for (r, c), (_o, _s, _p, q) in fit["entries"].items():
        den = [evaluate_numeric(e, assignment) for e in q]
        if len(den) < 2:
            continue
        roots = np.roots(list(reversed(den)))
        for rt in roots:
            if region[0] <= abs(rt) <= region[1]:
                if abs(rt) < 1e-9:
                    flagged.append(((r, c), complex(rt)))
                else:
                    poles.append(complex(rt))
    # cluster duplicates
    distinct = []
    for p in poles:
        if all(abs(p - q_) > 1e-6 * (1 + abs(p)) for q_ in distinct):
            distinct.append(p)
    isolated = all(
        abs(a - b) > 1e-6 for i, a in enumerate(distinct) for b in distinct[i + 1 :]
    )
    return {
        "zero_in_lambda": bool(flagged),
        "poles": distinct,
        "isolated": isolated,
        "flagged": flagged,
    }


# ---------------------------------------------------------------------------
# Exact (t-free) braidings between induced-type modules


def solve_exact_braiding(src, tgt, pin, cut_kinds=("E",), allowed=None):
    """A single matrix H: src -> tgt intertwining E_i, F_i, with
    weight-matched entries, pinned by pin = (row, col, value).

    Both modules may be truncations by a one-sided ideal.  Generators
    that descend along the truncation filtration commute with the
    quotient, so their equations are exact everywhere; generators of the
    opposite kind (cut_kinds) are contaminated at the boundary by the
    discarded components and their equations are dropped on top-degree
    target rows.  cut_kinds is ("E",) for lowering-generated
    truncations in both slots and ("F",) for raising-generated ones.
    Raises unless the restricted solution space is one-dimensional.
    """
    nx, ny = src.dim, tgt.dim
    dmax_t = max(tgt.degrees)
    vars_ = [
        (r, c)
        for r in range(ny)
        for c in range(nx)
        if tgt.weights[r] == src.weights[c] and (allowed is None or allowed(r, c))
    ]
    vidx = {rc: k for k, rc in enumerate(vars_)}
    rows = []
    for i in src.datum.I:
        for kind in ("E", "F"):
            A = src.E(i) if kind == "E" else src.F(i)
            B = tgt.E(i) if kind == "E" else tgt.F(i)
            for c in range(nx):
                for r in range(ny):
                    if kind in cut_kinds and tgt.degrees[r] > dmax_t - 1:
                        continue
                    row = [ZERO] * len(vars_)
                    any_nz = False
                    for m in range(nx):
                        if (r, m) in vidx and not el_is_zero(A[m][c]):
                            row[vidx[(r, m)]] = row[vidx[(r, m)]] + A[m][c]
                            any_nz = True
                    for m in range(ny):
                        if (m, c) in vidx and not el_is_zero(B[r][m]):
                            row[vidx[(m, c)]] = row[vidx[(m, c)]] - B[r][m]
                            any_nz = True
                    if any_nz:
                        rows.append(row)
    ker = nullspace(rows) if rows else []
    if len(ker) != 1:
        raise ArithmeticError(
            "exact braiding solution space has rank %d (expected 1)" % len(ker)
        )
    pr, pc, pv = pin
    slot = vidx.get((pr, pc))
    if slot is None or el_is_zero(ker[0][slot]):
        raise ArithmeticError("pin entry not available on the solution line")
    alpha = sc(pv) / ker[0][slot]
    H = zeros(ny, nx)
    for j, (r, c) in enumerate(vars_):
        H[r][c] = alpha * ker[0][j]
    return H
