"""Finite-dimensional weight-graded modules and the rigid-category
operations on them: tensor products, duals, evaluation/coevaluation,
twist functors, and brute-force intertwiner solving.

A module is given concretely by a weight list (one Weight per basis
vector), matrices for E_0, E_1, F_0, F_1, and the central value acting
as Z.  All K_mu act diagonally through the weight pairing.  The same
base class also serves the induced-module truncations built elsewhere;
FinModule adds the constraint z-value = 1 that membership in the rigid
category requires.
"""

from __future__ import annotations

import json

from .linalg import (
    el_is_zero,
    identity,
    mat_add,
    mat_eq,
    mat_mul,
    mat_scale,
    mat_sub,
    nullspace,
    transpose,
    zeros,
)
from .rootdata import W0, Weight, build_affine_sl2
from .scalars import ONE, QT, ZERO, sc, scalar_str, parse_scalar

_Q = QT**4  # q = qt^(d*hvee)


def qnum(n, qexp=4):
    """Quantum integer [n] at q = qt^qexp."""
    q = QT**qexp
    num = q**n - q**-n
    return num / (q - q**-1)


def qfact(n, qexp=4):
    out = ONE
    for k in range(2, n + 1):
        out = out * qnum(k, qexp)
    return out


def qbinom(n, k, qexp=4):
    return qfact(n, qexp) / (qfact(k, qexp) * qfact(n - k, qexp))


class ModuleBase:
    """Weight-graded module with explicit generator matrices."""

    def __init__(self, datum, weights, zval, Emats, Fmats, name="", degrees=None):
        self.datum = datum
        self.weights = list(weights)
        self.zval = sc(zval)
        self.Emats = {i: Emats[i] for i in datum.I}
        self.Fmats = {i: Fmats[i] for i in datum.I}
        self.name = name
        self.degrees = list(degrees) if degrees is not None else [0] * len(weights)

    @property
    def dim(self):
        return len(self.weights)

    def E(self, i):
        return self.Emats[i]

    def F(self, i):
        return self.Fmats[i]

    def kt_diag(self, i):
        return [self.datum.kt_eig(i, lam, self.zval) for lam in self.weights]

    def kt_power_diag(self, nu):
        """Diagonal of K~_0^nu0 * K~_1^nu1."""
        d0 = self.kt_diag(0)
        d1 = self.kt_diag(1)
        n0, n1 = nu
        return [
            (a**n0 if n0 >= 0 else (ONE / a) ** -n0)
            * (b**n1 if n1 >= 0 else (ONE / b) ** -n1)
            for a, b in zip(d0, d1)
        ]

    def k_mu_diag(self, m0, m1):
        return self.kt_power_diag((m0, m1))

    def z_scalar(self, e=1):
        return self.zval**e if e >= 0 else (ONE / self.zval) ** -e

    def word_matrix(self, tokens):
        """Matrix of a generator word, leftmost token acting last on
        column vectors composed left-to-right as operators."""
        out = identity(self.dim)
        for tok in reversed(tokens):
            out = mat_mul(self._token_matrix(tok), out)
        return out

    def _token_matrix(self, tok):
        kind = tok[0]
        if kind == "E":
            return self.E(tok[1])
        if kind == "F":
            return self.F(tok[1])
        if kind == "K":
            d = self.k_mu_diag(tok[1], tok[2])
            return [[d[r] if r == c else ZERO for c in range(self.dim)] for r in range(self.dim)]
        if kind == "Z":
            s = self.z_scalar(tok[1])
            return [[s if r == c else ZERO for c in range(self.dim)] for r in range(self.dim)]
        raise ValueError("unknown token %r" % (tok,))

    def act(self, x) -> list:
        """Matrix of an AlgElement."""
        out = zeros(self.dim, self.dim)
        for c, w in x.terms:
            m = self.word_matrix(list(w))
            out = [[o + c * e for o, e in zip(orow, mrow)] for orow, mrow in zip(out, m)]
        return out

    # --- twists ----------------------------------------------------------

    def psi_twist(self, u, name=None):
        """Pull back along psi_u: E_i scaled by u^(d(i.i)/2), F_i inversely."""
        u = sc(u)
        Em, Fm = {}, {}
        for i in self.datum.I:
            e = self.datum.d * self.datum.pairing[i][i] // 2
            ue = u**e
            Em[i] = mat_scale(self.E(i), ue)
            Fm[i] = mat_scale(self.F(i), ONE / ue)
        return type(self)._rebuild(
            self, self.weights, self.zval, Em, Fm, name or ("T_u(%s)" % self.name)
        )

    def phi_twist(self, u, name=None):
        """Pull back along phi_u: only the special vertex, exponent d*hvee."""
        u = sc(u)
        e = self.datum.d * self.datum.hvee
        ue = u**e
        Em = dict(self.Emats)
        Fm = dict(self.Fmats)
        i0 = self.datum.i0
        Em[i0] = mat_scale(self.E(i0), ue)
        Fm[i0] = mat_scale(self.F(i0), ONE / ue)
        return type(self)._rebuild(
            self, self.weights, self.zval, Em, Fm, name or ("T_u^phi(%s)" % self.name)
        )

    def omega_twist(self, name=None):
        """Pull back along the Chevalley-type involution: weights negate,
        E and F matrices swap, central value inverts."""
        return type(self)._rebuild(
            self,
            [-w for w in self.weights],
            ONE / self.zval,
            dict(self.Fmats),
            dict(self.Emats),
            name or ("omega(%s)" % self.name),
        )

    @classmethod
    def _rebuild(cls, proto, weights, zval, Em, Fm, name):
        out = ModuleBase(proto.datum, weights, zval, Em, Fm, name=name)
        out.degrees = list(proto.degrees)
        return out

    # --- relation suite --------------------------------------------------

    def _cols_for_cost(self, cost):
        """Columns on which a relation whose intermediates descend at
        most `cost` lowering steps is exactly representable.  Finite
        modules have no boundary; truncations override this."""
        return list(range(self.dim))

    def verify_relations(self):
        """Exact check of the defining relations; returns a report.
        On truncations each relation is checked on the columns where
        both sides stay inside the truncation window."""
        datum = self.datum
        failures = []
        n = self.dim

        def check(label, ok):
            if not ok:
                failures.append(label)

        def check_cols(label, A, B, cost):
            cols = self._cols_for_cost(cost)
            ok = all(el_is_zero(A[r][c] - B[r][c]) for c in cols for r in range(n))
            check(label, ok)

        # weight grading: E_i raises by i', F_i lowers
        for i in datum.I:
            off = Weight(0, datum.iprime_offset(i))
            for r in range(n):
                for c in range(n):
                    if not el_is_zero(self.E(i)[r][c]):
                        check(
                            "E%d grading" % i, self.weights[r] == self.weights[c] + off
                        )
                    if not el_is_zero(self.F(i)[r][c]):
                        check(
                            "F%d grading" % i, self.weights[r] == self.weights[c] - off
                        )
        # Z^(d*hvee) = product of K~_i (kernel relation)
        zp = self.z_scalar(datum.d * datum.hvee)
        kk = self.kt_power_diag((1, 1))
        check("Z kernel relation", all(zp == x for x in kk))
        # K-conjugation: K~_i E_j K~_i^-1 = q^((i.j)) E_j
        for i in datum.I:
            kt = self.kt_diag(i)
            for j in datum.I:
                fac = _Q ** datum.pairing[i][j] if datum.pairing[i][j] >= 0 else ONE / _Q ** (-datum.pairing[i][j])
                for M, s, tag, cost in (
                    (self.E(j), fac, "E%d" % j, 0),
                    (self.F(j), ONE / fac, "F%d" % j, 1),
                ):
                    conj = [[kt[r] * M[r][c] / kt[c] for c in range(n)] for r in range(n)]
                    check_cols("K%d conj %s" % (i, tag), conj, mat_scale(M, s), cost)
        # commutators [E_i, F_j]
        for i in datum.I:
            for j in datum.I:
                lhs = mat_sub(mat_mul(self.E(i), self.F(j)), mat_mul(self.F(j), self.E(i)))
                if i != j:
                    check_cols("[E%d,F%d]=0" % (i, j), lhs, zeros(n, n), 1)
                else:
                    kt = self.kt_diag(i)
                    den = _Q - ONE / _Q  # q_i - q_i^-1, q_i = q here
                    rhs = [
                        [
                            ((kt[r] - ONE / kt[r]) / den) if r == c else ZERO
                            for c in range(n)
                        ]
                        for r in range(n)
                    ]
                    check_cols("[E%d,F%d]" % (i, i), lhs, rhs, 1)
        # quantum Serre relations (both signs), 1 - a_ij = 3 off-diagonal
        for i in datum.I:
            for j in datum.I:
                if i == j:
                    continue
                for mats, tag, cost in ((self.Emats, "E", 0), (self.Fmats, "F", 4)):
                    acc = zeros(n, n)
                    A, B = mats[i], mats[j]
                    for p in range(4):
                        term = identity(n)
                        for _ in range(p):
                            term = mat_mul(A, term)
                        term = mat_mul(B, term)
                        for _ in range(3 - p):
                            term = mat_mul(A, term)
                        coeff = qbinom(3, p) * (ONE if p % 2 == 0 else -ONE)
                        acc = [
                            [a + coeff * t for a, t in zip(ar, tr)]
                            for ar, tr in zip(acc, term)
                        ]
                    check_cols("Serre %s%d%s%d" % (tag, i, tag, j), acc, zeros(n, n), cost)
        return {"ok": not failures, "failures": sorted(set(failures))}


class FinModule(ModuleBase):
    """Module in the rigid category: finite-dimensional, Z acts as 1."""

    def __init__(self, datum, weights, Emats, Fmats, name="", check=True):
        super().__init__(datum, weights, ONE, Emats, Fmats, name=name)
        if check:
            rep = self.verify_relations()
            if not rep["ok"]:
                raise ValueError("relation failure in %s: %s" % (name, rep["failures"]))

    @classmethod
    def _rebuild(cls, proto, weights, zval, Em, Fm, name):
        if zval == ONE:
            out = FinModule(proto.datum, weights, Em, Fm, name=name, check=False)
            out.degrees = list(proto.degrees)
            return out
        return ModuleBase._rebuild(proto, weights, zval, Em, Fm, name)

    def to_json(self):
        return {
            "name": self.name,
            "weights": [[w.na, w.m] for w in self.weights],
            "E": {str(i): [[scalar_str(e) for e in row] for row in self.E(i)] for i in self.datum.I},
            "F": {str(i): [[scalar_str(e) for e in row] for row in self.F(i)] for i in self.datum.I},
        }

    @classmethod
    def from_json(cls, doc, datum=None):
        datum = datum or build_affine_sl2()
        weights = [Weight(na, m) for na, m in doc["weights"]]
        Em = {int(i): [[parse_scalar(e) for e in row] for row in M] for i, M in doc["E"].items()}
        Fm = {int(i): [[parse_scalar(e) for e in row] for row in M] for i, M in doc["F"].items()}
        return cls(datum, weights, Em, Fm, name=doc.get("name", ""))


def build_simple(m: int, datum=None) -> FinModule:
    """The (m+1)-dimensional evaluation module at spectral point 1.

    Basis v_0..v_m with v_k of weight (m-2k)w;
    E_1 v_k = [k] v_{k-1}, F_1 v_k = [m-k] v_{k+1},
    E_0 v_k = [m-k] v_{k+1}, F_0 v_k = [k] v_{k-1}.
    """
    datum = datum or build_affine_sl2()
    n = m + 1
    weights = [Weight(0, m - 2 * k) for k in range(n)]
    low = zeros(n, n)  # v_k -> [m-k] v_{k+1}
    rai = zeros(n, n)  # v_k -> [k] v_{k-1}
    for k in range(n):
        if k + 1 < n:
            low[k + 1][k] = qnum(m - k)
        if k - 1 >= 0:
            rai[k - 1][k] = qnum(k)
    Em = {1: rai, 0: low}
    Fm = {1: low, 0: rai}
    return FinModule(datum, weights, Em, Fm, name="V(%d)" % m)


def trivial_module(datum=None) -> FinModule:
    datum = datum or build_affine_sl2()
    return FinModule(datum, [W0], {0: [[ZERO]], 1: [[ZERO]]}, {0: [[ZERO]], 1: [[ZERO]]}, name="1")


# --- tensor and dual -----------------------------------------------------

def kron(A, B):
    ra, rb = len(A), len(B)
    ca, cb = len(A[0]), len(B[0])
    out = zeros(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            a = A[i][j]
            if el_is_zero(a):
                continue
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k][j * cb + l] = a * B[k][l]
    return out


def _diag_mat(d):
    n = len(d)
    return [[d[r] if r == c else ZERO for c in range(n)] for r in range(n)]


def tensor(X: ModuleBase, Y: ModuleBase, name=None) -> ModuleBase:
    """X (x) Y with the coproduct action: basis x_r (x) y_s ordered with
    the Y-index fastest."""
    datum = X.datum
    weights = [wx + wy for wx in X.weights for wy in Y.weights]
    iy = identity(Y.dim)
    ix = identity(X.dim)
    Em, Fm = {}, {}
    for i in datum.I:
        ktx = _diag_mat(X.kt_diag(i))
        kty_inv = _diag_mat([ONE / e for e in Y.kt_diag(i)])
        Em[i] = mat_add(kron(X.E(i), iy), kron(ktx, Y.E(i)))
        Fm[i] = mat_add(kron(X.F(i), kty_inv), kron(ix, Y.F(i)))
    out = ModuleBase(
        datum,
        weights,
        X.zval * Y.zval,
        Em,
        Fm,
        name=name or "%s@%s" % (X.name, Y.name),
    )
    out.degrees = [dx + dy for dx in X.degrees for dy in Y.degrees]
    if isinstance(X, FinModule) and isinstance(Y, FinModule):
        fin = FinModule(datum, weights, Em, Fm, name=out.name, check=False)
        fin.degrees = out.degrees
        return fin
    return out


def dual(X: FinModule, name=None) -> FinModule:
    """Left dual: rho_{X*}(h) = rho_X(S(h))^T on the dual basis."""
    from .uqalgebra import AlgElement, antipode

    datum = X.datum
    Em, Fm = {}, {}
    for i in datum.I:
        Em[i] = transpose(X.act(antipode(AlgElement.gen_E(i))))
        Fm[i] = transpose(X.act(antipode(AlgElement.gen_F(i))))
    out = FinModule(
        datum, [-w for w in X.weights], Em, Fm, name=name or (X.name + "*"), check=False
    )
    out.degrees = list(X.degrees)
    return out


class ModuleMap:
    """Linear map between modules with intertwining bookkeeping."""

    def __init__(self, source, target, matrix):
        self.source = source
        self.target = target
        self.matrix = matrix

    def is_intertwiner(self):
        X, Y, H = self.source, self.target, self.matrix
        for i in X.datum.I:
            for tok in (("E", i), ("F", i)):
                lhs = mat_mul(H, X._token_matrix(tok))
                rhs = mat_mul(Y._token_matrix(tok), H)
                if not mat_eq(lhs, rhs):
                    return False
        # weight compatibility
        for r in range(Y.dim):
            for c in range(X.dim):
                if not el_is_zero(H[r][c]) and Y.weights[r] != X.weights[c]:
                    return False
        return True

    def compose(self, other):
        """self after other."""
        return ModuleMap(other.source, self.target, mat_mul(self.matrix, other.matrix))


def evaluation_map(X: FinModule) -> ModuleMap:
    """e_X : X* (x) X -> 1, f (x) v -> f(v)."""
    n = X.dim
    row = [ONE if r == c else ZERO for r in range(n) for c in range(n)]
    return ModuleMap(tensor(dual(X), X), trivial_module(X.datum), [row])


def coevaluation_map(X: FinModule) -> ModuleMap:
    """i_X : 1 -> X (x) X*, 1 -> sum v_k (x) v^k."""
    n = X.dim
    col = [[ONE if r == c else ZERO] for r in range(n) for c in range(n)]
    return ModuleMap(trivial_module(X.datum), tensor(X, dual(X)), col)


def zigzag_check(X: FinModule):
    """Both triangle identities for the left dual, exactly."""
    n = X.dim
    e = evaluation_map(X).matrix[0]
    i_ = [c[0] for c in coevaluation_map(X).matrix]
    # (id_X (x) e_X)(i_X (x) id_X) on X: v_c -> sum_{a,b} i[a,b] v_a (x) v^b (x) v_c -> sum e(v^b,v_c)...
    M1 = zeros(n, n)
    for c in range(n):
        for a in range(n):
            for b in range(n):
                M1[a][c] = M1[a][c] + i_[a * n + b] * e[b * n + c]
    # (e_X (x) id_{X*})(id_{X*} (x) i_X) on X*
    M2 = zeros(n, n)
    for c in range(n):
        for a in range(n):
            for b in range(n):
                M2[b][c] = M2[b][c] + i_[a * n + b] * e[c * n + a]
    return mat_eq(M1, identity(n)) and mat_eq(M2, identity(n))


def phi_transform(a: ModuleMap, V, X, Y, W) -> ModuleMap:
    """Hom(V (x) X, Y (x) W) -> Hom(Y* (x) V, W (x) X*):
    compose (e_Y (x) id)(id (x) a (x) id)(id (x) i_X)."""
    nv, nx, ny, nw = V.dim, X.dim, Y.dim, W.dim
    A = a.matrix  # rows (y,w), cols (v,x)
    out = zeros(nw * nx, ny * nv)
    for w in range(nw):
        for x in range(nx):
            for y in range(ny):
                for v in range(nv):
                    out[w * nx + x][y * nv + v] = A[y * nw + w][v * nx + x]
    return ModuleMap(tensor(dual(Y), V), tensor(W, dual(X)), out)


def phi_transform_inverse(b: ModuleMap, V, X, Y, W) -> ModuleMap:
    """Explicit inverse of phi_transform (same index bijection backwards)."""
    nv, nx, ny, nw = V.dim, X.dim, Y.dim, W.dim
    B = b.matrix  # rows (w,x), cols (y,v)
    out = zeros(ny * nw, nv * nx)
    for y in range(ny):
        for w in range(nw):
            for v in range(nv):
                for x in range(nx):
                    out[y * nw + w][v * nx + x] = B[w * nx + x][y * nv + v]
    return ModuleMap(tensor(V, X), tensor(Y, W), out)


# --- intertwiner solving -------------------------------------------------

def hom_space(X: ModuleBase, Y: ModuleBase):
    """Basis of the space of module maps X -> Y over the Scalar field."""
    if X.zval != Y.zval:
        return []
    nx, ny = X.dim, Y.dim
    # variables: H[r][c], only where weights match
    vars_ = [
        (r, c) for r in range(ny) for c in range(nx) if Y.weights[r] == X.weights[c]
    ]
    if not vars_:
        return []
    vidx = {rc: k for k, rc in enumerate(vars_)}
    rows = []
    for i in X.datum.I:
        for tok in (("E", i), ("F", i)):
            A = X._token_matrix(tok)
            B = Y._token_matrix(tok)
            # (H A - B H)[r][c] = 0
            for r in range(ny):
                for c in range(nx):
                    row = [ZERO] * len(vars_)
                    any_nz = False
                    for k in range(nx):
                        if (r, k) in vidx and not el_is_zero(A[k][c]):
                            row[vidx[(r, k)]] = row[vidx[(r, k)]] + A[k][c]
                            any_nz = True
                    for k in range(ny):
                        if (k, c) in vidx and not el_is_zero(B[r][k]):
                            row[vidx[(k, c)]] = row[vidx[(k, c)]] - B[r][k]
                            any_nz = True
                    if any_nz:
                        rows.append(row)
    sols = nullspace(rows) if rows else [
        [ONE if i == j else ZERO for j in range(len(vars_))] for i in range(len(vars_))
    ]
    maps = []
    for s in sols:
        H = zeros(ny, nx)
        for k, (r, c) in enumerate(vars_):
            H[r][c] = s[k]
        maps.append(ModuleMap(X, Y, H))
    return maps


class TwistedTensor:
    """A tensor product of modules with per-leg t-twist flags, presented
    through the degree-split generator action.

    For each generator the coproduct action splits as C0 + t^2*C2 once
    the overall t^-2 of twisted-leg lowering terms is cleared: for
    raising generators the twisted legs carry t^2; for lowering
    generators (multiplied through by t^2) the untwisted legs do.
    """

    def __init__(self, mods, twisted):
        self.mods = list(mods)
        self.twisted = list(twisted)
        self.datum = mods[0].datum
        self.weights = [W0]
        self.degrees = [0]
        for M in mods:
            self.weights = [w + wm for w in self.weights for wm in M.weights]
            self.degrees = [d + dm for d in self.degrees for dm in M.degrees]
        self.zval = ONE
        for M in mods:
            self.zval = self.zval * M.zval
        self.dim = len(self.weights)

    def split_action(self, kind, i):
        """(C0, C2) with cleared action = C0 + t^2 C2 for generator."""
        C0 = zeros(self.dim, self.dim)
        C2 = zeros(self.dim, self.dim)
        for leg, M in enumerate(self.mods):
            legmat = M.E(i) if kind == "E" else M.F(i)
            factors = []
            for pos, N in enumerate(self.mods):
                if pos == leg:
                    factors.append(legmat)
                elif kind == "E" and pos < leg:
                    factors.append(_diag_mat(N.kt_diag(i)))
                elif kind == "F" and pos > leg:
                    factors.append(_diag_mat([ONE / e for e in N.kt_diag(i)]))
                else:
                    factors.append(identity(N.dim))
            term = factors[0]
            for f in factors[1:]:
                term = kron(term, f)
            hot = self.twisted[leg] if kind == "E" else not self.twisted[leg]
            tgt = C2 if hot else C0
            for r in range(self.dim):
                for c in range(self.dim):
                    tgt[r][c] = tgt[r][c] + term[r][c]
        return C0, C2

    def plain_module(self) -> ModuleBase:
        """The underlying untwisted tensor product as a ModuleBase."""
        out = self.mods[0]
        for M in self.mods[1:]:
            out = tensor(out, M)
        return out


def hom_space_t(src: TwistedTensor, tgt: TwistedTensor, n: int, cut_kinds=()):
    """Maps over A_n commuting with the twisted actions.

    cut_kinds lists generator kinds whose equations are dropped on
    top-degree target rows (contaminated by truncation, see the exact
    braiding solver).  Returns (dimension over the constants, basis as
    coefficient-matrix lists H_0..H_{n-1}, free-of-rank-one flag).
    """
    nx, ny = src.dim, tgt.dim
    dmax_t = max(tgt.degrees)
    if src.zval != tgt.zval:
        return 0, [], False
    vars_ = [
        (r, c) for r in range(ny) for c in range(nx) if tgt.weights[r] == src.weights[c]
    ]
    nv = len(vars_)
    if nv == 0:
        return 0, [], False
    vidx = {rc: k for k, rc in enumerate(vars_)}
    rows = []
    for i in src.datum.I:
        for kind in ("E", "F"):
            S0, S2 = src.split_action(kind, i)
            T0, T2 = tgt.split_action(kind, i)
            # order k of H(t)(S0+t^2 S2) - (T0+t^2 T2)H(t):
            #   H_k S0 + H_{k-2} S2 - T0 H_k - T2 H_{k-2}
            for k in range(n):
                for r in range(ny):
                    if kind in cut_kinds and tgt.degrees[r] > dmax_t - 1:
                        continue
                    for c in range(nx):
                        row = [ZERO] * (nv * n)
                        any_nz = False
                        for m in range(nx):
                            if (r, m) in vidx:
                                if not el_is_zero(S0[m][c]):
                                    row[k * nv + vidx[(r, m)]] = (
                                        row[k * nv + vidx[(r, m)]] + S0[m][c]
                                    )
                                    any_nz = True
                                if k >= 2 and not el_is_zero(S2[m][c]):
                                    row[(k - 2) * nv + vidx[(r, m)]] = (
                                        row[(k - 2) * nv + vidx[(r, m)]] + S2[m][c]
                                    )
                                    any_nz = True
                        for m in range(ny):
                            if (m, c) in vidx:
                                if not el_is_zero(T0[r][m]):
                                    row[k * nv + vidx[(m, c)]] = (
                                        row[k * nv + vidx[(m, c)]] - T0[r][m]
                                    )
                                    any_nz = True
                                if k >= 2 and not el_is_zero(T2[r][m]):
                                    row[(k - 2) * nv + vidx[(m, c)]] = (
                                        row[(k - 2) * nv + vidx[(m, c)]] - T2[r][m]
                                    )
                                    any_nz = True
                        if any_nz:
                            rows.append(row)
    sols = nullspace(rows) if rows else [
        [ONE if i == j else ZERO for j in range(nv * n)] for i in range(nv * n)
    ]
    basis = []
    for s in sols:
        coeffs = []
        for k in range(n):
            H = zeros(ny, nx)
            for j, (r, c) in enumerate(vars_):
                H[r][c] = s[k * nv + j]
            coeffs.append(H)
        basis.append(coeffs)
    # free of rank one over A_n iff dimension = n and some solution with
    # invertible-constant-term generates the rest under t-shifts
    free = False
    if len(basis) == n:
        gens = [b for b in basis if any(not el_is_zero(e) for row in b[0] for e in row)]
        if gens:
            g = gens[0]
            M = []
            for j in range(n):
                vec = []
                for k in range(n):
                    src_m = g[k - j] if 0 <= k - j < n else zeros(ny, nx)
                    vec.extend(_flatten(src_m))
                M.append(vec)
            from .linalg import rank

            free = rank(M) == n
    return len(basis), basis, free


def _flatten(M):
    return [e for row in M for e in row]
