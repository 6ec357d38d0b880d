"""Induced modules at finite truncation: nil-modules, (generalized)
Verma truncations, the completed-tensor-with-finite-module model, and
Sugawara operators with their spectra.

Every induced object M = U (x)_{U+} (slice) is materialized only through
the tower of quotients M_n = M / (span of length-n lowering words); a
truncation has basis {(w, s)}: w a basis word of the graded half-algebra
with length < n, s a slice basis vector, representing w^- acting on s.
Lowering operators multiply the word (exact in the quotient); raising
operators commute through the word by the defining relations, which
strictly shortens words, so their matrices are exact on the truncation
window.

The completed tensor product of a Verma-type truncation V with a
finite-dimensional X is the same construction with slice = (top of V)
(x) X and the effective raising action E_i -> K~_i(top) * E_i^X; its
level-n quotient is finite-dimensional even though X's raising action
is not nilpotent, because vanishing is forced by the lowering word.
"""

from __future__ import annotations

from .findim import FinModule, ModuleBase, _diag_mat, kron, qnum
from .linalg import (
    el_is_zero,
    identity,
    mat_eq,
    mat_mul,
    mat_scale,
    nullspace,
    rank,
    solve_underdetermined,
    zeros,
)
from .rootdata import WA, Weight, q1_scalar
from .scalars import ONE, QT, ZERO, sc
from .uqalgebra import degrees_up_to, f_component_basis, omega_truncated

_Q = QT**4


class NilModule:
    """Finite weight-graded space with nilpotent raising action."""

    def __init__(self, weights, Emats, level, name=""):
        self.weights = list(weights)
        self.Emats = dict(Emats)
        self.level = level
        self.name = name

    @property
    def dim(self):
        return len(self.weights)

    def validate(self):
        """All raising words of the declared level act as zero."""
        n = self.dim

        def words(k):
            if k == 0:
                return [()]
            return [(i,) + w for i in self.Emats for w in words(k - 1)]

        for w in words(self.level):
            M = identity(n)
            for i in reversed(w):
                M = mat_mul(self.Emats[i], M)
            if any(not el_is_zero(e) for row in M for e in row):
                return False
        return True


def character_nil(base=WA) -> NilModule:
    """The one-dimensional character at the generic base point."""
    return NilModule([base], {0: [[ZERO]], 1: [[ZERO]]}, 1, name="char(%d,%d)" % (base.na, base.m))


class InducedTrunc(ModuleBase):
    """Level-n truncation of the module induced from a slice."""

    def __init__(self, datum, slice_weights, slice_E, zval, n, name=""):
        self.slice_weights = list(slice_weights)
        self.slice_E = {i: slice_E[i] for i in datum.I}
        self.level = n
        sdim = len(slice_weights)
        zval = sc(zval)
        # basis: (nu, word index, slice index), degree-major order
        basis = []
        for nu in [(0, 0)] + degrees_up_to(n - 1):
            fb = f_component_basis(nu)
            for wi, w in enumerate(fb.basis):
                for s in range(sdim):
                    basis.append((nu, wi, w, s))
        self.basis = basis
        index = {}
        for k, (nu, wi, w, s) in enumerate(basis):
            index[(w, s)] = k
        self.index = index
        weights = []
        degrees = []
        for nu, wi, w, s in basis:
            off = sum(datum.iprime_offset(j) for j in w)
            weights.append(slice_weights[s] - Weight(0, off))
            degrees.append(nu[0] + nu[1])
        dim = len(basis)

        # scaffold so kt_eig works during matrix assembly
        super().__init__(
            datum,
            weights,
            zval,
            {i: zeros(dim, dim) for i in datum.I},
            {i: zeros(dim, dim) for i in datum.I},
            name=name,
            degrees=degrees,
        )

        # lowering matrices: prepend the letter, expand in the word basis
        for i in datum.I:
            M = self.Fmats[i]
            for c, (nu, wi, w, s) in enumerate(basis):
                if nu[0] + nu[1] + 1 >= n:
                    continue
                word = (i,) + w
                nu2 = (nu[0] + (i == 0), nu[1] + (i == 1))
                fb2 = f_component_basis(nu2)
                coeffs = fb2.expand(word)
                for bi, cf in enumerate(coeffs):
                    if not el_is_zero(cf):
                        M[index[(fb2.basis[bi], s)]][c] = (
                            M[index[(fb2.basis[bi], s)]][c] + cf
                        )

        # raising matrices by commuting through the word
        for i in datum.I:
            M = self.Emats[i]
            for c, (nu, wi, w, s) in enumerate(basis):
                out = self._raise_raw(i, w, s)
                for (w2, s2), cf in out.items():
                    if el_is_zero(cf):
                        continue
                    nu2 = (sum(1 for j in w2 if j == 0), sum(1 for j in w2 if j == 1))
                    fb2 = f_component_basis(nu2)
                    coeffs = fb2.expand(w2) if w2 not in fb2.basis else None
                    if coeffs is None:
                        M[index[(w2, s2)]][c] = M[index[(w2, s2)]][c] + cf
                    else:
                        for bi, cb in enumerate(coeffs):
                            if not el_is_zero(cb):
                                M[index[(fb2.basis[bi], s2)]][c] = (
                                    M[index[(fb2.basis[bi], s2)]][c] + cf * cb
                                )

    def _word_weight(self, w, s):
        off = sum(self.datum.iprime_offset(j) for j in w)
        return self.slice_weights[s] - Weight(0, off)

    def _raise_raw(self, i, w, s):
        """E_i applied to the raw word vector (w, s): dict of raw terms."""
        if not w:
            out = {}
            col = [row[s] for row in self.slice_E[i]]
            for s2, cf in enumerate(col):
                if not el_is_zero(cf):
                    out[((), s2)] = out.get(((), s2), ZERO) + cf
            return out
        j, rest = w[0], w[1:]
        out = {}
        inner = self._raise_raw(i, rest, s)
        for (w2, s2), cf in inner.items():
            key = ((j,) + w2, s2)
            out[key] = out.get(key, ZERO) + cf
        if i == j:
            lam = self._word_weight(rest, s)
            kt = self.datum.kt_eig(i, lam, self.zval)
            cf = (kt - ONE / kt) / (_Q - ONE / _Q)
            key = (rest, s)
            out[key] = out.get(key, ZERO) + cf
        return out

    def degree_indices(self, k):
        return [i for i, d in enumerate(self.degrees) if d == k]

    def _cols_for_cost(self, cost):
        return [c for c, d in enumerate(self.degrees) if d + cost < self.level]


def build_verma(nil: NilModule, z, n, datum, name=None) -> InducedTrunc:
    """Level-n truncation of the module induced from a nil-module."""
    return InducedTrunc(
        datum,
        nil.weights,
        nil.Emats,
        z,
        n,
        name=name or ("M(%s)_%d" % (nil.name, n)),
    )


def standard_verma(datum, z, n, base=WA, name=None) -> InducedTrunc:
    """V^z at the generic base point, truncated to level n."""
    return build_verma(
        character_nil(base), z, n, datum, name=name or ("V^z_%d,%d[%d]" % (base.na, base.m, n))
    )


def dotted_tensor(V: InducedTrunc, X: FinModule, n, name=None) -> InducedTrunc:
    """Truncated completed tensor product of an induced module and a
    finite-dimensional module: induced from slice = V-slice (x) X."""
    datum = V.datum
    sw = [wv + wx for wv in V.slice_weights for wx in X.weights]
    sE = {}
    for i in datum.I:
        kt = _diag_mat(
            [datum.kt_eig(i, wv, V.zval) for wv in V.slice_weights]
        )
        sE[i] = [
            [a + b for a, b in zip(ra, rb)]
            for ra, rb in zip(
                kron(V.slice_E[i], identity(X.dim)), kron(kt, X.E(i))
            )
        ]
    return InducedTrunc(
        datum, sw, sE, V.zval * X.zval, n, name=name or ("%s.ox.%s" % (V.name, X.name))
    )


# --- quasi-Casimir -------------------------------------------------------

def solve_omega_coeffs(p, datum):
    """Pin the coefficient matrices of the truncated quasi-Casimir by
    the characterizing relation K~_{-i} E_i Omega = K~_i Omega E_i
    (equivalent to Omega E_i = K~_{-i}^2 E_i Omega, the raising-side
    counterpart of the lowering recursion) on a symbolic Verma
    truncation of level p+1.  The solution is unique."""
    from .scalars import Z as _Z

    M = standard_verma(datum, _Z, p + 1)
    n = M.dim
    nus = degrees_up_to(p)
    ops, labels = [], []
    for nu in nus:
        fb = f_component_basis(nu)
        ktv = M.kt_power_diag(nu)
        for wi, w in enumerate(fb.basis):
            Fw = M.word_matrix([("F", j) for j in w])
            for wj, wp in enumerate(fb.basis):
                Ew = M.word_matrix([("E", j) for j in wp])
                mid = [[ktv[r] * e for e in row] for r, row in enumerate(Ew)]
                ops.append(mat_mul(Fw, mid))
                labels.append((nu, wi, wj))
    rows, rhs = [], []
    for i in datum.I:
        kt = M.kt_diag(i)
        E = M.E(i)

        def lhs_of(C):
            # K~_{-i} E_i C - K~_i C E_i
            A = mat_mul(E, C)
            A = [[row[c] / kt[r] for c in range(n)] for r, row in enumerate(A)]
            B = mat_mul(C, E)
            B = [[kt[r] * row[c] for c in range(n)] for r, row in enumerate(B)]
            return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

        const = lhs_of(identity(n))
        parts = [lhs_of(C) for C in ops]
        for r in range(n):
            for c in range(n):
                row = [P[r][c] for P in parts]
                if all(el_is_zero(e) for e in row) and el_is_zero(const[r][c]):
                    continue
                rows.append(row)
                rhs.append(-const[r][c])
    x, nfree = solve_underdetermined(rows, rhs)
    if x is None:
        raise ArithmeticError("quasi-Casimir relation is inconsistent on the truncation")
    if nfree:
        raise ArithmeticError(
            "quasi-Casimir coefficients underdetermined at cutoff %d (%d free)" % (p, nfree)
        )
    coeffs = {}
    for nu in nus:
        d = f_component_basis(nu).dim
        coeffs[nu] = zeros(d, d)
    for (nu, wi, wj), cf in zip(labels, x):
        coeffs[nu][wi][wj] = cf
    return coeffs


def omega_route_dual_basis(M: ModuleBase, p=None):
    """Quasi-Casimir on a truncation via the dual-basis sum."""
    from .uqalgebra import omega_matrix

    p = p if p is not None else max(M.degrees)
    om = omega_truncated(p, M.datum)
    return omega_matrix(om, M)


def omega_route_recursion(M: ModuleBase):
    """Quasi-Casimir characterized by: identity on raising-killed
    vectors, and Om F_i = F_i K~_i Om K~_i.  Solved as one linear
    system; requires the module to be generated by its killed vectors
    over the lowering half (true for all shipped truncations)."""
    n = M.dim
    datum = M.datum
    stack = []
    for i in datum.I:
        stack.extend(M.E(i))
    killed = nullspace(stack) if stack else []
    # unknowns: entries on weight-diagonal blocks
    vars_ = [
        (r, c)
        for r in range(n)
        for c in range(n)
        if M.weights[r] == M.weights[c]
    ]
    vidx = {rc: k for k, rc in enumerate(vars_)}
    rows, rhs = [], []
    for v in killed:
        # Om v = v
        for r in range(n):
            row = [ZERO] * len(vars_)
            nz = False
            for c in range(n):
                if (r, c) in vidx and not el_is_zero(v[c]):
                    row[vidx[(r, c)]] = row[vidx[(r, c)]] + v[c]
                    nz = True
            if nz or not el_is_zero(v[r]):
                rows.append(row)
                rhs.append(v[r])
    for i in datum.I:
        F = M.F(i)
        kt = M.kt_diag(i)
        # Om F - F K Om K = 0
        for r in range(n):
            for c in range(n):
                row = [ZERO] * len(vars_)
                nz = False
                for m in range(n):
                    if (r, m) in vidx and not el_is_zero(F[m][c]):
                        row[vidx[(r, m)]] = row[vidx[(r, m)]] + F[m][c]
                        nz = True
                for m in range(n):
                    if (m, c) in vidx and not el_is_zero(F[r][m]):
                        row[vidx[(m, c)]] = row[vidx[(m, c)]] - F[r][m] * kt[m] * kt[c]
                        nz = True
                if nz:
                    rows.append(row)
                    rhs.append(ZERO)
    x, nfree = solve_underdetermined(rows, rhs)
    if x is None or nfree:
        raise ArithmeticError(
            "recursion route failed: inconsistent or underdetermined (%s free)" % nfree
        )
    Om = zeros(n, n)
    for k, (r, c) in enumerate(vars_):
        Om[r][c] = x[k]
    return Om


# --- Sugawara ------------------------------------------------------------

def _twist_parameter_L(M: ModuleBase, lam: Weight):
    """Value at weight lam of the diagonal operator attached to the
    critical twist u = (Z-value * qt^hvee)^(-2): u^(d[lam, rho'])."""
    datum = M.datum
    zmono = _as_monomial(M.zval)
    # u = zval^-2 * qt^(-2 hvee); exponent 2[lam, w]
    # 2[lam,w] = m + na*(2[a,w]); zval^(2[a,w]) needs zval monomial in z, qt
    from .scalars import unit_monomial

    m, na = lam.m, lam.na
    z_s, qt_s = zmono  # zval = z^z_s * qt^qt_s
    # u^m part:
    out = unit_monomial(z_e=-2 * z_s * m, qt_e=(-2 * qt_s - 2 * datum.hvee) * m)
    # u^(na * 2[a,w]) part: u = z^(-2 z_s) qt^(-2 qt_s - 2 hvee):
    #   (z^k)^(2[a,w]) = za2^k ; (qt^e)^(2[a,w]) = ca^(e/2), e even
    if na:
        k = -2 * z_s
        e = -2 * qt_s - 2 * datum.hvee
        if e % 2:
            raise ValueError("critical twist has odd qt-exponent")
        out = out * unit_monomial(za2_e=k * na, ca_e=(e // 2) * na)
    return out


def _as_monomial(x):
    """Express a Scalar as z^s * qt^e; error if not of that shape."""
    x = sc(x)
    num = list(x.numer.terms())
    den = list(x.denom.terms())
    if len(num) != 1 or len(den) != 1:
        raise ValueError("central value is not monomial: %s" % x)
    (mn, cn), (md, cd) = num[0], den[0]
    if cn != cd:
        raise ValueError("central value has nontrivial coefficient: %s" % x)
    # unit order: qt, z, ca, caa, za2
    if any(mn[i] or md[i] for i in (2, 3, 4)):
        raise ValueError("central value involves base-point units: %s" % x)
    return mn[1] - md[1], mn[0] - md[0]


def sugawara(M: InducedTrunc, route="dual_basis", normalized=True, ref=None):
    """Matrix of the Sugawara operator on a truncation: the critical
    diagonal twist, the quasi-Casimir, and the quadratic weight diagonal,
    optionally normalized to 1 at a reference weight."""
    datum = M.datum
    if route == "dual_basis":
        Om = omega_route_dual_basis(M)
    elif route == "recursion":
        Om = omega_route_recursion(M)
    else:
        raise ValueError("unknown route %r" % route)
    n = M.dim
    Gd = [datum.G_value(lam) for lam in M.weights]
    Ld = [_twist_parameter_L(M, lam) for lam in M.weights]
    T = [[Ld[r] * Om[r][c] * Gd[c] for c in range(n)] for r in range(n)]
    if normalized:
        lam0 = ref if ref is not None else M.slice_weights[0]
        scale = datum.G_value(lam0) * _twist_parameter_L(M, lam0)
        T = [[e / scale for e in row] for row in T]
    return T


def sugawara_inverse_twisted(Vb: InducedTrunc):
    """The partner operator on the involution twist of an induced
    truncation: inverse of the Sugawara matrix of the underlying module,
    read on the twisted basis."""
    from .linalg import inv_matrix

    return inv_matrix(sugawara(Vb))


def sugawara_spectrum(M: InducedTrunc, T=None):
    """Eigenvalues of the Sugawara matrix per lowering degree.

    The degree-0 block is diagonal whenever its weights are multiplicity
    free (true for all shipped slices); its diagonal entries are the
    level-1 eigenvalues.  Every higher block must then be diagonalizable
    with eigenvalues on the grid {q1^k * (level-1 eigenvalue)}.  Returns
    {degree: list of (eigenvalue, multiplicity)}; raises if a block has
    spectrum off the grid, which would falsify the spectral theorems.
    """
    if T is None:
        T = sugawara(M)
    q1 = q1_scalar(M.datum)
    maxdeg = max(M.degrees)
    idx0 = M.degree_indices(0)
    wts0 = [M.weights[i] for i in idx0]
    if len(set(wts0)) != len(wts0):
        raise ArithmeticError("level-1 weights not multiplicity free")
    for r in idx0:
        for c in idx0:
            if r != c and not el_is_zero(T[r][c]):
                raise ArithmeticError("level-1 block not diagonal")
    L1 = []
    for r in idx0:
        if all(T[r][r] != x for x in L1):
            L1.append(T[r][r])
    out = {}
    for d in range(maxdeg + 1):
        idx = M.degree_indices(d)
        m = len(idx)
        B = [[T[r][c] for c in idx] for r in idx]
        cands = []
        for k in range(0, 3 * maxdeg + 1):
            for lam in L1:
                v = q1**k * lam
                if all(v != x for _, x in cands):
                    cands.append(((k, lam), v))
        eigs = []
        total = 0
        for tag, v in cands:
            D = [[B[r][c] - (v if r == c else ZERO) for c in range(m)] for r in range(m)]
            ker = len(nullspace(D)) if m else 0
            if ker:
                eigs.append((v, ker))
                total += ker
        if total != m:
            raise ArithmeticError(
                "degree-%d block has spectrum outside the grid (%d of %d accounted)"
                % (d, total, m)
            )
        out[d] = eigs
    return out


def spectral_inclusion_check(M: InducedTrunc, T=None):
    """The level-(d+1) eigenvalue set lies in the union of q1^k times
    the level-1 set for d <= k <= 3d; returns a per-degree report."""
    spec = sugawara_spectrum(M, T)
    q1 = q1_scalar(M.datum)
    L1 = [v for v, _m in spec[0]]
    report = {}
    for d, eigs in spec.items():
        if d == 0:
            report[d] = True
            continue
        ok = True
        for v, _m in eigs:
            if not any(v == q1**k * lam for lam in L1 for k in range(d, 3 * d + 1)):
                ok = False
        report[d] = ok
    return report
