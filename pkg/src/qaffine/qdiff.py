"""Matrix q-difference equations F(pt) psi(t) = phi(t) F(t).

Given matrices phi(t) (rational) and psi(t) (polynomial) with
phi(0) = psi(0) invertible and a modulus 0 < |p| < 1, there is a unique
formal solution F with F(0) = Id; it converges on an explicit disc and
extends to a meromorphic function of t whose poles sit on the forward
p-ladders of the singularities of phi.

Three layers:

* ``series_solve`` -- the coefficient recursion.  Order j requires the
  Sylvester-type operator M |-> phi(0) M - p^j M phi(0) to be invertible;
  a resonance (p^j * eigenvalue = eigenvalue) raises ``ResonanceError``
  instead of being perturbed away.
* ``certify_convergence`` -- empirical radius estimate from the computed
  coefficients, checked against the a-priori bound R / (||phi(0)|| + 1)
  where R is a radius on which phi is holomorphic.
* ``continue_meromorphic`` -- evaluation outside the disc by iterating
  F(t) = phi(t)^{-1} F(pt) psi(t) until the argument falls inside the
  certified disc; hitting a singular phi-iterate reports a pole together
  with the responsible ladder point.

Numeric systems use numpy complex arithmetic; the same recursion also
runs exactly over the symbolic coefficient field (``exact=True``) for
small sizes, where the functional-equation residual is identically zero
mod t^n rather than merely small.
"""

from __future__ import annotations

import cmath
import json
import math

import numpy as np

from .linalg import solve as exact_solve

__all__ = [
    "ResonanceError",
    "RationalMatrix",
    "DifferenceSystem",
    "series_solve",
    "series_eval",
    "equation_residual",
    "certify_convergence",
    "continue_meromorphic",
    "pochhammer_system",
    "inverse_pochhammer_system",
    "pochhammer_coeffs",
    "inverse_pochhammer_coeffs",
    "system_from_dict",
    "load_system",
]


class ResonanceError(ArithmeticError):
    """Raised when the order-j Sylvester operator is singular."""

    def __init__(self, order, detail=""):
        self.order = order
        super().__init__(
            f"resonant order j={order}: p^j eigenvalue collision{detail}"
        )


# ---------------------------------------------------------------------------
# rational matrices (numeric layer)
# ---------------------------------------------------------------------------


def _as_poly(c):
    """Coefficient list -> numpy complex array, trailing zeros trimmed."""
    a = np.atleast_1d(np.asarray(c, dtype=complex))
    nz = np.nonzero(np.abs(a) > 0)[0]
    return a[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=complex)


def _poly_eval(c, t):
    return complex(np.polynomial.polynomial.polyval(t, c))


def _poly_series_div(num, den, n):
    """First n Taylor coefficients of num/den (den[0] != 0)."""
    out = np.zeros(n, dtype=complex)
    for j in range(n):
        acc = num[j] if j < len(num) else 0.0
        for k in range(1, min(j, len(den) - 1) + 1):
            acc -= den[k] * out[j - k]
        out[j] = acc / den[0]
    return out


class RationalMatrix:
    """Matrix whose entries are rational functions num(t)/den(t).

    ``entries[i][j]`` is a pair of coefficient lists (numerator,
    denominator), lowest degree first.  Polynomial matrices are the
    special case den = [1].
    """

    def __init__(self, entries):
        self.entries = [
            [(_as_poly(num), _as_poly(den)) for (num, den) in row]
            for row in entries
        ]
        self.size = len(self.entries)
        for row in self.entries:
            if len(row) != self.size:
                raise ValueError("matrix must be square")
            for _, den in row:
                if abs(den[0]) == 0:
                    raise ValueError("entry denominator vanishes at t=0")

    @classmethod
    def from_constant(cls, mat):
        mat = np.asarray(mat, dtype=complex)
        return cls([[([mat[i, j]], [1.0]) for j in range(mat.shape[1])]
                    for i in range(mat.shape[0])])

    @classmethod
    def from_polys(cls, polys):
        return cls([[(p, [1.0]) for p in row] for row in polys])

    def eval(self, t):
        m = np.empty((self.size, self.size), dtype=complex)
        for i, row in enumerate(self.entries):
            for j, (num, den) in enumerate(row):
                d = _poly_eval(den, t)
                if abs(d) == 0:
                    raise ZeroDivisionError(
                        f"entry ({i},{j}) has a pole at t={t}"
                    )
                m[i, j] = _poly_eval(num, t) / d
        return m

    def taylor(self, n):
        """List of the first n Taylor coefficient matrices at t=0."""
        coeffs = [np.zeros((self.size, self.size), dtype=complex)
                  for _ in range(n)]
        for i, row in enumerate(self.entries):
            for j, (num, den) in enumerate(row):
                ser = _poly_series_div(num, den, n)
                for k in range(n):
                    coeffs[k][i, j] = ser[k]
        return coeffs

    def row_cleared(self, t):
        """Evaluate after clearing denominators row by row.

        Returns (C, D) with C[i,j] = num_ij(t) * prod_{j'!=j} den_ij'(t)
        and D[i] = prod_j den_ij(t), so that self.eval(t) = D^{-1} C
        wherever both sides are finite.  C and D are always finite, which
        lets the continuation step solve phi(t) X = B as C X = D B even
        at entry poles of phi (where phi^{-1} has a zero, not a pole).
        """
        C = np.empty((self.size, self.size), dtype=complex)
        D = np.empty(self.size, dtype=complex)
        for i, row in enumerate(self.entries):
            dens = [_poly_eval(den, t) for _, den in row]
            prod_all = 1.0 + 0j
            for d in dens:
                prod_all *= d
            D[i] = prod_all
            for j, (num, _) in enumerate(row):
                prod_others = 1.0 + 0j
                for j2, d in enumerate(dens):
                    if j2 != j:
                        prod_others *= d
                C[i, j] = _poly_eval(num, t) * prod_others
        return C, D

    def singular_points(self, max_modulus=None):
        """Roots of the entry denominators (candidate poles of eval)."""
        pts = []
        for row in self.entries:
            for _, den in row:
                if len(den) > 1:
                    for r in np.polynomial.polynomial.polyroots(den):
                        if max_modulus is None or abs(r) <= max_modulus:
                            pts.append(complex(r))
        return pts

    def is_singular_at(self, t, tol=1e-9):
        """True when the row-cleared matrix is (numerically) singular —
        i.e. inverting the matrix at t genuinely fails, as opposed to an
        entry pole (where the inverse exists and has a zero)."""
        C, _ = self.row_cleared(t)
        sv = np.linalg.svd(C, compute_uv=False)
        return bool(sv[-1] <= tol * max(1.0, sv[0]))


# ---------------------------------------------------------------------------
# the system
# ---------------------------------------------------------------------------


class DifferenceSystem:
    """F(pt) psi(t) = phi(t) F(t) with phi(0) = psi(0) invertible.

    Numeric mode: ``phi``/``psi`` are RationalMatrix (psi polynomial by
    convention, but any RationalMatrix regular at 0 works) and ``p`` a
    complex number with 0 < |p| < 1.

    Exact mode (``exact=True``): ``phi``/``psi`` are lists of coefficient
    matrices over the symbolic scalar field (degree-graded in t) and
    ``p`` is an invertible scalar; no convergence layer applies.
    """

    def __init__(self, phi, psi, p, exact=False):
        self.exact = exact
        self.phi = phi
        self.psi = psi
        self.p = p
        if exact:
            self.size = len(phi[0])
            phi0, psi0 = phi[0], psi[0]
            if any(
                (phi0[i][j] - psi0[i][j]) != 0
                for i in range(self.size)
                for j in range(self.size)
            ):
                raise ValueError("phi(0) != psi(0)")
            # invertibility of phi(0) is checked by the solver's pivots
        else:
            if not (0 < abs(p) < 1):
                raise ValueError("modulus must satisfy 0 < |p| < 1")
            self.size = phi.size
            if psi.size != self.size:
                raise ValueError("phi and psi sizes differ")
            phi0 = phi.eval(0.0)
            psi0 = psi.eval(0.0)
            if np.linalg.matrix_rank(phi0) < self.size:
                raise ValueError("phi(0) is singular")
            if not np.allclose(phi0, psi0, rtol=1e-10, atol=1e-12):
                raise ValueError("phi(0) != psi(0)")
            self.phi0 = phi0


# ---------------------------------------------------------------------------
# series solution
# ---------------------------------------------------------------------------


def series_solve(sys: DifferenceSystem, n: int):
    """First n coefficients f_0..f_{n-1} of the unique solution with
    F(0) = Id.

    Matching t^j in F(pt) psi(t) = phi(t) F(t) gives
        phi0 f_j - p^j f_j phi0
            = sum_{k=1..j} ( p^{j-k} f_{j-k} psi_k - phi_k f_{j-k} ),
    a Sylvester equation solved by vectorization; a singular operator
    raises ResonanceError(j).
    """
    if sys.exact:
        return _series_solve_exact(sys, n)

    m = sys.size
    A = sys.phi0
    phi_c = sys.phi.taylor(n)
    psi_c = sys.psi.taylor(n)
    I = np.eye(m)
    eigA = np.linalg.eigvals(A)
    coeffs = [np.eye(m, dtype=complex)]
    for j in range(1, n):
        pj = sys.p ** j
        # resonance check: phi0 M - p^j M phi0 singular iff some
        # eigenvalue pair satisfies lam_r = p^j lam_s
        gaps = np.abs(eigA[:, None] - pj * eigA[None, :])
        if gaps.min() <= 1e-12 * max(1.0, np.abs(eigA).max()):
            raise ResonanceError(j)
        rhs = np.zeros((m, m), dtype=complex)
        for k in range(1, j + 1):
            rhs += (sys.p ** (j - k)) * coeffs[j - k] @ psi_c[k]
            rhs -= phi_c[k] @ coeffs[j - k]
        L = np.kron(A, I) - pj * np.kron(I, A.T)
        fj = np.linalg.solve(L, rhs.reshape(-1)).reshape(m, m)
        coeffs.append(fj)
    return coeffs


def _series_solve_exact(sys: DifferenceSystem, n: int):
    m = sys.size
    A = sys.phi[0]
    one = A[0][0] * 0 + 1
    zero = A[0][0] * 0

    def get(series, k):
        return series[k] if k < len(series) else None

    coeffs = [[[one if i == j else zero for j in range(m)] for i in range(m)]]
    for j in range(1, n):
        pj = sys.p ** j
        rhs = [[zero for _ in range(m)] for _ in range(m)]
        for k in range(1, j + 1):
            fk = coeffs[j - k]
            pk = sys.p ** (j - k)
            psik = get(sys.psi, k)
            phik = get(sys.phi, k)
            for i in range(m):
                for c in range(m):
                    acc = rhs[i][c]
                    for r in range(m):
                        if psik is not None:
                            acc = acc + pk * fk[i][r] * psik[r][c]
                        if phik is not None:
                            acc = acc - phik[i][r] * fk[r][c]
                    rhs[i][c] = acc
        # vectorized Sylvester solve: (A ox I - p^j I ox A^T) vec = rhs
        big = [[zero for _ in range(m * m)] for _ in range(m * m)]
        for i in range(m):
            for c in range(m):
                row = big[i * m + c]
                for r in range(m):
                    row[r * m + c] = row[r * m + c] + A[i][r]
                    row[i * m + r] = row[i * m + r] - pj * A[r][c]
        vec = [rhs[i][c] for i in range(m) for c in range(m)]
        try:
            sol = exact_solve(big, [vec])[0]
        except ValueError as e:
            raise ResonanceError(j, f" ({e})") from None
        coeffs.append([[sol[i * m + c] for c in range(m)] for i in range(m)])
    return coeffs


def series_eval(coeffs, t):
    """Horner evaluation of the coefficient list at t."""
    if isinstance(coeffs[0], np.ndarray):
        acc = np.zeros_like(coeffs[0])
        for c in reversed(coeffs):
            acc = acc * t + c
        return acc
    m = len(coeffs[0])
    acc = [[coeffs[-1][i][j] for j in range(m)] for i in range(m)]
    for c in reversed(coeffs[:-1]):
        for i in range(m):
            for j in range(m):
                acc[i][j] = acc[i][j] * t + c[i][j]
    return acc


def equation_residual(sys: DifferenceSystem, coeffs, t):
    """|| phi(t) F(t) - F(pt) psi(t) || at a numeric sample point."""
    F_t = series_eval(coeffs, t)
    F_pt = series_eval(coeffs, sys.p * t)
    lhs = sys.phi.eval(t) @ F_t
    rhs = F_pt @ sys.psi.eval(t)
    return float(np.max(np.abs(lhs - rhs)))


def equation_residual_exact(sys: DifferenceSystem, coeffs):
    """Exact-mode residual of the recursion: list of max-degree checked
    coefficient matrices of phi F - (F o p) psi that must vanish mod t^n."""
    n = len(coeffs)
    m = sys.size
    zero = coeffs[0][0][0] * 0
    bad = []
    for j in range(n):
        res = [[zero for _ in range(m)] for _ in range(m)]
        for k in range(j + 1):
            phik = sys.phi[k] if k < len(sys.phi) else None
            psik = sys.psi[k] if k < len(sys.psi) else None
            fk = coeffs[j - k]
            pk = sys.p ** (j - k)
            for i in range(m):
                for c in range(m):
                    acc = res[i][c]
                    for r in range(m):
                        if phik is not None:
                            acc = acc + phik[i][r] * fk[r][c]
                        if psik is not None:
                            acc = acc - pk * fk[i][r] * psik[r][c]
                    res[i][c] = acc
        if any(res[i][c] != 0 for i in range(m) for c in range(m)):
            bad.append(j)
    return bad


# ---------------------------------------------------------------------------
# convergence certificate
# ---------------------------------------------------------------------------


def certify_convergence(sys: DifferenceSystem, coeffs, R):
    """Empirical radius estimate against the a-priori disc.

    The solution is guaranteed to converge on |t| < R / (||phi(0)|| + 1)
    when phi is holomorphic (and psi bounded) on |t| <= R.  The
    certificate reports the a-priori radius, the empirical radius
    1 / limsup ||f_j||^{1/j} estimated from the computed tail, and
    whether the estimate respects the bound.
    """
    norm0 = float(np.linalg.norm(sys.phi0, 2))
    guaranteed = R / (norm0 + 1.0)
    tail = range(max(1, len(coeffs) // 2), len(coeffs))
    rates = []
    for j in tail:
        nj = float(np.max(np.abs(coeffs[j])))
        if nj > 0:
            rates.append(nj ** (1.0 / j))
    growth = max(rates) if rates else 0.0
    estimated = math.inf if growth == 0.0 else 1.0 / growth
    return {
        "phi0_norm": norm0,
        "guaranteed_radius": guaranteed,
        "estimated_radius": estimated,
        "consistent": bool(estimated >= guaranteed * (1.0 - 1e-6)),
        "orders_used": len(coeffs),
    }


# ---------------------------------------------------------------------------
# meromorphic continuation
# ---------------------------------------------------------------------------


def continue_meromorphic(sys: DifferenceSystem, coeffs, t, radius=None,
                         sing_tol=1e-9):
    """Value of F at t via F(t) = phi(t)^{-1} F(pt) psi(t).

    Returns a dict with ``value`` (matrix or None), ``pole`` flag, and,
    for a pole, ``pole_location`` — the ladder point p^k t at which phi
    is singular.  ``radius`` defaults to half the certified empirical
    radius capped at 1 (series evaluation region).
    """
    if radius is None:
        cert = certify_convergence(sys, coeffs, R=1.0)
        r = cert["estimated_radius"]
        radius = 0.5 * (1.0 if r == math.inf else min(r, 1.0))
    t = complex(t)
    # walk in: p^m t inside the series disc
    m = 0
    while abs((sys.p ** m) * t) > radius:
        m += 1
        if m > 10000:
            raise RuntimeError("modulus too close to 1: cannot reach disc")
    value = series_eval(coeffs, (sys.p ** m) * t)
    # unwind: F(p^k t) = phi(p^k t)^{-1} F(p^{k+1} t) psi(p^k t)
    for k in range(m - 1, -1, -1):
        tk = (sys.p ** k) * t
        C, D = sys.phi.row_cleared(tk)
        sv = np.linalg.svd(C, compute_uv=False)
        if sv[-1] <= sing_tol * max(1.0, sv[0]):
            return {"value": None, "pole": True, "pole_location": tk,
                    "ladder_index": k}
        value = np.linalg.solve(C, D[:, None] * (value @ sys.psi.eval(tk)))
    return {"value": value, "pole": False, "pole_location": None}


# ---------------------------------------------------------------------------
# oracle systems: q-Pochhammer
# ---------------------------------------------------------------------------


def pochhammer_system(p):
    """phi = 1 - t, psi = 1: unique solution F = 1/(t; p)_inf, with
    simple poles exactly at t = p^{-k}, k >= 0."""
    phi = RationalMatrix([[([1.0, -1.0], [1.0])]])
    psi = RationalMatrix([[([1.0], [1.0])]])
    return DifferenceSystem(phi, psi, p)


def inverse_pochhammer_system(p):
    """phi = 1/(1 - t), psi = 1: unique solution F = (t; p)_inf, entire
    with zeros at t = p^{-k}."""
    phi = RationalMatrix([[([1.0], [1.0, -1.0])]])
    psi = RationalMatrix([[([1.0], [1.0])]])
    return DifferenceSystem(phi, psi, p)


def _p_factorials(p, n):
    out = [1.0 + 0j]
    for j in range(1, n):
        out.append(out[-1] * (1 - p ** j))
    return out


def pochhammer_coeffs(p, n):
    """Taylor coefficients of 1/(t; p)_inf: 1/((p;p)_j)."""
    fact = _p_factorials(p, n)
    return [1.0 / fact[j] for j in range(n)]


def inverse_pochhammer_coeffs(p, n):
    """Taylor coefficients of (t; p)_inf (Euler's expansion):
    (-1)^j p^{j(j-1)/2} / (p; p)_j."""
    fact = _p_factorials(p, n)
    return [((-1) ** j) * p ** (j * (j - 1) // 2) / fact[j]
            for j in range(n)]


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def _num_from_json(x):
    if isinstance(x, (list, tuple)):
        return complex(x[0], x[1])
    return complex(x)


def _matrix_from_json(obj):
    entries = []
    for row in obj:
        out_row = []
        for ent in row:
            if isinstance(ent, dict):
                num = [_num_from_json(c) for c in ent["num"]]
                den = [_num_from_json(c) for c in ent.get("den", [1.0])]
            else:
                num = [_num_from_json(c) for c in ent]
                den = [1.0]
            out_row.append((num, den))
        entries.append(out_row)
    return RationalMatrix(entries)


def system_from_dict(d):
    """Build a numeric DifferenceSystem from a JSON-shaped dict with keys
    ``phi``, ``psi`` (matrices of {num, den} coefficient lists; numbers
    may be scalars or [re, im] pairs) and ``p``."""
    return DifferenceSystem(
        _matrix_from_json(d["phi"]),
        _matrix_from_json(d["psi"]),
        _num_from_json(d["p"]),
    )


def load_system(path):
    with open(path) as fh:
        return system_from_dict(json.load(fh))
