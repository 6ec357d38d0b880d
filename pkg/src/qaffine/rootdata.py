"""Affine Cartan/root datum bookkeeping and weight arithmetic.

The datum stores the index set I with its symmetric integer pairing
(i.j), the special vertex i0 (normalized so (i0.i0) = 2), and the marks
n_i generating the kernel of the pairing.  Derived constants: the dual
Coxeter number hvee = sum n_i (i.i)/2 and, for the shipped rank-one
instance, the index d of the finite root lattice inside the finite
weight lattice together with the rational bilinear form [.,.].

The shipped instance is the two-vertex datum with pairing
[[2,-2],[-2,2]] (affine sl2): finite part of rank one, finite weight
lattice Z*w with the simple root alpha = 2w, [w,w] = 1/2, d = 2,
hvee = 2, rho' = w.

Weights of all modules in the package live on the line a + Z*w where a
is a single generic base point (a = 0 for honest finite-dimensional
modules); a Weight is the pair (na, m) meaning na*a + m*w, with na in
{-1, 0, 1} in practice (-1 for involution-twisted modules).  The
pairing q^[lam,mu] is then always a Laurent monomial in the field units
(see scalars): q^[a,w] = ca, q^[a,a] = caa, q^[w,w] = q^(1/2) = qt^2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .scalars import CA, CAA, ONE, Z, ZA2, unit_monomial, sc


@dataclass(frozen=True)
class Weight:
    """na*a + m*w : generic-base multiplicity na, offset m in w-units."""

    na: int
    m: int

    def __add__(self, other):
        return Weight(self.na + other.na, self.m + other.m)

    def __sub__(self, other):
        return Weight(self.na - other.na, self.m - other.m)

    def __neg__(self):
        return Weight(-self.na, -self.m)

    def is_zero(self):
        return self.na == 0 and self.m == 0


W0 = Weight(0, 0)
WA = Weight(1, 0)  # the generic base point a
WOMEGA = Weight(0, 1)


class RootDatum:
    def __init__(self, pairing, i0=0, marks=None):
        self.pairing = [list(row) for row in pairing]
        self.I = list(range(len(self.pairing)))
        self.i0 = i0
        self.marks = list(marks) if marks is not None else None
        self.hvee = None
        if self.marks is not None:
            self.hvee = sum(
                n * self.pairing[i][i] // 2 for i, n in zip(self.I, self.marks)
            )

    def dot(self, i, j):
        return self.pairing[i][j]

    def validate(self):
        """Check the structural invariants; returns a report dict."""
        failures = []
        P = self.pairing
        n = len(P)
        if any(len(row) != n for row in P):
            failures.append("pairing matrix is not square")
        elif any(P[i][j] != P[j][i] for i in range(n) for j in range(n)):
            failures.append("pairing matrix is not symmetric")
        if not failures and P[self.i0][self.i0] != 2:
            failures.append("(i0.i0) != 2 at the special vertex")
        if self.marks is None:
            failures.append("no kernel generator (marks) supplied")
        else:
            if self.marks[self.i0] != 1:
                failures.append("mark at the special vertex is not 1")
            if not failures:
                for i in range(n):
                    if sum(P[i][j] * self.marks[j] for j in range(n)) != 0:
                        failures.append(
                            "marks do not span the kernel of the pairing"
                        )
                        break
            if all(m > 0 for m in self.marks or []) is False:
                failures.append("marks must be positive")
        return {"ok": not failures, "failures": failures}

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            doc = json.load(fh)
        return cls(doc["pairing"], doc.get("i0", 0), doc.get("marks"))


class AffineSL2(RootDatum):
    """The shipped instance; also carries the finite-part form data."""

    def __init__(self):
        super().__init__([[2, -2], [-2, 2]], i0=0, marks=[1, 1])
        self.d = 2
        # finite simple root alpha = 2w; [w,w] = 1/2; rho' = w
        self.rho_prime = WOMEGA

    def iprime_offset(self, i):
        """Finite projection of the simple root i', in w-units."""
        return 2 if i == 1 else -2

    def qi_exp(self, i):
        """q_i = q^((i.i)/2) as a qt-exponent (q = qt^4)."""
        return 2 * self.pairing[i][i]

    # --- pairings as Scalars --------------------------------------------

    def pairing_q(self, lam: Weight, mu: Weight):
        """q^[lam,mu] as a Laurent monomial Scalar."""
        return unit_monomial(
            qt_e=2 * lam.m * mu.m,
            ca_e=lam.na * mu.m + mu.na * lam.m,
            caa_e=lam.na * mu.na,
        )

    def z2pow(self, lam: Weight):
        """z^(2[lam,w]) as a Scalar (za2^na * z^m)."""
        return unit_monomial(z_e=lam.m, za2_e=lam.na)

    def k1_eig(self, lam: Weight):
        """Eigenvalue of K~_1 on a weight-lam vector: q^(2[lam,w])."""
        return unit_monomial(qt_e=4 * lam.m, ca_e=2 * lam.na)

    def k0_eig(self, lam: Weight, zval):
        """Eigenvalue of K~_0: (z-value)^(d*hvee) / K~_1-eigenvalue."""
        return sc(zval) ** 4 / self.k1_eig(lam)

    def kt_eig(self, i, lam: Weight, zval):
        return self.k1_eig(lam) if i == 1 else self.k0_eig(lam, zval)

    def L_value(self, u_z: int, u_qt: int, lam: Weight):
        """Global diagonal L_u at weight lam, for u = z^u_z * qt^u_qt.

        L_u(lam) = u^(d[lam,rho']) = u^(2[lam,w]); u_qt must be even so
        the generic part stays monomial.
        """
        if u_qt % 2:
            raise ValueError("qt-exponent of the twist parameter must be even")
        return unit_monomial(
            qt_e=u_qt * lam.m,
            z_e=u_z * lam.m,
            ca_e=lam.na * (u_qt // 2),
            za2_e=lam.na * u_z,
        )

    def G_value(self, lam: Weight):
        """Global diagonal G at weight lam: q^([lam+rho',lam+rho']-[rho',rho'])."""
        m1 = lam.m + 1
        return unit_monomial(
            qt_e=2 * (m1 * m1 - 1),
            ca_e=2 * lam.na * m1,
            caa_e=lam.na * lam.na,
        )


def build_affine_sl2() -> AffineSL2:
    return AffineSL2()


# convenience: q1 = (z*qt^hvee)^(2d) = (z^d q)^2 = z^4 qt^8
def q1_scalar(datum: AffineSL2):
    return unit_monomial(qt_e=2 * datum.d * datum.hvee, z_e=2 * datum.d)
