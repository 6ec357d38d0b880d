"""Affine root datum, weights, and pairing monomials."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaffine.rootdata import (
    W0,
    WA,
    WOMEGA,
    AffineSL2,
    RootDatum,
    Weight,
    build_affine_sl2,
    q1_scalar,
)
from qaffine.scalars import CA, CAA, ONE, QT, Z, ZA2, unit_monomial

D = build_affine_sl2()

weights = st.builds(Weight, st.integers(-2, 2), st.integers(-5, 5))


class TestDatumInvariants:
    def test_validate_ok(self):
        rep = D.validate()
        assert rep["ok"], rep["failures"]

    def test_constants(self):
        assert D.hvee == 2
        assert D.d == 2
        assert D.rho_prime == WOMEGA
        assert D.dot(0, 0) == 2 and D.dot(0, 1) == -2

    def test_marks_kernel(self):
        for i in D.I:
            assert sum(D.dot(i, j) * D.marks[j] for j in D.I) == 0

    def test_bad_datum_reports(self):
        bad = RootDatum([[2, -1], [-2, 2]], i0=0, marks=[1, 1])
        rep = bad.validate()
        assert not rep["ok"] and rep["failures"]

    def test_missing_marks_reported(self):
        rep = RootDatum([[2, -2], [-2, 2]], i0=0).validate()
        assert not rep["ok"]


class TestWeightArithmetic:
    @given(weights, weights)
    @settings(max_examples=50, deadline=None)
    def test_group_laws(self, lam, mu):
        assert lam + mu == mu + lam
        assert lam - lam == W0
        assert -(-lam) == lam
        assert (lam + mu) - mu == lam

    def test_zero(self):
        assert W0.is_zero() and not WA.is_zero()


class TestPairings:
    @given(weights, weights)
    @settings(max_examples=50, deadline=None)
    def test_pairing_symmetric_bilinear(self, lam, mu):
        assert D.pairing_q(lam, mu) == D.pairing_q(mu, lam)
        nu = Weight(1, -1)
        assert D.pairing_q(lam + nu, mu) == D.pairing_q(lam, mu) * D.pairing_q(nu, mu)

    def test_base_values(self):
        # q^[w,w] = q^(1/2) = qt^2, q^[a,w] = ca, q^[a,a] = caa
        assert D.pairing_q(WOMEGA, WOMEGA) == QT**2
        assert D.pairing_q(WA, WOMEGA) == CA
        assert D.pairing_q(WA, WA) == CAA

    def test_alpha_is_2w(self):
        alpha = Weight(0, 2)
        # [alpha, alpha] = 2, [alpha, w] = 1
        assert D.pairing_q(alpha, alpha) == QT**8
        assert D.pairing_q(alpha, WOMEGA) == QT**4

    @given(weights)
    @settings(max_examples=30, deadline=None)
    def test_z2pow_additive(self, lam):
        assert D.z2pow(lam) == unit_monomial(z_e=lam.m, za2_e=lam.na)
        assert D.z2pow(lam + WOMEGA) == D.z2pow(lam) * Z

    @given(weights)
    @settings(max_examples=30, deadline=None)
    def test_k_eigenvalues(self, lam):
        # K~_1 eigenvalue is q^(2[lam,w]); K~0 * K~1 = z^(d hvee) central
        assert D.k1_eig(lam) == D.pairing_q(lam, WOMEGA) ** 2
        assert D.k0_eig(lam, Z) * D.k1_eig(lam) == Z**4
        assert D.kt_eig(1, lam, Z) == D.k1_eig(lam)
        assert D.kt_eig(0, lam, Z) == D.k0_eig(lam, Z)

    def test_qi_exp(self):
        assert D.qi_exp(0) == D.qi_exp(1) == 4  # q_i = q for both vertices


class TestGlobalDiagonals:
    @given(weights)
    @settings(max_examples=30, deadline=None)
    def test_L_is_ladder(self, lam):
        # L_u(lam) = u^(2[lam,w]) is multiplicative in lam
        got = D.L_value(1, 2, lam) * D.L_value(1, 2, WOMEGA)
        assert got == D.L_value(1, 2, lam + WOMEGA)

    def test_L_at_base_is_monomial(self):
        # u = z qt^2 at weight a: u^(2[a,w]) = za2 * ca
        assert D.L_value(1, 2, WA) == CA * ZA2

    def test_L_odd_qt_rejected(self):
        with pytest.raises(ValueError):
            D.L_value(0, 1, WA)

    @given(weights)
    @settings(max_examples=30, deadline=None)
    def test_G_ratio(self, lam):
        # defining ratio across an i'=2w step: G(lam)/G(lam-2w) = q^(4[lam,w])
        prev = Weight(lam.na, lam.m - 2)
        ratio = D.G_value(lam) / D.G_value(prev)
        assert ratio == D.k1_eig(lam) ** 2

    def test_G_normalized_at_zero(self):
        assert D.G_value(W0) == ONE

    def test_q1(self):
        assert q1_scalar(D) == Z**4 * QT**8
