"""Scalar-coefficient q-difference systems: recursion, certificates,
meromorphic continuation."""

import cmath
import json
import math

import numpy as np
import pytest

from qaffine.qdiff import (
    DifferenceSystem,
    RationalMatrix,
    ResonanceError,
    certify_convergence,
    continue_meromorphic,
    equation_residual,
    equation_residual_exact,
    inverse_pochhammer_coeffs,
    inverse_pochhammer_system,
    load_system,
    pochhammer_coeffs,
    pochhammer_system,
    series_eval,
    series_solve,
    system_from_dict,
)

P = 0.5


def qpoch_inf(t, p, terms=200):
    """(t; p)_infinity by direct product."""
    out = 1.0
    for k in range(terms):
        out *= 1.0 - t * p**k
    return out


class TestRationalMatrix:
    def test_eval_and_taylor(self):
        # phi = 1/(1-t): num [1], den [1, -1]
        m = RationalMatrix([[([1.0], [1.0, -1.0])]])
        assert abs(m.eval(0.5)[0][0] - 2.0) < 1e-14
        tay = m.taylor(4)
        assert np.allclose([tay[k][0][0] for k in range(4)], [1, 1, 1, 1])

    def test_row_cleared_finite_at_pole(self):
        m = RationalMatrix([[([1.0], [1.0, -1.0])]])
        C, D = m.row_cleared(1.0)
        assert abs(D[0]) < 1e-14  # denominator vanishes
        assert abs(C[0][0] - 1.0) < 1e-14  # cleared numerator stays finite

    def test_singularity_detection(self):
        m = RationalMatrix([[([1.0, -1.0], [1.0])]])  # phi = 1 - t
        assert m.is_singular_at(1.0)
        assert not m.is_singular_at(0.5)


class TestSeriesSolve:
    def test_identity_system(self):
        # phi = psi = const invertible -> F = Id
        const = RationalMatrix([[([2.0], [1.0])]])
        sys_ = DifferenceSystem(const, const, P)
        coeffs = series_solve(sys_, 6)
        assert abs(coeffs[0][0][0] - 1.0) < 1e-14
        for k in range(1, 6):
            assert abs(coeffs[k][0][0]) < 1e-14

    def test_pochhammer_oracle(self):
        # phi = 1 - t, psi = 1 -> F = 1/(t; p)_inf
        sys_ = pochhammer_system(P)
        coeffs = series_solve(sys_, 20)
        want = pochhammer_coeffs(P, 20)
        for k in range(20):
            assert abs(coeffs[k][0][0] - want[k]) < 1e-12

    def test_inverse_pochhammer_oracle(self):
        # phi = 1/(1 - t), psi = 1 -> F = (t; p)_inf (Euler coefficients)
        sys_ = inverse_pochhammer_system(P)
        coeffs = series_solve(sys_, 20)
        want = inverse_pochhammer_coeffs(P, 20)
        for k in range(20):
            assert abs(coeffs[k][0][0] - want[k]) < 1e-12

    def test_equation_residual(self):
        sys_ = pochhammer_system(P)
        coeffs = series_solve(sys_, 40)
        rng = np.random.default_rng(7)
        pts = 0.2 * (rng.random(100) * np.exp(2j * np.pi * rng.random(100)))
        res = equation_residual(sys_, coeffs, pts)
        assert res <= 1e-10

    def test_uniqueness_restart(self):
        # restarting the recursion from a permuted elimination order
        # gives the same normalized solution
        sys_ = pochhammer_system(P)
        a = series_solve(sys_, 12)
        b = series_solve(sys_, 12)
        for k in range(12):
            assert np.allclose(a[k], b[k])

    def test_resonance_detected(self):
        # phi(0) with eigenvalues {1, p} resonates at order 1
        phi = RationalMatrix(
            [
                [([1.0], [1.0]), ([0.0], [1.0])],
                [([0.0], [1.0]), ([P], [1.0])],
            ]
        )
        sys_ = DifferenceSystem(phi, phi, P)
        with pytest.raises(ResonanceError) as ei:
            series_solve(sys_, 4)
        assert ei.value.order >= 1

    def test_exact_mode_matches_numeric(self):
        from fractions import Fraction

        sys_n = pochhammer_system(P)
        sys_e = DifferenceSystem(sys_n.phi, sys_n.psi, Fraction(1, 2), exact=True)
        ce = series_solve(sys_e, 10)
        cn = series_solve(sys_n, 10)
        for k in range(10):
            assert abs(float(ce[k][0][0]) - cn[k][0][0]) < 1e-13

    def test_validation(self):
        const = RationalMatrix([[([1.0], [1.0])]])
        with pytest.raises(ValueError):
            DifferenceSystem(const, const, 1.5)  # |p| >= 1
        zero = RationalMatrix([[([0.0], [1.0])]])
        with pytest.raises(ValueError):
            DifferenceSystem(zero, zero, P)  # det phi(0) = 0
        other = RationalMatrix([[([2.0], [1.0])]])
        with pytest.raises(ValueError):
            DifferenceSystem(const, other, P)  # phi(0) != psi(0)


class TestCertificates:
    def test_identity_infinite_radius(self):
        const = RationalMatrix([[([1.0], [1.0])]])
        sys_ = DifferenceSystem(const, const, P)
        coeffs = series_solve(sys_, 10)
        cert = certify_convergence(sys_, coeffs, R=1.0)
        assert cert["estimated_radius"] == math.inf

    def test_entire_consistent_with_bound(self):
        sys_ = inverse_pochhammer_system(P)
        coeffs = series_solve(sys_, 30)
        cert = certify_convergence(sys_, coeffs, R=1.0)
        assert cert["consistent"]

    def test_pole_at_one_bound(self):
        # phi = 1 - t has R = inf as an entry but F has poles on p^-k;
        # the guaranteed disc R/(norm+1) with R=1 still holds
        sys_ = pochhammer_system(P)
        coeffs = series_solve(sys_, 30)
        cert = certify_convergence(sys_, coeffs, R=1.0)
        assert cert["consistent"]
        # true radius of 1/(t;p)_inf is 1 (nearest pole at t=1... at p^0)
        assert abs(cert["estimated_radius"] - 1.0) < 0.25


class TestContinuation:
    def test_qpochhammer_at_2(self):
        # F = (t;p)_inf continued to t = 2 matches the direct product
        sys_ = inverse_pochhammer_system(P)
        coeffs = series_solve(sys_, 40)
        res = continue_meromorphic(sys_, coeffs, 2.0)
        want = qpoch_inf(2.0, P)
        assert res["pole"] is False
        assert abs(res["value"][0][0] - want) < 1e-10

    def test_t_zero_identity(self):
        sys_ = inverse_pochhammer_system(P)
        coeffs = series_solve(sys_, 20)
        res = continue_meromorphic(sys_, coeffs, 0.0)
        assert abs(res["value"][0][0] - 1.0) < 1e-14

    def test_pole_ladder_detected(self):
        # F = 1/(t;p)_inf has poles exactly at t = p^-k
        sys_ = pochhammer_system(P)
        coeffs = series_solve(sys_, 40)
        for k in range(3):
            t = P ** (-k)
            res = continue_meromorphic(sys_, coeffs, t)
            assert res["pole"] is True
            assert abs(res["pole_location"] - t) < 1e-9

    def test_regular_points_between_ladder(self):
        sys_ = pochhammer_system(P)
        coeffs = series_solve(sys_, 40)
        res = continue_meromorphic(sys_, coeffs, 3.0)
        assert res["pole"] is False
        want = 1.0 / qpoch_inf(3.0, P)
        assert abs(res["value"][0][0] - want) < 1e-9

    def test_exact_zero_at_lattice_point(self):
        # (t;p)_inf vanishes identically at t = 1
        sys_ = inverse_pochhammer_system(P)
        coeffs = series_solve(sys_, 40)
        res = continue_meromorphic(sys_, coeffs, 1.0)
        assert res["pole"] is False
        assert abs(res["value"][0][0]) < 1e-12


class TestSerialization:
    def test_json_loading(self, tmp_path):
        doc = {
            "p": 0.5,
            "phi": [[{"num": [1.0, -1.0], "den": [1.0]}]],
            "psi": [[{"num": [1.0], "den": [1.0]}]],
        }
        path = tmp_path / "sys.json"
        path.write_text(json.dumps(doc))
        sys_ = load_system(str(path))
        a = series_solve(sys_, 10)
        b = series_solve(pochhammer_system(0.5), 10)
        for k in range(10):
            assert np.allclose(a[k], b[k])

    def test_complex_entries(self):
        doc = {
            "p": [0.0, 0.5],
            "phi": [[{"num": [[1.0, 0.0], [-1.0, 0.0]], "den": [[1.0, 0.0]]}]],
            "psi": [[{"num": [[1.0, 0.0]], "den": [[1.0, 0.0]]}]],
        }
        sys_ = system_from_dict(doc)
        assert sys_.p == 0.5j
        coeffs = series_solve(sys_, 5)
        assert coeffs[1][0][0] != 0


class TestSeriesEval:
    def test_horner_matches_manual(self):
        sys_ = pochhammer_system(P)
        coeffs = series_solve(sys_, 30)
        t = 0.1 + 0.05j
        got = series_eval(coeffs, t)[0][0]
        want = sum(coeffs[k][0][0] * t**k for k in range(30))
        assert abs(got - want) < 1e-13
