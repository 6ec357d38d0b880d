"""Exact scalar field and truncated power series."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaffine.scalars import (
    CA,
    CAA,
    FIELD,
    ONE,
    QT,
    Z,
    ZA2,
    ZERO,
    PoleError,
    TruncSeries,
    evaluate_numeric,
    inv,
    is_zero,
    parse_scalar,
    qt_pow,
    sc,
    scalar_str,
    ts_from_json,
    ts_to_json,
    unit_monomial,
)

UNITS = [QT, Z, CA, CAA, ZA2]


def rand_scalar(draw_ints):
    """Build a small rational function from a list of integers."""
    x = sc(draw_ints[0])
    for k, e in enumerate(draw_ints[1:6]):
        x = x * UNITS[k] ** e if e >= 0 else x / UNITS[k] ** (-e)
    if len(draw_ints) > 6 and draw_ints[6] % 3 == 0:
        x = x + QT * Z / (ONE + CA)
    return x


class TestFieldAxioms:
    @given(st.lists(st.integers(-3, 3), min_size=7, max_size=7))
    @settings(max_examples=50, deadline=None)
    def test_ring_axioms(self, ints):
        x = rand_scalar(ints)
        y = rand_scalar(list(reversed(ints)))
        assert x + y == y + x
        assert x * y == y * x
        assert x * (y + ONE) == x * y + x
        assert x - x == ZERO

    @given(st.lists(st.integers(-3, 3), min_size=7, max_size=7))
    @settings(max_examples=50, deadline=None)
    def test_inverse(self, ints):
        x = rand_scalar(ints) + sc(7)  # keep away from 0
        assert x * inv(x) == ONE

    def test_inv_zero_raises(self):
        with pytest.raises(ZeroDivisionError):
            inv(ZERO)

    def test_canonical_equality(self):
        # same element along two syntactic routes
        a = (QT**2 - ONE) / (QT - ONE)
        b = QT + ONE
        assert a == b
        assert is_zero(a - b)

    def test_unit_monomial_laurent(self):
        m = unit_monomial(qt_e=-2, z_e=3, ca_e=1, caa_e=-1, za2_e=2)
        assert m * QT**2 * CAA == Z**3 * CA * ZA2**2

    def test_qt_pow_negative(self):
        assert qt_pow(-3) * QT**3 == ONE


class TestSerialization:
    @given(st.lists(st.integers(-3, 3), min_size=7, max_size=7))
    @settings(max_examples=30, deadline=None)
    def test_roundtrip(self, ints):
        x = rand_scalar(ints)
        assert parse_scalar(scalar_str(x)) == x

    def test_unknown_symbol_rejected(self):
        with pytest.raises(ValueError):
            parse_scalar("qt + bogus")

    def test_caret_and_star_powers(self):
        assert parse_scalar("qt^2") == parse_scalar("qt**2") == QT**2


class TestNumericEvaluation:
    def test_monomial(self):
        val = evaluate_numeric(QT**2 * Z, {"qt": 0.5, "z": 2.0})
        assert abs(val - 0.5) < 1e-14

    def test_rational(self):
        x = (QT + ONE) / (QT - ONE)
        val = evaluate_numeric(x, {"qt": 3.0})
        assert abs(val - 2.0) < 1e-14

    def test_pole_raises(self):
        x = ONE / (QT - ONE)
        with pytest.raises(PoleError):
            evaluate_numeric(x, {"qt": 1.0})

    def test_defaults_to_one(self):
        # unassigned units evaluate at 1
        val = evaluate_numeric(CA * CAA * ZA2, {})
        assert abs(val - 1.0) < 1e-14


class TestTruncSeries:
    def test_mul_truncates(self):
        t = TruncSeries.t(4)
        f = (ONE + t) ** 5
        assert f.coeffs == [sc(1), sc(5), sc(10), sc(10)]

    def test_inverse(self):
        t = TruncSeries.t(6)
        f = TruncSeries.const(ONE, 6) - t
        g = f.inv()
        assert all(c == ONE for c in g.coeffs)  # geometric series
        assert f * g == TruncSeries.const(ONE, 6)

    def test_inverse_requires_unit(self):
        t = TruncSeries.t(3)
        with pytest.raises(ZeroDivisionError):
            t.inv()

    @given(st.lists(st.integers(-4, 4), min_size=4, max_size=4),
           st.lists(st.integers(-4, 4), min_size=4, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_ring_laws(self, xs, ys):
        f = TruncSeries(4, [sc(c) for c in xs])
        g = TruncSeries(4, [sc(c) for c in ys])
        assert f + g == g + f
        assert f * g == g * f
        assert f * (g + ONE) == f * g + f

    def test_scale_t(self):
        t = TruncSeries.t(4)
        f = (ONE + t) ** 3
        g = f.scale_t(sc(2))
        assert g.coeffs == [sc(1), sc(6), sc(12), sc(8)]

    def test_order_mismatch_raises(self):
        with pytest.raises(ValueError):
            TruncSeries.t(3) + TruncSeries.t(4)

    def test_evaluate_horner(self):
        f = TruncSeries(3, [sc(1), sc(2), sc(3)])
        assert f.evaluate(sc(2)) == sc(17)

    def test_json_roundtrip(self):
        f = TruncSeries(3, [ONE, QT / (ONE + Z), CA**2])
        assert ts_from_json(ts_to_json(f)) == f

    def test_nested_coefficients(self):
        # series whose coefficients are themselves series
        inner_one = TruncSeries.const(ONE, 2)
        u = TruncSeries.t(2)
        f = TruncSeries(3, [inner_one + u, u, inner_one])
        g = f * f
        assert g.coeffs[0] == (inner_one + u) * (inner_one + u)
        finv = f.inv()
        assert f * finv == TruncSeries.const(inner_one, 3)
