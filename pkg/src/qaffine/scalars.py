"""Exact coefficient field and truncated power series.

The coefficient field is the field of rational functions over Q in five
invertible symbols:

    qt   -- the small deformation parameter (q = qt^4 for the shipped
            rank-one affine datum, so every half-integer power of q that
            the theory produces is an integer power of qt),
    z    -- the central character of the left induced module,
    ca   -- the unit q^[a,w] attached to the generic base point a
            (w = fundamental weight of the finite part),
    caa  -- the unit q^[a,a],
    za2  -- the unit z^(2[a,w]).

All weight pairings used anywhere in the package evaluate to Laurent
monomials in these five symbols; see rootdata.  A second base point b is
always of the form a + (integer)*w, so its units are derived monomials
and need no symbols of their own.

Elements ("Scalars") are sympy sparse rational-function field elements,
kept in reduced canonical form by construction, so equality is decidable
by syntactic comparison.  TruncSeries is a polynomial in t of degree < n
with coefficients in any commutative ring that supports +, -, * and
(for the constant term) inversion -- in practice Scalars, or nested
TruncSeries when two independent truncation variables are needed.
"""

from __future__ import annotations

from sympy import QQ, sympify
from sympy.polys.fields import field as _field

UNIT_NAMES = ("qt", "z", "ca", "caa", "za2")

FIELD, QT, Z, CA, CAA, ZA2 = _field(",".join(UNIT_NAMES), QQ)

ONE = FIELD.one
ZERO = FIELD.zero

# q = qt^(d * hvee) with d = 2, hvee = 2 for the shipped datum.
Q = QT**4


def sc(x):
    """Coerce an int / rational / field element to a Scalar."""
    if hasattr(x, "ring") or hasattr(x, "field"):
        return x
    return FIELD.ground_new(QQ.convert(x)) * ONE


def is_zero(x):
    return x == 0


def inv(x):
    if x == 0:
        raise ZeroDivisionError("inversion of zero scalar")
    return ONE / x


def qt_pow(e: int):
    return QT**e if e >= 0 else ONE / QT ** (-e)


def unit_monomial(qt_e=0, z_e=0, ca_e=0, caa_e=0, za2_e=0):
    """Laurent monomial qt^qt_e * z^z_e * ca^ca_e * caa^caa_e * za2^za2_e."""
    num = ONE
    for g, e in ((QT, qt_e), (Z, z_e), (CA, ca_e), (CAA, caa_e), (ZA2, za2_e)):
        if e >= 0:
            num *= g**e
        else:
            num /= g ** (-e)
    return num


# --- serialization -------------------------------------------------------

def scalar_str(x) -> str:
    """Serialize a Scalar; powers use '^' (parse accepts '^' or '**')."""
    return str(sc(x)).replace("**", "^")


def parse_scalar(s: str):
    expr = sympify(s.replace("^", "**"), rational=True)
    bad = [str(f) for f in expr.free_symbols if str(f) not in UNIT_NAMES]
    if bad:
        raise ValueError("unknown symbols in scalar: %s" % ", ".join(sorted(bad)))
    return FIELD.from_expr(expr)


def _coeff_to_complex(c) -> complex:
    return complex(int(c.numerator)) / complex(int(c.denominator))


class PoleError(ArithmeticError):
    def __init__(self, denominator):
        self.denominator = denominator
        super().__init__("denominator vanishes at the assignment: %s" % denominator)


def _eval_poly(p, vals) -> complex:
    total = 0j
    for monom, coeff in p.terms():
        term = _coeff_to_complex(coeff)
        for base, e in zip(vals, monom):
            term *= base**e
        total += term
    return total


def evaluate_numeric(x, assignment: dict):
    """Evaluate a Scalar (or TruncSeries) at a numeric point.

    assignment maps unit-symbol names to complex numbers; all five must
    be invertible (nonzero) where they occur.  Raises PoleError when the
    denominator vanishes.
    """
    if isinstance(x, TruncSeries):
        return [evaluate_numeric(c, assignment) for c in x.coeffs]
    x = sc(x)
    vals = [complex(assignment.get(name, 1.0)) for name in UNIT_NAMES]
    den = _eval_poly(x.denom, vals)
    if den == 0:
        raise PoleError(str(x.denom))
    return _eval_poly(x.numer, vals) / den


# --- truncated power series ---------------------------------------------

def _coeff_inv(c):
    if isinstance(c, TruncSeries):
        return c.inv()
    if c == 0:
        raise ZeroDivisionError("non-invertible leading coefficient")
    return ONE / c if hasattr(c, "field") or hasattr(c, "ring") else 1 / c


class TruncSeries:
    """Element of A_n = C[t]/t^n: coefficients c_0..c_{n-1}."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n, coeffs=None):
        if n < 1:
            raise ValueError("order must be >= 1")
        self.n = n
        coeffs = list(coeffs) if coeffs is not None else []
        if len(coeffs) > n:
            coeffs = coeffs[:n]
        zero = self._find_zero(coeffs)
        while len(coeffs) < n:
            coeffs.append(zero)
        self.coeffs = coeffs

    @staticmethod
    def _find_zero(coeffs):
        for c in coeffs:
            return c * 0
        return ZERO

    @classmethod
    def const(cls, c, n):
        return cls(n, [c])

    @classmethod
    def t(cls, n, k=1, ring_one=None):
        one = ONE if ring_one is None else ring_one
        coeffs = [one * 0] * min(k, n)
        if k < n:
            coeffs = coeffs + [one]
        return cls(n, coeffs)

    @property
    def zero_c(self):
        return self.coeffs[0] * 0

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("truncation order mismatch: %d vs %d" % (self.n, other.n))

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            cs = list(self.coeffs)
            cs[0] = cs[0] + other
            return TruncSeries(self.n, cs)
        self._check(other)
        return TruncSeries(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            cs = list(self.coeffs)
            cs[0] = cs[0] - other
            return TruncSeries(self.n, cs)
        self._check(other)
        return TruncSeries(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries(self.n, [a * other for a in self.coeffs])
        self._check(other)
        n = self.n
        zero = self.zero_c
        out = [zero] * n
        for i, a in enumerate(self.coeffs):
            if isinstance(a, TruncSeries):
                pass
            elif a == 0:
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                out[i + j] = out[i + j] + a * b
        return TruncSeries(n, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        out = TruncSeries.const(self.zero_c + 1, self.n)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inv(self):
        g = _coeff_inv(self.coeffs[0])
        n = self.n
        out = [g]
        for k in range(1, n):
            s = self.zero_c
            for j in range(1, k + 1):
                s = s + self.coeffs[j] * out[k - j]
            out.append(-(g * s))
        return TruncSeries(n, out)

    def scale_t(self, u):
        """Substitute t -> u*t (the rescaling automorphism of C[t])."""
        out, p = [], None
        for k, c in enumerate(self.coeffs):
            p = (self.zero_c + 1) if k == 0 else p * u
            out.append(c * p)
        return TruncSeries(self.n, out)

    def truncate(self, m):
        return TruncSeries(m, self.coeffs[:m])

    def is_unit(self):
        c0 = self.coeffs[0]
        if isinstance(c0, TruncSeries):
            return c0.is_unit()
        return c0 != 0

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(self.zero_c + other, self.n)
        if self.n != other.n:
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        raise TypeError("TruncSeries is unhashable")

    def evaluate(self, tval):
        """Horner evaluation at t = tval (ring element or number)."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * tval + c
        return acc

    def __repr__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not isinstance(c, TruncSeries) and c == 0:
                continue
            parts.append("(%s)*t^%d" % (c, k) if k else "(%s)" % (c,))
        return " + ".join(parts) if parts else "0"


def ts_to_json(f: TruncSeries) -> dict:
    return {"order": f.n, "coeffs": [scalar_str(c) for c in f.coeffs]}


def ts_from_json(d: dict) -> TruncSeries:
    return TruncSeries(d["order"], [parse_scalar(s) for s in d["coeffs"]])
