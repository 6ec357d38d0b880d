"""The algebra side: generator words, Hopf structure maps, twist
automorphisms, the graded half-algebra f with its bilinear form, and the
truncated quasi-Casimir.

AlgElements are formal Scalar-linear combinations of words in the
generators E_i, F_i, K_mu (mu in the coroot lattice, written K(m0,m1)),
and Z^e.  No normal form is attempted: elements are compared only
through their action on modules, which is where all identities are
checked.

The half-algebra f is the free algebra on theta_0, theta_1 graded by
multidegree nu, modulo the radical of the standard bilinear form
((theta_i, theta_j) = delta_ij (1-q_i^-2)^-1, extended by the twisted
coproduct product rule).  Components f_nu are realized concretely as a
chosen word subset of full Gram rank; the quantum Serre relations hold
automatically because they span the radical.

The truncated quasi-Casimir Omega_{<=p} is the sum over nu with
tr nu <= p of gamma_nu times the canonical element of f_nu (x) f_nu*
(in lowering/raising form, with the K-factor K~_nu in the middle):

    Omega_{<=p} = sum_nu gamma_nu sum_{w,w'} (G_nu^-1)_{w,w'} w^- K~_nu w'^+

The scalars gamma_nu are pinned uniquely by the characterizing relation
K~_{-i} E_i Omega = K~_i Omega E_i imposed on a symbolic-weight Verma
truncation (gamma_0 = 1); the independent recursion route
Omega(F_i m) = F_i K~_i Omega K~_i m lives in cat_o and serves as the
cross-check oracle.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .linalg import el_is_zero, mat_mul, rref, solve_underdetermined
from .scalars import ONE, QT, ZERO, sc, parse_scalar

# --- AlgElement ----------------------------------------------------------
# token forms: ("E", i) ("F", i) ("K", m0, m1) ("Z", e)


class AlgElement:
    """Scalar-linear combination of generator words."""

    def __init__(self, terms=None):
        # terms: list of (coeff, word) with word a tuple of tokens
        self.terms = [(sc(c), tuple(w)) for c, w in (terms or []) if not el_is_zero(sc(c))]

    @classmethod
    def word(cls, *tokens):
        return cls([(ONE, tuple(tokens))])

    @classmethod
    def gen_E(cls, i):
        return cls.word(("E", i))

    @classmethod
    def gen_F(cls, i):
        return cls.word(("F", i))

    @classmethod
    def gen_K(cls, m0, m1):
        return cls.word(("K", m0, m1))

    @classmethod
    def gen_Z(cls, e=1):
        return cls.word(("Z", e))

    def __add__(self, other):
        return AlgElement(self.terms + other.terms)

    def __mul__(self, other):
        if not isinstance(other, AlgElement):
            return AlgElement([(c * other, w) for c, w in self.terms])
        out = []
        for c1, w1 in self.terms:
            for c2, w2 in other.terms:
                out.append((c1 * c2, w1 + w2))
        return AlgElement(out)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgElement([(-c, w) for c, w in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return " + ".join("(%s)*%s" % (c, _word_str(w)) for c, w in self.terms) or "0"


def _tok_str(tok):
    kind = tok[0]
    if kind in ("E", "F"):
        return "%s%d" % (kind, tok[1])
    if kind == "K":
        return "K(%d,%d)" % (tok[1], tok[2])
    return "Z^%d" % tok[1] if tok[1] != 1 else "Z"


def _word_str(w):
    return "*".join(_tok_str(t) for t in w) if w else "1"


_GEN_RE = re.compile(r"^(E|F)(\d+)$|^K\((-?\d+),(-?\d+)\)$|^Z(\^-?\d+)?$")


def parse_alg(s: str) -> AlgElement:
    """Parse 'E0*F1*K(1,0)' style words (sums with +, scalar factors allowed)."""
    s = s.replace(" ", "")
    terms = []
    # split a top-level sum (respecting parentheses)
    depth, start, chunks = 0, 0, []
    for k, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "+" and depth == 0 and k > start:
            chunks.append(s[start:k])
            start = k + 1
    chunks.append(s[start:])
    for chunk in chunks:
        coeff, word = ONE, []
        depth, fstart, factors = 0, 0, []
        for k, ch in enumerate(chunk):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "*" and depth == 0:
                factors.append(chunk[fstart:k])
                fstart = k + 1
        factors.append(chunk[fstart:])
        for f in factors:
            m = _GEN_RE.match(f)
            if m is None:
                coeff = coeff * parse_scalar(f)
            elif f[0] in "EF":
                word.append((f[0], int(f[1:])))
            elif f[0] == "K":
                word.append(("K", int(m.group(3)), int(m.group(4))))
            else:
                word.append(("Z", int(f[2:]) if "^" in f else 1))
        terms.append((coeff, tuple(word)))
    return AlgElement(terms)


# --- Hopf structure on tokens -------------------------------------------

def _kt(i, sign=1):
    # K~_{+-i} = K_{+-coroot_i}
    return ("K", sign if i == 0 else 0, sign if i == 1 else 0)


def coproduct(x: AlgElement):
    """Delta(x) as a list of (coeff, left word, right word)."""
    out = []
    for c, w in x.terms:
        parts = [(c, (), ())]
        for tok in w:
            kind = tok[0]
            if kind == "E":
                i = tok[1]
                legs = [((tok,), ()), ((_kt(i),), (tok,))]
            elif kind == "F":
                i = tok[1]
                legs = [((tok,), (_kt(i, -1),)), ((), (tok,))]
            else:
                legs = [((tok,), (tok,))]
            parts = [
                (cc, lw + l1, rw + r1) for cc, lw, rw in parts for l1, r1 in legs
            ]
        out.extend(parts)
    return out


def antipode(x: AlgElement) -> AlgElement:
    out = []
    for c, w in x.terms:
        coeff, word = c, []
        for tok in reversed(w):
            kind = tok[0]
            if kind == "E":
                coeff = -coeff
                word.extend([_kt(tok[1], -1), tok])
            elif kind == "F":
                coeff = -coeff
                word.extend([tok, _kt(tok[1])])
            elif kind == "K":
                word.append(("K", -tok[1], -tok[2]))
            else:
                word.append(("Z", -tok[1]))
        out.append((coeff, tuple(word)))
    return AlgElement(out)


def counit(x: AlgElement):
    total = ZERO
    for c, w in x.terms:
        if all(tok[0] in ("K", "Z") for tok in w):
            total = total + c
    return total


def twist(x: AlgElement, which: str, u=None, datum=None) -> AlgElement:
    """Apply psi_u / phi_u / omega to a word combination.

    psi_u: E_i -> u^(d(i.i)/2) E_i, F_i -> u^(-d(i.i)/2) F_i, K, Z fixed.
    phi_u: same scaling but only at the special vertex, with exponent
    d*hvee.  omega: E_i <-> F_i, K_mu -> K_{-mu}, Z -> Z^-1.
    """
    out = []
    for c, w in x.terms:
        coeff, word = c, []
        for tok in w:
            kind = tok[0]
            if which == "omega":
                if kind == "E":
                    word.append(("F", tok[1]))
                elif kind == "F":
                    word.append(("E", tok[1]))
                elif kind == "K":
                    word.append(("K", -tok[1], -tok[2]))
                else:
                    word.append(("Z", -tok[1]))
                continue
            word.append(tok)
            if kind not in ("E", "F"):
                continue
            i = tok[1]
            if which == "psi_u":
                e = datum.d * datum.pairing[i][i] // 2
            elif which == "phi_u":
                e = datum.d * datum.hvee if i == datum.i0 else 0
            else:
                raise ValueError("unknown twist %r" % which)
            if e:
                ue = sc(u) ** e
                coeff = coeff * (ue if kind == "E" else ONE / ue)
        out.append((coeff, tuple(word)))
    return AlgElement(out)


# --- the half-algebra f --------------------------------------------------

_PAIR = ((2, -2), (-2, 2))  # Cartan pairing of the shipped datum
_THETA_NORM = ONE / (1 - QT**-8)  # (theta_i, theta_i) = (1 - q_i^-2)^-1, q_i = qt^4


@lru_cache(maxsize=None)
def _form(w: tuple, v: tuple):
    """Lusztig-form pairing of two words of the same multidegree."""
    if not w:
        return ONE
    i = w[0]
    total = ZERO
    prefix = 0  # sum over earlier letters of (letter . i)
    for k, j in enumerate(v):
        if j == i:
            total = total + QT ** (4 * prefix) * _THETA_NORM * _form(w[1:], v[:k] + v[k + 1 :])
        prefix += _PAIR[j][i]
    return total


def words_of_degree(nu):
    """All words with letter multiplicities nu = (n0, n1), fixed order."""
    n0, n1 = nu
    if n0 == 0 and n1 == 0:
        return [()]
    out = []
    if n0:
        out.extend([(0,) + w for w in words_of_degree((n0 - 1, n1))])
    if n1:
        out.extend([(1,) + w for w in words_of_degree((n0, n1 - 1))])
    return out


class FSpaceBasis:
    """Concrete model of the graded component f_nu."""

    def __init__(self, nu):
        self.nu = tuple(nu)
        self.words = words_of_degree(self.nu)
        self.gram_full = [[_form(w, v) for v in self.words] for w in self.words]
        # greedy unit-pivot selection of a full-rank word subset
        basis_idx = []
        for k in range(len(self.words)):
            trial = basis_idx + [k]
            sub = [[self.gram_full[i][j] for j in trial] for i in trial]
            if _rank_sq(sub) == len(trial):
                basis_idx = trial
        self.basis_idx = basis_idx
        self.basis = [self.words[i] for i in basis_idx]
        self.gram = [[self.gram_full[i][j] for j in basis_idx] for i in basis_idx]
        from .linalg import inv_matrix

        self.gram_inv = inv_matrix(self.gram) if self.basis else []

    @property
    def dim(self):
        return len(self.basis)

    @property
    def free_dim(self):
        return len(self.words)

    def expand(self, word):
        """Coefficients of `word` over the chosen basis, modulo radical."""
        rhs = [_form(b, word) for b in self.basis]
        from .linalg import mat_apply

        return mat_apply(self.gram_inv, rhs)


def _rank_sq(M):
    from .linalg import rank

    return rank(M) if M else 0


@lru_cache(maxsize=None)
def f_component_basis(nu) -> FSpaceBasis:
    return FSpaceBasis(tuple(nu))


def degrees_up_to(p):
    """Multidegrees nu with 1 <= tr nu <= p, ordered by (tr, n0)."""
    out = []
    for k in range(1, p + 1):
        for n0 in range(k + 1):
            out.append((n0, k - n0))
    return out


# --- truncated quasi-Casimir --------------------------------------------


class OmegaTruncated:
    """Omega_{<=p} = 1 + sum over nu with 1 <= tr nu <= p of
    sum_{w,w'} c_nu[w][w'] w^- K~_nu w'^+, with the coefficient matrices
    indexed over the chosen basis words of f_nu."""

    def __init__(self, p, coeffs):
        self.p = p
        self.coeffs = dict(coeffs)  # nu -> matrix over fb.basis pairs

    def terms(self):
        for nu, c in sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            yield nu, c, f_component_basis(nu)

    def to_json(self):
        from .scalars import scalar_str

        return {
            "p": self.p,
            "terms": [
                {
                    "nu": list(nu),
                    "coeffs": [[scalar_str(e) for e in row] for row in c],
                    "basis_words": ["".join(map(str, w)) for w in f_component_basis(nu).basis],
                }
                for nu, c, _fb in self.terms()
            ],
        }


def omega_matrix(om: OmegaTruncated, module) -> list:
    """Matrix of Omega_{<=p} on a module (anything with E/F matrices and
    K~ diagonals; see the module base class).  Exact: the raising word
    acts first, so no truncation boundary is crossed."""
    from .linalg import identity, zeros

    n = module.dim
    out = identity(n)
    for nu, cmat, fb in om.terms():
        if fb.dim == 0:
            continue
        Emats = {}
        Fmats = {}
        for w in fb.basis:
            Emats[w] = module.word_matrix([("E", j) for j in w])
            Fmats[w] = module.word_matrix([("F", j) for j in w])
        ktv = module.kt_power_diag(nu)
        for ai, w in enumerate(fb.basis):
            for bi, wp in enumerate(fb.basis):
                coeff = cmat[ai][bi]
                if el_is_zero(coeff):
                    continue
                mid = [[ktv[r] * e for e in row] for r, row in enumerate(Emats[wp])]
                term = mat_mul(Fmats[w], mid)
                out = [
                    [o + coeff * t for o, t in zip(orow, trow)]
                    for orow, trow in zip(out, term)
                ]
    return out


_OMEGA_CACHE = {}


def omega_truncated(p, datum) -> OmegaTruncated:
    """Determine Omega_{<=p} by solving the characterizing relation on a
    symbolic-weight Verma truncation; results cached by p."""
    if p in _OMEGA_CACHE:
        return _OMEGA_CACHE[p]
    from .cat_o import solve_omega_coeffs

    om = OmegaTruncated(p, solve_omega_coeffs(p, datum))
    _OMEGA_CACHE[p] = om
    return om
