"""Exact arithmetic in the localized ring Q[q, q^-1, 1/(q^i - 1) : i >= 1].

Every motivic class appearing in the genus-zero theory lives here: it is a
rational function in the Lefschetz variable q whose denominator is a power of
q times a product of polynomials q^i - 1.  Internally an element is kept in a
fully reduced form

    value = q^qexp * num(q) / prod_d Phi_d(q)^den[d],

where Phi_d is the d-th cyclotomic polynomial, num has a nonzero constant
term and is coprime to every Phi_d occurring in the denominator.  Since the
Phi_d are irreducible over Q this form is unique, so equality is literal
comparison.  The structured (q^i - 1)-denominator required by the wire format
is reconstructed deterministically on serialization.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class NotAUnit(Exception):
    """Raised when inverting an element that is not a unit of the ring."""


class PoleAtEvaluationPoint(Exception):
    """Raised when evaluating at a zero of the denominator."""


# ---------------------------------------------------------------------------
# polynomial helpers: a polynomial in q is a dict {exponent: Fraction}, no
# zero values stored
# ---------------------------------------------------------------------------

def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _pmul(a, b):
    if not a or not b:
        return {}
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pscale(a, c):
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def _pshift(a, k):
    return {e + k: c for e, c in a.items()}


def _pdeg(a):
    return max(a) if a else -1


def _pdivmod(a, b):
    """Long division a = qt*b + rem over Q; b must be nonzero."""
    db = _pdeg(b)
    lead = b[db]
    rem = dict(a)
    qt = {}
    while rem and _pdeg(rem) >= db:
        dr = _pdeg(rem)
        c = rem[dr] / lead
        qt[dr - db] = c
        for e, v in b.items():
            ee = dr - db + e
            s = rem.get(ee, 0) - c * v
            if s:
                rem[ee] = s
            else:
                rem.pop(ee, None)
    return qt, rem


def _pdiv_exact(a, b):
    """Return a/b if b divides a exactly, else None."""
    qt, rem = _pdivmod(a, b)
    return qt if not rem else None


def _peval(a, x):
    total = Fraction(0)
    for e, c in a.items():
        total += c * x ** e
    return total


def _psubst_power(a, n):
    """Substitute q -> q^n."""
    return {e * n: c for e, c in a.items()}


@lru_cache(maxsize=None)
def _cyclotomic(d):
    """d-th cyclotomic polynomial as a coefficient dict, integer coefficients."""
    poly = {d: Fraction(1), 0: Fraction(-1)}
    for dd in range(1, d):
        if d % dd == 0:
            poly = _pdiv_exact(poly, _cyclotomic_dict(dd))
    return tuple(sorted(poly.items()))


def _cyclotomic_dict(d):
    return dict(_cyclotomic(d))


def _q_pow_minus_one(i):
    """q^i - 1 expanded as a polynomial dict."""
    return {i: Fraction(1), 0: Fraction(-1)}


# ---------------------------------------------------------------------------
# MotScalar
# ---------------------------------------------------------------------------

class MotScalar:
    """An element of Q[q, q^-1, 1/(q^i-1)], immutable and canonical."""

    __slots__ = ("num", "qexp", "den", "_key", "_hash")

    def __init__(self, num, qexp=0, den=None, _canonical=False):
        """Build from a numerator dict, a net power of q, and a denominator.

        den maps i -> e and stands for prod (q^i - 1)^e; it is refactored into
        cyclotomics and cancelled against the numerator.
        """
        if not _canonical:
            num = {e: Fraction(c) for e, c in num.items() if c}
            cyclo = {}
            for i, e in (den or {}).items():
                if e < 0:
                    raise ValueError("denominator exponents must be >= 0")
                if e:
                    for dd in _divisors(i):
                        cyclo[dd] = cyclo.get(dd, 0) + e
            num, qexp, cyclo = _reduce(num, qexp, cyclo)
            den = cyclo
        self.num = num
        self.qexp = qexp
        self.den = den
        self._key = (tuple(sorted(num.items())), qexp, tuple(sorted(den.items())))
        self._hash = hash(self._key)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(c):
        c = Fraction(c)
        return MotScalar({0: c} if c else {}, 0, {}, _canonical=True)

    @staticmethod
    def zero():
        return _ZERO

    @staticmethod
    def one():
        return _ONE

    @staticmethod
    def q(k=1):
        """The monomial q^k."""
        return MotScalar({0: Fraction(1)}, k, {}, _canonical=True)

    @staticmethod
    def inv_cyclo(i, e=1):
        """1/(q^i - 1)^e."""
        return MotScalar({0: Fraction(1)}, 0, {i: e})

    # -- ring structure ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if not self.num:
            return other
        if not other.num:
            return self
        den = dict(self.den)
        for d, m in other.den.items():
            den[d] = max(den.get(d, 0), m)
        a = self.num
        for d, m in den.items():
            extra = m - self.den.get(d, 0)
            for _ in range(extra):
                a = _pmul(a, _cyclotomic_dict(d))
        b = other.num
        for d, m in den.items():
            extra = m - other.den.get(d, 0)
            for _ in range(extra):
                b = _pmul(b, _cyclotomic_dict(d))
        s = min(self.qexp, other.qexp)
        num = _padd(_pshift(a, self.qexp - s), _pshift(b, other.qexp - s))
        num, s, den = _reduce(num, s, den)
        return MotScalar(num, s, den, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return MotScalar(_pneg(self.num), self.qexp, dict(self.den), _canonical=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if not self.num or not other.num:
            return _ZERO
        # each numerator is coprime to its own denominator, so only
        # cross-cancellations can occur
        na, nb = self.num, other.num
        den = dict(self.den)
        for d, m in other.den.items():
            den[d] = den.get(d, 0) + m
        na, den = _cancel_against(na, other.den, den)
        nb, den = _cancel_against(nb, self.den, den)
        return MotScalar(_pmul(na, nb), self.qexp + other.qexp,
                         den, _canonical=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _coerce(other).invert()

    def invert(self):
        """Multiplicative inverse; the numerator must factor into cyclotomics."""
        if not self.num:
            raise NotAUnit("zero is not invertible")
        rest = self.num
        parts = {}
        d = 1
        deg = _pdeg(rest)
        bound = 2 * deg * deg + 2
        while _pdeg(rest) > 0 and d <= bound:
            phi = _cyclotomic_dict(d)
            if _pdeg(phi) <= _pdeg(rest):
                while True:
                    qt = _pdiv_exact(rest, phi)
                    if qt is None:
                        break
                    rest = qt
                    parts[d] = parts.get(d, 0) + 1
            d += 1
        if _pdeg(rest) != 0:
            raise NotAUnit("numerator has a non-cyclotomic factor")
        c = rest[0]
        num = {0: 1 / c}
        for d, m in self.den.items():
            for _ in range(m):
                num = _pmul(num, _cyclotomic_dict(d))
        num, s, den = _reduce(num, -self.qexp, dict(parts))
        return MotScalar(num, s, den, _canonical=True)

    def adams(self, n):
        """Adams operation q -> q^n, n >= 1."""
        if n < 1:
            raise ValueError("adams requires n >= 1")
        if n == 1 or not self.num:
            return self
        shift, struct, over = _structured_denominator(self.den)
        num = _pmul(self.num, over)
        return MotScalar(_psubst_power(num, n), n * (self.qexp - shift),
                         {n * i: e for i, e in struct.items()})

    def evaluate(self, q0):
        """Exact value at q = q0, a rational number."""
        q0 = Fraction(q0)
        if q0 == 0 and self.qexp < 0:
            raise PoleAtEvaluationPoint("pole at q = 0")
        val = _peval(self.num, q0)
        for d, m in self.den.items():
            pd = _peval(_cyclotomic_dict(d), q0)
            if pd == 0:
                raise PoleAtEvaluationPoint(f"denominator Phi_{d} vanishes at {q0}")
            val /= pd ** m
        return val * q0 ** self.qexp

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self._key == _ONE._key

    def as_rational(self):
        """The value as a Fraction if it is constant, else None."""
        if not self.num:
            return Fraction(0)
        if self.qexp == 0 and not self.den and _pdeg(self.num) == 0:
            return self.num[0]
        return None

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MotScalar.from_rational(other)
        if not isinstance(other, MotScalar):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self.num)

    # -- serialization -----------------------------------------------------

    def structured(self):
        """Return (numerator poly, a, {i: e_i}) with value num / (q^a prod (q^i-1)^e_i).

        The numerator is coprime to q; a may be negative (net numerator power).
        This is the unique structured form obtained by covering the cyclotomic
        denominator greedily from the largest order downwards.
        """
        shift, struct, over = _structured_denominator(self.den)
        return _pmul(self.num, over), shift - self.qexp, struct

    def to_json(self):
        num, a, struct = self.structured()
        return {
            "num": [[c.numerator, c.denominator, e] for e, c in sorted(num.items())],
            "q_shift": a,
            "cyclo": {str(i): e for i, e in sorted(struct.items())},
        }

    @staticmethod
    def from_json(obj):
        num = {int(e): Fraction(int(p), int(r)) for p, r, e in obj["num"]}
        den = {int(i): int(e) for i, e in obj.get("cyclo", {}).items()}
        return MotScalar(num, -int(obj.get("q_shift", 0)), den)

    def to_text(self):
        num, a, struct = self.structured()
        parts = []
        if a:
            parts.append(f"q^{a}")
        for i, e in sorted(struct.items()):
            parts.append(f"(q^{i}-1)^{e}")
        den = " * ".join(parts) if parts else "1"
        return f"num = {_poly_str(num)}; den = {den}"

    def __str__(self):
        num, a, struct = self.structured()
        s = _poly_str(num)
        factors = []
        if a > 0:
            factors.append("q" if a == 1 else f"q^{a}")
        if a < 0:
            s = f"q^{-a}*({s})" if len(num) > 1 else _poly_str(_pshift(num, -a))
        for i, e in sorted(struct.items()):
            base = "(q-1)" if i == 1 else f"(q^{i}-1)"
            factors.append(base if e == 1 else f"{base}^{e}")
        if not factors:
            return s
        if len(num) > 1:
            s = f"({s})"
        return s + "/" + ("*".join(factors) if len(factors) == 1
                          else "(" + "*".join(factors) + ")")

    def __repr__(self):
        return f"MotScalar({self})"


def _coerce(x):
    if isinstance(x, MotScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return MotScalar.from_rational(x)
    raise TypeError(f"cannot coerce {type(x)!r} to MotScalar")


@lru_cache(maxsize=None)
def _divisors(i):
    return tuple(d for d in range(1, i + 1) if i % d == 0)


def _cancel_against(num, candidates, den):
    """Divide num by cyclotomics from `candidates` still present in `den`."""
    changed = False
    for d in candidates:
        m = den.get(d, 0)
        if not m:
            continue
        phi = _cyclotomic_dict(d)
        while m > 0:
            qt = _pdiv_exact(num, phi)
            if qt is None:
                break
            num = qt
            m -= 1
            changed = True
        if changed:
            if m:
                den[d] = m
            else:
                del den[d]
            changed = False
    return num, den


def _reduce(num, qexp, cyclo):
    """Cancel powers of q and denominator cyclotomics out of the numerator."""
    if not num:
        return {}, 0, {}
    v = min(num)
    if v:
        num = _pshift(num, -v)
        qexp += v
    out = {}
    for d, m in cyclo.items():
        if m <= 0:
            continue
        phi = _cyclotomic_dict(d)
        while m > 0:
            qt = _pdiv_exact(num, phi)
            if qt is None:
                break
            num = qt
            m -= 1
        if m:
            out[d] = m
    return num, qexp, out


def _structured_denominator(cyclo):
    """Cover a cyclotomic multiset by factors (q^i-1)^{e_i}, largest order first.

    Returns (shift, {i: e_i}, overshoot) where
    prod (q^i-1)^{e_i} = q^shift... no q power appears; shift is always 0 here
    and kept for symmetry; overshoot is the polynomial
    prod (q^i-1)^{e_i} / prod Phi_d^{m_d} to be folded into the numerator.
    """
    need = dict(cyclo)
    struct = {}
    for d in sorted(need, reverse=True):
        have = sum(e for i, e in struct.items() if i % d == 0)
        if need[d] > have:
            struct[d] = struct.get(d, 0) + need[d] - have
    over = {0: Fraction(1)}
    cover = {}
    for i, e in struct.items():
        for dd in _divisors(i):
            cover[dd] = cover.get(dd, 0) + e
    for d, m in cover.items():
        extra = m - need.get(d, 0)
        for _ in range(extra):
            over = _pmul(over, _cyclotomic_dict(d))
    return 0, struct, over


def _poly_str(p):
    if not p:
        return "0"
    terms = []
    for e, c in sorted(p.items(), reverse=True):
        if e == 0:
            base = str(c)
        else:
            var = "q" if e == 1 else f"q^{e}"
            if c == 1:
                base = var
            elif c == -1:
                base = "-" + var
            else:
                base = f"{c}*{var}"
        terms.append(base)
    out = terms[0]
    for t in terms[1:]:
        out += ("+" + t) if not t.startswith("-") else t
    return out


_ZERO = MotScalar({}, 0, {}, _canonical=True)
_ONE = MotScalar({0: Fraction(1)}, 0, {}, _canonical=True)
