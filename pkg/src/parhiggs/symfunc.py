"""Symmetric functions in the monomial basis and modified Macdonald polynomials.

A SymFun of degree n stores the coefficient of each monomial symmetric
function m_mu (mu a partition of n) as an integer polynomial in (q, z).

The modified Macdonald polynomial of a partition is built by brute-force
enumeration of fillings of the diagram, weighted q^inv z^maj.  The diagram is
drawn with the longest row at the bottom; inv counts attacking inversion
pairs (same row, or consecutive rows with the upper cell strictly to the
right) corrected by the arms of descent cells, and maj adds leg+1 over the
descent cells.  This statistic convention is the one certified by the kernel
identity test in the suite; transposing the shape or exchanging the two
statistics breaks that identity, see tests/test_symfunc.py.
"""

from __future__ import annotations

from functools import lru_cache

from .coeffring import MotScalar
from .partitions import ZSeries, check_partition, conjugate, enumerate_partitions, size


class SizeMismatch(Exception):
    """Raised when a partition's size does not match a SymFun's degree."""


class TruncationOverflow(Exception):
    """Raised when a z power exceeds the requested truncation depth."""


MAX_DEGREE = 8


def _poly_qz_str(p):
    if not p:
        return "0"
    terms = []
    for (i, j), c in sorted(p.items()):
        t = []
        if abs(c) != 1 or (i == 0 and j == 0):
            t.append(str(abs(c)))
        if i:
            t.append("q" if i == 1 else f"q^{i}")
        if j:
            t.append("z" if j == 1 else f"z^{j}")
        sign = "-" if c < 0 else "+"
        terms.append(sign + "*".join(t))
    out = "".join(terms)
    return out[1:] if out.startswith("+") else out


class SymFun:
    """A symmetric function of fixed degree, monomial basis, Z[q,z] coefficients."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree, coeffs):
        self.degree = degree
        self.coeffs = {mu: dict(p) for mu, p in coeffs.items() if p}

    def coefficient(self, mu):
        mu = check_partition(mu)
        if size(mu) != self.degree:
            raise SizeMismatch(f"|{mu}| != {self.degree}")
        return dict(self.coeffs.get(mu, {}))

    def specialize_z_zero(self):
        out = {}
        for mu, p in self.coeffs.items():
            pz = {k: c for k, c in p.items() if k[1] == 0}
            if pz:
                out[mu] = pz
        return SymFun(self.degree, out)

    def __eq__(self, other):
        return (isinstance(other, SymFun) and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def to_json(self):
        return {"degree": self.degree,
                "coeffs": {",".join(map(str, mu)): _poly_qz_str(p)
                           for mu, p in sorted(self.coeffs.items())}}

    def __repr__(self):
        parts = [f"({_poly_qz_str(p)})*m{list(mu)}"
                 for mu, p in sorted(self.coeffs.items(), reverse=True)]
        return " + ".join(parts) if parts else "0"


def _distinct_fillings(content_word, n):
    """Distinct arrangements of a multiset word of length n."""
    from collections import Counter
    counts = Counter(content_word)
    out = []
    cur = [0] * n

    def rec(pos):
        if pos == n:
            out.append(tuple(cur))
            return
        for v in sorted(counts):
            if counts[v]:
                counts[v] -= 1
                cur[pos] = v
                rec(pos + 1)
                counts[v] += 1

    rec(0)
    return out


def _statistics_tables(lam):
    """Cell list in reading order plus arm/leg/attack/descent structure."""
    rows = len(lam)
    conj = conjugate(lam)
    cells = [(i, j) for i in range(rows - 1, -1, -1) for j in range(lam[i])]
    index = {c: k for k, c in enumerate(cells)}
    arm = {c: lam[c[0]] - c[1] - 1 for c in cells}
    leg = {c: conj[c[1]] - c[0] - 1 for c in cells}
    attacks = []
    for k, (i, j) in enumerate(cells):
        for k2 in range(k + 1, len(cells)):
            i2, j2 = cells[k2]
            if i2 == i or (i2 == i - 1 and j > j2):
                attacks.append((k, k2))
    descent_pairs = []  # (cell index, index of cell below, arm, leg) for i >= 1
    for i, j in cells:
        if i >= 1:
            c = (i, j)
            descent_pairs.append((index[c], index[(i - 1, j)], arm[c], leg[c]))
    return cells, attacks, descent_pairs


@lru_cache(maxsize=None)
def macdonald_modified(lam):
    """The modified Macdonald polynomial of lam in the monomial basis."""
    lam = check_partition(lam)
    n = size(lam)
    if n > MAX_DEGREE:
        raise ValueError(f"degree cap {MAX_DEGREE} exceeded by {lam}")
    if n == 0:
        return SymFun(0, {(): {(0, 0): 1}})
    _, attacks, descent_pairs = _statistics_tables(lam)
    coeffs = {}
    for mu in enumerate_partitions(n):
        word = []
        for letter, mult in enumerate(mu, start=1):
            word.extend([letter] * mult)
        poly = {}
        for filling in _distinct_fillings(word, n):
            inv = sum(1 for a, b in attacks if filling[a] > filling[b])
            maj = 0
            for a, below, arm_a, leg_a in descent_pairs:
                if filling[a] > filling[below]:
                    maj += leg_a + 1
                    inv -= arm_a
            key = (inv, maj)
            poly[key] = poly.get(key, 0) + 1
        coeffs[mu] = {k: c for k, c in poly.items() if c}
    return SymFun(n, coeffs)


def hall_littlewood(lam):
    """The z = 0 specialization of the modified Macdonald polynomial."""
    return macdonald_modified(check_partition(lam)).specialize_z_zero()


def specialize_z_inverse(f, dmax):
    """Substitute z -> z^-1 in every coefficient, yielding ZSeries values.

    Raises TruncationOverflow if any z power exceeds dmax, since the result
    could then not be represented exactly in the window.
    """
    out = {}
    for mu, p in f.coeffs.items():
        series = {}
        for (i, j), c in p.items():
            if j > dmax:
                raise TruncationOverflow(f"z^{j} beyond depth {dmax}")
            cur = series.get(-j, MotScalar.zero())
            series[-j] = cur + MotScalar.q(i) * MotScalar.from_rational(c)
        out[mu] = ZSeries(series, dmax)
    return out
