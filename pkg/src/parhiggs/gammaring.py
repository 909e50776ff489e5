"""The truncated monoid ring of parabolic classes and its plethystic calculus.

A parabolic class gamma = (r, r_{x,j}, d) records a rank, flag jump
dimensions over a fixed list of marked points, and a degree d <= 0.  Finite
windows (rank cap, flag depth cap, degree floor) make the completed monoid
ring computable: a ParSeries is a finite map from in-window classes to
coefficients in the localized ring.

The lambda-ring structure acts by q -> q^n on coefficients and gamma ->
n*gamma on indices; Exp/Log/Pow are the induced plethystic operations.
Products silently drop terms leaving the window; rank grading makes the
augmentation ideal nilpotent inside any window, so the ordinary exp/log
series terminate exactly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .coeffring import MotScalar
from .partitions import ZSeries, hook_kernel_series, size
from .symfunc import macdonald_modified, specialize_z_inverse


class TruncationMismatch(Exception):
    pass


class NonzeroConstantTerm(Exception):
    pass


class ConstantTermNotOne(Exception):
    pass


_MOBIUS = {1: 1, 2: -1, 3: -1, 4: 0, 5: -1, 6: 1, 7: -1, 8: 0, 9: 0, 10: 1,
           11: -1, 12: 0}


def _mobius(n):
    if n in _MOBIUS:
        return _MOBIUS[n]
    m, k = n, 0
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            k += 1
        else:
            p += 1
    if m > 1:
        k += 1
    return (-1) ** k


class Truncation:
    """A finite window: marked points, rank cap, flag depth cap, degree floor."""

    __slots__ = ("points", "rank_max", "depth_max", "deg_min")

    def __init__(self, points, rank_max, depth_max, deg_min):
        if rank_max < 0 or depth_max < 1 or deg_min > 0:
            raise ValueError("invalid truncation window")
        self.points = tuple(points)
        self.rank_max = rank_max
        self.depth_max = depth_max
        self.deg_min = deg_min

    def __eq__(self, other):
        return (isinstance(other, Truncation)
                and self.points == other.points
                and self.rank_max == other.rank_max
                and self.depth_max == other.depth_max
                and self.deg_min == other.deg_min)

    def __hash__(self):
        return hash((self.points, self.rank_max, self.depth_max, self.deg_min))

    def __repr__(self):
        return (f"Truncation(points={list(self.points)}, rank_max={self.rank_max}, "
                f"depth_max={self.depth_max}, deg_min={self.deg_min})")


def gamma_key(r, flags, d):
    """Normalize a class to its hashable form (r, ((..),..), d)."""
    return (r, tuple(tuple(f) for f in flags), d)


def gamma_valid(gamma, trunc, dmin=None):
    """Does gamma satisfy the monoid constraints inside the window?"""
    r, flags, d = gamma
    if r < 0 or r > trunc.rank_max:
        return False
    if d > 0 or d < (trunc.deg_min if dmin is None else dmin):
        return False
    if len(flags) != len(trunc.points):
        return False
    for f in flags:
        if len(f) != trunc.depth_max or any(c < 0 for c in f) or sum(f) != r:
            return False
    return r > 0 or d == 0


def gamma_add(g1, g2):
    r = g1[0] + g2[0]
    flags = tuple(tuple(a + b for a, b in zip(f1, f2))
                  for f1, f2 in zip(g1[1], g2[1]))
    return (r, flags, g1[2] + g2[2])


def gamma_scale(n, g):
    return (n * g[0], tuple(tuple(n * c for c in f) for f in g[1]), n * g[2])


def zero_gamma(trunc):
    return (0, tuple((0,) * trunc.depth_max for _ in trunc.points), 0)


class ParSeries:
    """A truncated element of the completed monoid ring."""

    __slots__ = ("trunc", "terms")

    def __init__(self, trunc, terms=None):
        self.trunc = trunc
        self.terms = {}
        for g, c in (terms or {}).items():
            if not isinstance(c, MotScalar):
                c = MotScalar.from_rational(c)
            if c.is_zero():
                continue
            if not gamma_valid(g, trunc):
                raise ValueError(f"class {g} outside window {trunc}")
            self.terms[g] = c

    @staticmethod
    def one(trunc):
        return ParSeries(trunc, {zero_gamma(trunc): MotScalar.one()})

    @staticmethod
    def zero(trunc):
        return ParSeries(trunc, {})

    def constant_term(self):
        return self.terms.get(zero_gamma(self.trunc), MotScalar.zero())

    def coefficient(self, gamma):
        return self.terms.get(gamma, MotScalar.zero())

    def __eq__(self, other):
        return (isinstance(other, ParSeries) and self.trunc == other.trunc
                and self.terms == other.terms)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            s = out.get(g, MotScalar.zero()) + c
            if s.is_zero():
                out.pop(g, None)
            else:
                out[g] = s
        return self._wrap(out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            s = out.get(g, MotScalar.zero()) - c
            if s.is_zero():
                out.pop(g, None)
            else:
                out[g] = s
        return self._wrap(out)

    def __neg__(self):
        return self._wrap({g: -c for g, c in self.terms.items()})

    def scale(self, c):
        if not isinstance(c, MotScalar):
            c = MotScalar.from_rational(c)
        if c.is_zero():
            return ParSeries.zero(self.trunc)
        return self._wrap({g: c * v for g, v in self.terms.items()})

    def __mul__(self, other):
        self._check(other)
        trunc = self.trunc
        out = {}
        items2 = sorted(other.terms.items(), key=lambda t: t[0][0])
        for g1, c1 in sorted(self.terms.items(), key=lambda t: t[0][0]):
            r1, _, d1 = g1
            for g2, c2 in items2:
                if r1 + g2[0] > trunc.rank_max:
                    break
                if d1 + g2[2] < trunc.deg_min:
                    continue
                g = gamma_add(g1, g2)
                prod = c1 * c2
                s = out.get(g)
                out[g] = prod if s is None else s + prod
        return self._wrap({g: c for g, c in out.items() if not c.is_zero()})

    def adams(self, n):
        """psi_n: q -> q^n on coefficients, gamma -> n*gamma on indices."""
        if n == 1:
            return self
        trunc = self.trunc
        out = {}
        for g, c in self.terms.items():
            if n * g[0] > trunc.rank_max or n * g[2] < trunc.deg_min:
                continue
            out[gamma_scale(n, g)] = c.adams(n)
        return self._wrap(out)

    def exp_pleth(self):
        """Plethystic Exp; requires zero constant term."""
        if not self.constant_term().is_zero():
            raise NonzeroConstantTerm("Exp needs zero constant term")
        b = ParSeries.zero(self.trunc)
        for n in range(1, self.trunc.rank_max + 1):
            b = b + self.adams(n).scale(Fraction(1, n))
        return _ordinary_exp(b)

    def log_pleth(self):
        """Plethystic Log; requires constant term one."""
        if not self.constant_term().is_one():
            raise ConstantTermNotOne("Log needs constant term 1")
        l = _ordinary_log(self)
        out = ParSeries.zero(self.trunc)
        for n in range(1, self.trunc.rank_max + 1):
            mu = _mobius(n)
            if mu:
                out = out + l.adams(n).scale(Fraction(mu, n))
        return out

    def pow_pleth(self, c):
        """Plethystic power Exp(c * Log(self))."""
        return self.log_pleth().scale(c).exp_pleth()

    def restrict(self, predicate):
        """Keep the terms whose class satisfies the predicate; gamma=0 stays."""
        zg = zero_gamma(self.trunc)
        return self._wrap({g: c for g, c in self.terms.items()
                           if g == zg or predicate(g)})

    def to_json(self):
        out = []
        for g, c in sorted(self.terms.items()):
            r, flags, d = g
            out.append({"gamma": {
                "r": r,
                "flags": {str(x): {str(j + 1): v for j, v in enumerate(f) if v}
                          for x, f in zip(self.trunc.points, flags)},
                "d": d,
            }, "coeff": c.to_json()})
        return out

    def _check(self, other):
        if self.trunc != other.trunc:
            raise TruncationMismatch(f"{self.trunc} != {other.trunc}")

    def _wrap(self, terms):
        s = ParSeries(self.trunc)
        s.terms = {g: c for g, c in terms.items() if not c.is_zero()}
        return s

    def __repr__(self):
        n = len(self.terms)
        return f"ParSeries({self.trunc}, {n} terms)"


def _ordinary_exp(b):
    out = ParSeries.one(b.trunc)
    power = ParSeries.one(b.trunc)
    fact = 1
    for k in range(1, b.trunc.rank_max + 1):
        power = power * b
        if not power.terms:
            break
        fact *= k
        out = out + power.scale(Fraction(1, fact))
    return out


def _ordinary_log(f):
    g = f - ParSeries.one(f.trunc)
    out = ParSeries.zero(f.trunc)
    power = ParSeries.one(f.trunc)
    for k in range(1, f.trunc.rank_max + 1):
        power = power * g
        if not power.terms:
            break
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def monomial_arrangements(mu, slots):
    """Distinct ways to place the parts of mu into `slots` ordered levels."""
    padded = tuple(mu) + (0,) * (slots - len(mu))
    if len(padded) != slots:
        return []
    return sorted(set(permutations(padded)))


def embed_macdonald_term(lam, trunc, kernel=None):
    """w^{|lam|} * kernel(z^-1) * prod_x H~_lam(w_{x,.}; z^-1) as a ParSeries.

    kernel defaults to the hook kernel of lam; it is the marked-point-free
    degree series multiplying the Macdonald factors.
    """
    n = size(lam)
    if n > trunc.rank_max:
        raise ValueError(f"|{lam}| exceeds rank cap {trunc.rank_max}")
    dmax = -trunc.deg_min
    if kernel is None:
        kernel = hook_kernel_series(lam, dmax)
    if n == 0:
        return ParSeries(trunc, {zero_gamma(trunc): kernel[0]})
    hm = macdonald_modified(lam)
    series_by_mu = specialize_z_inverse(hm, dmax)
    # per point: list of (flag tuple, {d: MotScalar}) entries
    point_entries = []
    for mu, zser in series_by_mu.items():
        for flag in monomial_arrangements(mu, trunc.depth_max):
            point_entries.append((flag, zser.coeffs))
    # fold the product over all points, then the kernel in the z direction
    acc = {((), 0): MotScalar.one()}
    for _ in trunc.points:
        nxt = {}
        for (flags, d), c in acc.items():
            for flag, zc in point_entries:
                for dd, cc in zc.items():
                    d2 = d + dd
                    if d2 < trunc.deg_min:
                        continue
                    key = (flags + (flag,), d2)
                    prod = c * cc
                    s = nxt.get(key)
                    nxt[key] = prod if s is None else s + prod
        acc = nxt
    terms = {}
    for (flags, d), c in acc.items():
        for dk, ck in kernel.coeffs.items():
            d2 = d + dk
            if d2 < trunc.deg_min:
                continue
            g = (n, flags, d2)
            prod = c * ck
            s = terms.get(g)
            terms[g] = prod if s is None else s + prod
    return ParSeries(trunc, terms)
