"""Partitions, hooks, the conjugate pairing, and the hook kernel coefficients.

A partition is a tuple of weakly decreasing positive integers; () is the
empty partition.  The hook kernel of a partition expands

    1 / prod_{hooks (a,l)} (q^a - z^{-l-1}) (q^{a+1} - z^{-l})

as a power series in z^{-1} with coefficients in the localized ring of
coeffring; these series are the degree-graded classes of rank-|lambda|
nilpotent endomorphism stacks on the projective line with no marked points.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffring import MotScalar


def check_partition(parts):
    parts = tuple(parts)
    for i, p in enumerate(parts):
        if p < 1 or (i and parts[i - 1] < p):
            raise ValueError(f"not a partition: {parts}")
    return parts


def size(lam):
    return sum(lam)


def conjugate(lam):
    """Transpose of the Young diagram."""
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def hooks(lam):
    """(arm, leg) for every cell of the diagram."""
    conj = conjugate(lam)
    out = []
    for i, row in enumerate(lam):
        for j in range(row):
            out.append((row - j - 1, conj[j] - i - 1))
    return out


def pairing(lam, mu):
    """<lam, mu> = sum_i lam'_i mu'_i."""
    lc, mc = conjugate(lam), conjugate(mu)
    return sum(a * b for a, b in zip(lc, mc))


def enumerate_partitions(n):
    """All partitions of n in reverse lexicographic order: (n) first."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = []

    def rec(remaining, cap, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for k in range(min(cap, remaining), 0, -1):
            prefix.append(k)
            rec(remaining - k, k, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def partitions_up_to(n):
    """All partitions of size 0..n, smaller sizes first."""
    out = []
    for k in range(n + 1):
        out.extend(enumerate_partitions(k))
    return out


class ZSeries:
    """Truncated series in z^-1: a map from degrees -Dmax..0 to MotScalar."""

    __slots__ = ("coeffs", "trunc_depth")

    def __init__(self, coeffs, trunc_depth):
        self.trunc_depth = trunc_depth
        self.coeffs = {d: c for d, c in coeffs.items()
                       if -trunc_depth <= d <= 0 and not c.is_zero()}

    def __getitem__(self, d):
        return self.coeffs.get(d, MotScalar.zero())

    def __eq__(self, other):
        return (isinstance(other, ZSeries)
                and self.trunc_depth == other.trunc_depth
                and self.coeffs == other.coeffs)

    def __mul__(self, other):
        if isinstance(other, MotScalar):
            return ZSeries({d: c * other for d, c in self.coeffs.items()},
                           self.trunc_depth)
        out = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                if d < -min(self.trunc_depth, other.trunc_depth):
                    continue
                out[d] = out.get(d, MotScalar.zero()) + c1 * c2
        return ZSeries(out, min(self.trunc_depth, other.trunc_depth))

    def to_json(self):
        return {"trunc_depth": self.trunc_depth,
                "coeffs": {str(d): c.to_json()
                           for d, c in sorted(self.coeffs.items())}}

    @staticmethod
    def from_json(obj):
        return ZSeries({int(d): MotScalar.from_json(c)
                        for d, c in obj["coeffs"].items()},
                       int(obj["trunc_depth"]))

    def __repr__(self):
        inner = ", ".join(f"{d}: {c}" for d, c in sorted(self.coeffs.items(),
                                                         reverse=True))
        return f"ZSeries({{{inner}}})"


def _geometric_factor_inverse(qpow, step, dmax):
    """Expansion of 1/(q^qpow - u^step) through u^dmax, u = z^-1, step >= 1.

    1/(q^a - u^s) = q^-a * sum_k u^{sk} q^{-ak}.
    """
    coeffs = {}
    k = 0
    while k * step <= dmax:
        coeffs[-k * step] = MotScalar.q(-qpow * (k + 1))
        k += 1
    return ZSeries(coeffs, dmax)


def hook_kernel_series(lam, dmax):
    """The hook kernel of lam expanded through z^-dmax."""
    if dmax < 0:
        raise ValueError("dmax must be >= 0")
    result = ZSeries({0: MotScalar.one()}, dmax)
    for arm, leg in hooks(check_partition(lam)):
        # factor (q^arm - z^{-leg-1})
        result = result * _geometric_factor_inverse(arm, leg + 1, dmax)
        # factor (q^{arm+1} - z^{-leg}); for leg = 0 it is the unit q^{arm+1}-1
        if leg == 0:
            result = result * (MotScalar.q(arm + 1) - MotScalar.one()).invert()
        else:
            result = result * _geometric_factor_inverse(arm + 1, leg, dmax)
    return result


def serialize_partition(lam):
    return ",".join(str(p) for p in lam)


def parse_partition(text):
    text = text.strip()
    if not text:
        return ()
    return check_partition(int(p) for p in text.split(","))
