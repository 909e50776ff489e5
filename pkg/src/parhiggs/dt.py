"""Donaldson-Thomas invariants and motivic classes of parabolic moduli stacks.

The generating series of rank-graded nilpotent endomorphism stacks is a sum
over partitions of a global degree series times modified Macdonald factors,
one per marked point.  Its plethystic logarithm scaled by q defines the DT
invariants B_gamma; every moduli class computed here is a coefficient of a
plethystic exponential of a slope-restricted sum of DT invariants, twisted
by q^chi and read off after a degree shift large enough to land in the
nonpositive regime.

Eigenvalues live in a Q-vector space with a declared transcendence basis, so
all degree and slope constraints are exact vectors of rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffring import MotScalar
from .gammaring import ParSeries, Truncation, embed_macdonald_term, gamma_valid
from .partitions import ZSeries, hook_kernel_series, parse_partition, partitions_up_to, serialize_partition


class MissingTableEntry(Exception):
    pass


class InvalidWeights(Exception):
    pass


class ResonantWithBadWeights(Exception):
    pass


class NonUnitConstant(Exception):
    pass


# ---------------------------------------------------------------------------
# parabolic classes independent of any truncation window
# ---------------------------------------------------------------------------

class ParClass:
    """A class gamma = (rank, flag jumps per point, degree)."""

    __slots__ = ("r", "flags", "d")

    def __init__(self, r, flags, d):
        self.r = r
        norm = {}
        for x, jumps in flags.items():
            jumps = tuple(jumps)
            while jumps and jumps[-1] == 0:
                jumps = jumps[:-1]
            if any(c < 0 for c in jumps):
                raise ValueError("flag jumps must be >= 0")
            if sum(jumps) != r:
                raise ValueError(f"flag jumps at {x} must sum to the rank")
            norm[str(x)] = jumps
        self.flags = dict(sorted(norm.items()))
        self.d = d
        if r == 0 and d != 0:
            raise ValueError("rank zero forces degree zero")

    @property
    def points(self):
        return tuple(self.flags)

    def depth(self):
        return max((len(f) for f in self.flags.values()), default=0)

    def shift(self, k):
        """gamma + k * (0, 0, 1)."""
        return ParClass(self.r, self.flags, self.d + k)

    def key(self, trunc):
        flags = tuple(
            tuple(self.flags.get(x, ())[j] if j < len(self.flags.get(x, ())) else 0
                  for j in range(trunc.depth_max))
            for x in trunc.points)
        return (self.r, flags, self.d)

    def __eq__(self, other):
        return (isinstance(other, ParClass) and self.r == other.r
                and self.flags == other.flags and self.d == other.d)

    def __hash__(self):
        return hash((self.r, tuple(self.flags.items()), self.d))

    def __repr__(self):
        return f"ParClass(r={self.r}, flags={self.flags}, d={self.d})"

    def to_json(self):
        return {"r": self.r,
                "flags": {x: {str(j + 1): v for j, v in enumerate(f) if v}
                          for x, f in self.flags.items()},
                "d": self.d}

    @staticmethod
    def from_json(obj):
        flags = {}
        for x, levels in obj.get("flags", {}).items():
            depth = max((int(j) for j in levels), default=0)
            jumps = [0] * depth
            for j, v in levels.items():
                jumps[int(j) - 1] = int(v)
            flags[x] = tuple(jumps)
        return ParClass(int(obj["r"]), flags, int(obj["d"]))


def chi(gamma, genus):
    """(g-1) r^2 + sum_x sum_{j<j'} r_{x,j} r_{x,j'}."""
    if isinstance(gamma, ParClass):
        r, flag_iter = gamma.r, gamma.flags.values()
    else:
        r, flags, _ = gamma
        flag_iter = flags
    total = (genus - 1) * r * r
    for f in flag_iter:
        s = sum(f)
        total += (s * s - sum(c * c for c in f)) // 2
    return total


# ---------------------------------------------------------------------------
# eigenvalues over a declared transcendence basis, weights, factor tables
# ---------------------------------------------------------------------------

def _fraction(v):
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


class Eigenvalues:
    """Residue eigenvalues with exact coordinates over a basis {1, b_1..b_m}."""

    __slots__ = ("basis_dim", "values")

    def __init__(self, basis_dim, values):
        self.basis_dim = basis_dim
        vals = {}
        for (x, j), vec in values.items():
            vec = tuple(_fraction(c) for c in vec)
            if len(vec) != basis_dim + 1:
                raise ValueError("coordinate vector has wrong length")
            if any(vec):
                vals[(str(x), int(j))] = vec
        self.values = vals

    @staticmethod
    def zero():
        return Eigenvalues(0, {})

    @staticmethod
    def rational(values):
        """Eigenvalues with plain rational entries {(x, j): value}."""
        return Eigenvalues(0, {k: (v,) for k, v in values.items()})

    def vector(self, x, j):
        return self.values.get((str(x), j), (Fraction(0),) * (self.basis_dim + 1))

    def degree(self, gamma, kappa, points=None):
        """deg_{kappa,zeta} gamma as a coordinate vector of rationals."""
        kappa = _fraction(kappa)
        if isinstance(gamma, ParClass):
            items = [(x, f) for x, f in gamma.flags.items()]
            d = gamma.d
        else:
            r, flags, d = gamma
            items = list(zip(points, flags))
        coords = [Fraction(0)] * (self.basis_dim + 1)
        coords[0] = kappa * d
        for x, jumps in items:
            for j, mult in enumerate(jumps, start=1):
                if mult:
                    vec = self.vector(x, j)
                    for k in range(self.basis_dim + 1):
                        coords[k] += vec[k] * mult
        return tuple(coords)

    def norm(self):
        """sum over points of the max sup-norm of any level's coordinates."""
        per_point = {}
        for (x, _), vec in self.values.items():
            m = max(abs(c) for c in vec)
            per_point[x] = max(per_point.get(x, Fraction(0)), m)
        return sum(per_point.values(), Fraction(0))

    def is_nonresonant(self):
        """No two eigenvalues at a point differ by a nonzero integer."""
        by_point = {}
        for (x, _), vec in self.values.items():
            by_point.setdefault(x, []).append(vec)
        zero = (Fraction(0),) * (self.basis_dim + 1)
        for vecs in by_point.values():
            vecs = vecs + [zero]
            for i, v in enumerate(vecs):
                for w in vecs[i + 1:]:
                    diff = tuple(a - b for a, b in zip(v, w))
                    if any(diff[1:]):
                        continue
                    if diff[0] != 0 and diff[0].denominator == 1:
                        return False
        return True

    def to_json(self):
        out = {}
        for (x, j), vec in sorted(self.values.items()):
            out.setdefault(x, {})[str(j)] = [str(c) for c in vec]
        return {"basis_dim": self.basis_dim, "values": out}

    @staticmethod
    def from_json(obj):
        values = {}
        for x, levels in obj.get("values", {}).items():
            for j, vec in levels.items():
                values[(x, int(j))] = tuple(_fraction(c) for c in vec)
        return Eigenvalues(int(obj.get("basis_dim", 0)), values)


def nonresonant_check(zeta):
    return zeta.is_nonresonant()


class Weights:
    """A stability datum (kappa, sigma) plus the curve genus and |D|.

    sigma is declared on finitely many levels per point; beyond the declared
    levels it continues with the last declared value, which keeps the
    monotone sequences of the stability condition finitely described.
    """

    __slots__ = ("kappa", "sigma", "genus", "num_points")

    def __init__(self, kappa=1, sigma=None, genus=0, num_points=None):
        self.kappa = _fraction(kappa)
        if self.kappa < 0:
            raise InvalidWeights("kappa must be >= 0")
        self.genus = genus
        self.num_points = num_points
        sig = {}
        for (x, j), v in (sigma or {}).items():
            v = _fraction(v)
            if v:
                sig.setdefault(str(x), {})[int(j)] = v
        for x, levels in sig.items():
            if min(levels) < 1:
                raise InvalidWeights("sigma levels start at 1")
        self.sigma = sig

    def sigma_at(self, x, j):
        levels = self.sigma.get(str(x))
        if not levels:
            return Fraction(0)
        declared = [k for k in levels if k <= j]
        if j in levels:
            return levels[j]
        below = [k for k in levels if k < j]
        if j > max(levels):
            return levels[max(levels)]
        return levels[max(below)] if below else Fraction(0)

    def _profiles(self):
        for x, levels in self.sigma.items():
            top = max(levels)
            yield x, [self.sigma_at(x, j) for j in range(1, top + 1)]

    def check_stab(self):
        """Monotone per point and bounded by the first weight plus one."""
        for x, prof in self._profiles():
            for a, b in zip(prof, prof[1:]):
                if a > b:
                    raise InvalidWeights(f"sigma not monotone at {x}")
            if prof and prof[-1] > prof[0] + 1:
                raise InvalidWeights(f"sigma range exceeds 1 at {x}")

    def check_stab_prime(self):
        for x, prof in self._profiles():
            for a, b in zip(prof, prof[1:]):
                if a > b:
                    raise InvalidWeights(f"sigma not monotone at {x}")

    def sigma_norm(self):
        """sum over points of (sup_j sigma_{x,j} - sigma_{x,1})."""
        total = Fraction(0)
        for _, prof in self._profiles():
            total += max(prof) - prof[0]
        return total

    def degree(self, gamma, kappa=None, points=None):
        kappa = self.kappa if kappa is None else _fraction(kappa)
        if isinstance(gamma, ParClass):
            items = list(gamma.flags.items())
            d = gamma.d
        else:
            r, flags, d = gamma
            items = list(zip(points, flags))
        total = kappa * d
        for x, jumps in items:
            for j, mult in enumerate(jumps, start=1):
                if mult:
                    total += self.sigma_at(x, j) * mult
        return total

    def delta(self, num_points):
        return max(2 * self.genus - 2 + num_points, 0)

    def to_json(self):
        return {"kappa": str(self.kappa), "genus": self.genus,
                "sigma": {x: {str(j): str(v) for j, v in sorted(levels.items())}
                          for x, levels in sorted(self.sigma.items())}}

    @staticmethod
    def from_json(obj):
        sigma = {}
        for x, levels in obj.get("sigma", {}).items():
            for j, v in levels.items():
                sigma[(x, int(j))] = _fraction(v)
        return Weights(kappa=_fraction(obj.get("kappa", 1)), sigma=sigma,
                       genus=int(obj.get("genus", 0)),
                       num_points=obj.get("num_points"))


class GlobalFactorTable:
    """Per-partition global degree series; genus zero generates hook kernels."""

    def __init__(self, genus=0, entries=None):
        self.genus = genus
        self.entries = dict(entries or {})

    @staticmethod
    def genus_zero():
        return GlobalFactorTable(0, {})

    def entry(self, lam, dmax):
        if self.genus == 0 and lam not in self.entries:
            return hook_kernel_series(lam, dmax)
        try:
            ser = self.entries[lam]
        except KeyError:
            raise MissingTableEntry(f"no global factor for {lam}") from None
        if ser.trunc_depth < dmax:
            raise MissingTableEntry(
                f"table entry for {lam} truncated at {ser.trunc_depth} < {dmax}")
        return ZSeries(dict(ser.coeffs), dmax)

    def to_json(self):
        return {"genus": self.genus,
                "entries": [{"lambda": serialize_partition(lam),
                             "series": ser.to_json()}
                            for lam, ser in sorted(self.entries.items())]}

    @staticmethod
    def from_json(obj):
        entries = {}
        for item in obj.get("entries", []):
            entries[parse_partition(item["lambda"])] = ZSeries.from_json(item["series"])
        return GlobalFactorTable(int(obj.get("genus", 0)), entries)


# ---------------------------------------------------------------------------
# generating series
# ---------------------------------------------------------------------------

def pair_nilp_series(lam, trunc, table=None):
    """Graded class of nilpotent pairs of generic type lam, nonpositive bundles."""
    table = table or GlobalFactorTable.genus_zero()
    kernel = table.entry(lam, -trunc.deg_min)
    return embed_macdonald_term(lam, trunc, kernel=kernel)


def pair_nilp_total(trunc, table=None):
    total = ParSeries.one(trunc) if False else ParSeries.zero(trunc)
    for lam in partitions_up_to(trunc.rank_max):
        total = total + pair_nilp_series(lam, trunc, table)
    return total


def pair_series(trunc, table=None):
    """All parabolic pairs: the plethystic power with exponent q."""
    return pair_nilp_total(trunc, table).pow_pleth(MotScalar.q())


_DT_CACHE = {}


def dt_series(trunc, table=None):
    """The DT invariants B_gamma as a ParSeries: q * Log of the nilpotent sum."""
    cache_key = (trunc, id(table) if table is not None else 0)
    hit = _DT_CACHE.get(cache_key)
    if hit is not None:
        return hit
    b = pair_nilp_total(trunc, table).log_pleth().scale(MotScalar.q())
    _DT_CACHE[cache_key] = b
    return b


def dt_invariants(trunc, table=None):
    """Map gamma -> B_gamma over the window; B_0 = 0 and is omitted."""
    return dict(dt_series(trunc, table).terms)


# ---------------------------------------------------------------------------
# moduli classes
# ---------------------------------------------------------------------------

def _smallest_integer_above(x):
    x = Fraction(x)
    return x.numerator // x.denominator + 1


def class_by_definition(gamma, predicate, table=None, genus=0):
    """q^chi(gamma) times the e_gamma coefficient of Exp of the restricted DT sum.

    gamma must have d <= 0; the predicate cuts the submonoid of the defining
    formula and must hold at gamma itself.
    """
    if gamma.r == 0:
        return MotScalar.one()
    if gamma.d > 0:
        raise ValueError("defining formula needs d <= 0")
    trunc = Truncation(gamma.points, gamma.r, max(gamma.depth(), 1), gamma.d)
    b = dt_series(trunc, table)
    restricted = b.restrict(lambda key: predicate(key, trunc.points))
    coeff = restricted.exp_pleth().coefficient(gamma.key(trunc))
    return MotScalar.q(chi(gamma, genus)) * coeff


def higgs_ss_class(gamma, zeta, weights, table=None, n_override=None):
    """Motivic class of the semistable parabolic Higgs stack at gamma.

    Zero when the zeta-obstruction deg_{0,zeta} gamma != 0 holds; otherwise
    the degree is shifted down by N * rank into the stable regime and the
    class is read off the restricted plethystic exponential.
    """
    weights.check_stab()
    points = gamma.points
    if not points:
        raise InvalidWeights("at least one marked point is required")
    if gamma.r == 0:
        return MotScalar.one()
    table = table or GlobalFactorTable.genus_zero()
    genus = table.genus
    if any(zeta.degree(gamma, 0)):
        return MotScalar.zero()
    r = gamma.r
    delta = max(2 * genus - 2 + len(points), 0)
    bound = weights.sigma_norm() + Fraction(r - 1, 2) * delta + Fraction(gamma.d, r)
    n = n_override if n_override is not None else _smallest_integer_above(bound)
    shifted = gamma.shift(-n * r)
    tau = Fraction(weights.degree(gamma, kappa=1), r) - n

    def predicate(key, points):
        kr = key[0]
        return (not any(zeta.degree(key, 0, points))
                and weights.degree(key, kappa=1, points=points) == tau * kr)

    return class_by_definition(shifted, predicate, table, genus)


def conn_class(gamma, zeta, table=None, n_override=None):
    """Motivic class of the stack of parabolic connections at gamma."""
    points = gamma.points
    if not points:
        raise InvalidWeights("at least one marked point is required")
    if gamma.r == 0:
        return MotScalar.one()
    table = table or GlobalFactorTable.genus_zero()
    genus = table.genus
    if any(zeta.degree(gamma, 1)):
        return MotScalar.zero()
    r = gamma.r
    delta = max(2 * genus - 2 + len(points), 0)
    bound = 2 * zeta.norm() + Fraction(r - 1, 2) * delta + Fraction(gamma.d, r)
    n = n_override if n_override is not None else _smallest_integer_above(bound)
    shifted = gamma.shift(-n * r)
    # the shifted class has (1,zeta)-slope -n
    def predicate(key, points):
        target = list(zeta.degree(key, 1, points))
        target[0] += n * key[0]
        return not any(target)

    return class_by_definition(shifted, predicate, table, genus)


def _normalize_kappa(weights):
    """Scale (kappa, sigma) so kappa is 0 or 1; slopes are scale-invariant."""
    if weights.kappa == 0 or weights.kappa == 1:
        return weights
    k = weights.kappa
    sigma = {(x, j): v / k for x, levels in weights.sigma.items()
             for j, v in levels.items()}
    return Weights(kappa=1, sigma=sigma, genus=weights.genus,
                   num_points=weights.num_points)


def _check_conn_ss_hypotheses(zeta, weights):
    weights = _normalize_kappa(weights)
    weights.check_stab_prime()
    if zeta.is_nonresonant():
        return weights
    if weights.kappa == 1:
        try:
            weights.check_stab()
        except InvalidWeights as exc:
            raise ResonantWithBadWeights(str(exc)) from None
        return weights
    # kappa = 0 with resonant zeta: only constant per-point sigma survives
    for x, levels in weights.sigma.items():
        if len(set(levels.values())) > 1:
            raise ResonantWithBadWeights(
                f"resonant eigenvalues need constant sigma at {x} when kappa=0")
    return weights


def conn_ss_class(gamma, zeta, weights, table=None, n_override=None):
    """Motivic class of the semistable-connection stack at gamma."""
    weights = _check_conn_ss_hypotheses(zeta, weights)
    points = gamma.points
    if not points:
        raise InvalidWeights("at least one marked point is required")
    if gamma.r == 0:
        return MotScalar.one()
    table = table or GlobalFactorTable.genus_zero()
    genus = table.genus
    if any(zeta.degree(gamma, 1)):
        return MotScalar.zero()
    r = gamma.r
    delta = max(2 * genus - 2 + len(points), 0)
    bound = 3 * zeta.norm() + Fraction(r - 1, 2) * delta
    n = n_override if n_override is not None else _smallest_integer_above(bound)
    shifted = gamma.shift(-n * r)
    tau2 = Fraction(weights.degree(gamma), r) - weights.kappa * n

    def predicate(key, points):
        kr = key[0]
        target = list(zeta.degree(key, 1, points))
        target[0] += n * kr
        if any(target):
            return False
        return weights.degree(key, points=points) == tau2 * kr

    return class_by_definition(shifted, predicate, table, genus)


# ---------------------------------------------------------------------------
# slope factorization
# ---------------------------------------------------------------------------

def ks_factor(total, weights):
    """Factor a constant-term-1 series into per-slope factors.

    Returns {slope: ParSeries}; each factor has constant term 1, is supported
    on classes of that (1,sigma)-slope, and their product is the input.  The
    factors are found by peeling ranks upwards: a rank-r coefficient of a
    factor is the corresponding coefficient of the input minus the products
    of lower-rank factor terms.
    """
    if not total.constant_term().is_one():
        raise NonUnitConstant("slope factorization needs constant term 1")
    trunc = total.trunc
    slopes = {}
    for g in total.terms:
        if g[0]:
            slopes.setdefault(
                Fraction(weights.degree(g, kappa=1, points=trunc.points), g[0]),
                []).append(g)
    factors = {tau: ParSeries.one(trunc) for tau in slopes}
    for r in range(1, trunc.rank_max + 1):
        product = ParSeries.one(trunc)
        for f in factors.values():
            product = product * f
        for tau, keys in slopes.items():
            additions = {}
            for g in keys:
                if g[0] != r:
                    continue
                c = total.coefficient(g) - product.coefficient(g)
                if not c.is_zero():
                    additions[g] = c
            if additions:
                factors[tau] = factors[tau] + ParSeries(trunc, additions)
    return factors
