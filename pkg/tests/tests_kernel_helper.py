"""Shared construction of the two-marked-point kernel generator."""

from parhiggs.coeffring import MotScalar
from parhiggs.gammaring import ParSeries


def two_point_generator(trunc):
    """w * sum_{j,j'} w_{0,j} w_{inf,j'} / ((q-1)(1-z^-1)) as a ParSeries."""
    inv1 = MotScalar.inv_cyclo(1)
    terms = {}
    for j in range(trunc.depth_max):
        for jp in range(trunc.depth_max):
            for d in range(trunc.deg_min, 1):
                f0 = tuple(1 if jj == j else 0 for jj in range(trunc.depth_max))
                f1 = tuple(1 if jj == jp else 0 for jj in range(trunc.depth_max))
                terms[(1, (f0, f1), d)] = inv1
    return ParSeries(trunc, terms)
