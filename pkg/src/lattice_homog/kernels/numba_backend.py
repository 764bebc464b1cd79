"""Numba-JIT implementation of the beam element kernels.

Same contract as :mod:`.numpy_backend`; the per-segment loop is compiled,
which wins once meshes reach a few thousand segments (see
``benchmarks/bench_kernels.py``).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _element_matrices(xy_i, xy_j, area, inertia, kappa, young, shear, out):
    n = xy_i.shape[0]
    for e in range(n):
        dx = xy_j[e, 0] - xy_i[e, 0]
        dy = xy_j[e, 1] - xy_i[e, 1]
        length = math.sqrt(dx * dx + dy * dy)
        c = dx / length
        s = dy / length

        ax = young * area[e] / length
        phi = 12.0 * young * inertia[e] / (kappa[e] * shear * area[e] * length * length)
        b = young * inertia[e] / (length ** 3 * (1.0 + phi))
        b12 = 12.0 * b
        b6l = 6.0 * b * length
        b4 = (4.0 + phi) * b * length * length
        b2 = (2.0 - phi) * b * length * length

        kl = np.zeros((6, 6))
        kl[0, 0] = kl[3, 3] = ax
        kl[0, 3] = kl[3, 0] = -ax
        kl[1, 1] = kl[4, 4] = b12
        kl[1, 4] = kl[4, 1] = -b12
        kl[1, 2] = kl[2, 1] = kl[1, 5] = kl[5, 1] = b6l
        kl[2, 4] = kl[4, 2] = kl[4, 5] = kl[5, 4] = -b6l
        kl[2, 2] = kl[5, 5] = b4
        kl[2, 5] = kl[5, 2] = b2

        t = np.zeros((6, 6))
        t[0, 0] = t[1, 1] = t[3, 3] = t[4, 4] = c
        t[0, 1] = t[3, 4] = s
        t[1, 0] = t[4, 3] = -s
        t[2, 2] = t[5, 5] = 1.0

        out[e] = t.T @ kl @ t
    return out


def element_matrices(xy_i, xy_j, area, inertia, kappa, young, shear):
    out = np.empty((xy_i.shape[0], 6, 6))
    return _element_matrices(
        np.ascontiguousarray(xy_i), np.ascontiguousarray(xy_j),
        np.ascontiguousarray(area, dtype=np.float64),
        np.ascontiguousarray(inertia, dtype=np.float64),
        np.ascontiguousarray(kappa, dtype=np.float64),
        float(young), float(shear), out)
