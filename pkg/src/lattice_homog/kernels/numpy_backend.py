"""Vectorized NumPy implementation of the beam element kernels."""

from __future__ import annotations

import numpy as np


def element_matrices(xy_i: np.ndarray, xy_j: np.ndarray, area: np.ndarray,
                     inertia: np.ndarray, kappa: np.ndarray,
                     young: float, shear: float) -> np.ndarray:
    """Global-frame 6x6 Timoshenko stiffness for a batch of segments.

    DOF order per segment: (ux_i, uy_i, th_i, ux_j, uy_j, th_j).
    Exact shear-flexible matrix; shear parameter phi = 12EI/(kappa G A L^2).
    """
    d = xy_j - xy_i
    length = np.hypot(d[:, 0], d[:, 1])
    n = len(length)
    c = d[:, 0] / length
    s = d[:, 1] / length

    ax = young * area / length
    phi = 12.0 * young * inertia / (kappa * shear * area * length ** 2)
    b = young * inertia / (length ** 3 * (1.0 + phi))
    b12 = 12.0 * b
    b6l = 6.0 * b * length
    b4 = (4.0 + phi) * b * length ** 2
    b2 = (2.0 - phi) * b * length ** 2

    k = np.zeros((n, 6, 6))
    k[:, 0, 0] = k[:, 3, 3] = ax
    k[:, 0, 3] = k[:, 3, 0] = -ax
    k[:, 1, 1] = k[:, 4, 4] = b12
    k[:, 1, 4] = k[:, 4, 1] = -b12
    k[:, 1, 2] = k[:, 2, 1] = k[:, 1, 5] = k[:, 5, 1] = b6l
    k[:, 2, 4] = k[:, 4, 2] = k[:, 4, 5] = k[:, 5, 4] = -b6l
    k[:, 2, 2] = k[:, 5, 5] = b4
    k[:, 2, 5] = k[:, 5, 2] = b2

    t = np.zeros((n, 6, 6))
    t[:, 0, 0] = t[:, 1, 1] = t[:, 3, 3] = t[:, 4, 4] = c
    t[:, 0, 1] = t[:, 3, 4] = s
    t[:, 1, 0] = t[:, 4, 3] = -s
    t[:, 2, 2] = t[:, 5, 5] = 1.0

    return np.einsum("nji,njk,nkl->nil", t, k, t, optimize=True)
