#!/usr/bin/env python3
"""Benchmark the beam element kernels: Numba JIT vs pure NumPy.

Times the batched global-frame element stiffness computation on segment
sets taken from a real mesh (triangular tiling, the largest in the study
matrix), replicated to the requested batch size, and checks that the two
backends agree to machine precision.

Usage:
    python benchmarks/bench_kernels.py [--segments N] [--iters I]

The library picks its backend from LATTICE_HOMOG_BACKEND (auto|numba|numpy);
this script imports both backends directly and times them side by side.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lattice_homog.kernels import numpy_backend
from lattice_homog.meshbuild import ACTUATOR_STIFF, Material, build_beam_mesh
from lattice_homog.tiling import generate_tiling

try:
    from lattice_homog.kernels import numba_backend
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def make_inputs(n_segments: int):
    g = generate_tiling("T", 1500.0, 50.0)
    mesh = build_beam_mesh(g, ACTUATOR_STIFF, Material(), 5.0)
    reps = max(1, -(-n_segments // mesh.n_segments))
    idx = np.tile(np.arange(mesh.n_segments), reps)[:n_segments]
    xy_i = mesh.fe_nodes[mesh.seg_nodes[idx, 0]]
    xy_j = mesh.fe_nodes[mesh.seg_nodes[idx, 1]]
    area, inertia, kappa = (a[idx] for a in mesh.segment_sections())
    m = mesh.material
    return xy_i, xy_j, area, inertia, kappa, m.young_modulus, m.shear_modulus


def bench(fn, inputs, iters: int):
    times = []
    for _ in range(iters):
        t0 = time.perf_counter()
        out = fn(*inputs)
        times.append(time.perf_counter() - t0)
    return out, np.median(times), min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--segments", type=int, default=100_000,
                        help="batch size (default 100000)")
    parser.add_argument("--iters", type=int, default=20,
                        help="timed repetitions (default 20)")
    args = parser.parse_args()

    inputs = make_inputs(args.segments)
    print(f"batch: {args.segments} segments, {args.iters} iterations")

    k_np, med_np, min_np = bench(numpy_backend.element_matrices, inputs,
                                 args.iters)
    rows = [("numpy", med_np, min_np, 1.0)]

    if HAVE_NUMBA:
        t0 = time.perf_counter()
        numba_backend.element_matrices(*inputs)  # JIT warmup
        warmup = time.perf_counter() - t0
        print(f"numba warmup (compile): {warmup:.2f} s")
        k_nb, med_nb, min_nb = bench(numba_backend.element_matrices, inputs,
                                     args.iters)
        rows.append(("numba", med_nb, min_nb, med_np / med_nb))
    else:
        print("numba not importable; timing numpy only")

    print(f"\n{'backend':<8} {'median (ms)':>12} {'min (ms)':>10} {'speedup':>8}")
    for name, med, mn, speedup in rows:
        print(f"{name:<8} {med * 1e3:>12.3f} {mn * 1e3:>10.3f} {speedup:>7.2f}x")

    if HAVE_NUMBA:
        scale = np.abs(k_np).max()
        err = np.abs(k_np - k_nb).max() / scale
        print(f"\nmax |numpy - numba| / max|K|: {err:.2e} "
              f"({'OK' if err < 1e-12 else 'MISMATCH'})")


if __name__ == "__main__":
    main()
