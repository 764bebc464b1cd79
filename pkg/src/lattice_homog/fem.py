"""Linear static 2D Timoshenko frame solver.

Three DOFs per FE node (ux, uy, theta).  The element stiffness is the
exact shear-flexible matrix, so one element per prismatic segment is exact
for loads applied at nodes.  Boundary conditions are kinematically uniform
(affine): boundary hubs get u = eps.x relative to the box center, rotations
stay free.  Prescribed DOFs are eliminated by partitioning, never by
penalty, so constraints hold exactly and the energy bookkeeping is clean.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.io import mmwrite
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import eigsh, splu

from . import kernels
from .errors import DisconnectedMesh, NoBoundary, SingularSystem, ZeroLength
from .meshbuild import BeamMesh, Material, SectionProfile

RESIDUAL_RTOL = 1e-8


def element_stiffness(p_i, p_j, section: SectionProfile,
                      material: Material) -> np.ndarray:
    """6x6 global stiffness of one Timoshenko segment."""
    p_i = np.asarray(p_i, dtype=float)
    p_j = np.asarray(p_j, dtype=float)
    length = float(np.hypot(*(p_j - p_i)))
    if length <= 1e-9:
        raise ZeroLength(f"segment endpoints coincide (L={length:g} mm)")
    k = kernels.element_matrices(
        p_i[None, :], p_j[None, :],
        np.array([section.area]), np.array([section.second_moment]),
        np.array([section.shear_correction]),
        material.young_modulus, material.shear_modulus)
    return k[0]


@dataclass
class LinearSystem:
    """Assembled global stiffness with a per-boundary-set solver cache."""

    matrix: csr_matrix
    mesh: BeamMesh
    _solvers: dict = field(default_factory=dict, repr=False)

    @property
    def n_dofs(self) -> int:
        return int(self.matrix.shape[0])

    def solver(self, free_idx: np.ndarray):
        """LU factorization of K_ff, cached on the free-DOF set."""
        key = free_idx.tobytes()
        if key not in self._solvers:
            kff = self.matrix[free_idx][:, free_idx].tocsc()
            try:
                self._solvers[key] = splu(kff)
            except RuntimeError as ex:
                raise SingularSystem(
                    f"factorization of the constrained system failed: {ex}; "
                    "the mesh likely has an unconstrained mechanism") from ex
        return self._solvers[key]


@dataclass(frozen=True)
class ConstrainedSystem:
    system: LinearSystem
    prescribed_idx: np.ndarray
    prescribed_val: np.ndarray
    free_idx: np.ndarray


@dataclass(frozen=True)
class Solution:
    """Displacements/rotations per DOF and total elastic strain energy."""

    u: np.ndarray          # (3m,) mm / rad
    energy: float          # N.mm
    reactions: np.ndarray  # forces at prescribed DOFs, N / N.mm
    residual: float

    def reaction_energy(self, csys: ConstrainedSystem) -> float:
        """1/2 sum f.u over prescribed DOFs; equals ``energy`` in exact
        arithmetic."""
        return 0.5 * float(self.reactions @ self.u[csys.prescribed_idx])


def assemble(mesh: BeamMesh) -> LinearSystem:
    """Scatter exact element matrices into the global sparse stiffness."""
    lengths = mesh.segment_lengths()
    if np.any(lengths <= 1e-9):
        raise ZeroLength("mesh contains a zero-length segment")
    n = mesh.n_fe_nodes
    adj = csr_matrix(
        (np.ones(mesh.n_segments), (mesh.seg_nodes[:, 0], mesh.seg_nodes[:, 1])),
        (n, n))
    ncomp, _ = connected_components(adj, directed=False)
    if ncomp > 1:
        raise DisconnectedMesh(f"mesh has {ncomp} connected components")

    area, inertia, kappa = mesh.segment_sections()
    kmats = kernels.element_matrices(
        mesh.fe_nodes[mesh.seg_nodes[:, 0]], mesh.fe_nodes[mesh.seg_nodes[:, 1]],
        area, inertia, kappa,
        mesh.material.young_modulus, mesh.material.shear_modulus)

    dofs = np.empty((mesh.n_segments, 6), dtype=np.int64)
    dofs[:, 0:3] = 3 * mesh.seg_nodes[:, 0:1] + np.arange(3)
    dofs[:, 3:6] = 3 * mesh.seg_nodes[:, 1:2] + np.arange(3)
    rows = np.repeat(dofs, 6, axis=1).ravel()
    cols = np.tile(dofs, (1, 6)).ravel()
    k = coo_matrix((kmats.ravel(), (rows, cols)), (3 * n, 3 * n)).tocsr()
    k = 0.5 * (k + k.T)  # exact-symmetrize fp rounding from the rotations
    return LinearSystem(matrix=k.tocsr(), mesh=mesh)


def _strain_components(strain) -> tuple[float, float, float]:
    if hasattr(strain, "eps11"):
        return float(strain.eps11), float(strain.eps22), float(strain.eps12)
    e11, e22, e12 = strain
    return float(e11), float(e22), float(e12)


def apply_affine_bc(sys: LinearSystem, mesh: BeamMesh,
                    strain) -> ConstrainedSystem:
    """Prescribe u = eps.x at every boundary hub (rotations free).

    ``strain`` carries tensor components (eps11, eps22, eps12); positions
    are relative to the bounding-box center, which is the mesh origin.
    """
    e11, e22, e12 = _strain_components(strain)
    if not all(np.isfinite(v) for v in (e11, e22, e12)):
        raise ValueError("macroscopic strain must be finite")
    hubs = mesh.boundary_hubs
    if len(hubs) == 0:
        raise NoBoundary("mesh has no boundary hubs to constrain")
    x = mesh.fe_nodes[hubs, 0]
    y = mesh.fe_nodes[hubs, 1]
    idx = np.empty(2 * len(hubs), dtype=np.int64)
    val = np.empty(2 * len(hubs))
    idx[0::2] = 3 * hubs
    idx[1::2] = 3 * hubs + 1
    val[0::2] = e11 * x + e12 * y
    val[1::2] = e12 * x + e22 * y
    order = np.argsort(idx)
    idx, val = idx[order], val[order]
    free = np.setdiff1d(np.arange(sys.n_dofs), idx, assume_unique=True)
    return ConstrainedSystem(system=sys, prescribed_idx=idx,
                             prescribed_val=val, free_idx=free)


def face_masks(mesh: BeamMesh) -> dict[str, np.ndarray]:
    """Boundary hubs grouped by the nearest bounding-box face.

    Hubs (near-)equidistant to two faces belong to both, so box corners
    collect the constraints of both adjoining faces.
    """
    hubs = mesh.boundary_hubs
    if len(hubs) == 0:
        raise NoBoundary("mesh has no boundary hubs to constrain")
    half_w, half_h = mesh.bbox[0] / 2.0, mesh.bbox[1] / 2.0
    x = mesh.fe_nodes[hubs, 0]
    y = mesh.fe_nodes[hubs, 1]
    dist = np.column_stack([half_w + x, half_w - x, half_h + y, half_h - y])
    tol = 1e-9 * max(half_w, half_h)
    near = dist <= dist.min(axis=1)[:, None] + tol
    return {"left": near[:, 0], "right": near[:, 1],
            "bottom": near[:, 2], "top": near[:, 3]}


def apply_load_case_bc(sys: LinearSystem, mesh: BeamMesh, case: str,
                       s: float) -> ConstrainedSystem:
    """Roller-type boundary conditions of the four canonical load cases.

    Per face only the driven displacement component is prescribed and the
    tangential one stays free, matching the symmetric-quarter roller setup
    the energy formulas assume:

    * case a: ux = s.x on left/right, uy = 0 on top/bottom
    * case b: ux = 0 on left/right, uy = s.y on top/bottom
    * case c: uy = s.x on left/right, ux = s.y on top/bottom
    * case d: ux = s.x on left/right, uy = s.y on top/bottom

    The roller form leaves tangential slip on each face free, so it does
    not force-stretch angled boundary chains the way full clamping does;
    the price is that diagonal load paths terminating on a face slide and
    under-report stretching-dominated lattices.  The pipeline default is
    the full-affine form.
    """
    faces = face_masks(mesh)
    hubs = mesh.boundary_hubs
    x = mesh.fe_nodes[hubs, 0]
    y = mesh.fe_nodes[hubs, 1]
    lr = faces["left"] | faces["right"]
    tb = faces["top"] | faces["bottom"]
    if case == "a":
        sides = [(lr, 0, s * x), (tb, 1, np.zeros_like(y))]
    elif case == "b":
        sides = [(lr, 0, np.zeros_like(x)), (tb, 1, s * y)]
    elif case == "c":
        sides = [(lr, 1, s * x), (tb, 0, s * y)]
    elif case == "d":
        sides = [(lr, 0, s * x), (tb, 1, s * y)]
    else:
        raise ValueError(f"load case must be one of a, b, c, d; got {case!r}")
    idx_parts, val_parts = [], []
    for mask, comp, values in sides:
        idx_parts.append(3 * hubs[mask] + comp)
        val_parts.append(values[mask])
    idx = np.concatenate(idx_parts)
    val = np.concatenate(val_parts)
    order = np.argsort(idx)
    idx, val = idx[order], val[order]
    free = np.setdiff1d(np.arange(sys.n_dofs), idx, assume_unique=True)
    return ConstrainedSystem(system=sys, prescribed_idx=idx,
                             prescribed_val=val, free_idx=free)


def solve(csys: ConstrainedSystem) -> Solution:
    """Direct sparse solve of the constrained system."""
    sys = csys.system
    k = sys.matrix
    u = np.zeros(sys.n_dofs)
    u[csys.prescribed_idx] = csys.prescribed_val
    rhs = -(k[csys.free_idx][:, csys.prescribed_idx] @ csys.prescribed_val)
    lu = sys.solver(csys.free_idx)
    uf = lu.solve(rhs)
    if not np.all(np.isfinite(uf)):
        raise SingularSystem(
            "solver produced non-finite displacements; the constrained "
            "system is singular (check for floating parts or mechanisms)")
    u[csys.free_idx] = uf

    ku = k @ u
    reactions = ku[csys.prescribed_idx]
    fnorm = float(np.linalg.norm(reactions))
    residual = float(np.linalg.norm(ku[csys.free_idx]))
    if residual > RESIDUAL_RTOL * max(fnorm, 1e-30):
        raise SingularSystem(
            f"solution residual {residual:.3e} exceeds "
            f"{RESIDUAL_RTOL:g} * |f| = {RESIDUAL_RTOL * fnorm:.3e}")
    energy = 0.5 * float(u @ ku)
    return Solution(u=u, energy=energy, reactions=reactions,
                    residual=residual)


def strain_energy_density(sol: Solution, mesh: BeamMesh) -> float:
    """Energy per unit bounding-box volume, in MPa (N.mm / mm^3)."""
    width, height = mesh.bbox
    return sol.energy / (width * height * mesh.depth)


def smallest_eigenvalues(sys: LinearSystem, k: int = 6) -> np.ndarray:
    """The k algebraically smallest eigenvalues of the unconstrained K.

    A connected free-floating frame must show exactly three near-zero
    values (two translations, one rotation) and nothing negative.
    """
    scale = float(sys.matrix.diagonal().mean())
    vals = eigsh(sys.matrix, k=k, sigma=-1e-3 * scale,
                 return_eigenvectors=False)
    return np.sort(vals)


def dump_matrix(sys: LinearSystem, path) -> None:
    """Global stiffness in Matrix Market coordinate format."""
    mmwrite(str(path), sys.matrix.tocoo(), symmetry="symmetric")


def dump_solution(sol: Solution, mesh: BeamMesh, path) -> None:
    """Solution as CSV rows (node, x, y, ux, uy, theta)."""
    with open(path, "w", newline="") as fh:
        fh.write("node,x,y,ux,uy,theta\n")
        for n in range(mesh.n_fe_nodes):
            x, y = mesh.fe_nodes[n]
            ux, uy, th = sol.u[3 * n:3 * n + 3]
            fh.write(f"{n},{x!r},{y!r},{ux!r},{uy!r},{th!r}\n")
