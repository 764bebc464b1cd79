"""Strain-energy homogenization: four affine load cases to elastic constants.

Four prescribed macroscopic strain states (uniaxial X, uniaxial Y, pure
shear, equibiaxial) are solved on the same mesh; the stored energy
densities give the orthotropic stiffness coefficients

    c1111 = 2 SE_a / e11^2          c2222 = 2 SE_b / e22^2
    c1212 = SE_c / (2 e12^2)        c1122 = (SE_d - SE_a - SE_b) / (e11 e22)

and from those the engineering constants

    E1 = c1111 - c1122^2 / c2222    E2 = c2222 - c1122^2 / c1111
    G12 = c1212                     nu12 = c1122 / c2222
    nu21 = c1122 / c1111

Shear is parameterized by the tensor component e12 (engineering shear
gamma = 2 e12).  The energy is normalized by the full bounding-box volume,
voids included, consistent with an effective-medium definition.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from . import fem
from .catalog import topology_by_code
from .errors import NotOrthotropic, NotPositiveDefinite
from .meshbuild import BeamMesh, Material, build_beam_mesh, case_by_id
from .tiling import generate_tiling

LOAD_CASES = ("a", "b", "c", "d")

# Linear-regime sanity bound on any prescribed strain component.
MAX_STRAIN = 0.1


@dataclass(frozen=True)
class MacroStrain:
    """Macroscopic strain; eps12 is the tensor shear component."""

    eps11: float = 0.0
    eps22: float = 0.0
    eps12: float = 0.0

    def __post_init__(self):
        comps = (self.eps11, self.eps22, self.eps12)
        if not all(np.isfinite(c) for c in comps):
            raise ValueError("strain components must be finite")
        if max(abs(c) for c in comps) > MAX_STRAIN:
            raise ValueError(
                f"strain magnitude exceeds the linear-regime bound {MAX_STRAIN}")


@dataclass(frozen=True)
class EnergyDensities:
    """Strain-energy densities (MPa) of the four load cases."""

    se_a: float
    se_b: float
    se_c: float
    se_d: float
    eps11: float
    eps22: float
    eps12: float


@dataclass(frozen=True)
class StiffnessTensorH:
    """Homogenized orthotropic stiffness coefficients (MPa)."""

    c1111: float
    c2222: float
    c1122: float
    c1212: float


@dataclass(frozen=True)
class MacroStress:
    sigma11: float
    sigma22: float
    sigma12: float


@dataclass(frozen=True)
class EngineeringConstants:
    e1: float
    e2: float
    g12: float
    nu12: float
    nu21: float


def load_case_strain(case: str, s: float) -> MacroStrain:
    """Prescribed strain for load case a|b|c|d at magnitude ``s``.

    The biaxial case d reuses the exact magnitudes of cases a and b, which
    the c1122 formula requires.
    """
    if not 0.0 < s <= MAX_STRAIN:
        raise ValueError(f"strain magnitude must lie in (0, {MAX_STRAIN}]")
    if case == "a":
        return MacroStrain(eps11=s)
    if case == "b":
        return MacroStrain(eps22=s)
    if case == "c":
        return MacroStrain(eps12=s)
    if case == "d":
        return MacroStrain(eps11=s, eps22=s)
    raise ValueError(f"load case must be one of {LOAD_CASES}, got {case!r}")


def run_load_cases(mesh: BeamMesh, s: float,
                   system: fem.LinearSystem | None = None,
                   bc: str = "affine") -> EnergyDensities:
    """Solve the four load cases on one mesh.

    ``bc`` selects the boundary realization: ``affine`` (default, and the
    canonical choice) prescribes u = eps.x at every perimeter hub;
    ``mixed`` prescribes only the driven component per box face with
    tangential rollers.  Since the prescribed-DOF set is shared across
    cases, the four solves reuse one cached factorization.
    """
    sys_ = system if system is not None else fem.assemble(mesh)
    se = {}
    for case in LOAD_CASES:
        strain = load_case_strain(case, s)
        if bc == "affine":
            csys = fem.apply_affine_bc(sys_, mesh, strain)
        elif bc == "mixed":
            csys = fem.apply_load_case_bc(sys_, mesh, case, s)
        else:
            raise ValueError(f"bc must be 'affine' or 'mixed', got {bc!r}")
        sol = fem.solve(csys)
        se[case] = fem.strain_energy_density(sol, mesh)
    return EnergyDensities(se_a=se["a"], se_b=se["b"], se_c=se["c"],
                           se_d=se["d"], eps11=s, eps22=s, eps12=s)


def stiffness_tensor(ed: EnergyDensities) -> StiffnessTensorH:
    """Energy densities to stiffness coefficients."""
    c1111 = 2.0 * ed.se_a / ed.eps11 ** 2
    c2222 = 2.0 * ed.se_b / ed.eps22 ** 2
    c1212 = ed.se_c / (2.0 * ed.eps12 ** 2)
    c1122 = (ed.se_d - ed.se_a - ed.se_b) / (ed.eps11 * ed.eps22)
    tensor = StiffnessTensorH(c1111=c1111, c2222=c2222, c1122=c1122,
                              c1212=c1212)
    _check_positive_definite(tensor)
    return tensor


def _check_positive_definite(c: StiffnessTensorH) -> None:
    if not (c.c1111 > 0.0 and c.c2222 > 0.0 and c.c1212 > 0.0
            and c.c1111 * c.c2222 - c.c1122 ** 2 > 0.0):
        raise NotPositiveDefinite(
            f"homogenized tensor is not positive definite: {c}; "
            "this signals a bad mesh or boundary conditions")


def macro_stress(c: StiffnessTensorH, strain: MacroStrain) -> MacroStress:
    """Orthotropic stress-strain relation (engineering shear 2*eps12)."""
    return MacroStress(
        sigma11=c.c1111 * strain.eps11 + c.c1122 * strain.eps22,
        sigma22=c.c1122 * strain.eps11 + c.c2222 * strain.eps22,
        sigma12=c.c1212 * (2.0 * strain.eps12),
    )


def engineering_constants(c: StiffnessTensorH) -> EngineeringConstants:
    """Young's moduli, shear modulus and Poisson's ratios from the tensor."""
    return EngineeringConstants(
        e1=c.c1111 - c.c1122 ** 2 / c.c2222,
        e2=c.c2222 - c.c1122 ** 2 / c.c1111,
        g12=c.c1212,
        nu12=c.c1122 / c.c2222,
        nu21=c.c1122 / c.c1111,
    )


@dataclass(frozen=True)
class ResultRecord:
    """One homogenization outcome, keyed by topology/size/case/strain."""

    topology: str
    size: float            # square bbox side, mm
    case: str
    strain: float
    c1111: float
    c2222: float
    c1122: float
    c1212: float
    e1: float
    e2: float
    g12: float
    nu12: float
    nu21: float
    dof_count: int
    solve_seconds: float

    CSV_FIELDS = ("topology", "size_mm", "case", "strain",
                  "c1111_mpa", "c2222_mpa", "c1122_mpa", "c1212_mpa",
                  "e1_mpa", "e2_mpa", "g12_mpa", "nu12", "nu21", "dof_count")

    @property
    def key(self) -> tuple:
        return (self.topology, self.size, self.case, self.strain)

    @property
    def e_mean(self) -> float:
        return 0.5 * (self.e1 + self.e2)

    def csv_row(self) -> str:
        vals = (self.topology, _fmt(self.size), self.case, _fmt(self.strain),
                _fmt(self.c1111), _fmt(self.c2222), _fmt(self.c1122),
                _fmt(self.c1212), _fmt(self.e1), _fmt(self.e2),
                _fmt(self.g12), _fmt(self.nu12), _fmt(self.nu21),
                str(self.dof_count))
        return ",".join(vals)

    def to_json_dict(self) -> dict:
        return {
            "topology": self.topology,
            "size_mm": self.size,
            "case": self.case,
            "strain": self.strain,
            "c1111_mpa": self.c1111, "c2222_mpa": self.c2222,
            "c1122_mpa": self.c1122, "c1212_mpa": self.c1212,
            "e1_mpa": self.e1, "e2_mpa": self.e2, "g12_mpa": self.g12,
            "nu12": self.nu12, "nu21": self.nu21,
            "dof_count": self.dof_count,
            "solve_seconds": self.solve_seconds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _fmt(x: float) -> str:
    """Fixed shortest-roundtrip float formatting for reproducible files."""
    return repr(float(x))


def homogenize(topology, size, case, s: float = 0.01,
               material: Material | None = None, depth: float = 5.0,
               edge_length: float = 50.0, bc: str = "affine") -> ResultRecord:
    """Full chain: tiling -> beam mesh -> four solves -> constants."""
    topo = topology_by_code(topology)
    if not topo.orthotropic_rve:
        raise NotOrthotropic(
            f"{topo.code} occurs in two enantiomorphic forms and has no "
            "reflective symmetry, so the strain-energy method's orthotropic "
            "stress-strain form does not apply")
    case = case_by_id(case)
    t0 = time.perf_counter()
    g = generate_tiling(topo, size, edge_length)
    mesh = build_beam_mesh(g, case, material or Material(), depth)
    ed = run_load_cases(mesh, s, bc=bc)
    tensor = stiffness_tensor(ed)
    const = engineering_constants(tensor)
    elapsed = time.perf_counter() - t0
    width, _ = mesh.bbox
    return ResultRecord(
        topology=topo.code, size=float(width), case=case.case_id,
        strain=float(s),
        c1111=tensor.c1111, c2222=tensor.c2222, c1122=tensor.c1122,
        c1212=tensor.c1212,
        e1=const.e1, e2=const.e2, g12=const.g12,
        nu12=const.nu12, nu21=const.nu21,
        dof_count=mesh.n_dofs, solve_seconds=elapsed,
    )
