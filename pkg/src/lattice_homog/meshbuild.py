"""FE-ready beam meshes from tiling graphs.

Each tiling edge becomes three collinear Timoshenko segments: a node arm at
each end (quarter of the edge length) and the actuator in the middle (half
the edge length).  Hubs are rigid junctions: all arm ends incident to a
tiling vertex share one FE node, so translations and the rotation are
common.  Stiffness cases change only the section widths, never geometry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGraph
from .tiling import TilingGraph, perimeter_vertices, validate_tiling

ROLE_ARM = 0
ROLE_ACTUATOR = 1
ROLE_NAMES = {ROLE_ARM: "NodeArm", ROLE_ACTUATOR: "Actuator"}

# Shear correction factor for rectangular sections.
KAPPA_RECT = 5.0 / 6.0


@dataclass(frozen=True)
class Material:
    """Linear elastic material; shear modulus follows from E and nu."""

    young_modulus: float = 2000.0   # MPa
    poisson_ratio: float = 0.3

    def __post_init__(self):
        if self.young_modulus <= 0.0:
            raise ValueError("young_modulus must be positive")
        if not -1.0 < self.poisson_ratio < 0.5:
            raise ValueError("poisson_ratio must lie in (-1, 0.5)")

    @property
    def shear_modulus(self) -> float:
        return self.young_modulus / (2.0 * (1.0 + self.poisson_ratio))


@dataclass(frozen=True)
class SectionProfile:
    """Rectangular beam cross-section (in-plane width x out-of-plane depth)."""

    in_plane_width: float   # mm
    out_of_plane_depth: float  # mm
    shear_correction: float = KAPPA_RECT

    @property
    def area(self) -> float:
        return self.in_plane_width * self.out_of_plane_depth

    @property
    def second_moment(self) -> float:
        # In-plane bending: I about the out-of-plane axis.
        return self.out_of_plane_depth * self.in_plane_width ** 3 / 12.0


@dataclass(frozen=True)
class StiffnessCase:
    """Relative actuator/node stiffness, set through section widths (mm)."""

    case_id: str
    actuator_width: float
    node_width: float

    def width_for(self, role: int) -> float:
        return self.actuator_width if role == ROLE_ACTUATOR else self.node_width


ACTUATOR_STIFF = StiffnessCase("actuator-stiff", 5.0, 1.0)
NODE_STIFF = StiffnessCase("node-stiff", 1.0, 5.0)
EQUAL_LOW = StiffnessCase("equal-low", 1.0, 1.0)
EQUAL_HIGH = StiffnessCase("equal-high", 5.0, 5.0)

CASES: tuple[StiffnessCase, ...] = (ACTUATOR_STIFF, NODE_STIFF, EQUAL_LOW,
                                    EQUAL_HIGH)
_CASES_BY_ID = {c.case_id: c for c in CASES}


def case_by_id(case) -> StiffnessCase:
    if isinstance(case, StiffnessCase):
        return case
    try:
        return _CASES_BY_ID[case]
    except KeyError:
        raise ValueError(
            f"unknown stiffness case {case!r}; valid: "
            f"{', '.join(_CASES_BY_ID)}") from None


def section_for(case: StiffnessCase, role: int, depth: float) -> SectionProfile:
    """Section profile for a segment role under a stiffness case."""
    if depth <= 0.0:
        raise ValueError("depth must be positive")
    return SectionProfile(in_plane_width=case_by_id(case).width_for(role),
                          out_of_plane_depth=depth,
                          shear_correction=KAPPA_RECT)


@dataclass(frozen=True)
class BeamMesh:
    """FE beam mesh: nodes, arm/actuator segments, boundary hubs."""

    fe_nodes: np.ndarray        # (m, 2) float64, mm, box-center origin
    seg_nodes: np.ndarray       # (s, 2) int64
    seg_role: np.ndarray        # (s,) int8, ROLE_ARM / ROLE_ACTUATOR
    boundary_hubs: np.ndarray   # sorted hub fe-node indices
    bbox: tuple[float, float]
    depth: float
    material: Material
    case: StiffnessCase
    n_hubs: int                 # first n_hubs fe-nodes are tiling vertices
    n_tiling_edges: int

    @property
    def n_fe_nodes(self) -> int:
        return int(self.fe_nodes.shape[0])

    @property
    def n_segments(self) -> int:
        return int(self.seg_nodes.shape[0])

    @property
    def n_dofs(self) -> int:
        return 3 * self.n_fe_nodes

    def section(self, role: int) -> SectionProfile:
        return section_for(self.case, role, self.depth)

    def segment_sections(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-segment (area, second moment, shear correction) arrays."""
        arm = self.section(ROLE_ARM)
        act = self.section(ROLE_ACTUATOR)
        is_act = self.seg_role == ROLE_ACTUATOR
        area = np.where(is_act, act.area, arm.area)
        inertia = np.where(is_act, act.second_moment, arm.second_moment)
        kappa = np.where(is_act, act.shear_correction, arm.shear_correction)
        return area, inertia, kappa

    def segment_lengths(self) -> np.ndarray:
        d = self.fe_nodes[self.seg_nodes[:, 1]] - self.fe_nodes[self.seg_nodes[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    def to_json_dict(self) -> dict:
        segs = [{"i": int(i), "j": int(j), "role": ROLE_NAMES[int(r)],
                 "width_mm": self.case.width_for(int(r))}
                for (i, j), r in zip(self.seg_nodes, self.seg_role)]
        return {
            "material": {"young_modulus_mpa": self.material.young_modulus,
                         "poisson_ratio": self.material.poisson_ratio,
                         "shear_modulus_mpa": self.material.shear_modulus},
            "depth_mm": self.depth,
            "case": self.case.case_id,
            "fe_nodes": self.fe_nodes.tolist(),
            "segments": segs,
            "boundary_hubs": self.boundary_hubs.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def build_beam_mesh(g: TilingGraph, case, material: Material | None = None,
                    depth: float = 5.0, subdivide: int = 1) -> BeamMesh:
    """Split every tiling edge into arm/actuator/arm segments.

    ``subdivide`` > 1 splits each of the three segments into that many
    equal elements (refinement studies only; the exact Timoshenko stiffness
    needs no subdivision for nodal loading).
    """
    case = case_by_id(case)
    material = material or Material()
    if depth <= 0.0:
        raise ValueError("depth must be positive")
    if subdivide < 1:
        raise ValueError("subdivide must be >= 1")
    report = validate_tiling(g)
    if not report.passed:
        raise InvalidGraph(
            f"tiling graph fails validation: {sorted(report.rules())}",
            report=report)

    nv, ne = g.n_vertices, g.n_edges
    p0 = g.vertices[g.edges[:, 0]]
    p1 = g.vertices[g.edges[:, 1]]

    # Split points at quarter and three-quarter span bound the actuator.
    if subdivide == 1:
        fractions = np.array([0.25, 0.75])
        roles_per_edge = [ROLE_ARM, ROLE_ACTUATOR, ROLE_ARM]
    else:
        ts = [np.linspace(0.0, 0.25, subdivide + 1),
              np.linspace(0.25, 0.75, subdivide + 1),
              np.linspace(0.75, 1.0, subdivide + 1)]
        fractions = np.unique(np.concatenate(ts))[1:-1]
        roles_per_edge = []
        for lo, hi in zip(fractions[:-1], fractions[1:]):
            mid = 0.5 * (lo + hi)
            roles_per_edge.append(ROLE_ACTUATOR if 0.25 < mid < 0.75 else ROLE_ARM)
        roles_per_edge = [ROLE_ARM] + roles_per_edge + [ROLE_ARM]

    n_int = len(fractions)
    internal = (p0[:, None, :] * (1.0 - fractions)[None, :, None]
                + p1[:, None, :] * fractions[None, :, None])
    fe_nodes = np.vstack([g.vertices, internal.reshape(-1, 2)])

    seg_nodes = []
    seg_role = []
    for e in range(ne):
        chain = [int(g.edges[e, 0])] + \
            [nv + e * n_int + k for k in range(n_int)] + [int(g.edges[e, 1])]
        for k in range(len(chain) - 1):
            seg_nodes.append((chain[k], chain[k + 1]))
            seg_role.append(roles_per_edge[k])

    return BeamMesh(
        fe_nodes=np.ascontiguousarray(fe_nodes),
        seg_nodes=np.asarray(seg_nodes, dtype=np.int64),
        seg_role=np.asarray(seg_role, dtype=np.int8),
        boundary_hubs=np.ascontiguousarray(perimeter_vertices(g)),
        bbox=g.bbox,
        depth=float(depth),
        material=material,
        case=case,
        n_hubs=nv,
        n_tiling_edges=ne,
    )
