"""Homogenized in-plane elastic properties of planar actuator-lattice
meshes built on the uniform tilings of the plane.

Pipeline: tiling graph generation -> Timoshenko beam mesh -> linear FE
solves under prescribed macroscopic strains -> strain-energy homogenization
-> engineering constants, plus a study harness for topology comparisons.
"""

__version__ = "0.1.0"

from .catalog import ANALYZED_CODES, TopologyId, list_topologies, topology_by_code
from .errors import (BboxTooSmall, DisconnectedMesh, EmptyTable,
                     InsufficientData, InvalidGraph, LatticeError,
                     MissingCase, MissingTopology, NoBoundary,
                     NotOrthotropic, NotPositiveDefinite, SingularSystem,
                     UnknownTopology, ZeroLength)
from .homogenize import (EngineeringConstants, EnergyDensities, MacroStrain,
                         MacroStress, ResultRecord, StiffnessTensorH,
                         engineering_constants, homogenize, load_case_strain,
                         macro_stress, run_load_cases, stiffness_tensor)
from .meshbuild import (ACTUATOR_STIFF, CASES, EQUAL_HIGH, EQUAL_LOW,
                        NODE_STIFF, BeamMesh, Material, SectionProfile,
                        StiffnessCase, build_beam_mesh, case_by_id,
                        section_for)
from .studies import (ResultTable, StudyConfig, classify_topologies, export,
                      load_results_csv, rank_report, run_study,
                      size_independence_report, stiffness_case_heatmap)
from .tiling import (TilingGraph, ValidationReport, generate_tiling,
                     mirror_mismatch, perimeter_vertices, validate_tiling)

__all__ = [
    "ANALYZED_CODES", "ACTUATOR_STIFF", "BeamMesh", "BboxTooSmall", "CASES",
    "DisconnectedMesh", "EQUAL_HIGH", "EQUAL_LOW", "EmptyTable",
    "EngineeringConstants", "EnergyDensities", "InsufficientData",
    "InvalidGraph", "LatticeError", "MacroStrain", "MacroStress",
    "Material", "MissingCase", "MissingTopology", "NODE_STIFF", "NoBoundary",
    "NotOrthotropic", "NotPositiveDefinite", "ResultRecord", "ResultTable",
    "SectionProfile", "SingularSystem", "StiffnessCase", "StiffnessTensorH",
    "StudyConfig", "TilingGraph", "TopologyId", "UnknownTopology",
    "ValidationReport", "ZeroLength", "build_beam_mesh", "case_by_id",
    "classify_topologies", "engineering_constants", "export",
    "generate_tiling", "homogenize", "list_topologies", "load_case_strain",
    "load_results_csv", "macro_stress", "mirror_mismatch",
    "perimeter_vertices", "rank_report", "run_load_cases", "run_study",
    "section_for", "size_independence_report", "stiffness_case_heatmap",
    "stiffness_tensor", "topology_by_code", "validate_tiling",
]
