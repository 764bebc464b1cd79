"""Catalog of the 11 uniform tilings of the plane.

Each entry couples the public descriptor (code, vertex configuration,
orthotropy flag) with the periodic construction data used by the generator:
lattice vectors, basis vertex positions (unit edge length), and the set of
candidate anchor points.  An anchor is a point of the infinite pattern that
may be placed at the bounding-box center; every anchor except T4H's sits on
two perpendicular mirror axes of the pattern, so the clipped mesh inherits
the two reflective symmetries the homogenization method relies on.

Letter codes map polygons read in order around a vertex:
T=triangle, S=square, H=hexagon, O=octagon, D=dodecagon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnknownTopology

_S3 = math.sqrt(3.0)


@dataclass(frozen=True)
class TopologyId:
    """Descriptor of one uniform tiling."""

    code: str
    vertex_config: tuple[int, ...]
    orthotropic_rve: bool = True

    @property
    def vertex_degree(self) -> int:
        return len(self.vertex_config)

    def __str__(self) -> str:
        return self.code


@dataclass(frozen=True)
class _Construction:
    """Periodic generator data, in units of one edge length."""

    v1: tuple[float, float]
    v2: tuple[float, float]
    basis: tuple[tuple[float, float], ...]
    anchors: tuple[tuple[float, float], ...] = ((0.0, 0.0),)


def _polygon(radius: float, start_deg: float, n: int, cx: float = 0.0,
             cy: float = 0.0) -> tuple[tuple[float, float], ...]:
    pts = []
    for k in range(n):
        ang = math.radians(start_deg + 360.0 * k / n)
        pts.append((cx + radius * math.cos(ang), cy + radius * math.sin(ang)))
    return tuple(pts)


def _snub_square_basis() -> tuple[tuple[float, float], ...]:
    # Two unit squares per cell on a checkerboard, mirror images of each
    # other; the origin is the midpoint of a triangle-triangle edge, where
    # two perpendicular mirror lines cross.
    s = math.sqrt(1.0 + _S3 / 2.0)
    r = math.sqrt(2.0) / 2.0
    plus = _polygon(r, 75.0, 4, s / 2.0, s / 2.0)
    minus = _polygon(r, 15.0, 4, s / 2.0, -s / 2.0)
    return plus + minus


_R12 = 1.0 / (2.0 * math.sin(math.pi / 12.0))
_R8 = 1.0 / (2.0 * math.sin(math.pi / 8.0))
_SNUB_S = math.sqrt(1.0 + _S3 / 2.0)
_TSHS_D = 1.0 + _S3
_TD2_D = 2.0 + _S3
_SO2_D = 1.0 + math.sqrt(2.0)
_SHD_D = 3.0 + _S3

_CONSTRUCTIONS: dict[str, _Construction] = {
    "T": _Construction(
        v1=(1.0, 0.0), v2=(0.5, _S3 / 2.0),
        basis=((0.0, 0.0),),
        anchors=((0.0, 0.0), (0.5, 0.0)),
    ),
    "S": _Construction(
        v1=(1.0, 0.0), v2=(0.0, 1.0),
        basis=((0.0, 0.0),),
        anchors=((0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)),
    ),
    # Hexagons centered on a triangular lattice; pointy-top orientation so
    # vertical edges exist and both bbox axes are mirror lines.
    "H": _Construction(
        v1=(_S3, 0.0), v2=(_S3 / 2.0, 1.5),
        basis=_polygon(1.0, 30.0, 6),
        anchors=((0.0, 0.0), (_S3 / 2.0, 0.0)),
    ),
    # Alternating strips of squares and triangles; origin mid-square-strip.
    "T3S2": _Construction(
        v1=(1.0, 0.0), v2=(0.5, 1.0 + _S3 / 2.0),
        basis=((0.0, -0.5), (0.0, 0.5)),
        anchors=((0.0, 0.0), (0.5, 0.0)),
    ),
    "T2STS": _Construction(
        v1=(_SNUB_S, _SNUB_S), v2=(_SNUB_S, -_SNUB_S),
        basis=_snub_square_basis(),
        anchors=((0.0, 0.0),),
    ),
    # Kagome: edge midpoints of a doubled triangular lattice.
    "THTH": _Construction(
        v1=(2.0, 0.0), v2=(1.0, _S3),
        basis=((1.0, 0.0), (0.5, _S3 / 2.0), (1.5, _S3 / 2.0)),
        anchors=((0.0, 0.0), (1.0, 0.0)),
    ),
    # Hexagons joined through squares, triangles in the corners.
    "TSHS": _Construction(
        v1=(_TSHS_D * _S3 / 2.0, _TSHS_D / 2.0), v2=(0.0, _TSHS_D),
        basis=_polygon(1.0, 0.0, 6),
        anchors=((0.0, 0.0), (0.0, _TSHS_D / 2.0)),
    ),
    # Dodecagons sharing edges, triangles in the gaps.
    "TD2": _Construction(
        v1=(_TD2_D, 0.0), v2=(_TD2_D / 2.0, _TD2_D * _S3 / 2.0),
        basis=_polygon(_R12, 15.0, 12),
        anchors=((0.0, 0.0), (_TD2_D / 2.0, 0.0)),
    ),
    # Octagons sharing edges, squares in the gaps.
    "SO2": _Construction(
        v1=(_SO2_D, 0.0), v2=(0.0, _SO2_D),
        basis=_polygon(_R8, 22.5, 8),
        anchors=((0.0, 0.0), (_SO2_D / 2.0, 0.0), (0.0, _SO2_D / 2.0),
                 (_SO2_D / 2.0, _SO2_D / 2.0)),
    ),
    # Dodecagons joined through squares, hexagons in the gaps.
    "SHD": _Construction(
        v1=(_SHD_D, 0.0), v2=(_SHD_D / 2.0, _SHD_D * _S3 / 2.0),
        basis=_polygon(_R12, 15.0, 12),
        anchors=((0.0, 0.0), (_SHD_D / 2.0, 0.0)),
    ),
    # Snub hexagonal: chiral, no mirror anchor exists.
    "T4H": _Construction(
        v1=(2.5, _S3 / 2.0), v2=(0.5, 1.5 * _S3),
        basis=_polygon(1.0, 0.0, 6),
        anchors=((0.0, 0.0),),
    ),
}

_TOPOLOGIES: tuple[TopologyId, ...] = (
    TopologyId("T", (3, 3, 3, 3, 3, 3)),
    TopologyId("S", (4, 4, 4, 4)),
    TopologyId("H", (6, 6, 6)),
    TopologyId("T3S2", (3, 3, 3, 4, 4)),
    TopologyId("T2STS", (3, 3, 4, 3, 4)),
    TopologyId("THTH", (3, 6, 3, 6)),
    TopologyId("TSHS", (3, 4, 6, 4)),
    TopologyId("TD2", (3, 12, 12)),
    TopologyId("SO2", (4, 8, 8)),
    TopologyId("SHD", (4, 6, 12)),
    TopologyId("T4H", (3, 3, 3, 3, 6), orthotropic_rve=False),
)

_BY_CODE = {t.code: t for t in _TOPOLOGIES}

#: The ten topologies analyzed for stiffness (T4H is chiral, not orthotropic).
ANALYZED_CODES: tuple[str, ...] = tuple(
    t.code for t in _TOPOLOGIES if t.orthotropic_rve)


def list_topologies() -> list[TopologyId]:
    """All 11 uniform tilings: 3 regular first, then the 8 semi-regular."""
    return list(_TOPOLOGIES)


def topology_by_code(code: str | TopologyId) -> TopologyId:
    if isinstance(code, TopologyId):
        return code
    try:
        return _BY_CODE[code]
    except KeyError:
        raise UnknownTopology(
            f"unknown topology code {code!r}; valid codes: "
            f"{', '.join(_BY_CODE)}") from None


def construction(topology: str | TopologyId) -> _Construction:
    return _CONSTRUCTIONS[topology_by_code(topology).code]
