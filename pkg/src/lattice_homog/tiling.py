"""Generation and validation of uniform-tiling lattice graphs.

A tiling graph is the abstract lattice for one topology: hub vertex
positions plus equal-length edges, clipped to a rectangular bounding box
centered at the origin.  Only complete edges are kept (actuators are
identical, so edges are never shortened) and the pattern is anchored so the
tiling's mirror axes coincide with the box center axes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .catalog import TopologyId, construction, topology_by_code
from .errors import BboxTooSmall

# Vertex-merge tolerance during generation, relative to the edge length:
# far below fabrication relevance, far above double-precision noise.
MERGE_RTOL = 1e-6


@dataclass(frozen=True)
class TilingGraph:
    """Abstract lattice: hub vertices and equal-length edges.

    Coordinates are in mm, relative to the bounding-box center.  ``edges``
    holds 0-based vertex index pairs with i < j, sorted lexicographically.
    """

    topology: TopologyId
    vertices: np.ndarray          # (n, 2) float64
    edges: np.ndarray             # (m, 2) int64
    bbox: tuple[float, float]     # (width, height) mm
    edge_length: float            # mm

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        np.add.at(deg, self.edges[:, 0], 1)
        np.add.at(deg, self.edges[:, 1], 1)
        return deg

    def edge_lengths(self) -> np.ndarray:
        d = self.vertices[self.edges[:, 1]] - self.vertices[self.edges[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    def to_json_dict(self) -> dict:
        return {
            "topology": self.topology.code,
            "edge_length_mm": self.edge_length,
            "bbox_mm": [self.bbox[0], self.bbox[1]],
            "vertices": self.vertices.tolist(),
            "edges": self.edges.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple[tuple[str, object, float], ...] = ()

    def rules(self) -> set[str]:
        return {v[0] for v in self.violations}


def _lattice_points(v1, v2, basis, anchor, half_w, half_h):
    """All basis translates whose cell could reach the padded box."""
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    basis = np.asarray(basis, dtype=float) - np.asarray(anchor, dtype=float)
    pad = float(np.max(np.hypot(basis[:, 0], basis[:, 1]))) + 1.0
    corners = np.array([[sx * (half_w + pad), sy * (half_h + pad)]
                        for sx in (-1, 1) for sy in (-1, 1)])
    m = np.linalg.inv(np.column_stack([v1, v2]))
    ij = corners @ m.T
    i_lo, j_lo = np.floor(ij.min(axis=0)).astype(int) - 2
    i_hi, j_hi = np.ceil(ij.max(axis=0)).astype(int) + 2
    ii, jj = np.meshgrid(np.arange(i_lo, i_hi + 1),
                         np.arange(j_lo, j_hi + 1), indexing="ij")
    origins = ii.reshape(-1, 1) * v1 + jj.reshape(-1, 1) * v2
    pts = (origins[:, None, :] + basis[None, :, :]).reshape(-1, 2)
    # Cheap pre-clip with one-edge margin keeps the dedupe tree small.
    keep = (np.abs(pts[:, 0]) <= half_w + pad) & (np.abs(pts[:, 1]) <= half_h + pad)
    return pts[keep]


def _dedupe(points: np.ndarray, tol: float) -> np.ndarray:
    """Merge near-coincident points; result sorted by (x, y)."""
    order = np.lexsort((points[:, 1], points[:, 0]))
    pts = points[order]
    pairs = cKDTree(pts).query_pairs(tol, output_type="ndarray")
    parent = np.arange(len(pts))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(a) for a in range(len(pts))])
    return pts[np.unique(roots)]


def _candidate_graph(topology, width, height, edge_length, anchor):
    """Clipped vertex/edge arrays for one anchor choice, or None if empty."""
    con = construction(topology)
    half_w, half_h = width / 2.0 / edge_length, height / 2.0 / edge_length
    pts = _lattice_points(con.v1, con.v2, con.basis, anchor, half_w, half_h)
    if len(pts) == 0:
        return None
    pts = _dedupe(pts, MERGE_RTOL)
    clip = MERGE_RTOL
    inside = (np.abs(pts[:, 0]) <= half_w + clip) & (np.abs(pts[:, 1]) <= half_h + clip)
    pts = pts[inside]
    if len(pts) < 2:
        return None
    pairs = cKDTree(pts).query_pairs(1.0 + MERGE_RTOL, output_type="ndarray")
    if len(pairs) == 0:
        return None
    d = pts[pairs[:, 1]] - pts[pairs[:, 0]]
    dist = np.hypot(d[:, 0], d[:, 1])
    pairs = pairs[dist >= 1.0 - MERGE_RTOL]
    if len(pairs) == 0:
        return None

    # Keep the largest connected component; clipped-off fragments carry no
    # load and the solver requires a single component.
    n = len(pts)
    adj = csr_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), (n, n))
    ncomp, labels = connected_components(adj, directed=False)
    sizes = np.bincount(labels, minlength=ncomp)
    main = int(np.argmax(sizes))  # ties resolve to the lowest label
    keep = labels == main
    if keep.sum() < 2:
        return None
    remap = -np.ones(n, dtype=np.int64)
    remap[keep] = np.arange(keep.sum())
    pts = pts[keep]
    pairs = remap[pairs]
    pairs = pairs[(pairs >= 0).all(axis=1)]
    pairs = np.sort(pairs, axis=1)
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    return pts, pairs


def generate_tiling(topology, bbox, edge_length: float) -> TilingGraph:
    """Generate one topology clipped to ``bbox`` (width, height in mm).

    Among the pattern's valid mirror-symmetric anchorings the one keeping
    the most edges is used, so the box is filled as densely as possible.

    Raises ``BboxTooSmall`` if no complete edge survives clipping and
    ``UnknownTopology`` for an invalid code.
    """
    topo = topology_by_code(topology)
    if np.isscalar(bbox):
        width = height = float(bbox)
    else:
        width, height = (float(b) for b in bbox)
    if edge_length <= 0.0:
        raise ValueError("edge_length must be positive")
    if width <= 0.0 or height <= 0.0:
        raise ValueError("bbox sides must be positive")

    best = None
    for anchor in construction(topo).anchors:
        cand = _candidate_graph(topo, width, height, edge_length, anchor)
        if cand is not None and (best is None or len(cand[1]) > len(best[1])):
            best = cand
    # A mesh needs at least two joined actuators; a lone edge (or nothing)
    # means not even one repeating unit fits.
    if best is None or len(best[1]) < 2:
        raise BboxTooSmall(
            f"no complete {topo.code} cell of edge {edge_length} mm fits in "
            f"{width} x {height} mm")
    pts, pairs = best
    return TilingGraph(
        topology=topo,
        vertices=np.ascontiguousarray(pts * edge_length),
        edges=np.ascontiguousarray(pairs),
        bbox=(width, height),
        edge_length=float(edge_length),
    )


def _segment_violations(vertices, edges, tol):
    """Pairs of edges that cross or touch away from a shared vertex."""
    mids = 0.5 * (vertices[edges[:, 0]] + vertices[edges[:, 1]])
    d = vertices[edges[:, 1]] - vertices[edges[:, 0]]
    lengths = np.hypot(d[:, 0], d[:, 1])
    radius = float(lengths.max()) if len(lengths) else 0.0
    pairs = cKDTree(mids).query_pairs(radius + tol, output_type="ndarray")
    bad = []
    for a, b in pairs:
        ia, ja = edges[a]
        ib, jb = edges[b]
        if len({ia, ja, ib, jb}) < 4:
            continue  # shared vertex: a legal edge-to-edge meeting
        if _segments_touch(vertices[ia], vertices[ja],
                           vertices[ib], vertices[jb], tol):
            bad.append((int(a), int(b)))
    return bad


def _segments_touch(p1, p2, q1, q2, tol):
    """True if segments come within ``tol`` of each other anywhere."""
    r = p2 - p1
    s = q2 - q1
    denom = r[0] * s[1] - r[1] * s[0]
    qp = q1 - p1
    if abs(denom) > tol * max(np.hypot(*r), np.hypot(*s)):
        t = (qp[0] * s[1] - qp[1] * s[0]) / denom
        u = (qp[0] * r[1] - qp[1] * r[0]) / denom
        eps = 1e-12
        return -eps <= t <= 1 + eps and -eps <= u <= 1 + eps
    # Near-parallel: check closest point of each endpoint to the other segment.
    for p, a, b in ((q1, p1, p2), (q2, p1, p2), (p1, q1, q2), (p2, q1, q2)):
        ab = b - a
        t = np.clip(np.dot(p - a, ab) / np.dot(ab, ab), 0.0, 1.0)
        if np.hypot(*(a + t * ab - p)) <= tol:
            return True
    return False


def validate_tiling(g: TilingGraph) -> ValidationReport:
    """Check all tiling-graph invariants; pure, returns a report."""
    v: list[tuple[str, object, float]] = []
    a = g.edge_length

    lengths = g.edge_lengths()
    off = np.abs(lengths - a) / a
    for idx in np.nonzero(off > 1e-9)[0]:
        v.append(("equal-edge", (int(g.edges[idx, 0]), int(g.edges[idx, 1])),
                  float(lengths[idx])))

    if g.n_vertices > 1:
        dup = cKDTree(g.vertices).query_pairs(MERGE_RTOL * a,
                                              output_type="ndarray")
        for i, j in dup:
            d = float(np.hypot(*(g.vertices[i] - g.vertices[j])))
            v.append(("duplicate-vertex", (int(i), int(j)), d))

    key = g.edges[:, 0] * (g.n_vertices + 1) + g.edges[:, 1]
    uniq, counts = np.unique(key, return_counts=True)
    for k in uniq[counts > 1]:
        i, j = divmod(int(k), g.n_vertices + 1)
        v.append(("duplicate-edge", (i, j), float(counts[uniq == k][0])))

    for a_idx, b_idx in _segment_violations(g.vertices, g.edges, 1e-9 * a):
        v.append(("edge-to-edge", (a_idx, b_idx), 0.0))

    deg = g.degrees()
    dmax = g.topology.vertex_degree
    for i in np.nonzero(deg > dmax)[0]:
        v.append(("degree", int(i), float(deg[i])))

    # A vertex can only be short of its full degree if clipping removed a
    # neighbor, which confines it to a one-edge layer along the box.
    half_w, half_h = g.bbox[0] / 2.0, g.bbox[1] / 2.0
    margin = a * (1.0 + MERGE_RTOL)
    border = np.minimum(
        np.minimum(half_w - g.vertices[:, 0], half_w + g.vertices[:, 0]),
        np.minimum(half_h - g.vertices[:, 1], half_h + g.vertices[:, 1]))
    for i in np.nonzero((deg < dmax) & (border > margin))[0]:
        v.append(("interior-degree", int(i), float(deg[i])))

    if g.n_vertices:
        adj = csr_matrix(
            (np.ones(g.n_edges), (g.edges[:, 0], g.edges[:, 1])),
            (g.n_vertices, g.n_vertices))
        ncomp, _ = connected_components(adj, directed=False)
        if ncomp > 1:
            v.append(("connected", None, float(ncomp)))

    return ValidationReport(passed=not v, violations=tuple(v))


def perimeter_vertices(g: TilingGraph) -> np.ndarray:
    """Indices of vertices with degree below the topology's vertex degree.

    These lie on the outer boundary of the clipped pattern and are where
    prescribed (affine) displacements are applied.
    """
    return np.nonzero(g.degrees() < g.topology.vertex_degree)[0]


def mirror_mismatch(g: TilingGraph) -> float:
    """Worst distance (mm) between the vertex set and its reflections
    about the box's central vertical and horizontal axes."""
    tree = cKDTree(g.vertices)
    worst = 0.0
    for sx, sy in ((-1.0, 1.0), (1.0, -1.0)):
        refl = g.vertices * np.array([sx, sy])
        dist, _ = tree.query(refl)
        worst = max(worst, float(dist.max()))
    return worst
