import numpy as np
import pytest

from lattice_homog.catalog import topology_by_code
from lattice_homog.meshbuild import Material
from lattice_homog.tiling import TilingGraph


def make_graph(code, vertices, edges, bbox, edge_length=50.0):
    return TilingGraph(
        topology=topology_by_code(code),
        vertices=np.asarray(vertices, dtype=float),
        edges=np.asarray(edges, dtype=np.int64),
        bbox=bbox,
        edge_length=edge_length,
    )


@pytest.fixture
def material():
    return Material(2000.0, 0.3)


@pytest.fixture
def single_edge_graph():
    """One horizontal 50 mm edge centered in a 50 x 10 box."""
    return make_graph("S", [[-25.0, 0.0], [25.0, 0.0]], [[0, 1]], (50.0, 10.0))


# Series stiffness of one actuator-stiff edge: 25 mm actuator of 25 mm^2
# between two 12.5 mm arms of 5 mm^2, E = 2000 MPa.
SERIES_K = 2000.0 / (25.0 / 25.0 + 2.0 * 12.5 / 5.0)
