"""
Shared fixtures and utilities for pytest tests.
"""
import os
import shutil
import tempfile

import pytest
from sympy.polys.domains import GF, QQ

from graph import parse_graph
from lpa import LeavittPathAlgebra


GRAPH_TEXTS = {
    "R1": "vertex v\nedge e: v -> v\n",
    "R2": "vertex v\nedge y1: v -> v\nedge y2: v -> v\n",
    "A2": "vertex v1\nvertex v2\nedge e: v1 -> v2\n",
    "A3": "vertex v1\nvertex v2\nvertex v3\nedge e: v1 -> v2\nedge f: v2 -> v3\n",
    "toeplitz": "vertex u\nvertex w\nedge e: u -> u\nedge f: u -> w\n",
    "rose": (
        "# four listed loops of an infinite emitter\n"
        "vertex v\n"
        "edge e1: v -> v\nedge e2: v -> v\nedge e3: v -> v\nedge e4: v -> v\n"
        "infinite v\n"
    ),
    "point": "vertex v\n",
    "A2_point": "vertex v1\nvertex v2\nvertex w\nedge e: v1 -> v2\n",
}


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    temp_path = tempfile.mkdtemp()
    yield temp_path
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def graph_file(temp_dir):
    """Write a named sample graph to disk and return its path."""
    def _write(name):
        path = os.path.join(temp_dir, f"{name}.graph")
        with open(path, "w", encoding="utf-8") as f:
            f.write(GRAPH_TEXTS[name])
        return path
    return _write


@pytest.fixture
def make_algebra():
    """Build L_K(E) for a named sample graph over QQ or GF(p)."""
    def _make(name, field=QQ):
        return LeavittPathAlgebra(parse_graph(GRAPH_TEXTS[name]), field)
    return _make


@pytest.fixture
def r1(make_algebra):
    """The single loop: L(R1) = K[t, t^-1]."""
    return make_algebra("R1")


@pytest.fixture
def r2(make_algebra):
    """The rose with two petals: the Leavitt algebra L(1, 2)."""
    return make_algebra("R2")


@pytest.fixture
def a2(make_algebra):
    """The line v1 -> v2: L(A2) = M_2(K)."""
    return make_algebra("A2")


@pytest.fixture
def a3(make_algebra):
    """The line v1 -> v2 -> v3: L(A3) = M_3(K)."""
    return make_algebra("A3")


@pytest.fixture
def toeplitz(make_algebra):
    """A loop at u with an exit to the sink w."""
    return make_algebra("toeplitz")


@pytest.fixture
def rose(make_algebra):
    """A flagged infinite emitter with four listed loops."""
    return make_algebra("rose")


@pytest.fixture
def point(make_algebra):
    """A single vertex: L(E) = K."""
    return make_algebra("point")


@pytest.fixture
def f2():
    return GF(2, symmetric=False)


@pytest.fixture
def f5():
    return GF(5, symmetric=False)
