"""Construction and mechanical verification of a simply connected 2-complex
whose fundamental cycles are knotted and whose edge contractions have
nonplanar links."""

from __future__ import annotations

__version__ = "0.1.0"

from .complex import TwoComplex, contract_edge, contract_edge_set, link_graph
from .construction import build_pipeline, build_tree, fundamental_cycle
from .cuboid import build_cuboid, two_color
from .graphs import Multigraph
from .knots import PLCycle, is_certified_nontrivial, project
from .planarity import is_planar, make_G13, make_G14

__all__ = [
    "Multigraph",
    "PLCycle",
    "TwoComplex",
    "__version__",
    "build_cuboid",
    "build_pipeline",
    "build_tree",
    "contract_edge",
    "contract_edge_set",
    "fundamental_cycle",
    "is_certified_nontrivial",
    "is_planar",
    "link_graph",
    "make_G13",
    "make_G14",
    "project",
    "two_color",
]
