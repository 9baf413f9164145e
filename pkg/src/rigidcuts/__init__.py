"""Exact maximum r-cuts, near-optimal cut structure and pattern thresholds at desk scale."""
from rigidcuts.cuts import Cut, CutFamily, critical_edges, edge_partition, enumerate_cuts, max_cut, max_cut_size
from rigidcuts.equivalence import EquivStructure, equivalence, in_core_class, is_rigid, x_r
from rigidcuts.errors import ContractError, DeskScaleError, ParameterError, RigidCutsError
from rigidcuts.graph import Graph, RngSeed, sample_gnm, sample_gnp

__version__ = "0.1.0"

__all__ = [
    "Cut", "CutFamily", "critical_edges", "edge_partition", "enumerate_cuts", "max_cut", "max_cut_size",
    "EquivStructure", "equivalence", "in_core_class", "is_rigid", "x_r",
    "ContractError", "DeskScaleError", "ParameterError", "RigidCutsError",
    "Graph", "RngSeed", "sample_gnm", "sample_gnp",
]
