"""First-passage percolation on Z^d: exact passage times, geodesic sets and
their heaviest edges, plus the lattice constructions and Monte Carlo
experiments that probe how the maximal geodesic weight grows."""

from .lattice import Box, EdgeId, FullLattice, LatticeError, Shell, VertexSet, canonical_edge, shell
from .order import LdpExponentSpec, OrderError, OrderSpec, f, g, ldp_case, regime
from .passage import (
    GeodesicDag,
    MaxWeightStats,
    box_geodesic_dag,
    box_to_box,
    enumerate_geodesics,
    geodesic_dag,
    geodesic_envelope_check,
    max_weight_stats,
    passage_time,
)
from .weights import DistributionSpec, WeightConfig, perturb_tilde, resample_region, usefulness, weight

__all__ = [
    "Box",
    "DistributionSpec",
    "EdgeId",
    "FullLattice",
    "GeodesicDag",
    "LatticeError",
    "LdpExponentSpec",
    "MaxWeightStats",
    "OrderError",
    "OrderSpec",
    "Shell",
    "VertexSet",
    "WeightConfig",
    "box_geodesic_dag",
    "box_to_box",
    "canonical_edge",
    "enumerate_geodesics",
    "f",
    "g",
    "geodesic_dag",
    "geodesic_envelope_check",
    "ldp_case",
    "max_weight_stats",
    "passage_time",
    "perturb_tilde",
    "regime",
    "resample_region",
    "shell",
    "usefulness",
    "weight",
]

__version__ = "0.1.0"
