"""Spectral and topological analysis of signed graph Laplacians."""

from .errors import *  # noqa: F401,F403
from .graph import (
    ComponentLabeling,
    Flexibility,
    SignedGraph,
    components,
    contract_edge,
    contract_subgraph,
    count_components,
    delete_edge,
    flexibility,
    is_connected,
    subgraph_negative,
    subgraph_positive,
)
from .treepoly import (
    BifurcationPoint,
    CrossingPolynomial,
    Root,
    RootList,
    crossing_polynomial,
    crossing_polynomial_oracle,
    enumerate_spanning_trees,
    polynomial_roots,
    t_star,
    tree_constant,
)
from .spectral import (
    IndexTriple,
    asymptotic_spectrum,
    assemble,
    check_bounds,
    eigen_curves,
    eigensystem,
    gershgorin,
    gsep_eigenvalues,
    inertia,
    laplacian_array,
)
from .homology import boundary_map, decompose, fixed_subspace, mixed_cycle_basis, projected_index
from .ensemble import EnsembleConfig, run_ensemble
from .io import load_edge_list, parse_edge_list, symmetrize_directed, write_edge_list

__version__ = "0.1.0"
