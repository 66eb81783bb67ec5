"""Volume entropy, Patterson-Sullivan weights and currents, and entropy gradients
for finite metric graphs."""

from .graph_catalog import catalog, catalog_graph
from .currents import (
    CurrentTable,
    current_coordinates,
    cylinder_measure,
    degeneration_probe,
    projectively_distinct,
)
from .entropy import (
    EntropySolution,
    ps_cylinder_weight,
    rose2_entropy,
    uniform_entropy_closed_form,
    volume_entropy,
)
from .graph import (
    Graph,
    MetricStructure,
    ReducedPath,
    classify_metric,
    enumerate_reduced_paths,
    metric_from_edges,
    parse_graph,
    parse_graph_file,
    path,
    translation_length,
    uniform_metric,
)
from .optimize import convexity_probe, minimize_entropy, sup_entropy_demo
from .oracle import estimate_entropy_growth, growth_count, nbrw_simulate, poincare_partial
from .sensitivity import critical_point_residual, entropy_gradient, jacobian
from .spectral import phi, spectral_radius, transfer_matrix

__version__ = "0.1.0"
