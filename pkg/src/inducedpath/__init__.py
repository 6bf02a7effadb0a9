"""Long induced paths in sparse random graphs.

Greedy induced linear forests are joined into one induced path by a
depth-first search over an auxiliary digraph whose arcs carry conflicting
connector vertices.  Exact small-instance oracles and closed-form moment
evaluators come alongside.
"""

from ._kernels import BACKEND
from .graph_core import Graph, GnpParams, sample_gnp, is_induced_path
from .connector_pipeline import full_pipeline, pipeline_params

__version__ = "0.1.0"

__all__ = ["BACKEND", "Graph", "GnpParams", "sample_gnp", "is_induced_path",
           "full_pipeline", "pipeline_params", "__version__"]
