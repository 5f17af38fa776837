"""
netsampler — sample large undirected networks and rank sampling techniques.

    from netsampler import load_edge_list, sample, SamplerSpec, Technique
    g = load_edge_list("CA-HepPh.txt")
    s = sample(g, SamplerSpec(Technique.FFI, seed=7))
"""

from .config import RunConfig, load_config, parse_config
from .errors import (
    ConfigError,
    DatasetIntegrityError,
    EdgeListParseError,
    EmptyGraphError,
    NetSamplerError,
    SamplingError,
)
from .graph import (
    Graph,
    PropertyDistribution,
    Sample,
    average_clustering,
    average_degree,
    clustering_distribution,
    degree_distribution,
    density,
    induced_subgraph,
    load_edge_list,
    summarize,
    write_edge_list,
)
from .harness import ReportBundle, ReportRow, derive_seed, run_experiment
from .report import emit_report, write_bundle
from .samplers import SamplerSpec, Technique, sample
from .stats import (
    ks_distance,
    reference_residual,
    studentized_residuals,
    studentized_residuals_true,
    t_critical,
)

__version__ = "0.1.0"
