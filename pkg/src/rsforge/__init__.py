"""Ruzsa-Szemeredi graphs and Steiner-layered hypergraphs from one-sided NOF protocols.

Everything is computed by exhaustive enumeration on small lattice instances.
"""

from .construct import (
    CliqueTemplate,
    LayeredGraph,
    build_graph,
    build_product,
    default_template,
    full_template,
    load_template,
    parse_template,
    partition_layers,
)
from .errors import ContractError, ParameterError, ResourceError, RSForgeError
from .functions import FunctionSpec, check_lines, cube_function, enumerate_Z, evaluate, midpoint_function, ones_count
from .kernels import BACKEND
from .lattice import (
    IntervalPartition,
    LatticePoint,
    build_interval_partition,
    greedy_coloring,
    mean_sq_dist,
    midpoint,
    sq_dist,
)
from .nof import (
    EntrySet,
    ProtocolSpec,
    Transcript,
    augment,
    check_correct,
    check_star_free,
    check_symmetric,
    choose_transcript,
    cost,
    interval_protocol,
    kplayer_protocol,
    run,
    simple_protocol,
    transcript_set,
)
from .pipeline import RunConfig, run_recipe
from .verify import (
    VerificationReport,
    check_concentration,
    check_induced_steiner_partition,
    check_product_bounds,
    cross_clique_census,
)

__version__ = "0.1.0"
