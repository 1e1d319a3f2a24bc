"""Edge-isoperimetry toolkit for the discrete cube {0,1}^n."""
from .analytic import (
    BoundConfig,
    F,
    binary_entropy,
    corollary_bound,
    decomposition_bound,
    delta0,
    delta1,
    g,
    h,
    iso_lower_bound,
    kkl_functional,
    talagrand_functional,
)
from .constructions import (
    extremal_near_cube,
    harper_set,
    tribes,
    tribes_stats,
    tribes_variant_params,
)
from .cube import (
    CubeSet,
    InfluenceProfile,
    Subcube,
    complement,
    direction_boundary,
    edge_boundary,
    excess,
    from_hex,
    influences,
    internal_edges,
    is_subcube,
    make_set,
    realize_subcube,
    sections,
    subcube_distance,
    symdiff_size,
    to_hex,
)
from .errors import CubeError
from .fitting import FitResult, decompose, dense_subcube, fit_exact, fit_greedy, junta_distance

__version__ = "0.1.0"
