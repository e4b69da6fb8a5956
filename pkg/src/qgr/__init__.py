"""Invariants of the quotient category QGr kQ of a path algebra of finite GK-dimension."""

from .errors import (
    DimensionMismatch,
    ExplosionCap,
    InvalidPoset,
    InvariantViolation,
    NotCyclicVertex,
    NotEventuallyPeriodic,
    NotFiniteGK,
    ParseError,
    QgrError,
)
from .extquiver import ext_quiver, gamma, gk_from_ext_quiver, has_path_multiple, qgr_equivalent
from .growth import cycle_poset, gk_dimension, growth_oracle, strongly_connected_cycles
from .k0 import delta_contains, k0, n_power_polynomial, normalize_for_k0, positive_cone_oracle
from .matricial import bratteli, endo_block_dims, gk1_report, noetherian_check
from .monomial import ext_quiver_of_algebra, parse_algebra, ufnarovskii_graph
from .points import (
    build_extension,
    classify_point_module,
    cyclic_point_module,
    is_split_extension,
    qgr_hom_dim,
    truncate_projective,
)
from .poset import Poset, poset_isomorphism
from .quiver import Arrow, Path, Quiver, count_paths, incidence_matrix, load_quiver, parse_quiver, quiver, serialize, veronese

__version__ = "0.1.0"
