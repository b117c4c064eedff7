"""Cayley extensions of maniplexes: derived flag graphs, symmetry, universal extensions."""
from .amalgamation import Amalgamation, flat_amalgamate, is_flat
from .automorphisms import (
    AutomorphismGroup,
    SymmetryTypeGraph,
    automorphism_group,
    flag_orbits,
    is_isomorphic,
    is_regular,
    num_orbits,
    quotient_by,
    symmetry_type_graph,
)
from .constructions import (
    color_coded,
    cube,
    cuboctahedron,
    ditope,
    flat_extension,
    polygon,
    seed,
    simplex,
    square_pyramid_map,
    toroid_44,
    toroid_cubic,
    two_hat,
    two_hat_s_minus1,
)
from .extender import (
    CayleyExtender,
    DerivedManiplex,
    ExtenderError,
    PreExtender,
    coextender_via_dual,
    coextension,
    derived_maniplex,
    face_lattice_oracle,
    is_polytopal,
    quotient_extension,
)
from .friendly import (
    friendly_group,
    has_unique_universal_extension,
    heart_oracle,
    predicted_stg_universal,
    universal_extensions_isomorphic,
)
from .groups import GroupModel, named_group
from .io import load_extender, load_mpx, save_mpx
from .premaniplex import Premaniplex, StructureError, dual, is_maniplex, validate_premaniplex
from .universal import rn_order_actual, rn_order_predicted, universal_ball

__version__ = "0.1.0"
