"""Exact combinatorics of twisted affine Weyl groups and loop groups.

Affine root data in the Kac classification, Iwahori-Weyl groups with Bruhat
order, admissible sets and their parahoric saturations, Littelmann path
counts against closed dimension formulas, and hermitian lattice chains over
F_q((u)) with Schubert cells and local model fibers.  All arithmetic is
exact: integers, fractions, and truncated Laurent series that track their
own precision.
"""

__version__ = "0.1.0"

from .admissible import adm, adm_count, adm_parahoric
from .dims import (CoherenceReport, central_charge, check_coherence, h_mu,
                   h_mu_sum, hook_content, iota_embed, minuscule_node,
                   weyl_dim)
from .errors import (LoopweylError, ResourceCapError, SeriesPrecisionError,
                     SpecParseError, UnknownDatumError, UnsupportedDatumError,
                     UnsupportedFieldError)
from .kactables import known_names, parse_name
from .lspaths import PathSpace, count_h_y, is_ls_path, shape_weight
from .rootdata import (bt_nodes, datum_from_json, datum_to_json,
                       echelon_system, load_affine_datum, project_coweight,
                       special_nodes, split_parent)

__all__ = [
    "__version__",
    "adm", "adm_count", "adm_parahoric",
    "CoherenceReport", "central_charge", "check_coherence", "h_mu",
    "h_mu_sum", "hook_content", "iota_embed", "minuscule_node", "weyl_dim",
    "LoopweylError", "ResourceCapError", "SeriesPrecisionError",
    "SpecParseError", "UnknownDatumError", "UnsupportedDatumError",
    "UnsupportedFieldError",
    "known_names", "parse_name",
    "PathSpace", "count_h_y", "is_ls_path", "shape_weight",
    "bt_nodes", "datum_from_json", "datum_to_json", "echelon_system",
    "load_affine_datum", "project_coweight", "special_nodes", "split_parent",
]
