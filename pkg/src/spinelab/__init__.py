"""spinelab: census and equivariant-cohomology toolkit for small graph complexes."""

from spinelab.algebra import (
    AlgebraMorphism,
    Element,
    GradedAlgebra,
    ProductAlgebra,
    ProductMorphism,
    cohomology_of_metacyclic,
    dimensions,
    equalizer,
    invariants,
    parse_element,
    verify_free_module,
)
from spinelab.equivariant import (
    ZpGraph,
    classify_reduced,
    enumerate_zp_graphs,
    equivariant_expansions,
    is_reduced,
    nielsen_closure,
    nielsen_moves,
)
from spinelab.graphs import (
    HalfEdgeGraph,
    build_graph,
    collapse,
    enumerate_forests,
    is_admissible,
    rank,
)
from spinelab.series import GradedDims, PowerSeriesRat, expand, series_equal
from spinelab.spine import (
    enumerate_admissible,
    enumerate_cells,
    match_names,
    quotient_complex,
    singular_graphs,
)
from spinelab.symmetry import (
    AutGroup,
    CanonicalForm,
    GraphAutomorphism,
    automorphism_group,
    canonical_form,
    elements_of_order,
    orbits,
    sylow_p_order,
)

__all__ = [
    "AlgebraMorphism",
    "AutGroup",
    "CanonicalForm",
    "Element",
    "GradedAlgebra",
    "GradedDims",
    "GraphAutomorphism",
    "HalfEdgeGraph",
    "PowerSeriesRat",
    "ProductAlgebra",
    "ProductMorphism",
    "ZpGraph",
    "automorphism_group",
    "build_graph",
    "canonical_form",
    "classify_reduced",
    "cohomology_of_metacyclic",
    "collapse",
    "dimensions",
    "elements_of_order",
    "enumerate_admissible",
    "enumerate_cells",
    "enumerate_forests",
    "enumerate_zp_graphs",
    "equalizer",
    "equivariant_expansions",
    "expand",
    "invariants",
    "is_admissible",
    "is_reduced",
    "match_names",
    "nielsen_closure",
    "nielsen_moves",
    "orbits",
    "parse_element",
    "quotient_complex",
    "rank",
    "series_equal",
    "singular_graphs",
    "sylow_p_order",
    "verify_free_module",
]
