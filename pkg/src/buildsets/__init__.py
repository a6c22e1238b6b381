"""Building sets, nested set complexes and Bergman fans of finite
meet-semilattices, with exhaustive verifiers for their structural
properties."""

from .building import (
    BuildingSet,
    BuildingSetFamily,
    building_closure,
    building_rank,
    enumerate_building_sets,
    extreme_members,
    factors,
    is_building_set,
    is_building_set_definitional,
    maximum_building_set,
    minimum_building_set,
    removal_chain,
)
from .embeddings import (
    SemilatticeEmbedding,
    compare_joins,
    is_consistent,
    restrict_building_set,
    validate_embedding,
    verify_restriction_theorem,
)
from .errors import (
    BuildSetsError,
    InvariantBreach,
    ParseError,
    SizeLimit,
    ValidationError,
)
from .fans import Cone, Fan, bergman_fan, corollary_pipeline, is_subfan, is_unimodular, smith_invariants
from .matroids import (
    Matroid,
    boolean_lattice,
    boolean_matroid,
    matroid_from_flats,
    partition_lattice_matroid,
    uniform_matroid,
)
from .nested import NestedSetComplex, check_factors_lemma, is_nested, nested_complex
from .poset import (
    FinitePoset,
    MeetSemilattice,
    direct_product,
    factorize_interval,
    hasse_dot,
    irreducibles,
    is_isomorphic,
    linear_extensions,
    validate_poset,
)
from .setsystems import (
    ClosureOperator,
    SetSystem,
    extreme_points,
    is_antimatroid,
    is_convex_geometry,
    is_intersection_closed,
    is_supersolvable_closure_operator,
    is_supersolvable_convex_geometry,
    upper_ideals,
)

__version__ = "0.1.0"
