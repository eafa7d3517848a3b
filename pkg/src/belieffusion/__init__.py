"""Conflict-aware collective belief states.

Represents group beliefs as modular, transitive relations over finite
world sets (so agnosticism and conflict stay distinguishable), aggregates
ranked sources into belief states, and fuses pedigreed multi-agent states
with order-invariant semantics.
"""

from .aggregation import Profile, Source, agr, agr_rf, agr_star, agr_un, un
from .formulas import (
    FormulaSyntaxError,
    PropUniverse,
    UndeclaredVariableError,
    format_formula,
    generate_universe,
    models,
    parse_formula,
    satisfies,
)
from .pedigree import (
    Agent,
    PedigreedBeliefState,
    empty_pedigree,
    fuse,
    fuse_equal_rank,
    induced_state,
    pedigree_from_sources,
    restrict,
    union_profile,
)
from .relations import (
    EmptySubsetError,
    Pair,
    PropertyFlags,
    Relation,
    UniverseMismatchError,
    UnknownWorldError,
    WorldUniverse,
    choice_set,
    classify_properties,
    in_conflict,
    relation,
    strict_version,
    transitive_closure,
    union_all,
    universe,
)
from .scenario import (
    ParseError,
    Scenario,
    export_dot,
    format_layers,
    format_scenario,
    parse_pedigree,
    parse_scenario,
    serialize_pedigree,
)
from .simulation import (
    SimConfig,
    SimReport,
    SplitMix64,
    Topology,
    TopologyError,
    global_reference,
    run_simulation,
)
from .states import (
    BeliefState,
    Block,
    ClassFlags,
    ConditionalStatus,
    LayeredForm,
    NotModularError,
    NotTransitiveError,
    VacuousConditionError,
    agnosticism,
    classify_class,
    conflict,
    evaluate_conditional,
    from_layers,
    from_relation,
    to_layers,
)

__all__ = [name for name in dir() if not name.startswith("_")]
