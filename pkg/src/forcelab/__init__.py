"""forcelab: a desk-scale workbench for forcing over finite ground universes.

Explicit finite preorders stand in for class forcings, hereditarily
finite sets for the ground model, and every recursive construction
(forcing relations, name translations, Boolean completions, projections)
is checked exactly against a brute-force generic-cone oracle.
"""

from .errors import (
    BoundExceeded,
    CyclicSetError,
    DeskWarning,
    DslError,
    ForcelabError,
    HeightOverflowError,
    IndexExhaustedError,
    OrderError,
    PoolError,
    ScheduleError,
    SeparativityError,
    SlotsExhaustedError,
    UnknownConditionError,
)
from .hf import EMPTY, GroundModel, HFSet, canonicalize, kuratowski, natural, \
    rank, transitive_closure, vstage
from .orders import (
    FiniteBooleanAlgebra,
    Preorder,
    QuotientMap,
    add_negation,
    add_supremum,
    completion_isomorphism,
    is_antichain,
    is_complete_subforcing,
    is_dense,
    is_dense_below,
    is_maximal_antichain,
    is_predense_below,
    is_separative,
    minimal_classes,
    regular_open_algebra,
    saturate_to_boolean,
    separative_quotient,
)
from .names import (
    Filter,
    PName,
    check_name,
    evaluate,
    gdot_name,
    minus_transform,
    name_rank,
    op_name,
    p_evaluation,
    plus_transform,
    transport_quotient,
)
from .formulas import (
    Conj,
    Disj,
    Eq,
    FOAll,
    FOAnd,
    FOEq,
    FOEx,
    FOMem,
    FONot,
    FOOr,
    FOPred,
    InG,
    Mem,
    Neg,
    Sub,
    appropriate,
    decode,
    encode,
    fo_satisfies,
    lex_min_appropriate,
    nnf,
    nu_mu,
    psi_unique,
    star_star_lift,
    translate_star,
)
from .forcing import (
    NamePool,
    Verdict,
    boolean_value,
    completion_setup,
    cone_generics,
    decidability_frontier,
    forces_fo,
    forces_via_nu_mu,
    formula_to_ro,
    holds,
    restricted_forces,
    semantic_forces,
    syntactic_forces_atomic,
    truth_lemma_check,
)
from .zoo import (
    CollapseForcing,
    FriedmanCondition,
    FriedmanForcing,
    ProjectionFamily,
    TwoStepIteration,
    antichain_defeater,
    approachability_instance,
    check_named_iteration,
    collapse,
    collapse_dense_sets,
    collapse_projection,
    compose_generics,
    decode_E_F,
    decoding_is_isomorphism,
    friedman_poset,
    geq_reduction,
    geq_truncation,
    index_swap,
    p_lex,
    p_sequence,
    proj_gen_ext_check,
    qn_antichain,
    surjection_name,
    two_step,
)
from .generics import (
    ChainFilter,
    DenseSetSchedule,
    ScheduleProvider,
    cone,
    filter_validate_explicit,
    generic_filters_bruteforce,
    rasiowa_sikorski,
)

__version__ = "0.1.0"
