"""Decision procedures, proof checking, reductions, and countermodels for
primal propositional logic and its substitution-closed extensions."""

from .calculi import (
    BL,
    CL,
    IL,
    LOGICS,
    ML,
    PEL,
    PEL0,
    PEL1,
    PEL1_0,
    PEL2,
    PEL2_0,
    PL,
    PL_ED,
    LogicId,
    Proof,
    ProofBuilder,
    ProofStep,
    ProofStructureError,
    RuleTag,
    Violation,
    check_proof,
    check_step,
    eliminate_insignificant,
    format_proof,
    parse_proof,
    significant_implications,
    synthesize_ef_proof,
)
from .oracle import (
    SaturationConfig,
    SaturationResult,
    bounded_theorem,
    enumerate_small_sequents,
    extract_proof,
    padded_universe,
    saturate,
    subformula_universe,
)
from .pel0_decider import (
    decide_pel0,
    decide_pel0_multi,
    normalize_free_of_equivalents,
    pel0_equivalent,
)
from .pl_decider import decide_pl, decide_pl_multi, extract_pl_proof
from .reductions import (
    ReductionId,
    apply_reduction,
    reduce_clor_to_cl,
    reduce_il_to_ml,
    reduce_ml_to_pel1,
    reduce_ml_to_pel2,
)
from .semantics import (
    KripkeModel,
    ModelInvariantError,
    Valuation,
    countermodel_search,
    decide_cl_truthtable,
    evaluate_valuation,
    model_check,
    soundness_check,
)
from .syntax import (
    BOT,
    TOP,
    And,
    DisjunctionError,
    Formula,
    Imp,
    Or,
    ParseError,
    Sequent,
    Var,
    parse_formula,
    parse_sequent,
    proper_subformulas,
    sequent_subformulas,
    subformulas,
)

__version__ = "0.1.0"
