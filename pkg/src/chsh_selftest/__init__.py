"""Parallel CHSH self-testing: exact values, sampling, and certification."""

from .extraction import (
    ExtractedOperators,
    QuestionSearchResult,
    build_xz,
    canonicalize,
    find_best_qa,
    find_best_qb,
    find_pair_question,
    log_question_set,
    per_subtest_deltas,
    qa_score,
    qb_score,
    relabel_alice_bit,
    relabel_bob_bit,
    search_questions,
)
from .game import (
    MAX_EXACT_N,
    TSIRELSON,
    GameValue,
    exact_value,
    expectation_table,
    referee_simulate,
    subtest_table,
    subtest_value,
    win,
)
from .strategy import (
    NOISE_MODELS,
    NoiseSpec,
    Strategy,
    StrategyDiagnostics,
    born_distribution,
    ideal_state,
    ideal_strategy,
    load_strategy,
    noisy_strategy,
    random_strategy,
    sample_answers,
    save_strategy,
    strategy_from_text,
    strategy_to_text,
    validate,
)
from .verifier import (
    MAX_CERTIFY_N,
    ConditionNorms,
    Coverage,
    SelfTestReport,
    certified_bounds,
    certify,
    compute_junk,
    extraction_distance,
    measure_epsilons,
    measure_general_conditions,
    pauli_target,
    swap_isometry_apply,
)

__all__ = [
    "ExtractedOperators",
    "QuestionSearchResult",
    "build_xz",
    "canonicalize",
    "find_best_qa",
    "find_best_qb",
    "find_pair_question",
    "log_question_set",
    "per_subtest_deltas",
    "qa_score",
    "qb_score",
    "relabel_alice_bit",
    "relabel_bob_bit",
    "search_questions",
    "MAX_EXACT_N",
    "TSIRELSON",
    "GameValue",
    "exact_value",
    "expectation_table",
    "referee_simulate",
    "subtest_table",
    "subtest_value",
    "win",
    "NOISE_MODELS",
    "NoiseSpec",
    "Strategy",
    "StrategyDiagnostics",
    "born_distribution",
    "ideal_state",
    "ideal_strategy",
    "load_strategy",
    "noisy_strategy",
    "random_strategy",
    "sample_answers",
    "save_strategy",
    "strategy_from_text",
    "strategy_to_text",
    "validate",
    "MAX_CERTIFY_N",
    "ConditionNorms",
    "Coverage",
    "SelfTestReport",
    "certified_bounds",
    "certify",
    "compute_junk",
    "extraction_distance",
    "measure_epsilons",
    "measure_general_conditions",
    "pauli_target",
    "swap_isometry_apply",
]

__version__ = "0.1.0"
