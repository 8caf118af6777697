"""Compact sets of sequential rules for long symbol sequences.

Mines an MDL-selected weighted rule table from a single long sequence and
uses it for lossless encoding accounting, next-element prediction, and
compression-based classification.
"""

from .closed import ClosedPattern, mine_closed
from .encoding import (
    DLReport,
    Model,
    data_code_length,
    model_code_length,
    position_distributions,
    predictive_distribution,
    rule_code_length,
    total_dl,
    universal_int_code_length,
    weight_code_length,
)
from .evaluation import (
    ClassifierModel,
    PredictionOutcome,
    SyntheticSpec,
    ThresholdMetrics,
    bigram_baseline,
    classify,
    evaluate_prediction,
    hit_rate,
    predict_next,
    synth_generate,
    train_classifier,
)
from .model_io import (
    load_model,
    load_targets,
    model_from_dict,
    model_to_dict,
    model_to_json,
    read_sequence,
    save_model,
    save_targets,
    write_sequence,
)
from .optimize import (
    OptimizerConfig,
    adjust_weights,
    golden_section_minimize,
    normalize_weights,
    quantize_weights,
)
from .rules import (
    ActiveMatch,
    Rule,
    active_matches,
    compression_gain,
    format_rule,
    generate_candidates,
    parse_rule,
    rule_support_confidence,
    singleton_rules,
    triggers_at,
)
from .selector import MiningConfig, cossu_mine
from .sequence import (
    Alphabet,
    FrequencyTable,
    Sequence,
    Symbol,
    frequencies,
    matches_ending_at,
    matches_starting_at,
    support,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveMatch",
    "Alphabet",
    "ClassifierModel",
    "ClosedPattern",
    "DLReport",
    "FrequencyTable",
    "MiningConfig",
    "Model",
    "OptimizerConfig",
    "PredictionOutcome",
    "Rule",
    "Sequence",
    "Symbol",
    "SyntheticSpec",
    "ThresholdMetrics",
    "active_matches",
    "adjust_weights",
    "bigram_baseline",
    "classify",
    "compression_gain",
    "cossu_mine",
    "data_code_length",
    "evaluate_prediction",
    "format_rule",
    "frequencies",
    "generate_candidates",
    "golden_section_minimize",
    "hit_rate",
    "load_model",
    "load_targets",
    "matches_ending_at",
    "matches_starting_at",
    "mine_closed",
    "model_code_length",
    "model_from_dict",
    "model_to_dict",
    "model_to_json",
    "normalize_weights",
    "parse_rule",
    "position_distributions",
    "predict_next",
    "predictive_distribution",
    "quantize_weights",
    "read_sequence",
    "rule_code_length",
    "rule_support_confidence",
    "save_model",
    "save_targets",
    "singleton_rules",
    "support",
    "synth_generate",
    "total_dl",
    "train_classifier",
    "triggers_at",
    "universal_int_code_length",
    "weight_code_length",
    "write_sequence",
]
