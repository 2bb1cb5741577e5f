"""Token-level prompt decomposition for sequence labeling.

Every token of a sentence becomes its own cloze prompt, and a pluggable mask
scorer picks the verbalizer word that fills it.
"""

__version__ = "0.1.0"

from .corpus import (  # noqa: E402
    PANX_TAGS,
    UDPOS_TAGS,
    CorpusSplit,
    LabeledSentence,
    TagSet,
    builtin_tagset,
    dataset_stats,
    parse_conll,
    validate_iob2,
)
from .decode import parse_generated_label, predict_corpus, predict_tags, predict_tags_generative  # noqa: E402
from .metrics import aggregate_languages, delta_table, export_error_cases, weighted_f1  # noqa: E402
from .pvp import (  # noqa: E402
    PromptInstance,
    PromptTemplate,
    Verbalizer,
    builtin_pvp,
    decompose,
    render_icl_prompt,
    render_prompt,
    render_seq2seq_topro,
    render_seq2seq_vanilla,
)
from .scoring import (  # noqa: E402
    MaskDistribution,
    OracleScorer,
    TinyScorer,
    TinyTokenClassifier,
    external_scorer_adapter,
    finite_difference_gradient_check,
    lookup_oracle_scorer,
    uniform_scorer,
)
from .train import TrainConfig, compute_topro_loss, run_with_seeds, topro_finetune, vanilla_finetune  # noqa: E402

__all__ = [
    "PANX_TAGS", "UDPOS_TAGS", "CorpusSplit", "LabeledSentence", "TagSet", "builtin_tagset",
    "dataset_stats", "parse_conll", "validate_iob2",
    "parse_generated_label", "predict_corpus", "predict_tags", "predict_tags_generative",
    "aggregate_languages", "delta_table", "export_error_cases", "weighted_f1",
    "PromptInstance", "PromptTemplate", "Verbalizer", "builtin_pvp", "decompose", "render_icl_prompt",
    "render_prompt", "render_seq2seq_topro", "render_seq2seq_vanilla",
    "MaskDistribution", "OracleScorer", "TinyScorer", "TinyTokenClassifier", "external_scorer_adapter",
    "finite_difference_gradient_check", "lookup_oracle_scorer", "uniform_scorer",
    "TrainConfig", "compute_topro_loss", "run_with_seeds", "topro_finetune", "vanilla_finetune",
]
