"""Zero-shot domain labelling of lexical glosses.

Classification is reformulated as mask filling, next-sentence plausibility
or entailment queries against a pluggable scoring backend, so off-the-shelf
language models assign domain labels without task-specific training.  The
package also ships the evaluation harness (top-k accuracy, micro P/R/F1
under abstention, confusion matrices, threshold sweeps) and a silver-data
export path for distilling a compact student classifier.
"""

__version__ = "0.1.0"

from .dataset import (
    Corpus,
    GlossRecord,
    LabelDistribution,
    label_distribution,
    load_corpus,
    write_corpus,
)
from .engine import (
    EngineConfig,
    ScoredLabels,
    classify,
    classify_batch,
    load_predictions,
    predict_open_topics,
    softmax,
    write_predictions,
)
from .errors import (
    BackendError,
    ConfigError,
    CorpusFormatError,
    EvalError,
    GlossdomError,
    LabelSpaceError,
    PatternError,
    ProtocolError,
    TransportError,
)
from .evaluation import (
    EvalReport,
    PrfResult,
    SweepPoint,
    build_report,
    confusion_counts,
    confusion_matrix,
    micro_prf,
    run_comparison,
    threshold_sweep,
    topk_accuracy,
    topk_curve,
)
from .labelspace import (
    DomainLabel,
    LabelSpace,
    builtin_labelspace_path,
    decompose_label,
    load_labelspace,
    map_descriptor_scores,
)
from .patterns import (
    DEFAULT_PATTERN_ID,
    MLM_PATTERN_ID,
    PatternTemplate,
    RenderedQuery,
    builtin_registry,
    get_pattern,
    load_patterns,
    render,
)
from .annotate import (
    AnnotationJob,
    SilverRecord,
    annotate_pool,
    export_training_set,
    read_silver,
)
from .scorer import (
    BackendDescriptor,
    MaskPrediction,
    MockBackend,
    NliScores,
    NspScore,
    RemoteBackend,
)

__all__ = [name for name in dir() if not name.startswith("_")]
