"""Intelligence-driven security awareness training pipeline.

Feeds flow in one loop: NVD vulnerability records are clustered over
their categorical base metrics, clusters become tagged training themes,
themes drive assessments, and scored responses rank groups by readiness
for the next targeted round. A dictionary pre-annotation layer with
agreement/evaluation metrics covers the text side of the loop.
"""

from .schema import FeatureSchema, SchemaError
from .nvd import (
    CveRecord,
    FeedError,
    ParseResult,
    RejectedItem,
    categorical_matrix,
    parse_nvd_feed,
    read_records_jsonl,
    write_records_jsonl,
)
from .cluster import (
    HUANG,
    RANDOM,
    ClusterError,
    ClusterModel,
    ElbowEntry,
    ElbowReport,
    fit,
    fit_best,
    hamming_dissimilarity,
    init_modes,
    sweep_k,
)
from .themes import (
    CombinationStats,
    Theme,
    ThemeError,
    combination_stats,
    combos_report,
    coverage_top_m,
    profile_clusters,
    tags_for_mode,
    themes_from_model,
)
from .typesystem import (
    Dictionary,
    EntityType,
    RelationType,
    TypeSystem,
    TypeSystemError,
    is_subtype,
    load_dictionary,
    load_type_system,
    save_type_system,
    validate_relation,
)
from .annotate import (
    EXACT,
    OVERLAP,
    AgreementReport,
    AnnotationError,
    CorpusSplit,
    Document,
    EvalReport,
    Mention,
    RelationMention,
    assign_overlap,
    evaluate,
    make_relation,
    pairwise_agreement,
    preannotate,
    split_corpus,
)
from .assess import (
    AssessError,
    Assessment,
    AssessmentItem,
    ReadinessReport,
    ResponseSet,
    aggregate_readiness,
    generate_assessment,
    load_item_bank,
    score_response,
    target_groups,
)
from .store import Store, StoreError
from .service import ServiceConfig, create_app, serve

__version__ = "0.1.0"
