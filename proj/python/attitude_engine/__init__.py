"""Attitude and action-intention prediction for brand-mention corpora."""

from ._core import (
    DIMENSIONS,
    ClassifierModel,
    EngineConfig,
    EngineError,
    LabeledUser,
    Lexicon,
    ModelBundle,
    NotFoundError,
    ParseError,
    ScoredUser,
    SyntheticCorpus,
    Tweet,
    UserRecord,
    distribution,
    evaluate,
    f1_score,
    filter_brand_mentions,
    filter_users,
    generate_synthetic,
    handle_request,
    induce_domain_lexicon,
    label_users,
    load_snapshot,
    load_users,
    pearson_correlation,
    roc_auc,
    save_snapshot,
    save_users,
    score_cohort,
    tokenize,
    train_bundle,
    train_classifier,
    user_detail,
)

__all__ = [name for name in dir() if not name.startswith("_")]
