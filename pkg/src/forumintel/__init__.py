"""forumintel: find threat-relevant posts in dark-web forum dumps.

Pipeline: ingest raw dumps -> extract indicators of compromise -> clean and
tokenize -> rule + manual labeling -> vectorize -> train classifiers ->
probability thresholds -> topic-model validation and reports.
"""

__version__ = "0.1.0"

from .classify import (
    GridResult,
    Prediction,
    SplitConfig,
    TrainedModel,
    classify_band,
    classify_binary,
    load_model,
    predict_proba,
    save_model,
    select_models,
    split,
    train,
)
from .corpus import Corpus, RawPost, UnifiedPost, load_corpus, parse_raw_post, unify
from .embeddings import EmbeddingModel, SkipGramEmbedder, embed_document, train_embeddings
from .evaluate import (
    ConfusionMatrix,
    MetricsReport,
    confusion,
    evaluate,
    relevance_shares,
    top_frequent_words,
)
from .ioc import IocMatch, IocReport, annotate_corpus_iocs, extract_iocs, suppress_false_positives
from .labeling import (
    LabeledDataset,
    LabelJournal,
    apply_manual_labels,
    build_dataset_one,
    detect_keywords,
    review_queue,
    rule_label,
)
from .textprep import CleaningConfig, clean_text, extend_stopwords, tokenize
from .topics import GibbsLda, LdaConfig, compare_topics, fit_lda, run_topic_suite, top_words
from .vectorize import (
    FeatureMatrix,
    NgramVectorizer,
    Vocabulary,
    build_vocabulary,
    tf_vectorize,
    tfidf_vectorize,
)
