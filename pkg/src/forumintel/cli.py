"""Command-line pipeline: each subcommand reads the previous stage's artifact
from the run directory, writes its own, and prints a one-line summary.

Artifacts embed the hash of the run configuration; a stage refuses input
produced under a different configuration unless --force is given.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import classify as clf
from . import topics as tp
from .corpus import load_corpus, read_corpus, write_corpus
from .evaluate import (
    confusion,
    evaluate,
    relevance_shares,
    top_frequent_words,
    write_frequency_table,
    write_metrics,
)
from .embeddings import EmbeddingModel, SkipGramEmbedder, embed_document
from .errors import ConfigError, EmptyCorpus, ForumIntelError, StageMismatch
from .learners import LEARNER_KINDS
from .ioc import annotate_corpus_iocs, load_suppression_rules
from .labeling import (
    NOT_RELEVANT,
    RELEVANT,
    LabelJournal,
    annotate_corpus_keywords,
    apply_manual_labels,
    build_dataset_one,
    read_dataset,
    review_queue,
    write_dataset,
)
from .textprep import CleaningConfig, load_wordlist, tokenize_corpus
from .vectorize import REPRESENTATIONS, FeatureMatrix, Vocabulary, build_vocabulary, \
    tf_vectorize, tfidf_vectorize


@dataclass
class RunConfig:
    seed: int = 0
    dumps: list = field(default_factory=list)           # [{"path":..., "forum":...}]
    stopwords: str | None = None
    extra_stopwords: str | None = None
    junk_terms: str | None = None
    keywords: str | None = None
    suppression_rules: str | None = None
    train_fraction: float = 0.8
    stratified: bool = True
    min_df: int = 1
    hyperparameters: dict = field(default_factory=dict)
    lda_iterations: int = 1000
    embedding: dict = field(default_factory=dict)        # SkipGramEmbedder overrides
    ingested_at: str | None = None

    @classmethod
    def load(cls, path: str | None, seed_override: int | None = None) -> "RunConfig":
        data = {}
        if path:
            try:
                data = json.loads(Path(path).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        config = cls(**data)
        if seed_override is not None:
            config.seed = seed_override
        for entry in config.dumps:
            if not Path(entry["path"]).exists():
                raise ConfigError(f"dump file missing: {entry['path']}")
        for attr in ("stopwords", "extra_stopwords", "junk_terms", "keywords",
                     "suppression_rules"):
            value = getattr(config, attr)
            if value and not Path(value).exists():
                raise ConfigError(f"{attr} file missing: {value}")
        return config

    def content_hash(self) -> str:
        payload = {f: getattr(self, f) for f in self.__dataclass_fields__}
        blob = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def meta(self, stage: str) -> dict:
        return {"config_hash": self.content_hash(), "seed": self.seed, "stage": stage}

    def cleaning_config(self) -> CleaningConfig:
        return CleaningConfig.default(self.stopwords, self.extra_stopwords, self.junk_terms)

    def keyword_set(self):
        from .labeling import default_keywords
        return load_wordlist(self.keywords) if self.keywords else default_keywords()

    def split_config(self) -> clf.SplitConfig:
        return clf.SplitConfig(self.train_fraction, seed=self.seed,
                               stratified=self.stratified)


def _check_meta(meta: dict, config: RunConfig, artifact: Path, force: bool):
    found = meta.get("config_hash")
    if not force and found != config.content_hash():
        raise StageMismatch(
            f"{artifact} was produced under config {found}, current config is "
            f"{config.content_hash()}; rerun upstream stages or pass --force"
        )


def _require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise ConfigError(f"stage {stage} needs {path.name}; run the producing stage first")
    return path


# -- stage implementations ----------------------------------------------------

def cmd_ingest(args, config: RunConfig, run_dir: Path) -> str:
    dumps = [(d["path"], d["forum"]) for d in config.dumps]
    for extra in args.dump or []:
        forum, _, path = extra.partition("=")
        dumps.append((path, forum))
    if not dumps:
        raise ConfigError("no dumps configured; use --dump forum=path or the config file")
    corpus = load_corpus(dumps, ingested_at=config.ingested_at)
    out = run_dir / "corpus.jsonl"
    write_corpus(corpus, out, meta=config.meta("ingest"))
    return (f"[ingest] {len(corpus)} posts from {len(dumps)} dumps "
            f"({corpus.parse_errors} parse errors) -> {out}")


def cmd_extract_ioc(args, config: RunConfig, run_dir: Path) -> str:
    source = _require(run_dir / "corpus.jsonl", "extract-ioc")
    corpus, meta = read_corpus(source)
    _check_meta(meta, config, source, args.force)
    rules = load_suppression_rules(config.suppression_rules)
    corpus, counts = annotate_corpus_iocs(corpus, rules)
    out = run_dir / "corpus_ioc.jsonl"
    write_corpus(corpus, out, meta=config.meta("extract-ioc"))
    flagged = sum(1 for p in corpus.posts if p.ioc_report.aggregate_flag == "YES")
    busiest = ", ".join(f"{t}={n}" for t, n in sorted(counts.items()) if n)
    return f"[extract-ioc] {flagged}/{len(corpus)} posts flagged ({busiest or 'none'}) -> {out}"


def cmd_preprocess(args, config: RunConfig, run_dir: Path) -> str:
    source = _require(run_dir / "corpus_ioc.jsonl", "preprocess")
    corpus, meta = read_corpus(source)
    _check_meta(meta, config, source, args.force)
    tokenize_corpus(corpus, config.cleaning_config())
    out = run_dir / "corpus_tokens.jsonl"
    write_corpus(corpus, out, meta=config.meta("preprocess"))
    total = sum(len(p.cleaned_tokens) for p in corpus.posts)
    return f"[preprocess] {total} tokens over {len(corpus)} posts -> {out}"


def cmd_label(args, config: RunConfig, run_dir: Path) -> str:
    source = _require(run_dir / "corpus_tokens.jsonl", "label")
    corpus, meta = read_corpus(source)
    _check_meta(meta, config, source, args.force)
    annotate_corpus_keywords(corpus, config.keyword_set())
    annotated = run_dir / "corpus_annotated.jsonl"
    write_corpus(corpus, annotated, meta=config.meta("label"))

    journal = LabelJournal(run_dir / "journal.ndjson")
    if args.apply_journal:
        dataset = apply_manual_labels(corpus, journal.decision_pairs(),
                                      strict=not args.incremental,
                                      decided_at="1970-01-01T00:00:00+00:00")
        out = run_dir / "dataset2.jsonl"
        write_dataset(dataset, out, meta=config.meta("label"))
        counts = dataset.class_counts
        return (f"[label] {dataset.name}: {len(dataset)} posts "
                f"({counts[RELEVANT]} Relevant / {counts[NOT_RELEVANT]} NotRelevant) -> {out}")

    dataset = build_dataset_one(corpus, decided_at="1970-01-01T00:00:00+00:00")
    out = run_dir / "dataset1.jsonl"
    write_dataset(dataset, out, meta=config.meta("label"))
    queue = review_queue(corpus, journal)
    counts = dataset.class_counts
    return (f"[label] DatasetI: {len(dataset)} posts ({counts[RELEVANT]} Relevant / "
            f"{counts[NOT_RELEVANT]} NotRelevant), review queue {len(queue)} -> {out}")


def cmd_review_serve(args, config: RunConfig, run_dir: Path) -> str:
    from .review_server import serve_review

    server = serve_review(
        corpus_path=run_dir / "corpus_annotated.jsonl",
        journal_path=run_dir / "journal.ndjson",
        metrics_path=run_dir / "metrics.json",
        host=args.host,
        port=args.port,
        ui_dir=args.ui_dir,
    )
    host, port = server.server_address[:2]
    print(f"[review-serve] listening on http://{host}:{port}/ (Ctrl-C stops)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return "[review-serve] stopped"


def _dataset_docs(dataset):
    docs = []
    for post in dataset.posts():
        if post.cleaned_tokens is None:
            raise ConfigError(f"post {post.id} lacks cleaned tokens; rerun preprocess")
        docs.append(post.cleaned_tokens)
    return docs


def _build_features(docs, representation: str, config: RunConfig,
                    vocab: Vocabulary | None = None,
                    embedding: EmbeddingModel | None = None):
    """Vectorize token lists under one of the five representations.

    Returns (FeatureMatrix, vocabulary, embedding_model); exactly one of the
    last two is set, depending on the representation family.
    """
    if representation not in REPRESENTATIONS:
        raise ConfigError(f"unknown representation {representation!r}; "
                          f"expected one of {REPRESENTATIONS}")
    if representation == "word2vec":
        if embedding is None:
            embedder = SkipGramEmbedder(seed=config.seed, **config.embedding)
            embedding = embedder.fit(docs).model_
        rows = np.vstack([embed_document(tokens, embedding) for tokens in docs])
        matrix = FeatureMatrix(matrix=rows, scheme="embedding_mean")
        return matrix, None, embedding

    order = 2 if representation.endswith("bigram") else 1
    if vocab is None:
        vocab = build_vocabulary(docs, order=order, min_df=config.min_df)
    if representation.startswith("tfidf"):
        return tfidf_vectorize(docs, vocab), vocab, None
    return tf_vectorize(docs, vocab), vocab, None


def _load_dataset(run_dir: Path, name: str, config: RunConfig, force: bool):
    source = _require(run_dir / f"{name}.jsonl", name)
    dataset, meta = read_dataset(source)
    _check_meta(meta, config, source, force)
    return dataset


def cmd_vectorize(args, config: RunConfig, run_dir: Path) -> str:
    dataset = _load_dataset(run_dir, args.dataset, config, args.force)
    docs = _dataset_docs(dataset)
    features, vocab, embedding = _build_features(docs, args.representation, config)
    stem = f"features_{args.representation}_{args.dataset}"
    meta = config.meta("vectorize")
    meta.update({
        "representation": args.representation,
        "dataset": args.dataset,
        "post_ids": [p.id for p in dataset.posts()],
        "labels": dataset.labels(),
    })
    if sp.issparse(features.matrix):
        sp.save_npz(run_dir / f"{stem}.npz", features.matrix.tocsr())
        meta["matrix_file"] = f"{stem}.npz"
    else:
        np.save(run_dir / f"{stem}.npy", features.matrix)
        meta["matrix_file"] = f"{stem}.npy"
    if vocab is not None:
        meta["vocabulary"] = vocab.to_dict()
    if embedding is not None:
        meta["embedding"] = embedding.to_dict()
    (run_dir / f"{stem}.meta.json").write_text(
        json.dumps(meta, ensure_ascii=False, sort_keys=True), encoding="utf-8")
    return (f"[vectorize] {features.rows}x{features.cols} {args.representation} "
            f"matrix -> {run_dir / (stem + '.meta.json')}")


def _load_features(run_dir: Path, representation: str, dataset: str,
                   config: RunConfig, force: bool):
    stem = f"features_{representation}_{dataset}"
    meta_path = _require(run_dir / f"{stem}.meta.json", "train")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    _check_meta(meta, config, meta_path, force)
    matrix_file = run_dir / meta["matrix_file"]
    matrix = sp.load_npz(matrix_file) if matrix_file.suffix == ".npz" else np.load(matrix_file)
    vocab = Vocabulary.from_dict(meta["vocabulary"]) if "vocabulary" in meta else None
    embedding = EmbeddingModel.from_dict(meta["embedding"]) if "embedding" in meta else None
    return matrix, meta["labels"], vocab, embedding, meta


def _fit_and_eval(matrix, labels, learner, representation, config: RunConfig):
    y = np.asarray([1 if lbl == RELEVANT else 0 for lbl in labels])
    train_idx, test_idx = clf.split_indices(y, config.split_config())
    model = clf.train(matrix[train_idx], y[train_idx], learner,
                      hyperparameters=config.hyperparameters.get(learner, {}),
                      seed=config.seed, representation=representation)
    probs = clf.predict_proba(model, matrix[test_idx])
    predicted = [clf.classify_binary(float(p)) for p in probs]
    truth = [RELEVANT if v == 1 else NOT_RELEVANT for v in y[test_idx]]
    cm = confusion(predicted, truth)
    report = evaluate(cm)
    return model, cm, report


def cmd_train(args, config: RunConfig, run_dir: Path) -> str:
    matrix, labels, vocab, embedding, _ = _load_features(
        run_dir, args.representation, args.dataset, config, args.force)
    model, cm, report = _fit_and_eval(matrix, labels, args.learner,
                                      args.representation, config)
    if vocab is not None:
        model.vocab_hash = vocab.content_hash()
    out = run_dir / f"model_{args.learner}_{args.representation}.json"
    clf.save_model(model, out, vocabulary=vocab, embedding=embedding)
    write_metrics(report, cm, run_dir / "metrics.json",
                     meta={"model": out.name, **config.meta("train")})
    return (f"[train] {args.learner} on {args.representation}: "
            f"precision={report.precision:.3f} recall={report.recall:.3f} "
            f"f1={report.f1:.3f} accuracy={report.accuracy:.3f} -> {out}")


def cmd_grid(args, config: RunConfig, run_dir: Path) -> str:
    dataset = _load_dataset(run_dir, args.dataset, config, args.force)
    docs = _dataset_docs(dataset)
    labels = dataset.labels()
    results = []
    learners = args.learners.split(",") if args.learners else list(LEARNER_KINDS)
    for representation in REPRESENTATIONS:
        features, _, _ = _build_features(docs, representation, config)
        for learner in learners:
            _, _, report = _fit_and_eval(features.matrix, labels, learner,
                                         representation, config)
            results.append(clf.GridResult(
                representation=representation, learner=learner,
                precision=report.precision, recall=report.recall,
                f1=report.f1, accuracy=report.accuracy,
            ))
            print(f"  {representation:16s} {learner:20s} p={report.precision:.3f} "
                  f"r={report.recall:.3f} f1={report.f1:.3f} acc={report.accuracy:.3f}")
    payload = {"meta": config.meta("grid"),
               "results": [r.to_dict() for r in results]}
    out = run_dir / "grid.json"
    out.write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")
    return f"[grid] {len(results)} representation x learner combinations -> {out}"


def cmd_select(args, config: RunConfig, run_dir: Path) -> str:
    source = _require(run_dir / "grid.json", "select")
    payload = json.loads(source.read_text(encoding="utf-8"))
    _check_meta(payload.get("meta", {}), config, source, args.force)
    grid = [clf.GridResult.from_dict(d) for d in payload["results"]]
    kept = clf.select_models(grid, floor=args.floor)
    out = run_dir / "selected.json"
    out.write_text(json.dumps({"meta": config.meta("select"), "floor": args.floor,
                               "results": [r.to_dict() for r in kept]}, sort_keys=True),
                   encoding="utf-8")
    for row in kept:
        print(f"  kept {row.representation} + {row.learner} "
              f"(p={row.precision:.3f} r={row.recall:.3f} f1={row.f1:.3f})")
    return f"[select] {len(kept)}/{len(grid)} combinations above {args.floor} -> {out}"


def cmd_classify(args, config: RunConfig, run_dir: Path) -> str:
    model_path = _require(Path(args.model) if args.model else
                          run_dir / "model_gbdt_tfidf_unigram.json", "classify")
    model = clf.load_model(model_path)
    source = _require(run_dir / args.corpus, "classify")
    corpus, meta = read_corpus(source)
    _check_meta(meta, config, source, args.force)
    if not corpus.posts:
        raise EmptyCorpus(f"{source} holds no posts")
    docs = []
    for post in corpus.posts:
        if post.cleaned_tokens is None:
            raise ConfigError(f"post {post.id} lacks cleaned tokens; rerun preprocess")
        docs.append(post.cleaned_tokens)
    representation = model.representation or "tfidf_unigram"
    features, _, _ = _build_features(docs, representation, config,
                                     vocab=model.vocabulary, embedding=model.embedding)
    probs = clf.predict_proba(model, features.matrix)
    out = run_dir / "predictions.jsonl"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"_meta": {**config.meta("classify"),
                                       "model": model_path.name}}) + "\n")
        for post, p in zip(corpus.posts, probs):
            pred = clf.Prediction(post.id, float(p))
            fh.write(json.dumps(pred.to_dict(), sort_keys=True) + "\n")
    preds = [clf.Prediction(post.id, float(p)) for post, p in zip(corpus.posts, probs)]
    shares = relevance_shares(preds)
    rel = shares.binary_counts[RELEVANT]
    return (f"[classify] {len(preds)} posts: {rel} Relevant "
            f"({shares.binary_percent[RELEVANT]}%), bands "
            f"H={shares.band_counts['High']}/M={shares.band_counts['Medium']}"
            f"/L={shares.band_counts['Low']} -> {out}")


def _read_predictions(run_dir: Path, config: RunConfig, force: bool):
    source = _require(run_dir / "predictions.jsonl", "report")
    preds = []
    meta = {}
    for line in source.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if "_meta" in rec:
            meta = rec["_meta"]
            continue
        preds.append(clf.Prediction(rec["id"], rec["probability"]))
    _check_meta(meta, config, source, force)
    return preds


def cmd_topics(args, config: RunConfig, run_dir: Path) -> str:
    if args.source == "dataset":
        dataset = _load_dataset(run_dir, args.dataset, config, args.force)
        docs = _dataset_docs(dataset)
        labels = dataset.labels()
        tag = args.dataset
    else:
        corpus, meta = read_corpus(_require(run_dir / args.corpus, "topics"))
        _check_meta(meta, config, run_dir / args.corpus, args.force)
        preds = {p.post_id: p for p in _read_predictions(run_dir, config, args.force)}
        docs, labels = [], []
        for post in corpus.posts:
            if post.id not in preds:
                continue
            docs.append(post.cleaned_tokens or [])
            labels.append(preds[post.id].binary_label)
        tag = "classified"
    iterations = args.iterations or config.lda_iterations
    outcomes = tp.run_topic_suite(docs, labels, iterations=iterations, seed=config.seed)
    out = run_dir / f"topics_{tag}.json"
    tp.write_suite(outcomes, out)
    for outcome in outcomes:
        if outcome.summary:
            tp.write_summary_table(outcome.summary, run_dir / f"topics_{tag}_{outcome.name}.tsv")
    done = sum(1 for o in outcomes if o.summary)
    return f"[topics] {done}/4 runs completed over {len(docs)} documents -> {out}"


def cmd_report(args, config: RunConfig, run_dir: Path) -> str:
    preds = _read_predictions(run_dir, config, args.force)
    dataset = _load_dataset(run_dir, args.dataset, config, args.force)
    truth_by_id = {post.id: rec.label for post, rec in dataset.records}
    pairs = [(p.binary_label, truth_by_id[p.post_id]) for p in preds
             if p.post_id in truth_by_id]
    if not pairs:
        raise ConfigError("no prediction ids overlap the dataset; check inputs")
    cm = confusion([a for a, _ in pairs], [b for _, b in pairs])
    report = evaluate(cm)
    write_metrics(report, cm, run_dir / "metrics.json", meta=config.meta("report"))
    shares = relevance_shares(preds)
    print(f"  confusion tp={cm.tp} fp={cm.fp} fn={cm.fn} tn={cm.tn}")
    print(f"  shares: {shares.binary_percent} bands: {shares.band_percent}")
    return (f"[report] precision={report.precision:.3f} recall={report.recall:.3f} "
            f"f1={report.f1:.3f} accuracy={report.accuracy:.3f} -> "
            f"{run_dir / 'metrics.json'}")


def cmd_freq(args, config: RunConfig, run_dir: Path) -> str:
    dataset = _load_dataset(run_dir, args.dataset, config, args.force)
    docs_by_class = {RELEVANT: [], NOT_RELEVANT: []}
    for post, rec in dataset.records:
        docs_by_class[rec.label].append(post.cleaned_tokens or [])
    report = top_frequent_words(docs_by_class, n=args.top)
    out = run_dir / f"freq_{args.dataset}.tsv"
    write_frequency_table(report, out)
    heads = {cls: (ranking[0][0] if ranking else "-")
             for cls, ranking in report.per_class.items()}
    return f"[freq] top-{args.top} words per class (leaders: {heads}) -> {out}"


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forumintel",
        description="Dark-web forum post relevance pipeline",
    )
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--seed", type=int, help="override the configured seed")
    parser.add_argument("--run-dir", default="run", help="artifact directory")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        p.add_argument("--force", action="store_true",
                       help="accept artifacts from a different config")
        return p

    p = add("ingest", cmd_ingest, help="parse raw dumps into the unified corpus")
    p.add_argument("--dump", action="append", metavar="FORUM=PATH",
                   help="extra dump file (repeatable; not covered by the config "
                        "hash, prefer the config file for reproducible runs)")

    add("extract-ioc", cmd_extract_ioc, help="find indicators of compromise")
    add("preprocess", cmd_preprocess, help="clean and tokenize for mining")

    p = add("label", cmd_label, help="rule labeling and manual-label merge")
    p.add_argument("--apply-journal", action="store_true",
                   help="merge journaled review decisions (full-corpus dataset)")
    p.add_argument("--incremental", action="store_true",
                   help="with --apply-journal: allow unreviewed posts")

    p = add("review-serve", cmd_review_serve, help="HTTP API for the review UI")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8377)
    p.add_argument("--ui-dir", help="serve these static files at /")

    p = add("vectorize", cmd_vectorize, help="build one text representation")
    p.add_argument("--representation", required=True, choices=REPRESENTATIONS)
    p.add_argument("--dataset", default="dataset1")

    p = add("train", cmd_train, help="fit one learner and hold-out evaluate it")
    p.add_argument("--learner", required=True,
                   choices=["linear_svm", "logistic_regression", "random_forest", "gbdt"])
    p.add_argument("--representation", required=True, choices=REPRESENTATIONS)
    p.add_argument("--dataset", default="dataset1")

    p = add("grid", cmd_grid, help="run the full representation x learner matrix")
    p.add_argument("--dataset", default="dataset1")
    p.add_argument("--learners", help="comma-separated subset (default: all four)")

    p = add("select", cmd_select, help="filter grid results by the metric floor")
    p.add_argument("--floor", type=float, default=0.6)

    p = add("classify", cmd_classify, help="score an unlabeled corpus")
    p.add_argument("--model", help="model artifact (default: gbdt + tfidf_unigram)")
    p.add_argument("--corpus", default="corpus_tokens.jsonl",
                   help="tokenized corpus artifact inside the run dir")

    p = add("topics", cmd_topics, help="the four-run topic suite")
    p.add_argument("--source", choices=["dataset", "classified"], default="dataset")
    p.add_argument("--dataset", default="dataset2")
    p.add_argument("--corpus", default="corpus_tokens.jsonl")
    p.add_argument("--iterations", type=int, help="override LDA sweep count")

    p = add("report", cmd_report, help="confusion matrix and metrics")
    p.add_argument("--dataset", default="dataset2")

    p = add("freq", cmd_freq, help="most frequent words per class")
    p.add_argument("--dataset", default="dataset2")
    p.add_argument("--top", type=int, default=100)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.load(args.config, seed_override=args.seed)
        run_dir = Path(args.run_dir)
        run_dir.mkdir(parents=True, exist_ok=True)
        summary = args.func(args, config, run_dir)
    except ForumIntelError as exc:
        print(f"error [{args.command}] {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
