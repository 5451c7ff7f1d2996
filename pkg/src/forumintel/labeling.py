"""Keyword flagging and the two-pass labeling procedure.

Pass one is purely rule-based: a post with both an IoC and a keyword is
Relevant, a post with neither is NotRelevant, everything else goes to a
manual review queue. Pass two merges journaled human decisions back in to
cover the whole corpus.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from .corpus import Corpus, UnifiedPost
from .errors import EmptyDataset, IncompleteReview, UnknownPostId
from .textprep import deaccent, load_wordlist

RELEVANT = "Relevant"
NOT_RELEVANT = "NotRelevant"
NEEDS_REVIEW = "NeedsReview"

RULE = "rule"
MANUAL = "manual"

DATASET_I = "DatasetI"
DATASET_II = "DatasetII"


def default_keywords() -> frozenset[str]:
    path = Path(str(resources.files("forumintel").joinpath("data/keywords.txt")))
    return load_wordlist(path)


class KeywordReport:
    """Keyword matches for one post; the YES/NO flag is derived."""

    def __init__(self, matched=None):
        self.matched: set[str] = set(matched or ())

    @property
    def flag(self) -> str:
        return "YES" if self.matched else "NO"

    def __repr__(self) -> str:
        return f"KeywordReport(matched={sorted(self.matched)!r})"


def detect_keywords(tokens, keywords: frozenset[str]) -> KeywordReport:
    """Whole-token keyword matching over cleaned tokens."""
    return KeywordReport(matched=set(tokens) & set(keywords))


def rule_label(ioc_flag: str, keyword_flag: str) -> str:
    """Total rule over the four flag combinations."""
    ioc = ioc_flag == "YES"
    keyword = keyword_flag == "YES"
    if ioc and keyword:
        return RELEVANT
    if not ioc and not keyword:
        return NOT_RELEVANT
    return NEEDS_REVIEW


def post_rule_outcome(post: UnifiedPost) -> str:
    if post.ioc_report is None or post.keyword_report is None:
        raise ValueError(f"post {post.id} is missing IOC/KEYWORD flags")
    return rule_label(post.ioc_report.aggregate_flag, post.keyword_report.flag)


def annotate_corpus_keywords(corpus: Corpus, keywords: frozenset[str] | None = None) -> Corpus:
    if keywords is None:
        keywords = default_keywords()
    for post in corpus.posts:
        if post.cleaned_tokens is None:
            raise ValueError(f"post {post.id} has no cleaned tokens; run preprocessing first")
        post.keyword_report = detect_keywords(post.cleaned_tokens, keywords)
    return corpus


@dataclass
class LabelRecord:
    post_id: int
    label: str
    provenance: str
    decided_at: str

    def to_dict(self) -> dict:
        return {
            "post_id": self.post_id,
            "label": self.label,
            "provenance": self.provenance,
            "decided_at": self.decided_at,
        }


@dataclass
class LabeledDataset:
    name: str
    records: list[tuple[UnifiedPost, LabelRecord]]

    @property
    def class_counts(self) -> dict[str, int]:
        counts = {RELEVANT: 0, NOT_RELEVANT: 0}
        for _, rec in self.records:
            counts[rec.label] += 1
        return counts

    def __len__(self) -> int:
        return len(self.records)

    def labels(self) -> list[str]:
        return [rec.label for _, rec in self.records]

    def posts(self) -> list[UnifiedPost]:
        return [post for post, _ in self.records]


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def build_dataset_one(corpus: Corpus, decided_at: str | None = None) -> LabeledDataset:
    """Rule-labeled dataset: both-flags and neither-flags posts only."""
    decided_at = decided_at or _now()
    records = []
    for post in corpus.posts:
        outcome = post_rule_outcome(post)
        if outcome == NEEDS_REVIEW:
            continue
        records.append((post, LabelRecord(post.id, outcome, RULE, decided_at)))
    if not records:
        raise EmptyDataset("no post passed the labeling rule")
    return LabeledDataset(name=DATASET_I, records=records)


def apply_manual_labels(
    corpus: Corpus,
    decisions: list[tuple[int, str]],
    strict: bool = True,
    decided_at: str | None = None,
) -> LabeledDataset:
    """Merge manual decisions over the rule labels.

    In strict mode every NeedsReview post must be covered and the result spans
    the whole corpus. In incremental mode uncovered NeedsReview posts are
    simply left out.
    """
    decided_at = decided_at or _now()
    ids = {post.id for post in corpus.posts}
    decision_map: dict[int, str] = {}
    for post_id, label in decisions:
        if post_id not in ids:
            raise UnknownPostId(f"decision for unknown post id {post_id}")
        if label not in (RELEVANT, NOT_RELEVANT):
            raise ValueError(f"invalid label {label!r} for post {post_id}")
        decision_map[post_id] = label  # last write wins

    records = []
    missing = []
    for post in corpus.posts:
        outcome = post_rule_outcome(post)
        if post.id in decision_map:
            records.append(
                (post, LabelRecord(post.id, decision_map[post.id], MANUAL, decided_at))
            )
        elif outcome == NEEDS_REVIEW:
            missing.append(post.id)
        else:
            records.append((post, LabelRecord(post.id, outcome, RULE, decided_at)))

    if strict and missing:
        raise IncompleteReview(
            f"{len(missing)} posts still need review (first: {missing[:5]})"
        )
    name = DATASET_II if strict else "Custom"
    return LabeledDataset(name=name, records=records)


# -- review queue -------------------------------------------------------------

class LabelJournal:
    """Append-only decision log; last write per post id wins.

    Every accepted decision is flushed to disk before it is acknowledged, so a
    crash mid-review loses nothing already confirmed.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._decisions: dict[int, LabelRecord] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                self._decisions[rec["post_id"]] = LabelRecord(
                    rec["post_id"], rec["label"], rec.get("provenance", MANUAL),
                    rec.get("decided_at", ""),
                )

    def append(self, post_id: int, label: str, provenance: str = MANUAL) -> LabelRecord:
        record = LabelRecord(post_id, label, provenance, _now())
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
            fh.flush()
        self._decisions[post_id] = record
        return record

    def decisions(self) -> dict[int, LabelRecord]:
        return dict(self._decisions)

    def decision_pairs(self) -> list[tuple[int, str]]:
        return [(pid, rec.label) for pid, rec in sorted(self._decisions.items())]

    def __len__(self) -> int:
        return len(self._decisions)


@dataclass
class ReviewItem:
    post_id: int
    category: str
    full_text: str
    ioc_spans: list[dict]
    keyword_spans: list[dict]
    rule_outcome: str

    def to_dict(self) -> dict:
        return {
            "id": self.post_id,
            "category": self.category,
            "full_text": self.full_text,
            "ioc_spans": self.ioc_spans,
            "keyword_spans": self.keyword_spans,
            "rule_outcome": self.rule_outcome,
        }


def keyword_display_spans(full_text: str, matched: set[str]) -> list[dict]:
    """Locate matched keywords in the raw text for highlighting.

    Keywords were matched on cleaned (lowercased, deaccented) tokens, so the
    raw text is normalized character-by-character before searching; the
    normalization is 1:1 for Portuguese accents, keeping offsets valid.
    """
    chars = []
    for ch in full_text.lower():
        base = deaccent(ch)
        chars.append(base if len(base) == 1 else ch)
    normalized = "".join(chars)
    spans = []
    for word in sorted(matched):
        for m in re.finditer(rf"(?<![a-z0-9]){re.escape(word)}(?![a-z0-9])", normalized):
            spans.append({"word": word, "start": m.start(), "end": m.end()})
    spans.sort(key=lambda s: (s["start"], s["end"]))
    return spans


def review_queue(corpus: Corpus, journal: LabelJournal) -> list[ReviewItem]:
    """NeedsReview posts without a decision, ordered by id."""
    decided = journal.decisions()
    items = []
    for post in sorted(corpus.posts, key=lambda p: p.id):
        if post_rule_outcome(post) != NEEDS_REVIEW or post.id in decided:
            continue
        ioc_spans = [
            {"type": m.ioc_type, "value": m.value, "start": m.start, "end": m.end}
            for m in post.ioc_report.unsuppressed()
        ]
        kw_spans = keyword_display_spans(post.full_text, post.keyword_report.matched)
        items.append(ReviewItem(
            post_id=post.id,
            category=post.category,
            full_text=post.full_text,
            ioc_spans=ioc_spans,
            keyword_spans=kw_spans,
            rule_outcome=NEEDS_REVIEW,
        ))
    return items


# -- dataset persistence ------------------------------------------------------

def write_dataset(dataset: LabeledDataset, path: str | Path, meta: dict | None = None) -> None:
    from .corpus import post_to_dict

    header = {"_meta": {"name": dataset.name, "class_counts": dataset.class_counts,
                        **(meta or {})}}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, ensure_ascii=False, sort_keys=True) + "\n")
        for post, rec in dataset.records:
            row = post_to_dict(post)
            row.update(rec.to_dict())
            del row["post_id"]  # duplicate of id
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")


def read_dataset(path: str | Path) -> tuple[LabeledDataset, dict]:
    from .corpus import post_from_dict

    records = []
    meta: dict = {}
    name = "Custom"
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if "_meta" in rec:
                meta = rec["_meta"]
                name = meta.get("name", name)
                continue
            post = post_from_dict(rec)
            records.append((post, LabelRecord(
                post.id, rec["label"], rec.get("provenance", RULE), rec.get("decided_at", ""),
            )))
    return LabeledDataset(name=name, records=records), meta
