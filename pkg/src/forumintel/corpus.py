"""Ingestion of per-forum post dumps into a unified corpus.

Each source forum ships its own JSON schema; this module parses the raw
records, concatenates the text fields into ``full_text``, normalizes the
creation date to ISO-8601, and assigns sequential post ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

from .errors import EmptyCorpus, IoFailure, MalformedRecord, MissingAttribute, UnparseableDate

HIDDEN_ANSWERS = "hidden_answers"
DEEP_ANSWERS = "deep_answers"

# Per-forum schema: full declared attribute list, plus which attribute holds
# the main post text and which holds the creation date.
FORUM_SCHEMAS = {
    HIDDEN_ANSWERS: {
        "attributes": [
            "category", "title", "content", "answers", "created_at",
            "author", "tags", "comments", "best_answer", "up_votes", "down_votes",
        ],
        "main_text": "content",
        "date": "created_at",
    },
    DEEP_ANSWERS: {
        "attributes": [
            "category", "title", "question", "answers", "dataCreated",
            "author", "tags", "type", "votes", "points",
        ],
        "main_text": "question",
        "date": "dataCreated",
    },
}

# Accepted raw date formats, tried in order; ambiguous day/month values
# resolve as month-first because the source dumps use US-style dates.
_DATE_FORMATS = ("%m/%d/%Y", "%Y-%m-%d", "%d/%m/%Y")


@dataclass
class RawPost:
    """A post as it appears in a forum dump, schema still forum-specific."""

    source_forum: str
    attributes: dict[str, str]
    spillover: dict[str, str] = field(default_factory=dict)

    @property
    def title(self) -> str:
        return self.attributes["title"]

    @property
    def main_text(self) -> str:
        return self.attributes.get(FORUM_SCHEMAS[self.source_forum]["main_text"], "")

    @property
    def answers(self) -> str:
        return self.attributes.get("answers", "")

    @property
    def raw_date(self) -> str:
        return self.attributes.get(FORUM_SCHEMAS[self.source_forum]["date"], "")


@dataclass
class UnifiedPost:
    """One post after schema unification.

    Annotation fields (``ioc_report``, ``keyword_report``, ``cleaned_tokens``)
    start as None and are filled by later pipeline stages.
    """

    id: int
    category: str
    full_text: str
    created_at: str
    source: str = ""
    source_position: int = 0
    ioc_report: Optional[object] = None
    keyword_report: Optional[object] = None
    cleaned_tokens: Optional[list[str]] = None


@dataclass
class Corpus:
    posts: list[UnifiedPost]
    source_paths: list[str] = field(default_factory=list)
    ingested_at: str = ""
    parse_errors_by_file: dict[str, int] = field(default_factory=dict)

    @property
    def parse_errors(self) -> int:
        return sum(self.parse_errors_by_file.values())

    def __len__(self) -> int:
        return len(self.posts)

    def by_id(self, post_id: int) -> UnifiedPost:
        for post in self.posts:
            if post.id == post_id:
                return post
        raise KeyError(post_id)


def _as_text(value) -> str:
    """Flatten a dump attribute value into one text field.

    Lists (multiple answers/comments) join with single spaces in dump order.
    """
    if value is None:
        return ""
    if isinstance(value, list):
        return " ".join(part for part in (_as_text(v) for v in value) if part)
    if isinstance(value, (dict,)):
        return " ".join(part for part in (_as_text(v) for v in value.values()) if part)
    return str(value).strip()


def parse_raw_post(record: dict, forum: str) -> RawPost:
    """Parse one dump record against its forum schema.

    Recognized attributes are captured as text; anything outside the declared
    schema is preserved untouched in a spillover map.
    """
    if forum not in FORUM_SCHEMAS:
        raise MalformedRecord(f"unknown forum {forum!r}")
    if not isinstance(record, dict):
        raise MalformedRecord(f"record is not a key/value document: {type(record).__name__}")

    schema = FORUM_SCHEMAS[forum]
    known = set(schema["attributes"])
    attributes: dict[str, str] = {}
    spillover: dict[str, str] = {}
    for key, value in record.items():
        if key in known:
            attributes[key] = _as_text(value)
        else:
            spillover[key] = value

    if not attributes.get("title"):
        raise MissingAttribute(f"{forum} record has no title")
    if schema["main_text"] not in record:
        raise MissingAttribute(f"{forum} record has no {schema['main_text']!r} field")
    if not attributes.get("category"):
        raise MissingAttribute(f"{forum} record has no category")
    return RawPost(source_forum=forum, attributes=attributes, spillover=spillover)


def normalize_date(raw: str) -> str:
    """Normalize a raw date string to ISO-8601 (YYYY-MM-DD)."""
    raw = raw.strip()
    for fmt in _DATE_FORMATS:
        try:
            return datetime.strptime(raw, fmt).date().isoformat()
        except ValueError:
            continue
    raise UnparseableDate(f"unrecognized date {raw!r}")


def unify(raw: RawPost, next_id: int) -> UnifiedPost:
    """Build the unified record: title + main text + answers, single-spaced."""
    if next_id < 1:
        raise ValueError("post ids are positive integers")
    parts = [raw.title, raw.main_text, raw.answers]
    full_text = " ".join(part for part in parts if part)
    return UnifiedPost(
        id=next_id,
        category=raw.attributes.get("category", ""),
        full_text=full_text,
        created_at=normalize_date(raw.raw_date),
    )


def _iter_records(path: Path) -> Iterable[dict]:
    """Yield records from an array-form or newline-delimited JSON dump."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise IoFailure(f"{path} is not valid JSON: {exc}") from exc
        yield from data
    else:
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError:
                yield MalformedRecord(line[:80])  # surfaced by the caller


def load_corpus(dumps: list[tuple[str, str]], ingested_at: str | None = None) -> Corpus:
    """Ingest dump files into a corpus with sequential ids.

    ``dumps`` is a list of (path, forum) pairs. Records that fail to parse are
    counted, not fatal. By default the ingestion timestamp is derived from the
    newest input file so reruns over unchanged inputs produce identical
    artifacts; pass ``ingested_at`` to record wall-clock time instead.
    """
    posts: list[UnifiedPost] = []
    errors: dict[str, int] = {}
    paths = []
    next_id = 1
    for path_str, forum in dumps:
        path = Path(path_str)
        paths.append(str(path))
        errors[str(path)] = 0
        position = 0
        for record in _iter_records(path):
            position += 1
            if isinstance(record, MalformedRecord):
                errors[str(path)] += 1
                continue
            try:
                post = unify(parse_raw_post(record, forum), next_id)
            except (MalformedRecord, UnparseableDate):
                errors[str(path)] += 1
                continue
            post.source = str(path)
            post.source_position = position
            posts.append(post)
            next_id += 1

    if not posts:
        raise EmptyCorpus(f"no valid posts in {', '.join(paths) or 'the given dumps'}")
    if ingested_at is None:
        newest = max(Path(p).stat().st_mtime for p in paths)
        ingested_at = datetime.fromtimestamp(newest, tz=timezone.utc).isoformat()
    return Corpus(posts=posts, source_paths=paths, ingested_at=ingested_at,
                  parse_errors_by_file=errors)


# -- unified-corpus serialization -------------------------------------------

def post_to_dict(post: UnifiedPost) -> dict:
    rec = {
        "id": post.id,
        "category": post.category,
        "full_text": post.full_text,
        "created_at": post.created_at,
        "source": post.source,
        "source_position": post.source_position,
    }
    if post.ioc_report is not None:
        rec.update(post.ioc_report.to_columns())
        rec["ioc_matches"] = post.ioc_report.matches_to_dicts()
    if post.keyword_report is not None:
        rec["keywords"] = sorted(post.keyword_report.matched)
        rec["KEYWORD"] = post.keyword_report.flag
    if post.cleaned_tokens is not None:
        rec["cleaned_tokens"] = post.cleaned_tokens
    return rec


def post_from_dict(rec: dict) -> UnifiedPost:
    from .ioc import IocReport
    from .labeling import KeywordReport

    post = UnifiedPost(
        id=rec["id"],
        category=rec["category"],
        full_text=rec["full_text"],
        created_at=rec["created_at"],
        source=rec.get("source", ""),
        source_position=rec.get("source_position", 0),
    )
    if "IOC" in rec:
        post.ioc_report = IocReport.from_record(rec)
    if "KEYWORD" in rec:
        post.keyword_report = KeywordReport(matched=rec.get("keywords", []))
    if "cleaned_tokens" in rec:
        post.cleaned_tokens = list(rec["cleaned_tokens"])
    return post


def write_corpus(corpus: Corpus, path: str | Path, meta: dict | None = None) -> None:
    """Write the corpus as newline-delimited JSON, one meta line first."""
    header = {
        "_meta": {
            "source_paths": corpus.source_paths,
            "ingested_at": corpus.ingested_at,
            "parse_errors_by_file": corpus.parse_errors_by_file,
            **(meta or {}),
        }
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, ensure_ascii=False, sort_keys=True) + "\n")
        for post in corpus.posts:
            fh.write(json.dumps(post_to_dict(post), ensure_ascii=False, sort_keys=True) + "\n")


def read_corpus(path: str | Path) -> tuple[Corpus, dict]:
    """Read a corpus artifact back; returns (corpus, meta)."""
    posts = []
    meta: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if "_meta" in rec:
                    meta = rec["_meta"]
                    continue
                posts.append(post_from_dict(rec))
    except OSError as exc:
        raise IoFailure(f"cannot read corpus {path}: {exc}") from exc
    corpus = Corpus(
        posts=posts,
        source_paths=meta.get("source_paths", []),
        ingested_at=meta.get("ingested_at", ""),
        parse_errors_by_file=meta.get("parse_errors_by_file", {}),
    )
    return corpus, meta
