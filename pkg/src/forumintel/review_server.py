"""Loopback HTTP service for the manual labeling stage.

Serves the review queue with highlight spans, accepts Relevant/NotRelevant
decisions (journaled before acknowledgment), and exposes progress stats plus
the latest metrics report. If a UI directory is configured its static files
are served at the root path.
"""

from __future__ import annotations

import json
import mimetypes
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .corpus import Corpus
from .errors import CorpusMissing, PortBusy
from .labeling import (
    NEEDS_REVIEW,
    NOT_RELEVANT,
    RELEVANT,
    LabelJournal,
    ReviewItem,
    keyword_display_spans,
    post_rule_outcome,
)

_POST_DECISION = re.compile(r"^/api/review/(\d+)$")


class ReviewService:
    """Queue + journal state shared by the request handlers.

    Reads are lock-free snapshots; decision writes serialize through a lock
    and hit the journal before the response is sent.
    """

    def __init__(self, corpus: Corpus, journal: LabelJournal,
                 metrics_path: str | Path | None = None):
        self.corpus = corpus
        self.journal = journal
        self.metrics_path = Path(metrics_path) if metrics_path else None
        self._lock = threading.Lock()
        self._items: list[ReviewItem] = []
        self._ids = {post.id for post in corpus.posts}
        for post in sorted(corpus.posts, key=lambda p: p.id):
            if post_rule_outcome(post) != NEEDS_REVIEW:
                continue
            self._items.append(ReviewItem(
                post_id=post.id,
                category=post.category,
                full_text=post.full_text,
                ioc_spans=[
                    {"type": m.ioc_type, "value": m.value, "start": m.start, "end": m.end}
                    for m in post.ioc_report.unsuppressed()
                ],
                keyword_spans=keyword_display_spans(
                    post.full_text, post.keyword_report.matched
                ),
                rule_outcome=NEEDS_REVIEW,
            ))

    def queued(self) -> int:
        decided = self.journal.decisions()
        return sum(1 for item in self._items if item.post_id not in decided)

    def next_item(self, exclude: set[int]) -> ReviewItem | None:
        decided = self.journal.decisions()
        for item in self._items:
            if item.post_id not in decided and item.post_id not in exclude:
                return item
        return None

    def submit(self, post_id: int, label: str) -> int:
        if post_id not in self._ids:
            raise KeyError(post_id)
        if label not in (RELEVANT, NOT_RELEVANT):
            raise ValueError(label)
        with self._lock:
            self.journal.append(post_id, label)
        return self.queued()

    def stats(self) -> dict:
        decisions = self.journal.decisions()
        labels = [rec.label for rec in decisions.values()]
        return {
            "queued": self.queued(),
            "decided": len(decisions),
            "relevant": labels.count(RELEVANT),
            "not_relevant": labels.count(NOT_RELEVANT),
        }

    def report_summary(self) -> dict | None:
        if self.metrics_path and self.metrics_path.exists():
            return json.loads(self.metrics_path.read_text(encoding="utf-8"))
        return None


def _make_handler(service: ReviewService, ui_dir: Path | None):
    class ReviewHandler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, payload, status=200):
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            url = urlparse(self.path)
            if url.path == "/api/review/next":
                query = parse_qs(url.query)
                exclude = set()
                for chunk in query.get("exclude", []):
                    exclude.update(int(x) for x in chunk.split(",") if x.strip().isdigit())
                item = service.next_item(exclude)
                if item is None:
                    self._send_json({"done": True, "queued": service.queued()})
                else:
                    payload = item.to_dict()
                    payload["queued"] = service.queued()
                    self._send_json(payload)
            elif url.path == "/api/review/stats":
                self._send_json(service.stats())
            elif url.path == "/api/report/summary":
                summary = service.report_summary()
                if summary is None:
                    self._send_json({"error": "no metrics report available"}, status=404)
                else:
                    self._send_json(summary)
            else:
                self._serve_static(url.path)

        def do_POST(self):
            match = _POST_DECISION.match(urlparse(self.path).path)
            if not match:
                self._send_json({"error": "unknown endpoint"}, status=404)
                return
            length = int(self.headers.get("Content-Length", 0))
            try:
                body = json.loads(self.rfile.read(length).decode("utf-8") or "{}")
                label = body["label"]
            except (json.JSONDecodeError, KeyError, UnicodeDecodeError):
                self._send_json({"error": "body must be JSON with a 'label' field"},
                                status=400)
                return
            try:
                queued = service.submit(int(match.group(1)), label)
            except KeyError:
                self._send_json({"error": f"unknown post id {match.group(1)}"}, status=404)
                return
            except ValueError:
                self._send_json({"error": f"invalid label {label!r}"}, status=400)
                return
            self._send_json({"ok": True, "queued": queued})

        def _serve_static(self, path):
            if ui_dir is None:
                self._send_json({"error": "not found"}, status=404)
                return
            rel = path.lstrip("/") or "index.html"
            target = (ui_dir / rel).resolve()
            if not target.is_relative_to(ui_dir.resolve()) or not target.is_file():
                self._send_json({"error": "not found"}, status=404)
                return
            body = target.read_bytes()
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return ReviewHandler


def create_server(service: ReviewService, host="127.0.0.1", port=8377,
                  ui_dir: str | Path | None = None) -> ThreadingHTTPServer:
    handler = _make_handler(service, Path(ui_dir) if ui_dir else None)
    try:
        return ThreadingHTTPServer((host, port), handler)
    except OSError as exc:
        raise PortBusy(f"cannot bind {host}:{port}: {exc}") from exc


def serve_review(corpus_path: str | Path, journal_path: str | Path,
                 metrics_path: str | Path | None = None, host="127.0.0.1",
                 port=8377, ui_dir=None) -> ThreadingHTTPServer:
    """Build the service from artifacts and return a ready (unstarted) server."""
    from .corpus import read_corpus

    corpus_path = Path(corpus_path)
    if not corpus_path.exists():
        raise CorpusMissing(f"annotated corpus not found at {corpus_path}")
    corpus, _ = read_corpus(corpus_path)
    for post in corpus.posts:
        if post.ioc_report is None or post.keyword_report is None:
            raise CorpusMissing(
                f"post {post.id} lacks IOC/KEYWORD annotations; run the "
                "extract-ioc, preprocess and label stages first"
            )
    journal = LabelJournal(journal_path)
    service = ReviewService(corpus, journal, metrics_path)
    return create_server(service, host=host, port=port, ui_dir=ui_dir)
