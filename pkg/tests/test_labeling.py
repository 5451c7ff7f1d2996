import random

import pytest

from conftest import make_flagged_corpus, make_flagged_post
from forumintel.corpus import Corpus
from forumintel.errors import EmptyDataset, IncompleteReview, UnknownPostId
from forumintel.labeling import (
    MANUAL,
    NEEDS_REVIEW,
    NOT_RELEVANT,
    RELEVANT,
    RULE,
    LabelJournal,
    apply_manual_labels,
    build_dataset_one,
    default_keywords,
    detect_keywords,
    keyword_display_spans,
    review_queue,
    rule_label,
)


def test_detect_keywords_default_list():
    keywords = default_keywords()
    report = detect_keywords(["senha", "vazou"], keywords)
    assert report.matched == {"senha"}
    assert report.flag == "YES"


def test_detect_keywords_none():
    assert detect_keywords(["bom", "dia"], default_keywords()).flag == "NO"


def test_detect_keywords_multiple():
    report = detect_keywords(["novo", "exploit", "ddos"], default_keywords())
    assert report.matched == {"exploit", "ddos"}


def test_detect_is_whole_token():
    # "fishing" and "phishing" are distinct entries, not substrings
    keywords = default_keywords()
    assert detect_keywords(["phishing"], keywords).matched == {"phishing"}
    assert detect_keywords(["fishingboat"], keywords).matched == set()


@pytest.mark.parametrize("ioc,kw,expected", [
    ("YES", "YES", RELEVANT),
    ("NO", "NO", NOT_RELEVANT),
    ("YES", "NO", NEEDS_REVIEW),
    ("NO", "YES", NEEDS_REVIEW),
])
def test_rule_label_total(ioc, kw, expected):
    assert rule_label(ioc, kw) == expected


def test_dataset_one_includes_only_definite_outcomes():
    corpus = make_flagged_corpus([(True, True), (False, False), (True, False), (False, True)])
    dataset = build_dataset_one(corpus)
    assert len(dataset) == 2
    assert dataset.class_counts == {RELEVANT: 1, NOT_RELEVANT: 1}


def test_dataset_one_empty_raises():
    corpus = make_flagged_corpus([(True, False), (False, True)])
    with pytest.raises(EmptyDataset):
        build_dataset_one(corpus)


def test_set_algebra_invariants_random(tmp_path):
    rng = random.Random(21)
    for case in range(30):
        flags = [(rng.random() < 0.4, rng.random() < 0.4) for _ in range(rng.randint(2, 60))]
        if not any(i == k for i, k in flags):
            flags.append((True, True))
        corpus = make_flagged_corpus(flags)
        dataset = build_dataset_one(corpus)
        journal = LabelJournal(tmp_path / f"journal_{case}.ndjson")
        queue = review_queue(corpus, journal)
        both = sum(1 for i, k in flags if i and k)
        neither = sum(1 for i, k in flags if not i and not k)
        assert len(dataset) == both + neither
        assert len(dataset) + len(queue) == len(corpus)


def test_apply_manual_strict_covers_corpus(tmp_path):
    corpus = make_flagged_corpus([(True, True), (True, False), (False, True), (False, False)])
    decisions = [(2, RELEVANT), (3, NOT_RELEVANT)]
    dataset = apply_manual_labels(corpus, decisions, strict=True)
    assert dataset.name == "DatasetII"
    assert len(dataset) == len(corpus)
    assert dataset.class_counts == {RELEVANT: 2, NOT_RELEVANT: 2}
    by_id = {post.id: rec for post, rec in dataset.records}
    assert by_id[1].provenance == RULE
    assert by_id[2].provenance == MANUAL


def test_apply_manual_incremental_no_decisions():
    corpus = make_flagged_corpus([(True, True), (True, False), (False, False)])
    dataset = apply_manual_labels(corpus, [], strict=False)
    rule_only = build_dataset_one(corpus)
    assert len(dataset) == len(rule_only)
    assert dataset.class_counts == rule_only.class_counts


def test_apply_manual_unknown_id():
    corpus = make_flagged_corpus([(True, True)])
    with pytest.raises(UnknownPostId):
        apply_manual_labels(corpus, [(99, RELEVANT)], strict=False)


def test_apply_manual_strict_incomplete():
    corpus = make_flagged_corpus([(True, False), (False, False)])
    with pytest.raises(IncompleteReview):
        apply_manual_labels(corpus, [], strict=True)


def test_manual_override_of_rule_label():
    corpus = make_flagged_corpus([(True, True), (False, False)])
    dataset = apply_manual_labels(corpus, [(1, NOT_RELEVANT)], strict=True)
    by_id = {post.id: rec for post, rec in dataset.records}
    assert by_id[1].label == NOT_RELEVANT
    assert by_id[1].provenance == MANUAL


def test_review_queue_excludes_decided(tmp_path):
    corpus = make_flagged_corpus([(True, False), (False, True), (True, False)])
    journal = LabelJournal(tmp_path / "journal.ndjson")
    assert len(review_queue(corpus, journal)) == 3
    journal.append(2, RELEVANT)
    queue = review_queue(corpus, journal)
    assert [item.post_id for item in queue] == [1, 3]
    journal.append(1, NOT_RELEVANT)
    journal.append(3, NOT_RELEVANT)
    assert review_queue(corpus, journal) == []


def test_review_item_carries_spans(tmp_path):
    post = make_flagged_post(1, ioc=True, keyword=False, text="ip 10.0.0.1 aqui")
    post.ioc_report.matches[0].start = 3
    post.ioc_report.matches[0].end = 11
    corpus = Corpus(posts=[post])
    journal = LabelJournal(tmp_path / "j.ndjson")
    item = review_queue(corpus, journal)[0]
    assert item.ioc_spans == [{"type": "ipv4", "value": "10.0.0.1", "start": 3, "end": 11}]


def test_journal_survives_restart(tmp_path):
    path = tmp_path / "journal.ndjson"
    journal = LabelJournal(path)
    journal.append(1, RELEVANT)
    journal.append(2, NOT_RELEVANT)
    journal.append(1, NOT_RELEVANT)  # last write wins
    reopened = LabelJournal(path)
    assert reopened.decision_pairs() == [(1, NOT_RELEVANT), (2, NOT_RELEVANT)]


def test_keyword_display_spans_accent_insensitive():
    text = "O vírus roubou a SENHA dela"
    spans = keyword_display_spans(text, {"virus", "senha"})
    values = {text[s["start"]:s["end"]] for s in spans}
    assert values == {"vírus", "SENHA"}


def test_keyword_display_spans_whole_word():
    spans = keyword_display_spans("hashes e hash", {"hash"})
    assert [(s["start"], s["end"]) for s in spans] == [(9, 13)]
