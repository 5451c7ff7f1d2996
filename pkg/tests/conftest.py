import json

import pytest

from forumintel.corpus import Corpus, UnifiedPost, load_corpus
from forumintel.ioc import IocMatch, IocReport
from forumintel.labeling import KeywordReport

HIDDEN_RECORDS = [
    {"title": "senha vazou", "content": "minha senha vazou no site ruim.example.com",
     "answers": "troca a senha", "created_at": "11/26/2016", "category": "hack",
     "author": "anon1", "tags": ["leak"], "comments": [], "best_answer": "",
     "up_votes": 3, "down_votes": 0},
    {"title": "duvida vpn", "content": "qual vpn boa para anonimato",
     "answers": ["usa tor", "qualquer uma paga"], "created_at": "01/05/2020",
     "category": "privacidade", "author": "anon2", "tags": [], "comments": [],
     "best_answer": "", "up_votes": 1, "down_votes": 1},
    {"title": "bom dia", "content": "como voces estao hoje",
     "answers": "", "created_at": "07/31/2021", "category": "offtopic",
     "author": "anon3", "tags": [], "comments": [], "best_answer": "",
     "up_votes": 0, "down_votes": 0},
]

DEEP_RECORDS = [
    {"title": "exploit novo", "question": "vendo exploit para CVE-2021-44228 contato x9@mail.example",
     "answers": "", "dataCreated": "08/24/2021", "category": "mercado",
     "author": "anon4", "tags": [], "type": "question", "votes": 2, "points": 10},
    {"title": "pergunta simples", "question": "alguem conhece um forum de jogos",
     "answers": "tem varios", "dataCreated": "09/14/2022", "category": "geral",
     "author": "anon5", "tags": [], "type": "question", "votes": 0, "points": 0},
]


@pytest.fixture
def dump_files(tmp_path):
    """One NDJSON dump and one array-form dump, as the forums ship them."""
    hidden = tmp_path / "hidden_answers.jsonl"
    hidden.write_text(
        "\n".join(json.dumps(r, ensure_ascii=False) for r in HIDDEN_RECORDS),
        encoding="utf-8",
    )
    deep = tmp_path / "deep_answers.json"
    deep.write_text(json.dumps(DEEP_RECORDS, ensure_ascii=False), encoding="utf-8")
    return [(str(hidden), "hidden_answers"), (str(deep), "deep_answers")]


@pytest.fixture
def small_corpus(dump_files):
    return load_corpus(dump_files, ingested_at="2024-01-01T00:00:00+00:00")


def make_flagged_post(post_id, ioc: bool, keyword: bool, category="cat",
                      text="texto qualquer") -> UnifiedPost:
    """A post with planted IOC/KEYWORD flags, bypassing extraction."""
    post = UnifiedPost(id=post_id, category=category, full_text=text,
                       created_at="2022-01-01")
    matches = []
    if ioc:
        matches.append(IocMatch("ipv4", "10.0.0.1", 0, 8))
    post.ioc_report = IocReport(matches=matches)
    post.keyword_report = KeywordReport(matched={"senha"} if keyword else set())
    post.cleaned_tokens = text.split()
    return post


def make_flagged_corpus(flags: list[tuple[bool, bool]]) -> Corpus:
    """Corpus with one post per (ioc, keyword) flag pair, ids 1..n."""
    posts = [make_flagged_post(i + 1, ioc, kw) for i, (ioc, kw) in enumerate(flags)]
    return Corpus(posts=posts, ingested_at="2024-01-01T00:00:00+00:00")
