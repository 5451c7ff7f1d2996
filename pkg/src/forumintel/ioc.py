"""Indicator-of-compromise extraction over raw post text.

Extraction runs on ``full_text`` BEFORE any text cleaning: dots, at-signs and
slashes are exactly what the grammars need. Fourteen atomic indicator types
are recognized; overlap between url/email/domain/ipv4 is resolved by
precedence so a URL does not also flag its own host as a domain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

URL = "url"
EMAIL = "email"
DOMAIN = "domain"
MD5 = "md5"
SHA1 = "sha1"
SHA256 = "sha256"
SHA512 = "sha512"
SSDEEP = "ssdeep"
IPV4 = "ipv4"
IPV6 = "ipv6"
ASN = "asn"
CVE = "cve"
MAC = "mac"
REGISTRY_KEY_PATH = "registry_key_path"

IOC_TYPES = (
    URL, EMAIL, DOMAIN, MD5, SHA1, SHA256, SHA512,
    SSDEEP, IPV4, IPV6, ASN, CVE, MAC, REGISTRY_KEY_PATH,
)

# The email grammar reproduces the production pattern verbatim, including the
# unescaped dots (which match any character). Changing it would change which
# posts get flagged, so it stays bug-compatible.
EMAIL_PATTERN = r"[a-zA-Z0-9.]+@[a-zA-Z0-9]+.[a-zA-Z]+(.[a-zA-Z]+)*"

_OCTET = r"(?:25[0-5]|2[0-4]\d|1\d\d|[1-9]?\d)"
_HEXG = r"[0-9A-Fa-f]{1,4}"

_PATTERNS: dict[str, re.Pattern] = {
    URL: re.compile(r"\b(?:https?|ftp)://[^\s<>\"']+", re.IGNORECASE),
    EMAIL: re.compile(EMAIL_PATTERN),
    DOMAIN: re.compile(
        r"\b(?:[a-z0-9](?:[a-z0-9-]*[a-z0-9])?\.)+[a-z]{2,}\b", re.IGNORECASE
    ),
    MD5: re.compile(r"\b[0-9a-fA-F]{32}\b"),
    SHA1: re.compile(r"\b[0-9a-fA-F]{40}\b"),
    SHA256: re.compile(r"\b[0-9a-fA-F]{64}\b"),
    SHA512: re.compile(r"\b[0-9a-fA-F]{128}\b"),
    SSDEEP: re.compile(r"\b\d+:[A-Za-z0-9/+]{3,}:[A-Za-z0-9/+]{3,}(?![A-Za-z0-9/+:])"),
    IPV4: re.compile(
        rf"(?<!\w)(?<!\.){_OCTET}(?:\.{_OCTET}){{3}}(?!\w)(?!\.\d)"
    ),
    IPV6: re.compile(
        rf"(?<![\w:])(?:"
        rf"(?:{_HEXG}:){{7}}{_HEXG}"                                  # full form
        rf"|(?:{_HEXG}:){{1,7}}:(?:{_HEXG}(?::{_HEXG}){{0,5}})?"      # a::b
        rf"|::(?:{_HEXG}(?::{_HEXG}){{0,6}})"                         # ::b
        rf")(?![\w:])"
    ),
    ASN: re.compile(r"\bAS\d{1,10}\b"),
    CVE: re.compile(r"\bCVE-\d{4}-\d{4,7}\b", re.IGNORECASE),
    MAC: re.compile(
        r"(?<![0-9A-Fa-f])(?<![0-9A-Fa-f][:-])"
        r"[0-9A-Fa-f]{2}([:-])(?:[0-9A-Fa-f]{2}\1){4}[0-9A-Fa-f]{2}"
        r"(?![0-9A-Fa-f])(?![:-][0-9A-Fa-f])"
    ),
    REGISTRY_KEY_PATH: re.compile(
        r"\b(?:HKEY_LOCAL_MACHINE|HKEY_CURRENT_USER|HKEY_CLASSES_ROOT|HKEY_USERS"
        r"|HKEY_CURRENT_CONFIG|HKLM|HKCU|HKCR|HKU|HKCC)(?:\\[\w.()-]+)+"
    ),
}

# Lower types in this chain lose to overlapping matches of higher ones.
_PRECEDENCE = (URL, EMAIL, DOMAIN, IPV4)

_URL_TRAILING_JUNK = ".,;:!?)"


@dataclass
class IocMatch:
    ioc_type: str
    value: str
    start: int
    end: int
    suppressed: bool = False

    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass
class IocReport:
    matches: list[IocMatch] = field(default_factory=list)

    @property
    def per_type_flag(self) -> dict[str, int]:
        flags = {t: 0 for t in IOC_TYPES}
        for m in self.matches:
            if not m.suppressed:
                flags[m.ioc_type] = 1
        return flags

    @property
    def aggregate_flag(self) -> str:
        return "YES" if any(self.per_type_flag.values()) else "NO"

    def unsuppressed(self) -> list[IocMatch]:
        return [m for m in self.matches if not m.suppressed]

    def to_columns(self) -> dict:
        cols: dict = dict(self.per_type_flag)
        cols["IOC"] = self.aggregate_flag
        return cols

    def matches_to_dicts(self) -> list[dict]:
        return [
            {"type": m.ioc_type, "value": m.value, "start": m.start,
             "end": m.end, "suppressed": m.suppressed}
            for m in self.matches
        ]

    @classmethod
    def from_record(cls, rec: dict) -> "IocReport":
        matches = [
            IocMatch(d["type"], d["value"], d["start"], d["end"], d["suppressed"])
            for d in rec.get("ioc_matches", [])
        ]
        return cls(matches=matches)


def _overlaps(a: IocMatch, b: IocMatch) -> bool:
    return a.start < b.end and b.start < a.end


def extract_iocs(text: str) -> IocReport:
    """Scan raw text for every indicator grammar.

    Returns all matches with byte offsets; suppression rules have not been
    applied yet, so every match starts unsuppressed.
    """
    matches: list[IocMatch] = []
    for ioc_type, pattern in _PATTERNS.items():
        for m in pattern.finditer(text):
            value = m.group(0)
            end = m.end()
            if ioc_type == URL:
                trimmed = value.rstrip(_URL_TRAILING_JUNK)
                end -= len(value) - len(trimmed)
                value = trimmed
            matches.append(IocMatch(ioc_type, value, m.start(), end))

    # Precedence filter: drop matches overlapped by a strictly higher type.
    kept: list[IocMatch] = []
    for match in matches:
        if match.ioc_type in _PRECEDENCE:
            rank = _PRECEDENCE.index(match.ioc_type)
            winners = [
                other for other in matches
                if other.ioc_type in _PRECEDENCE[:rank] and _overlaps(match, other)
            ]
            if winners:
                continue
        kept.append(match)

    kept.sort(key=lambda m: (m.start, m.end, m.ioc_type))
    return IocReport(matches=kept)


# -- false-positive suppression ----------------------------------------------

@dataclass
class SuppressionRule:
    ioc_type: str
    cue: str = ""        # whole-word cue within the 12 chars before the match
    exact_value: str = ""  # or: suppress matches whose text equals this

    CUE_WINDOW = 12


def default_rules_path() -> Path:
    return Path(str(resources.files("forumintel").joinpath("data/suppression_rules.tsv")))


def load_suppression_rules(path: str | Path | None = None) -> list[SuppressionRule]:
    """Parse a ruleset file of ``type<TAB>cue`` lines (# comments allowed)."""
    path = Path(path) if path is not None else default_rules_path()
    rules = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        ioc_type, _, cue = line.partition("\t")
        ioc_type = ioc_type.strip().lower()
        cue = cue.strip()
        if not cue or ioc_type not in IOC_TYPES:
            continue
        if cue.startswith("="):
            rules.append(SuppressionRule(ioc_type, exact_value=cue[1:]))
        else:
            rules.append(SuppressionRule(ioc_type, cue=cue.lower()))
    return rules


def suppress_false_positives(
    report: IocReport, text: str, rules: list[SuppressionRule]
) -> IocReport:
    """Mark matches that fit a suppression rule; flags recompute lazily."""
    for match in report.matches:
        for rule in rules:
            if rule.ioc_type != match.ioc_type:
                continue
            if rule.exact_value:
                if match.value == rule.exact_value:
                    match.suppressed = True
                    break
            else:
                window = text[max(0, match.start - SuppressionRule.CUE_WINDOW):match.start]
                if re.search(rf"\b{re.escape(rule.cue)}\b", window, re.IGNORECASE):
                    match.suppressed = True
                    break
    return report


def annotate_corpus_iocs(corpus, rules: list[SuppressionRule] | None = None):
    """Attach an IocReport to every post; returns per-type match counts."""
    if rules is None:
        rules = load_suppression_rules()
    counts = {t: 0 for t in IOC_TYPES}
    for post in corpus.posts:
        report = suppress_false_positives(extract_iocs(post.full_text), post.full_text, rules)
        post.ioc_report = report
        for t, flag in report.per_type_flag.items():
            counts[t] += flag
    return corpus, counts
