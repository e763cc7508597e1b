"""Tweet-aware cleaning/tokenization and hashtag-based corpus partitioning.

Cleaning rules, in order: Unicode NFC, lowercase, drop URLs, drop
@-mentions, delete punctuation and symbol characters (which also strips
'#' while keeping the hashtag word), split on whitespace, drop retweet
markers ("rt"). Digits are kept. Classification into partisan groups
always reads the raw text, so cleaning can never change a document's
partition.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from ._util import atomic_write
from .errors import InputError, ParseError

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_RE = re.compile(r"#(\w+)")


@dataclass
class RawDocument:
    id: str
    text: str
    meta: dict | None = None


@dataclass
class TokenizedDocument:
    id: str
    tokens: list[str]
    dropped: bool = False


def _strip_punctuation(text: str) -> str:
    # Deletes every punctuation (P*) and symbol (S*) character, emoji included.
    return "".join(ch for ch in text if unicodedata.category(ch)[0] not in ("P", "S"))


def clean_and_tokenize(doc: RawDocument, stopwords: set[str] | None = None) -> TokenizedDocument:
    """Normalize one document into training/scoring tokens.

    A document with no surviving tokens is returned with dropped=True.
    """
    text = unicodedata.normalize("NFC", doc.text).lower()
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = _strip_punctuation(text)
    tokens = [t for t in text.split() if t != "rt"]
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    return TokenizedDocument(doc.id, tokens, dropped=not tokens)


def extract_hashtags(text: str) -> set[str]:
    """Lowercased hashtag bodies found in raw (uncleaned) text."""
    return {m.group(1).lower() for m in _HASHTAG_RE.finditer(text)}


def _normalize_tags(tags: Iterable[str]) -> frozenset[str]:
    return frozenset(t.lower().lstrip("#") for t in tags)


@dataclass(frozen=True)
class HashtagSets:
    """Four pairwise-disjoint partisan hashtag sets (bodies, no '#')."""

    pro_trump: frozenset[str]
    anti_clinton: frozenset[str]
    pro_clinton: frozenset[str]
    anti_trump: frozenset[str]

    def __post_init__(self):
        named = [
            ("pro_trump", self.pro_trump),
            ("anti_clinton", self.anti_clinton),
            ("pro_clinton", self.pro_clinton),
            ("anti_trump", self.anti_trump),
        ]
        for i in range(len(named)):
            for j in range(i + 1, len(named)):
                overlap = named[i][1] & named[j][1]
                if overlap:
                    listed = ", ".join(sorted(overlap))
                    raise InputError(f"hashtag sets {named[i][0]} and {named[j][0]} overlap: {listed}")

    @classmethod
    def from_mapping(cls, mapping: dict) -> "HashtagSets":
        missing = [k for k in ("pro_trump", "anti_clinton", "pro_clinton", "anti_trump") if k not in mapping]
        if missing:
            raise InputError(f"hashtag sets missing keys: {', '.join(missing)}")
        return cls(
            pro_trump=_normalize_tags(mapping["pro_trump"]),
            anti_clinton=_normalize_tags(mapping["anti_clinton"]),
            pro_clinton=_normalize_tags(mapping["pro_clinton"]),
            anti_trump=_normalize_tags(mapping["anti_trump"]),
        )

    @property
    def trump_side(self) -> frozenset[str]:
        return self.pro_trump | self.anti_clinton

    @property
    def clinton_side(self) -> frozenset[str]:
        return self.pro_clinton | self.anti_trump


# The published 2016 US presidential election sets, shipped verbatim
# (misspellings included); line breaks inside tags in the source table
# were rejoined. Users can supply their own sets file instead.
DEFAULT_HASHTAG_SETS = HashtagSets.from_mapping(
    {
        "pro_trump": [
            "trump2016", "trump16", "makeamericagreatagain", "maga", "trumppence16",
            "trumptrain", "presidenttrump", "makeamericasafeagain", "democratsfortrump",
            "vetsfortrump", "women4trump", "gays4trump", "democrats4trump", "latinos4trump",
            "blacks4trump", "buildthewall", "votetrump2016", "alwaystrump", "bikersfortrump",
            "makeamericaworkagain", "trumpiswithyou", "onlytrump", "heswithus", "trumpcares",
            "votegop",
        ],
        "anti_clinton": [
            "neverhillary", "imnotwithher", "crookedhillary", "nevereverhillary",
            "nomoreclintons", "stophillary", "kiliary", "clintoncrimefoundation", "hillno",
            "dropouthillary", "riskyhillary", "clintoncorruption", "notwithher", "hillary4jail",
            "deletehillary", "hillarylies", "hypocritehillary", "iwillneverstandwithher",
            "crookedclinton", "crookedclintons", "lyinghillary", "hillaryliesmatter",
            "hillaryliedpeopledied",
        ],
        "pro_clinton": [
            "hillary2016", "imwithher", "strongertogether", "vote4hillary", "imwithhillary",
            "clintonkaine2016", "hillarysopresidential", "hillarystrong", "uniteblue",
            "voteblue", "sheswithus", "votehillary", "madampresident", "yeswekaine",
            "welovehillary", "itrusther", "itrusthillary", "estoyconella",
            "republicans4hillary", "bluewave2016", "hillstorm2016", "hillaryforpr",
            "hillaryforamerica", "hillarysoqualified", "hillaryforpresident",
        ],
        "anti_trump": [
            "nevertrump", "dumpthetrump", "crybabytrum", "trumpthefraud", "lyingtrump",
            "stoptrump", "dirtydonald", "crookeddonald", "lyintrump", "nevertrumpence",
            "boycotttrump", "lyindonald", "lovetrumpshates", "notrumpanytime", "defeattrump",
            "weakdonald", "sleazydonald", "chickentrump", "loserdonald", "losertrump",
            "showusyourtaxes", "antitrump", "freethedelegates", "traitfortrump",
        ],
    }
)


def load_hashtag_sets(path) -> HashtagSets:
    """Read a hashtag-sets JSON file: an object with the four array fields."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError(path, None, "expected a JSON object with four hashtag arrays")
    for key, value in data.items():
        if key in ("pro_trump", "anti_clinton", "pro_clinton", "anti_trump"):
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ParseError(path, None, f"field {key!r} must be an array of strings")
    try:
        return HashtagSets.from_mapping(data)
    except InputError as exc:
        raise ParseError(path, None, str(exc)) from None


@dataclass
class PartitionResult:
    """Disjoint, exhaustive split of a document collection."""

    group_t: list[TokenizedDocument] = field(default_factory=list)
    group_c: list[TokenizedDocument] = field(default_factory=list)
    ambiguous: list[TokenizedDocument] = field(default_factory=list)
    unclassified: list[TokenizedDocument] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        return {
            "group_t": len(self.group_t),
            "group_c": len(self.group_c),
            "ambiguous": len(self.ambiguous),
            "unclassified": len(self.unclassified),
        }


def partition(
    docs: Iterable[RawDocument],
    sets: HashtagSets,
    stopwords: set[str] | None = None,
) -> PartitionResult:
    """Assign each document to one partisan group by its raw-text hashtags.

    Documents touching both sides go to `ambiguous`, documents touching
    neither to `unclassified`; input order is preserved within each list.
    """
    result = PartitionResult()
    for doc in docs:
        tags = extract_hashtags(doc.text)
        tokenized = clean_and_tokenize(doc, stopwords=stopwords)
        on_t = bool(tags & sets.trump_side)
        on_c = bool(tags & sets.clinton_side)
        if on_t and on_c:
            result.ambiguous.append(tokenized)
        elif on_t:
            result.group_t.append(tokenized)
        elif on_c:
            result.group_c.append(tokenized)
        else:
            result.unclassified.append(tokenized)
    return result


# -- file formats ----------------------------------------------------------


def read_documents(path) -> list[RawDocument]:
    """Read newline-delimited JSON documents ({"id", "text", optional "meta"})."""
    path = Path(path)
    docs: list[RawDocument] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise ParseError(path, lineno, "expected a JSON object")
            if "id" not in obj or "text" not in obj:
                raise ParseError(path, lineno, "document needs 'id' and 'text' fields")
            doc_id = str(obj["id"])
            if doc_id in seen:
                raise ParseError(path, lineno, f"duplicate document id {doc_id!r}")
            seen.add(doc_id)
            text = obj["text"]
            if not isinstance(text, str):
                raise ParseError(path, lineno, "'text' must be a string")
            meta = obj.get("meta")
            if meta is not None and not isinstance(meta, dict):
                raise ParseError(path, lineno, "'meta' must be an object")
            docs.append(RawDocument(doc_id, text, meta))
    return docs


def write_tokenized_corpus(sentences: Iterable[Sequence[str]], path) -> None:
    """Write token lists, one space-separated document per line."""
    with atomic_write(path, "w", encoding="utf-8") as out:
        for tokens in sentences:
            for token in tokens:
                if not token or any(ch.isspace() for ch in token):
                    raise InputError(f"token {token!r} is empty or contains whitespace")
            out.write(" ".join(tokens) + "\n")


def read_tokenized_corpus(path) -> list[list[str]]:
    """Read a tokenized corpus file; blank lines are skipped."""
    sentences: list[list[str]] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            tokens = line.split()
            if tokens:
                sentences.append(tokens)
    return sentences
