"""Text-to-text relatedness.

Two texts are compared by pairing every term of one with its best
partner in the other, where a pairing is scored by the product of
lexical relevance (harmonic mean of the two terms' TF-IDF weights) and
term relatedness over the thesaurus.  Averaging the best products in
each direction and then across the two directions gives a symmetric
score.  Preprocessing is deliberately plain: lowercase, split on
non-alphanumeric runs, drop stopwords.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable

from .termrel import term_relatedness
from .thesaurus import ThesaurusGraph, ThesaurusError

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)

# lex(term, text) -> term importance weight within that text
LexWeight = Callable[[str, "TokenizedText"], float]


@dataclass(frozen=True)
class TokenizedText:
    """A preprocessed text: token sequence, frequencies, distinct order."""

    terms: tuple[str, ...]
    tf: dict[str, int]
    source_id: str = ""

    @property
    def distinct(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for t in self.terms:
            seen.setdefault(t)
        return tuple(seen)

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class CorpusStats:
    """Document count and per-term document frequencies for IDF."""

    n_documents: int
    df: dict[str, int]


@dataclass(frozen=True)
class MatchRecord:
    """One term's best partner in the other text and the factor values."""

    term: str
    partner: str | None
    lexical: float
    relatedness: float
    product: float


@dataclass(frozen=True)
class TextPairScore:
    value: float
    forward: float
    backward: float
    matches_ab: tuple[MatchRecord, ...]
    matches_ba: tuple[MatchRecord, ...]


def default_stopwords() -> frozenset[str]:
    text = resources.files("semrel").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def load_stopwords(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(w.strip().lower() for w in fh if w.strip())


def preprocess(raw: str, stopwords: Iterable[str] = (),
               source_id: str = "") -> TokenizedText:
    """Lowercase, split on non-alphanumeric runs, drop stopwords, count."""
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    terms = [t for t in _TOKEN.findall(raw.lower()) if t not in stop]
    tf: dict[str, int] = {}
    for t in terms:
        tf[t] = tf.get(t, 0) + 1
    return TokenizedText(tuple(terms), tf, source_id)


def build_corpus_stats(texts: Iterable[TokenizedText]) -> CorpusStats:
    df: dict[str, int] = {}
    n = 0
    for text in texts:
        n += 1
        for term in text.tf:
            df[term] = df.get(term, 0) + 1
    return CorpusStats(n, df)


def load_df_table(path: str | Path) -> CorpusStats:
    """Read an external document-frequency table: a ``#N<TAB>count``
    header row followed by ``term<TAB>df`` rows."""
    path = Path(path)
    n_documents: int | None = None
    df: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if line.startswith("#"):
                if fields[0] == "#N" and len(fields) == 2:
                    n_documents = int(fields[1])
                continue
            if len(fields) != 2 or n_documents is None:
                raise ThesaurusError(
                    f"{path}:{lineno}: malformed df table line (is the "
                    f"#N header present?): {line!r}")
            try:
                count = int(fields[1])
            except ValueError:
                raise ThesaurusError(
                    f"{path}:{lineno}: bad document frequency {fields[1]!r}")
            if not (0 <= count <= n_documents):
                raise ThesaurusError(
                    f"{path}:{lineno}: df outside [0, N]: {count}")
            df[fields[0]] = count
    if n_documents is None:
        raise ThesaurusError(f"{path}: missing #N header row")
    return CorpusStats(n_documents, df)


def tf_idf(term: str, doc: TokenizedText, corpus: CorpusStats) -> float:
    """Raw term frequency times smoothed inverse document frequency,
    ln(1 + N / (1 + df)); strictly positive for any present term."""
    if term not in doc.tf:
        raise ValueError(f"term {term!r} does not occur in document "
                         f"{doc.source_id!r}")
    return doc.tf[term] * math.log(1.0 + corpus.n_documents
                                   / (1.0 + corpus.df.get(term, 0)))


def make_tf_idf(corpus: CorpusStats) -> LexWeight:
    def lex(term: str, doc: TokenizedText) -> float:
        return tf_idf(term, doc, corpus)
    return lex


def harmonic_mean(x: float, y: float) -> float:
    if x + y == 0.0:
        return 0.0
    return 2.0 * x * y / (x + y)


def lexical_relevance(
    a: str, text_a: TokenizedText,
    b: str, text_b: TokenizedText,
    corpus: CorpusStats,
    *,
    lex: LexWeight | None = None,
) -> float:
    """Harmonic mean of the two terms' importance weights in their texts."""
    lex = lex or make_tf_idf(corpus)
    return harmonic_mean(lex(a, text_a), lex(b, text_b))


class _PairScorer:
    """Memoizes term-pair relatedness within one text comparison."""

    def __init__(self, graph, cache, simple, identical_term_unity):
        self.graph = graph
        self.cache = cache
        self.simple = simple
        self.identical_term_unity = identical_term_unity
        self._memo: dict[tuple[str, str], float] = {}

    def __call__(self, a: str, b: str) -> float:
        key = (a, b) if a <= b else (b, a)
        value = self._memo.get(key)
        if value is None:
            value = term_relatedness(
                key[0], key[1], self.graph, self.cache,
                identical_term_unity=self.identical_term_unity,
                exclude_cross_pos=self.simple).value
            self._memo[key] = value
        return value


def _best_match(a, text_a, text_b, lex, scorer) -> MatchRecord:
    x = lex(a, text_a)
    best: MatchRecord | None = None
    for b in text_b.distinct:
        lam = harmonic_mean(x, lex(b, text_b))
        sr = scorer(a, b)
        product = lam * sr
        if best is None or product > best.product:
            best = MatchRecord(a, b, lam, sr, product)
    assert best is not None
    return best


def best_match(
    a: str,
    text_a: TokenizedText,
    text_b: TokenizedText,
    graph: ThesaurusGraph,
    corpus: CorpusStats,
    cache=None,
    *,
    lex: LexWeight | None = None,
    simple: bool = False,
    identical_term_unity: bool = False,
) -> tuple[str, float]:
    """The partner in ``text_b`` maximizing lexical relevance times term
    relatedness against ``a``, with the attained product.  Ties keep the
    earliest partner in text order."""
    if not text_b.terms:
        raise ValueError("cannot match against an empty text")
    lex = lex or make_tf_idf(corpus)
    scorer = _PairScorer(graph, cache, simple, identical_term_unity)
    record = _best_match(a, text_a, text_b, lex, scorer)
    return record.partner, record.product


def _zeta_records(text_a, text_b, lex, scorer):
    if not text_a.terms or not text_b.terms:
        return 0.0, ()
    records = tuple(
        _best_match(a, text_a, text_b, lex, scorer)
        for a in text_a.distinct
    )
    total = math.fsum(r.product for r in records)
    return total / len(records), records


def zeta(
    text_a: TokenizedText,
    text_b: TokenizedText,
    graph: ThesaurusGraph,
    corpus: CorpusStats,
    cache=None,
    *,
    lex: LexWeight | None = None,
    simple: bool = False,
    identical_term_unity: bool = False,
) -> float:
    """Directional relatedness: mean best product over the distinct
    terms of ``text_a``; 0 when either text is empty."""
    lex = lex or make_tf_idf(corpus)
    scorer = _PairScorer(graph, cache, simple, identical_term_unity)
    value, _ = _zeta_records(text_a, text_b, lex, scorer)
    return value


def text_relatedness(
    raw_a: str,
    raw_b: str,
    graph: ThesaurusGraph,
    *,
    corpus: CorpusStats | None = None,
    stopwords: Iterable[str] | None = None,
    cache=None,
    lex: LexWeight | None = None,
    simple: bool = False,
    identical_term_unity: bool = False,
) -> TextPairScore:
    """Symmetric relatedness of two raw texts: the mean of the two
    directional scores.  Without an explicit corpus the two texts form
    their own two-document corpus; without explicit stopwords the
    packaged default list applies."""
    stop = default_stopwords() if stopwords is None else stopwords
    text_a = preprocess(raw_a, stop, source_id="A")
    text_b = preprocess(raw_b, stop, source_id="B")
    if corpus is None:
        corpus = build_corpus_stats([text_a, text_b])
    lex = lex or make_tf_idf(corpus)
    scorer = _PairScorer(graph, cache, simple, identical_term_unity)
    forward, matches_ab = _zeta_records(text_a, text_b, lex, scorer)
    backward, matches_ba = _zeta_records(text_b, text_a, lex, scorer)
    return TextPairScore(
        value=(forward + backward) / 2.0,
        forward=forward,
        backward=backward,
        matches_ab=matches_ab,
        matches_ba=matches_ba,
    )
