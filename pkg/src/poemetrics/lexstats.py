"""Tokenization, pronoun frequencies, and distinctive-word statistics.

Distinctive words are scored with weighted log-odds under an informative
Dirichlet prior. With y_kw the count of word w in corpus k, n_k the corpus
token total over eligible words (stopwords excluded when removal is on;
words under the document-frequency cutoff stay in the total but are not
scored), and a prior alpha_w proportional to the pooled counts scaled to a
total alpha_0:

    delta_w  = log[(y_aw + a_w) / (n_a + a_0 - y_aw - a_w)]
             - log[(y_bw + a_w) / (n_b + a_0 - y_bw - a_w)]
    sigma2_w = 1/(y_aw + a_w) + 1/(y_bw + a_w)
    z_w      = delta_w / sqrt(sigma2_w)

Positive z favors corpus a. alpha_0 defaults to 0.01 times the scored
vocabulary size.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .corpus import Corpus

# Maximal runs of letters/digits plus internal apostrophes; apostrophes at
# token edges are not part of the token. Underscore is a separator.
_TOKEN_RE = re.compile(r"[^\W_']+(?:'+[^\W_']+)*")


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[str, ...]
    original_case_first: str | None


def tokenize(text: str) -> TokenStream:
    """Split text into lowercased word tokens.

    Tokens are maximal runs of letters, digits, and apostrophes; edge
    apostrophes are trimmed, internal ones ("who've") kept.
    """
    raw = _TOKEN_RE.findall(text)
    return TokenStream(
        tokens=tuple(t.lower() for t in raw),
        original_case_first=raw[0] if raw else None,
    )


# Pronoun categories. The six sets are disjoint; archaic second-person forms
# (thou/thee/thy/...) belong to the second person.
PRONOUN_CATEGORIES: dict[str, frozenset[str]] = {
    "first_singular": frozenset({"i", "me", "my", "mine", "myself"}),
    "first_plural": frozenset({"we", "us", "our", "ours", "ourselves"}),
    "second": frozenset(
        {"you", "your", "yours", "yourself", "yourselves",
         "thou", "thee", "thy", "thine", "thyself"}
    ),
    "third_feminine": frozenset({"she", "her", "hers", "herself"}),
    "third_masculine": frozenset({"he", "his", "him", "himself"}),
    "third": frozenset(
        {"they", "them", "their", "theirs", "themself", "themselves",
         "it", "its", "itself"}
    ),
}


@dataclass(frozen=True)
class PronounProfile:
    """Normalized pronoun frequencies (occurrences per 100 words)."""

    per_100_words: dict[str, float]
    counts: dict[str, int]
    total_tokens: int


def pronoun_profile(
    corpus: Corpus,
    exclude_subjects: set[str] | None = None,
    per_poem: bool = False,
) -> PronounProfile:
    """Pronoun-category frequencies per 100 words, pooled over the corpus.

    exclude_subjects removes poems whose subject label is in the given set
    before counting. per_poem=True averages per-poem rates instead of
    pooling counts (poems with no tokens are skipped).
    """
    records = list(corpus.records)
    if exclude_subjects:
        records = [r for r in records if r.subject not in exclude_subjects]
    if not records:
        raise ValueError("no poems left after subject exclusion")

    totals: Counter[str] = Counter()
    token_total = 0
    per_poem_rates: dict[str, list[float]] = {c: [] for c in PRONOUN_CATEGORIES}
    for record in records:
        tokens = tokenize(record.text).tokens
        if not tokens:
            continue
        token_total += len(tokens)
        for category, words in PRONOUN_CATEGORIES.items():
            count = sum(1 for t in tokens if t in words)
            totals[category] += count
            per_poem_rates[category].append(100.0 * count / len(tokens))

    if per_poem:
        freqs = {
            c: (sum(rates) / len(rates) if rates else 0.0)
            for c, rates in per_poem_rates.items()
        }
    else:
        freqs = {
            c: (100.0 * totals[c] / token_total if token_total else 0.0)
            for c in PRONOUN_CATEGORIES
        }
    return PronounProfile(
        per_100_words=freqs,
        counts={c: totals[c] for c in PRONOUN_CATEGORIES},
        total_tokens=token_total,
    )


def load_stopwords() -> frozenset[str]:
    """The fixed English stopword list shipped with the package."""
    text = resources.files("poemetrics.data").joinpath("stopwords.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@dataclass(frozen=True)
class LogOddsResult:
    word: str
    delta: float
    variance: float
    z_score: float
    doc_freq_a: int
    doc_freq_b: int


def _score_counts(
    counts_a: Counter[str],
    counts_b: Counter[str],
    n_a: int,
    n_b: int,
    vocabulary: list[str],
    doc_freq_a: Counter[str],
    doc_freq_b: Counter[str],
    alpha_total: float | None,
) -> list[LogOddsResult]:
    # n_a/n_b are the eligible token totals of each corpus; words below the
    # document-frequency cutoff stay in the totals but are not scored.
    pooled_total = n_a + n_b
    if alpha_total is None:
        alpha_total = 0.01 * len(vocabulary)

    results = []
    for word in vocabulary:
        y_a = counts_a[word]
        y_b = counts_b[word]
        alpha_w = alpha_total * (y_a + y_b) / pooled_total
        rest_a = n_a + alpha_total - y_a - alpha_w
        rest_b = n_b + alpha_total - y_b - alpha_w
        if rest_a <= 0 or rest_b <= 0:
            raise ValueError(
                f"degenerate comparison: a corpus consists solely of the word {word!r}"
            )
        delta = math.log((y_a + alpha_w) / rest_a) - math.log((y_b + alpha_w) / rest_b)
        variance = 1.0 / (y_a + alpha_w) + 1.0 / (y_b + alpha_w)
        results.append(
            LogOddsResult(
                word=word,
                delta=delta,
                variance=variance,
                z_score=delta / math.sqrt(variance),
                doc_freq_a=doc_freq_a[word],
                doc_freq_b=doc_freq_b[word],
            )
        )
    results.sort(key=lambda r: (-r.z_score, r.word))
    return results


def _document_tokens(corpus: Corpus) -> list[tuple[str, ...]]:
    return [tokenize(r.text).tokens for r in corpus.records]


def logodds(
    corpus_a: Corpus,
    corpus_b: Corpus,
    min_docs: int = 10,
    remove_stopwords: bool = True,
    alpha_total: float | None = None,
    min_docs_mode: str = "pooled",
) -> list[LogOddsResult]:
    """Distinctive words of corpus_a vs corpus_b, ranked by z descending.

    The vocabulary is restricted to words appearing in at least min_docs
    poems; min_docs_mode "pooled" counts poems across both corpora, "each"
    requires min_docs poems in each corpus separately. Stopword removal
    uses the shipped list.
    """
    stop = load_stopwords() if remove_stopwords else frozenset()
    counts_a: Counter[str] = Counter()
    counts_b: Counter[str] = Counter()
    doc_freq_a: Counter[str] = Counter()
    doc_freq_b: Counter[str] = Counter()
    for tokens in _document_tokens(corpus_a):
        eligible = [t for t in tokens if t not in stop]
        counts_a.update(eligible)
        doc_freq_a.update(set(eligible))
    for tokens in _document_tokens(corpus_b):
        eligible = [t for t in tokens if t not in stop]
        counts_b.update(eligible)
        doc_freq_b.update(set(eligible))

    if min_docs_mode == "pooled":
        vocabulary = [
            w
            for w in set(doc_freq_a) | set(doc_freq_b)
            if doc_freq_a[w] + doc_freq_b[w] >= min_docs
        ]
    elif min_docs_mode == "each":
        vocabulary = [
            w
            for w in set(doc_freq_a) & set(doc_freq_b)
            if doc_freq_a[w] >= min_docs and doc_freq_b[w] >= min_docs
        ]
    else:
        raise ValueError(f"unknown min_docs_mode {min_docs_mode!r}")
    if not vocabulary:
        raise ValueError("empty vocabulary after document-frequency filtering")
    vocabulary.sort()
    return _score_counts(
        counts_a, counts_b, sum(counts_a.values()), sum(counts_b.values()),
        vocabulary, doc_freq_a, doc_freq_b, alpha_total,
    )


def first_word_logodds(
    corpus_a: Corpus,
    corpus_b: Corpus,
    min_docs: int = 10,
    alpha_total: float | None = None,
) -> list[LogOddsResult]:
    """Distinctive opening words, one feature per poem, stopwords retained."""
    firsts_a = [t[0] for t in _document_tokens(corpus_a) if t]
    firsts_b = [t[0] for t in _document_tokens(corpus_b) if t]
    counts_a = Counter(firsts_a)
    counts_b = Counter(firsts_b)
    vocabulary = sorted(
        w for w in set(counts_a) | set(counts_b) if counts_a[w] + counts_b[w] >= min_docs
    )
    if not vocabulary:
        raise ValueError("empty first-word vocabulary after document-frequency filtering")
    # Each poem contributes its first token once, so document frequency
    # equals the feature count.
    return _score_counts(
        counts_a, counts_b, len(firsts_a), len(firsts_b),
        vocabulary, counts_a, counts_b, alpha_total,
    )


# Word groups whose presence rate characterizes a corpus. A trailing "*"
# makes the entry a prefix match covering inflected forms.
DEFAULT_TOUCHSTONE_GROUPS: tuple[frozenset[str], ...] = (
    frozenset({"embrace", "grace", "dance", "dreams"}),
    frozenset({"echo*", "whisper*"}),
)


@dataclass(frozen=True)
class TouchstoneCoverage:
    patterns: tuple[str, ...]
    poems_matched: int
    poem_count: int

    @property
    def pct(self) -> float:
        return 100.0 * self.poems_matched / self.poem_count if self.poem_count else 0.0


def _matches_any(token: str, exact: frozenset[str], prefixes: tuple[str, ...]) -> bool:
    return token in exact or any(token.startswith(p) for p in prefixes)


def touchstone_coverage(
    corpus: Corpus,
    word_groups: tuple[frozenset[str], ...] = DEFAULT_TOUCHSTONE_GROUPS,
) -> list[TouchstoneCoverage]:
    """Per-group percentage of poems containing at least one member word."""
    if not len(corpus):
        raise ValueError("empty corpus")
    doc_tokens = [set(tokenize(r.text).tokens) for r in corpus.records]
    out = []
    for group in word_groups:
        exact = frozenset(w for w in group if not w.endswith("*"))
        prefixes = tuple(sorted(w[:-1] for w in group if w.endswith("*")))
        matched = sum(
            1
            for tokens in doc_tokens
            if any(_matches_any(t, exact, prefixes) for t in tokens)
        )
        out.append(
            TouchstoneCoverage(
                patterns=tuple(sorted(group)),
                poems_matched=matched,
                poem_count=len(doc_tokens),
            )
        )
    return out
