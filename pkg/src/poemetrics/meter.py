"""Automated scansion: per-line stress sequences and iambic-dominance scores.

Stress sequences use one symbol per syllable: "0" unstressed, "1" stressed
(secondary stress folds to "1"), "x" for monosyllables (metrically flexible;
the same word can be stressed or unstressed depending on context), and "?"
per estimated syllable of out-of-vocabulary words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .arpabet import PronouncingDictionary, stress_pattern
from .corpus import Corpus
from .lexstats import tokenize
from .structure import PoemStructure, parse_structure

_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")

IAMB = "01"
DEFAULT_DOMINANCE_THRESHOLD = 0.75


def estimate_syllables(word: str) -> int:
    """Vowel-letter-group count, the syllable guess for unknown words."""
    return len(_VOWEL_GROUP_RE.findall(word.lower()))


@dataclass(frozen=True)
class StressSequence:
    digits: str  # over {0, 1, x, ?}
    line: int


def word_stress(word: str, dictionary: PronouncingDictionary) -> str:
    """Stress symbols for one word, using its first dictionary variant."""
    variants = dictionary.lookup(word)
    if not variants:
        return "?" * estimate_syllables(word)
    pattern = stress_pattern(variants[0])
    if len(pattern) == 1:
        return "x"
    return pattern.replace("2", "1")


def line_stress(line: str, dictionary: PronouncingDictionary, line_index: int = 0) -> StressSequence:
    """Concatenated word stress patterns for one line of text."""
    digits = "".join(word_stress(w, dictionary) for w in tokenize(line).tokens)
    return StressSequence(digits=digits, line=line_index)


def alignment_score(digits: str, pattern: str = IAMB) -> float:
    """Fraction of syllables agreeing with the repeating pattern.

    "x" matches either pattern digit; "?" earns half credit. Position k is
    compared against pattern[k % len(pattern)].
    """
    if not digits:
        raise ValueError("cannot score an empty stress sequence")
    credit = 0.0
    for k, symbol in enumerate(digits):
        if symbol == "x":
            credit += 1.0
        elif symbol == "?":
            credit += 0.5
        elif symbol == pattern[k % len(pattern)]:
            credit += 1.0
    return credit / len(digits)


@dataclass(frozen=True)
class MeterVerdict:
    iambic_score: float
    dominant: bool
    syllables_per_line: tuple[int, ...]
    threshold: float
    scanned_lines: int


def _resolved_syllables(digits: str) -> int:
    return sum(1 for d in digits if d != "?")


def iambic_score(
    poem: PoemStructure,
    dictionary: PronouncingDictionary,
    threshold: float = DEFAULT_DOMINANCE_THRESHOLD,
) -> MeterVerdict:
    """Mean per-line iambic alignment; dominant when the mean meets threshold.

    Lines with fewer than two resolvable (non-"?") syllables are not
    scored; they still contribute to syllables_per_line.
    """
    sequences = [line_stress(line, dictionary, i) for i, line in enumerate(poem.lines)]
    scorable = [s for s in sequences if _resolved_syllables(s.digits) >= 2]
    if not scorable:
        raise ValueError("no scannable lines")
    score = sum(alignment_score(s.digits) for s in scorable) / len(scorable)
    return MeterVerdict(
        iambic_score=score,
        dominant=score >= threshold,
        syllables_per_line=tuple(len(s.digits) for s in sequences),
        threshold=threshold,
        scanned_lines=len(scorable),
    )


@dataclass(frozen=True)
class CorpusMeterStats:
    dominant_poems: int
    poem_count: int
    mean_iambic_score: float
    unscannable_poems: int

    @property
    def pct_dominant_iambic(self) -> float:
        scanned = self.poem_count - self.unscannable_poems
        return 100.0 * self.dominant_poems / scanned if scanned else 0.0


def corpus_meter_stats(
    corpus: Corpus,
    dictionary: PronouncingDictionary,
    threshold: float = DEFAULT_DOMINANCE_THRESHOLD,
) -> CorpusMeterStats:
    """Share of poems whose mean line alignment is iambic-dominant."""
    if not len(corpus):
        raise ValueError("empty corpus")
    dominant = 0
    scores = []
    unscannable = 0
    for record in corpus.records:
        try:
            verdict = iambic_score(parse_structure(record), dictionary, threshold)
        except ValueError:
            unscannable += 1
            continue
        scores.append(verdict.iambic_score)
        if verdict.dominant:
            dominant += 1
    return CorpusMeterStats(
        dominant_poems=dominant,
        poem_count=len(corpus),
        mean_iambic_score=sum(scores) / len(scores) if scores else 0.0,
        unscannable_poems=unscannable,
    )
