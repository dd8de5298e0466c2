"""Line/stanza parsing and corpus-level length and layout statistics.

A "line" is a non-blank line; blank lines (empty after trimming whitespace)
only delimit stanzas. Stanzas are maximal runs of non-blank lines.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .corpus import Corpus, PoemRecord
from .lexstats import tokenize


@dataclass(frozen=True)
class PoemStructure:
    lines: tuple[str, ...]
    stanza_sizes: tuple[int, ...]
    line_count: int
    word_count: int


def parse_structure(poem: PoemRecord | str) -> PoemStructure:
    """Parse a poem's line breaks into non-blank lines and stanza sizes."""
    text = poem.text if isinstance(poem, PoemRecord) else poem
    lines: list[str] = []
    stanza_sizes: list[int] = []
    run = 0
    for raw in text.split("\n"):
        if raw.strip():
            lines.append(raw)
            run += 1
        elif run:
            stanza_sizes.append(run)
            run = 0
    if run:
        stanza_sizes.append(run)
    if not lines:
        raise ValueError("empty poem")
    return PoemStructure(
        lines=tuple(lines),
        stanza_sizes=tuple(stanza_sizes),
        line_count=len(lines),
        word_count=len(tokenize(text).tokens),
    )


@dataclass(frozen=True)
class QuatrainStats:
    poems_with_quatrain: int
    poem_count: int
    quatrain_stanzas: int
    stanza_count: int

    @property
    def poems_with_quatrain_pct(self) -> float:
        return 100.0 * self.poems_with_quatrain / self.poem_count

    @property
    def quatrain_stanza_pct(self) -> float:
        return 100.0 * self.quatrain_stanzas / self.stanza_count if self.stanza_count else 0.0


def quatrain_stats(corpus: Corpus) -> QuatrainStats:
    """Share of poems containing a 4-line stanza and of stanzas that are quatrains."""
    if not len(corpus):
        raise ValueError("empty corpus")
    poems_with = 0
    quatrains = 0
    stanzas = 0
    for record in corpus.records:
        sizes = parse_structure(record).stanza_sizes
        stanzas += len(sizes)
        hits = sum(1 for s in sizes if s == 4)
        quatrains += hits
        if hits:
            poems_with += 1
    return QuatrainStats(
        poems_with_quatrain=poems_with,
        poem_count=len(corpus),
        quatrain_stanzas=quatrains,
        stanza_count=stanzas,
    )


@dataclass(frozen=True)
class LengthSummary:
    """Tukey five-number summary of per-poem line counts."""

    median: float
    q1: float
    q3: float
    whisker_low: int
    whisker_high: int
    outliers: tuple[int, ...]
    count: int

    def to_json_dict(self) -> dict:
        return {
            "median": self.median,
            "q1": self.q1,
            "q3": self.q3,
            "whisker_low": self.whisker_low,
            "whisker_high": self.whisker_high,
            "outliers": list(self.outliers),
            "count": self.count,
        }


def _quantile(sorted_values: list[int], p: float) -> float:
    # Linear interpolation between order statistics.
    h = (len(sorted_values) - 1) * p
    lo = math.floor(h)
    hi = math.ceil(h)
    return sorted_values[lo] + (h - lo) * (sorted_values[hi] - sorted_values[lo])


def summarize_lengths(line_counts: list[int]) -> LengthSummary:
    """Five-number summary with whiskers at data points within 1.5 IQR fences."""
    if not line_counts:
        raise ValueError("no line counts to summarize")
    values = sorted(line_counts)
    q1 = _quantile(values, 0.25)
    median = _quantile(values, 0.5)
    q3 = _quantile(values, 0.75)
    reach = 1.5 * (q3 - q1)
    whisker_low = min(v for v in values if v >= q1 - reach)
    whisker_high = max(v for v in values if v <= q3 + reach)
    outliers = tuple(v for v in values if v < whisker_low or v > whisker_high)
    return LengthSummary(
        median=median,
        q1=q1,
        q3=q3,
        whisker_low=whisker_low,
        whisker_high=whisker_high,
        outliers=outliers,
        count=len(values),
    )


def length_summary(corpus: Corpus, style_filter: str | None = None) -> LengthSummary:
    """Length distribution over poems, optionally restricted to one style."""
    records = corpus.records
    if style_filter is not None:
        records = tuple(r for r in records if r.style == style_filter)
    if not records:
        raise ValueError(
            f"no poems in corpus {corpus.label!r}"
            + (f" with style {style_filter!r}" if style_filter else "")
        )
    return summarize_lengths([parse_structure(r).line_count for r in records])


@dataclass(frozen=True)
class OccupancyGrid:
    """Mean character-cell occupancy over a corpus, rows x cols in [0, 1]."""

    rows: int
    cols: int
    cells: tuple[tuple[float, ...], ...]

    def to_csv(self) -> str:
        return "\n".join(
            ",".join(f"{v:.6f}" for v in row) for row in self.cells
        ) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {"rows": self.rows, "cols": self.cols, "cells": [list(r) for r in self.cells]}
        )


def _poem_grid_lines(text: str) -> list[str]:
    # Raw lines, blank lines included (they render as empty rows); leading
    # and trailing blank lines are not part of the layout.
    lines = [l.replace("\t", "    ") for l in text.split("\n")]
    while lines and not lines[0].strip():
        lines.pop(0)
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def occupancy_heatmap(corpus: Corpus, rows: int = 60, cols: int = 80) -> OccupancyGrid:
    """Fraction of poems with a non-whitespace character at each (line, column) cell."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be at least 1x1")
    if not len(corpus):
        raise ValueError("empty corpus")
    sums = [[0] * cols for _ in range(rows)]
    for record in corpus.records:
        for i, line in enumerate(_poem_grid_lines(record.text)[:rows]):
            row = sums[i]
            for j, ch in enumerate(line[:cols]):
                if not ch.isspace():
                    row[j] += 1
    n = len(corpus)
    cells = tuple(tuple(v / n for v in row) for row in sums)
    return OccupancyGrid(rows=rows, cols=cols, cells=cells)
