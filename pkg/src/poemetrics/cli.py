"""Command-line front end: ingestion, analyses, and report emission.

Subcommands: analyze, structure, rhyme, meter, lexstats, compare, generate.
Reports are written under an output directory as tables/ (CSV or JSON),
grids/ (occupancy matrices), plots/ (optional SVG), and a combined
report.json. Output is deterministic: identical inputs and flags produce
byte-identical reports regardless of --threads.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .arpabet import PronouncingDictionary, bundled_dictionary_path, load_dictionary
from .corpus import (
    Corpus,
    CorpusError,
    EXPECTED_FORM_LENGTHS,
    load_corpus,
    strip_prefatory,
)
from .generate import (
    ChatCompletionsClient,
    DEFAULT_STYLES,
    DEFAULT_SUBJECTS,
    DEFAULT_TEMPLATES,
    GenerationJob,
    build_grid,
    run_job,
)
from .lexstats import (
    DEFAULT_TOUCHSTONE_GROUPS,
    PRONOUN_CATEGORIES,
    first_word_logodds,
    logodds,
    pronoun_profile,
    touchstone_coverage,
)
from .meter import corpus_meter_stats
from .rhyme import annotate_rhymes, corpus_rhyme_stats
from .structure import length_summary, occupancy_heatmap, parse_structure, quatrain_stats
from . import svgplot

ALL_STYLES = "ALL"
UNLABELED = "(none)"


@dataclass
class AnalysisSettings:
    """Flags that affect analysis results (recorded in report metadata)."""

    min_docs: int = 10
    alpha_total: float | None = None
    iambic_threshold: float = 0.75
    heatmap_rows: int = 60
    heatmap_cols: int = 80
    strip_prefatory: bool = True
    top_k: int = 15

    def to_json_dict(self) -> dict:
        return {
            "min_docs": self.min_docs,
            "alpha_total": self.alpha_total,
            "iambic_threshold": self.iambic_threshold,
            "heatmap_rows": self.heatmap_rows,
            "heatmap_cols": self.heatmap_cols,
            "strip_prefatory": self.strip_prefatory,
            "top_k": self.top_k,
        }


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    return "" if value is None else str(value)


def _write_table(out_dir: Path, name: str, columns: list[str], rows: list[dict], fmt: str) -> None:
    tables = out_dir / "tables"
    tables.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c)) for c in columns])
        (tables / f"{name}.csv").write_text(buf.getvalue(), encoding="utf-8")
    else:
        (tables / f"{name}.json").write_text(
            json.dumps(rows, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


def _style_groups(corpus: Corpus) -> list[tuple[str, Corpus]]:
    groups: list[tuple[str, Corpus]] = [(ALL_STYLES, corpus)]
    labels = corpus.styles()
    if any(r.style is None for r in corpus.records):
        labels = labels + [UNLABELED]
    for style in labels:
        if style == UNLABELED:
            records = tuple(r for r in corpus.records if r.style is None)
        else:
            records = tuple(r for r in corpus.records if r.style == style)
        groups.append((style, Corpus(label=corpus.label, records=records)))
    return groups


def _map_rows(builder, groups, threads: int) -> list[dict]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(builder, groups))
    return [builder(g) for g in groups]


class _Analyzer:
    def __init__(self, dictionary: PronouncingDictionary, settings: AnalysisSettings, threads: int):
        self.dictionary = dictionary
        self.settings = settings
        self.threads = threads

    def lengths(self, corpora: list[Corpus]) -> tuple[list[str], list[dict]]:
        def build(item):
            (label, style), sub = item
            s = length_summary(sub)
            return {
                "source": label, "style": style, "poems": s.count,
                "median": s.median, "q1": s.q1, "q3": s.q3,
                "whisker_low": s.whisker_low, "whisker_high": s.whisker_high,
                "outlier_count": len(s.outliers),
            }
        groups = [((c.label, style), sub) for c in corpora for style, sub in _style_groups(c)]
        cols = ["source", "style", "poems", "median", "q1", "q3",
                "whisker_low", "whisker_high", "outlier_count"]
        return cols, _map_rows(build, groups, self.threads)

    def quatrains(self, corpora: list[Corpus]) -> tuple[list[str], list[dict]]:
        def build(item):
            (label, style), sub = item
            q = quatrain_stats(sub)
            return {
                "source": label, "style": style,
                "poems": q.poem_count, "poems_with_quatrain": q.poems_with_quatrain,
                "poems_with_quatrain_pct": q.poems_with_quatrain_pct,
                "stanzas": q.stanza_count, "quatrain_stanzas": q.quatrain_stanzas,
                "quatrain_stanza_pct": q.quatrain_stanza_pct,
            }
        groups = [((c.label, style), sub) for c in corpora for style, sub in _style_groups(c)]
        cols = ["source", "style", "poems", "poems_with_quatrain", "poems_with_quatrain_pct",
                "stanzas", "quatrain_stanzas", "quatrain_stanza_pct"]
        return cols, _map_rows(build, groups, self.threads)

    def rhyme(self, corpora: list[Corpus]) -> tuple[list[str], list[dict]]:
        def build(item):
            (label, style), sub = item
            r = corpus_rhyme_stats(sub, self.dictionary)
            return {
                "source": label, "style": style, "poems": r.poem_count,
                "poems_with_rhyme_pct": r.poems_with_rhyme_pct,
                "avg_rhymed_fraction": r.avg_rhymed_fraction,
                "pooled_rhymed_fraction": r.pooled_rhymed_fraction,
            }
        groups = [((c.label, style), sub) for c in corpora for style, sub in _style_groups(c)]
        cols = ["source", "style", "poems", "poems_with_rhyme_pct",
                "avg_rhymed_fraction", "pooled_rhymed_fraction"]
        return cols, _map_rows(build, groups, self.threads)

    def meter(self, corpora: list[Corpus]) -> tuple[list[str], list[dict]]:
        def build(item):
            (label, style), sub = item
            m = corpus_meter_stats(sub, self.dictionary, self.settings.iambic_threshold)
            return {
                "source": label, "style": style, "poems": m.poem_count,
                "pct_dominant_iambic": m.pct_dominant_iambic,
                "mean_iambic_score": m.mean_iambic_score,
                "unscannable_poems": m.unscannable_poems,
            }
        groups = [((c.label, style), sub) for c in corpora for style, sub in _style_groups(c)]
        cols = ["source", "style", "poems", "pct_dominant_iambic",
                "mean_iambic_score", "unscannable_poems"]
        return cols, _map_rows(build, groups, self.threads)

    def pronouns(self, corpora: list[Corpus]) -> tuple[list[str], list[dict]]:
        categories = sorted(PRONOUN_CATEGORIES)
        def build(item):
            (label, style), sub = item
            p = pronoun_profile(sub)
            row = {"source": label, "style": style, "tokens": p.total_tokens}
            for c in categories:
                row[c] = p.per_100_words[c]
            return row
        groups = [((c.label, style), sub) for c in corpora for style, sub in _style_groups(c)]
        return ["source", "style", "tokens", *categories], _map_rows(build, groups, self.threads)

    def touchstones(self, corpora: list[Corpus]) -> tuple[list[str], list[dict]]:
        rows = []
        for corpus in corpora:
            for coverage in touchstone_coverage(corpus, DEFAULT_TOUCHSTONE_GROUPS):
                rows.append({
                    "source": corpus.label,
                    "group": " ".join(coverage.patterns),
                    "poems_matched": coverage.poems_matched,
                    "poems": coverage.poem_count,
                    "pct": coverage.pct,
                })
        return ["source", "group", "poems_matched", "poems", "pct"], rows

    def compare_tables(self, a: Corpus, b: Corpus) -> dict[str, tuple[list[str], list[dict]]]:
        cols = ["word", "delta", "variance", "z", "doc_freq_a", "doc_freq_b"]
        def rows_for(results):
            return [
                {"word": r.word, "delta": r.delta, "variance": r.variance,
                 "z": r.z_score, "doc_freq_a": r.doc_freq_a, "doc_freq_b": r.doc_freq_b}
                for r in results
            ]
        s = self.settings
        return {
            "logodds": (cols, rows_for(logodds(a, b, s.min_docs, True, s.alpha_total))),
            "first_words": (cols, rows_for(first_word_logodds(a, b, s.min_docs, s.alpha_total))),
        }


def _load_corpora(paths: list[str], args) -> list[Corpus]:
    corpora = []
    labels_seen: set[str] = set()
    for raw in paths:
        corpus = load_corpus(
            raw,
            default_source=args.source_default,
            default_style=getattr(args, "style_default", None),
        )
        label = corpus.label
        n = 2
        while label in labels_seen:
            label = f"{corpus.label}-{n}"
            n += 1
        labels_seen.add(label)
        corpus = Corpus(label=label, records=corpus.records)
        if not getattr(args, "no_strip_prefatory", False):
            records = tuple(
                strip_prefatory(r, EXPECTED_FORM_LENGTHS.get(r.style or ""))
                for r in corpus.records
            )
            corpus = Corpus(label=label, records=records)
        corpora.append(corpus)
    return corpora


def _write_report(
    out_dir: Path,
    fmt: str,
    tables: dict[str, tuple[list[str], list[dict]]],
    grids: dict[str, object],
    dictionary: PronouncingDictionary,
    settings: AnalysisSettings,
    corpora: list[Corpus],
    emit_plots: bool,
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in sorted(tables):
        columns, rows = tables[name]
        _write_table(out_dir, name, columns, rows, fmt)
    if grids:
        grid_dir = out_dir / "grids"
        grid_dir.mkdir(parents=True, exist_ok=True)
        for label in sorted(grids):
            grid = grids[label]
            (grid_dir / f"occupancy_{label}.csv").write_text(grid.to_csv(), encoding="utf-8")
            (grid_dir / f"occupancy_{label}.json").write_text(grid.to_json() + "\n", encoding="utf-8")
    metadata = {
        "tool": "poemetrics",
        "version": __version__,
        "dictionary_sha256": dictionary.source_sha256,
        "settings": settings.to_json_dict(),
        "corpora": {c.label: len(c) for c in corpora},
    }
    report = {
        "metadata": metadata,
        "tables": {name: rows for name, (_, rows) in sorted(tables.items())},
    }
    (out_dir / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if emit_plots:
        _write_plots(out_dir, tables, grids, corpora, settings.top_k)


def _write_plots(out_dir: Path, tables, grids, corpora: list[Corpus], top_k: int) -> None:
    from .structure import length_summary as _ls

    plot_dir = out_dir / "plots"
    plot_dir.mkdir(parents=True, exist_ok=True)
    for corpus in corpora:
        summaries = [(style, _ls(sub)) for style, sub in _style_groups(corpus)]
        (plot_dir / f"lengths_{corpus.label}.svg").write_text(
            svgplot.boxplot_svg(summaries, title=f"line counts: {corpus.label}"),
            encoding="utf-8",
        )
    if "rhyme" in tables:
        _, rows = tables["rhyme"]
        bars = [
            (f"{r['source']}/{r['style']}", r["poems_with_rhyme_pct"]) for r in rows
        ]
        (plot_dir / "rhyme_pct.svg").write_text(
            svgplot.barchart_svg(bars, title="poems with rhyme (%)"), encoding="utf-8"
        )
    for label in sorted(grids):
        (plot_dir / f"occupancy_{label}.svg").write_text(
            svgplot.heatmap_svg(grids[label], title=f"occupancy: {label}"), encoding="utf-8"
        )
    for name in ("logodds", "first_words"):
        if name not in tables:
            continue
        _, rows = tables[name]
        top = rows[:top_k]
        if not top:
            continue
        scale = max(abs(r["z"]) for r in top) or 1.0
        (plot_dir / f"{name}_top{top_k}.svg").write_text(
            svgplot.barchart_svg(
                [(r["word"], r["z"]) for r in top],
                title=f"most distinctive {name.replace('_', ' ')} (z)",
                max_value=scale,
            ),
            encoding="utf-8",
        )


_FAMILY_BUILDERS = {
    "structure": ("lengths", "quatrains"),
    "rhyme": ("rhyme",),
    "meter": ("meter",),
    "lexstats": ("pronouns", "touchstones"),
}


def _run_analysis(args, families: tuple[str, ...], with_grids: bool, compare: bool) -> int:
    dictionary = load_dictionary(args.dict)
    settings = AnalysisSettings(
        min_docs=args.min_docs,
        alpha_total=args.alpha_total,
        iambic_threshold=args.iambic_threshold,
        heatmap_rows=args.heatmap_rows,
        heatmap_cols=args.heatmap_cols,
        strip_prefatory=not args.no_strip_prefatory,
        top_k=args.top_k,
    )
    corpora = _load_corpora(args.corpus, args)
    analyzer = _Analyzer(dictionary, settings, args.threads)
    tables: dict[str, tuple[list[str], list[dict]]] = {}
    for family in families:
        for table in _FAMILY_BUILDERS[family]:
            tables[table] = getattr(analyzer, table)(corpora)
    if compare:
        if len(corpora) < 2:
            raise CorpusError("--compare requires two corpora")
        tables.update(analyzer.compare_tables(corpora[0], corpora[1]))
    if getattr(args, "per_poem", False) and "rhyme" in families:
        annotations_dir = Path(args.out) / "annotations"
        annotations_dir.mkdir(parents=True, exist_ok=True)
        for corpus in corpora:
            with open(annotations_dir / f"rhyme_{corpus.label}.jsonl", "w",
                      encoding="utf-8") as handle:
                for record in corpus.records:
                    row = annotate_rhymes(parse_structure(record), dictionary).to_json_dict()
                    row["id"] = record.id
                    handle.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")
    grids = {}
    if with_grids:
        for corpus in corpora:
            grids[corpus.label] = occupancy_heatmap(
                corpus, settings.heatmap_rows, settings.heatmap_cols
            )
    _write_report(
        Path(args.out), args.format, tables, grids, dictionary, settings, corpora,
        args.emit_plots,
    )
    print(f"report written to {args.out}")
    return 0


def cmd_analyze(args) -> int:
    return _run_analysis(
        args,
        ("structure", "rhyme", "meter", "lexstats"),
        with_grids=True,
        compare=args.compare,
    )


def cmd_family(args) -> int:
    return _run_analysis(args, (args.command,), with_grids=args.command == "structure",
                         compare=False)


def cmd_compare(args) -> int:
    args.compare = True
    return _run_analysis(args, (), with_grids=False, compare=True)


def cmd_generate(args) -> int:
    styles = tuple(args.styles) if args.styles else DEFAULT_STYLES
    subjects = tuple(args.subjects) if args.subjects else DEFAULT_SUBJECTS
    templates = tuple(args.templates) if args.templates else DEFAULT_TEMPLATES
    specs = build_grid(styles=styles, subjects=subjects, templates=templates)
    if args.dry_run:
        for spec in specs:
            print(spec.rendered)
        return 0
    if not args.out:
        print("error: --out is required unless --dry-run", file=sys.stderr)
        return 2
    api_key = os.environ.get(args.api_key_env, "")
    if not api_key:
        print(f"error: environment variable {args.api_key_env} is not set", file=sys.stderr)
        return 1
    client = ChatCompletionsClient(args.endpoint, api_key, timeout=args.timeout)
    job = GenerationJob(
        model=args.model,
        specs=specs,
        output_path=Path(args.out),
        temperature=args.temperature,
        max_output_tokens=args.max_output_tokens,
        max_retries=args.max_retries,
        rate_limit_per_sec=args.rate_limit,
        concurrency=args.concurrency,
        resume=not args.no_resume,
    )
    corpus = run_job(job, client)
    print(f"{len(corpus)} poems in {args.out}")
    return 0


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dict", default=str(bundled_dictionary_path()),
                        help="pronouncing dictionary file (CMU format)")
    parser.add_argument("--out", default="poemetrics-out", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="table file format")
    parser.add_argument("--threads", type=int, default=1, help="worker threads")
    parser.add_argument("--emit-plots", action="store_true",
                        help="also write simple SVG plots")
    parser.add_argument("--min-docs", type=int, default=10,
                        help="minimum poems a word must appear in for log-odds")
    parser.add_argument("--alpha-total", type=float, default=None,
                        help="total Dirichlet prior mass (default 0.01 * vocabulary size)")
    parser.add_argument("--iambic-threshold", type=float, default=0.75,
                        help="iambic dominance threshold")
    parser.add_argument("--heatmap-rows", type=int, default=60)
    parser.add_argument("--heatmap-cols", type=int, default=80)
    parser.add_argument("--top-k", type=int, default=15, help="top words kept in plots")
    parser.add_argument("--source-default", default=None,
                        help="source label for records that lack one (required for text directories)")
    parser.add_argument("--style-default", default=None,
                        help="style label for records that lack one")
    parser.add_argument("--no-strip-prefatory", action="store_true",
                        help="do not strip prefatory lines from over-long fixed-form poems")
    parser.add_argument("--per-poem", action="store_true",
                        help="also write per-poem rhyme annotations (JSON Lines)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poemetrics",
        description="Structural, prosodic, and lexical analysis of poetry corpora.",
    )
    parser.add_argument("--version", action="version", version=f"poemetrics {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run all analyses")
    analyze.add_argument("corpus", nargs="+", help="corpus file(s) or directory(ies)")
    analyze.add_argument("--compare", action="store_true",
                         help="also compare the first two corpora (log-odds tables)")
    _add_common_flags(analyze)
    analyze.set_defaults(func=cmd_analyze)

    for name, help_text in (
        ("structure", "line/stanza statistics and occupancy grids"),
        ("rhyme", "end-rhyme statistics"),
        ("meter", "iambic-dominance statistics"),
        ("lexstats", "pronoun and touchstone statistics"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("corpus", nargs="+")
        _add_common_flags(p)
        p.set_defaults(func=cmd_family)

    compare = sub.add_parser("compare", help="distinctive-word comparison of two corpora")
    compare.add_argument("corpus", nargs=2)
    _add_common_flags(compare)
    compare.set_defaults(func=cmd_compare)

    generate = sub.add_parser("generate", help="collect poems over the prompt grid")
    generate.add_argument("--model", required=True, help="model identifier")
    generate.add_argument("--endpoint", default="https://api.openai.com/v1/chat/completions")
    generate.add_argument("--api-key-env", default="OPENAI_API_KEY",
                          help="environment variable holding the API key")
    generate.add_argument("--out", default=None, help="output JSON Lines file")
    generate.add_argument("--styles", nargs="+", default=None)
    generate.add_argument("--subjects", nargs="+", default=None)
    generate.add_argument("--templates", nargs="+", default=None,
                          choices=DEFAULT_TEMPLATES)
    generate.add_argument("--temperature", type=float, default=1.0)
    generate.add_argument("--max-output-tokens", type=int, default=1024)
    generate.add_argument("--max-retries", type=int, default=3)
    generate.add_argument("--rate-limit", type=float, default=None,
                          help="max requests per second")
    generate.add_argument("--concurrency", type=int, default=4)
    generate.add_argument("--timeout", type=float, default=120.0)
    generate.add_argument("--dry-run", action="store_true",
                          help="print rendered prompts without calling the endpoint")
    generate.add_argument("--no-resume", action="store_true",
                          help="overwrite the output file instead of resuming")
    generate.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorpusError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
