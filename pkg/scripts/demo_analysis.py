#!/usr/bin/env python3
"""Run the full analysis pipeline on the bundled fixture corpora.

Writes a complete report (tables, occupancy grids, SVG plots, report.json)
to demo-report/ and prints a few headline numbers.

Usage:
    python scripts/demo_analysis.py [--out DIR]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from poemetrics.cli import main as cli_main  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo-report")
    args = parser.parse_args()

    human = REPO / "tests" / "data" / "fixture_human.jsonl"
    gpt = REPO / "tests" / "data" / "fixture_gpt.jsonl"
    code = cli_main([
        "analyze", str(human), str(gpt),
        "--compare", "--min-docs", "1", "--emit-plots",
        "--out", args.out,
    ])
    if code != 0:
        return code

    report = json.loads((Path(args.out) / "report.json").read_text())
    print(f"\ndictionary sha256: {report['metadata']['dictionary_sha256'][:16]}…")
    for row in report["tables"]["rhyme"]:
        if row["style"] == "ALL":
            print(
                f"{row['source']:>16}: {row['poems_with_rhyme_pct']:.1f}% poems rhyme, "
                f"{100 * row['avg_rhymed_fraction']:.1f}% lines rhymed"
            )
    for row in report["tables"]["meter"]:
        if row["style"] == "ALL":
            print(
                f"{row['source']:>16}: {row['pct_dominant_iambic']:.1f}% iambic-dominant "
                f"(mean score {row['mean_iambic_score']:.2f})"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
