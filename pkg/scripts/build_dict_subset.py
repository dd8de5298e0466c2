#!/usr/bin/env python3
"""Extract a compact dictionary subset from a full CMU-format file.

Given the full published pronouncing dictionary and a word list (one word
per line; defaults to the words of the currently bundled subset), writes a
smaller dictionary file containing just those words with all their
variants. Used to refresh src/poemetrics/data/cmudict_subset.dict from an
authoritative source.

    python scripts/build_dict_subset.py cmudict.dict --words words.txt \
        --out src/poemetrics/data/cmudict_subset.dict
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from poemetrics.arpabet import load_bundled_dictionary, load_dictionary  # noqa: E402

HEADER = """;;; Compact pronouncing dictionary in the plain-text CMU format.
;;; Covers the bundled test fixtures plus common English vocabulary;
;;; vowels carry stress digits (0 none, 1 primary, 2 secondary).
"""


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("full_dict", help="full CMU-format dictionary file")
    parser.add_argument("--words", default=None,
                        help="word list file (default: words of the bundled subset)")
    parser.add_argument("--out", default="cmudict_subset.dict")
    args = parser.parse_args()

    full = load_dictionary(args.full_dict)
    if args.words:
        wanted = {
            w.strip().lower()
            for w in Path(args.words).read_text(encoding="utf-8").splitlines()
            if w.strip()
        }
    else:
        wanted = set(load_bundled_dictionary().words())

    missing = sorted(w for w in wanted if w not in full)
    lines = [HEADER.rstrip("\n")]
    for word in sorted(wanted - set(missing)):
        for i, variant in enumerate(full.lookup(word)):
            key = word.upper() if i == 0 else f"{word.upper()}({i})"
            lines.append(f"{key}  {' '.join(variant)}")
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {args.out}: {len(wanted) - len(missing)} words")
    if missing:
        print(f"{len(missing)} requested words missing from {args.full_dict}:")
        for word in missing[:20]:
            print(f"  {word}")
        if len(missing) > 20:
            print(f"  … and {len(missing) - 20} more")
    return 0


if __name__ == "__main__":
    sys.exit(main())
