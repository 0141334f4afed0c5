#!/usr/bin/env python3
"""Regenerate src/zonkey/data/mini_nwl.txt.

The shipped word list is closed and curated: every word the bundled
transcript forms (main words and cross words, recovered here by replay)
plus the words the pre-endgame analysis turns on. Membership is
load-bearing in both directions — blocking plays work because certain
strings are NOT words — so nothing else goes in.

Run from the repository root:  python3 tools/build_mini_lexicon.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from zonkey.gcg import parse_gcg, replay  # noqa: E402

DATA = ROOT / "src" / "zonkey" / "data"

# Plays and counter-plays of the pre-endgame analysis: setups, bluffs,
# blocks, outruns, and every cross word those plays create.
ANALYSIS_WORDS = """
ABLATE BACTERIAL BRONCHIAL CONED CONES DEL DITZ DITZY DWELL EL ELL EM ES EW
GOO GOOD INTERN INTERNS JAB JELL JELLY JIVY JO JOYS KI LO ME MI MODEL MODEM
MY MYSELF OK OR QAT QI SMOKEY TEL WILLFUL ZEK ZONK EMYDS
"""

# Seven-letter draws reachable from the candidate racks, and the longer
# plays that thread existing board tiles.
BINGO_WORDS = """
DOLMENS DONKEYS DONZELS ENFOLDS FONDLES KNOLLED MENFOLK MONKEYS ZEDONKS
ZONKEYS
FELLOWS MELLOWS SELFDOM SWOLLEN YELLOWS
FELLOWLY MELLOWLY MENFOLKS MINDFULLY SELDOMLY SOLEMNLY
"""


def main() -> None:
    gcg = parse_gcg((DATA / "puzzle.gcg").read_text())
    report = replay(gcg)
    transcript_words = sorted({w for e in report.entries for w in e.words})

    out = [
        "# mini_nwl.txt - curated subset of the NWL2023 tournament lexicon.",
        "# Regenerate with tools/build_mini_lexicon.py; the list is closed.",
        "",
        "# Words formed by the bundled transcript (replay-derived).",
    ]
    out += transcript_words
    out += ["", "# Words used by the pre-endgame analysis."]
    out += sorted(set(ANALYSIS_WORDS.split()))
    out += ["", "# Bingos reachable from the candidate racks, and longer bingos."]
    out += sorted(set(BINGO_WORDS.split()))

    target = DATA / "mini_nwl.txt"
    target.write_text("\n".join(out) + "\n", encoding="utf-8")
    total = len(transcript_words) + len(set(ANALYSIS_WORDS.split())) + len(
        set(BINGO_WORDS.split()))
    print(f"wrote {target} ({total} words)")


if __name__ == "__main__":
    main()
