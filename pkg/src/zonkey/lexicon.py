"""Word lists: membership, anagram index, and bingo searches.

The shipped list (``data/mini_nwl.txt``) is a small curated subset of a
tournament lexicon: every word the bundled game transcript forms plus the
words the pre-endgame analysis turns on. Negative membership matters as
much as positive here (blocking plays work precisely because certain
letter strings are *not* words), so the list is closed: nothing outside
it is valid.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from pathlib import Path
from typing import Iterable

from .errors import LexiconError
from .tiles import RACK_SIZE

MIN_WORD = 2
MAX_WORD = 15


class Lexicon:
    """An immutable word set with an anagram index."""

    def __init__(self, words: Iterable[str], source: str = "custom"):
        self.source = source
        self.words = frozenset(words)
        for w in self.words:
            if not w.isalpha() or not w.isupper():
                raise LexiconError(f"invalid word {w!r}")
            if not MIN_WORD <= len(w) <= MAX_WORD:
                raise LexiconError(f"word length out of range: {w!r}")
        index: dict[str, list[str]] = {}
        by_length: dict[int, list[str]] = {}
        for w in self.words:
            index.setdefault("".join(sorted(w)), []).append(w)
            by_length.setdefault(len(w), []).append(w)
        self.anagrams = {k: tuple(sorted(v)) for k, v in index.items()}
        self.by_length = {k: tuple(sorted(v)) for k, v in by_length.items()}

    def __contains__(self, word: str) -> bool:
        return self.contains(word)

    def __len__(self) -> int:
        return len(self.words)

    def contains(self, word: str) -> bool:
        """Exact membership; input is case-normalized."""
        return word.upper() in self.words

    def words_of_length(self, n: int) -> tuple[str, ...]:
        return self.by_length.get(n, ())

    def anagrams_of(self, letters: str) -> tuple[str, ...]:
        return self.anagrams.get("".join(sorted(letters.upper())), ())


def load_lexicon(path: str | Path, source: str | None = None) -> Lexicon:
    """Load a newline-delimited word file.

    Blank lines and ``#`` comments are allowed; anything else must be
    letters A-Z. Errors report the offending line number.
    """
    path = Path(path)
    words: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            word = line.upper()
            if not word.isalpha() or not word.isascii():
                raise LexiconError(
                    f"{path.name}:{lineno}: invalid characters in {line!r}")
            if not MIN_WORD <= len(word) <= MAX_WORD:
                raise LexiconError(
                    f"{path.name}:{lineno}: bad word length in {line!r}")
            words.add(word)
    if not words:
        raise LexiconError(f"{path.name}: no words found")
    return Lexicon(words, source=source or path.stem)


def bingos_from(lexicon: Lexicon, rack: str) -> list[str]:
    """All seven-letter words spellable from a seven-tile, blank-free rack."""
    rack = rack.upper()
    if len(rack) != RACK_SIZE:
        raise LexiconError(f"bingo search needs a 7-tile rack, got {rack!r}")
    if "?" in rack:
        raise LexiconError("blank-aware bingo search is not supported")
    return list(lexicon.anagrams_of(rack))


def reachable_bingos(lexicon: Lexicon, rack: str, tiles_played: str,
                     pool: str, draws: int) -> dict[str, tuple[str, ...]]:
    """Bingos reachable after playing ``tiles_played`` and drawing.

    For each distinct multiset of ``draws`` tiles from ``pool``, the
    seven-letter words spellable from (rack - played + draw). Returns a
    mapping from the drawn tiles (sorted string) to the sorted word list.
    """
    rack_c = Counter(rack.upper())
    played_c = Counter(tiles_played.upper())
    if any(rack_c[t] < n for t, n in played_c.items()):
        raise LexiconError(
            f"played tiles {tiles_played!r} not all on rack {rack!r}")
    keep = rack_c - played_c
    out: dict[str, tuple[str, ...]] = {}
    if sum(keep.values()) + draws != RACK_SIZE:
        # Cannot reach seven tiles: no draw leads to a bingo.
        return out
    pool_sorted = sorted(pool.upper())
    seen: set[str] = set()
    for combo in combinations(pool_sorted, draws):
        draw = "".join(combo)
        if draw in seen:
            continue
        seen.add(draw)
        letters = "".join(sorted((keep + Counter(draw)).elements()))
        out[draw] = lexicon.anagrams_of(letters)
    return out
