"""Tiles: point values, the standard 100-tile English distribution, racks.

Tiles are single characters. ``A``-``Z`` are ordinary letter tiles; ``?`` is
an undesignated blank. A blank that has been played on the board carries a
designated letter and is written in lowercase (``b`` = blank playing as B).
Racks and bags are represented as sorted strings of tile characters, which
keeps them hashable and cheap to copy.
"""

from __future__ import annotations

from collections import Counter

from .errors import IllegalMoveError, NotationError

BLANK = "?"
RACK_SIZE = 7

TILE_VALUES: dict[str, int] = {
    "A": 1, "B": 3, "C": 3, "D": 2, "E": 1, "F": 4, "G": 2, "H": 4,
    "I": 1, "J": 8, "K": 5, "L": 1, "M": 3, "N": 1, "O": 1, "P": 3,
    "Q": 10, "R": 1, "S": 1, "T": 1, "U": 1, "V": 4, "W": 4, "X": 8,
    "Y": 4, "Z": 10, BLANK: 0,
}

# Standard English set: 98 letter tiles + 2 blanks = 100.
TILE_COUNTS: dict[str, int] = {
    "A": 9, "B": 2, "C": 2, "D": 4, "E": 12, "F": 2, "G": 3, "H": 2,
    "I": 9, "J": 1, "K": 1, "L": 4, "M": 2, "N": 6, "O": 8, "P": 2,
    "Q": 1, "R": 6, "S": 4, "T": 6, "U": 4, "V": 2, "W": 2, "X": 1,
    "Y": 2, "Z": 1, BLANK: 2,
}

TOTAL_TILES = sum(TILE_COUNTS.values())  # 100


class TileDistribution:
    """A full tile set: per-tile counts and point values.

    The default instance is the standard English set. Alternative sets can
    be constructed directly or loaded from a file of ``TILE COUNT VALUE``
    lines (an override hook; nothing in the shipped data uses it).
    """

    def __init__(self, counts: dict[str, int] | None = None,
                 values: dict[str, int] | None = None):
        self.counts = dict(counts or TILE_COUNTS)
        self.values = dict(values or TILE_VALUES)
        self.total = sum(self.counts.values())

    @classmethod
    def from_file(cls, path) -> "TileDistribution":
        counts: dict[str, int] = {}
        values: dict[str, int] = {}
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                tile, count, value = line.split()
                counts[tile] = int(count)
                values[tile] = int(value)
        return cls(counts, values)

    def value(self, tile: str) -> int:
        """Point value of a tile. Lowercase (played blanks) score 0."""
        if tile.islower() or tile == BLANK:
            return 0
        return self.values[tile]

    def full_bag(self) -> str:
        return "".join(sorted(t * n for t, n in self.counts.items()))


STANDARD = TileDistribution()


def tile_value(tile: str) -> int:
    return STANDARD.value(tile)


def normalize_rack(tiles: str) -> str:
    """Canonical rack form: uppercase letters plus ``?``, sorted."""
    out = []
    for t in tiles:
        if t == BLANK:
            out.append(t)
        elif t.isalpha() and t.upper() in TILE_VALUES:
            out.append(t.upper())
        else:
            raise NotationError(f"invalid tile {t!r} in rack {tiles!r}")
    return "".join(sorted(out))


from functools import lru_cache


@lru_cache(maxsize=65536)
def rack_value(rack: str) -> int:
    """Sum of face values of the tiles on a rack."""
    return sum(tile_value(t) for t in rack)


def remove_tiles(pool: str, tiles: str) -> str:
    """Pool minus a multiset of tiles. Raises if a tile is missing."""
    counts = Counter(pool)
    for t in tiles:
        if counts[t] <= 0:
            raise IllegalMoveError(f"tile {t!r} not available in {pool!r}")
        counts[t] -= 1
    return "".join(sorted(counts.elements()))


def add_tiles(pool: str, tiles: str) -> str:
    return "".join(sorted(pool + tiles))


def contains_tiles(pool: str, tiles: str) -> bool:
    """True iff ``tiles`` is a sub-multiset of ``pool``."""
    pc, tc = Counter(pool), Counter(tiles)
    return all(pc[t] >= n for t, n in tc.items())
