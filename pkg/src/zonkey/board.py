"""Board geometry: premium squares, coordinate notation, the 15x15 grid.

Cells are stored as a single 225-character string: ``.`` for an empty
square, ``A``-``Z`` for a letter tile, lowercase for a played blank. Rows
and columns are 0-indexed internally; the notation layer speaks the usual
1-15 / A-O convention where a horizontal play is written number-first
(``8K``) and a vertical play letter-first (``H11``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IllegalPlacementError, NotationError

SIZE = 15
CENTER = (7, 7)
COLS = "ABCDEFGHIJKLMNO"
EMPTY = "."

ACROSS = "across"
DOWN = "down"

# Premium layout, one row per string: T/D = triple/double word,
# t/d = triple/double letter, * = center star (double word).
_PREMIUM_ROWS = (
    "T..d...T...d..T",
    ".D...t...t...D.",
    "..D...d.d...D..",
    "d..D...d...D..d",
    "....D.....D....",
    ".t...t...t...t.",
    "..d...d.d...d..",
    "T..d...*...d..T",
    "..d...d.d...d..",
    ".t...t...t...t.",
    "....D.....D....",
    "d..D...d...D..d",
    "..D...d.d...D..",
    ".D...t...t...D.",
    "T..d...T...d..T",
)

LETTER_MULT = tuple(
    {"d": 2, "t": 3}.get(ch, 1) for row in _PREMIUM_ROWS for ch in row
)
WORD_MULT = tuple(
    {"D": 2, "T": 3, "*": 2}.get(ch, 1) for row in _PREMIUM_ROWS for ch in row
)

PREMIUM_NAMES = {"d": "DL", "t": "TL", "D": "DW", "T": "TW", "*": "DW"}


def cell_index(row: int, col: int) -> int:
    return row * SIZE + col


def premium_at(row: int, col: int) -> str | None:
    """Premium name ('DL', 'TL', 'DW', 'TW') or None for a plain square."""
    return PREMIUM_NAMES.get(_PREMIUM_ROWS[row][col])


@dataclass(frozen=True, order=True, slots=True)
class Coordinate:
    """Start square and direction of a play.

    ``row`` and ``col`` are 1-based (row 1-15, col 1-15 for A-O).
    """

    row: int
    col: int
    direction: str

    def __post_init__(self):
        if not (1 <= self.row <= SIZE and 1 <= self.col <= SIZE):
            raise NotationError(f"coordinate out of range: {self!r}")
        if self.direction not in (ACROSS, DOWN):
            raise NotationError(f"bad direction: {self.direction!r}")

    @property
    def row0(self) -> int:
        return self.row - 1

    @property
    def col0(self) -> int:
        return self.col - 1

    def __str__(self) -> str:
        letter = COLS[self.col0]
        if self.direction == ACROSS:
            return f"{self.row}{letter}"
        return f"{letter}{self.row}"


def parse_coordinate(text: str) -> Coordinate:
    """Parse coordinate notation.

    Number-first means horizontal (``8K`` = row 8, column K, across);
    letter-first means vertical (``H11`` = column H, row 11, down).
    """
    text = text.strip().upper()
    if not text:
        raise NotationError("empty coordinate")
    if text[0].isdigit():
        i = 1
        while i < len(text) and text[i].isdigit():
            i += 1
        row_s, col_s = text[:i], text[i:]
        direction = ACROSS
    else:
        col_s, row_s = text[0], text[1:]
        direction = DOWN
    if len(col_s) != 1 or col_s not in COLS:
        raise NotationError(f"bad column in coordinate {text!r}")
    if not row_s.isdigit() or not (1 <= int(row_s) <= SIZE):
        raise NotationError(f"bad row in coordinate {text!r}")
    return Coordinate(int(row_s), COLS.index(col_s) + 1, direction)


def format_coordinate(coord: Coordinate) -> str:
    return str(coord)


@dataclass(frozen=True, slots=True)
class Board:
    """Immutable 15x15 grid."""

    cells: str = EMPTY * (SIZE * SIZE)

    def __post_init__(self):
        if len(self.cells) != SIZE * SIZE:
            raise ValueError("board must have 225 cells")

    @property
    def is_empty(self) -> bool:
        return self.cells == EMPTY * (SIZE * SIZE)

    def at(self, row: int, col: int) -> str | None:
        """Tile at 0-indexed (row, col), or None if the square is empty."""
        ch = self.cells[cell_index(row, col)]
        return None if ch == EMPTY else ch

    def place(self, tiles: dict[int, str]) -> "Board":
        """New board with ``tiles`` (cell index -> tile char) added."""
        cells = list(self.cells)
        for idx, tile in tiles.items():
            if cells[idx] != EMPTY:
                raise IllegalPlacementError(f"square {idx} already occupied")
            cells[idx] = tile
        return Board("".join(cells))

    def tile_counts(self) -> dict[str, int]:
        """Multiset of tiles on the board; played blanks count as ``?``."""
        counts: dict[str, int] = {}
        for ch in self.cells:
            if ch == EMPTY:
                continue
            key = "?" if ch.islower() else ch
            counts[key] = counts.get(key, 0) + 1
        return counts

    def render(self) -> str:
        """ASCII picture: A-O header, 1-15 row labels, blanks lowercase."""
        lines = ["   " + " ".join(COLS)]
        for r in range(SIZE):
            row = " ".join(self.cells[cell_index(r, c)] for c in range(SIZE))
            lines.append(f"{r + 1:>2} {row}")
        return "\n".join(lines)


def line_indices(direction: str, line: int) -> list[int]:
    """Cell indices of row ``line`` (across) or column ``line`` (down)."""
    if direction == ACROSS:
        return [cell_index(line, c) for c in range(SIZE)]
    return [cell_index(r, line) for r in range(SIZE)]


def step(direction: str) -> int:
    """Cell-index stride along a direction."""
    return 1 if direction == ACROSS else SIZE
