"""Plays: placement resolution against a board, and scoring.

A play is specified by a start coordinate, a direction, and the full main
word it forms (existing tiles included). ``.gcg``-style patterns are also
accepted, with dots standing for tiles already on the board. Lowercase
letters denote blanks, both in input and in the resulting word string.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import board as board_mod
from .board import (ACROSS, DOWN, EMPTY, LETTER_MULT, SIZE, WORD_MULT, Board,
                    Coordinate, cell_index)
from .errors import IllegalPlacementError
from .tiles import BLANK, RACK_SIZE, tile_value

BINGO_BONUS = 50

PLACE = "place"
PASS = "pass"


@dataclass(frozen=True, slots=True)
class ScoreBreakdown:
    """How a play's score decomposes; ``total`` is the sum of the parts."""

    main_word: str
    main_score: int
    cross_words: tuple[tuple[str, int], ...]
    bingo_bonus: int

    @property
    def total(self) -> int:
        return (self.main_score + self.bingo_bonus
                + sum(s for _, s in self.cross_words))


@dataclass(frozen=True, slots=True)
class Move:
    """A placement (with its score breakdown) or a pass."""

    kind: str
    coord: Coordinate | None = None
    word: str = ""
    placed: tuple[tuple[int, str], ...] = ()  # (cell index, tile char)
    breakdown: ScoreBreakdown | None = None

    @property
    def score(self) -> int:
        return self.breakdown.total if self.breakdown else 0

    @property
    def is_pass(self) -> bool:
        return self.kind == PASS

    @property
    def tiles_used(self) -> str:
        """Rack tiles this play consumes (blanks as ``?``), sorted."""
        return "".join(sorted(BLANK if t.islower() else t
                              for _, t in self.placed))

    @property
    def is_bingo(self) -> bool:
        return len(self.placed) == RACK_SIZE

    def words_formed(self) -> list[str]:
        """Main word plus cross words, uppercased."""
        if self.is_pass:
            return []
        words = [self.word.upper()]
        words += [w.upper() for w, _ in self.breakdown.cross_words]
        return words

    def __str__(self) -> str:
        if self.is_pass:
            return "pass"
        return f"{self.word} {self.coord} +{self.score}"


def pass_move() -> Move:
    return Move(kind=PASS)


def _span_cells(coord: Coordinate, length: int) -> list[int]:
    r, c = coord.row0, coord.col0
    if coord.direction == ACROSS:
        if c + length > SIZE:
            raise IllegalPlacementError(
                f"{coord}: word of length {length} runs off the board")
        return [cell_index(r, c + i) for i in range(length)]
    if r + length > SIZE:
        raise IllegalPlacementError(
            f"{coord}: word of length {length} runs off the board")
    return [cell_index(r + i, c) for i in range(length)]


def _cross_word(board: Board, idx: int, tile: str, direction: str) -> str | None:
    """Word formed perpendicular to ``direction`` if ``tile`` lands on ``idx``."""
    stride = board_mod.step(DOWN if direction == ACROSS else ACROSS)
    lo = idx % SIZE if stride == SIZE else (idx // SIZE) * SIZE
    hi = lo + stride * (SIZE - 1)
    cells = board.cells
    start = idx
    while start - stride >= lo and cells[start - stride] != EMPTY:
        start -= stride
    end = idx
    while end + stride <= hi and cells[end + stride] != EMPTY:
        end += stride
    if start == end:
        return None
    chars = []
    for j in range(start, end + stride, stride):
        chars.append(tile if j == idx else cells[j])
    return "".join(chars)


def resolve_placement(board: Board, coord: Coordinate,
                      word: str) -> tuple[str, tuple[tuple[int, str], ...]]:
    """Match ``word`` (or a dotted pattern) against the board.

    Returns the full main word (blanks lowercase) and the newly placed
    tiles. Raises IllegalPlacementError for geometry violations: occupied
    squares that do not match, nothing placed, a word that is not the
    maximal run, or a disconnected placement.
    """
    if len(word) < 1:
        raise IllegalPlacementError("empty word")
    span = _span_cells(coord, len(word))
    stride = board_mod.step(coord.direction)
    cells = board.cells

    placed: list[tuple[int, str]] = []
    main: list[str] = []
    for ch, idx in zip(word, span):
        existing = cells[idx]
        if existing != EMPTY:
            if ch != "." and ch.upper() != existing.upper():
                raise IllegalPlacementError(
                    f"{coord}: {ch!r} conflicts with {existing!r} on the board")
            main.append(existing)
        else:
            if ch == "." or not ch.isalpha():
                raise IllegalPlacementError(
                    f"{coord}: pattern expects a tile on an empty square")
            placed.append((idx, ch))
            main.append(ch)
    if not placed:
        raise IllegalPlacementError(f"{coord}: play places no tiles")

    # The given word must be the maximal run: squares just before and
    # after the span must be empty or off the board.
    before = span[0] - stride
    if _in_line(before, span[0], coord.direction) and cells[before] != EMPTY:
        raise IllegalPlacementError(f"{coord}: word continues before the start")
    after = span[-1] + stride
    if _in_line(after, span[-1], coord.direction) and cells[after] != EMPTY:
        raise IllegalPlacementError(f"{coord}: word continues past the end")

    connected = len(placed) < len(span)  # through an existing tile
    if not connected:
        for idx, tile in placed:
            if _cross_word(board, idx, tile, coord.direction):
                connected = True
                break
    if not connected:
        if board.is_empty:
            center = cell_index(*board_mod.CENTER)
            connected = center in span
        if not connected:
            raise IllegalPlacementError(f"{coord}: play is disconnected")

    return "".join(main), tuple(placed)


def _in_line(idx: int, ref: int, direction: str) -> bool:
    """True if ``idx`` is on the board and in the same line as ``ref``."""
    if idx < 0 or idx >= SIZE * SIZE:
        return False
    if direction == ACROSS:
        return idx // SIZE == ref // SIZE
    return True


def score_play(board: Board, coord: Coordinate, word: str) -> Move:
    """Resolve and score a placement. Lexicon checks live elsewhere."""
    main, placed = resolve_placement(board, coord, word)
    placed_set = dict(placed)

    main_score = 0
    word_mult = 1
    span = _span_cells(coord, len(main))
    for idx in span:
        tile = placed_set.get(idx)
        if tile is not None:
            value = 0 if tile.islower() else tile_value(tile)
            main_score += value * LETTER_MULT[idx]
            word_mult *= WORD_MULT[idx]
        else:
            main_score += tile_value(board.cells[idx])
    main_score *= word_mult

    crosses: list[tuple[str, int]] = []
    for idx, tile in placed:
        cw = _cross_word(board, idx, tile, coord.direction)
        if cw is None:
            continue
        score = 0
        for ch, j in zip(cw, _cross_span(board, idx, coord.direction)):
            if j == idx:
                value = 0 if tile.islower() else tile_value(tile)
                score += value * LETTER_MULT[j]
            else:
                score += tile_value(ch)
        score *= WORD_MULT[idx]
        crosses.append((cw, score))

    bonus = BINGO_BONUS if len(placed) == RACK_SIZE else 0
    breakdown = ScoreBreakdown(main_word=main, main_score=main_score,
                               cross_words=tuple(crosses), bingo_bonus=bonus)
    return Move(kind=PLACE, coord=coord, word=main, placed=placed,
                breakdown=breakdown)


def _cross_span(board: Board, idx: int, direction: str) -> list[int]:
    """Cell indices of the cross word through ``idx`` (assumed to exist)."""
    stride = board_mod.step(DOWN if direction == ACROSS else ACROSS)
    lo = idx % SIZE if stride == SIZE else (idx // SIZE) * SIZE
    hi = lo + stride * (SIZE - 1)
    cells = board.cells
    start = idx
    while start - stride >= lo and cells[start - stride] != EMPTY:
        start -= stride
    end = idx
    while end + stride <= hi and cells[end + stride] != EMPTY:
        end += stride
    return list(range(start, end + stride, stride))
