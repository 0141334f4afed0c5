"""Move generation: every legal placement for a rack on a board.

The generator walks each board line and tries every lexicon word at every
offset, checking rack availability and the cross-check set of each empty
square. Work is cached aggressively by *content*: which words fit a line
depends only on that line's fifteen characters, and a square's
cross-check context depends only on the perpendicular line, so endgame
search (which revisits near-identical boards constantly) amortizes the
scan to dictionary lookups. The test suite pins the generator against a
brute-force permutation enumerator.

A single placed tile can head a word in either orientation. Such plays
are generated once, labeled with the longer word formed (ties go to the
horizontal reading), which matches transcript conventions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .board import (ACROSS, CENTER, DOWN, EMPTY, LETTER_MULT, SIZE,
                    WORD_MULT, Board, Coordinate, cell_index)
from .errors import IllegalMoveError, IllegalPlacementError
from .lexicon import Lexicon
from .moves import (BINGO_BONUS, Move, PLACE, ScoreBreakdown, pass_move,
                    score_play)
from .position import Position
from .tiles import BLANK, RACK_SIZE, tile_value

ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"

_CENTER_IDX = cell_index(*CENTER)
_EMPTY_ROW = EMPTY * SIZE


@dataclass(frozen=True, slots=True)
class _Fit:
    """A word laid over one line at one offset, rack-independent."""

    word: str
    start: int
    fills: tuple[tuple[int, str], ...]  # (offset in line, letter)
    through: bool  # span crosses an existing tile
    need: tuple[tuple[str, int], ...]  # letter -> count, sorted


class MoveCache:
    """Content-addressed caches shared across boards and racks.

    Safe to reuse for any boards as long as the lexicon is the same.
    """

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon
        self.line_fits: dict[str, tuple[_Fit, ...]] = {}
        self.rack_fits_cache: dict[tuple[str, str], tuple[_Fit, ...]] = {}
        self.perp: dict[tuple[str, int], tuple[str, str]] = {}
        self.moves: dict[tuple[str, str], list[Move]] = {}

    def fits(self, content: str) -> tuple[_Fit, ...]:
        got = self.line_fits.get(content)
        if got is None:
            got = _scan_line(content, self.lexicon)
            self.line_fits[content] = got
        return got

    def rack_fits(self, content: str, rack: str, rack_counts,
                  blanks: int) -> tuple[_Fit, ...]:
        """Fits of a line further filtered by rack availability."""
        key = (content, rack)
        got = self.rack_fits_cache.get(key)
        if got is None:
            kept = []
            for fit in self.fits(content):
                short = 0
                for letter, n in fit.need:
                    have = rack_counts[letter]
                    if n > have:
                        short += n - have
                        if short > blanks:
                            break
                if short <= blanks:
                    kept.append(fit)
            got = tuple(kept)
            self.rack_fits_cache[key] = got
        return got

    def perp_context(self, perp_content: str, pos: int) -> tuple[str, str]:
        key = (perp_content, pos)
        got = self.perp.get(key)
        if got is None:
            i = pos - 1
            while i >= 0 and perp_content[i] != EMPTY:
                i -= 1
            j = pos + 1
            while j < SIZE and perp_content[j] != EMPTY:
                j += 1
            got = (perp_content[i + 1:pos], perp_content[pos + 1:j])
            self.perp[key] = got
        return got


def _scan_line(content: str, lexicon: Lexicon) -> tuple[_Fit, ...]:
    """All word/offset fits compatible with a line's existing tiles."""
    out: list[_Fit] = []
    occupied = [ch != EMPTY for ch in content]
    upper = content.upper()
    for length, words in lexicon.by_length.items():
        if length > SIZE:
            continue
        for start in range(SIZE - length + 1):
            if start > 0 and occupied[start - 1]:
                continue
            end = start + length
            if end < SIZE and occupied[end]:
                continue
            window = upper[start:end]
            window_occ = occupied[start:end]
            for word in words:
                fills = []
                ok = True
                for k in range(length):
                    if window_occ[k]:
                        if window[k] != word[k]:
                            ok = False
                            break
                    else:
                        fills.append((start + k, word[k]))
                if not ok or not fills:
                    continue
                need = Counter(ch for _, ch in fills)
                out.append(_Fit(word=word, start=start, fills=tuple(fills),
                                through=len(fills) < length,
                                need=tuple(sorted(need.items()))))
    return tuple(out)


def _placements(board: Board, rack: str, lexicon: Lexicon,
                cache: MoveCache | None = None) -> list[Move]:
    """Scored legal placements, deterministically ordered."""
    if cache is None:
        cache = MoveCache(lexicon)
    elif cache.lexicon is not lexicon:
        raise IllegalMoveError("cache was built for a different lexicon")
    rack = rack.upper().replace(" ", "")
    key = (board.cells, rack)
    got = cache.moves.get(key)
    if got is not None:
        return got

    cells = board.cells
    rows = [cells[r * SIZE:(r + 1) * SIZE] for r in range(SIZE)]
    cols = [cells[c::SIZE] for c in range(SIZE)]
    rack_counts = Counter(rack)
    blanks = rack_counts[BLANK]
    empty_board = board.is_empty
    lexicon_words = lexicon.words

    found: dict[tuple[tuple[int, str], ...], Move] = {}
    for direction in (ACROSS, DOWN):
        lines = rows if direction == ACROSS else cols
        perps = cols if direction == ACROSS else rows
        for line_no, content in enumerate(lines):
            if content == _EMPTY_ROW:
                # Playable only via perpendicular contact or the opening.
                if empty_board:
                    center_line = CENTER[0] if direction == ACROSS else CENTER[1]
                    if line_no != center_line:
                        continue
                else:
                    prev_line = lines[line_no - 1] if line_no else _EMPTY_ROW
                    next_line = (lines[line_no + 1]
                                 if line_no < SIZE - 1 else _EMPTY_ROW)
                    if prev_line == _EMPTY_ROW and next_line == _EMPTY_ROW:
                        continue
            for fit in cache.rack_fits(content, rack, rack_counts, blanks):
                anchored = fit.through
                cross_ctx = []
                legal = True
                for off, letter in fit.fills:
                    pre, post = cache.perp_context(perps[off], line_no)
                    if pre or post:
                        anchored = True
                        if (pre.upper() + letter + post.upper()) \
                                not in lexicon_words:
                            legal = False
                            break
                    cross_ctx.append((off, letter, pre, post))
                if not legal:
                    continue
                if not anchored:
                    center_off = CENTER[1] if direction == ACROSS else CENTER[0]
                    span_has_center = (
                        empty_board
                        and fit.start <= center_off < fit.start + len(fit.word))
                    if not span_has_center:
                        continue
                _emit(board, direction, line_no, fit, rack_counts, blanks,
                      cross_ctx, found)

    moves = sorted(found.values(),
                   key=lambda m: (-m.score, m.word.upper(),
                                  m.coord.direction, m.coord.row, m.coord.col))
    cache.moves[key] = moves
    return moves


def _emit(board, direction, line_no, fit, rack_counts, blanks, cross_ctx,
          found):
    """Score every blank/tile variant of a fit and record the moves."""
    if direction == ACROSS:
        row0, col0 = line_no, fit.start
    else:
        row0, col0 = fit.start, line_no
    coord = Coordinate(row0 + 1, col0 + 1, direction)
    ctx = {off: (pre, post) for off, _, pre, post in cross_ctx}

    # Existing tiles keep their board case (blanks stay lowercase).
    cells = board.cells
    base_chars = []
    for k in range(len(fit.word)):
        off = fit.start + k
        idx = (line_no * SIZE + off if direction == ACROSS
               else off * SIZE + line_no)
        base_chars.append(cells[idx] if cells[idx] != EMPTY else fit.word[k])

    for assignment in _blank_assignments(fit.fills, rack_counts, blanks):
        placed = []
        word_chars = list(base_chars)
        for off, ch in assignment:
            idx = (line_no * SIZE + off if direction == ACROSS
                   else off * SIZE + line_no)
            placed.append((idx, ch))
            word_chars[off - fit.start] = ch
        move = _score_fit(board, coord, fit, assignment, ctx, direction,
                          line_no, "".join(word_chars), tuple(placed))
        _record(found, move)


def _score_fit(board, coord, fit, assignment, ctx, direction, line_no,
               word, placed) -> Move:
    """Inline scorer; mirrors moves.score_play exactly."""
    cells = board.cells
    placed_at = dict(placed)
    main_score = 0
    word_mult = 1
    stride = 1 if direction == ACROSS else SIZE
    base = line_no * SIZE if direction == ACROSS else line_no
    for k, ch in enumerate(word):
        off = fit.start + k
        idx = base + off * stride
        tile = placed_at.get(idx)
        if tile is not None:
            value = 0 if tile.islower() else tile_value(tile)
            main_score += value * LETTER_MULT[idx]
            word_mult *= WORD_MULT[idx]
        else:
            main_score += tile_value(cells[idx])
    main_score *= word_mult

    crosses = []
    for off, ch in assignment:
        pre, post = ctx[off]
        if not pre and not post:
            continue
        idx = base + off * stride
        value = 0 if ch.islower() else tile_value(ch)
        score = value * LETTER_MULT[idx]
        score += sum(tile_value(c) for c in pre)
        score += sum(tile_value(c) for c in post)
        score *= WORD_MULT[idx]
        crosses.append((pre + ch + post, score))

    bonus = BINGO_BONUS if len(placed) == RACK_SIZE else 0
    breakdown = ScoreBreakdown(main_word=word, main_score=main_score,
                               cross_words=tuple(crosses), bingo_bonus=bonus)
    return Move(kind=PLACE, coord=coord, word=word, placed=placed,
                breakdown=breakdown)


def _blank_assignments(fills, rack_counts, blanks):
    """Yield tile/blank assignments as tuples of (offset, char); blanks
    are lowercase. Distinct assignments are distinct moves."""
    if blanks == 0:
        return (fills,)
    out: list[tuple[tuple[int, str], ...]] = []
    avail = Counter(rack_counts)

    def walk(i: int, blanks_left: int, acc: list[tuple[int, str]]):
        if i == len(fills):
            out.append(tuple(acc))
            return
        off, ch = fills[i]
        if avail[ch] > 0:
            avail[ch] -= 1
            acc.append((off, ch))
            walk(i + 1, blanks_left, acc)
            acc.pop()
            avail[ch] += 1
        if blanks_left > 0:
            acc.append((off, ch.lower()))
            walk(i + 1, blanks_left - 1, acc)
            acc.pop()

    walk(0, blanks, [])
    return out


def _record(found, move: Move) -> None:
    """Dedupe one-tile plays generated in both orientations: keep the
    longer main word; ties prefer the horizontal reading."""
    key = move.placed
    cur = found.get(key)
    if cur is None:
        found[key] = move
        return
    better = (len(move.word), move.coord.direction == ACROSS)
    incumbent = (len(cur.word), cur.coord.direction == ACROSS)
    if better > incumbent:
        found[key] = move


# ---------------------------------------------------------------------------
# Public surface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossCheckTable:
    """For each empty square and play orientation, the letters whose
    perpendicular word (if any) would be valid."""

    allowed: dict[tuple[int, str], frozenset[str]]

    @classmethod
    def build(cls, board: Board, lexicon: Lexicon) -> "CrossCheckTable":
        cache = MoveCache(lexicon)
        cells = board.cells
        rows = [cells[r * SIZE:(r + 1) * SIZE] for r in range(SIZE)]
        cols = [cells[c::SIZE] for c in range(SIZE)]
        table: dict[tuple[int, str], frozenset[str]] = {}
        for idx, ch in enumerate(cells):
            if ch != EMPTY:
                continue
            r, c = divmod(idx, SIZE)
            for direction in (ACROSS, DOWN):
                perp = cols[c] if direction == ACROSS else rows[r]
                pos = r if direction == ACROSS else c
                pre, post = cache.perp_context(perp, pos)
                if not pre and not post:
                    table[(idx, direction)] = frozenset(ALPHABET)
                else:
                    table[(idx, direction)] = frozenset(
                        L for L in ALPHABET
                        if lexicon.contains(pre.upper() + L + post.upper()))
        return cls(allowed=table)

    def letters(self, row: int, col: int, direction: str) -> frozenset[str]:
        return self.allowed[(cell_index(row, col), direction)]


def generate_moves(position: Position, rack: str | None, lexicon: Lexicon,
                   cache: MoveCache | None = None) -> list[Move]:
    """All legal placements for ``rack`` on the position's board, scored,
    in deterministic order (score desc, then word, then coordinate), with
    a pass appended."""
    if rack is None:
        rack = position.rack_to_move
    if rack is None:
        raise IllegalMoveError("rack unknown; pass one explicitly")
    moves = list(_placements(position.board, rack, lexicon, cache))
    moves.append(pass_move())
    return moves


def highest_scoring(position: Position, rack: str | None,
                    lexicon: Lexicon) -> Move:
    """Top of the deterministic ordering (a pass if nothing plays)."""
    return generate_moves(position, rack, lexicon)[0]


def blocking_moves(position: Position, rack: str | None, lexicon: Lexicon,
                   threat: Move) -> list[Move]:
    """Moves after which ``threat`` is no longer a legal play.

    Blocking is semantic, not geometric: a reply blocks if the exact
    threat (same squares, same tiles) can no longer be made, whether by
    occupying a square it needs or by invalidating a cross word.
    """
    if not _move_legal(position.board, threat, lexicon):
        raise IllegalMoveError(f"threat {threat} is not legal as it stands")
    out = []
    for move in generate_moves(position, rack, lexicon):
        if move.is_pass:
            continue
        after = position.board.place(dict(move.placed))
        if not _move_legal(after, threat, lexicon):
            out.append(move)
    return out


def _move_legal(board: Board, move: Move, lexicon: Lexicon) -> bool:
    """True if ``move`` could be generated on ``board`` exactly as is."""
    try:
        probe = score_play(board, move.coord, move.word)
    except IllegalPlacementError:
        return False
    if probe.placed != move.placed:
        return False
    return all(lexicon.contains(w) for w in probe.words_formed())
