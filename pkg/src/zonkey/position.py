"""Game state: positions, applying plays, drawing, and game end.

A :class:`Position` may be fully visible (both racks and the bag known,
as in endgame analysis) or a single player's view (own rack plus an
unseen pool covering the opponent's rack and the bag). All state is
immutable; every operation returns a new position.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace

from .board import Board
from .errors import IllegalMoveError, ZonkeyError
from .moves import Move
from .tiles import (RACK_SIZE, TileDistribution, STANDARD, add_tiles,
                    contains_tiles, rack_value, remove_tiles)

# Six consecutive scoreless turns (three each) end the game; each player
# then subtracts their own remaining rack. Keeps every game finite.
SCORELESS_LIMIT = 6

OUT = "out"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class GameValue:
    """Win/tie/loss for a designated player, with the final score pair."""

    value: int  # +1 win, 0 tie, -1 loss
    finals: tuple[int, int]  # indexed by player

    def __str__(self) -> str:
        return {1: "WIN", 0: "TIE", -1: "LOSS"}[self.value]


@dataclass(frozen=True)
class Position:
    """Board, racks, bag/unseen pool, scores, player to move.

    ``racks[p]`` is None when player ``p``'s tiles are hidden; hidden
    tiles live in ``unseen`` together with the bag, whose size is still
    tracked via ``bag_size``.
    """

    board: Board
    racks: tuple[str | None, str | None] = (None, None)
    bag: str | None = None
    unseen: str | None = None
    bag_size: int | None = None
    scores: tuple[int, int] = (0, 0)
    to_move: int = 0
    scoreless: int = 0

    def __post_init__(self):
        if self.to_move not in (0, 1):
            raise ZonkeyError("to_move must be 0 or 1")
        for rack in self.racks:
            if rack is not None and len(rack) > RACK_SIZE:
                raise ZonkeyError(f"rack too large: {rack!r}")
        if self.bag is not None and self.bag_size not in (None, len(self.bag)):
            raise ZonkeyError("bag_size inconsistent with bag contents")

    # -- views ---------------------------------------------------------

    @property
    def rack_to_move(self) -> str | None:
        return self.racks[self.to_move]

    @property
    def opponent(self) -> int:
        return 1 - self.to_move

    @property
    def is_full_information(self) -> bool:
        return (self.racks[0] is not None and self.racks[1] is not None
                and self.bag is not None)

    def effective_bag_size(self) -> int:
        if self.bag is not None:
            return len(self.bag)
        if self.bag_size is not None:
            return self.bag_size
        raise ZonkeyError("bag size unknown")

    def with_rack(self, player: int, rack: str) -> "Position":
        """Assign a hidden rack, removing its tiles from the unseen pool."""
        if self.racks[player] is not None:
            raise ZonkeyError(f"player {player} rack already known")
        if self.unseen is None:
            raise ZonkeyError("no unseen pool to draw the rack from")
        unseen = remove_tiles(self.unseen, rack)
        racks = list(self.racks)
        racks[player] = "".join(sorted(rack))
        bag_size = self.bag_size
        bag = self.bag
        other = racks[1 - player]
        if other is not None:
            # Pool now covers only the bag.
            bag = "".join(sorted(unseen))
            bag_size = len(bag)
            unseen = None
        return replace(self, racks=(racks[0], racks[1]), unseen=unseen,
                       bag=bag, bag_size=bag_size)

    def check_conservation(self, distribution: TileDistribution = STANDARD) -> None:
        """Raise unless board + racks + bag/unseen equals the full set."""
        counts = Counter(self.board.tile_counts())
        for rack in self.racks:
            if rack is not None:
                counts.update(rack)
        if self.bag is not None:
            counts.update(self.bag)
        if self.unseen is not None:
            counts.update(self.unseen)
        if dict(counts) != {t: n for t, n in distribution.counts.items() if n}:
            raise ZonkeyError("tile conservation violated")

    # -- transitions ----------------------------------------------------

    def apply(self, move: Move) -> "Position":
        return apply_play(self, move)


def apply_play(position: Position, move: Move) -> Position:
    """Apply a move for the player on turn. Drawing is a separate step.

    The mover's rack loses the placed tiles, the score and scoreless-turn
    counter update, and the turn passes.
    """
    mover = position.to_move
    scores = list(position.scores)
    if move.is_pass:
        return replace(position, to_move=1 - mover,
                       scoreless=position.scoreless + 1)

    rack = position.racks[mover]
    placed = {idx: t for idx, t in move.placed}
    if rack is not None:
        used = move.tiles_used
        if not contains_tiles(rack, used):
            raise IllegalMoveError(
                f"rack {rack!r} does not contain {used!r} for {move}")
        rack = remove_tiles(rack, used)
    board = position.board.place(placed)
    scores[mover] += move.score
    scoreless = 0 if move.score > 0 else position.scoreless + 1
    racks = list(position.racks)
    racks[mover] = rack
    unseen = position.unseen
    if rack is None and unseen is not None:
        # Hidden mover: the placed tiles leave the unseen pool.
        unseen = remove_tiles(unseen, move.tiles_used)
    return replace(position, board=board, racks=(racks[0], racks[1]),
                   scores=(scores[0], scores[1]), to_move=1 - mover,
                   scoreless=scoreless, unseen=unseen)


def draw_tiles(position: Position, drawn: str, player: int | None = None) -> Position:
    """Move ``drawn`` tiles from the bag to a rack.

    Chance is injected deterministically: callers decide what is drawn.
    By default the player who just moved draws.
    """
    if player is None:
        player = 1 - position.to_move
    rack = position.racks[player]
    if rack is None:
        raise IllegalMoveError("cannot draw to a hidden rack")
    if position.bag is None:
        raise IllegalMoveError("bag contents unknown")
    if len(drawn) > len(position.bag):
        raise IllegalMoveError(
            f"overdraw: {len(drawn)} tiles from a bag of {len(position.bag)}")
    if not contains_tiles(position.bag, drawn):
        raise IllegalMoveError(f"bag {position.bag!r} lacks {drawn!r}")
    if len(rack) + len(drawn) > RACK_SIZE:
        raise IllegalMoveError("drawing past a full rack")
    bag = remove_tiles(position.bag, drawn)
    racks = list(position.racks)
    racks[player] = add_tiles(rack, drawn)
    return replace(position, racks=(racks[0], racks[1]), bag=bag,
                   bag_size=len(bag))


def is_terminal(position: Position) -> str | None:
    """OUT, EXHAUSTED, or None if the game goes on."""
    last = 1 - position.to_move
    rack = position.racks[last]
    if rack == "" and position.effective_bag_size() == 0:
        return OUT
    if position.scoreless >= SCORELESS_LIMIT:
        return EXHAUSTED
    return None


def finalize_game(position: Position, ending: str | None = None,
                  hero: int = 0) -> GameValue:
    """Final scores and the +1/0/-1 outcome for ``hero``.

    ``out``: the player who just emptied their rack adds twice the face
    value of the opponent's leftovers. ``exhausted``: both players
    subtract their own remaining racks.
    """
    detected = is_terminal(position)
    if ending is None:
        ending = detected
    if ending is None or (detected != ending and not (
            ending == EXHAUSTED and detected == OUT)):
        if detected is None:
            raise ZonkeyError(f"position is not terminal (asked for {ending!r})")
    scores = list(position.scores)
    if ending == OUT:
        goer = 1 - position.to_move
        if position.racks[goer] != "":
            raise ZonkeyError("going out requires an empty rack")
        scores[goer] += 2 * rack_value(position.racks[1 - goer] or "")
    elif ending == EXHAUSTED:
        for p in (0, 1):
            scores[p] -= rack_value(position.racks[p] or "")
    else:
        raise ZonkeyError(f"unknown ending {ending!r}")
    diff = scores[hero] - scores[1 - hero]
    value = (diff > 0) - (diff < 0)
    return GameValue(value=value, finals=(scores[0], scores[1]))
