""".gcg transcript parsing, printing, and audited replay.

Supported constructs are the ones the bundled transcript uses: pragma
lines (``#key value``) and play events
(``>Player: RACK COORD WORD +SCORE TOTAL``). Pass, exchange and
challenge notations are parsed into an ``other`` event kind which replay
rejects with a clear message, so the grammar stays honest about what is
actually verified.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .board import Board, Coordinate, parse_coordinate
from .errors import GcgError
from .lexicon import Lexicon
from .moves import score_play
from .position import Position, apply_play
from .tiles import STANDARD, TileDistribution, contains_tiles

PLAY = "play"
OTHER = "other"

_EVENT_RE = re.compile(
    r"^>(?P<player>\S+):\s+(?P<rack>\S+)\s+(?P<coord>\S+)\s+(?P<word>\S+)"
    r"\s+\+(?P<score>-?\d+)\s+(?P<total>-?\d+)\s*$")
_OTHER_RE = re.compile(
    r"^>(?P<player>\S+):\s+(?P<rest>.*)$")


@dataclass(frozen=True)
class GcgEvent:
    """One transcript row."""

    kind: str
    player: str
    rack: str
    coord: str
    word: str
    score: int
    total: int
    line: int
    raw: str = ""

    def format(self) -> str:
        return (f">{self.player}: {self.rack} {self.coord} {self.word} "
                f"+{self.score} {self.total}")


@dataclass
class Gcg:
    """Parsed transcript: pragmas in order, then events."""

    pragmas: list[tuple[str, str]] = field(default_factory=list)
    events: list[GcgEvent] = field(default_factory=list)

    @property
    def player_ids(self) -> list[str]:
        ids = []
        for key, value in self.pragmas:
            if key in ("player1", "player2"):
                ids.append(value.split()[0])
        return ids

    def pragma(self, key: str) -> str | None:
        for k, v in self.pragmas:
            if k == key:
                return v
        return None

    def format(self) -> str:
        lines = [f"#{k} {v}" for k, v in self.pragmas]
        lines += [e.format() if e.kind == PLAY else e.raw for e in self.events]
        return "\n".join(lines) + "\n"


def parse_gcg(text: str) -> Gcg:
    """Parse transcript text; malformed rows raise with their line number."""
    gcg = Gcg()
    known: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            if not parts:
                raise GcgError("empty pragma", lineno)
            key = parts[0]
            value = parts[1] if len(parts) > 1 else ""
            gcg.pragmas.append((key, value))
            if key in ("player1", "player2") and value:
                known.add(value.split()[0])
            continue
        if line.startswith(">"):
            m = _EVENT_RE.match(line)
            if m is None:
                m2 = _OTHER_RE.match(line)
                if m2 is None:
                    raise GcgError(f"unparsable event row: {line!r}", lineno)
                gcg.events.append(GcgEvent(
                    kind=OTHER, player=m2.group("player"), rack="", coord="",
                    word="", score=0, total=0, line=lineno, raw=line))
                continue
            player = m.group("player")
            if known and player not in known:
                raise GcgError(f"unknown player id {player!r}", lineno)
            coord = m.group("coord")
            kind = PLAY
            if coord.startswith("-"):
                # Exchange/pass notation; recorded but not replayable.
                kind = OTHER
            gcg.events.append(GcgEvent(
                kind=kind, player=player, rack=m.group("rack"), coord=coord,
                word=m.group("word"), score=int(m.group("score")),
                total=int(m.group("total")), line=lineno, raw=line))
            continue
        raise GcgError(f"unrecognized line: {line!r}", lineno)
    return gcg


@dataclass(frozen=True)
class AuditEntry:
    """Replay record for one event."""

    event: GcgEvent
    move_str: str
    computed_score: int
    computed_total: int
    words: tuple[str, ...]
    ok: bool

    def format(self) -> str:
        mark = "ok" if self.ok else "MISMATCH"
        return (f"{self.event.player:<10} {self.move_str:<24} "
                f"+{self.computed_score:<4} {self.computed_total:<5} {mark}")


@dataclass
class ReplayReport:
    """Outcome of replaying a transcript."""

    entries: list[AuditEntry]
    position: Position
    players: list[str]

    @property
    def mismatches(self) -> list[AuditEntry]:
        return [e for e in self.entries if not e.ok]

    @property
    def final_scores(self) -> tuple[int, int]:
        return self.position.scores

    def format(self) -> str:
        lines = [e.format() for e in self.entries]
        a, b = self.final_scores
        lines.append(f"final: {self.players[0]} {a} - {self.players[1]} {b}"
                     f" ({len(self.mismatches)} mismatches)")
        return "\n".join(lines)


def replay(gcg: Gcg, lexicon: Lexicon | None = None,
           distribution: TileDistribution = STANDARD) -> ReplayReport:
    """Replay events on an empty board, auditing scores and totals.

    Score disagreements are findings, not errors. Geometric illegality
    and (when a lexicon is given) invalid words abort with the line
    number. The final position has no racks assigned; the unseen pool is
    derived by tile conservation.
    """
    players = gcg.player_ids
    if len(players) != 2:
        raise GcgError("transcript must declare player1 and player2")
    index = {players[0]: 0, players[1]: 1}

    position = Position(board=Board(), racks=("", ""), bag=None,
                        scores=(0, 0), to_move=0)
    entries: list[AuditEntry] = []
    totals = [0, 0]
    for event in gcg.events:
        if event.kind != PLAY:
            raise GcgError(
                f"cannot replay non-play event {event.raw!r}", event.line)
        p = index[event.player]
        try:
            coord = parse_coordinate(event.coord)
            move = score_play(position.board, coord, event.word)
        except Exception as exc:
            raise GcgError(str(exc), event.line) from exc
        if lexicon is not None:
            for w in move.words_formed():
                if not lexicon.contains(w):
                    raise GcgError(f"word {w!r} not in lexicon", event.line)
        if len(event.rack) == 7:
            if not contains_tiles(event.rack.upper(), move.tiles_used):
                raise GcgError(
                    f"played tiles {move.tiles_used!r} not in declared rack "
                    f"{event.rack!r}", event.line)
        # Racks are per-move declarations, not persistent state: replay
        # with unconstrained racks and check conservation at the end.
        position = apply_play(
            Position(board=position.board, racks=(None, None),
                     scores=position.scores, to_move=p,
                     scoreless=position.scoreless),
            move)
        totals[p] += move.score
        ok = move.score == event.score and totals[p] == event.total
        entries.append(AuditEntry(
            event=event, move_str=f"{event.word} {event.coord}",
            computed_score=move.score, computed_total=totals[p],
            words=tuple(move.words_formed()), ok=ok))

    # Unseen pool: everything the board does not account for.
    remaining = dict(distribution.counts)
    for tile, n in position.board.tile_counts().items():
        remaining[tile] = remaining.get(tile, 0) - n
        if remaining[tile] < 0:
            raise GcgError(f"transcript uses more {tile!r} tiles than exist")
    unseen = "".join(sorted(t * n for t, n in remaining.items()))
    next_up = index[gcg.events[-1].player] ^ 1 if gcg.events else 0
    final = Position(board=position.board, racks=(None, None), bag=None,
                     unseen=unseen, bag_size=max(0, len(unseen) - 14),
                     scores=position.scores, to_move=next_up)
    return ReplayReport(entries=entries, position=final, players=players)
