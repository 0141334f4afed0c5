"""Exact perfect-information endgame solving and scripted-line audits.

With the bag empty and both racks visible the game is finite (six
consecutive scoreless turns end it) and zero-sum over {win, tie, loss},
so a negamax over the +1/0/-1 outcome solves it exactly. The searcher
uses a transposition table and a win cutoff; because game values live in
{-1, 0, +1}, bounded results are rounded to exact ones via standard
alpha-beta bound flags. Tie-breaking for the reported line never affects
the value: among equally valued moves the generator's deterministic
order decides.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import ScriptError, ZonkeyError
from .lexicon import Lexicon
from .moves import Move, pass_move, score_play
from .movegen import MoveCache, _placements
from .position import (EXHAUSTED, OUT, SCORELESS_LIMIT, GameValue, Position,
                       apply_play, draw_tiles, finalize_game, is_terminal)
from .tiles import rack_value

_INF = 10 ** 9


@dataclass(frozen=True)
class EndgameResult:
    """Solved value for the hero plus one optimal line of play."""

    value: int
    hero: int
    pv: tuple[Move, ...]
    finals: tuple[int, int]
    ending: str
    nodes: int

    def game_value(self) -> GameValue:
        return GameValue(value=self.value, finals=self.finals)


class _Solver:
    """Negamax with a threshold transposition table.

    For a fixed (board, racks, turn, scoreless counter), the game value
    is a nondecreasing step function of the mover's score lead ``diff``
    (bigger leads never hurt: move availability does not depend on the
    score). The table therefore stores, per state, interval bounds on
    the two step thresholds - the smallest lead that secures a tie and
    the smallest that secures a win - so one expansion answers queries
    at every lead, which collapses transpositions that differ only in
    the running score.
    """

    def __init__(self, lexicon: Lexicon, cache: MoveCache | None = None):
        self.lexicon = lexicon
        self.cache = cache or MoveCache(lexicon)
        # (cells, racks, to_move, scoreless) ->
        #   [notlose_lb, notlose_ub, win_lb, win_ub]
        self.table: dict = {}
        # (cells, rack, other, scoreless) -> [lb, ub] bounds on the
        # smallest lead at which the solitaire relaxation reaches >= 0.
        self.probe_table: dict = {}
        self.nodes = 0

    def placements(self, board, rack: str) -> list[Move]:
        return _placements(board, rack, self.lexicon, self.cache)

    def probe_lost(self, board, rack: str, other: str, scoreless: int,
                   diff: int) -> bool:
        """True iff the mover loses even against an always-passing
        opponent (a pure solitaire relaxation).

        Restricting one player can only help the other, so a loss here
        certifies a loss of the real game; anything else is
        inconclusive. This turns hopeless subtrees from adversarial
        search into single-player search over the mover's lines. With a
        frozen opponent, interleaving passes between scoring plays
        changes nothing but the scoreless counter, so only play-only
        lines plus the pure pass-out need examining; callers must not
        probe racks with blanks (whose zero-score plays would break that
        argument).
        """
        key = (board.cells, rack, other, scoreless)
        entry = self.probe_table.get(key)
        if entry is None:
            entry = [-_INF, _INF]
            self.probe_table[key] = entry
        else:
            if diff < entry[0]:
                return True
            if diff >= entry[1]:
                return False
        other_value = rack_value(other)
        placements = self.placements(board, rack)
        size = len(rack)
        lost = True
        # Pure pass-out: both players idle until exhaustion.
        if diff - rack_value(rack) + other_value >= 0:
            lost = False
        if lost:
            for move in placements:
                new_diff = diff + move.score
                new_rack = _remove(rack, move.tiles_used)
                if len(move.placed) == size:  # out-play
                    if new_diff + 2 * other_value >= 0:
                        lost = False
                        break
                    continue
                streak = 0 if move.score > 0 else scoreless + 1
                if streak >= SCORELESS_LIMIT or streak + 1 >= SCORELESS_LIMIT:
                    if new_diff - rack_value(new_rack) + other_value >= 0:
                        lost = False
                        break
                    continue
                new_board = board.place(dict(move.placed))
                if not self.probe_lost(new_board, new_rack, other, streak + 1,
                                       new_diff):
                    lost = False
                    break
        if lost:
            entry[0] = max(entry[0], diff + 1)
        else:
            entry[1] = min(entry[1], diff)
        return lost

    def search(self, board, racks, to_move: int, scoreless: int,
               diff: int, alpha: int, beta: int) -> int:
        """Value in {-1,0,+1} for the player on turn; ``diff`` is that
        player's score lead."""
        self.nodes += 1
        key = (board.cells, racks, to_move, scoreless)
        entry = self.table.get(key)
        if entry is None:
            entry = [-_INF, _INF, -_INF, _INF]
            self.table[key] = entry
        else:
            nl_lb, nl_ub, win_lb, win_ub = entry
            if diff >= win_ub:
                return 1
            if diff < nl_lb:
                return -1
            if nl_ub <= diff < win_lb:
                return 0
            lo = 0 if diff >= nl_ub else -1
            hi = 0 if diff < win_lb else 1
            if lo >= beta:
                return lo
            if hi <= alpha:
                return hi
            if lo > alpha:
                alpha = lo
            if hi < beta:
                beta = hi

        alpha0, beta0 = alpha, beta
        rack = racks[to_move]
        other = racks[1 - to_move]
        # Futility gate: a trailing mover who loses even against a
        # passing opponent has lost the real game. (Skipped for racks
        # with blanks: zero-score plays would upset the pass analysis.)
        if diff < 0 and "?" not in rack and self.probe_lost(
                board, rack, other, scoreless, diff):
            entry[0] = max(entry[0], diff + 1)
            if entry[2] < entry[0]:
                entry[2] = entry[0]
            return -1
        placements = self.placements(board, rack)
        if not placements and not self.placements(board, other):
            # Neither side can ever place again: pure pass-out.
            nl = rack_value(rack) - rack_value(other)
            entry[0] = entry[1] = nl
            entry[2] = entry[3] = nl + 1
            d = diff - nl
            return (d > 0) - (d < 0)

        # Out-plays end the game at once: trying them first finds wins
        # cheaply. Exploration order never affects the value.
        best = -2
        size = len(rack)
        outs = [m for m in placements if len(m.placed) == size]
        rest = [m for m in placements if len(m.placed) != size]
        children = outs + rest + [pass_move()]
        for move in children:
            if move.is_pass:
                if scoreless + 1 >= SCORELESS_LIMIT:
                    d = diff - rack_value(rack) + rack_value(other)
                    value = (d > 0) - (d < 0)
                else:
                    value = -self.search(board, racks, 1 - to_move,
                                         scoreless + 1, -diff, -beta, -alpha)
            else:
                new_rack = _remove(rack, move.tiles_used)
                new_board = board.place(dict(move.placed))
                new_diff = diff + move.score
                if new_rack == "":
                    d = new_diff + 2 * rack_value(other)
                    value = (d > 0) - (d < 0)
                elif (scoreless + 1 if move.score == 0 else 0) >= SCORELESS_LIMIT:
                    d = new_diff - rack_value(new_rack) + rack_value(other)
                    value = (d > 0) - (d < 0)
                else:
                    new_racks = ((new_rack, other) if to_move == 0
                                 else (other, new_rack))
                    new_scoreless = 0 if move.score > 0 else scoreless + 1
                    value = -self.search(new_board, new_racks, 1 - to_move,
                                         new_scoreless, -new_diff,
                                         -beta, -alpha)
            if value > best:
                best = value
            if best > alpha:
                alpha = best
            if alpha >= beta or best == 1:
                break

        # Refine the threshold intervals from this (possibly bounded) result.
        if best > alpha0:  # lower bound is real (exact if also < beta0)
            if best >= 1:
                entry[3] = min(entry[3], diff)
            elif best >= 0:
                entry[1] = min(entry[1], diff)
        if best < beta0:  # upper bound is real
            if best <= -1:
                entry[0] = max(entry[0], diff + 1)
            elif best <= 0:
                entry[2] = max(entry[2], diff + 1)
        if entry[2] < entry[0]:
            entry[2] = entry[0]
        if entry[1] > entry[3]:
            entry[1] = entry[3]
        return best


def _remove(rack: str, tiles: str) -> str:
    out = list(rack)
    for t in tiles:
        out.remove(t)
    return "".join(out)


def _require_endgame(position: Position) -> None:
    if position.racks[0] is None or position.racks[1] is None:
        raise ZonkeyError("endgame solving needs both racks visible")
    if position.bag is None or len(position.bag) != 0:
        raise ZonkeyError("endgame solving needs an empty bag")


def _root_moves(position: Position, lexicon: Lexicon) -> list[Move]:
    return _placements(position.board, position.rack_to_move,
                       lexicon) + [pass_move()]


def _child_value(position: Position, lexicon: Lexicon, move: Move) -> int:
    """Value of ``move`` from the mover's perspective."""
    solver = _Solver(lexicon)
    return _value_of_move(solver, position, move)


def _value_of_move(solver: _Solver, position: Position, move: Move) -> int:
    mover = position.to_move
    after = apply_play(position, move)
    ending = is_terminal(after)
    if ending is not None:
        gv = finalize_game(after, ending, hero=mover)
        return gv.value
    racks = (after.racks[0], after.racks[1])
    diff = after.scores[after.to_move] - after.scores[1 - after.to_move]
    return -solver.search(after.board, racks, after.to_move, after.scoreless,
                          diff, -1, 1)


def solve_endgame(position: Position, lexicon: Lexicon, hero: int | None = None,
                  workers: int = 1, cache: MoveCache | None = None
                  ) -> EndgameResult:
    """Solve a perfect-information endgame exactly.

    The value is reported for ``hero`` (default: the player on turn) and
    is independent of ``workers``; root moves may be evaluated in
    parallel but the combination rule is order-deterministic. A shared
    ``cache`` speeds up batches of related solves.
    """
    _require_endgame(position)
    if hero is None:
        hero = position.to_move
    if position.rack_to_move == "":
        raise ZonkeyError("player on turn has no tiles; game is over")

    moves = _root_moves(position, lexicon)
    solver = _Solver(lexicon, cache=cache)
    if workers > 1 and len(moves) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_child_value,
                                   [position] * len(moves),
                                   [lexicon] * len(moves), moves,
                                   chunksize=max(1, len(moves) // workers)))
        best = max(values)
        nodes = 0
    else:
        best = -2
        values = []
        for move in moves:
            v = _value_of_move(solver, position, move)
            values.append(v)
            if v > best:
                best = v
            if best == 1:
                break
        nodes = solver.nodes

    pv, finals, ending = _principal_variation(solver, position, moves, values,
                                              best)
    value = best if hero == position.to_move else -best
    return EndgameResult(value=value, hero=hero, pv=pv, finals=finals,
                         ending=ending, nodes=nodes)


def _principal_variation(solver: _Solver, position: Position,
                         root_moves: list[Move], root_values: list[int],
                         root_value: int):
    """Walk the optimal line: at each node, the first move in generator
    order achieving the node value."""
    pv: list[Move] = []
    pos = position
    # Root step uses the already computed child values.
    move = next(m for m, v in zip(root_moves, root_values) if v == root_value)
    while True:
        pv.append(move)
        pos = apply_play(pos, move)
        ending = is_terminal(pos)
        if ending is not None:
            gv = finalize_game(pos, ending, hero=0)
            return tuple(pv), gv.finals, ending
        moves = solver.placements(pos.board, pos.rack_to_move) + [pass_move()]
        best = -2
        chosen = None
        for m in moves:
            v = _value_of_move(solver, pos, m)
            if v > best:
                best = v
                chosen = m
            if best == 1:
                break
        move = chosen


def apply_script_steps(position: Position, script, lexicon: Lexicon):
    """Apply a script's steps, auditing each one.

    Returns (position, audits, ending) where ending is None when the
    scripted sequence stops short of the game's end. Illegal steps raise
    ScriptError naming the step; failed score expectations are recorded
    as mismatches, not errors.
    """
    from .scenario import StepAudit  # local: avoid import cycle

    pos = position
    hero = script.hero_index if script.hero_index is not None else pos.to_move
    audits: list = []
    ending = None
    for step in script.steps:
        actor = hero if step.actor == "hero" else 1 - hero
        label = f"step {step.number} ({step.raw})"
        if step.kind == "draw":
            try:
                pos = draw_tiles(pos, step.tiles, player=actor)
            except ZonkeyError as exc:
                raise ScriptError(f"{label}: {exc}") from exc
            audits.append(StepAudit(step=step, score=0,
                                    totals=pos.scores, ok=True))
            continue
        if pos.to_move != actor:
            raise ScriptError(f"{label}: it is not that player's turn")
        if step.kind == "pass":
            pos = apply_play(pos, pass_move())
            audits.append(StepAudit(step=step, score=0, totals=pos.scores,
                                    ok=True))
        else:
            try:
                move = score_play(pos.board, step.coord, step.word)
            except ZonkeyError as exc:
                raise ScriptError(f"{label}: {exc}") from exc
            bad = [w for w in move.words_formed() if not lexicon.contains(w)]
            if bad:
                raise ScriptError(f"{label}: invalid words {bad}")
            try:
                pos = apply_play(pos, move)
            except ZonkeyError as exc:
                raise ScriptError(f"{label}: {exc}") from exc
            ok = ((step.expect_score is None
                   or move.score == step.expect_score)
                  and (step.expect_total is None
                       or pos.scores[actor] == step.expect_total))
            audits.append(StepAudit(step=step, score=move.score,
                                    totals=pos.scores, ok=ok))
        ending = is_terminal(pos)
        if ending is not None:
            break
    return pos, audits, ending


def evaluate_line(position: Position, script, lexicon: Lexicon):
    """Play out a scripted line to the end of the game.

    Returns a :class:`LineReport` with per-step audits, the final score
    pair and the hero's win/tie/loss value.
    """
    from .scenario import LineReport  # local: avoid import cycle

    hero = (script.hero_index if script.hero_index is not None
            else position.to_move)
    pos, audits, ending = apply_script_steps(position, script, lexicon)
    if ending is None:
        raise ScriptError("script ends before the game does")
    gv = finalize_game(pos, ending, hero=hero)
    final_ok = True
    if script.expect_final is not None:
        final_ok = (gv.finals[hero], gv.finals[1 - hero]) == script.expect_final
    if script.expect_value is not None:
        final_ok = final_ok and gv.value == script.expect_value
    return LineReport(script=script, steps=audits, hero=hero,
                      value=gv, ending=ending, final_ok=final_ok)
