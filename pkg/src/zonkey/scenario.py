"""Plain-text scenario formats: scripted lines and signaling-game setups.

Two small line-oriented grammars, both allowing blank lines and ``#``
comments:

``.script`` — a declarative line of play with expected checkpoints::

    name zedonks-ell
    gcg puzzle.gcg
    hero Player_2
    rack DEKNOSZ
    bag LL
    move hero ZEDONKS 15A = 124 total 468
    draw hero LL
    move opp JIVY F6 = 61 total 537
    move hero ELL N3
    final 533 537 loss

``.scenario`` — a restricted signaling game: hero types with priors,
candidate moves per observable action, observer responses, a chance
conditioning rule, and the rack-inference filters::

    name puzzle-nwl
    gcg puzzle.gcg
    hero Player_2
    observer FJLLLQW
    type M rack MKNOSYZ prior 1/2
    action 8K DITZ 8K
    label M 8K setup
    response 8K N2 JELL N2
    rlabel 8K N2 block
    condition draw_completes_bingo
    filter contains-all DM

Racks and bags are validated against tile conservation with the replayed
board, so a typo in a scenario fails loudly rather than analyzing the
wrong position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .board import Coordinate, parse_coordinate
from .errors import ScriptError
from .gcg import parse_gcg, replay
from .lexicon import Lexicon
from .moves import Move
from .position import Position
from .tiles import normalize_rack, remove_tiles

VALUE_WORDS = {"win": 1, "tie": 0, "loss": -1, "lose": -1}


@dataclass(frozen=True)
class Step:
    """One scripted action."""

    number: int
    raw: str
    kind: str  # move | draw | pass
    actor: str  # hero | opp
    word: str = ""
    coord: Coordinate | None = None
    tiles: str = ""
    expect_score: int | None = None
    expect_total: int | None = None


@dataclass
class ScenarioScript:
    """A named line of play over a base position."""

    name: str
    gcg: str = ""
    hero_id: str | None = None
    rack: str | None = None
    opponent: str | None = None
    bag: str | None = None
    steps: list[Step] = field(default_factory=list)
    expect_final: tuple[int, int] | None = None  # (hero, opponent)
    expect_value: int | None = None
    hero_index: int | None = None
    path: Path | None = None


@dataclass(frozen=True)
class StepAudit:
    step: Step
    score: int
    totals: tuple[int, int]
    ok: bool


@dataclass
class LineReport:
    """Result of :func:`zonkey.endgame.evaluate_line`."""

    script: ScenarioScript
    steps: list[StepAudit]
    hero: int
    value: object  # GameValue
    ending: str
    final_ok: bool

    @property
    def ok(self) -> bool:
        return self.final_ok and all(s.ok for s in self.steps)

    def summary(self) -> str:
        h, o = self.value.finals[self.hero], self.value.finals[1 - self.hero]
        return f"final {h}-{o} {self.value}"

    def format(self) -> str:
        lines = [f"# {self.script.name}"]
        for audit in self.steps:
            mark = "ok" if audit.ok else "MISMATCH"
            lines.append(f"  {audit.step.raw:<40} +{audit.score:<4} "
                         f"{audit.totals[0]}-{audit.totals[1]} {mark}")
        lines.append(self.summary() + ("" if self.final_ok else "  MISMATCH"))
        return "\n".join(lines)


def _tokens(path: Path):
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(),
                                 start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield lineno, line, line.split()


def load_script(path: str | Path) -> ScenarioScript:
    path = Path(path)
    script = ScenarioScript(name=path.stem, path=path)
    n = 0
    for lineno, line, toks in _tokens(path):
        key = toks[0]
        try:
            if key == "name":
                script.name = toks[1]
            elif key == "gcg":
                script.gcg = toks[1]
            elif key == "hero":
                script.hero_id = toks[1]
            elif key == "rack":
                script.rack = normalize_rack(toks[1])
            elif key == "opponent":
                script.opponent = normalize_rack(toks[1])
            elif key == "bag":
                script.bag = "" if toks[1] == "-" else normalize_rack(toks[1])
            elif key in ("move", "draw", "pass"):
                n += 1
                script.steps.append(_parse_step(n, line, key, toks))
            elif key == "final":
                script.expect_final = (int(toks[1]), int(toks[2]))
                if len(toks) > 3:
                    script.expect_value = VALUE_WORDS[toks[3].lower()]
            else:
                raise ScriptError(f"unknown directive {key!r}")
        except ScriptError:
            raise
        except Exception as exc:
            raise ScriptError(f"{path.name}:{lineno}: {exc}") from exc
    if not script.steps:
        raise ScriptError(f"{path.name}: script has no steps")
    return script


def _parse_step(number: int, raw: str, kind: str, toks: list[str]) -> Step:
    actor = toks[1]
    if actor not in ("hero", "opp"):
        raise ScriptError(f"actor must be hero|opp, got {actor!r}")
    if kind == "pass":
        return Step(number=number, raw=raw, kind=kind, actor=actor)
    if kind == "draw":
        return Step(number=number, raw=raw, kind=kind, actor=actor,
                    tiles=normalize_rack(toks[2]))
    word = toks[2]
    coord = parse_coordinate(toks[3])
    expect_score = expect_total = None
    rest = toks[4:]
    while rest:
        if rest[0] == "=":
            expect_score = int(rest[1])
            rest = rest[2:]
        elif rest[0] == "total":
            expect_total = int(rest[1])
            rest = rest[2:]
        else:
            raise ScriptError(f"unexpected token {rest[0]!r}")
    return Step(number=number, raw=raw, kind="move", actor=actor, word=word,
                coord=coord, expect_score=expect_score,
                expect_total=expect_total)


def build_position(script: ScenarioScript, lexicon: Lexicon | None = None,
                   base_dir: Path | None = None) -> Position:
    """Replay the base transcript and install the scripted racks and bag."""
    base = base_dir or (script.path.parent if script.path else Path("."))
    gcg_path = base / script.gcg
    report = replay(parse_gcg(gcg_path.read_text(encoding="utf-8")), lexicon)
    pos = report.position
    players = report.players
    hero = (players.index(script.hero_id) if script.hero_id
            else pos.to_move)
    script.hero_index = hero

    if script.rack is None:
        raise ScriptError(f"{script.name}: no hero rack given")
    pool = remove_tiles(pos.unseen, script.rack)
    opponent = script.opponent
    bag = script.bag
    if opponent is None and bag is not None:
        opponent = remove_tiles(pool, bag)
    if bag is None and opponent is not None:
        bag = remove_tiles(pool, opponent)
    if opponent is None or bag is None:
        raise ScriptError(f"{script.name}: need opponent rack or bag contents")
    if "".join(sorted(opponent + bag)) != pool:
        raise ScriptError(
            f"{script.name}: rack/bag/opponent do not add up to the pool "
            f"{pool!r}")
    racks = [None, None]
    racks[hero] = script.rack
    racks[1 - hero] = opponent
    return Position(board=pos.board, racks=(racks[0], racks[1]),
                    bag=bag, scores=pos.scores, to_move=pos.to_move)


# ---------------------------------------------------------------------------
# Signaling-game scenarios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TypeSpec:
    name: str
    rack: str
    prior: Fraction


@dataclass(frozen=True)
class CandidateMove:
    """A named candidate play (hero action or observer response)."""

    id: str
    word: str
    coord: Coordinate


@dataclass
class ScenarioSpec:
    """Declarative restricted signaling game."""

    name: str
    gcg: str = ""
    hero_id: str | None = None
    observer: str | None = None
    types: list[TypeSpec] = field(default_factory=list)
    actions: list[CandidateMove] = field(default_factory=list)
    action_types: dict[str, tuple[str, ...]] = field(default_factory=dict)
    labels: dict[tuple[str, str], str] = field(default_factory=dict)
    responses: dict[str, list[CandidateMove]] = field(default_factory=dict)
    rlabels: dict[tuple[str, str], str] = field(default_factory=dict)
    condition: str = "none"
    filters: list[tuple[str, str]] = field(default_factory=list)
    path: Path | None = None

    def action_ids(self) -> list[str]:
        return [a.id for a in self.actions]

    def action(self, action_id: str) -> CandidateMove:
        for a in self.actions:
            if a.id == action_id:
                return a
        raise ScriptError(f"unknown action {action_id!r}")


def load_scenario(path: str | Path) -> ScenarioSpec:
    path = Path(path)
    spec = ScenarioSpec(name=path.stem, path=path)
    for lineno, line, toks in _tokens(path):
        key = toks[0]
        try:
            if key == "name":
                spec.name = toks[1]
            elif key == "gcg":
                spec.gcg = toks[1]
            elif key == "hero":
                spec.hero_id = toks[1]
            elif key == "observer":
                spec.observer = normalize_rack(toks[1])
            elif key == "type":
                if toks[2] != "rack" or toks[4] != "prior":
                    raise ScriptError("expected: type NAME rack TILES prior P/Q")
                spec.types.append(TypeSpec(
                    name=toks[1], rack=normalize_rack(toks[3]),
                    prior=Fraction(toks[5])))
            elif key == "action":
                spec.actions.append(CandidateMove(
                    id=toks[1], word=toks[2], coord=parse_coordinate(toks[3])))
                if len(toks) > 4 and toks[4].startswith("types="):
                    spec.action_types[toks[1]] = tuple(
                        toks[4].split("=", 1)[1].split(","))
            elif key == "label":
                spec.labels[(toks[1], toks[2])] = toks[3]
            elif key == "response":
                spec.responses.setdefault(toks[1], []).append(CandidateMove(
                    id=toks[2], word=toks[3], coord=parse_coordinate(toks[4])))
            elif key == "rlabel":
                spec.rlabels[(toks[1], toks[2])] = toks[3]
            elif key == "condition":
                spec.condition = toks[1]
            elif key == "filter":
                spec.filters.append((toks[1], toks[2] if len(toks) > 2 else ""))
            else:
                raise ScriptError(f"unknown directive {key!r}")
        except ScriptError:
            raise
        except Exception as exc:
            raise ScriptError(f"{path.name}:{lineno}: {exc}") from exc
    if not spec.types or not spec.actions:
        raise ScriptError(f"{path.name}: scenario needs types and actions")
    if sum(t.prior for t in spec.types) != 1:
        raise ScriptError(f"{path.name}: type priors must sum to 1")
    return spec
