"""Pre-endgame analysis: chance model, rack inference, restricted games.

The pipeline mirrors how a strong player reasons one or two tiles from
the end of the bag: enumerate how the unseen tiles split between the
opponent's rack and the bag, infer which racks the opponent must assign
positive probability after seeing a play, and then solve the restricted
signaling game whose payoffs come from exact endgame solves rather than
hand-built tables.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path

from .endgame import solve_endgame
from .errors import ScriptError, ZonkeyError
from .gcg import parse_gcg, replay
from .gametheory import (Equilibrium, SignalingGame, best_response_value,
                         check_signaling_equilibrium, expected_payoff,
                         solve_signaling)
from .lexicon import Lexicon, bingos_from
from .movegen import MoveCache
from .moves import Move, score_play
from .position import Position, apply_play, draw_tiles
from .scenario import CandidateMove, ScenarioSpec, TypeSpec
from .tiles import contains_tiles, normalize_rack, remove_tiles


@dataclass(frozen=True)
class UnseenModel:
    """Unseen tiles split between an opponent rack and the bag."""

    pool: str
    bag_size: int
    rack_size: int

    def __post_init__(self):
        if self.bag_size + self.rack_size != len(self.pool):
            raise ZonkeyError("bag + rack sizes must cover the pool")
        if self.bag_size < 0 or self.rack_size < 0:
            raise ZonkeyError("negative sizes")


@dataclass(frozen=True)
class RackHypothesis:
    rack: str
    weight: Fraction


def _multiset_choices(pool: str, k: int) -> list[tuple[str, int]]:
    """Distinct k-sub-multisets of ``pool`` with their labeled counts."""
    seen: dict[str, int] = {}
    for combo in combinations(sorted(pool), k):
        key = "".join(combo)
        if key not in seen:
            pc = Counter(pool)
            cc = Counter(key)
            ways = 1
            for t, n in cc.items():
                ways *= comb(pc[t], n)
            seen[key] = ways
    return sorted(seen.items())


def enumerate_splits(model: UnseenModel) -> list[tuple[str, str, Fraction]]:
    """All (opponent rack, bag, probability) splits, uniform over labeled
    tiles. Probabilities are exact and sum to 1."""
    total = comb(len(model.pool), model.bag_size)
    out = []
    for bag, ways in _multiset_choices(model.pool, model.bag_size):
        rack = remove_tiles(model.pool, bag)
        out.append((rack, bag, Fraction(ways, total)))
    return out


def draw_distribution(bag: str, k: int) -> list[tuple[str, Fraction]]:
    """Distribution of a uniform k-tile draw from the bag."""
    if k > len(bag):
        raise ZonkeyError(f"cannot draw {k} from a bag of {len(bag)}")
    total = comb(len(bag), k)
    return [(draw, Fraction(ways, total))
            for draw, ways in _multiset_choices(bag, k)]


# ---------------------------------------------------------------------------
# Rack inference
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RackFilter:
    """A named, explicit inference rule over candidate racks."""

    name: str
    arg: str
    note: str

    def keep(self, rack: str) -> bool:
        if self.name == "contains-all":
            return not contains_tiles(rack, self.arg)
        if self.name == "exact-rack":
            return rack != self.arg
        raise ZonkeyError(f"unknown filter {self.name!r}")


FILTER_NOTES = {
    "contains-all": "drop racks holding all of the given letters",
    "exact-rack": "drop one specific rack",
}


def make_filter(name: str, arg: str) -> RackFilter:
    if name not in FILTER_NOTES:
        raise ZonkeyError(f"unknown filter {name!r}")
    arg = normalize_rack(arg)
    return RackFilter(name=name, arg=arg, note=FILTER_NOTES[name])


def hero_rack_hypotheses(model: UnseenModel, played: str,
                         filters: list[RackFilter] = ()
                         ) -> list[RackHypothesis]:
    """Racks the mover could have held when playing ``played`` tiles.

    Candidates are ``played`` plus enough tiles from the rest of the
    pool to fill a rack, weighted uniformly over labeled tiles (all
    available tiles equally likely), then filtered and renormalized.
    """
    played = normalize_rack(played)
    rest = remove_tiles(model.pool, played)
    need = model.rack_size - len(played)
    if need < 0:
        raise ZonkeyError("played more tiles than a rack holds")
    raw = []
    for extra, ways in _multiset_choices(rest, need):
        rack = "".join(sorted(played + extra))
        raw.append((rack, ways))
    kept = [(rack, ways) for rack, ways in raw
            if all(f.keep(rack) for f in filters)]
    if not kept:
        raise ZonkeyError("every candidate rack was filtered out")
    total = sum(w for _, w in kept)
    return [RackHypothesis(rack=rack, weight=Fraction(w, total))
            for rack, w in kept]


# ---------------------------------------------------------------------------
# Restricted signaling games
# ---------------------------------------------------------------------------

CONDITIONS = {
    "none": "no conditioning: average over all draws",
    "draw_completes_bingo":
        "keep draws after which the rack spells a seven-letter word",
}


def _condition_keep(name: str, lexicon: Lexicon, rack_after: str) -> bool:
    if name == "none":
        return True
    if name == "draw_completes_bingo":
        return (len(rack_after) == 7
                and bool(bingos_from(lexicon, rack_after)))
    raise ZonkeyError(f"unknown conditioning rule {name!r}")


@dataclass
class RestrictedGameSpec:
    """A ScenarioSpec resolved against a base position and lexicon."""

    name: str
    base: Position
    hero: int
    observer_rack: str
    types: list[TypeSpec]
    actions: list[CandidateMove]
    action_types: dict[str, tuple[str, ...]]
    labels: dict[tuple[str, str], str]
    responses: dict[str, list[CandidateMove]]
    rlabels: dict[tuple[str, str], str]
    condition: str
    filters: list[RackFilter]
    lexicon: Lexicon

    @classmethod
    def from_scenario(cls, spec: ScenarioSpec, lexicon: Lexicon,
                      base_dir: Path | None = None) -> "RestrictedGameSpec":
        base_dir = base_dir or (spec.path.parent if spec.path else Path("."))
        report = replay(parse_gcg((base_dir / spec.gcg).read_text()), lexicon)
        pos = report.position
        hero = (report.players.index(spec.hero_id) if spec.hero_id
                else pos.to_move)
        if spec.observer is None:
            raise ScriptError(f"{spec.name}: observer rack required")
        return cls(name=spec.name, base=pos, hero=hero,
                   observer_rack=spec.observer, types=list(spec.types),
                   actions=list(spec.actions), action_types=dict(spec.action_types),
                   labels=dict(spec.labels), responses=dict(spec.responses),
                   rlabels=dict(spec.rlabels), condition=spec.condition,
                   filters=[make_filter(n, a) for n, a in spec.filters],
                   lexicon=lexicon)

    def actions_for(self, type_name: str) -> list[CandidateMove]:
        out = []
        for a in self.actions:
            allowed = self.action_types.get(a.id)
            if allowed is None or type_name in allowed:
                out.append(a)
        return out

    def type_position(self, t: TypeSpec) -> Position:
        """Full-information start for one hero type."""
        pos = self.base
        if pos.unseen is None:
            raise ZonkeyError("base position must carry an unseen pool")
        racks = [None, None]
        racks[self.hero] = t.rack
        racks[1 - self.hero] = self.observer_rack
        bag = remove_tiles(remove_tiles(pos.unseen, t.rack),
                           self.observer_rack)
        return Position(board=pos.board, racks=(racks[0], racks[1]), bag=bag,
                        scores=pos.scores, to_move=self.hero)


@dataclass(frozen=True)
class DrawOutcome:
    draw: str
    weight: Fraction
    value: int
    finals: tuple[int, int]  # (hero, observer)
    line: tuple[str, ...]


@dataclass(frozen=True)
class EntryProvenance:
    """Where one payoff number came from: engine solves per kept draw."""

    type: str
    action: str
    response: str
    outcomes: tuple[DrawOutcome, ...]
    payoff: Fraction


def _legal_move(position: Position, cand: CandidateMove,
                lexicon: Lexicon) -> Move:
    """Resolve a candidate move and insist it is fully legal."""
    move = score_play(position.board, cand.coord, cand.word)
    bad = [w for w in move.words_formed() if not lexicon.contains(w)]
    if bad:
        raise ScriptError(f"move {cand.word} {cand.coord}: invalid words {bad}")
    rack = position.rack_to_move
    if rack is not None and not contains_tiles(rack, move.tiles_used):
        raise ScriptError(f"move {cand.word} {cand.coord}: tiles not on rack "
                          f"{rack}")
    return move


def _entry(rspec: RestrictedGameSpec, type_name: str, action_id: str,
           response_id: str, cache=None) -> EntryProvenance:
    t = next(x for x in rspec.types if x.name == type_name)
    action = next(a for a in rspec.actions if a.id == action_id)
    response = next(r for r in rspec.responses[action_id]
                    if r.id == response_id)
    lexicon = rspec.lexicon
    hero = rspec.hero

    pos0 = rspec.type_position(t)
    move_a = _legal_move(pos0, action, lexicon)
    pos1 = apply_play(pos0, move_a)

    k = min(len(move_a.tiles_used), len(pos1.bag))
    draws = draw_distribution(pos1.bag, k)
    kept = []
    for draw, p in draws:
        rack_after = "".join(sorted(pos1.racks[hero] + draw))
        if _condition_keep(rspec.condition, lexicon, rack_after):
            kept.append((draw, p))
    if not kept:
        raise ScriptError(
            f"{rspec.name}: conditioning {rspec.condition!r} removes every "
            f"draw for type {type_name} after {action.word}")
    total = sum(p for _, p in kept)

    outcomes = []
    payoff = Fraction(0)
    for draw, p in kept:
        weight = p / total
        pos2 = draw_tiles(pos1, draw, player=hero)
        move_r = _legal_move(pos2, response, lexicon)
        pos3 = apply_play(pos2, move_r)
        k2 = min(len(move_r.tiles_used), len(pos3.bag))
        if k2:
            pos4 = draw_tiles(pos3, pos3.bag[:k2], player=1 - hero)
        else:
            pos4 = pos3
        result = solve_endgame(pos4, lexicon, hero=hero, cache=cache)
        finals = (result.finals[hero], result.finals[1 - hero])
        line = tuple(str(m) for m in result.pv)
        outcomes.append(DrawOutcome(draw=draw, weight=weight,
                                    value=result.value, finals=finals,
                                    line=line))
        payoff += weight * result.value
    return EntryProvenance(type=type_name, action=action_id,
                           response=response_id, outcomes=tuple(outcomes),
                           payoff=payoff)


def _entry_group(args):
    rspec, keys = args
    cache = MoveCache(rspec.lexicon)
    return [_entry(rspec, *key, cache=cache) for key in keys]


def build_signaling_game(rspec: RestrictedGameSpec, workers: int = 1
                         ) -> tuple[SignalingGame, dict]:
    """Evaluate every (type, action, response) cell with the endgame
    solver and assemble the exact signaling game plus a provenance table
    recording the final scores behind every number.

    Cells are independent solves; with ``workers`` > 1 they are split
    round-robin over processes and reassembled in order, so the result
    is bit-identical for any worker count.
    """
    keys = []
    for t in rspec.types:
        for a in rspec.actions_for(t.name):
            for r in rspec.responses[a.id]:
                keys.append((t.name, a.id, r.id))
    if workers > 1:
        groups = [keys[i::workers] for i in range(workers)]
        groups = [g for g in groups if g]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_entry_group,
                                    [(rspec, g) for g in groups]))
        by_key = {}
        for group, out in zip(groups, results):
            for key, e in zip(group, out):
                by_key[key] = e
        entries = [by_key[key] for key in keys]
    else:
        cache = MoveCache(rspec.lexicon)
        entries = [_entry(rspec, *key, cache=cache) for key in keys]

    payoff = {}
    provenance = {}
    for e in entries:
        payoff[(e.type, e.action, e.response)] = e.payoff
        provenance[(e.type, e.action, e.response)] = e
    sg = SignalingGame(
        types=tuple(t.name for t in rspec.types),
        priors={t.name: t.prior for t in rspec.types},
        actions={t.name: tuple(a.id for a in rspec.actions_for(t.name))
                 for t in rspec.types},
        responses={a.id: tuple(r.id for r in rspec.responses[a.id])
                   for a in rspec.actions},
        payoff=payoff)
    return sg, provenance


# ---------------------------------------------------------------------------
# The full report
# ---------------------------------------------------------------------------

@dataclass
class PuzzleReport:
    """Everything the analysis produces, with provenance."""

    name: str
    hypotheses_before: list[RackHypothesis]
    hypotheses_after: list[RackHypothesis]
    filters: list[RackFilter]
    game: SignalingGame
    provenance: dict
    equilibrium: Equilibrium
    labels: dict[tuple[str, str], str]
    rlabels: dict[tuple[str, str], str]
    outcomes: dict[str, list[tuple[str, str, Fraction, int, tuple[int, int]]]]
    deviations: list[tuple[str, str, Fraction]]
    naive_pair: tuple[bool, Fraction, Fraction, Fraction]
    chance: dict[str, dict[str, Fraction]]

    # -- presentation ---------------------------------------------------

    def hero_summary(self) -> dict[str, dict[str, Fraction]]:
        """Per-type strategy keyed by semantic label (bluff/setup)."""
        out: dict[str, dict[str, Fraction]] = {}
        for t, probs in self.equilibrium.hero.items():
            out[t] = {self.labels.get((t, a), a): p for a, p in probs.items()}
        return out

    def observer_summary(self) -> dict[str, dict[str, Fraction]]:
        out: dict[str, dict[str, Fraction]] = {}
        for a, probs in self.equilibrium.observer.items():
            out[a] = {self.rlabels.get((a, r), r): p for r, p in probs.items()}
        return out

    def outcome_distribution(self) -> dict[str, Fraction]:
        """Aggregate win/tie/loss probabilities (identical per type when
        the puzzle is symmetric)."""
        agg = {"win": Fraction(0), "tie": Fraction(0), "loss": Fraction(0)}
        for t, rows in self.outcomes.items():
            for _, _, p, value, _ in rows:
                key = {1: "win", 0: "tie", -1: "loss"}[value]
                agg[key] += self.game.priors[t] * p
        return agg

    def to_json(self) -> dict:
        frac = str
        eq = self.equilibrium
        return {
            "scenario": self.name,
            "value": frac(eq.value),
            "hero_strategy": {
                t: {a: frac(p) for a, p in sorted(probs.items())}
                for t, probs in sorted(eq.hero.items())},
            "hero_strategy_labeled": {
                t: {lab: frac(p) for lab, p in sorted(probs.items())}
                for t, probs in sorted(self.hero_summary().items())},
            "observer_strategy": {
                a: {r: frac(p) for r, p in sorted(probs.items())}
                for a, probs in sorted(eq.observer.items())},
            "observer_strategy_labeled": {
                a: {lab: frac(p) for lab, p in sorted(probs.items())}
                for a, probs in sorted(self.observer_summary().items())},
            "posteriors": {
                a: {t: frac(p) for t, p in sorted(probs.items())}
                for a, probs in sorted(eq.posteriors.items())},
            "payoffs": {
                f"{t}/{a}/{r}": {
                    "payoff": frac(e.payoff),
                    "outcomes": [
                        {"draw": o.draw, "weight": frac(o.weight),
                         "value": o.value,
                         "final": list(o.finals),
                         "line": list(o.line)}
                        for o in e.outcomes],
                }
                for (t, a, r), e in sorted(self.provenance.items())},
            "outcomes": {
                t: [{"action": a, "response": r, "probability": frac(p),
                     "value": v, "final": list(f)}
                    for a, r, p, v, f in rows]
                for t, rows in sorted(self.outcomes.items())},
            "outcome_distribution": {
                k: frac(v) for k, v in self.outcome_distribution().items()},
            "deviations": [
                {"side": side, "strategy": name, "value": frac(v)}
                for side, name, v in self.deviations],
            "naive_pair": {
                "equilibrium": self.naive_pair[0],
                "payoff": frac(self.naive_pair[1]),
                "hero_best_response": frac(self.naive_pair[2]),
                "observer_best_response": frac(self.naive_pair[3])},
            "hypotheses": {
                "before": len(self.hypotheses_before),
                "after": len(self.hypotheses_after),
                "racks": [h.rack for h in self.hypotheses_after],
                "filters": [{"name": f.name, "arg": f.arg, "note": f.note}
                            for f in self.filters]},
            "chance": {t: {k: frac(v) for k, v in d.items()}
                       for t, d in sorted(self.chance.items())},
        }

    def summary_lines(self) -> list[str]:
        eq = self.equilibrium
        lines = [f"scenario: {self.name}", f"value: {eq.value}"]
        for t in self.game.types:
            parts = ", ".join(
                f"{self.labels.get((t, a), a)} {p}"
                for a, p in sorted(eq.hero[t].items(),
                                   key=lambda kv: (-kv[1], kv[0])))
            lines.append(f"hero {t}: {parts}")
        for a in self.game.observable_actions():
            parts = ", ".join(
                f"{self.rlabels.get((a, r), r)} {p}"
                for r, p in sorted(eq.observer[a].items(),
                                   key=lambda kv: (-kv[1], kv[0])))
            lines.append(f"opponent after {a}: {parts}")
        dist = self.outcome_distribution()
        lines.append("outcomes: " + ", ".join(
            f"{k} {v}" for k, v in sorted(dist.items())))
        for side, name, v in self.deviations:
            lines.append(f"deviation [{side}] {name}: {v}")
        ok = "fails" if not self.naive_pair[0] else "holds"
        lines.append(f"naive pair (always-bluff vs always-block): "
                     f"certificate {ok}")
        return lines


def _pure_hero(sg: SignalingGame, pick: dict[str, str]):
    return {t: {a: Fraction(1 if a == pick[t] else 0) for a in sg.actions[t]}
            for t in sg.types}


def _pure_observer(sg: SignalingGame, pick: dict[str, str]):
    return {a: {r: Fraction(1 if r == pick[a] else 0)
                for r in sg.responses[a]}
            for a in sg.observable_actions()}


def _labeled_pick(labels: dict[tuple[str, str], str], keys, wanted: str,
                  domain: str) -> dict[str, str]:
    pick = {}
    for k in keys:
        for (owner, item), lab in labels.items():
            if owner == k and lab == wanted:
                pick[k] = item
    missing = [k for k in keys if k not in pick]
    if missing:
        raise ZonkeyError(f"no {wanted!r} label for {domain} {missing}")
    return pick


def analyze_puzzle(rspec: RestrictedGameSpec, workers: int = 1,
                   position: Position | None = None) -> PuzzleReport:
    """Full pre-endgame report: inference, equilibrium, deviations.

    ``position`` overrides the base position resolved from the scenario
    (it must carry the same unseen pool).
    """
    if position is not None:
        rspec.base = position
    base = rspec.base
    if base.unseen is None:
        raise ZonkeyError("base position must have an unseen pool")

    # Rack inference, from the observer's seat.
    pool = remove_tiles(base.unseen, rspec.observer_rack)
    first_action = rspec.actions[0]
    sample = score_play(base.board, first_action.coord, first_action.word)
    model = UnseenModel(pool=pool, bag_size=len(pool) - 7, rack_size=7)
    before = hero_rack_hypotheses(model, sample.tiles_used, [])
    after = hero_rack_hypotheses(model, sample.tiles_used, rspec.filters)

    sg, provenance = build_signaling_game(rspec, workers=workers)
    eq = solve_signaling(sg)

    # Per-type play-out distribution under the equilibrium.
    outcomes: dict[str, list] = {}
    for t in sg.types:
        rows = []
        for a in sg.actions[t]:
            pa = eq.hero[t][a]
            for r in sg.responses[a]:
                pr = eq.observer[a][r]
                prov = provenance[(t, a, r)]
                main = max(prov.outcomes, key=lambda o: o.weight)
                value = prov.payoff
                rows.append((a, r, pa * pr,
                             int(value) if value.denominator == 1 else value,
                             main.finals))
        outcomes[t] = rows

    # Deviation table around the equilibrium.
    deviations: list[tuple[str, str, Fraction]] = []
    bluff = _labeled_pick(rspec.labels, sg.types, "bluff", "type")
    setup = _labeled_pick(rspec.labels, sg.types, "setup", "type")
    block = _labeled_pick(rspec.rlabels, sg.observable_actions(), "block",
                          "action")
    second = _labeled_pick(rspec.rlabels, sg.observable_actions(),
                           "second-guess", "action")
    half = Fraction(1, 2)
    obs_mix = {a: {r: half * eq.observer[a][r]
                   + half * _pure_observer(sg, block)[a][r]
                   for r in sg.responses[a]}
               for a in sg.observable_actions()}
    deviations.append(("observer", "best-response",
                       best_response_value(sg, hero=eq.hero)))
    for name, pick in (("always-block", block), ("always-second-guess",
                                                 second)):
        v = -expected_payoff(sg, eq.hero, _pure_observer(sg, pick))
        deviations.append(("observer", name, v))
    deviations.append(
        ("observer", "half-block-mix",
         -expected_payoff(sg, eq.hero, obs_mix)))
    deviations.append(("hero", "best-response",
                       best_response_value(sg, observer=eq.observer)))
    for name, pick in (("always-bluff", bluff), ("always-setup", setup)):
        v = expected_payoff(sg, _pure_hero(sg, pick), eq.observer)
        deviations.append(("hero", name, v))

    naive = check_signaling_equilibrium(
        sg, _pure_hero(sg, bluff), _pure_observer(sg, block))

    # Chance numbers for each type's actual bag.
    chance: dict[str, dict[str, Fraction]] = {}
    for t in rspec.types:
        hero_pool = remove_tiles(base.unseen, t.rack)
        bag = remove_tiles(hero_pool, rspec.observer_rack)
        splits = enumerate_splits(UnseenModel(
            pool=hero_pool, bag_size=len(bag), rack_size=7))
        p_bag = next(p for _, b, p in splits if b == bag)
        prov = provenance[(t.name, rspec.actions[0].id,
                           rspec.responses[rspec.actions[0].id][0].id)]
        draw = prov.outcomes[0].draw
        p_draw = next(p for d, p in draw_distribution(bag, len(draw))
                      if d == draw)
        chance[t.name] = {
            "bag": bag, "p_bag": p_bag,
            "needed_draw": draw, "p_draw": p_draw,
            "p_setup_line": p_bag * p_draw,
        }

    return PuzzleReport(
        name=rspec.name, hypotheses_before=before, hypotheses_after=after,
        filters=rspec.filters, game=sg, provenance=provenance,
        equilibrium=eq, labels=rspec.labels, rlabels=rspec.rlabels,
        outcomes=outcomes, deviations=deviations, naive_pair=naive,
        chance=chance)
