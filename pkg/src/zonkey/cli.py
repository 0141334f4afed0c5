"""Command-line front end.

Subcommands: replay, render, moves, bingos, endgame, solve, line,
puzzle. Exit codes: 0 success/verified, 1 verification mismatch,
2 usage or input errors. Rationals print as p/q (pass --approx for
decimals alongside).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .endgame import apply_script_steps, evaluate_line, solve_endgame
from .errors import ZonkeyError
from .gcg import parse_gcg, replay
from .gametheory import MatrixGame, SignalingGame, parse_game_file, \
    solve_matrix, solve_signaling
from .lexicon import Lexicon, bingos_from, load_lexicon, reachable_bingos
from .movegen import generate_moves
from .peg import RestrictedGameSpec, analyze_puzzle
from .scenario import build_position, load_scenario, load_script


def data_path(name: str) -> Path:
    """Path of a bundled data file."""
    return Path(resources.files("zonkey") / "data" / name)


def _load_lexicon(arg: str | None) -> Lexicon:
    if arg is None:
        return load_lexicon(data_path("mini_nwl.txt"))
    return load_lexicon(arg)


def _fmt(value: Fraction, approx: bool) -> str:
    if approx and value.denominator != 1:
        return f"{value} (~{float(value):.4f})"
    return str(value)


def cmd_replay(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    report = replay(parse_gcg(Path(args.gcg).read_text(encoding="utf-8")),
                    lexicon)
    if args.json:
        doc = {
            "players": report.players,
            "final": list(report.final_scores),
            "mismatches": len(report.mismatches),
            "events": [
                {"player": e.event.player, "move": e.move_str,
                 "score": e.computed_score, "total": e.computed_total,
                 "ok": e.ok}
                for e in report.entries],
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(report.format())
        if args.render:
            print()
            print(report.position.board.render())
    return 0 if not report.mismatches else 1


def cmd_render(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    report = replay(parse_gcg(Path(args.gcg).read_text(encoding="utf-8")),
                    lexicon)
    print(report.position.board.render())
    return 0


def cmd_moves(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    report = replay(parse_gcg(Path(args.gcg).read_text(encoding="utf-8")),
                    lexicon)
    moves = generate_moves(report.position, args.rack.upper(), lexicon)
    moves = [m for m in moves if not m.is_pass][:args.top]
    if args.json:
        doc = [{"move": str(m), "word": m.word, "coord": str(m.coord),
                "score": m.score,
                "words": m.words_formed()} for m in moves]
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for m in moves:
            print(f"{m.word:<12} {str(m.coord):<4} {m.score:>4}  "
                  f"({', '.join(m.words_formed()[1:]) or '-'})")
    return 0


def cmd_bingos(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    if args.pool:
        result = reachable_bingos(lexicon, args.rack.upper(),
                                  args.play.upper(), args.pool.upper(),
                                  args.draws)
        doc = {draw: list(words) for draw, words in sorted(result.items())}
        if args.json:
            print(json.dumps(doc, indent=2, sort_keys=True))
        else:
            for draw, words in sorted(result.items()):
                print(f"draw {draw}: {', '.join(words) if words else '-'}")
    else:
        words = bingos_from(lexicon, args.rack.upper())
        if args.json:
            print(json.dumps(words))
        else:
            print("\n".join(words) if words else "(none)")
    return 0


def cmd_endgame(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    script = load_script(args.script)
    position = build_position(script, lexicon)
    position, audits, ending = apply_script_steps(position, script, lexicon)
    if ending is not None:
        print("script already reaches the end of the game; use `line`")
        return 2
    result = solve_endgame(position, lexicon, hero=script.hero_index,
                           workers=args.workers)
    hero = script.hero_index
    doc = {
        "value": result.value,
        "final": [result.finals[hero], result.finals[1 - hero]],
        "ending": result.ending,
        "line": [str(m) for m in result.pv],
    }
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"value {result.value:+d} for {script.hero_id or 'hero'}")
        print(f"final {doc['final'][0]}-{doc['final'][1]} ({result.ending})")
        print("line: " + "; ".join(doc["line"]))
    return 0


def cmd_solve(args) -> int:
    game = parse_game_file(Path(args.game).read_text(encoding="utf-8"))
    if isinstance(game, MatrixGame):
        sol = solve_matrix(game)
        if args.json:
            doc = {"value": str(sol.value),
                   "row": {k: str(v) for k, v in sol.row_strategy.items()},
                   "col": {k: str(v) for k, v in sol.col_strategy.items()}}
            print(json.dumps(doc, indent=2, sort_keys=True))
        else:
            print(f"value {_fmt(sol.value, args.approx)}")
            for side, strat in (("row", sol.row_strategy),
                                ("col", sol.col_strategy)):
                probs = ", ".join(f"{k}={_fmt(v, args.approx)}"
                                  for k, v in strat.items() if v)
                print(f"{side}: {probs}")
    else:
        assert isinstance(game, SignalingGame)
        eq = solve_signaling(game)
        if args.json:
            doc = {"value": str(eq.value),
                   "hero": {t: {a: str(p) for a, p in d.items()}
                            for t, d in eq.hero.items()},
                   "observer": {a: {r: str(p) for r, p in d.items()}
                                for a, d in eq.observer.items()},
                   "posteriors": {a: {t: str(p) for t, p in d.items()}
                                  for a, d in eq.posteriors.items()}}
            print(json.dumps(doc, indent=2, sort_keys=True))
        else:
            print(f"value {_fmt(eq.value, args.approx)}")
            for t, d in eq.hero.items():
                print(f"hero {t}: " + ", ".join(
                    f"{a}={_fmt(p, args.approx)}" for a, p in d.items()))
            for a, d in eq.observer.items():
                print(f"observer after {a}: " + ", ".join(
                    f"{r}={_fmt(p, args.approx)}" for r, p in d.items()))
    return 0


def cmd_line(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    script = load_script(args.script)
    position = build_position(script, lexicon)
    report = evaluate_line(position, script, lexicon)
    if args.json:
        doc = {
            "script": report.script.name,
            "final": [report.value.finals[report.hero],
                      report.value.finals[1 - report.hero]],
            "value": report.value.value,
            "result": str(report.value),
            "ok": report.ok,
            "steps": [{"step": a.step.raw, "score": a.score,
                       "totals": list(a.totals), "ok": a.ok}
                      for a in report.steps],
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(report.format())
    return 0 if report.ok else 1


def cmd_puzzle(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    spec = load_scenario(args.scenario)
    rspec = RestrictedGameSpec.from_scenario(spec, lexicon)
    report = analyze_puzzle(rspec, workers=args.workers)
    if args.json:
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        print("\n".join(report.summary_lines()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zonkey",
        description="Crossword game engine and pre-endgame equilibrium "
                    "toolkit")
    parser.add_argument("--lexicon", help="word list file (default: the "
                        "bundled mini lexicon)")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    parser.add_argument("--approx", action="store_true",
                        help="append decimal approximations to rationals")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replay", help="audit a .gcg transcript")
    p.add_argument("gcg")
    p.add_argument("--render", action="store_true",
                   help="print the final board")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("render", help="print the board after a transcript")
    p.add_argument("gcg")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("moves", help="generate plays for a rack")
    p.add_argument("--gcg", required=True, help="transcript for the board")
    p.add_argument("--rack", required=True)
    p.add_argument("--top", type=int, default=20)
    p.set_defaults(func=cmd_moves)

    p = sub.add_parser("bingos", help="bingo search for a rack")
    p.add_argument("--rack", required=True)
    p.add_argument("--pool", help="unseen pool for reachable-bingo search")
    p.add_argument("--play", default="", help="tiles played before drawing")
    p.add_argument("--draws", type=int, default=1)
    p.set_defaults(func=cmd_bingos)

    p = sub.add_parser("endgame", help="solve the endgame after a script")
    p.add_argument("script")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_endgame)

    p = sub.add_parser("solve", help="solve a matrix or signaling game file")
    p.add_argument("game")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("line", help="verify a scripted line of play")
    p.add_argument("script")
    p.set_defaults(func=cmd_line)

    p = sub.add_parser("puzzle", help="full pre-endgame analysis")
    p.add_argument("scenario")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_puzzle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ZonkeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
