"""Exact zero-sum game machinery over rational arithmetic.

Everything here is exact: probabilities and payoffs are
:class:`fractions.Fraction` end to end, and no solver path touches
floating point. Matrix games are solved by a primal simplex with Bland's
rule (termination guaranteed); every returned equilibrium is re-verified
against the best-response certificate before it leaves this module, so
the pivoting method is interchangeable without loss of trust.

One-sided-information signaling games reduce to matrix games over pure
policies (one action per type for the informed player, one response per
observation for the other), then behavioral strategies and posterior
beliefs are extracted from the policy mix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import GameFormatError, ZonkeyError

Rational = Fraction  # exact rationals; always reduced, positive denominator


def equity(p_win: Fraction, p_tie: Fraction, p_loss: Fraction) -> Fraction:
    """Expected +1/0/-1 score: win probability minus loss probability."""
    probs = (p_win, p_tie, p_loss)
    if any(p < 0 for p in probs) or sum(probs) != 1:
        raise ZonkeyError(f"invalid outcome distribution {probs}")
    return p_win - p_loss


@dataclass(frozen=True)
class MatrixGame:
    """Zero-sum game; payoffs are to the row player, who maximizes."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    payoffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.cols:
            raise ZonkeyError("matrix game must be non-empty")
        if len(self.payoffs) != len(self.rows) or any(
                len(r) != len(self.cols) for r in self.payoffs):
            raise ZonkeyError("payoff matrix shape mismatch")

    def at(self, row: str, col: str) -> Fraction:
        return self.payoffs[self.rows.index(row)][self.cols.index(col)]


@dataclass(frozen=True)
class MatrixSolution:
    """Equilibrium of a matrix game, certificate-checked on construction."""

    value: Fraction
    row_strategy: dict[str, Fraction]
    col_strategy: dict[str, Fraction]


def _as_fraction_matrix(payoffs) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(v) for v in row) for row in payoffs)


def matrix_game(payoffs, rows=None, cols=None) -> MatrixGame:
    """Convenience constructor with default labels r0.., c0.."""
    mat = _as_fraction_matrix(payoffs)
    m, n = len(mat), len(mat[0])
    return MatrixGame(
        rows=tuple(rows) if rows else tuple(f"r{i}" for i in range(m)),
        cols=tuple(cols) if cols else tuple(f"c{j}" for j in range(n)),
        payoffs=mat)


def verify_matrix_equilibrium(game: MatrixGame, x: dict[str, Fraction],
                              y: dict[str, Fraction],
                              value: Fraction) -> None:
    """Exact certificate: x guarantees >= value against every column and
    y caps every row at <= value; raises on any violation."""
    for strat, labels in ((x, game.rows), (y, game.cols)):
        if any(strat.get(k, 0) < 0 for k in labels):
            raise ZonkeyError("negative probability in strategy")
        if sum(strat.get(k, Fraction(0)) for k in labels) != 1:
            raise ZonkeyError("strategy probabilities must sum to 1")
    A = game.payoffs
    for j, col in enumerate(game.cols):
        got = sum(x.get(r, Fraction(0)) * A[i][j]
                  for i, r in enumerate(game.rows))
        if got < value:
            raise ZonkeyError(f"row strategy yields {got} < {value} vs {col}")
    for i, row in enumerate(game.rows):
        got = sum(y.get(c, Fraction(0)) * A[i][j]
                  for j, c in enumerate(game.cols))
        if got > value:
            raise ZonkeyError(f"column strategy leaks {got} > {value} vs {row}")


def solve_matrix(game: MatrixGame) -> MatrixSolution:
    """Exact equilibrium via rational simplex.

    When several equilibria exist, the returned strategies are
    re-selected to the pair whose (row, column) supports come first in
    lexicographic order among supports admitting a unique solution; the
    value is unique regardless.
    """
    value, x_vec, y_vec = _simplex_value(game.payoffs)
    x = {r: x_vec[i] for i, r in enumerate(game.rows)}
    y = {c: y_vec[j] for j, c in enumerate(game.cols)}
    canon = _lex_support_solution(game.payoffs, value)
    if canon is not None:
        x_vec, y_vec = canon
        x = {r: x_vec[i] for i, r in enumerate(game.rows)}
        y = {c: y_vec[j] for j, c in enumerate(game.cols)}
    verify_matrix_equilibrium(game, x, y, value)
    return MatrixSolution(value=value, row_strategy=x, col_strategy=y)


def _simplex_value(A) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Solve the zero-sum game exactly.

    Shift payoffs positive, then maximize sum(t) subject to B t <= 1,
    t >= 0 by primal simplex with Bland's rule. The optimum gives the
    column strategy; the slack reduced costs give the row strategy.
    """
    m, n = len(A), len(A[0])
    shift = 1 - min(v for row in A for v in row)
    B = [[Fraction(A[i][j]) + shift for j in range(n)] for i in range(m)]

    # Tableau rows: [coeffs over n structural + m slacks | rhs], basis = slacks.
    tab = [B[i] + [Fraction(1) if k == i else Fraction(0) for k in range(m)]
           + [Fraction(1)] for i in range(m)]
    # Reduced-cost row for minimizing -sum(t).
    cost = [Fraction(-1)] * n + [Fraction(0)] * m + [Fraction(0)]
    basis = list(range(n, n + m))

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        ratio = None
        leave = None
        for i in range(m):
            if tab[i][enter] > 0:
                r = tab[i][-1] / tab[i][enter]
                if ratio is None or r < ratio or (
                        r == ratio and basis[i] < basis[leave]):
                    ratio, leave = r, i
        if leave is None:
            raise ZonkeyError("unbounded game LP (impossible for B > 0)")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, tab[leave])]
        basis[leave] = enter

    t = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            t[b] = tab[i][-1]
    total = sum(t)
    # B > 0 entrywise, so the column player cannot hold sum(t) at 0.
    w = 1 / total
    y = [v * w for v in t]
    u = [cost[n + i] for i in range(m)]  # dual values (>= 0 at optimum)
    x = [v * w for v in u]
    return w - shift, x, y


def _lex_support_solution(A, value):
    """Smallest-support equilibrium (lexicographic over index tuples).

    Only supports admitting a unique strategy solution are considered;
    returns None when none qualifies (the simplex solution then stands).
    """
    m, n = len(A), len(A[0])
    rows_supports = _lex_subsets(m)
    cols_supports = _lex_subsets(n)
    for R in rows_supports:
        for C in cols_supports:
            if abs(len(R) - len(C)) > 1:
                continue
            y = _support_strategy([[A[i][j] for j in range(n)] for i in R],
                                  C, value, upper=True)
            if y is None:
                continue
            x = _support_strategy([[A[i][j] for i in range(m)] for j in C],
                                  R, value, upper=False)
            if x is None:
                continue
            xv = [Fraction(0)] * m
            for k, i in enumerate(R):
                xv[i] = x[k]
            yv = [Fraction(0)] * n
            for k, j in enumerate(C):
                yv[j] = y[k]
            if _is_equilibrium(A, xv, yv, value):
                return xv, yv
    return None


def _lex_subsets(n: int):
    subsets = []
    for size in range(1, n + 1):
        subsets.extend(combinations(range(n), size))
    return sorted(subsets)


def _support_strategy(rows, support, value, upper: bool):
    """Solve sum_j p_j * rows[i][support[j]] = value for all i, sum p = 1,
    p > 0 on the support; None unless the solution exists and is unique."""
    k = len(support)
    eqs = [[row[j] for j in support] + [value] for row in rows]
    eqs.append([Fraction(1)] * k + [Fraction(1)])
    sol = _solve_unique(eqs, k)
    if sol is None or any(p <= 0 for p in sol):
        return None
    return sol


def _solve_unique(eqs, k):
    """Gaussian elimination; None if the system is inconsistent or the
    solution is not unique."""
    rows = [list(map(Fraction, eq)) for eq in eqs]
    pivots = []
    r = 0
    for c in range(k):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if len(pivots) < k:
        return None  # not unique
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            return None  # inconsistent
    sol = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        sol[c] = rows[i][-1]
    return sol


def _is_equilibrium(A, x, y, value) -> bool:
    m, n = len(A), len(A[0])
    for j in range(n):
        if sum(x[i] * A[i][j] for i in range(m)) < value:
            return False
    for i in range(m):
        if sum(y[j] * A[i][j] for j in range(n)) > value:
            return False
    return True


# ---------------------------------------------------------------------------
# Signaling games
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignalingGame:
    """One informed player (hero) whose action is publicly observed.

    ``payoff[(type, action, response)]`` is the hero's exact payoff.
    Actions may differ per type; responses are per observable action.
    """

    types: tuple[str, ...]
    priors: dict[str, Fraction]
    actions: dict[str, tuple[str, ...]]  # type -> available actions
    responses: dict[str, tuple[str, ...]]  # action -> observer replies
    payoff: dict[tuple[str, str, str], Fraction]

    def __post_init__(self):
        if sum(self.priors[t] for t in self.types) != 1:
            raise ZonkeyError("type priors must sum to 1")
        if any(self.priors[t] < 0 for t in self.types):
            raise ZonkeyError("negative prior")
        for t in self.types:
            for a in self.actions[t]:
                for r in self.responses[a]:
                    if (t, a, r) not in self.payoff:
                        raise ZonkeyError(f"missing payoff for {(t, a, r)}")

    def observable_actions(self) -> tuple[str, ...]:
        seen: list[str] = []
        for t in self.types:
            for a in self.actions[t]:
                if a not in seen:
                    seen.append(a)
        return tuple(seen)


@dataclass(frozen=True)
class Equilibrium:
    """Behavioral equilibrium of a signaling game with certificates."""

    value: Fraction
    hero: dict[str, dict[str, Fraction]]  # type -> action -> prob
    observer: dict[str, dict[str, Fraction]]  # action -> response -> prob
    posteriors: dict[str, dict[str, Fraction]]  # action -> type -> prob
    matrix: MatrixGame
    solution: MatrixSolution


def hero_policies(sg: SignalingGame) -> list[tuple[tuple[str, str], ...]]:
    """Pure hero policies: one action per type."""
    choices = [[(t, a) for a in sg.actions[t]] for t in sg.types]
    return [tuple(combo) for combo in product(*choices)]


def observer_policies(sg: SignalingGame) -> list[tuple[tuple[str, str], ...]]:
    """Pure observer policies: one response per observable action."""
    actions = sg.observable_actions()
    choices = [[(a, r) for r in sg.responses[a]] for a in actions]
    return [tuple(combo) for combo in product(*choices)]


def _policy_label(policy) -> str:
    return "|".join(f"{k}>{v}" for k, v in policy)


def signaling_to_matrix(sg: SignalingGame) -> MatrixGame:
    """Reduce to a matrix game over pure policies, prior-weighting types."""
    rows = hero_policies(sg)
    cols = observer_policies(sg)
    payoffs = []
    for hp in rows:
        hmap = dict(hp)
        line = []
        for op in cols:
            omap = dict(op)
            total = Fraction(0)
            for t in sg.types:
                a = hmap[t]
                total += sg.priors[t] * sg.payoff[(t, a, omap[a])]
            line.append(total)
        payoffs.append(tuple(line))
    return MatrixGame(rows=tuple(_policy_label(p) for p in rows),
                      cols=tuple(_policy_label(p) for p in cols),
                      payoffs=tuple(payoffs))


def solve_signaling(sg: SignalingGame) -> Equilibrium:
    """Solve the policy reduction, then extract behavioral strategies and
    Bayes posteriors. Off-path observations get the prior restricted to
    the types that could have taken the action."""
    game = signaling_to_matrix(sg)
    sol = solve_matrix(game)
    rows = hero_policies(sg)
    cols = observer_policies(sg)

    hero: dict[str, dict[str, Fraction]] = {
        t: {a: Fraction(0) for a in sg.actions[t]} for t in sg.types}
    for policy in rows:
        p = sol.row_strategy[_policy_label(policy)]
        for t, a in policy:
            hero[t][a] += p

    observer: dict[str, dict[str, Fraction]] = {
        a: {r: Fraction(0) for r in sg.responses[a]}
        for a in sg.observable_actions()}
    for policy in cols:
        p = sol.col_strategy[_policy_label(policy)]
        for a, r in policy:
            observer[a][r] += p

    posteriors: dict[str, dict[str, Fraction]] = {}
    for a in sg.observable_actions():
        reach = {t: sg.priors[t] * hero[t].get(a, Fraction(0))
                 for t in sg.types}
        total = sum(reach.values())
        if total > 0:
            posteriors[a] = {t: reach[t] / total for t in sg.types}
        else:
            able = [t for t in sg.types if a in sg.actions[t]]
            mass = sum(sg.priors[t] for t in able)
            posteriors[a] = {t: (sg.priors[t] / mass if t in able
                                 else Fraction(0)) for t in sg.types}
    return Equilibrium(value=sol.value, hero=hero, observer=observer,
                       posteriors=posteriors, matrix=game, solution=sol)


def expected_payoff(sg: SignalingGame, hero: dict[str, dict[str, Fraction]],
                    observer: dict[str, dict[str, Fraction]]) -> Fraction:
    """Hero's exact payoff under behavioral strategy profiles."""
    total = Fraction(0)
    for t in sg.types:
        for a, pa in hero[t].items():
            if pa == 0:
                continue
            for r, pr in observer[a].items():
                if pr == 0:
                    continue
                total += sg.priors[t] * pa * pr * sg.payoff[(t, a, r)]
    return total


def best_response_value(sg: SignalingGame,
                        hero: dict[str, dict[str, Fraction]] | None = None,
                        observer: dict[str, dict[str, Fraction]] | None = None
                        ) -> Fraction:
    """Optimal payoff of the unfixed side against a fixed strategy.

    Fix the hero and the observer's best-response value (to her) is
    returned; fix the observer and the hero's is. Exactly one side must
    be fixed.
    """
    if (hero is None) == (observer is None):
        raise ZonkeyError("fix exactly one side")
    if hero is not None:
        _check_behavioral(sg, hero=hero)
        best = None
        for policy in observer_policies(sg):
            omap = {a: {r: Fraction(1) if r == pr else Fraction(0)
                        for r in sg.responses[a]} for a, pr in policy}
            v = -expected_payoff(sg, hero, omap)
            if best is None or v > best:
                best = v
        return best
    _check_behavioral(sg, observer=observer)
    best = None
    for policy in hero_policies(sg):
        hmap = {t: {a: Fraction(1) if a == pa else Fraction(0)
                    for a in sg.actions[t]} for t, pa in policy}
        v = expected_payoff(sg, hmap, observer)
        if best is None or v > best:
            best = v
    return best


def check_signaling_equilibrium(sg: SignalingGame,
                                hero: dict[str, dict[str, Fraction]],
                                observer: dict[str, dict[str, Fraction]]
                                ) -> tuple[bool, Fraction, Fraction, Fraction]:
    """Certificate for a behavioral profile.

    Returns (holds, payoff, hero_best, observer_best): the profile is an
    equilibrium iff neither side can profit by deviating, i.e.
    hero_best == payoff and observer_best == -payoff.
    """
    _check_behavioral(sg, hero=hero, observer=observer)
    value = expected_payoff(sg, hero, observer)
    obs_best = best_response_value(sg, hero=hero)
    hero_best = best_response_value(sg, observer=observer)
    holds = (hero_best == value) and (obs_best == -value)
    return holds, value, hero_best, obs_best


def _check_behavioral(sg: SignalingGame, hero=None, observer=None) -> None:
    if hero is not None:
        for t in sg.types:
            probs = hero[t]
            if sum(probs.values()) != 1 or any(p < 0 for p in probs.values()):
                raise ZonkeyError(f"invalid strategy for type {t!r}")
    if observer is not None:
        for a in sg.observable_actions():
            probs = observer[a]
            if sum(probs.values()) != 1 or any(p < 0 for p in probs.values()):
                raise ZonkeyError(f"invalid strategy after {a!r}")


# ---------------------------------------------------------------------------
# Plain-text game files
# ---------------------------------------------------------------------------

def parse_game_file(text: str) -> MatrixGame | SignalingGame:
    """Parse the documented plain-text game format.

    Matrix games::

        matrix
        cols rock paper scissors
        row rock     0 -1 1
        row paper    1 0 -1
        row scissors -1 1 0

    Signaling games::

        signaling
        type M prior 1/2
        actions M 8K H11
        responses 8K N2 14B
        payoff M 8K N2 -1

    Entries are exact rationals written as ``p/q`` or integers.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))
    if not lines:
        raise GameFormatError("empty game file")
    kind = lines[0][1][0]
    body = lines[1:]
    if kind == "matrix":
        return _parse_matrix(body)
    if kind == "signaling":
        return _parse_signaling(body)
    raise GameFormatError(f"unknown game kind {kind!r}")


def _parse_matrix(body) -> MatrixGame:
    cols: tuple[str, ...] | None = None
    rows: list[str] = []
    payoffs: list[tuple[Fraction, ...]] = []
    for lineno, toks in body:
        if toks[0] == "cols":
            cols = tuple(toks[1:])
        elif toks[0] == "row":
            if cols is None:
                raise GameFormatError(f"line {lineno}: cols must come first")
            if len(toks) != len(cols) + 2:
                raise GameFormatError(f"line {lineno}: expected "
                                      f"{len(cols)} entries")
            rows.append(toks[1])
            payoffs.append(tuple(Fraction(v) for v in toks[2:]))
        else:
            raise GameFormatError(f"line {lineno}: unknown directive "
                                  f"{toks[0]!r}")
    if cols is None or not rows:
        raise GameFormatError("matrix file needs cols and at least one row")
    return MatrixGame(rows=tuple(rows), cols=cols, payoffs=tuple(payoffs))


def _parse_signaling(body) -> SignalingGame:
    types: list[str] = []
    priors: dict[str, Fraction] = {}
    actions: dict[str, tuple[str, ...]] = {}
    responses: dict[str, tuple[str, ...]] = {}
    payoff: dict[tuple[str, str, str], Fraction] = {}
    for lineno, toks in body:
        try:
            if toks[0] == "type":
                types.append(toks[1])
                priors[toks[1]] = Fraction(toks[3])
            elif toks[0] == "actions":
                actions[toks[1]] = tuple(toks[2:])
            elif toks[0] == "responses":
                responses[toks[1]] = tuple(toks[2:])
            elif toks[0] == "payoff":
                payoff[(toks[1], toks[2], toks[3])] = Fraction(toks[4])
            else:
                raise GameFormatError(f"unknown directive {toks[0]!r}")
        except GameFormatError:
            raise
        except Exception as exc:
            raise GameFormatError(f"line {lineno}: {exc}") from exc
    return SignalingGame(types=tuple(types), priors=priors, actions=actions,
                         responses=responses, payoff=payoff)


def format_matrix_game(game: MatrixGame) -> str:
    lines = ["matrix", "cols " + " ".join(game.cols)]
    for label, row in zip(game.rows, game.payoffs):
        lines.append("row " + label + " " + " ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"
