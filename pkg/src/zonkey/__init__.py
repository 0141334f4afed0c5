"""zonkey: a crossword game engine plus exact game-theory toolkit.

The package replays transcripts, generates and scores plays, solves
perfect-information endgames exactly over win/tie/loss, and computes
exact mixed-strategy equilibria of restricted pre-endgame signaling
games, with every probability kept as a rational number.
"""

from .board import ACROSS, DOWN, Board, Coordinate, parse_coordinate
from .endgame import EndgameResult, evaluate_line, solve_endgame
from .errors import ZonkeyError
from .gametheory import (Equilibrium, MatrixGame, MixedStrategy := dict,  # noqa: F841
                         SignalingGame)

__all__ = [
    "ACROSS", "DOWN", "Board", "Coordinate", "parse_coordinate",
    "EndgameResult", "evaluate_line", "solve_endgame", "ZonkeyError",
    "Equilibrium", "MatrixGame", "SignalingGame",
]

__version__ = "0.1.0"
