"""Ground truth for small instances: the delay game with the lookahead buffer in the state space.

Round 0: Player I supplies ``f0`` input letters, then Player O answers one
output letter for the oldest buffered input.  Every later round Player I
adds one letter and Player O answers one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian

from . import logic
from .arena import I, O, PLAYER_NAMES, ParityGame, Solution, solve
from .automata import DEFAULT_BUDGET, Dpa, ltl_to_dpa
from .errors import CapacityError
from .logic import Formula, Partition
from .tracking import Alphabet


class BufferedGame:
    """Vertices: 0 is the start (Player I fills the buffer); then
    ``("O", q, queue)`` where Player O answers the front letter and
    ``("I", q, queue)`` where Player I appends a letter.
    """

    def __init__(self, dpa: Dpa, part: Partition, f0: int, budget: int = DEFAULT_BUDGET):
        if f0 < 1:
            raise ValueError("lookahead must be at least 1")
        self.dpa, self.part, self.f0 = dpa, part, f0
        self.alpha = alpha = Alphabet(dpa, part)
        if alpha.has_color:
            raise ValueError("the buffered game expects an automaton without the coloring proposition")
        n_in, n_out = alpha.num_inputs, alpha.num_outputs
        if n_in ** f0 * dpa.num_states * 2 > budget:
            raise CapacityError("oracle", budget)
        self.vertices: list = [("start",)]
        self.index: dict = {("start",): 0}
        owner, priority, succ = [I], [0], [[]]
        self.moves: list[list] = [[]]  # letter labelling each edge

        def vid(v):
            j = self.index.get(v)
            if j is None:
                if len(self.vertices) >= budget:
                    raise CapacityError("oracle", budget)
                j = self.index[v] = len(self.vertices)
                self.vertices.append(v)
                owner.append(O if v[0] == "O" else I)
                priority.append(dpa.colors[v[1]] if v[0] == "O" else 0)
                succ.append(None)
                self.moves.append(None)
            return j

        for u in cartesian(range(n_in), repeat=f0):
            succ[0].append(vid(("O", dpa.initial, u)))
            self.moves[0].append(u)
        i = 1
        while i < len(self.vertices):
            v = self.vertices[i]
            if v[0] == "O":
                _, q, queue = v
                labels = list(range(n_out))
                targets = [vid(("I", dpa.delta[q][alpha.combine[queue[0]][b]], queue[1:])) for b in labels]
            else:
                _, q, queue = v
                labels = list(range(n_in))
                targets = [vid(("O", q, queue + (a,))) for a in labels]
            # parallel edges collapse; keep the least label per target
            seen: dict = {}
            for lab, t in zip(labels, targets):
                seen.setdefault(t, lab)
            succ[i] = list(seen)
            self.moves[i] = list(seen.values())
            i += 1
        self.game = ParityGame(owner, priority, succ, 0)

    def move(self, v: int, w: int):
        """The letter (or initial word) labelling edge v -> w."""
        return self.moves[v][self.game.succ[v].index(w)]


@dataclass
class OracleResult:
    winner: str
    f0: int
    buffered: BufferedGame
    solution: Solution

    @property
    def vertices(self) -> int:
        return self.buffered.game.num_vertices


def solve_explicit(dpa: Dpa, part: Partition, f0: int, budget: int = DEFAULT_BUDGET) -> OracleResult:
    bg = BufferedGame(dpa, part, f0, budget)
    sol = solve(bg.game)
    return OracleResult(PLAYER_NAMES[sol.winner(0)], f0, bg, sol)


def prompt_dpa(phi: Formula, part: Partition, k: int, budget: int = DEFAULT_BUDGET) -> Dpa:
    return ltl_to_dpa(logic.expand_prompt(phi, k), part.aps, budget)


def solve_prompt_explicit(phi: Formula, part: Partition, k: int, f0: int,
                          budget: int = DEFAULT_BUDGET) -> OracleResult:
    """Winner of the delay game for ``phi`` with every prompt eventuality bounded by ``k``."""
    return solve_explicit(prompt_dpa(phi, part, k, budget), part, f0, budget)
