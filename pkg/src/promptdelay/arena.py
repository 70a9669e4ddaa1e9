"""The abstraction parity game and a recursive (Zielonka) parity-game solver.

Players are numbered by the parity they like: ``O = 0`` wins plays whose
maximal priority seen infinitely often is even, ``I = 1`` the others.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InternalError
from .tracking import Abstraction, bits

O, I = 0, 1
PLAYER_NAMES = {O: "O", I: "I"}


@dataclass
class ParityGame:
    owner: list[int]
    priority: list[int]
    succ: list[list[int]]
    initial: int = 0
    labels: list[str] | None = None
    _pred: list | None = field(default=None, repr=False)

    def __post_init__(self):
        n = len(self.owner)
        if len(self.priority) != n or len(self.succ) != n:
            raise ValueError("owner, priority and successor lists must have equal length")
        for v, ws in enumerate(self.succ):
            if not ws:
                raise ValueError(f"vertex {v} has no successor")
            if any(not 0 <= w < n for w in ws):
                raise ValueError(f"vertex {v} has an out-of-range successor")
        if not 0 <= self.initial < n:
            raise ValueError("initial vertex out of range")

    @property
    def num_vertices(self) -> int:
        return len(self.owner)

    @property
    def pred(self) -> list[list[int]]:
        if self._pred is None:
            pred = [[] for _ in self.owner]
            for v, ws in enumerate(self.succ):
                for w in ws:
                    pred[w].append(v)
            self._pred = pred
        return self._pred

    def dump(self) -> str:
        doc = {
            "initial": self.initial,
            "vertices": [
                {"id": v, "owner": PLAYER_NAMES[self.owner[v]], "priority": self.priority[v],
                 **({"label": self.labels[v]} if self.labels else {})}
                for v in range(self.num_vertices)
            ],
            "edges": [[v, w] for v in range(self.num_vertices) for w in self.succ[v]],
        }
        return json.dumps(doc, indent=1) + "\n"


@dataclass
class PositionalStrategy:
    owner: int
    choice: dict  # vertex -> successor


@dataclass
class Solution:
    regions: tuple  # (winning region of O, winning region of I) as frozensets
    strategies: tuple  # (PositionalStrategy for O, PositionalStrategy for I)

    def winner(self, v: int) -> int:
        return O if v in self.regions[O] else I


def attractor(game: ParityGame, arena: set, target: set, player: int):
    """Attractor of ``target`` for ``player`` inside ``arena``, with attracting moves.

    Vertices are added layer by layer; a vertex of ``player`` moves to its
    lowest-numbered successor already in the attractor.
    """
    attr = set(target)
    strat: dict = {}
    count: dict = {}
    frontier = sorted(attr)
    pred = game.pred
    while frontier:
        layer = set()
        for w in frontier:
            for v in pred[w]:
                if v in attr or v not in arena or v in layer:
                    continue
                if game.owner[v] == player:
                    layer.add(v)
                else:
                    c = count.get(v)
                    if c is None:
                        c = sum(1 for u in game.succ[v] if u in arena)
                    c -= 1
                    count[v] = c
                    if c == 0:
                        layer.add(v)
        for v in layer:
            if game.owner[v] == player:
                strat[v] = min(u for u in game.succ[v] if u in attr)
        attr |= layer
        frontier = sorted(layer)
    return attr, strat


def _least_in(game, v, arena):
    return min(u for u in game.succ[v] if u in arena)


def _zielonka(game: ParityGame, arena: frozenset, memo: dict):
    hit = memo.get(arena)
    if hit is not None:
        return hit
    win = [set(), set()]
    strat = [{}, {}]
    rest = set(arena)
    while rest:
        p = max(game.priority[v] for v in rest)
        x, y = p % 2, 1 - p % 2
        top = {v for v in rest if game.priority[v] == p}
        a, a_strat = attractor(game, rest, top, x)
        sub_win, sub_strat = _zielonka(game, frozenset(rest - a), memo)
        if not sub_win[y]:
            win[x] |= rest
            strat[x].update(sub_strat[x])
            strat[x].update(a_strat)
            for v in top:
                if game.owner[v] == x:
                    strat[x][v] = _least_in(game, v, rest)
            break
        b, b_strat = attractor(game, rest, sub_win[y], y)
        win[y] |= b
        for v in sub_win[y]:
            if v in sub_strat[y]:
                strat[y][v] = sub_strat[y][v]
        strat[y].update(b_strat)
        rest -= b
    result = ((frozenset(win[0]), frozenset(win[1])), (strat[0], strat[1]))
    memo[arena] = result
    return result


def solve(game: ParityGame) -> Solution:
    """Winning regions and positional winning strategies for both players."""
    memo: dict = {}
    (w0, w1), (s0, s1) = _zielonka(game, frozenset(range(game.num_vertices)), memo)
    if w0 & w1 or len(w0) + len(w1) != game.num_vertices:
        raise InternalError("winning regions do not partition the game")
    s0 = {v: w for v, w in s0.items() if v in w0 and game.owner[v] == O}
    s1 = {v: w for v, w in s1.items() if v in w1 and game.owner[v] == I}
    return Solution((w0, w1), (PositionalStrategy(O, s0), PositionalStrategy(I, s1)))


# -- the abstraction game -------------------------------------------------------------------


class AbstractGame:
    """Game whose vertices are the initial vertex, behaviors and Player-I choice points.

    Vertex 0 is the initial vertex and vertex ``1 + b`` is behavior ``b``.
    With ``merge=False`` the remaining vertices are the pairs ``(r, q)`` for
    ``q`` in the domain of ``r``, in behavior order and then state order.
    With ``merge=True`` (the default) pairs with the same priority and the
    same image domain are one vertex ``(m, D)``: they have the same owner,
    priority and successors, so the quotient has the same winner and a
    positional strategy lifts back to pairs.
    """

    def __init__(self, abstraction: Abstraction, merge: bool = True):
        self.abstraction = A = abstraction
        self.merged = merge
        T = A.T
        nb = len(A.behaviors)
        owner = [I] + [O] * nb
        priority = [0] * (1 + nb)
        succ: list[list[int]] = [[1 + b for b in A.by_domain[0]]]
        self.pair_of: list = [None] * (1 + nb)
        self.pair_index: dict = {}
        tail = []

        def domain_of(img):
            dom = A.domain_index.get(img)
            if dom is None:
                raise InternalError("behavior image is not a reachable domain")
            return dom

        for b, beh in enumerate(A.behaviors):
            row = []
            for x in bits(A.domains[beh.domain]):
                dom = domain_of(A.image(b, x))
                key = (T.priority(x), dom) if merge else (b, x)
                v = self.pair_index.get(key)
                if v is None:
                    v = self.pair_index[key] = len(owner)
                    owner.append(I)
                    priority.append(T.priority(x))
                    self.pair_of.append(key)
                    tail.append([1 + c for c in A.by_domain[dom]])
                if v not in row:
                    row.append(v)
            succ.append(sorted(row))
        succ.extend(tail)
        self.game = ParityGame(owner, priority, succ, 0)

    def behavior_vertex(self, b: int) -> int:
        return 1 + b

    def target_state(self, b: int, v: int) -> int:
        """The tracking state chosen by moving from behavior ``b`` to vertex ``v``."""
        A = self.abstraction
        if not self.merged:
            return self.pair_of[v][1]
        m, dom = self.pair_of[v]
        want = A.domains[dom]
        for x in bits(A.domains[A.behaviors[b].domain]):
            if A.T.priority(x) == m and A.image(b, x) == want:
                return x
        raise InternalError("strategy move is not available at this behavior")

    def labels(self) -> list[str]:
        T = self.abstraction.T
        out = ["v_I"] + [f"r{b}" for b in range(len(self.abstraction.behaviors))]
        for key in self.pair_of[len(out):]:
            if self.merged:
                out.append(f"(m={key[0]},D{key[1]})")
            else:
                out.append(f"(r{key[0]},{T.describe(key[1])})")
        return out

    def dump(self) -> str:
        self.game.labels = self.labels()
        return self.game.dump()


def build_game(abstraction: Abstraction, merge: bool = True) -> AbstractGame:
    return AbstractGame(abstraction, merge)
