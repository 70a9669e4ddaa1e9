"""Finite-state delay strategies extracted from the abstraction game, and their verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Sequence

from . import logic
from .arena import I, O, PLAYER_NAMES, AbstractGame, Solution, build_game, solve
from .automata import DEFAULT_BUDGET, Dpa, determinize, ltl_to_nba
from .errors import CapacityError, InternalError
from .graphs import sccs
from .logic import Formula, LassoWord, Partition
from .tracking import Abstraction, Alphabet, Tracking, bits, block_length, build_tracking, reachable_abstraction

Block = tuple  # tuple of letter masks


class MealyStrategy:
    """Block-level transducer for Player O with lookahead of two blocks.

    A state is ``None`` before the first block, afterwards ``(r, block)``:
    the behavior witnessed by the most recent input block together with
    that block, whose output is still owed.  Consuming the next block
    determines the next behavior and the state Player O steers to, and
    yields the owed output block.
    """

    def __init__(self, game: AbstractGame, choice: dict, d: int):
        self.game = game
        self.abstraction = game.abstraction
        self.T: Tracking = self.abstraction.T
        self.alpha: Alphabet = self.T.alpha
        self.d = d
        self.color_mask = ~0
        self._target: dict = {}
        for b in range(len(self.abstraction.behaviors)):
            v = choice.get(game.behavior_vertex(b))
            if v is not None:
                self._target[b] = game.target_state(b, v)
        self._cache: dict = {}
        self._steer_cache: dict = {}

    initial = None

    def target(self, r: int) -> int:
        x = self._target.get(r)
        if x is None:
            raise InternalError(f"the game strategy has no move at behavior r{r}")
        return x

    def _next_behavior(self, domain: int, block: Block) -> int:
        r = self.abstraction.behavior_of(domain, block)
        if r is None:
            raise InternalError("input block shorter than the block length")
        return r

    def step(self, state, block: Sequence[int]):
        block = tuple(block)
        if len(block) != self.d:
            raise ValueError(f"input blocks must have length {self.d}")
        key = (state, block)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if state is None:
            res = ((self._next_behavior(0, block), block), None)
        else:
            r, prev = state
            x = self.target(r)
            dom = self.abstraction.domain_index[self.abstraction.image(r, x)]
            r2 = self._next_behavior(dom, block)
            out = self.steer(self.T.reset[x], prev, self.target(r2))
            res = ((r2, block), out)
        self._cache[key] = res
        return res

    def steer(self, start: int, block: Block, goal: int) -> Block:
        """Lexicographically least output block leading the tracking automaton to ``goal``."""
        key = (start, block, goal)
        hit = self._steer_cache.get(key)
        if hit is not None:
            return hit
        T, nb = self.T, self.alpha.num_outputs
        forward = [{start}]
        for a in block:
            forward.append({T.step(x, a, b) for x in forward[-1] for b in range(nb)})
        if goal not in forward[-1]:
            raise InternalError("no output block reaches the chosen state")
        back = {goal}
        allowed = [None] * len(block) + [back]
        for i in range(len(block) - 1, -1, -1):
            back = {x for x in forward[i] if any(T.step(x, block[i], b) in back for b in range(nb))}
            allowed[i] = back
        out = []
        x = start
        for i, a in enumerate(block):
            for b in range(nb):
                y = T.step(x, a, b)
                if y in allowed[i + 1]:
                    out.append(b)
                    x = y
                    break
        res = tuple(out)
        self._steer_cache[key] = res
        return res

    def output_mask(self, b: int) -> int:
        return b


class StrippedStrategy:
    """The same machine with the coloring proposition removed from every output letter."""

    def __init__(self, inner):
        self.inner = inner.inner if isinstance(inner, StrippedStrategy) else inner
        self.d = self.inner.d
        self.alpha = self.inner.alpha
        self.initial = self.inner.initial
        self._keep = ~self.alpha.color_bit

    def step(self, state, block):
        state2, out = self.inner.step(state, block)
        if out is None:
            return state2, None
        return state2, tuple(b & self._keep for b in out)


def strip(M) -> StrippedStrategy:
    return StrippedStrategy(M)


class Runner:
    """Letter-level play of a block strategy: output ``t`` is produced after ``2d + t`` inputs."""

    def __init__(self, M):
        self.M = M
        self.state = M.initial
        self.inputs: list[int] = []
        self.outputs: list[int] = []
        self._pending: list[int] = []
        self._blocks = 0

    def feed(self, a: int) -> list[int]:
        self.inputs.append(a)
        d = self.M.d
        emitted = []
        while len(self.inputs) >= 2 * d + len(self.outputs):
            if not self._pending:
                j = self._blocks
                block = tuple(self.inputs[j * d:(j + 1) * d])
                self.state, out = self.M.step(self.state, block)
                self._blocks += 1
                if out is not None:
                    self._pending.extend(out)
                continue
            b = self._pending.pop(0)
            self.outputs.append(b)
            emitted.append(b)
        return emitted


def compute_bound(abstraction: Abstraction, d: int) -> int:
    B = len(abstraction.behaviors)
    k = 2 * (B + 1) * d
    n = abstraction.T.num_states
    if 2 * n * n + 2 < 4096 and k > 2 ** (2 * n * n + 2):
        raise InternalError("bound exceeds 2^(2n^2+2)")
    return k


# -- verification --------------------------------------------------------------------------


@dataclass
class Report:
    ok: bool
    parity_ok: bool
    bound_ok: bool | None
    max_block: int | None
    product_states: int
    counterexample: LassoWord | None = None
    reason: str = ""

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "parity_ok": self.parity_ok,
            "bound_ok": self.bound_ok,
            "max_p_block": self.max_block,
            "product_states": self.product_states,
            "counterexample": logic.format_lasso(self.counterexample) if self.counterexample else None,
            "reason": self.reason,
        }


def _p_profile(lastp, ps):
    """Change positions of a block given the color of the preceding letter."""
    return [i for i, p in enumerate(ps) if (lastp if i == 0 else ps[i - 1]) != p]


def verify(M, dpa: Dpa, k: int | None, budget: int = DEFAULT_BUDGET) -> Report:
    """Exhaustive check of a block strategy against a parity automaton.

    Explores the product of the strategy with ``dpa`` over all input blocks.
    Passes iff every reachable cycle has an even maximal color and, when
    ``k`` is given and the automaton has the coloring proposition, every
    p-block has length at most ``k / 2``.
    """
    alpha, d = M.alpha, M.d
    blocks = list(cartesian(range(alpha.num_inputs), repeat=d))
    check_bound = k is not None and alpha.has_color
    start = ("start",)
    index = {start: 0}
    nodes = [start]
    edges: list[list] = []  # per node: (block, target, color, changes)
    i = 0
    while i < len(nodes):
        node = nodes[i]
        i += 1
        row = []
        if node is start:
            for blk in blocks:
                st, _ = M.step(M.initial, blk)
                row.append((blk, (st, dpa.initial, None), -1, None))
        else:
            st, q0, lastp = node
            for blk in blocks:
                st2, out = M.step(st, blk)
                q, color, ps = q0, -1, []
                for a, b in zip(st[1], out):
                    q = dpa.delta[q][alpha.combine[a][b]]
                    color = max(color, dpa.colors[q])
                    ps.append(alpha.tcolor(b))
                row.append((blk, (st2, q, ps[-1] if check_bound else None), color,
                            _p_profile(lastp, ps) if check_bound else None))
        resolved = []
        for blk, tgt, color, ch in row:
            j = index.get(tgt)
            if j is None:
                if len(nodes) >= budget:
                    raise CapacityError("verify", budget)
                j = index[tgt] = len(nodes)
                nodes.append(tgt)
            resolved.append((blk, j, color, ch))
        edges.append(resolved)

    n = len(nodes)
    path_to = _bfs_tree(edges)

    def lasso(prefix_edges, loop_edges):
        def flat(es):
            return tuple(alpha.input_names(a) for e in es for a in e)
        return LassoWord(flat(prefix_edges), flat(loop_edges))

    # (a) parity on cycles
    colors = sorted({c for row in edges for _, _, c, _ in row if c >= 0 and c % 2 == 1}, reverse=True)
    for c in colors:
        def succ(v, c=c):
            return [j for _, j, col, _ in edges[v] if col <= c]
        for comp in sccs(range(n), succ):
            cs = set(comp)
            for v in comp:
                for blk, j, col, _ in edges[v]:
                    if col == c and j in cs:
                        back = _path(edges, j, v, lambda e, cs=cs, c=c: e[1] in cs and e[2] <= c)
                        cex = lasso(path_to(v), [blk] + back)
                        return Report(False, False, None, None, n, cex,
                                      f"cycle with odd maximal color {c}")
    if not check_bound:
        return Report(True, True, None, None, n)

    # (b) p-block lengths
    limit = k // 2
    still = [[(blk, j) for blk, j, _, ch in edges[v] if ch == []] for v in range(n)]
    for comp in sccs(range(n), lambda v: [j for _, j in still[v]]):
        cs = set(comp)
        for v in comp:
            for blk, j in still[v]:
                if j in cs:
                    back = _path(edges, j, v, lambda e, cs=cs: e[1] in cs and e[3] == [])
                    cex = lasso(path_to(v), [blk] + back)
                    return Report(False, True, False, None, n, cex, "a p-block never ends")
    order = _topo(n, lambda v: [j for _, j in still[v]])
    run = [0] * n
    worst, worst_at = 0, None
    for v in range(n):
        for blk, j, _, ch in edges[v]:
            if ch:
                gap = max([b - a for a, b in zip(ch, ch[1:])] + [0])
                if gap > worst:
                    worst, worst_at = gap, (v, blk)
                tail = d - ch[-1]
                run[j] = max(run[j], tail)
    for v in order:
        for blk, j in still[v]:
            run[j] = max(run[j], run[v] + d)
    for v in range(n):
        if run[v] > worst:
            worst, worst_at = run[v], (v, None)
        for blk, j, _, ch in edges[v]:
            if ch and run[v] + ch[0] > worst:
                worst, worst_at = run[v] + ch[0], (v, blk)
    if worst > limit:
        v, blk = worst_at
        steps = path_to(v) + ([blk] if blk is not None else [])
        end = v if blk is None else next(j for b, j, _, _ in edges[v] if b == blk)
        pre, loop = _continue_to_cycle(edges, end)
        cex = lasso(steps + pre, loop)
        return Report(False, True, False, worst, n, cex, f"p-block of length {worst} exceeds {limit}")
    return Report(True, True, True, worst, n)


def _bfs_tree(edges):
    from collections import deque
    parent = {0: None}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for blk, j, _, _ in edges[v]:
            if j not in parent:
                parent[j] = (v, blk)
                queue.append(j)

    def path_to(v):
        out = []
        while parent[v] is not None:
            u, blk = parent[v]
            out.append(blk)
            v = u
        return out[::-1]

    return path_to


def _path(edges, src, dst, ok):
    """Blocks along a BFS path from src to dst using edges accepted by ``ok``."""
    from collections import deque
    if src == dst:
        return []
    parent = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for e in edges[v]:
            j = e[1]
            if j in parent or not ok(e):
                continue
            parent[j] = (v, e[0])
            if j == dst:
                out = []
                while parent[j] is not None:
                    u, blk = parent[j]
                    out.append(blk)
                    j = u
                return out[::-1]
            queue.append(j)
    raise InternalError("no path inside a strongly connected component")


def _continue_to_cycle(edges, v):
    seen = {v: 0}
    trail = []
    while True:
        blk, j = edges[v][0][0], edges[v][0][1]
        trail.append(blk)
        if j in seen:
            cut = seen[j]
            return trail[:cut], trail[cut:]
        seen[j] = len(trail)
        v = j


def _topo(n, succ):
    indeg = [0] * n
    for v in range(n):
        for j in succ(v):
            indeg[j] += 1
    order = [v for v in range(n) if indeg[v] == 0]
    i = 0
    while i < len(order):
        for j in succ(order[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                order.append(j)
        i += 1
    return order


# -- the pipeline -------------------------------------------------------------------------


@dataclass
class Verdict:
    winner: str
    f0: int
    k: int | None
    d: int
    sizes: dict
    strategy: MealyStrategy | None = None
    report: Report | None = None
    solution: Solution | None = field(default=None, repr=False)
    game: AbstractGame | None = field(default=None, repr=False)
    dpa: Dpa | None = field(default=None, repr=False)
    bound: int | None = None  # p-block bound used internally (2(B+1)d)

    @property
    def stripped(self) -> StrippedStrategy | None:
        return strip(self.strategy) if self.strategy is not None else None

    def to_dict(self, table_limit: int = 20000) -> dict:
        doc = {"winner": self.winner, "f0": self.f0, "k": self.k, "d": self.d, "sizes": self.sizes}
        if self.report is not None:
            doc["verification"] = self.report.as_dict()
        if self.strategy is not None:
            doc["strategy"] = strategy_table(self.strategy, table_limit)
        return doc

    def to_json(self, table_limit: int = 20000) -> str:
        return json.dumps(self.to_dict(table_limit), indent=1) + "\n"


def strategy_table(M, limit: int = 20000) -> dict:
    """Reachable states with their block transitions, or a summary when too large."""
    alpha, d = M.alpha, M.d
    blocks = list(cartesian(range(alpha.num_inputs), repeat=d))
    doc = {"block_length": d, "inputs": list(alpha.inputs), "outputs": list(alpha.outputs),
           "letter_encoding": "bit i of a letter is the i-th listed proposition"}
    index = {M.initial: 0}
    states = [M.initial]
    rows = []
    i = 0
    while i < len(states):
        st = states[i]
        i += 1
        for blk in blocks:
            st2, out = M.step(st, blk)
            j = index.get(st2)
            if j is None:
                j = index[st2] = len(states)
                states.append(st2)
            rows.append([index[st], list(blk), j, list(out) if out is not None else None])
            if len(rows) > limit:
                doc["truncated"] = True
                doc["states"] = None
                return doc
    doc["states"] = len(states)
    doc["transitions"] = rows
    return doc


def decide_dpa(dpa: Dpa, part: Partition, color: str | None = None, prompt: bool | None = None,
               budget: int = DEFAULT_BUDGET, check: bool = True) -> Verdict:
    """Solve the delay game for a parity automaton over inputs, outputs and the coloring proposition."""
    T = build_tracking(dpa, part, color, budget)
    A = reachable_abstraction(T, budget)
    d = block_length(A)
    G = build_game(A)
    sol = solve(G.game)
    winner = sol.winner(G.game.initial)
    has_color = T.alpha.has_color
    if prompt is None:
        prompt = has_color
    B = len(A.behaviors)
    sizes = {"dpa_states": dpa.num_states, "tracking_states": T.num_states,
             "domains": len(A.domains), "behaviors": B, "behavior_dfa_states": A.dfa_states,
             "game_vertices": G.game.num_vertices}
    verdict = Verdict(PLAYER_NAMES[winner], 2 * d, None, d, sizes, solution=sol, game=G, dpa=dpa)
    if winner == O:
        bound = compute_bound(A, d) if has_color else None
        verdict.bound = bound
        verdict.k = bound if prompt else None
        verdict.strategy = MealyStrategy(G, sol.strategies[O].choice, d)
        if check:
            verdict.report = verify(verdict.strategy, dpa, bound, budget)
    return verdict


def formula_dpa(phi: Formula, part: Partition, budget: int = DEFAULT_BUDGET) -> tuple[Dpa, str]:
    color = part.fresh_color()
    rel = logic.relativize(phi, color)
    nba = ltl_to_nba(rel, part.aps + (color,), budget)
    return determinize(nba, budget), color


def decide(phi: Formula, part: Partition, budget: int = DEFAULT_BUDGET, check: bool = True) -> Verdict:
    missing = logic.atoms(phi) - set(part.aps)
    if missing:
        raise ValueError(f"undeclared propositions: {sorted(missing)}")
    dpa, color = formula_dpa(phi, part, budget)
    return decide_dpa(dpa, part, color, prompt=not logic.is_ltl(phi), budget=budget, check=check)
