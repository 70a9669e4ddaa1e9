"""Tracking automaton, powerset projection and the behavior abstraction.

Tracking states are ``(q, m, t, s)``: a state of the base parity automaton,
the maximal color seen since the last reset, the last value ``t`` of the
coloring proposition (0/1) and the sticky change bit ``s``.  Internally
they are numbered and sets of them are int bitmasks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automata import Dpa
from .errors import CapacityError, InternalError
from .graphs import longest_path_from
from .logic import Partition

DEFAULT_BUDGET = 200_000


def upd(flag: tuple[int, int], t_new: int) -> tuple[int, int]:
    """Update ``(last color, changed)`` by the color of the next letter."""
    t, s = flag
    return (t_new, 0 if (s == 0 and t == t_new) else 1)


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Alphabet:
    """Maps (input letter, output letter) pairs onto letters of a base automaton.

    Input letters are masks over ``part.inputs``; output letters are masks
    over ``part.outputs`` followed by the coloring proposition when the base
    automaton mentions it.
    """

    def __init__(self, dpa: Dpa, part: Partition, color: str | None = None):
        color = color if color is not None else part.fresh_color()
        known = set(part.aps) | {color}
        extra = [x for x in dpa.aps if x not in known]
        if extra:
            raise ValueError(f"automaton propositions {extra} are not declared in the partition")
        self.inputs = tuple(part.inputs)
        self.has_color = color in dpa.aps
        self.color = color
        self.outputs = tuple(part.outputs) + ((color,) if self.has_color else ())
        self.num_inputs = 1 << len(self.inputs)
        self.num_outputs = 1 << len(self.outputs)
        self.color_bit = (1 << len(part.outputs)) if self.has_color else 0
        pos = {x: i for i, x in enumerate(dpa.aps)}

        def spread(mask, names):
            out = 0
            for i, x in enumerate(names):
                if mask >> i & 1 and x in pos:
                    out |= 1 << pos[x]
            return out

        ins = [spread(a, self.inputs) for a in range(self.num_inputs)]
        outs = [spread(b, self.outputs) for b in range(self.num_outputs)]
        self.combine = [[ia | ob for ob in outs] for ia in ins]

    def tcolor(self, b: int) -> int:
        return 1 if b & self.color_bit else 0

    def input_names(self, a: int) -> frozenset:
        return frozenset(x for i, x in enumerate(self.inputs) if a >> i & 1)

    def output_names(self, b: int) -> frozenset:
        return frozenset(x for i, x in enumerate(self.outputs) if b >> i & 1)

    def input_mask(self, names: Iterable[str]) -> int:
        names = set(names)
        return sum(1 << i for i, x in enumerate(self.inputs) if x in names)


class Tracking:
    """The tracking automaton, materialized on states reachable under resets."""

    def __init__(self, dpa: Dpa, part: Partition, color: str | None = None,
                 budget: int = DEFAULT_BUDGET):
        self.dpa = dpa
        self.part = part
        self.alpha = alpha = Alphabet(dpa, part, color)
        self.states: list[tuple[int, int, int, int]] = []
        self.index: dict = {}
        # per input letter: distinct (dpa letter, color) pairs with their least output letter
        self._moves = []
        for a in range(alpha.num_inputs):
            seen: dict = {}
            for b in range(alpha.num_outputs):
                seen.setdefault((alpha.combine[a][b], alpha.tcolor(b)), b)
            self._moves.append(list(seen))
        self.initial = self._add((dpa.initial, dpa.colors[dpa.initial], 0, 0), budget)
        self.succ_mask: list[list[int]] = []
        self.reset: list[int] = []
        i = 0
        while i < len(self.states):
            q, m, t, s = self.states[i]
            self.reset.append(self._add((q, dpa.colors[q], t, 0), budget))
            row = []
            for a in range(alpha.num_inputs):
                mask = 0
                for letter, tb in self._moves[a]:
                    mask |= 1 << self._add(self._delta(self.states[i], letter, tb), budget)
                row.append(mask)
            self.succ_mask.append(row)
            i += 1
        self._image_cache: dict = {}

    def _add(self, st, budget):
        x = self.index.get(st)
        if x is None:
            if len(self.states) >= budget:
                raise CapacityError("tracking", budget)
            x = self.index[st] = len(self.states)
            self.states.append(st)
        return x

    def _delta(self, st, letter, tb):
        q, m, t, s = st
        q2 = self.dpa.delta[q][letter]
        t2, s2 = upd((t, s), tb)
        return (q2, max(m, self.dpa.colors[q2]), t2, s2)

    @property
    def num_states(self) -> int:
        return len(self.states)

    def step(self, x: int, a: int, b: int) -> int:
        """Full transition on the combined letter (a, b)."""
        st = self._delta(self.states[x], self.alpha.combine[a][b], self.alpha.tcolor(b))
        return self.index[st]

    def priority(self, x: int) -> int:
        return self.states[x][1]

    def project(self, mask: int, a: int) -> int:
        """Powerset projection: image of a state set under input ``a`` and every output."""
        key = (mask, a)
        hit = self._image_cache.get(key)
        if hit is None:
            hit = 0
            for x in bits(mask):
                hit |= self.succ_mask[x][a]
            self._image_cache[key] = hit
        return hit

    def project_word(self, mask: int, word: Sequence[int]) -> int:
        for a in word:
            mask = self.project(mask, a)
        return mask

    def describe(self, x: int) -> str:
        q, m, t, s = self.states[x]
        return f"({q},{m},({'{' + self.alpha.color + '}' if t else '{}'},{s}))"


def build_tracking(dpa: Dpa, part: Partition, color: str | None = None,
                   budget: int = DEFAULT_BUDGET) -> Tracking:
    return Tracking(dpa, part, color, budget)


def project_step(T: Tracking, S: Iterable[int], a: int) -> frozenset:
    mask = 0
    for x in S:
        mask |= 1 << x
    return frozenset(bits(T.project(mask, a)))


@dataclass(frozen=True)
class Behavior:
    """A behavior: each domain element maps to the set of tracking states reachable."""

    domain: frozenset
    images: tuple  # sorted (state, frozenset) pairs

    def __call__(self, x: int) -> frozenset:
        return dict(self.images)[x]

    def as_dict(self) -> dict:
        return dict(self.images)


def behavior(T: Tracking, domain: Iterable[int], word: Sequence[int]) -> Behavior:
    word = list(word)
    if not word:
        raise ValueError("a behavior needs a nonempty input word")
    dom = frozenset(domain)
    if not dom:
        raise ValueError("a behavior needs a nonempty domain")
    images = tuple((x, frozenset(bits(T.project_word(1 << T.reset[x], word)))) for x in sorted(dom))
    return Behavior(dom, images)


class BehaviorDfa:
    """Deterministic automaton over input letters tracking one reset state set per key."""

    def __init__(self, T: Tracking, keys: tuple, budget: int):
        self.keys = keys
        self.pos = {k: i for i, k in enumerate(keys)}
        init = tuple(1 << k for k in keys)
        self.states = [init]
        self.index = {init: 0}
        self.delta: list[list[int]] = []
        i = 0
        n_in = T.alpha.num_inputs
        while i < len(self.states):
            cur = self.states[i]
            row = []
            for a in range(n_in):
                nxt = tuple(T.project(m, a) for m in cur)
                j = self.index.get(nxt)
                if j is None:
                    if len(self.states) >= budget:
                        raise CapacityError("behavior automaton", budget)
                    j = self.index[nxt] = len(self.states)
                    self.states.append(nxt)
                row.append(j)
            self.delta.append(row)
            i += 1
        self._classify()

    def _classify(self):
        from .graphs import cyclic_nodes, reachable
        n = len(self.states)

        def succ(v):
            return self.delta[v]

        cyc = cyclic_nodes(range(n), succ)
        inf = reachable(cyc, succ)
        self.infinite = [v in inf for v in range(n)]
        if self.infinite[0]:
            self.longest_finite = -1
        else:
            self.longest_finite = longest_path_from(
                0, lambda v: [w for w in set(self.delta[v]) if not self.infinite[w]])

    @property
    def block_length(self) -> int:
        return self.longest_finite + 1 if self.longest_finite >= 0 else 1

    def run(self, word, v: int = 0) -> int:
        for a in word:
            v = self.delta[v][a]
        return v

    def shortest_word(self, target: int) -> list[int]:
        """Shortest nonempty word leading from the initial tuple to ``target``."""
        from collections import deque
        parent: dict = {}
        queue = deque()
        for a, w in enumerate(self.delta[0]):
            if w not in parent:
                parent[w] = (None, a)
                queue.append(w)
        while queue:
            v = queue.popleft()
            if v == target:
                word = []
                while v is not None:
                    prev, a = parent[v]
                    word.append(a)
                    v = prev
                return word[::-1]
            for a, w in enumerate(self.delta[v]):
                if w not in parent:
                    parent[w] = (v, a)
                    queue.append(w)
        raise InternalError("behavior has no witness")


@dataclass
class AbstractBehavior:
    """A reachable infinite-witness behavior over a reachable domain."""

    domain: int  # index into Abstraction.domains
    dfa_state: int


class Abstraction:
    """Reachable part of the behavior abstraction.

    ``domains`` lists reachable domains (bitmasks of tracking states), the
    first being the singleton initial state.  ``behaviors`` lists the
    infinite-witness behaviors of each domain.
    """

    def __init__(self, T: Tracking, budget: int = DEFAULT_BUDGET):
        self.T = T
        self.budget = budget
        self.dfas: dict = {}
        self._by_mask: dict = {}
        self.domains: list[int] = []
        self.domain_index: dict = {}
        self.behaviors: list[AbstractBehavior] = []
        self.by_domain: list[list[int]] = []
        self._add_domain(1 << T.initial)
        i = 0
        while i < len(self.domains):
            dfa = self.dfa_for(self.domains[i])
            ids = []
            for v in range(len(dfa.states)):
                if dfa.infinite[v]:
                    ids.append(len(self.behaviors))
                    self.behaviors.append(AbstractBehavior(i, v))
                    for img in set(dfa.states[v]):
                        self._add_domain(img)
            self.by_domain.append(ids)
            if not ids:
                raise InternalError("a reachable domain has no infinite-witness behavior")
            i += 1

    def _add_domain(self, mask: int) -> int:
        j = self.domain_index.get(mask)
        if j is None:
            if len(self.domains) >= self.budget:
                raise CapacityError("abstraction domains", self.budget)
            j = self.domain_index[mask] = len(self.domains)
            self.domains.append(mask)
        return j

    def keys_of(self, domain_mask: int) -> tuple:
        return tuple(sorted({self.T.reset[x] for x in bits(domain_mask)}))

    def dfa_for(self, domain_mask: int) -> BehaviorDfa:
        dfa = self._by_mask.get(domain_mask)
        if dfa is not None:
            return dfa
        keys = self.keys_of(domain_mask)
        dfa = self.dfas.get(keys)
        if dfa is None:
            total = sum(len(d.states) for d in self.dfas.values())
            dfa = BehaviorDfa(self.T, keys, max(1, self.budget - total))
            self.dfas[keys] = dfa
        self._by_mask[domain_mask] = dfa
        return dfa

    def image(self, beh: int, x: int) -> int:
        """Mask of tracking states the behavior assigns to domain element ``x``."""
        b = self.behaviors[beh]
        dfa = self.dfa_for(self.domains[b.domain])
        return dfa.states[b.dfa_state][dfa.pos[self.T.reset[x]]]

    def behavior_of(self, domain: int, word: Sequence[int]) -> int | None:
        """Index of the behavior that ``word`` witnesses on ``domain`` (None if finite-witness)."""
        dfa = self.dfa_for(self.domains[domain])
        v = dfa.run(word)
        if not word or not dfa.infinite[v]:
            return None
        return self._lookup(domain, v)

    def _lookup(self, domain: int, v: int) -> int:
        if not hasattr(self, "_rev"):
            self._rev = {(b.domain, b.dfa_state): i for i, b in enumerate(self.behaviors)}
        return self._rev[(domain, v)]

    def as_behavior(self, beh: int) -> Behavior:
        b = self.behaviors[beh]
        dom = frozenset(bits(self.domains[b.domain]))
        return Behavior(dom, tuple((x, frozenset(bits(self.image(beh, x)))) for x in sorted(dom)))

    @property
    def block_length(self) -> int:
        return max(self.dfa_for(m).block_length for m in self.domains)

    @property
    def dfa_states(self) -> int:
        return sum(len(d.states) for d in self.dfas.values())


def reachable_abstraction(T: Tracking, budget: int = DEFAULT_BUDGET) -> Abstraction:
    return Abstraction(T, budget)


def block_length(abstraction: Abstraction) -> int:
    d = abstraction.block_length
    n = abstraction.T.num_states
    if n * n < 4096 and d > 2 ** (n * n):
        raise InternalError(f"block length {d} exceeds the 2^(n^2) bound for n={n}")
    return d


def shortest_witness(abstraction: Abstraction, beh: int) -> list[int]:
    b = abstraction.behaviors[beh]
    return abstraction.dfa_for(abstraction.domains[b.domain]).shortest_word(b.dfa_state)


def dump(abstraction: Abstraction) -> str:
    T = abstraction.T
    doc = {
        "tracking_states": T.num_states,
        "domains": [
            {
                "states": [T.describe(x) for x in bits(m)],
                "behaviors": len(abstraction.by_domain[i]),
                "dfa_states": len(abstraction.dfa_for(m).states),
                "finite_witness": sum(1 for f in abstraction.dfa_for(m).infinite if not f),
                "infinite_witness": sum(1 for f in abstraction.dfa_for(m).infinite if f),
                "block_length": abstraction.dfa_for(m).block_length,
            }
            for i, m in enumerate(abstraction.domains)
        ],
        "behaviors": len(abstraction.behaviors),
        "d": abstraction.block_length,
    }
    return json.dumps(doc, indent=2) + "\n"
