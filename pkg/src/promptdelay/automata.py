"""Büchi and parity automata over explicit letters.

A letter is an int bitmask over the automaton's ordered proposition list
``aps``: bit ``i`` is set iff ``aps[i]`` holds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from typing import Sequence

from . import logic
from .errors import AutomatonFormatError, CapacityError
from .graphs import cyclic_nodes, reachable, sccs
from .logic import (AND, ATOM, FINALLY, GLOBALLY, NEG, NEXT, OR, RELEASE, UNTIL, Formula,
                    LassoWord, letter_mask)

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class Nba:
    aps: tuple[str, ...]
    num_states: int
    initial: int
    accepting: frozenset
    transitions: dict = field(hash=False, compare=True)  # (state, letter) -> frozenset

    @property
    def num_letters(self) -> int:
        return 1 << len(self.aps)

    def succ(self, q: int, a: int) -> frozenset:
        return self.transitions.get((q, a), frozenset())

    def is_deterministic(self) -> bool:
        return all(len(t) <= 1 for t in self.transitions.values())


@dataclass(frozen=True)
class Dpa:
    """Deterministic, complete max-parity automaton with state colors."""

    aps: tuple[str, ...]
    num_states: int
    initial: int
    delta: tuple  # delta[q][letter] -> q'
    colors: tuple

    def __post_init__(self):
        if not 0 <= self.initial < self.num_states:
            raise ValueError("initial state out of range")
        if len(self.delta) != self.num_states or len(self.colors) != self.num_states:
            raise ValueError("transition table or coloring does not cover all states")
        for row in self.delta:
            if len(row) != self.num_letters or any(not 0 <= t < self.num_states for t in row):
                raise ValueError("transition function must be total and deterministic")

    @property
    def num_letters(self) -> int:
        return 1 << len(self.aps)

    def run(self, letters, q=None) -> list[int]:
        q = self.initial if q is None else q
        out = [q]
        for a in letters:
            q = self.delta[q][a]
            out.append(q)
        return out


@dataclass(frozen=True)
class Dfa:
    num_states: int
    num_letters: int
    initial: int
    delta: tuple
    accepting: frozenset

    def run(self, letters, q=None) -> int:
        q = self.initial if q is None else q
        for a in letters:
            q = self.delta[q][a]
        return q


def lasso_masks(w: LassoWord, aps: Sequence[str]):
    allowed = frozenset(aps)
    for a in w.prefix + w.loop:
        if not a <= allowed:
            raise ValueError(f"letter {sorted(a)} uses propositions outside {list(aps)}")
    return ([letter_mask(a, aps) for a in w.prefix], [letter_mask(a, aps) for a in w.loop])


# -- acceptance -------------------------------------------------------------------


def dpa_accepts(d: Dpa, w: LassoWord) -> bool:
    prefix, loop = lasso_masks(w, d.aps)
    q = d.initial
    for a in prefix:
        q = d.delta[q][a]
    seen = {}
    maxes = []
    while q not in seen:
        seen[q] = len(maxes)
        m = -1
        for a in loop:
            q = d.delta[q][a]
            m = max(m, d.colors[q])
        maxes.append(m)
    return max(maxes[seen[q]:]) % 2 == 0


def nba_accepts(nba: Nba, w: LassoWord) -> bool:
    prefix, loop = lasso_masks(w, nba.aps)
    letters = prefix + loop
    u, n = len(prefix), len(letters)

    def succ(node):
        q, i = node
        j = i + 1 if i + 1 < n else u
        return [(t, j) for t in nba.succ(q, letters[i])]

    nodes = reachable([(nba.initial, 0)], succ)
    return any(q in nba.accepting for q, _ in cyclic_nodes(nodes, succ))


# -- LTL to Büchi ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def entails(g: Formula, f: Formula) -> bool:
    """Sound (incomplete) syntactic check that ``g`` implies ``f``."""
    if g is f:
        return True
    fk, gk = f.kind, g.kind
    if fk == AND:
        return entails(g, f.left) and entails(g, f.right)
    if fk == OR and (entails(g, f.left) or entails(g, f.right)):
        return True
    if gk == AND and (entails(g.left, f) or entails(g.right, f)):
        return True
    if gk == OR:
        return entails(g.left, f) and entails(g.right, f)
    if fk == FINALLY:
        if entails(g, f.arg):
            return True
        if gk in (FINALLY, NEXT) and entails(g.arg, f if gk == NEXT else f.arg):
            return True
    if fk == GLOBALLY and gk == GLOBALLY and entails(g.arg, f.arg):
        return True
    if fk == NEXT:
        if gk == NEXT and entails(g.arg, f.arg):
            return True
        if gk == GLOBALLY and entails(g, f.arg):
            return True
    if fk == UNTIL:
        if entails(g, f.right):
            return True
        if gk == UNTIL and entails(g.left, f.left) and entails(g.right, f.right):
            return True
    if fk == RELEASE:
        if gk == RELEASE and entails(g.left, f.left) and entails(g.right, f.right):
            return True
        if gk == GLOBALLY and entails(g.arg, f.right):
            return True
    if gk == GLOBALLY and entails(g.arg, f):
        return True
    if gk == RELEASE and entails(g.right, f):
        return True
    return False


@lru_cache(maxsize=None)
def _has_eventuality(f: Formula) -> bool:
    if f.kind in (FINALLY, UNTIL):
        return True
    return any(_has_eventuality(c) for c in f.children)


def _reduce_set(formulas) -> frozenset:
    """Drop formulas implied by others.

    Only eventuality-free formulas are dropped: a pending ``F``/``U``
    obligation must stay in the state so that acceptance can track it,
    even when another formula (say ``G X F b``) implies it.
    """
    fs = list(formulas)
    keep = []
    for i, f in enumerate(fs):
        if _has_eventuality(f):
            keep.append(f)
            continue
        implied = False
        for j, g in enumerate(fs):
            if i == j:
                continue
            if entails(g, f) and (not entails(f, g) or j < i):
                implied = True
                break
        if not implied:
            keep.append(f)
    return frozenset(keep)


class _Tableau:
    """Expansion of NNF formulas into disjunctive normal forms of one step.

    A term is ``(pos, neg, nxt, postponed)``: propositions that must hold,
    must not hold, obligations for the next position, and eventualities
    whose fulfilment was deferred by this step.
    """

    def __init__(self, aps):
        self.bit = {name: 1 << i for i, name in enumerate(aps)}
        self.memo: dict = {}

    @staticmethod
    def _prune(terms):
        terms = list(dict.fromkeys(terms))
        out = []
        for t in terms:
            dominated = False
            for s in terms:
                if s is t or s == t:
                    continue
                if s[0] & t[0] == s[0] and s[1] & t[1] == s[1] and s[2] <= t[2] and s[3] <= t[3]:
                    dominated = True
                    break
            if not dominated:
                out.append(t)
        return out

    def _and(self, xs, ys):
        out = []
        for a, b in cartesian(xs, ys):
            pos, neg = a[0] | b[0], a[1] | b[1]
            if pos & neg:
                continue
            out.append((pos, neg, a[2] | b[2], a[3] | b[3]))
        return self._prune(out)

    def expand(self, f: Formula):
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        k = f.kind
        none = frozenset()
        if k == ATOM:
            out = [(self.bit[f.name], 0, none, none)]
        elif k == NEG:
            out = [(0, self.bit[f.name], none, none)]
        elif k == AND:
            out = self._and(self.expand(f.left), self.expand(f.right))
        elif k == OR:
            out = self._prune(self.expand(f.left) + self.expand(f.right))
        elif k == NEXT:
            out = [(0, 0, frozenset([f.arg]), none)]
        elif k == FINALLY:
            out = self._prune(self.expand(f.arg) + [(0, 0, frozenset([f]), frozenset([f]))])
        elif k == GLOBALLY:
            out = self._and(self.expand(f.arg), [(0, 0, frozenset([f]), none)])
        elif k == UNTIL:
            later = self._and(self.expand(f.left), [(0, 0, frozenset([f]), frozenset([f]))])
            out = self._prune(self.expand(f.right) + later)
        elif k == RELEASE:
            either = self._prune(self.expand(f.left) + [(0, 0, frozenset([f]), none)])
            out = self._and(self.expand(f.right), either)
        else:
            raise ValueError("the tableau only handles LTL; relativize or expand FP first")
        self.memo[f] = out
        return out

    def state_terms(self, state: frozenset):
        terms = [(0, 0, frozenset(), frozenset())]
        for f in sorted(state, key=logic.to_text):
            terms = self._and(terms, self.expand(f))
            if not terms:
                break
        return terms


def _dominated(t, others):
    nxt, post = t
    for s in others:
        if s is not t and s != t and s[0] <= nxt and s[1] <= post:
            return True
    return False


def ltl_to_nba(f: Formula, aps: Sequence[str], budget: int = DEFAULT_BUDGET) -> Nba:
    """Tableau translation of an LTL formula into a state-based Büchi automaton."""
    aps = tuple(aps)
    if not logic.is_ltl(f):
        raise ValueError("ltl_to_nba expects an LTL formula (no FP)")
    missing = logic.atoms(f) - set(aps)
    if missing:
        raise ValueError(f"formula mentions propositions outside the alphabet: {sorted(missing)}")
    tab = _Tableau(aps)
    letters = range(1 << len(aps))
    reduce_cache: dict = {}

    def reduced(s):
        r = reduce_cache.get(s)
        if r is None:
            r = reduce_cache[s] = _reduce_set(s)
        return r

    # generalized Büchi automaton with transition acceptance, explored on the fly
    start = reduced(frozenset([f]))
    index = {start: 0}
    states = [start]
    edges: list = []  # per state: letter -> list of (target, postponed)
    i = 0
    while i < len(states):
        s = states[i]
        i += 1
        terms = [(pos, neg, reduced(nx), post) for pos, neg, nx, post in tab.state_terms(s)]
        row = {}
        for a in letters:
            apt = [(t[2], t[3]) for t in terms if a & t[0] == t[0] and not a & t[1]]
            apt = list(dict.fromkeys(apt))
            apt = [t for t in apt if not _dominated(t, apt)]
            for nx, _ in apt:
                if nx not in index:
                    if len(states) >= budget:
                        raise CapacityError("ltl_to_nba", budget)
                    index[nx] = len(states)
                    states.append(nx)
            row[a] = [(index[nx], post) for nx, post in apt]
        edges.append(row)

    events = sorted({e for row in edges for lst in row.values() for _, post in lst for e in post},
                    key=logic.to_text)
    m = len(events)

    # degeneralize: (state, level); level m marks an accepting visit
    def advance(level, post):
        j = 0 if level == m else level
        while j < m and events[j] not in post:
            j += 1
        return j

    start_node = (0, m if m == 0 else 0)
    node_index = {start_node: 0}
    nodes = [start_node]
    trans: dict = {}
    i = 0
    while i < len(nodes):
        q, level = nodes[i]
        src = i
        i += 1
        for a, lst in edges[q].items():
            targets = set()
            for t, post in lst:
                node = (t, advance(level, post))
                if node not in node_index:
                    if len(nodes) >= budget:
                        raise CapacityError("ltl_to_nba", budget)
                    node_index[node] = len(nodes)
                    nodes.append(node)
                targets.add(node_index[node])
            if targets:
                trans[(src, a)] = frozenset(targets)
    accepting = frozenset(i for i, (_, level) in enumerate(nodes) if level == m)
    nba = Nba(aps, len(nodes), 0, accepting, trans)
    return reduce_nba(nba)


def reduce_nba(nba: Nba) -> Nba:
    """Drop states with empty language and merge bisimilar states."""
    n, letters = nba.num_states, range(nba.num_letters)

    def succ(q):
        return {t for a in letters for t in nba.succ(q, a)}

    reach = reachable([nba.initial], succ)
    live_cycles = set()
    for comp in sccs(reach, succ):
        cyc = len(comp) > 1 or comp[0] in succ(comp[0])
        if cyc and any(q in nba.accepting for q in comp):
            live_cycles.update(comp)
    preds: dict = {q: set() for q in reach}
    for q in reach:
        for t in succ(q):
            preds[t].add(q)
    useful = reachable(live_cycles, lambda q: preds[q])
    keep = sorted(useful | {nba.initial})
    # bisimulation refinement
    block = {q: int(q in nba.accepting) for q in keep}
    while True:
        sig = {}
        for q in keep:
            key = (block[q],) + tuple(
                frozenset(block[t] for t in nba.succ(q, a) if t in useful) for a in letters)
            sig[q] = key
        ids: dict = {}
        new = {q: ids.setdefault(sig[q], len(ids)) for q in keep}
        if len(ids) == len(set(block.values())):
            block = new
            break
        block = new
    order: dict = {}
    for q in [nba.initial] + keep:
        order.setdefault(block[q], len(order))
    trans: dict = {}
    for q in keep:
        src = order[block[q]]
        for a in letters:
            tg = frozenset(order[block[t]] for t in nba.succ(q, a) if t in useful)
            if tg:
                trans[(src, a)] = tg
    acc = frozenset(order[block[q]] for q in keep if q in nba.accepting)
    return Nba(nba.aps, len(order), 0, acc, trans)


# -- determinization --------------------------------------------------------------------


def _safra_step(tree, a, image, fmask):
    """One step on a Safra tree; returns ``(tree', min_event_color or None)``.

    ``tree`` is a tuple of ``(parent_rank, label_mask)`` indexed by rank, where
    rank is the creation order among living nodes.  Killing the node of
    rank ``r`` yields color ``2r + 1``, turning it green yields ``2r + 2``
    (min-parity, smaller is more important).
    """
    old = len(tree)
    parent = [p for p, _ in tree]
    label = [lab for _, lab in tree]
    for r in range(old):
        acc = label[r] & fmask
        if acc:
            parent.append(r)
            label.append(acc)
    total = len(parent)
    label = [image(lab, a) for lab in label]
    children = [[] for _ in range(total)]
    for r in range(1, total):
        children[parent[r]].append(r)
    # horizontal merge: a state stays only in the oldest branch holding it
    _merge(0, 0, label, children)
    if label[0] == 0:
        return None, None
    alive = [lab != 0 for lab in label]
    # descendants of removed nodes have empty labels already
    green = [False] * total
    order = [0]
    i = 0
    while i < len(order):
        r = order[i]
        i += 1
        kids = [c for c in children[r] if alive[c]]
        if kids:
            union = 0
            for c in kids:
                union |= label[c]
            if union == label[r]:
                green[r] = True
                sub = list(kids)
                while sub:
                    c = sub.pop()
                    alive[c] = False
                    sub.extend(children[c])
                continue
            order.extend(kids)
    event = None
    for r in range(old):
        if not alive[r]:
            c = 2 * r + 1
        elif green[r]:
            c = 2 * r + 2
        else:
            continue
        if event is None or c < event:
            event = c
    ranks = [r for r in range(total) if alive[r]]
    newrank = {r: i for i, r in enumerate(ranks)}
    new_tree = tuple((newrank[parent[r]] if r else -1, label[r]) for r in ranks)
    return new_tree, event


def _merge(r, forbidden, label, children):
    label[r] &= ~forbidden
    cum = forbidden
    for c in children[r]:  # children are listed oldest first
        _merge(c, cum, label, children)
        cum |= label[c]


def determinize(nba: Nba, budget: int = DEFAULT_BUDGET) -> Dpa:
    """Safra-tree determinization emitting max-parity colors on states."""
    letters = nba.num_letters
    n = max(nba.num_states, 1)
    if nba.is_deterministic():
        return _complete_deterministic(nba)
    succ_mask = [[0] * letters for _ in range(nba.num_states)]
    for (q, a), ts in nba.transitions.items():
        m = 0
        for t in ts:
            m |= 1 << t
        succ_mask[q][a] = m
    cache: dict = {}

    def image(mask, a):
        key = (mask, a)
        hit = cache.get(key)
        if hit is None:
            hit = 0
            x, q = mask, 0
            while x:
                if x & 1:
                    hit |= succ_mask[q][a]
                x >>= 1
                q += 1
            cache[key] = hit
        return hit

    fmask = 0
    for q in nba.accepting:
        fmask |= 1 << q
    quiet = 2 * n + 1  # min-parity color when nothing happens
    top = 2 * n + 2  # max color = top - min color keeps parity

    start = (((-1, 1 << nba.initial),), quiet)
    index = {start: 0}
    states = [start]
    delta = []
    step_cache: dict = {}
    i = 0
    while i < len(states):
        tree, _ = states[i]
        i += 1
        row = []
        for a in range(letters):
            key = (tree, a)
            res = step_cache.get(key)
            if res is None:
                if tree is None:
                    res = (None, quiet)
                else:
                    nt, ev = _safra_step(tree, a, image, fmask)
                    res = (nt, quiet if ev is None else ev)
                step_cache[key] = res
            st = res
            if st not in index:
                if len(states) >= budget:
                    raise CapacityError("determinize", budget)
                index[st] = len(states)
                states.append(st)
            row.append(index[st])
        delta.append(tuple(row))
    colors = tuple(top - c for _, c in states)
    return reduce_dpa(Dpa(nba.aps, len(states), 0, tuple(delta), colors))


def _complete_deterministic(nba: Nba) -> Dpa:
    letters = nba.num_letters
    sink = nba.num_states
    delta = []
    for q in range(nba.num_states):
        delta.append(tuple(next(iter(nba.succ(q, a))) if nba.succ(q, a) else sink for a in range(letters)))
    delta.append(tuple([sink] * letters))
    colors = tuple(2 if q in nba.accepting else 1 for q in range(nba.num_states)) + (1,)
    return reduce_dpa(Dpa(nba.aps, nba.num_states + 1, nba.initial, tuple(delta), colors))


def reduce_dpa(d: Dpa) -> Dpa:
    """Restrict to reachable states, compress colors per SCC, merge bisimilar states."""
    d = _restrict_reachable(d)
    d = _reduce_colors(d)
    d = _quotient(d)
    return _reduce_colors(d)


def _restrict_reachable(d: Dpa) -> Dpa:
    reach = reachable([d.initial], lambda q: set(d.delta[q]))
    order = sorted(reach, key=lambda q: (q != d.initial, q))
    idx = {q: i for i, q in enumerate(order)}
    delta = tuple(tuple(idx[t] for t in d.delta[q]) for q in order)
    colors = tuple(d.colors[q] for q in order)
    return Dpa(d.aps, len(order), 0, delta, colors)


def _reduce_colors(d: Dpa) -> Dpa:
    new = [0] * d.num_states

    def process(nodes):
        nodes = set(nodes)
        best = -1

        def succ(q):
            return [t for t in set(d.delta[q]) if t in nodes]

        for comp in sccs(nodes, succ):
            if len(comp) == 1 and comp[0] not in succ(comp[0]):
                continue
            c = max(d.colors[q] for q in comp)
            top = [q for q in comp if d.colors[q] == c]
            inner = process([q for q in comp if d.colors[q] != c])
            par = c % 2
            v = par if inner < 0 else (inner if inner % 2 == par else inner + 1)
            for q in top:
                new[q] = v
            best = max(best, v)
        return best

    process(range(d.num_states))
    return Dpa(d.aps, d.num_states, d.initial, d.delta, tuple(new))


def _quotient(d: Dpa) -> Dpa:
    block = list(d.colors)
    count = len(set(block))
    while True:
        ids: dict = {}
        new = [ids.setdefault((block[q],) + tuple(block[t] for t in d.delta[q]), len(ids))
               for q in range(d.num_states)]
        block = new
        if len(ids) == count:
            break
        count = len(ids)
    order: dict = {}
    reps: dict = {}
    for q in [d.initial] + list(range(d.num_states)):
        if block[q] not in order:
            order[block[q]] = len(order)
            reps[block[q]] = q
    inv = sorted(order, key=order.get)
    delta = tuple(tuple(order[block[t]] for t in d.delta[reps[b]]) for b in inv)
    colors = tuple(d.colors[reps[b]] for b in inv)
    return Dpa(d.aps, len(inv), 0, delta, colors)


def ltl_to_dpa(f: Formula, aps: Sequence[str], budget: int = DEFAULT_BUDGET) -> Dpa:
    return determinize(ltl_to_nba(f, aps, budget), budget)


def dpa_constant(aps: Sequence[str], color: int) -> Dpa:
    """One-state automaton accepting everything (even color) or nothing (odd)."""
    aps = tuple(aps)
    return Dpa(aps, 1, 0, (tuple([0] * (1 << len(aps))),), (color,))


# -- file format ----------------------------------------------------------------------------


def write_automaton(aut) -> str:
    """Serialize as a JSON document with one transition per line."""
    if isinstance(aut, Dpa):
        head = {"type": "dpa", "aps": list(aut.aps), "states": aut.num_states,
                "initial": aut.initial, "colors": list(aut.colors)}
        rows = [[q, a, aut.delta[q][a]] for q in range(aut.num_states) for a in range(aut.num_letters)]
    elif isinstance(aut, Nba):
        head = {"type": "nba", "aps": list(aut.aps), "states": aut.num_states,
                "initial": aut.initial, "accepting": sorted(aut.accepting)}
        rows = [[q, a, sorted(ts)] for (q, a), ts in sorted(aut.transitions.items()) if ts]
    else:
        raise TypeError(f"cannot serialize {type(aut).__name__}")
    lines = ["{"]
    for key, value in head.items():
        lines.append(f"  {json.dumps(key)}: {json.dumps(value)},")
    lines.append('  "transitions": [')
    body = [f"    {json.dumps(r)}" for r in rows]
    lines.append(",\n".join(body))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _need(doc, key, kind, where="document"):
    if key not in doc:
        raise AutomatonFormatError(f"missing field {key!r}", where)
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise AutomatonFormatError(f"field {key!r} has the wrong type", where)
    return value


def read_automaton(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AutomatonFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise AutomatonFormatError("top level must be an object")
    kind = _need(doc, "type", str)
    aps = _need(doc, "aps", list)
    if not all(isinstance(x, str) and logic.IDENT.match(x) for x in aps) or len(set(aps)) != len(aps):
        raise AutomatonFormatError("aps must be distinct identifiers", "aps")
    n = _need(doc, "states", int)
    init = _need(doc, "initial", int)
    if n < 1 or not 0 <= init < n:
        raise AutomatonFormatError("initial state out of range", "initial")
    rows = _need(doc, "transitions", list)
    letters = 1 << len(aps)

    def check_state(x, where):
        if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
            raise AutomatonFormatError(f"state {x!r} out of range", where)

    def check_letter(x, where):
        if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < letters:
            raise AutomatonFormatError(f"letter {x!r} out of range", where)

    if kind == "dpa":
        colors = _need(doc, "colors", list)
        if len(colors) != n or not all(isinstance(c, int) and c >= 0 for c in colors):
            raise AutomatonFormatError("need one non-negative color per state", "colors")
        table = [[None] * letters for _ in range(n)]
        for i, row in enumerate(rows):
            where = f"transitions[{i}]"
            if not isinstance(row, list) or len(row) != 3:
                raise AutomatonFormatError("expected [source, letter, target]", where)
            check_state(row[0], where)
            check_letter(row[1], where)
            check_state(row[2], where)
            if table[row[0]][row[1]] is not None:
                raise AutomatonFormatError("duplicate transition", where)
            table[row[0]][row[1]] = row[2]
        for q in range(n):
            for a in range(letters):
                if table[q][a] is None:
                    raise AutomatonFormatError(f"no transition for state {q} letter {a}", "transitions")
        return Dpa(tuple(aps), n, init, tuple(tuple(r) for r in table), tuple(colors))
    if kind == "nba":
        acc = _need(doc, "accepting", list)
        for x in acc:
            check_state(x, "accepting")
        trans: dict = {}
        for i, row in enumerate(rows):
            where = f"transitions[{i}]"
            if not isinstance(row, list) or len(row) != 3 or not isinstance(row[2], list):
                raise AutomatonFormatError("expected [source, letter, [targets]]", where)
            check_state(row[0], where)
            check_letter(row[1], where)
            for t in row[2]:
                check_state(t, where)
            key = (row[0], row[1])
            if key in trans:
                raise AutomatonFormatError("duplicate transition", where)
            if row[2]:
                trans[key] = frozenset(row[2])
        return Nba(tuple(aps), n, init, frozenset(acc), trans)
    raise AutomatonFormatError(f"unknown automaton type {kind!r}", "type")
