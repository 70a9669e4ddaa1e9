"""Prompt-LTL formulas, ultimately periodic words and the alternating-color technique.

Formulas are kept in negation normal form: negation only ever sits on an
atom.  Nodes are hash-consed, so two structurally equal formulas are the
same Python object and comparisons/hashing are O(1).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FormulaSyntaxError

ATOM = "atom"
NEG = "neg"
AND = "and"
OR = "or"
NEXT = "next"
FINALLY = "finally"
GLOBALLY = "globally"
UNTIL = "until"
RELEASE = "release"
PROMPT = "prompt"

KINDS = (ATOM, NEG, AND, OR, NEXT, FINALLY, GLOBALLY, UNTIL, RELEASE, PROMPT)
UNARY = (NEXT, FINALLY, GLOBALLY, PROMPT)
BINARY = (AND, OR, UNTIL, RELEASE)

COLOR = "p"
IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")
KEYWORDS = frozenset({"X", "F", "G", "FP", "U", "R"})


class Formula:
    """A node of a Prompt-LTL syntax tree.

    Do not instantiate directly; use the constructor functions below, which
    intern nodes so that equality is identity.
    """

    __slots__ = ("kind", "children", "name", "_key", "__weakref__")

    def __init__(self, kind, children, name):
        self.kind = kind
        self.children = children
        self.name = name

    def __setattr__(self, key, value):
        if hasattr(self, "_key"):
            raise AttributeError("Formula nodes are immutable")
        object.__setattr__(self, key, value)

    @property
    def left(self):
        return self.children[0]

    @property
    def right(self):
        return self.children[1]

    @property
    def arg(self):
        return self.children[0]

    def __repr__(self):
        return f"Formula({to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    def __reduce__(self):
        return (_rebuild, (self.kind, self.children, self.name))


_TABLE: dict = {}


def _make(kind, children=(), name=None):
    key = (kind, tuple(id(c) for c in children), name)
    node = _TABLE.get(key)
    if node is None:
        node = Formula(kind, tuple(children), name)
        object.__setattr__(node, "_key", key)
        _TABLE[key] = node
    return node


def _rebuild(kind, children, name):
    return _make(kind, children, name)


def atom(name: str) -> Formula:
    return _make(ATOM, (), name)


def neg_atom(name: str) -> Formula:
    return _make(NEG, (), name)


def conj(a: Formula, b: Formula) -> Formula:
    return _make(AND, (a, b))


def disj(a: Formula, b: Formula) -> Formula:
    return _make(OR, (a, b))


def nxt(a: Formula) -> Formula:
    return _make(NEXT, (a,))


def fin(a: Formula) -> Formula:
    return _make(FINALLY, (a,))


def glob(a: Formula) -> Formula:
    return _make(GLOBALLY, (a,))


def until(a: Formula, b: Formula) -> Formula:
    return _make(UNTIL, (a, b))


def release(a: Formula, b: Formula) -> Formula:
    return _make(RELEASE, (a, b))


def prompt(a: Formula) -> Formula:
    return _make(PROMPT, (a,))


def conj_all(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for f in parts[1:]:
        out = conj(out, f)
    return out


def disj_all(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[0]
    for f in parts[1:]:
        out = disj(out, f)
    return out


def implies(a: Formula, b: Formula) -> Formula:
    """``a -> b`` as ``!a | b``; ``a`` must be free of prompt operators."""
    return disj(negate(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(implies(a, b), implies(b, a))


_DUAL = {AND: OR, OR: AND, UNTIL: RELEASE, RELEASE: UNTIL, FINALLY: GLOBALLY, GLOBALLY: FINALLY}


def negate(f: Formula) -> Formula:
    """Negation pushed down to the atoms.

    Raises ValueError if ``f`` contains a prompt-eventually, which has no
    dual in the logic.
    """
    memo: dict = {}

    def go(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == ATOM:
            out = neg_atom(g.name)
        elif k == NEG:
            out = atom(g.name)
        elif k == NEXT:
            out = nxt(go(g.arg))
        elif k in (FINALLY, GLOBALLY):
            out = _make(_DUAL[k], (go(g.arg),))
        elif k in (AND, OR, UNTIL, RELEASE):
            out = _make(_DUAL[k], (go(g.left), go(g.right)))
        else:
            raise ValueError("cannot negate a formula containing FP")
        memo[g] = out
        return out

    return go(f)


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents."""
    seen = set()
    order = []
    stack = [(f, False)]
    while stack:
        g, done = stack.pop()
        if done:
            order.append(g)
            continue
        if g in seen:
            continue
        seen.add(g)
        stack.append((g, True))
        for c in reversed(g.children):
            if c not in seen:
                stack.append((c, False))
    return order


def size(f: Formula) -> int:
    return len(subformulas(f))


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if g.kind in (ATOM, NEG))


def is_ltl(f: Formula) -> bool:
    return all(g.kind != PROMPT for g in subformulas(f))


# -- printing -----------------------------------------------------------------

_PREC = {OR: 1, AND: 2, UNTIL: 3, RELEASE: 3}
_OPS = {OR: "|", AND: "&", UNTIL: "U", RELEASE: "R"}
_UNOPS = {NEXT: "X", FINALLY: "F", GLOBALLY: "G", PROMPT: "FP"}


def to_text(f: Formula) -> str:
    """Render in the surface grammar; ``parse_formula`` inverts this exactly."""
    memo: dict = {}

    def go(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == ATOM:
            out = g.name
        elif k == NEG:
            out = "!" + g.name
        elif k in _UNOPS:
            inner = go(g.arg)
            if g.arg.kind in BINARY:
                inner = f"({inner})"
            out = f"{_UNOPS[k]} {inner}"
        else:
            prec = _PREC[k]
            left, right = go(g.left), go(g.right)
            lk, rk = g.left.kind, g.right.kind
            if k in (UNTIL, RELEASE):
                # right associative
                if lk in BINARY:
                    left = f"({left})"
                if rk in BINARY and _PREC[rk] < prec:
                    right = f"({right})"
            else:
                # left associative
                if lk in BINARY and _PREC[lk] < prec:
                    left = f"({left})"
                if rk in BINARY and _PREC[rk] <= prec:
                    right = f"({right})"
            out = f"{left} {_OPS[k]} {right}"
        memo[g] = out
        return out

    return go(f)


# -- parsing ------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Split of the atomic propositions between the two players."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        names = self.inputs + self.outputs
        for name in names:
            if not IDENT.match(name) or name in KEYWORDS:
                raise ValueError(f"invalid proposition name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError("inputs and outputs must be disjoint and free of duplicates")

    @property
    def aps(self) -> tuple[str, ...]:
        return self.inputs + self.outputs

    def fresh_color(self, preferred: str = COLOR) -> str:
        """A proposition name not used by this partition."""
        used = set(self.aps)
        if preferred not in used:
            return preferred
        i = 1
        while f"{preferred}{i}" in used:
            i += 1
        return f"{preferred}{i}"


_TOKEN = re.compile(r"\s*(?:(->)|([!&|()])|([a-zA-Z][a-zA-Z0-9_]*))")


def _tokenize(text):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, part):
        self.tokens = _tokenize(text)
        self.i = 0
        self.declared = None if part is None else set(part.aps)

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][1]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok, pos = self.take()
        if tok != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {tok!r}", pos)

    def parse(self):
        f = self.implication()
        if self.peek() != "<end>":
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    def implication(self):
        start = self.pos()
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            right = self.implication()
            if not is_ltl(left):
                raise FormulaSyntaxError("antecedent of '->' must not contain FP", start)
            return disj(negate(left), right)
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = disj(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.temporal()
        while self.peek() == "&":
            self.take()
            f = conj(f, self.temporal())
        return f

    def temporal(self):
        f = self.unary()
        if self.peek() in ("U", "R"):
            op = self.take()[0]
            g = self.temporal()
            return until(f, g) if op == "U" else release(f, g)
        return f

    def unary(self):
        tok, pos = self.take()
        if tok == "!":
            inner = self.unary()
            if not is_ltl(inner):
                raise FormulaSyntaxError("negation over a prompt operator", pos)
            return negate(inner)
        if tok == "X":
            return nxt(self.unary())
        if tok == "F":
            return fin(self.unary())
        if tok == "G":
            return glob(self.unary())
        if tok == "FP":
            return prompt(self.unary())
        if tok == "(":
            f = self.implication()
            self.expect(")")
            return f
        if tok in KEYWORDS or not IDENT.match(tok):
            raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)
        if self.declared is not None and tok not in self.declared:
            raise FormulaSyntaxError(f"undeclared proposition {tok!r}", pos)
        return atom(tok)


def parse_formula(text: str, part: Partition | None = None) -> Formula:
    """Parse the surface syntax into a negation-normal-form formula.

    Every proposition must be declared in ``part`` (skipped when ``part`` is
    None).
    """
    return _Parser(text, part).parse()


# -- ultimately periodic words ---------------------------------------------------


def _letter(x) -> frozenset:
    return x if isinstance(x, frozenset) else frozenset(x)


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``prefix . loop^omega``; letters are sets of names."""

    prefix: tuple[frozenset, ...]
    loop: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(_letter(a) for a in self.prefix))
        object.__setattr__(self, "loop", tuple(_letter(a) for a in self.loop))
        if not self.loop:
            raise ValueError("the loop of a lasso must be nonempty")

    @property
    def span(self) -> int:
        """Number of canonical positions, ``|u| + |v|``."""
        return len(self.prefix) + len(self.loop)

    def canonical(self, i: int) -> int:
        u = len(self.prefix)
        if i < u:
            return i
        return u + (i - u) % len(self.loop)

    def letter(self, i: int) -> frozenset:
        i = self.canonical(i)
        u = len(self.prefix)
        return self.prefix[i] if i < u else self.loop[i - u]

    def successor(self, i: int) -> int:
        i = self.canonical(i) + 1
        return i if i < self.span else len(self.prefix)

    def props(self) -> frozenset:
        out = frozenset()
        for a in self.prefix + self.loop:
            out |= a
        return out

    def project(self, keep) -> "LassoWord":
        keep = frozenset(keep)
        return LassoWord(tuple(a & keep for a in self.prefix), tuple(a & keep for a in self.loop))

    def drop(self, name: str) -> "LassoWord":
        return LassoWord(tuple(a - {name} for a in self.prefix), tuple(a - {name} for a in self.loop))

    def __str__(self):
        return format_lasso(self)


def _fmt_letter(a):
    return "{" + ",".join(sorted(a)) + "}"


def format_lasso(w: LassoWord) -> str:
    """``{a} {} ; {b}`` style: prefix letters, a semicolon, loop letters."""
    pre = " ".join(_fmt_letter(a) for a in w.prefix)
    loop = " ".join(_fmt_letter(a) for a in w.loop)
    return f"{pre} ; {loop}".strip()


_LETTER = re.compile(r"\{([^{}]*)\}")


def parse_lasso(text: str) -> LassoWord:
    if text.count(";") != 1:
        raise ValueError("a lasso needs exactly one ';' between prefix and loop")
    pre, loop = text.split(";")

    def letters(part):
        rest = _LETTER.sub("", part).strip()
        if rest:
            raise ValueError(f"unexpected text {rest!r} in lasso")
        out = []
        for m in _LETTER.finditer(part):
            names = [s.strip() for s in m.group(1).split(",") if s.strip()]
            for n in names:
                if not IDENT.match(n):
                    raise ValueError(f"invalid proposition {n!r} in lasso")
            out.append(frozenset(names))
        return tuple(out)

    return LassoWord(letters(pre), letters(loop))


# -- semantics ----------------------------------------------------------------


def _until_vector(w, left, right):
    n, u = w.span, len(w.prefix)
    succ = [w.successor(i) for i in range(n)]
    val = list(right)
    for _ in range(2):
        for i in range(n - 1, u - 1, -1):
            val[i] = right[i] or (left[i] and val[succ[i]])
    for i in range(u - 1, -1, -1):
        val[i] = right[i] or (left[i] and val[succ[i]])
    return val


def _release_vector(w, left, right):
    n, u = w.span, len(w.prefix)
    succ = [w.successor(i) for i in range(n)]
    val = list(right)
    for _ in range(2):
        for i in range(n - 1, u - 1, -1):
            val[i] = right[i] and (left[i] or val[succ[i]])
    for i in range(u - 1, -1, -1):
        val[i] = right[i] and (left[i] or val[succ[i]])
    return val


def truth_table(w: LassoWord, f: Formula, k: int = 0) -> dict:
    """Truth vector over the canonical positions for every subformula of ``f``."""
    n = w.span
    succ = [w.successor(i) for i in range(n)]
    letters = [w.letter(i) for i in range(n)]
    table: dict = {}
    for g in subformulas(f):
        kind = g.kind
        if kind == ATOM:
            val = [g.name in a for a in letters]
        elif kind == NEG:
            val = [g.name not in a for a in letters]
        elif kind == AND:
            a, b = table[g.left], table[g.right]
            val = [x and y for x, y in zip(a, b)]
        elif kind == OR:
            a, b = table[g.left], table[g.right]
            val = [x or y for x, y in zip(a, b)]
        elif kind == NEXT:
            a = table[g.arg]
            val = [a[succ[i]] for i in range(n)]
        elif kind == FINALLY:
            val = _until_vector(w, [True] * n, table[g.arg])
        elif kind == GLOBALLY:
            val = _release_vector(w, [False] * n, table[g.arg])
        elif kind == UNTIL:
            val = _until_vector(w, table[g.left], table[g.right])
        elif kind == RELEASE:
            val = _release_vector(w, table[g.left], table[g.right])
        else:
            a = table[g.arg]
            val = []
            for i in range(n):
                # beyond |u| + |v| steps only already-seen positions recur
                steps = min(k, n - i + len(w.loop))
                j, hit = i, a[i]
                for _ in range(steps):
                    if hit:
                        break
                    j = succ[j]
                    hit = a[j]
                val.append(hit)
        table[g] = val
    return table


def evaluate(w: LassoWord, f: Formula, k: int = 0, position: int = 0) -> bool:
    """Whether ``(w, position, k)`` satisfies ``f``."""
    if position < 0 or k < 0:
        raise ValueError("position and bound must be non-negative")
    return truth_table(w, f, k)[f][w.canonical(position)]


# -- alternating colors -----------------------------------------------------------


def relativize_inner(f: Formula, color: str = COLOR) -> Formula:
    """Replace every ``FP g`` by the two-block until pattern over ``color``."""
    p, not_p = atom(color), neg_atom(color)
    memo: dict = {}

    def go(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        if g.kind in (ATOM, NEG):
            out = g
        elif g.kind == PROMPT:
            body = go(g.arg)
            out = conj(
                disj(not_p, until(p, until(not_p, body))),
                disj(p, until(not_p, until(p, body))),
            )
        else:
            out = _make(g.kind, tuple(go(c) for c in g.children))
        memo[g] = out
        return out

    return go(f)


def relativize(f: Formula, color: str = COLOR) -> Formula:
    """The LTL formula that additionally demands infinitely many color changes."""
    if color in atoms(f):
        raise ValueError(f"coloring proposition {color!r} already occurs in the formula")
    inner = relativize_inner(f, color)
    return conj(conj(inner, glob(fin(atom(color)))), glob(fin(neg_atom(color))))


def expand_prompt(f: Formula, k: int) -> Formula:
    """Rewrite each ``FP g`` as ``g | X g | ... | X^k g`` (nested right-leaning)."""
    memo: dict = {}

    def go(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        if g.kind in (ATOM, NEG):
            out = g
        elif g.kind == PROMPT:
            body = go(g.arg)
            out = body
            for _ in range(k):
                out = disj(body, nxt(out))
        else:
            out = _make(g.kind, tuple(go(c) for c in g.children))
        memo[g] = out
        return out

    return go(f)


@dataclass(frozen=True)
class ChangePoints:
    """Change points of a lasso.

    ``initial`` lists the change points below ``start``; from ``start`` on the
    positions in ``periodic`` (all in ``[start, start + period)``) repeat
    with the given period.
    """

    initial: frozenset
    periodic: frozenset
    start: int
    period: int

    def upto(self, limit: int) -> list[int]:
        out = sorted(i for i in self.initial if i < limit)
        base = self.start
        while self.periodic and base < limit:
            out.extend(sorted(base + (i - self.start) for i in self.periodic if base + (i - self.start) < limit))
            base += self.period
        return out

    @property
    def infinite(self) -> bool:
        return bool(self.periodic)


def change_points(w: LassoWord, color: str = COLOR) -> ChangePoints:
    u, v = len(w.prefix), len(w.loop)
    start = u + v  # from here on the predecessor of every position is in the loop

    def is_change(i):
        return i == 0 or ((color in w.letter(i)) != (color in w.letter(i - 1)))

    initial = frozenset(i for i in range(start) if is_change(i))
    periodic = frozenset(i for i in range(start, start + v) if is_change(i))
    return ChangePoints(initial, periodic, start, v)


def block_lengths(w: LassoWord, color: str = COLOR) -> tuple[list[int], bool]:
    """Lengths of the p-blocks up to the first repetition of the periodic part.

    Returns ``(lengths, infinite_last)``; when the word has only finitely many
    change points the final block is infinite and ``infinite_last`` is True
    (its length is then not included).
    """
    cp = change_points(w, color)
    if not cp.infinite:
        pts = sorted(cp.initial)
        return [b - a for a, b in zip(pts, pts[1:])], True
    pts = cp.upto(cp.start + 2 * cp.period + 1)
    return [b - a for a, b in zip(pts, pts[1:])], False


def is_k_bounded(w: LassoWord, k: int, color: str = COLOR) -> bool:
    lengths, infinite_last = block_lengths(w, color)
    return not infinite_last and all(n <= k for n in lengths)


def is_k_spaced(w: LassoWord, k: int, color: str = COLOR) -> bool:
    lengths, infinite_last = block_lengths(w, color)
    return not infinite_last and all(n >= k for n in lengths)


def color(w: LassoWord, block_len: int, color_name: str = COLOR) -> LassoWord:
    """p-coloring whose p-blocks all have exactly ``block_len`` positions.

    The first block is a ``!p`` block; the loop is stretched to a multiple
    of ``2 * block_len`` so the coloring stays ultimately periodic.
    """
    if block_len < 1:
        raise ValueError("block length must be positive")
    if any(color_name in a for a in w.prefix + w.loop):
        raise ValueError(f"word already mentions {color_name!r}")
    u = len(w.prefix)
    period = math.lcm(len(w.loop), 2 * block_len)

    def colored(i):
        a = w.letter(i)
        return a | {color_name} if (i // block_len) % 2 == 1 else a

    return LassoWord(tuple(colored(i) for i in range(u)), tuple(colored(u + j) for j in range(period)))


def letter_mask(letter, aps: Sequence[str]) -> int:
    return sum(1 << i for i, name in enumerate(aps) if name in letter)


def mask_letter(mask: int, aps: Sequence[str]) -> frozenset:
    return frozenset(name for i, name in enumerate(aps) if mask >> i & 1)
