"""Graph helpers: reachability and strongly connected components."""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable


def reachable(starts: Iterable[Hashable], succ: Callable) -> set:
    seen = set(starts)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def sccs(nodes: Iterable[Hashable], succ: Callable) -> list[list]:
    """Tarjan's algorithm without recursion; SCCs come out in reverse topological order."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def cyclic_nodes(nodes: Iterable[Hashable], succ: Callable) -> set:
    """Nodes lying on at least one cycle (self-loops count)."""
    out = set()
    for comp in sccs(nodes, succ):
        if len(comp) > 1:
            out.update(comp)
        else:
            v = comp[0]
            if v in set(succ(v)):
                out.add(v)
    return out


def longest_path_from(start: Hashable, succ: Callable) -> int:
    """Length in edges of the longest path from ``start`` in an acyclic graph."""
    order = []
    seen = {start}
    work = [(start, iter(succ(start)))]
    while work:
        v, it = work[-1]
        for w in it:
            if w not in seen:
                seen.add(w)
                work.append((w, iter(succ(w))))
                break
        else:
            work.pop()
            order.append(v)
    best: dict = {}
    for v in order:  # post-order: successors first
        best[v] = max((best[w] + 1 for w in succ(v)), default=0)
    return best[start]


def find_path(start: Hashable, goal: Callable, succ_edges: Callable, allowed=None):
    """Shortest path (BFS) from ``start`` to a node satisfying ``goal``.

    ``succ_edges(v)`` yields ``(label, w)`` pairs; returns the list of
    ``(label, w)`` steps, or None.
    """
    if goal(start):
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for label, w in succ_edges(v):
            if w in parent or (allowed is not None and w not in allowed):
                continue
            parent[w] = (v, label)
            if goal(w):
                path = []
                x = w
                while parent[x] is not None:
                    pv, lab = parent[x]
                    path.append((lab, x))
                    x = pv
                path.reverse()
                return path
            queue.append(w)
    return None
