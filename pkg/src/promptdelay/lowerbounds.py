"""Lower-bound formula families and their combinatorial substrate.

Positions carry an ``n``-bit address (little-endian over ``b0 .. b{n-1}``).
A block is a maximal run of addresses ``0 .. 2^n - 1``; the bits ``bI``
(input) and ``bO`` (output) of a block encode a number, least significant
bit at address 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .logic import (Formula, Partition, atom, conj, conj_all, disj, disj_all, fin, glob, iff, implies,
                    neg_atom, nxt, prompt, release, until)

MAX_N = 64
MAX_M = 20

SHARP = "sharp"
LEFT = "left_mark"
RIGHT = "right_mark"
B_IN = "bI"
B_OUT = "bO"


@dataclass(frozen=True)
class BadPair:
    i: int
    i2: int
    j: int


def w_sequence(m: int) -> list[int]:
    """``w_0 = 0`` and ``w_j = w_{j-1} j w_{j-1}``."""
    if not 0 <= m <= MAX_M:
        raise ValueError(f"m must lie in [0, {MAX_M}]")
    w = [0]
    for j in range(1, m + 1):
        w = w + [j] + w
    return w


def find_bad_pair(seq: Sequence[int]) -> BadPair | None:
    """Leftmost pair (by right end) of equal values with only smaller values between them."""
    stack: list[int] = []  # indices with non-increasing values from bottom to top
    for i2, x in enumerate(seq):
        if x < 0:
            raise ValueError("sequence entries must be non-negative")
        while stack and seq[stack[-1]] < x:
            stack.pop()
        if stack and seq[stack[-1]] == x:
            return BadPair(stack[-1], i2, x)
        stack.append(i2)
    return None


def address_props(n: int) -> list[str]:
    return [f"b{j}" for j in range(n)]


def _check_n(n: int):
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must lie in [1, {MAX_N}]")


def addressing_formulas(n: int) -> tuple[Formula, Formula]:
    """``(psi_inc, psi_0)``: the address increments by one modulo ``2^n`` and starts at zero."""
    _check_n(n)
    bs = [atom(x) for x in address_props(n)]
    parts = []
    for j in range(n):
        lower = conj_all(bs[:j]) if j else None
        flip = iff(bs[j], nxt(neg_atom(f"b{j}")))
        keep = iff(bs[j], nxt(bs[j]))
        if lower is None:
            parts.append(flip)
        else:
            parts.append(conj(implies(lower, flip), disj(lower, keep)))
    inc = conj_all(parts)
    zero = conj_all([neg_atom(x) for x in address_props(n)])
    return inc, conj(zero, glob(inc))


def _addr_zero(n):
    return conj_all([neg_atom(x) for x in address_props(n)])


def _addr_max(n):
    return conj_all([atom(x) for x in address_props(n)])


def _eq_block(n):
    eq = iff(atom(B_IN), atom(B_OUT))
    return until(eq, conj(eq, _addr_max(n)))


def _lt_block(n):
    eq = iff(atom(B_IN), atom(B_OUT))
    top = _addr_max(n)
    decisive = conj(conj(neg_atom(B_IN), atom(B_OUT)), disj(top, nxt(until(eq, conj(eq, top)))))
    return until(disj_all([neg_atom(x) for x in address_props(n)]), decisive)


def _exactly_once_at_block(mark: str, n: int) -> Formula:
    here = conj_all([atom(mark), _addr_zero(n), _eq_block(n), nxt(glob(neg_atom(mark)))])
    return until(neg_atom(mark), here)


def theorem2_parts(n: int) -> dict:
    _check_n(n)
    _, psi0 = addressing_formulas(n)
    psi1 = glob(implies(atom(SHARP), nxt(glob(neg_atom(SHARP)))))
    psi2 = _exactly_once_at_block(LEFT, n)
    psi3 = conj(until(neg_atom(RIGHT), conj(atom(LEFT), neg_atom(RIGHT))), _exactly_once_at_block(RIGHT, n))
    between = release(atom(RIGHT), disj(atom(RIGHT), implies(_addr_zero(n), _lt_block(n))))
    psi4 = glob(implies(atom(LEFT), nxt(between)))
    same = conj_all([
        disj(conj(atom(b), fin(conj(atom(SHARP), atom(b)))),
             conj(neg_atom(b), fin(conj(atom(SHARP), neg_atom(b)))))
        for b in address_props(n)
    ])
    hi, lo = conj(same, atom(B_OUT)), conj(same, neg_atom(B_OUT))
    psi5 = conj(glob(implies(hi, glob(implies(same, atom(B_OUT))))),
                glob(implies(lo, glob(implies(same, neg_atom(B_OUT))))))
    return {"psi0": psi0, "psi1": psi1, "psi2": psi2, "psi3": psi3, "psi4": psi4, "psi5": psi5}


def partition(n: int) -> Partition:
    return Partition(tuple(address_props(n)) + (B_IN, SHARP), (B_OUT, LEFT, RIGHT))


def gen_theorem2(n: int) -> tuple[Formula, Partition]:
    p = theorem2_parts(n)
    body = conj_all([p["psi2"], p["psi3"], p["psi4"], p["psi5"]])
    return implies(conj(p["psi0"], p["psi1"]), body), partition(n)


def gen_theorem3(n: int) -> tuple[Formula, Partition]:
    p = theorem2_parts(n)
    body = conj_all([p["psi2"], p["psi3"], p["psi4"], p["psi5"], prompt(atom(RIGHT))])
    return implies(conj(p["psi0"], p["psi1"]), body), partition(n)
