import itertools

import pytest

from promptdelay.logic import LassoWord, evaluate, is_ltl, parse_formula, size, to_text
from promptdelay.lowerbounds import (
    B_IN, B_OUT, LEFT, RIGHT, SHARP, BadPair, addressing_formulas, find_bad_pair, gen_theorem2, gen_theorem3,
    partition, theorem2_parts, w_sequence,
)

SIZE_CONSTANT = 80  # size(phi_n) <= 80 * n^2 for n <= 8


# -- sequences ------------------------------------------------------------------------------


def test_w_sequence_small():
    assert w_sequence(0) == [0]
    assert w_sequence(2) == [0, 1, 0, 2, 0, 1, 0]


@pytest.mark.parametrize("m", range(11))
def test_w_sequence_length(m):
    assert len(w_sequence(m)) == 2 ** (m + 1) - 1


@pytest.mark.parametrize("m", range(7))
def test_w_sequence_has_no_bad_pair(m):
    assert find_bad_pair(w_sequence(m)) is None


def test_bad_pair_examples():
    assert find_bad_pair([0, 0]) == BadPair(0, 1, 0)
    assert find_bad_pair([1, 0, 1]) == BadPair(0, 2, 1)
    assert find_bad_pair([1, 2, 1]) is None
    assert find_bad_pair([2, 1, 0, 1, 2]) == BadPair(1, 3, 1)


def _is_bad(seq, i, i2):
    return seq[i] == seq[i2] and all(x < seq[i] for x in seq[i + 1:i2])


def test_find_bad_pair_is_leftmost():
    for seq in itertools.product(range(3), repeat=6):
        pairs = [(i2, i) for i2 in range(len(seq)) for i in range(i2) if _is_bad(seq, i, i2)]
        got = find_bad_pair(seq)
        if not pairs:
            assert got is None
        else:
            i2, i = min(pairs)
            assert got == BadPair(i, i2, seq[i])


@pytest.mark.parametrize("m", [0, 1, 2])
def test_long_sequences_have_bad_pairs(m):
    n = 2 ** (m + 1)
    assert all(find_bad_pair(s) is not None for s in itertools.product(range(m + 1), repeat=n))


def test_range_checks():
    with pytest.raises(ValueError):
        w_sequence(-1)
    with pytest.raises(ValueError):
        gen_theorem2(0)


# -- addressing -----------------------------------------------------------------------------


def _lasso(prefix, loop):
    return LassoWord(tuple(map(frozenset, prefix)), tuple(map(frozenset, loop)))


def test_addressing_n1():
    _, psi0 = addressing_formulas(1)
    assert evaluate(_lasso([], [[], ["b0"]]), psi0)
    assert not evaluate(_lasso([], [["b0"], []]), psi0)


def test_addressing_n2_counter():
    _, psi0 = addressing_formulas(2)
    assert evaluate(_lasso([], [[], ["b0"], ["b1"], ["b0", "b1"]]), psi0)
    assert not evaluate(_lasso([], [[], ["b1"], ["b0"], ["b0", "b1"]]), psi0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_repeated_address_violates(n):
    _, psi0 = addressing_formulas(n)
    assert not evaluate(_lasso([[]], [[]]), psi0)


# -- the lower-bound families ------------------------------------------------------------------


def _trace(xs, ys, left=None, right=None, sharp=None):
    """n = 1 trace: block j spans positions 2j, 2j+1 and carries input xs[j], output ys[j].

    The loop is one further all-zero block without markers.
    """
    letters = []
    for j, (x, y) in enumerate(zip(xs, ys)):
        for bit in range(2):
            pos = 2 * j + bit
            a = set()
            if bit:
                a.add("b0")
            if x >> bit & 1:
                a.add(B_IN)
            if y >> bit & 1:
                a.add(B_OUT)
            if pos == left:
                a.add(LEFT)
            if pos == right:
                a.add(RIGHT)
            if pos == sharp:
                a.add(SHARP)
            letters.append(a)
    return _lasso(letters, [[], ["b0"]])


def _values(w, parts):
    return {name: evaluate(w, f) for name, f in parts.items()}


def test_correct_trace_satisfies_everything():
    parts = theorem2_parts(1)
    w = _trace([1, 0, 1], [1, 1, 1], left=0, right=4, sharp=5)
    assert all(_values(w, parts).values())
    phi, _ = gen_theorem2(1)
    assert evaluate(w, phi)


def test_copy_error_at_sharp_address():
    parts = theorem2_parts(1)
    w = _trace([1, 0, 1], [1, 3, 1], left=0, right=4, sharp=5)
    vals = _values(w, parts)
    assert not vals["psi5"]
    assert all(v for k, v in vals.items() if k != "psi5")
    phi, _ = gen_theorem2(1)
    assert not evaluate(w, phi)


def test_each_component_can_fail_alone():
    parts = theorem2_parts(1)
    cases = {
        "psi1": _with_extra_sharp(),
        "psi2": _trace([1, 0, 1], [1, 1, 1], left=1, right=4),
        "psi3": _trace([1, 0, 1], [1, 1, 1], left=0),
        "psi4": _trace([1, 1, 1], [1, 1, 1], left=0, right=4),
    }
    for name, w in cases.items():
        vals = _values(w, parts)
        assert not vals[name], name
        assert vals["psi0"], name


def _with_extra_sharp():
    w = _trace([1, 0, 1], [1, 1, 1], left=0, right=4, sharp=1)
    prefix = list(w.prefix)
    prefix[3] = prefix[3] | {SHARP}
    return LassoWord(tuple(prefix), w.loop)


def test_antecedent_false_makes_formula_true():
    phi, _ = gen_theorem2(1)
    broken = _lasso([[], []], [[]])  # addressing stops incrementing
    assert evaluate(broken, phi)


def test_prompt_family_adds_one_conjunct():
    phi2, _ = gen_theorem2(2)
    phi3, part = gen_theorem3(2)
    assert is_ltl(phi2) and not is_ltl(phi3)
    body2, body3 = phi2.children[1], phi3.children[1]
    assert set(_conjuncts(body3)) - set(_conjuncts(body2)) == {parse_formula(f"FP {RIGHT}")}
    assert len(_conjuncts(body3)) == len(_conjuncts(body2)) + 1
    assert part == partition(2)


def _conjuncts(f):
    if f.kind == "and":
        return _conjuncts(f.children[0]) + _conjuncts(f.children[1])
    return [f]


def test_prompt_family_scope():
    phi, _ = gen_theorem3(1)
    w = _trace([1, 0, 1], [1, 1, 1], left=0, right=4, sharp=5)
    assert not evaluate(w, phi, 3)
    assert evaluate(w, phi, 4)


@pytest.mark.parametrize("n", range(1, 9))
def test_sizes_fit_quadratic_bound(n):
    phi, part = gen_theorem2(n)
    assert size(phi) <= SIZE_CONSTANT * n * n
    assert parse_formula(to_text(phi), part) == phi


def test_partition_sides():
    part = partition(2)
    assert set(part.inputs) == {"b0", "b1", B_IN, SHARP}
    assert set(part.outputs) == {B_OUT, LEFT, RIGHT}
