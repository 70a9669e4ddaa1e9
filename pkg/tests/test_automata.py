import itertools
import json
import random

import pytest

from gen import all_lassos, random_formula, random_lasso, random_nba
from promptdelay import logic
from promptdelay.automata import (
    Dpa, Nba, determinize, dpa_accepts, dpa_constant, lasso_masks, ltl_to_dpa, ltl_to_nba, nba_accepts,
    read_automaton, reduce_dpa, write_automaton,
)
from promptdelay.errors import AutomatonFormatError
from promptdelay.logic import parse_formula, parse_lasso


def profile_accepts(nba: Nba, w) -> bool:
    """Acceptance through reachability relations of the prefix and the loop.

    ``R[p]`` is the set of states reachable from ``p`` by reading the loop
    once and ``Acc[p]`` those reachable while visiting an accepting state.
    The word is accepted iff some state reached after the prefix and some
    loop iterations lies on an ``Acc``-cycle of the iterated relation.
    """
    prefix, loop = lasso_masks(w, nba.aps)
    n = nba.num_states
    cur = {nba.initial}
    for a in prefix:
        cur = {t for q in cur for t in nba.succ(q, a)}
    R, Acc = {}, {}
    for p in range(n):
        plain, marked = {p}, set()
        for a in loop:
            plain2 = {t for q in plain for t in nba.succ(q, a)}
            marked2 = {t for q in marked for t in nba.succ(q, a)}
            marked = marked2 | {t for t in plain2 if t in nba.accepting}
            plain = plain2
        R[p], Acc[p] = plain, marked
    seen = set(cur)
    frontier = list(cur)
    while frontier:
        q = frontier.pop()
        for t in R[q]:
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    for p in seen:
        # p lies on an accepting cycle iff p is reachable from some Acc-successor of p
        stack = list(Acc[p])
        reach = set(stack)
        while stack:
            q = stack.pop()
            if q == p:
                return True
            for t in R[q]:
                if t not in reach:
                    reach.add(t)
                    stack.append(t)
    return False


def test_profile_oracle_agrees_with_nba_accepts():
    rng = random.Random(1)
    for _ in range(150):
        nba = random_nba(rng, ("a",))
        for _ in range(30):
            w = random_lasso(rng, ["a"])
            assert nba_accepts(nba, w) == profile_accepts(nba, w)


# -- translation ---------------------------------------------------------------------------


def test_globally_single_state():
    nba = ltl_to_nba(parse_formula("G p"), ("p",))
    assert nba.num_states == 1
    for w in all_lassos(["p"], 3, 3):
        assert nba_accepts(nba, w) == all("p" in a for a in w.prefix + w.loop)


def test_tautology_accepts_everything():
    nba = ltl_to_nba(parse_formula("p | !p"), ("p",))
    assert all(nba_accepts(nba, w) for w in all_lassos(["p"], 2, 2))


def test_finally_examples():
    nba = ltl_to_nba(parse_formula("F p"), ("p",))
    assert nba_accepts(nba, parse_lasso("{} ; {p}"))
    assert not nba_accepts(nba, parse_lasso("; {}"))


def test_translation_rejects_prompt():
    with pytest.raises(ValueError):
        ltl_to_nba(parse_formula("FP p"), ("p",))


def test_translation_agrees_with_semantics():
    rng = random.Random(5)
    for _ in range(150):
        f = random_formula(rng, ["a", "b"], 8, prompt=False)
        nba = ltl_to_nba(f, ("a", "b"))
        dpa = determinize(nba)
        for _ in range(15):
            w = random_lasso(rng, ["a", "b"])
            truth = logic.evaluate(w, f)
            assert nba_accepts(nba, w) == truth, (logic.to_text(f), str(w))
            assert dpa_accepts(dpa, w) == truth, (logic.to_text(f), str(w))


# -- acceptance ------------------------------------------------------------------------------


def test_dpa_acceptance_examples():
    w_all = list(all_lassos(["a"], 2, 2))
    assert all(dpa_accepts(dpa_constant(("a",), 0), w) for w in w_all)
    assert not any(dpa_accepts(dpa_constant(("a",), 1), w) for w in w_all)
    toggle = Dpa(("a",), 2, 0, ((1, 1), (0, 0)), (1, 2))
    assert dpa_accepts(toggle, parse_lasso("; {}"))


def test_letters_outside_alphabet_rejected():
    with pytest.raises(ValueError):
        dpa_accepts(dpa_constant(("a",), 0), parse_lasso("; {b}"))
    with pytest.raises(ValueError):
        nba_accepts(ltl_to_nba(parse_formula("a"), ("a",)), parse_lasso("; {b}"))


def test_dpa_shape_is_total():
    with pytest.raises(ValueError):
        Dpa(("a",), 1, 0, ((0,),), (0,))
    with pytest.raises(ValueError):
        Dpa(("a",), 1, 0, ((0, 1),), (0,))


# -- determinization -------------------------------------------------------------------------


def test_determinize_deterministic_input():
    trans = {(0, 0): frozenset({1}), (0, 1): frozenset({0}), (1, 0): frozenset({1}), (1, 1): frozenset({0})}
    nba = Nba(("a",), 2, 0, frozenset({0, 1}), trans)
    dpa = determinize(nba)
    assert all(dpa_accepts(dpa, w) for w in all_lassos(["a"], 3, 3))


def test_determinize_finally():
    nba = ltl_to_nba(parse_formula("F p"), ("p",))
    dpa = determinize(nba)
    for w in all_lassos(["p"], 3, 3):
        assert dpa_accepts(dpa, w) == any("p" in a for a in w.prefix + w.loop)


def test_determinize_random_small():
    rng = random.Random(9)
    lassos = list(all_lassos(["a"], 3, 3))
    for _ in range(120):
        nba = random_nba(rng, ("a",))
        dpa = determinize(nba)
        for w in lassos:
            assert dpa_accepts(dpa, w) == profile_accepts(nba, w)


def test_determinize_needs_parity():
    # F G a has no deterministic Buchi automaton: the DPA must use odd colors above even ones
    dpa = ltl_to_dpa(parse_formula("F G a"), ("a",))
    for w in all_lassos(["a"], 2, 3):
        assert dpa_accepts(dpa, w) == all("a" in x for x in w.loop)
    assert len(set(dpa.colors)) >= 2


def test_reduce_dpa_preserves_language():
    rng = random.Random(4)
    lassos = list(all_lassos(["a", "b"], 2, 2))
    for _ in range(30):
        f = random_formula(rng, ["a", "b"], 7, prompt=False)
        dpa = ltl_to_dpa(f, ("a", "b"))
        red = reduce_dpa(dpa)
        assert red.num_states <= dpa.num_states
        for w in lassos:
            assert dpa_accepts(red, w) == dpa_accepts(dpa, w)


# -- file format -----------------------------------------------------------------------------


def _corpus_automata():
    out = []
    for text in ["G p", "F p", "G F p", "F G p", "p U q", "G (p -> X q)"]:
        f = parse_formula(text)
        nba = ltl_to_nba(f, ("p", "q"))
        out += [nba, determinize(nba)]
    return out


def _normal(aut):
    if isinstance(aut, Nba):
        return (aut.aps, aut.num_states, aut.initial, aut.accepting,
                {k: v for k, v in aut.transitions.items() if v})
    return aut


@pytest.mark.parametrize("aut", _corpus_automata())
def test_round_trip(aut):
    text = write_automaton(aut)
    back = read_automaton(text)
    assert _normal(back) == _normal(aut)
    assert write_automaton(back) == text


def test_hand_written_dpa():
    text = """{
      "type": "dpa", "aps": ["a"], "states": 1, "initial": 0, "colors": [0],
      "transitions": [[0, 0, 0], [0, 1, 0]]
    }"""
    assert read_automaton(text) == Dpa(("a",), 1, 0, ((0, 0),), (0,))


@pytest.mark.parametrize("doc, where", [
    ('{"type": "dpa"', "line 1"),
    ('{"type": "dpa", "aps": ["a"], "states": 1, "initial": 0, "colors": [0], "transitions": [[0, 0, 0]]}',
     "transitions"),
    ('{"type": "dpa", "aps": ["a"], "states": 1, "initial": 3, "colors": [0], "transitions": []}', "initial"),
    ('{"type": "dpa", "aps": ["a"], "states": 1, "initial": 0, "colors": [0], '
     '"transitions": [[0, 0, 0], [0, 5, 0]]}', "transitions[1]"),
    ('{"type": "nba", "aps": ["a"], "states": 1, "initial": 0, "accepting": [2], "transitions": []}',
     "accepting"),
    ('{"type": "dfa", "aps": [], "states": 1, "initial": 0, "transitions": []}', "type"),
])
def test_malformed_files_report_location(doc, where):
    with pytest.raises(AutomatonFormatError) as info:
        read_automaton(doc)
    assert where in str(info.value.location)


def test_letter_encoding_is_bitset_over_aps():
    dpa = ltl_to_dpa(parse_formula("G (a & !b)"), ("a", "b"))
    doc = json.loads(write_automaton(dpa))
    assert doc["aps"] == ["a", "b"]
    good = {row[0] for row in doc["transitions"] if row[1] == 0b01 and doc["colors"][row[2]] % 2 == 0}
    assert dpa.initial in good
    for letters in itertools.product(range(4), repeat=2):
        pass  # every letter index is within 0..3 by construction
    assert all(0 <= row[1] < 4 for row in doc["transitions"])
