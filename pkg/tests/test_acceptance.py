"""Acceptance suite: one test per criterion, each printing a single pass/fail line."""

import itertools
import random
import time

from conftest import corpus_seconds
from corpus import CONDITIONS, partition_of
from gen import bad_cycle_reachable, brute_force_winners, random_formula, random_game, random_lasso, random_nba
from test_automata import profile_accepts
from test_lowerbounds import _trace, _values
from test_tracking import _exhaustive_block_check
from promptdelay import logic
from promptdelay.arena import I, O, solve
from promptdelay.automata import determinize, dpa_accepts, ltl_to_dpa
from promptdelay.logic import LassoWord, Partition, color, evaluate, is_ltl, parse_formula, relativize, size
from promptdelay.lowerbounds import find_bad_pair, gen_theorem2, gen_theorem3, theorem2_parts, w_sequence
from promptdelay.oracle import solve_prompt_explicit
from promptdelay.strategy import decide

ATOMS = ("a", "b")
PREDICT = "G ((b -> X a) & (X a -> b))"
REL_CONSTANT = 9  # |rel(phi)| <= 9 |phi|
SIZE_CONSTANT = 80  # |phi_n| <= 80 n^2 for the lower-bound families

LIMIT_1 = 60.0
LIMIT_2 = 300.0
LIMIT_3 = 120.0
LIMIT_6 = 900.0
LIMIT_9 = 60.0


# -- 1: alternating colors ------------------------------------------------------------------


def test_criterion_1_relativization_property(criterion):
    rng = random.Random(101)
    start = time.perf_counter()
    instances = forward = backward = 0
    violations = []
    while instances < 1000:
        phi = random_formula(rng, ATOMS, max_nodes=8)
        w = random_lasso(rng, ATOMS)
        k = rng.randint(0, 3)
        b = rng.randint(1, 4)
        rel = relativize(phi)
        instances += 1
        wc = color(w, b)
        holds_rel = evaluate(wc, rel)
        if b >= k and evaluate(w, phi, k):
            forward += 1
            if not holds_rel:
                violations.append(("forward", logic.to_text(phi), logic.format_lasso(w), k, b))
        if 1 <= k and b <= k and holds_rel:
            backward += 1
            if not evaluate(w, phi, 2 * k):
                violations.append(("backward", logic.to_text(phi), logic.format_lasso(w), k, b))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < LIMIT_1 and forward > 0 and backward > 0
    criterion(1, ok, f"{instances} instances ({forward} forward, {backward} backward premises), "
                     f"{len(violations)} violations, {elapsed:.1f}s < {LIMIT_1:.0f}s")
    assert ok, violations[:5]


# -- 2: determinization -----------------------------------------------------------------------


def _words(letters, lengths):
    for n in lengths:
        yield from itertools.product(range(letters), repeat=n)


def _u_key(nba, dpa, u):
    cur = {nba.initial}
    for a in u:
        cur = {t for q in cur for t in nba.succ(q, a)}
    return frozenset(cur), dpa.run(u)[-1]


def _v_key(nba, dpa, v):
    rel = []
    for p in range(nba.num_states):
        plain, marked = {p}, set()
        for a in v:
            plain2 = {t for q in plain for t in nba.succ(q, a)}
            marked = {t for q in marked for t in nba.succ(q, a)} | (plain2 & nba.accepting)
            plain = plain2
        rel.append((frozenset(plain), frozenset(marked)))
    trans = []
    for s in range(dpa.num_states):
        run = dpa.run(v, s)
        trans.append((run[-1], frozenset(run[1:])))
    return tuple(rel), tuple(trans)


def _classes(key, words):
    reps = {}
    for w in words:
        reps.setdefault(key(w), w)
    return list(reps.values())


def _lasso(aps, u, v):
    return LassoWord(tuple(logic.mask_letter(a, aps) for a in u), tuple(logic.mask_letter(a, aps) for a in v))


def test_criterion_2_determinization(criterion):
    """Acceptance of u.v^w depends only on the reachable NBA set and DPA state after u
    and on the NBA reachability profile and DPA state transformation of v, so one
    representative per pair of classes covers every lasso with |u|, |v| <= 4."""
    rng = random.Random(202)
    start = time.perf_counter()
    mismatches, pairs, covered = [], 0, 0
    for i in range(500):
        nba = random_nba(rng, ATOMS, max_states=4)
        dpa = determinize(nba)
        L = nba.num_letters
        us = _classes(lambda u: _u_key(nba, dpa, u), _words(L, range(5)))
        vs = _classes(lambda v: _v_key(nba, dpa, v), _words(L, range(1, 5)))
        covered += sum(L ** n for n in range(5)) * sum(L ** n for n in range(1, 5))
        for u in us:
            for v in vs:
                w = _lasso(nba.aps, u, v)
                pairs += 1
                if dpa_accepts(dpa, w) != profile_accepts(nba, w):
                    mismatches.append((i, logic.format_lasso(w)))
        if i % 50 == 0:  # spot-check the class argument on raw lassos
            for _ in range(40):
                w = random_lasso(rng, ATOMS)
                if dpa_accepts(dpa, w) != profile_accepts(nba, w):
                    mismatches.append((i, logic.format_lasso(w)))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < LIMIT_2
    criterion(2, ok, f"500 NBAs, {covered} lassos covered by {pairs} class representatives, "
                     f"{len(mismatches)} mismatches, {elapsed:.1f}s < {LIMIT_2:.0f}s")
    assert ok, mismatches[:5]


# -- 3: parity games ----------------------------------------------------------------------------


def test_criterion_3_parity_solver(criterion):
    rng = random.Random(303)
    start = time.perf_counter()
    bad = []
    for i in range(1000):
        game = random_game(rng, max_vertices=6, max_priority=rng.choice([3, 4, 6]))
        sol = solve(game)
        brute = brute_force_winners(game)
        if any(sol.winner(v) != brute[v] for v in range(game.num_vertices)):
            bad.append((i, "winner"))
            continue
        for player in (O, I):
            choice = sol.strategies[player].choice
            if any(bad_cycle_reachable(game, player, choice, v) for v in sol.regions[player]):
                bad.append((i, "strategy"))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < LIMIT_3
    criterion(3, ok, f"1000 games, {len(bad)} mismatches, {elapsed:.1f}s < {LIMIT_3:.0f}s")
    assert ok, bad[:5]


# -- 4: tracking ----------------------------------------------------------------------------------


def test_criterion_4_tracking(criterion, verdict_of):
    from test_tracking import tracking_mismatches
    rng = random.Random(404)
    per_entry = -(-1000 // len(CONDITIONS))
    total = bad = 0
    for i in range(len(CONDITIONS)):
        T = verdict_of(i)[2].game.abstraction.T
        bad += tracking_mismatches(T, rng, words=per_entry, max_len=12)
        total += per_entry
    ok = bad == 0 and total >= 1000
    criterion(4, ok, f"{total} words over {len(CONDITIONS)} tracking automata, {bad} mismatches")
    assert ok


# -- 5: block length ---------------------------------------------------------------------------------


def test_criterion_5_block_length(criterion, verdict_of):
    checked, failures = [], []
    for i, entry in enumerate(CONDITIONS):
        v = verdict_of(i)[2]
        A = v.game.abstraction
        n = A.T.num_states
        if v.d > 1 and (v.d - 1).bit_length() > n * n:  # d <= 2^(n^2)
            failures.append((i, "bound"))
        if A.T.alpha.num_inputs <= 2 and v.d <= 8:
            checked.append(i)
            if not _exhaustive_block_check(A, v.d):
                failures.append((i, "witness"))
    ok = not failures and len(checked) > 0
    criterion(5, ok, f"exhaustive check on {len(checked)} entries with one input and d <= 8, "
                     f"d <= 2^(n^2) on all {len(CONDITIONS)}; {len(failures)} failures")
    assert ok, failures


# -- 6: winner agreement --------------------------------------------------------------------------------


def _oracle_confirms(phi, part, v):
    """Whether the explicit game agrees with the pipeline verdict ``v``.

    An O win at smaller lookahead or bound carries over to larger ones, so for
    O it suffices to find some (f0', k') below the pipeline's parameters.
    """
    ks = [0] if is_ltl(phi) else range(0, 5)
    if v.winner == "O":
        for f0 in range(1, min(v.f0, 4) + 1):
            for k in ks:
                if v.k is not None and k > v.k:
                    break
                if solve_prompt_explicit(phi, part, k, f0).winner == "O":
                    return True, f"O at f0={f0}, k={k}"
        return False, "oracle found no O win"
    ks = [0] if is_ltl(phi) else [0, 3]
    for f0 in range(1, min(v.f0, 3) + 1):
        for k in ks:
            if solve_prompt_explicit(phi, part, k, f0).winner != "I":
                return False, f"oracle gives O at f0={f0}, k={k}"
    return True, "I throughout"


def test_criterion_6_winner_agreement(criterion, verdict_of):
    start = time.perf_counter()
    disagreements = []
    hand = 0
    for i, entry in enumerate(CONDITIONS):
        phi, part, v = verdict_of(i)
        hand += v.winner == entry[3]
        agree, why = _oracle_confirms(phi, part, v)
        if not agree or v.winner != entry[3]:
            disagreements.append((entry[0], v.winner, entry[3], why))
    elapsed = time.perf_counter() - start
    pipeline = sum(corpus_seconds.values())
    total = max(elapsed, pipeline)  # pipeline time is included in elapsed when not yet cached
    ok = not disagreements and len(CONDITIONS) >= 20 and total < LIMIT_6
    criterion(6, ok, f"{len(CONDITIONS)} conditions, {len(CONDITIONS) - len(disagreements)} agree with the oracle "
                     f"and {hand} with the argued winner; pipeline {pipeline:.1f}s, criterion {elapsed:.1f}s "
                     f"< {LIMIT_6:.0f}s")
    assert ok, disagreements


# -- 7: lookahead necessity --------------------------------------------------------------------------------


def test_criterion_7_lookahead_witness(criterion):
    part = Partition(("a",), ("b",))
    phi = parse_formula(PREDICT, part)
    w1 = solve_prompt_explicit(phi, part, 0, 1).winner
    w2 = solve_prompt_explicit(phi, part, 0, 2).winner
    dpa = ltl_to_dpa(phi, part.aps)
    assert dpa.num_states > 1
    v = decide(phi, part)
    ok = w1 == "I" and w2 == "O" and v.winner == "O" and v.f0 >= 2
    criterion(7, ok, f"oracle f0=1: {w1}, f0=2: {w2}; pipeline {v.winner} with f0={v.f0}")
    assert ok


# -- 8: strategy certification ------------------------------------------------------------------------------


def test_criterion_8_certification(criterion, verdict_of):
    wins, failures = 0, []
    for i, entry in enumerate(CONDITIONS):
        v = verdict_of(i)[2]
        if v.f0 != 2 * v.d:
            failures.append((entry[0], "f0"))
        if v.winner != "O":
            continue
        wins += 1
        rep = v.report
        if v.bound != 2 * (v.sizes["behaviors"] + 1) * v.d:
            failures.append((entry[0], "bound formula"))
        if rep is None or not rep.ok or not rep.parity_ok:
            failures.append((entry[0], "verification"))
        elif v.k is not None and (v.k != v.bound or not rep.bound_ok or rep.max_block > v.k // 2):
            failures.append((entry[0], "p-blocks"))
    ok = not failures and wins > 0
    criterion(8, ok, f"{wins} extracted strategies verified, {len(failures)} failures")
    assert ok, failures


# -- 9: lower bounds ------------------------------------------------------------------------------------------


def test_criterion_9_lower_bounds(criterion):
    start = time.perf_counter()
    problems = []
    for m in range(7):
        seq = w_sequence(m)
        if len(seq) != 2 ** (m + 1) - 1 or find_bad_pair(seq) is not None:
            problems.append(f"w_{m}")
    if not all(find_bad_pair(s) is not None for s in itertools.product(range(3), repeat=8)):
        problems.append("3^8 enumeration")
    sizes = []
    for n in range(1, 9):
        for gen in (gen_theorem2, gen_theorem3):
            phi, _ = gen(n)
            sizes.append(size(phi))
            if size(phi) > SIZE_CONSTANT * n * n:
                problems.append(f"size n={n}")
    parts = theorem2_parts(1)
    phi2, _ = gen_theorem2(1)
    phi3, _ = gen_theorem3(1)
    good = _trace([1, 0, 1], [1, 1, 1], left=0, right=4, sharp=5)
    wrong = _trace([1, 0, 1], [1, 3, 1], left=0, right=4, sharp=5)
    if not (all(_values(good, parts).values()) and evaluate(good, phi2)):
        problems.append("good trace")
    if evaluate(wrong, phi2) or _values(wrong, parts)["psi5"]:
        problems.append("copy error")
    if evaluate(good, phi3, 3) or not evaluate(good, phi3, 4):
        problems.append("prompt scope")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < LIMIT_9
    criterion(9, ok, f"w_0..w_6 bad-pair-free, 3^8 sequences all bad, max size {max(sizes)} "
                     f"<= {SIZE_CONSTANT} n^2, spot checks; {len(problems)} problems, "
                     f"{elapsed:.1f}s < {LIMIT_9:.0f}s")
    assert ok, problems


# -- 10: relativization shape ---------------------------------------------------------------------------------


def test_criterion_10_relativization_shape(criterion):
    p, np_, q = logic.atom("p"), logic.neg_atom("p"), logic.atom("q")
    expected = logic.conj(
        logic.conj(
            logic.conj(logic.disj(np_, logic.until(p, logic.until(np_, q))),
                       logic.disj(p, logic.until(np_, logic.until(p, q)))),
            logic.glob(logic.fin(p))),
        logic.glob(logic.fin(np_)))
    shape_ok = relativize(parse_formula("FP q")) == expected
    formulas = [parse_formula(e[0], partition_of(e)) for e in CONDITIONS]
    rng = random.Random(1010)
    formulas += [random_formula(rng, ATOMS, max_nodes=rng.randint(1, 12)) for _ in range(500)]
    formulas += [gen(n)[0] for n in range(1, 5) for gen in (gen_theorem2, gen_theorem3)]
    worst = max(size(relativize(f)) / size(f) for f in formulas)
    ok = shape_ok and worst <= REL_CONSTANT
    criterion(10, ok, f"rel(FP q) shape {'matches' if shape_ok else 'differs'}; max |rel(phi)|/|phi| = "
                      f"{worst:.2f} <= {REL_CONSTANT} over {len(formulas)} formulas")
    assert ok
