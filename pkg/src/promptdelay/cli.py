"""Command-line frontend.

Exit codes: 0 when Player O wins (or the command succeeded), 10 when
Player I wins, 2 on malformed input, capacity overruns and other errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import logic, lowerbounds, oracle, strategy
from .automata import DEFAULT_BUDGET, Dpa, determinize, ltl_to_nba, read_automaton, write_automaton
from .errors import CapacityError, PromptDelayError
from .logic import Partition

EXIT_O, EXIT_I, EXIT_ERROR = 0, 10, 2


class UsageError(Exception):
    pass


def _names(text):
    if text is None:
        return ()
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _partition(args, required=True) -> Partition | None:
    if args.inputs is None and args.outputs is None:
        if required:
            raise UsageError("--inputs and --outputs are required")
        return None
    return Partition(_names(args.inputs), _names(args.outputs))


def _formula(args, part):
    if not args.formula:
        raise UsageError("--formula is required")
    return logic.parse_formula(args.formula, part)


def _load_dpa(path) -> Dpa:
    aut = read_automaton(Path(path).read_text())
    if not isinstance(aut, Dpa):
        raise UsageError("--dpa expects a parity automaton file")
    return aut


def _emit(args, text: str):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _say(msg: str):
    print(msg, file=sys.stderr)


# -- subcommands --------------------------------------------------------------------------


def cmd_solve(args) -> int:
    part = _partition(args)
    if args.dpa:
        verdict = strategy.decide_dpa(_load_dpa(args.dpa), part, budget=args.budget_states)
    else:
        verdict = strategy.decide(_formula(args, part), part, budget=args.budget_states)
    _emit(args, verdict.to_json())
    summary = f"winner {verdict.winner}; f0 = {verdict.f0}"
    if verdict.k is not None:
        summary += f"; k = {verdict.k}"
    if verdict.report is not None:
        summary += "; strategy verified" if verdict.report.ok else f"; VERIFICATION FAILED: {verdict.report.reason}"
    _say(summary)
    return EXIT_O if verdict.winner == "O" else EXIT_I


def cmd_oracle(args) -> int:
    part = _partition(args)
    f0 = args.f0 if args.f0 is not None else 1
    if args.dpa:
        res = oracle.solve_explicit(_load_dpa(args.dpa), part, f0, args.budget_states)
        k = None
    else:
        phi = _formula(args, part)
        k = args.k if args.k is not None else 0
        res = oracle.solve_prompt_explicit(phi, part, k, f0, args.budget_states)
    _emit(args, json.dumps({"winner": res.winner, "f0": f0, "k": k, "vertices": res.vertices}) + "\n")
    _say(f"winner {res.winner} with lookahead {f0}" + (f" and bound {k}" if k is not None else ""))
    return EXIT_O if res.winner == "O" else EXIT_I


def cmd_gen(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    gens = {"thm2": lowerbounds.gen_theorem2, "thm3": lowerbounds.gen_theorem3}
    if args.family not in gens:
        raise UsageError("--family must be thm2 or thm3")
    phi, part = gens[args.family](args.n)
    doc = {"family": args.family, "n": args.n, "formula": logic.to_text(phi),
           "inputs": list(part.inputs), "outputs": list(part.outputs), "size": logic.size(phi)}
    _emit(args, json.dumps(doc, indent=1) + "\n")
    return 0


def cmd_relativize(args) -> int:
    part = _partition(args, required=False)
    phi = _formula(args, part)
    color = part.fresh_color() if part else logic.COLOR
    if color in logic.atoms(phi):
        raise UsageError(f"the formula already uses {color!r}; declare the partition to pick a fresh name")
    _emit(args, logic.to_text(logic.relativize(phi, color)) + "\n")
    return 0


def cmd_translate(args) -> int:
    part = _partition(args, required=False)
    phi = _formula(args, part)
    aps = part.aps if part else tuple(sorted(logic.atoms(phi)))
    if not logic.is_ltl(phi):
        raise UsageError("translate expects an LTL formula; relativize prompt formulas first")
    nba = ltl_to_nba(phi, aps, args.budget_states)
    aut = nba if args.kind == "nba" else determinize(nba, args.budget_states)
    _emit(args, write_automaton(aut))
    return 0


def cmd_check(args) -> int:
    part = _partition(args, required=False)
    phi = _formula(args, part)
    if not args.lasso:
        raise UsageError("--lasso is required")
    w = logic.parse_lasso(args.lasso)
    k = args.k if args.k is not None else 0
    holds = logic.evaluate(w, phi, k)
    _emit(args, json.dumps({"holds": holds, "k": k}) + "\n")
    return 0


def cmd_inspect(args) -> int:
    from .tracking import build_tracking, dump, reachable_abstraction
    from .arena import build_game
    part = _partition(args)
    if args.dpa:
        dpa, color = _load_dpa(args.dpa), None
    else:
        dpa, color = strategy.formula_dpa(_formula(args, part), part, args.budget_states)
    if args.what == "dpa":
        _emit(args, write_automaton(dpa))
        return 0
    A = reachable_abstraction(build_tracking(dpa, part, color, args.budget_states), args.budget_states)
    if args.what == "abstraction":
        _emit(args, dump(A))
    else:
        _emit(args, build_game(A).dump())
    return 0


# -- play -------------------------------------------------------------------------------------


def _parse_letter(text: str, allowed) -> frozenset:
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    names = frozenset(x.strip() for x in text.replace(",", " ").split() if x.strip())
    bad = names - set(allowed)
    if bad:
        raise ValueError(f"unknown propositions {sorted(bad)}; choose from {list(allowed)}")
    return names


class _Moves:
    """Human moves from a transcript file or standard input; records what was played."""

    def __init__(self, transcript, out):
        self.lines = Path(transcript).read_text().splitlines() if transcript else None
        self.out = out
        self.played: list[str] = []

    def next(self, prompt: str):
        """Next human line, or None at end of input or on ``quit``."""
        if self.lines is not None:
            if not self.lines:
                return None
            line = self.lines.pop(0)
            self.out.write(f"{prompt}{line}\n")
        else:
            self.out.write(prompt)
            self.out.flush()
            line = sys.stdin.readline()
            if not line:
                return None
            line = line.rstrip("\n")
        if line.strip().lower() in ("quit", "exit"):
            return None
        return line

    def record(self, line):
        self.played.append(line)


def _fmt(letter) -> str:
    return "{" + ",".join(sorted(letter)) + "}"


def cmd_play(args) -> int:
    part = _partition(args)
    phi = _formula(args, part)
    side = (args.side or "I").upper()
    if side not in ("I", "O"):
        raise UsageError("--side must be I or O (the side the human plays)")
    out = sys.stdout
    moves = _Moves(args.transcript, out)
    verdict = strategy.decide(phi, part, budget=args.budget_states, check=False)
    out.write(f"pipeline: Player {verdict.winner} wins; f0 = {verdict.f0}"
              + (f", k = {verdict.k}" if verdict.k is not None else "") + "\n")
    if side == "I":
        if verdict.winner != "O":
            raise UsageError("the machine has no winning strategy for Player O here; play --side O instead")
        _play_as_input(verdict, part, moves, out)
    else:
        if verdict.winner != "I":
            raise UsageError("the machine has no winning strategy for Player I here; play --side I instead")
        f0 = args.f0 if args.f0 is not None else min(verdict.f0, 3)
        k = args.k if args.k is not None else 0
        _play_as_output(phi, part, f0, k, args.budget_states, moves, out)
    if args.out:
        Path(args.out).write_text("\n".join(moves.played) + ("\n" if moves.played else ""))
    return 0


def _play_as_input(verdict, part, moves, out):
    runner = strategy.Runner(verdict.stripped)
    alpha = runner.M.alpha
    out.write(f"you play inputs {list(part.inputs)}; the machine answers after {verdict.f0} letters\n")
    t = 0
    while True:
        line = moves.next(f"[{t}] input> ")
        if line is None:
            break
        try:
            letter = _parse_letter(line, part.inputs)
        except ValueError as exc:
            out.write(f"  {exc}\n")
            continue
        moves.record(line)
        emitted = runner.feed(alpha.input_mask(letter))
        first = len(runner.outputs) - len(emitted)
        for i, b in enumerate(emitted, start=first):
            out.write(f"  O[{i}] = {_fmt(alpha.output_names(b))}  (for input {_fmt(alpha.input_names(runner.inputs[i]))})\n")
        t += 1
    out.write("session over\n")


def _play_as_output(phi, part, f0, k, budget, moves, out):
    res = oracle.solve_prompt_explicit(phi, part, k, f0, budget)
    bg, sol = res.buffered, res.solution
    alpha = bg.alpha
    choice = sol.strategies[1].choice
    out.write(f"machine plays inputs with lookahead {f0}" + (f" and bound {k}" if not logic.is_ltl(phi) else "")
              + f"; oracle winner at these parameters: {res.winner}\n")

    def machine_move(v):
        w = choice.get(v, bg.game.succ[v][0])
        return w, bg.move(v, w)

    v, word = machine_move(0)
    inputs = list(word)
    out.write("  I: " + " ".join(_fmt(alpha.input_names(a)) for a in word) + "\n")
    t = 0
    while True:
        line = moves.next(f"[{t}] output for {_fmt(alpha.input_names(inputs[t]))}> ")
        if line is None:
            break
        try:
            letter = _parse_letter(line, part.outputs)
        except ValueError as exc:
            out.write(f"  {exc}\n")
            continue
        moves.record(line)
        b = sum(1 << i for i, x in enumerate(alpha.outputs) if x in letter)
        _, q, queue = bg.vertices[v]
        v = bg.index[("I", bg.dpa.delta[q][alpha.combine[queue[0]][b]], queue[1:])]
        v, a = machine_move(v)
        inputs.append(a)
        out.write(f"  I: {_fmt(alpha.input_names(a))}\n")
        t += 1
    out.write("session over\n")


# -- entry point ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="promptdelay", description="Delay games with Prompt-LTL winning conditions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formula=True, partition=True):
        if formula:
            sp.add_argument("--formula", help="winning condition, e.g. 'G (q -> FP r)'")
        if partition:
            sp.add_argument("--inputs", help="comma-separated input propositions (Player I)")
            sp.add_argument("--outputs", help="comma-separated output propositions (Player O)")
        sp.add_argument("--budget-states", type=int, default=DEFAULT_BUDGET, dest="budget_states",
                        help=f"state cap for every construction (default {DEFAULT_BUDGET})")
        sp.add_argument("--out", help="write the document here instead of standard output")

    sp = sub.add_parser("solve", help="decide the delay game and extract a strategy")
    common(sp)
    sp.add_argument("--dpa", help="parity automaton file to use instead of --formula")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("oracle", help="solve with an explicit lookahead buffer")
    common(sp)
    sp.add_argument("--dpa")
    sp.add_argument("--f0", type=int, help="initial lookahead (default 1)")
    sp.add_argument("--k", type=int, help="bound for prompt eventualities (default 0)")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("play", help="play interactively against the computed strategy")
    common(sp)
    sp.add_argument("--side", help="side the human plays: I (default) or O")
    sp.add_argument("--transcript", help="replay human moves from this file")
    sp.add_argument("--f0", type=int, help="lookahead when the machine plays Player I")
    sp.add_argument("--k", type=int, help="bound when the machine plays Player I")
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("gen", help="generate a lower-bound formula")
    common(sp, formula=False, partition=False)
    sp.add_argument("--family", required=True, choices=["thm2", "thm3"])
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("relativize", help="print the alternating-color relativization")
    common(sp)
    sp.set_defaults(func=cmd_relativize)

    sp = sub.add_parser("translate", help="translate an LTL formula into an automaton file")
    common(sp)
    sp.add_argument("--kind", choices=["dpa", "nba"], default="dpa")
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("check", help="evaluate a formula on a lasso 'u ; v'")
    common(sp)
    sp.add_argument("--lasso", help="e.g. '{a} {} ; {b}'")
    sp.add_argument("--k", type=int)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("inspect", help="dump intermediate structures")
    common(sp)
    sp.add_argument("--dpa")
    sp.add_argument("--what", choices=["dpa", "abstraction", "game"], default="abstraction")
    sp.set_defaults(func=cmd_inspect)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget_states", 1) < 1:
        _say("error: --budget-states must be positive")
        return EXIT_ERROR
    try:
        return args.func(args)
    except CapacityError as exc:
        _say(f"capacity error in stage {exc.stage}: {exc}")
    except (PromptDelayError, UsageError, ValueError, OSError) as exc:
        _say(f"error: {exc}")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
