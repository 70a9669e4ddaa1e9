"""Hand-written winning conditions with independently argued winners.

Each entry is ``(formula, inputs, outputs, winner)``.  The winner column was
fixed by reasoning about the game, not by running the solver.
"""

CONDITIONS = [
    # plain LTL, one input a, one output b
    ("G (a -> b)", "a", "b", "O"),                       # copy a into b
    ("G a", "a", "b", "I"),                              # I plays !a
    ("G b", "a", "b", "O"),
    ("G ((b -> a) & (a -> b))", "a", "b", "O"),          # b equals the current input
    ("G ((b -> X a) & (X a -> b))", "a", "b", "O"),      # predict the next input: needs lookahead
    ("G ((b -> X X a) & (X X a -> b))", "a", "b", "O"),  # predict two ahead
    ("G F a", "a", "b", "I"),
    ("G F b", "a", "b", "O"),
    ("F G b", "a", "b", "O"),
    ("G (a -> F b)", "a", "b", "O"),
    ("G (a -> X b)", "a", "b", "O"),
    ("F a", "a", "b", "I"),
    ("(b -> F a) & (F a -> b)", "a", "b", "I"),          # I waits to see b at position 0
    ("G (b -> X a)", "a", "b", "O"),                     # never output b
    ("G (a -> X (b | X b))", "a", "b", "O"),
    ("G b & G (a -> !b)", "a", "b", "I"),
    ("G F b & G (b -> a)", "a", "b", "I"),               # I keeps a false
    ("G F b & G (a -> X !b)", "a", "b", "I"),            # I keeps a true
    # prompt conditions
    ("G (q -> FP r)", "q", "r", "O"),
    ("G FP b", "a", "b", "O"),
    ("FP b", "a", "b", "O"),
    ("FP a", "a", "b", "I"),
    ("G FP a", "a", "b", "I"),
    ("G (a -> FP b) & G (b -> X !b)", "a", "b", "O"),    # alternate b
    ("G (a -> FP b) & G (c -> !b)", "a,c", "b", "I"),    # I holds c forever after one a
    # two propositions on one side
    ("G ((b -> (a | c)) & ((a & c) -> b))", "a,c", "b", "O"),
    ("G ((b -> X a) & (X a -> b)) & G (c -> !b) & G F c", "a", "b,c", "I"),  # a forever forces b, so never c
    ("G ((a -> X c) & (X a -> b))", "a", "b,c", "O"),
]


def partition_of(entry):
    from promptdelay.logic import Partition
    _, ins, outs, _ = entry
    return Partition(tuple(x for x in ins.split(",") if x), tuple(x for x in outs.split(",") if x))
