"""The three marker constructions.

Given a deterministic automaton for "anything ending in beta", a TYPE 1
transducer inserts a marker after every matching prefix; TYPE 2 and TYPE 3
are filters that admit a marker only after matching (resp. non-matching)
prefixes, deleting it. These are the whole trick behind the rule compiler:
context checking becomes marker insertion plus two cheap filters.
"""

from rwc import (Alphabet, MarkerKind, MarkerSpec, aut_concat,
                 aut_sigma_star, determinize, marker, relation_upto)
from rwc.rulespec import compile_regex, parse_regex

alphabet = Alphabet(["a", "b"])
HASH = alphabet.rb  # borrow a marker label and call it "#"

beta = parse_regex("b", alphabet)
alpha = determinize(aut_concat([aut_sigma_star(alphabet.sigma()),
                                compile_regex(beta, alphabet)]))
print(f"det(anything . b): {alpha.num_states} states, complete by "
      "construction")


def show(tau, label):
    print(f"\n{label}: {tau.num_states} states, {len(tau.arcs)} arcs")


ins = marker(alpha, MarkerSpec(MarkerKind.TYPE1, frozenset({HASH})),
             alphabet.sigma())
show(ins, "TYPE 1 (insert # after every prefix ending in b)")
# 'abba' -> 'ab#b#a': exactly one # after each b
rel = relation_upto(ins, alphabet, 4)
print("  abba ->", sorted(rel[("a", "b", "b", "a")]))

filt = marker(alpha, MarkerSpec(MarkerKind.TYPE2,
                                deletions=frozenset({HASH})),
              alphabet.sigma())
show(filt, "TYPE 2 (admit # only after b, deleting it)")

comp = marker(alpha, MarkerSpec(MarkerKind.TYPE3,
                                deletions=frozenset({HASH})),
              alphabet.sigma())
show(comp, "TYPE 3 (admit # only where the prefix does NOT end in b)")

# the linear size guarantee: at most one extra state per final state and
# one extra arc per marker label per state
assert ins.num_states <= 2 * alpha.num_states
assert len(ins.arcs) <= len(alpha.arcs) + alpha.num_states
print("\nsize bounds hold: states <= 2x, arcs <= arcs + k*states")
