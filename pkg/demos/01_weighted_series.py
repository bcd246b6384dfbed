"""Weighted rational series over the tropical semiring.

A series maps strings to costs: weights add along a match and alternatives
take the minimum, the usual reading of costs as negative log
probabilities. This walks through the two classic examples.
"""

from rwc import Alphabet, evaluate_series, parse_series, series_to_wfsa

alphabet = Alphabet(["a", "b"])

# S assigns 4 to the leading a, 2 to each looped b, 3 to the final b.
S = series_to_wfsa(parse_series("(<4> a)(<2> b)* (<3> b)", alphabet),
                   alphabet)
for text in ["abbb", "ab", "a"]:
    v = evaluate_series(S, alphabet.string_to_ids(text))
    print(f"S({text!r}) = {v}")
# S('abbb') = 4 + 2 + 2 + 3 = 11; 'a' is not in ab*b, so its value is inf.

# S' matches abb two ways (2+3+4 and 5+3+3); the value is the cheaper one.
S2 = series_to_wfsa(
    parse_series("(<2> a)(<3> b)(<4> b) + (<5> a)(<3> b)*", alphabet),
    alphabet)
print(f"S'('abb') = {evaluate_series(S2, alphabet.string_to_ids('abb'))}")
