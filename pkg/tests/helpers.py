"""Shared test helpers: independent brute-force oracles (path enumeration,
naive regex matching) and seeded random generators for machines, regexes,
and rules. These deliberately avoid the library's own traversal code so
the tests compare two unrelated routes to the same answer.

The corpus seed comes from the RWC_SEED environment variable (default 0).
"""

import itertools
import math
import os
import random
from heapq import heappush, heappop

from rwc import rulespec as R
from rwc.fsm import EPS, INF, Alphabet


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def corpus_seed():
    return int(os.environ.get("RWC_SEED", "0"))


def rng_for(name, extra=0):
    # string seeds hash stably across processes, unlike tuple hashes
    return random.Random(f"{corpus_seed()}:{name}:{extra}")


# ---------------------------------------------------------------------------
# Brute-force enumeration oracles
# ---------------------------------------------------------------------------

def enum_language(aut, max_len):
    """All accepted strings up to max_len with min weights, by exhaustive
    path walking (epsilon arcs allowed)."""
    best = {}
    results = {}
    heap = [(0.0, aut.initial, ())]
    best[(aut.initial, ())] = 0.0
    while heap:
        w, q, s = heappop(heap)
        if w > best.get((q, s), INF):
            continue
        if q in aut.finals:
            tot = w + aut.finals[q]
            if tot < results.get(s, INF):
                results[s] = tot
        for _, lab, aw, r in aut.out_arcs(q):
            ns = s if lab == EPS else s + (lab,)
            if len(ns) > max_len:
                continue
            nw = w + aw
            if nw < best.get((r, ns), INF):
                best[(r, ns)] = nw
                heappush(heap, (nw, r, ns))
    return results


def enum_relation(t, max_in, max_out=None):
    """All (input, output) pairs up to the length bounds with min weights,
    by exhaustive path walking."""
    if max_out is None:
        max_out = max_in
    best = {}
    results = {}
    start = (t.initial, (), ())
    best[start] = 0.0
    heap = [(0.0,) + start]
    while heap:
        w, q, i, o = heappop(heap)
        if w > best.get((q, i, o), INF):
            continue
        if q in t.finals:
            tot = w + t.finals[q]
            if tot < results.get((i, o), INF):
                results[(i, o)] = tot
        for _, il, ol, aw, r in t.out_arcs(q):
            ni = i if il == EPS else i + (il,)
            no = o if ol == EPS else o + (ol,)
            if len(ni) > max_in or len(no) > max_out:
                continue
            nw = w + aw
            key = (r, ni, no)
            if nw < best.get(key, INF):
                best[key] = nw
                heappush(heap, (nw,) + key)
    return results


def lang_set(aut, max_len):
    return set(enum_language(aut, max_len))


def accepts_by_enum(aut, s, max_len=None):
    return tuple(s) in lang_set(aut, len(s))


def all_strings(labels, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(labels, repeat=n)


# ---------------------------------------------------------------------------
# Naive recursive regex matcher (denotation oracle for compile_regex)
# ---------------------------------------------------------------------------

def naive_match(ast, s):
    """Does the name-tuple s belong to the denotation of the tree?"""
    if isinstance(ast, R.Sym):
        return s == (ast.name,)
    if isinstance(ast, R.Eps):
        return s == ()
    if isinstance(ast, R.Cls):
        return len(s) == 1 and s[0] in ast.names
    if isinstance(ast, R.Weighted):
        return naive_match(ast.child, s)
    if isinstance(ast, R.Cat):
        return _match_cat(ast.parts, s)
    if isinstance(ast, R.Alt):
        return any(naive_match(p, s) for p in ast.parts)
    if isinstance(ast, R.Opt):
        return s == () or naive_match(ast.child, s)
    if isinstance(ast, R.Star):
        return s == () or _match_plus(ast.child, s)
    if isinstance(ast, R.Plus):
        return _match_plus(ast.child, s)
    raise TypeError(ast)


def _match_cat(parts, s):
    if not parts:
        return s == ()
    head, rest = parts[0], parts[1:]
    return any(naive_match(head, s[:i]) and _match_cat(rest, s[i:])
               for i in range(len(s) + 1))


def _match_plus(child, s):
    # one or more repetitions; the first must be non-empty unless s is empty
    if naive_match(child, s):
        return True
    return any(naive_match(child, s[:i]) and _match_plus(child, s[i:])
               for i in range(1, len(s)))


def naive_series_value(ast, s):
    """Min-plus value of a series tree on the name-tuple s, by direct
    recursion over the denotation."""
    if isinstance(ast, R.Sym):
        return 0.0 if s == (ast.name,) else INF
    if isinstance(ast, R.Eps):
        return 0.0 if s == () else INF
    if isinstance(ast, R.Cls):
        return 0.0 if (len(s) == 1 and s[0] in ast.names) else INF
    if isinstance(ast, R.Weighted):
        return ast.weight + naive_series_value(ast.child, s)
    if isinstance(ast, R.Alt):
        return min(naive_series_value(p, s) for p in ast.parts)
    if isinstance(ast, R.Cat):
        return _series_cat(ast.parts, s)
    if isinstance(ast, R.Opt):
        v = naive_series_value(ast.child, s)
        return min(v, 0.0) if s == () else v
    if isinstance(ast, R.Star):
        return 0.0 if s == () else _series_plus(ast.child, s)
    if isinstance(ast, R.Plus):
        return _series_plus(ast.child, s)
    raise TypeError(ast)


def _series_cat(parts, s):
    if not parts:
        return 0.0 if s == () else INF
    head, rest = parts[0], parts[1:]
    best = INF
    for i in range(len(s) + 1):
        a = naive_series_value(head, s[:i])
        if a == INF:
            continue
        b = _series_cat(rest, s[i:])
        best = min(best, a + b)
    return best


def _series_plus(child, s):
    best = naive_series_value(child, s)
    for i in range(1, len(s)):
        a = naive_series_value(child, s[:i])
        if a == INF:
            continue
        best = min(best, a + _series_plus(child, s[i:]))
    return best


# ---------------------------------------------------------------------------
# Random generators
# ---------------------------------------------------------------------------

def rand_alphabet(rng, size):
    return Alphabet([chr(ord("a") + j) for j in range(size)])


def rand_regex(rng, alphabet, depth, allow_eps=True, allow_empty_class=True):
    names = alphabet.symbols
    choices = ["sym", "cls"] + (["eps"] if allow_eps else [])
    if depth > 0:
        choices += ["cat", "alt", "star", "plus", "opt"]
    kind = rng.choice(choices)
    if kind == "sym":
        return R.Sym(rng.choice(names))
    if kind == "eps":
        return R.Eps()
    if kind == "cls":
        lo = 0 if allow_empty_class else 1
        k = rng.randint(lo, len(names))
        return R.Cls(tuple(sorted(rng.sample(names, k))))
    if kind in ("cat", "alt"):
        node = R.Cat if kind == "cat" else R.Alt
        parts = tuple(rand_regex(rng, alphabet, depth - 1, allow_eps,
                                 allow_empty_class)
                      for _ in range(rng.randint(2, 3)))
        return node(parts)
    child = rand_regex(rng, alphabet, depth - 1, allow_eps,
                       allow_empty_class)
    return {"star": R.Star, "plus": R.Plus, "opt": R.Opt}[kind](child)


def rand_phi(rng, alphabet, depth):
    while True:
        ast = rand_regex(rng, alphabet, depth, allow_eps=False,
                         allow_empty_class=False)
        if not R.nullable(ast) and not R.empty_language(ast):
            return ast


def rand_series(rng, alphabet, depth, weighted=True, allow_alt=True):
    """A finite series (no stars), so rewriting output sets stay
    enumerable. With allow_alt=False the series denotes one string."""
    kinds = ["sym"]
    if depth > 0:
        kinds += ["cat"] + (["alt"] if allow_alt else []) \
            + (["w"] if weighted else [])
    kind = rng.choice(kinds)
    if kind == "sym":
        return R.Sym(rng.choice(alphabet.symbols))
    if kind == "w":
        return R.Weighted(round(rng.uniform(0.0, 3.0), 4),
                          rand_series(rng, alphabet, depth - 1, weighted,
                                      allow_alt))
    parts = tuple(rand_series(rng, alphabet, depth - 1, weighted, allow_alt)
                  for _ in range(2))
    return (R.Cat if kind == "cat" else R.Alt)(parts)


def rand_rule(rng, alphabet, depth=2, weighted=True, allow_alt=True):
    return R.Rule(phi=rand_phi(rng, alphabet, depth),
                  psi=rand_series(rng, alphabet, depth, weighted=weighted,
                                  allow_alt=allow_alt),
                  lam=rand_regex(rng, alphabet, depth),
                  rho=rand_regex(rng, alphabet, depth))


def rule_corpus(name, count, sizes, depth=2, weighted=True):
    """Deterministic corpus of (alphabet, rule) pairs; `sizes` maps
    alphabet size -> how many rules of that size. Alternative-bearing
    targets are confined to the smallest alphabets: exhaustive sweeps over
    bigger alphabets would otherwise face output sets exponential in the
    string length."""
    rng = rng_for(name)
    out = []
    for size, n in sorted(sizes.items()):
        for _ in range(n):
            alphabet = rand_alphabet(rng, size)
            out.append((alphabet,
                        rand_rule(rng, alphabet, depth, weighted=weighted,
                                  allow_alt=size <= 2)))
    rng.shuffle(out)
    assert len(out) == count
    return out


def rand_automaton(rng, labels, max_states=4, p_eps=0.2, weighted=False):
    n = rng.randint(1, max_states)
    arcs = []
    for _ in range(rng.randint(0, 2 * n + 2)):
        lab = EPS if rng.random() < p_eps else rng.choice(labels)
        w = round(rng.uniform(0, 4), 3) if weighted else 0.0
        arcs.append((rng.randrange(n), lab, w, rng.randrange(n)))
    finals = {q: 0.0 for q in range(n) if rng.random() < 0.5}
    if not finals and rng.random() < 0.8:
        finals = {rng.randrange(n): 0.0}
    from rwc.fsm import Automaton
    return Automaton(n, rng.randrange(n), finals, arcs, weighted=weighted)


def rand_transducer(rng, labels, max_states=4, p_eps=0.25, weighted=True):
    n = rng.randint(1, max_states)
    arcs = []
    for _ in range(rng.randint(1, 2 * n + 3)):
        il = EPS if rng.random() < p_eps else rng.choice(labels)
        ol = EPS if rng.random() < p_eps else rng.choice(labels)
        w = round(rng.uniform(0, 4), 3) if weighted else 0.0
        arcs.append((rng.randrange(n), il, ol, w, rng.randrange(n)))
    finals = {q: 0.0 for q in range(n) if rng.random() < 0.5}
    if not finals:
        finals = {rng.randrange(n): 0.0}
    from rwc.fsm import Transducer
    return Transducer(n, rng.randrange(n), finals, arcs, weighted=weighted)


def weights_close(d1, d2, tol=1e-9):
    return set(d1) == set(d2) and all(
        math.isclose(d1[k], d2[k], abs_tol=tol) for k in d1)
