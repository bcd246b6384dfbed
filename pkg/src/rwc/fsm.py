"""Core finite-state machinery: alphabets, acceptors, weighted transducers,
and the elementary constructions everything else builds on (regex-style
combinators, identity, cross product, reversal, loop-adding, epsilon
removal, trimming, weighted composition).

Weights live in the tropical semiring (min, +) over non-negative 64-bit
floats; ``math.inf`` plays the role of the absorbing "no path" value.
Machines are immutable once constructed: every operation returns a fresh
machine, so they can be shared freely between threads.

Labels are plain ints. 0 is epsilon; an :class:`Alphabet` assigns
1..n to the user symbols and the next three ids to the rewrite markers
RB (">"), LB1 ("<1"), LB2 ("<2"). Modules that need further private
labels (the KK baseline's brackets) allocate ids above ``num_labels``.
"""

import math
import time
from collections import deque
from heapq import heappush, heappop

from .errors import EmptyLanguageError, UnknownSymbolError, DeadlineExceeded

EPS = 0
INF = math.inf

RESERVED_NAMES = ("<eps>", "<rb>", "<lb1>", "<lb2>")
# Names users may not declare: serialized reserved names, the markers'
# display forms, and "0" (the epsilon atom in rule files).
_FORBIDDEN_USER_NAMES = set(RESERVED_NAMES) | {">", "<1", "<2", "0"}


class Deadline:
    """Cooperative wall-clock limit threaded through long constructions."""

    __slots__ = ("limit",)

    def __init__(self, ms):
        self.limit = time.monotonic() + ms / 1000.0

    def check(self):
        if time.monotonic() > self.limit:
            raise DeadlineExceeded("construction exceeded its deadline")


class Alphabet:
    """Symbol table mapping user symbol names to contiguous label ids.

    Ids: 0 = epsilon, 1..n = user symbols in declaration order, then
    rb = n+1, lb1 = n+2, lb2 = n+3.
    """

    __slots__ = ("symbols", "_ids")

    def __init__(self, symbols):
        symbols = tuple(symbols)
        if not symbols:
            raise ValueError("alphabet needs at least one symbol")
        seen = set()
        for name in symbols:
            if not name:
                raise ValueError("empty symbol name")
            if name in _FORBIDDEN_USER_NAMES:
                raise ValueError(f"symbol name {name!r} is reserved")
            if name in seen:
                raise ValueError(f"duplicate symbol name {name!r}")
            seen.add(name)
        self.symbols = symbols
        self._ids = {name: i + 1 for i, name in enumerate(symbols)}

    @property
    def n(self):
        return len(self.symbols)

    @property
    def rb(self):
        return len(self.symbols) + 1

    @property
    def lb1(self):
        return len(self.symbols) + 2

    @property
    def lb2(self):
        return len(self.symbols) + 3

    @property
    def num_labels(self):
        """Total ids in use by the core scheme (epsilon..lb2)."""
        return len(self.symbols) + 4

    def sigma(self):
        """User symbol ids, in declaration order."""
        return tuple(range(1, len(self.symbols) + 1))

    def markers(self):
        return (self.rb, self.lb1, self.lb2)

    def id_of(self, name):
        try:
            return self._ids[name]
        except KeyError:
            raise UnknownSymbolError(f"undeclared symbol {name!r}") from None

    def name_of(self, label):
        if label == EPS:
            return "<eps>"
        if 1 <= label <= len(self.symbols):
            return self.symbols[label - 1]
        off = label - len(self.symbols)
        if 1 <= off <= 3:
            return RESERVED_NAMES[off]
        return f"<lab{label}>"

    def ids_of(self, names):
        return tuple(self.id_of(n) for n in names)

    def string_to_ids(self, text):
        """Tokenize an input string: per character when every symbol name is
        a single character, else on whitespace."""
        if all(len(s) == 1 for s in self.symbols):
            toks = list(text.replace(" ", ""))
        else:
            toks = text.split()
        return tuple(self.id_of(t) for t in toks)

    def ids_to_string(self, ids):
        return self.names_to_string([self.name_of(i) for i in ids])

    def names_to_string(self, names):
        if all(len(s) == 1 for s in self.symbols):
            return "".join(names)
        return " ".join(names)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __repr__(self):
        return f"Alphabet({list(self.symbols)!r})"


def _check_weights(weighted, arcs, finals, arity):
    if weighted:
        return
    wi = 2 if arity == 1 else 3
    for a in arcs:
        if a[wi] != 0.0:
            raise ValueError("unweighted machine carries a nonzero weight")
    for w in finals.values():
        if w != 0.0:
            raise ValueError("unweighted machine carries a nonzero final weight")


class Automaton:
    """Finite-state acceptor. Arcs are (src, label, weight, dst) tuples;
    finals maps state -> final weight (0.0 by default)."""

    __slots__ = ("num_states", "initial", "finals", "arcs", "weighted", "_out")

    def __init__(self, num_states, initial, finals, arcs, weighted=False):
        if not (0 <= initial < num_states):
            raise ValueError("initial state out of range")
        finals = dict(finals)
        arcs = tuple(arcs)
        for src, lab, w, dst in arcs:
            if not (0 <= src < num_states and 0 <= dst < num_states):
                raise ValueError("arc endpoint out of range")
            if w < 0:
                raise ValueError("negative weight")
        for q in finals:
            if not (0 <= q < num_states):
                raise ValueError("final state out of range")
        _check_weights(weighted, arcs, finals, arity=1)
        self.num_states = num_states
        self.initial = initial
        self.finals = finals
        self.arcs = arcs
        self.weighted = weighted
        self._out = None

    def out_arcs(self, state):
        if self._out is None:
            out = [[] for _ in range(self.num_states)]
            for a in self.arcs:
                out[a[0]].append(a)
            self._out = out
        return self._out[state]

    def is_final(self, state):
        return state in self.finals

    def __repr__(self):
        return (f"Automaton(states={self.num_states}, arcs={len(self.arcs)}, "
                f"finals={len(self.finals)}, weighted={self.weighted})")


class Transducer:
    """Weighted finite-state transducer. Arcs are
    (src, ilabel, olabel, weight, dst) tuples."""

    __slots__ = ("num_states", "initial", "finals", "arcs", "weighted",
                 "_out", "_in_idx")

    def __init__(self, num_states, initial, finals, arcs, weighted=False):
        if not (0 <= initial < num_states):
            raise ValueError("initial state out of range")
        finals = dict(finals)
        arcs = tuple(arcs)
        for src, ilab, olab, w, dst in arcs:
            if not (0 <= src < num_states and 0 <= dst < num_states):
                raise ValueError("arc endpoint out of range")
            if w < 0:
                raise ValueError("negative weight")
        for q in finals:
            if not (0 <= q < num_states):
                raise ValueError("final state out of range")
        _check_weights(weighted, arcs, finals, arity=2)
        self.num_states = num_states
        self.initial = initial
        self.finals = finals
        self.arcs = arcs
        self.weighted = weighted
        self._out = None
        self._in_idx = None

    def out_arcs(self, state):
        if self._out is None:
            out = [[] for _ in range(self.num_states)]
            for a in self.arcs:
                out[a[0]].append(a)
            self._out = out
        return self._out[state]

    def in_index(self, state):
        """Outgoing arcs of `state` grouped by input label, as
        ilabel -> [(olabel, weight, dst), ...]."""
        if self._in_idx is None:
            idx = [None] * self.num_states
            self._in_idx = idx
        d = self._in_idx[state]
        if d is None:
            d = {}
            for _, ilab, olab, w, dst in self.out_arcs(state):
                d.setdefault(ilab, []).append((olab, w, dst))
            self._in_idx[state] = d
        return d

    def is_final(self, state):
        return state in self.finals

    def labels_used(self):
        labs = set()
        for _, i, o, _, _ in self.arcs:
            labs.add(i)
            labs.add(o)
        return labs

    def __repr__(self):
        return (f"Transducer(states={self.num_states}, arcs={len(self.arcs)}, "
                f"finals={len(self.finals)}, weighted={self.weighted})")


class WeightedStringSet:
    """Finite map from output string (tuple of symbol names) to its minimal
    weight. Entries with infinite weight are dropped on construction."""

    __slots__ = ("entries",)

    def __init__(self, entries=()):
        d = dict(entries)
        self.entries = {k: w for k, w in d.items() if w != INF}

    def add_min(self, key, w):
        if w == INF:
            return
        old = self.entries.get(key)
        if old is None or w < old:
            self.entries[key] = w

    def almost_equal(self, other, tol=1e-9):
        if set(self.entries) != set(other.entries):
            return False
        return all(abs(w - other.entries[k]) <= tol
                   for k, w in self.entries.items())

    def sorted_items(self):
        return sorted(self.entries.items(), key=lambda kw: (kw[1], kw[0]))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())

    def __repr__(self):
        return f"WeightedStringSet({self.entries!r})"


# ---------------------------------------------------------------------------
# NFA combinators (Thompson-style; results may contain epsilon arcs)
# ---------------------------------------------------------------------------

def aut_empty():
    """Acceptor of the empty language."""
    return Automaton(1, 0, {}, ())


def aut_epsilon():
    return Automaton(1, 0, {0: 0.0}, ())


def aut_label(label, weight=0.0):
    return Automaton(2, 0, {1: 0.0}, ((0, label, weight, 1),),
                     weighted=weight != 0.0)


def aut_class(labels):
    labels = sorted(set(labels))
    if not labels:
        return aut_empty()
    return Automaton(2, 0, {1: 0.0}, tuple((0, l, 0.0, 1) for l in labels))


def _shift(aut, offset):
    return [(s + offset, l, w, d + offset) for s, l, w, d in aut.arcs]


def aut_union(parts):
    parts = list(parts)
    if not parts:
        return aut_empty()
    arcs = []
    finals = {}
    off = 1
    weighted = any(p.weighted for p in parts)
    for p in parts:
        arcs.append((0, EPS, 0.0, p.initial + off))
        arcs.extend(_shift(p, off))
        for q, w in p.finals.items():
            finals[q + off] = w
        off += p.num_states
    return Automaton(off, 0, finals, arcs, weighted=weighted)


def aut_concat(parts):
    parts = list(parts)
    if not parts:
        return aut_epsilon()
    arcs = []
    off = 0
    weighted = any(p.weighted for p in parts)
    initial = parts[0].initial
    prev_finals = None
    for p in parts:
        arcs.extend(_shift(p, off))
        if prev_finals is not None:
            for q, w in prev_finals:
                arcs.append((q, EPS, w, p.initial + off))
                if w != 0.0:
                    weighted = True
        prev_finals = [(q + off, w) for q, w in p.finals.items()]
        off += p.num_states
    return Automaton(off, initial, dict(prev_finals), arcs, weighted=weighted)


def aut_star(a):
    arcs = [(0, EPS, 0.0, a.initial + 1)]
    arcs.extend(_shift(a, 1))
    weighted = a.weighted
    for q, w in a.finals.items():
        arcs.append((q + 1, EPS, w, 0))
        if w != 0.0:
            weighted = True
    return Automaton(a.num_states + 1, 0, {0: 0.0}, arcs, weighted=weighted)


def aut_plus(a):
    return aut_concat([a, aut_star(a)])


def aut_opt(a):
    return aut_union([aut_epsilon(), a])


def aut_sigma_star(labels):
    return aut_star(aut_class(labels))


def aut_weighted(w, a):
    """Prefix a series term with weight w (an entry arc carrying w)."""
    if w < 0:
        raise ValueError("negative series weight")
    arcs = [(0, EPS, float(w), a.initial + 1)]
    arcs.extend(_shift(a, 1))
    finals = {q + 1: fw for q, fw in a.finals.items()}
    return Automaton(a.num_states + 1, 0, finals, arcs,
                     weighted=a.weighted or w != 0.0)


def aut_string(labels):
    if not labels:
        return aut_epsilon()
    arcs = [(i, lab, 0.0, i + 1) for i, lab in enumerate(labels)]
    return Automaton(len(labels) + 1, 0, {len(labels): 0.0}, arcs)


# ---------------------------------------------------------------------------
# Elementary operations
# ---------------------------------------------------------------------------

def id_transducer(a):
    """Identity relation restricted to L(a); weights preserved."""
    arcs = tuple((s, l, l, w, d) for s, l, w, d in a.arcs)
    return Transducer(a.num_states, a.initial, a.finals, arcs,
                      weighted=a.weighted)


def project_output(t):
    """The output-side weighted acceptor of a transducer."""
    arcs = tuple((s, o, w, d) for s, _, o, w, d in t.arcs)
    return Automaton(t.num_states, t.initial, t.finals, arcs, weighted=True)


def cross_product(phi, psi, pad_out=EPS):
    """Relation L(phi) x L(psi) with the weight of each pair taken from the
    psi path. The shorter side of a pair is suffix-padded: phi symbols pair
    with epsilon outputs (or `pad_out`) once psi is exhausted, and psi
    symbols ride epsilon inputs once phi is exhausted.
    """
    if phi.weighted:
        raise ValueError("cross_product: phi must be unweighted")
    phi = trim(remove_epsilon(phi))
    psi = trim(remove_epsilon(psi))
    if not phi.finals:
        raise EmptyLanguageError("phi denotes the empty language")
    if not psi.finals:
        raise EmptyLanguageError("psi denotes the empty language")
    state_ids = {}
    queue = deque()

    def sid(pq):
        if pq not in state_ids:
            state_ids[pq] = len(state_ids)
            queue.append(pq)
        return state_ids[pq]

    start = (phi.initial, psi.initial)
    sid(start)
    arcs = []
    finals = {}
    while queue:
        p, q = pq = queue.popleft()
        cur = state_ids[pq]
        p_final = phi.is_final(p)
        q_final = psi.is_final(q)
        if p_final and q_final:
            finals[cur] = psi.finals[q]
        for _, a, _, p2 in phi.out_arcs(p):
            for _, b, w, q2 in psi.out_arcs(q):
                arcs.append((cur, a, b, w, sid((p2, q2))))
            if q_final:
                arcs.append((cur, a, pad_out, 0.0, sid((p2, q))))
        if p_final:
            for _, b, w, q2 in psi.out_arcs(q):
                arcs.append((cur, EPS, b, w, sid((p, q2))))
    return Transducer(len(state_ids), 0, finals, arcs, weighted=psi.weighted)


def reverse(m):
    """Reverse the language/relation by arc reversal. A fresh super-initial
    state with epsilon arcs to the old finals encodes multiple starts; old
    final weights ride those arcs."""
    n = m.num_states
    init = n  # super-initial
    finals = {m.initial: 0.0}
    if isinstance(m, Automaton):
        arcs = [(d, l, w, s) for s, l, w, d in m.arcs]
        arcs.extend((init, EPS, w, q) for q, w in m.finals.items())
        return Automaton(n + 1, init, finals, arcs, weighted=m.weighted)
    arcs = [(d, i, o, w, s) for s, i, o, w, d in m.arcs]
    arcs.extend((init, EPS, EPS, w, q) for q, w in m.finals.items())
    return Transducer(n + 1, init, finals, arcs, weighted=m.weighted)


def add_loops(t, pairs):
    """Add a weight-0 self-loop (i, o) at every state for each pair."""
    pairs = sorted(set(pairs))
    arcs = list(t.arcs)
    for q in range(t.num_states):
        for i, o in pairs:
            arcs.append((q, i, o, 0.0, q))
    return Transducer(t.num_states, t.initial, t.finals, arcs,
                      weighted=t.weighted)


def _eps_closures(num_states, eps_arcs_from):
    """Min-plus epsilon closure of every state (Dijkstra; weights >= 0)."""
    closures = []
    for s in range(num_states):
        dist = {s: 0.0}
        heap = [(0.0, s)]
        while heap:
            d, q = heappop(heap)
            if d > dist.get(q, INF):
                continue
            for w, r in eps_arcs_from[q]:
                nd = d + w
                if nd < dist.get(r, INF):
                    dist[r] = nd
                    heappush(heap, (nd, r))
        closures.append(dist)
    return closures


def remove_epsilon(a):
    """Equivalent acceptor with no epsilon arcs. Weights combine by + along
    epsilon paths and by min across alternatives."""
    if not any(l == EPS for _, l, _, _ in a.arcs):
        return a
    eps_from = [[] for _ in range(a.num_states)]
    real_from = [[] for _ in range(a.num_states)]
    for s, l, w, d in a.arcs:
        if l == EPS:
            eps_from[s].append((w, d))
        else:
            real_from[s].append((l, w, d))
    closures = _eps_closures(a.num_states, eps_from)
    arcs = []
    finals = {}
    for s in range(a.num_states):
        for t, dcost in closures[s].items():
            for l, w, d in real_from[t]:
                arcs.append((s, l, dcost + w, d))
            if t in a.finals:
                fw = dcost + a.finals[t]
                if fw < finals.get(s, INF):
                    finals[s] = fw
    weighted = a.weighted
    if not weighted and (any(w != 0.0 for _, _, w, _ in arcs)
                         or any(w != 0.0 for w in finals.values())):
        weighted = True
    return Automaton(a.num_states, a.initial, finals, arcs, weighted=weighted)


def trim(m):
    """Keep only states that are both accessible and co-accessible. An
    empty-relation machine trims to a single non-final initial state."""
    n = m.num_states
    fwd = [[] for _ in range(n)]
    bwd = [[] for _ in range(n)]
    for a in m.arcs:
        fwd[a[0]].append(a[-1])
        bwd[a[-1]].append(a[0])
    reach = bytearray(n)
    stack = [m.initial]
    reach[m.initial] = 1
    while stack:
        q = stack.pop()
        for r in fwd[q]:
            if not reach[r]:
                reach[r] = 1
                stack.append(r)
    coreach = bytearray(n)
    stack = [q for q in m.finals if reach[q]]
    for q in stack:
        coreach[q] = 1
    while stack:
        q = stack.pop()
        for r in bwd[q]:
            if not coreach[r]:
                coreach[r] = 1
                stack.append(r)
    keep = [q for q in range(n) if reach[q] and coreach[q]]
    if not keep:
        cls = Automaton if isinstance(m, Automaton) else Transducer
        return cls(1, 0, {}, (), weighted=m.weighted)
    # keep is non-empty, so some final is reachable and the initial state is
    # co-accessible; it is always in keep.
    remap = {q: i for i, q in enumerate(keep)}
    arcs = [a for a in m.arcs if a[0] in remap and a[-1] in remap]
    finals = {remap[q]: w for q, w in m.finals.items() if q in remap}
    if isinstance(m, Automaton):
        arcs = [(remap[s], l, w, remap[d]) for s, l, w, d in arcs]
        return Automaton(len(keep), remap[m.initial], finals, arcs,
                         weighted=m.weighted)
    arcs = [(remap[s], i, o, w, remap[d]) for s, i, o, w, d in arcs]
    return Transducer(len(keep), remap[m.initial], finals, arcs,
                      weighted=m.weighted)


def ignore_labels(a, labels, allow_leading=True):
    """The language of `a` with the given labels freely interleaved.
    With allow_leading=False the first symbol of every match is real:
    loops are added at every state except a fresh non-reenterable start,
    so absorbed junk can never precede the match.
    """
    a = trim(remove_epsilon(a))
    labels = sorted(set(labels))
    if allow_leading:
        arcs = list(a.arcs)
        for q in range(a.num_states):
            arcs.extend((q, l, 0.0, q) for l in labels)
        return Automaton(a.num_states, a.initial, a.finals, arcs,
                         weighted=a.weighted)
    fresh = a.num_states
    arcs = list(a.arcs)
    arcs.extend((fresh, l, w, d) for s, l, w, d in a.arcs if s == a.initial)
    finals = dict(a.finals)
    if a.initial in finals:
        finals[fresh] = finals[a.initial]
    for q in range(a.num_states):
        arcs.extend((q, l, 0.0, q) for l in labels)
    return Automaton(a.num_states + 1, fresh, finals, arcs,
                     weighted=a.weighted)


def compose(t1, t2, deadline=None):
    """Weighted relational composition. Weights of matched paths add; the
    inner tape's epsilons are coordinated by a three-state filter so every
    interleaving of one-sided moves has a canonical representative and path
    duplication stays bounded.

    Filter states: 0 = free, 1 = only t1 may keep moving on its output
    epsilon, 2 = only t2 may keep moving on its input epsilon. A matched
    real symbol resets to 0; a paired epsilon move is allowed only from 0.
    """
    state_ids = {}
    queue = deque()

    def sid(key):
        if key not in state_ids:
            state_ids[key] = len(state_ids)
            queue.append(key)
        return state_ids[key]

    sid((t1.initial, t2.initial, 0))
    arcs = []
    finals = {}
    n_popped = 0
    while queue:
        key = queue.popleft()
        q1, q2, flt = key
        cur = state_ids[key]
        n_popped += 1
        if deadline is not None and n_popped % 256 == 0:
            deadline.check()
        if q1 in t1.finals and q2 in t2.finals:
            finals[cur] = t1.finals[q1] + t2.finals[q2]
        idx2 = t2.in_index(q2)
        eps2 = idx2.get(EPS, ())
        for _, a, b, w1, p1 in t1.out_arcs(q1):
            if b != EPS:
                for c, w2, p2 in idx2.get(b, ()):
                    arcs.append((cur, a, c, w1 + w2, sid((p1, p2, 0))))
            else:
                if flt != 2:
                    arcs.append((cur, a, EPS, w1, sid((p1, q2, 1))))
                if flt == 0:
                    for c, w2, p2 in eps2:
                        arcs.append((cur, a, c, w1 + w2, sid((p1, p2, 0))))
        if flt != 1:
            for c, w2, p2 in eps2:
                arcs.append((cur, EPS, c, w2, sid((q1, p2, 2))))
    out = Transducer(len(state_ids), 0, finals, arcs,
                     weighted=t1.weighted or t2.weighted)
    return trim(out)
