"""Classical unweighted automata algorithms: subset-construction
determinization, completion, complementation, intersection, subtraction,
DFA minimization, and label-encoded transducer compaction.

The working alphabet for completion and complementation is always an
explicit parameter (a sequence of label ids), never inferred from the
machine's arcs: the marker constructions operate over extended alphabets
and the right answer depends on which one.
"""

from collections import deque
from dataclasses import dataclass

from . import fsm
from .errors import NotDeterministicError
from .fsm import EPS, Automaton, Transducer


@dataclass
class OpCounter:
    """Instrumentation for operation-count claims."""

    determinizations: int = 0
    intersections: int = 0
    complementations: int = 0
    subtractions: int = 0


class Dfa:
    """An accessible deterministic acceptor: no epsilon arcs, at most one
    transition per (state, label). Construction verifies the certificate."""

    __slots__ = ("aut", "delta")

    def __init__(self, aut):
        if aut.weighted:
            raise NotDeterministicError("weighted machines are not DFAs here")
        delta = {}
        for s, l, _, d in aut.arcs:
            if l == EPS:
                raise NotDeterministicError("epsilon arc in DFA")
            if (s, l) in delta:
                raise NotDeterministicError(
                    f"two arcs with label {l} leave state {s}")
            delta[(s, l)] = d
        seen = {aut.initial}
        stack = [aut.initial]
        while stack:
            q = stack.pop()
            for _, _, _, d in aut.out_arcs(q):
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        if len(seen) != aut.num_states:
            raise NotDeterministicError("DFA has inaccessible states")
        self.aut = aut
        self.delta = delta

    @property
    def num_states(self):
        return self.aut.num_states

    @property
    def initial(self):
        return self.aut.initial

    @property
    def finals(self):
        return self.aut.finals

    @property
    def arcs(self):
        return self.aut.arcs

    def step(self, state, label):
        return self.delta.get((state, label))

    def accepts(self, labels):
        q = self.aut.initial
        for l in labels:
            q = self.delta.get((q, l))
            if q is None:
                return False
        return q in self.aut.finals

    def __repr__(self):
        return f"Dfa({self.aut!r})"


def as_dfa(m):
    return m if isinstance(m, Dfa) else Dfa(m)


def _eps_closure_sets(a):
    eps_from = [[] for _ in range(a.num_states)]
    for s, l, _, d in a.arcs:
        if l == EPS:
            eps_from[s].append(d)
    closures = []
    for s in range(a.num_states):
        seen = {s}
        stack = [s]
        while stack:
            q = stack.pop()
            for r in eps_from[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        closures.append(frozenset(seen))
    return closures


def determinize(a, counter=None, deadline=None):
    """Subset construction. Language preserved, result deterministic and
    accessible; no minimization. States come out in BFS discovery order and
    arcs are emitted in sorted label order, so sizes are reproducible."""
    if a.weighted:
        raise ValueError("determinize expects an unweighted acceptor")
    if counter is not None:
        counter.determinizations += 1
    closures = _eps_closure_sets(a)
    finals_in = set(a.finals)
    sym_from = [[] for _ in range(a.num_states)]
    for s, l, _, d in a.arcs:
        if l != EPS:
            sym_from[s].append((l, d))

    start = closures[a.initial]
    ids = {start: 0}
    order = [start]
    arcs = []
    finals = {}
    head = 0
    while head < len(order):
        cur = order[head]
        cur_id = head
        head += 1
        if deadline is not None and head % 64 == 0:
            deadline.check()
        if not finals_in.isdisjoint(cur):
            finals[cur_id] = 0.0
        targets = {}
        for q in cur:
            for l, d in sym_from[q]:
                tset = targets.get(l)
                if tset is None:
                    targets[l] = set(closures[d])
                else:
                    tset.update(closures[d])
        for l in sorted(targets):
            tfro = frozenset(targets[l])
            nid = ids.get(tfro)
            if nid is None:
                nid = len(order)
                ids[tfro] = nid
                order.append(tfro)
            arcs.append((cur_id, l, 0.0, nid))
    return Dfa(Automaton(len(order), 0, finals, arcs))


def is_complete(d, labels):
    """True iff every state has a transition on every label of the given
    working alphabet."""
    d = as_dfa(d)
    return all((q, l) in d.delta
               for q in range(d.num_states) for l in labels)


def complete(d, labels):
    """Add a non-final sink (if needed) so the DFA is complete over
    `labels`. Language unchanged."""
    d = as_dfa(d)
    missing = [(q, l) for q in range(d.num_states) for l in labels
               if (q, l) not in d.delta]
    if not missing:
        return d
    sink = d.num_states
    arcs = list(d.arcs)
    arcs.extend((q, l, 0.0, sink) for q, l in missing)
    arcs.extend((sink, l, 0.0, sink) for l in labels)
    return Dfa(Automaton(d.num_states + 1, d.initial, d.finals, arcs))


def complement(d, labels, counter=None):
    """DFA for the complement of L(d) over `labels`* (completion applied
    internally)."""
    if counter is not None:
        counter.complementations += 1
    d = complete(as_dfa(d), labels)
    finals = {q: 0.0 for q in range(d.num_states) if q not in d.finals}
    return Dfa(Automaton(d.num_states, d.initial, finals, d.arcs))


def intersect(a, b, counter=None, deadline=None):
    """Product construction; L = L(a) ∩ L(b). Inputs unweighted."""
    if isinstance(a, Dfa):
        a = a.aut
    if isinstance(b, Dfa):
        b = b.aut
    if a.weighted or b.weighted:
        raise ValueError("intersect expects unweighted acceptors")
    if counter is not None:
        counter.intersections += 1
    a = fsm.remove_epsilon(a)
    b = fsm.remove_epsilon(b)
    b_idx = [None] * b.num_states

    def bi(q):
        d = b_idx[q]
        if d is None:
            d = {}
            for _, l, _, t in b.out_arcs(q):
                d.setdefault(l, []).append(t)
            b_idx[q] = d
        return d

    ids = {(a.initial, b.initial): 0}
    queue = deque([(a.initial, b.initial)])
    arcs = []
    finals = {}
    n = 0
    while queue:
        p, q = pq = queue.popleft()
        cur = ids[pq]
        n += 1
        if deadline is not None and n % 256 == 0:
            deadline.check()
        if p in a.finals and q in b.finals:
            finals[cur] = 0.0
        idx = bi(q)
        for _, l, _, p2 in a.out_arcs(p):
            for q2 in idx.get(l, ()):
                key = (p2, q2)
                nid = ids.get(key)
                if nid is None:
                    nid = len(ids)
                    ids[key] = nid
                    queue.append(key)
                arcs.append((cur, l, 0.0, nid))
    return fsm.trim(Automaton(len(ids), 0, finals, arcs))


def subtract(a, b, labels, counter=None, deadline=None):
    """L(a) \\ L(b) over `labels`, via intersect(a, complement(det(b)))."""
    if counter is not None:
        counter.subtractions += 1
    b_c = complement(determinize(b, counter, deadline), labels, counter)
    return intersect(a, b_c.aut, counter, deadline)


def minimize(d, deadline=None):
    """Unique minimal partial DFA for L(d) (up to isomorphism): trim, then
    Moore partition refinement against an implicit sink class, rebuilt in
    BFS order so equal languages give identical machines."""
    d = as_dfa(d)
    aut = fsm.trim(d.aut)
    if not aut.finals:
        return Dfa(Automaton(1, 0, {}, ()))
    n = aut.num_states
    labels = sorted({l for _, l, _, _ in aut.arcs})
    delta = {}
    for s, l, _, t in aut.arcs:
        delta[(s, l)] = t
    SINK = -1
    cls = [1 if q in aut.finals else 0 for q in range(n)]
    n_classes = 2 if any(c == 0 for c in cls) else 1
    while True:
        if deadline is not None:
            deadline.check()
        sigs = {}
        new_cls = [0] * n
        for q in range(n):
            sig = (cls[q],) + tuple(
                cls[delta[(q, l)]] if (q, l) in delta else SINK
                for l in labels)
            nid = sigs.get(sig)
            if nid is None:
                nid = len(sigs)
                sigs[sig] = nid
            new_cls[q] = nid
        if len(sigs) == n_classes:
            break
        cls = new_cls
        n_classes = len(sigs)
    cls = new_cls
    # Rebuild, numbering classes in BFS order from the initial class.
    rep_arcs = {}
    rep_final = {}
    for q in range(n):
        c = cls[q]
        if c not in rep_arcs:
            rep_arcs[c] = {l: cls[delta[(q, l)]]
                           for l in labels if (q, l) in delta}
            rep_final[c] = q in aut.finals
    order = {cls[aut.initial]: 0}
    queue = deque([cls[aut.initial]])
    arcs = []
    finals = {}
    while queue:
        c = queue.popleft()
        cid = order[c]
        if rep_final[c]:
            finals[cid] = 0.0
        for l in sorted(rep_arcs[c]):
            t = rep_arcs[c][l]
            if t not in order:
                order[t] = len(order)
                queue.append(t)
            arcs.append((cid, l, 0.0, order[t]))
    return Dfa(fsm.trim(Automaton(len(order), 0, finals, arcs)))


def _fold_pure_epsilon(t):
    """Fold arcs that are epsilon on both tapes into their neighbours
    (weighted closure), leaving a machine whose every arc moves a tape."""
    if not any(i == EPS and o == EPS for _, i, o, _, _ in t.arcs):
        return t
    eps_from = [[] for _ in range(t.num_states)]
    real_from = [[] for _ in range(t.num_states)]
    for s, i, o, w, d in t.arcs:
        if i == EPS and o == EPS:
            eps_from[s].append((w, d))
        else:
            real_from[s].append((i, o, w, d))
    closures = fsm._eps_closures(t.num_states, eps_from)
    arcs = []
    finals = {}
    for s in range(t.num_states):
        for q, dcost in closures[s].items():
            for i, o, w, d in real_from[q]:
                arcs.append((s, i, o, dcost + w, d))
            if q in t.finals:
                fw = dcost + t.finals[q]
                if fw < finals.get(s, fsm.INF):
                    finals[s] = fw
    return Transducer(t.num_states, t.initial, finals, arcs,
                      weighted=t.weighted or any(w != 0 for w in finals.values()))


def compact_transducer(t, counter=None, deadline=None):
    """Shrink a transducer without changing its relation or weights: each
    (in, out, weight) triple becomes a synthetic label, the machine is
    determinized and minimized as an acceptor, then decoded."""
    t = fsm.trim(t)
    t = _fold_pure_epsilon(t)
    t = fsm.trim(t)
    # Nonzero final weights would be lost by the unweighted encoding; move
    # them onto entry arcs of a fresh super-final state first.
    if any(w != 0.0 for w in t.finals.values()):
        sf = t.num_states
        arcs = list(t.arcs)
        arcs.extend((q, EPS, EPS, w, sf) for q, w in t.finals.items())
        t = Transducer(t.num_states + 1, t.initial, {sf: 0.0}, arcs,
                       weighted=t.weighted)
    codes = {}
    enc_arcs = []
    for s, i, o, w, d in t.arcs:
        key = (i, o, w)
        lab = codes.get(key)
        if lab is None:
            lab = len(codes) + 1
            codes[key] = lab
        enc_arcs.append((s, lab, 0.0, d))
    enc = Automaton(t.num_states, t.initial, {q: 0.0 for q in t.finals},
                    enc_arcs)
    m = minimize(determinize(enc, counter, deadline), deadline=deadline)
    decode = {lab: key for key, lab in codes.items()}
    out_arcs = []
    for s, lab, _, d in m.arcs:
        i, o, w = decode[lab]
        out_arcs.append((s, i, o, w, d))
    finals = dict(m.finals)
    return Transducer(m.num_states, m.initial, finals, out_arcs,
                      weighted=t.weighted)
