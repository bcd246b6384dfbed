"""Independent ground truth for rule compilation: a direct string-rewriting
interpreter for obligatory left-to-right weighted rules, plus transducer
application and relation-equivalence checking.

The interpreter never touches the marker/composition pipeline: it scans the
input with plain DFA matchers. Right contexts are matched against the raw
input; left contexts against the output built so far (newly written
material feeds later left contexts), mirroring the compiled semantics.
"""

from dataclasses import dataclass
from heapq import heappush, heappop

from . import fsm
from .boolean_ops import determinize
from .errors import DivergentError
from .fsm import EPS, INF, WeightedStringSet
from .rulespec import compile_regex, series_to_wfsa


def _to_ids(alphabet, s):
    if isinstance(s, str):
        return alphabet.string_to_ids(s)
    return tuple(alphabet.id_of(x) if isinstance(x, str) else x for x in s)


def _names(alphabet, ids):
    return tuple(alphabet.name_of(i) for i in ids)


# ---------------------------------------------------------------------------
# Weighted language enumeration (best-first)
# ---------------------------------------------------------------------------

def enumerate_language(aut, limit):
    """Accepted strings of a weighted acceptor with their minimal weights,
    best-first, up to `limit` distinct strings. Returns (dict, truncated).
    """
    a = fsm.trim(fsm.remove_epsilon(aut))
    if not a.finals:
        return {}, False
    results = {}
    best = {}
    heap = [(0.0, (), a.initial)]
    best[((), a.initial)] = 0.0
    while heap:
        w, s, q = heappop(heap)
        if w > best.get((s, q), INF):
            continue
        if q in a.finals:
            tot = w + a.finals[q]
            if tot < results.get(s, INF):
                if s not in results and len(results) >= limit:
                    return results, True
                results[s] = tot
        for _, lab, aw, r in a.out_arcs(q):
            ns = s + (lab,)
            nw = w + aw
            key = (ns, r)
            if nw < best.get(key, INF):
                best[key] = nw
                heappush(heap, (nw, ns, r))
    return results, False


# ---------------------------------------------------------------------------
# Transducer application
# ---------------------------------------------------------------------------

def apply(t, input_seq, alphabet, bound=1000):
    """Apply a transducer to one string: compose the string's identity
    transducer with t, project the output side, and enumerate accepted
    strings with minimal weights. Returns (WeightedStringSet, truncated).
    """
    ids = _to_ids(alphabet, input_seq)
    inp = fsm.id_transducer(fsm.aut_string(ids))
    comp = fsm.compose(inp, t)
    out = fsm.trim(fsm.remove_epsilon(fsm.project_output(comp)))
    raw, truncated = enumerate_language(out, bound)
    wss = WeightedStringSet()
    for s, w in raw.items():
        wss.add_min(_names(alphabet, s), w)
    return wss, truncated


def relation_upto(t, alphabet, max_len, bound_per_input=4096,
                  max_out_len=None, deadline=None):
    """The full relation of `t` on inputs over the user alphabet up to
    max_len, as {input names: {output names: weight}}, by one batched
    breadth-first traversal (equivalent to calling apply on every string).
    """
    sigma = alphabet.sigma()
    if max_out_len is None:
        max_out_len = 8 * max_len + 32
    n = t.num_states
    eps_arcs = [[] for _ in range(n)]
    sym_arcs = [dict() for _ in range(n)]
    for s, i, o, w, d in t.arcs:
        if i == EPS:
            eps_arcs[s].append((o, w, d))
        else:
            sym_arcs[s].setdefault(i, []).append((o, w, d))

    def eps_close(configs):
        work = list(configs.items())
        steps = 0
        while work:
            (q, out), w = work.pop()
            if w > configs.get((q, out), INF):
                continue
            for o, aw, r in eps_arcs[q]:
                no = out + (o,) if o != EPS else out
                if len(no) > max_out_len:
                    raise DivergentError(
                        "output grew past the enumeration bound; "
                        "does psi admit infinitely many strings?")
                nw = w + aw
                key = (r, no)
                if nw < configs.get(key, INF):
                    configs[key] = nw
                    work.append((key, nw))
                    steps += 1
                    if steps > 2_000_000:
                        raise DivergentError("epsilon closure diverged")
        return configs

    results = {}

    def record(u, configs):
        rec = {}
        for (q, out), w in configs.items():
            if q in t.finals:
                tw = w + t.finals[q]
                if tw < rec.get(out, INF):
                    rec[out] = tw
        if len(rec) > bound_per_input:
            raise DivergentError("more outputs than the enumeration bound")
        if rec:
            results[u] = rec

    layer = {(): eps_close({(t.initial, ()): 0.0})}
    record((), layer[()])
    for depth in range(max_len):
        if deadline is not None:
            deadline.check()
        nxt = {}
        for u, configs in layer.items():
            for a in sigma:
                moved = {}
                for (q, out), w in configs.items():
                    for o, aw, r in sym_arcs[q].get(a, ()):
                        no = out + (o,) if o != EPS else out
                        if len(no) > max_out_len:
                            raise DivergentError("output grew past bound")
                        nw = w + aw
                        key = (r, no)
                        if nw < moved.get(key, INF):
                            moved[key] = nw
                if moved:
                    nxt[u + (a,)] = eps_close(moved)
        layer = nxt
        for u, configs in layer.items():
            record(u, configs)
    named = {}
    for u, rec in results.items():
        named[_names(alphabet, u)] = {
            _names(alphabet, o): w for o, w in rec.items()}
    return named


# ---------------------------------------------------------------------------
# The rewriting oracle
# ---------------------------------------------------------------------------

class _Matcher:
    """DFA wrapper for the oracle's context checks."""

    __slots__ = ("delta", "finals", "initial")

    def __init__(self, ast, alphabet, reverse=False):
        a = compile_regex(ast, alphabet)
        if reverse:
            a = fsm.reverse(a)
        d = determinize(a)
        self.delta = d.delta
        self.finals = set(d.finals)
        self.initial = d.initial

    def match_lengths(self, ids, start):
        """Lengths m such that ids[start:start+m] is accepted."""
        out = []
        q = self.initial
        if q in self.finals:
            out.append(0)
        for j in range(start, len(ids)):
            q = self.delta.get((q, ids[j]))
            if q is None:
                break
            if q in self.finals:
                out.append(j - start + 1)
        return out

    def some_prefix_matches(self, ids, start):
        return bool(self.match_lengths(ids, start))

    def ends_with_match(self, out_ids):
        # self must be built with reverse=True; walk the output backwards.
        q = self.initial
        if q in self.finals:
            return True
        for j in range(len(out_ids) - 1, -1, -1):
            q = self.delta.get((q, out_ids[j]))
            if q is None:
                return False
            if q in self.finals:
                return True
        return False


class RewriteOracle:
    """Reusable interpreter for one rule (matchers are built once)."""

    def __init__(self, rule, alphabet, bound=1000):
        self.alphabet = alphabet
        self.bound = bound
        self.phi = _Matcher(rule.phi, alphabet)
        self.rho = _Matcher(rule.rho, alphabet)
        self.lam_rev = _Matcher(rule.lam, alphabet, reverse=True)
        psi_wfsa = series_to_wfsa(rule.psi, alphabet)
        self.psi_strings, self.psi_truncated = enumerate_language(
            psi_wfsa, bound + 1)

    def rewrite_ids(self, ids):
        """Map input ids -> {output ids: min weight}."""
        n = len(ids)
        bound = self.bound
        rho_ok = [self.rho.some_prefix_matches(ids, j) for j in range(n + 1)]
        # All phi match lengths with a valid right context, per position.
        sites = []
        for i in range(n):
            ms = [m for m in self.phi.match_lengths(ids, i)
                  if m > 0 and rho_ok[i + m]]
            sites.append(ms)
        buckets = [dict() for _ in range(n + 1)]
        buckets[0][()] = 0.0
        results = {}
        for i in range(n + 1):
            for out, w in buckets[i].items():
                if i == n:
                    if w < results.get(out, INF):
                        results[out] = w
                    continue
                ms = sites[i]
                if ms and self.lam_rev.ends_with_match(out):
                    if self.psi_truncated:
                        # psi has more strings than the enumeration bound:
                        # the output set here would exceed any bound
                        raise DivergentError(
                            f"psi admits more than {bound} strings")
                    for m in ms:
                        tgt = buckets[i + m]
                        for s, v in self.psi_strings.items():
                            no = out + s
                            nw = w + v
                            if nw < tgt.get(no, INF):
                                tgt[no] = nw
                else:
                    no = out + (ids[i],)
                    tgt = buckets[i + 1]
                    if w < tgt.get(no, INF):
                        tgt[no] = w
        return results


def oracle_rewrite(rule, alphabet, input_seq, bound=1000):
    """Ground-truth obligatory left-to-right rewriting of one string.
    Returns a WeightedStringSet keyed by output name tuples."""
    ids = _to_ids(alphabet, input_seq)
    orc = RewriteOracle(rule, alphabet, bound)
    wss = WeightedStringSet()
    for out, w in orc.rewrite_ids(ids).items():
        wss.add_min(_names(alphabet, out), w)
    return wss


# ---------------------------------------------------------------------------
# Relation equivalence
# ---------------------------------------------------------------------------

@dataclass
class EquivalenceReport:
    equivalent: bool
    counterexamples: list
    strings_checked: int

    def __str__(self):
        if self.equivalent:
            return f"equivalent on all {self.strings_checked} strings"
        lines = [f"NOT equivalent ({len(self.counterexamples)} "
                 f"counterexamples shown)"]
        for inp, lhs, rhs in self.counterexamples:
            lines.append(f"  input {inp!r}: {lhs!r} vs {rhs!r}")
        return "\n".join(lines)


def _all_inputs(alphabet, max_len):
    todo = [()]
    for _ in range(max_len + 1):
        nxt = []
        for u in todo:
            yield u
            if len(u) < max_len:
                nxt.extend(u + (a,) for a in alphabet.symbols)
        todo = nxt
        if not todo:
            break


def equivalent_on(t1, t2, alphabet, max_len, tol=1e-9, max_report=10):
    """Compare two transducers as weighted relations on every input over
    the user alphabet up to max_len."""
    r1 = relation_upto(t1, alphabet, max_len)
    r2 = relation_upto(t2, alphabet, max_len)
    counterexamples = []
    checked = 0
    for u in _all_inputs(alphabet, max_len):
        checked += 1
        o1 = r1.get(u, {})
        o2 = r2.get(u, {})
        ok = set(o1) == set(o2) and all(
            abs(w - o2[k]) <= tol for k, w in o1.items())
        if not ok:
            counterexamples.append((u, o1, o2))
            if len(counterexamples) >= max_report:
                break
    return EquivalenceReport(not counterexamples, counterexamples, checked)
