"""Reference bracket-cascade compiler in the Kaplan–Kay style, for
unweighted obligatory left-to-right rules. Used for relation-equivalence
cross-checks against the direct compiler and for the growth benchmarks.

The pipeline composes six transducers:

    Prologue ∘ Id(Obligatory) ∘ Id(Rightcontext) ∘ Replace
             ∘ Id(Leftcontext) ∘ Prologue⁻¹

Prologue freely introduces the six context brackets <a <i <c >a >i >c;
the constraint stages then restrict where they may occur, Replace rewrites
<a-opened phi spans (emitting the reserved placeholder "0" for deleted
material), and Prologue⁻¹ erases brackets and placeholders. The bracket
discipline mirrors the direct compiler's markers:

  * >c sits in the bracket cluster before every right-context start and
    nowhere else (two intersectands; the expensive direction "every >c is
    followed by a right-context match" is the right one and is what the
    right-context probe measures),
  * every eligible phi start carries an <a or <i mark positioned after
    its cluster's >c (so a replacement block exiting through the cluster
    cannot swallow the mark),
  * post-replacement, <a demands a left-context match and <i demands its
    absence; <c, >a, >i are never licensed.

Everything is built from intersections, complementations, and
subtractions over the bracket-extended alphabet, which is exactly what
makes this pipeline expensive; the per-rule operation counts are recorded
in the returned stats.
"""

import time
from dataclasses import dataclass

from . import fsm
from .boolean_ops import OpCounter, complement, determinize, intersect, subtract
from .errors import PhiNullableError
from .fsm import EPS, Transducer
from .rulespec import (compile_regex, is_unweighted, nullable,
                       series_to_wfsa)


class KkBrackets:
    """The six context bracket labels plus the deleted-material placeholder
    "0", allocated above the core label scheme of an alphabet."""

    __slots__ = ("la", "li", "lc", "ra", "ri", "rc", "zero")

    def __init__(self, alphabet):
        base = alphabet.num_labels
        self.la = base
        self.li = base + 1
        self.lc = base + 2
        self.ra = base + 3
        self.ri = base + 4
        self.rc = base + 5
        self.zero = base + 6

    def all(self):
        return (self.la, self.li, self.lc, self.ra, self.ri, self.rc)

    def names(self):
        return {self.la: "<a", self.li: "<i", self.lc: "<c",
                self.ra: ">a", self.ri: ">i", self.rc: ">c",
                self.zero: "0"}


@dataclass
class KkCompiledRule:
    transducer: Transducer
    counter: OpCounter
    build_ms: float


def _forbid(pattern_nfa, gamma, counter, deadline):
    """Complement of a forbidden-pattern language over gamma*."""
    return complement(determinize(pattern_nfa, counter, deadline),
                      gamma, counter)


def _gam_star(gamma):
    return fsm.aut_sigma_star(gamma)


def _constraints(rule, alphabet, br, counter, deadline):
    """The three Id() constraint stages, as acceptors over the
    bracket-extended alphabet."""
    sigma = alphabet.sigma()
    brackets = br.all()
    gamma = sigma + brackets
    gamma_post = gamma + (br.zero,)
    ignorables = set(brackets) | {br.zero}
    gs = _gam_star(gamma)
    marks = (br.la, br.li)
    no_rc_junk = sorted(ignorables - {br.rc})    # cluster junk without >c
    no_mark_junk = sorted(ignorables - set(marks))

    phi_ig = fsm.ignore_labels(compile_regex(rule.phi, alphabet),
                               ignorables, allow_leading=False)
    rho_ig = fsm.ignore_labels(compile_regex(rule.rho, alphabet),
                               ignorables, allow_leading=False)
    rho_ig_lead = fsm.ignore_labels(compile_regex(rule.rho, alphabet),
                                    ignorables, allow_leading=True)
    lam_ig_lead = fsm.ignore_labels(compile_regex(rule.lam, alphabet),
                                    ignorables, allow_leading=True)

    # Obligatory: no eligible phi start (phi match, then cluster junk, then
    # >c) whose cluster lacks a mark placed after any >c. "Marked" prefixes
    # end with <a/<i followed only by >c-free junk.
    marked = fsm.aut_concat([gs, fsm.aut_class(marks),
                             fsm.aut_star(fsm.aut_class(no_rc_junk))])
    unmarked = subtract(gs, marked, gamma, counter, deadline)
    obligatory = _forbid(
        fsm.aut_concat([unmarked, phi_ig,
                        fsm.aut_star(fsm.aut_class(no_mark_junk)),
                        fsm.aut_label(br.rc), gs]),
        gamma, counter, deadline)
    # Unused brackets never occur; at most one >c per cluster.
    nostray = _forbid(
        fsm.aut_concat([gs, fsm.aut_class((br.lc, br.ra, br.ri)), gs]),
        gamma, counter, deadline)
    unique_rc = _forbid(
        fsm.aut_concat([gs, fsm.aut_label(br.rc),
                        fsm.aut_star(fsm.aut_class(no_rc_junk)),
                        fsm.aut_label(br.rc), gs]),
        gamma, counter, deadline)
    obligatory_stage = intersect(
        intersect(obligatory, nostray, counter, deadline),
        unique_rc, counter, deadline)

    # Rightcontext: >c iff a right-context match starts in the next cluster.
    # Left intersectand: every rho start is preceded, within its cluster,
    # by a >c. Right intersectand: every >c is followed by a rho match;
    # its inner pattern is the one whose determinization blows up.
    not_after_rc = subtract(
        gs, fsm.aut_concat([gs, fsm.aut_label(br.rc),
                            fsm.aut_star(fsm.aut_class(no_rc_junk))]),
        gamma, counter, deadline)
    if nullable(rule.rho):
        # Every real boundary (including the end of the string) starts an
        # empty rho match; a split inside a bracket cluster does not.
        witness = fsm.aut_union([
            fsm.aut_concat([fsm.aut_class(sigma), gs]), fsm.aut_epsilon()])
    else:
        witness = fsm.aut_concat([rho_ig, gs])
    rc_left = _forbid(fsm.aut_concat([not_after_rc, witness]),
                      gamma, counter, deadline)
    rc_right = _forbid(_rc_right_pattern(gs, br, rho_ig_lead, gamma,
                                         counter, deadline),
                       gamma, counter, deadline)
    rightcontext_stage = intersect(rc_left, rc_right, counter, deadline)

    # Leftcontext (post-replacement): <a only right after a lambda match,
    # <i only elsewhere.
    gs_post = _gam_star(gamma_post)
    lam_post = fsm.aut_concat([gs_post, lam_ig_lead])
    no_lam = subtract(gs_post, lam_post, gamma_post, counter, deadline)
    lc_a = _forbid(fsm.aut_concat([no_lam, fsm.aut_label(br.la), gs_post]),
                   gamma_post, counter, deadline)
    lc_i = _forbid(fsm.aut_concat([lam_post, fsm.aut_label(br.li), gs_post]),
                   gamma_post, counter, deadline)
    leftcontext_stage = intersect(lc_a, lc_i, counter, deadline)

    return obligatory_stage, rightcontext_stage, leftcontext_stage


def _rc_right_pattern(gs, br, rho_ig_lead, gamma, counter, deadline):
    """Forbidden pattern of the right intersectand: a >c followed by
    something that is not a rho match (junk-leading allowed)."""
    not_rho = subtract(gs, fsm.aut_concat([rho_ig_lead, gs]),
                       gamma, counter, deadline)
    return fsm.aut_concat([gs, fsm.aut_label(br.rc), not_rho])


def _prologue(alphabet, br):
    arcs = [(0, a, a, 0.0, 0) for a in alphabet.sigma()]
    arcs.extend((0, EPS, b, 0.0, 0) for b in br.all())
    return Transducer(1, 0, {0: 0.0}, arcs)


def _prologue_inv(alphabet, br):
    arcs = [(0, a, a, 0.0, 0) for a in alphabet.sigma()]
    arcs.extend((0, b, EPS, 0.0, 0) for b in br.all())
    arcs.append((0, br.zero, EPS, 0.0, 0))
    return Transducer(1, 0, {0: 0.0}, arcs)


def _replace(rule, alphabet, br):
    """Bracket-driven replacement: the base state copies user symbols,
    deletes >c, passes <i; <a opens a mandatory phi x psi block (brackets
    ignored inside, deleted input material emitted as "0"), which exits
    back to base on the span-closing >c."""
    psi_wfsa = series_to_wfsa(rule.psi, alphabet)
    cp = fsm.cross_product(compile_regex(rule.phi, alphabet), psi_wfsa,
                           pad_out=br.zero)
    off = 1
    arcs = [(0, a, a, 0.0, 0) for a in alphabet.sigma()]
    arcs.append((0, br.rc, EPS, 0.0, 0))
    arcs.append((0, br.li, br.li, 0.0, 0))
    arcs.append((0, br.la, br.la, 0.0, cp.initial + off))
    for s, i, o, w, d in cp.arcs:
        arcs.append((s + off, i, o, w, d + off))
    for q in range(cp.num_states):
        for m in (br.la, br.li, br.rc):
            arcs.append((q + off, m, EPS, 0.0, q + off))
    for q, fw in cp.finals.items():
        arcs.append((q + off, br.rc, EPS, fw, 0))
    return Transducer(cp.num_states + 1, 0, {0: 0.0}, arcs)


def kk_compile_rule(rule, alphabet, deadline=None):
    """Compile one unweighted rule through the bracket cascade. Returns a
    KkCompiledRule carrying the transducer and the operation counts."""
    if not is_unweighted(rule.psi):
        raise ValueError("the KK baseline compiles unweighted rules only")
    if nullable(rule.phi):
        raise PhiNullableError("phi accepts the empty string")
    t0 = time.perf_counter()
    counter = OpCounter()
    br = KkBrackets(alphabet)
    obligatory, rightcontext, leftcontext = _constraints(
        rule, alphabet, br, counter, deadline)
    t = _prologue(alphabet, br)
    for stage in (fsm.id_transducer(obligatory),
                  fsm.id_transducer(rightcontext),
                  _replace(rule, alphabet, br),
                  fsm.id_transducer(leftcontext),
                  _prologue_inv(alphabet, br)):
        t = fsm.compose(t, stage, deadline)
        t = fsm.trim(t)
    leftovers = t.labels_used() & (set(br.all()) | {br.zero})
    if leftovers:
        raise AssertionError(f"bracket labels leaked: {sorted(leftovers)}")
    ms = (time.perf_counter() - t0) * 1000.0
    return KkCompiledRule(transducer=t, counter=counter, build_ms=ms)


def kk_rightcontext_probe(rho, alphabet, deadline=None):
    """Build the nondeterministic automaton inside the right intersectand
    of Rightcontext, determinize it without minimization, and return
    (nfa_arcs, dfa_arcs)."""
    br = KkBrackets(alphabet)
    gamma = alphabet.sigma() + br.all()
    ignorables = set(br.all()) | {br.zero}
    gs = _gam_star(gamma)
    rho_ig_lead = fsm.ignore_labels(compile_regex(rho, alphabet),
                                    ignorables, allow_leading=True)
    counter = OpCounter()
    nfa = _rc_right_pattern(gs, br, rho_ig_lead, gamma, counter, deadline)
    dfa = determinize(nfa, counter, deadline)
    return len(nfa.arcs), len(dfa.arcs)
