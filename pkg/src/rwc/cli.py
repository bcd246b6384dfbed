"""Command-line front end.

    rwc compile RULES -o OUT.fst [--no-compact] [--algorithm new|kk]
    rwc apply OUT.fst INPUT [--stdin] [--nbest N]
    rwc check RULES [--max-len L] [--against OUT.fst]
    rwc bench --family left|right [--kmax K] [--alphabet-size N]
              [--deadline-ms D] [--no-skip] OUT.csv

`check` exhaustively compares each compiled rule against the brute-force
rewriting oracle (and, for unweighted rules, against the KK baseline
compiler) on every string up to the length bound; it exits 2 with
counterexamples on any mismatch. The RWC_SEED environment variable seeds
the random corpora used by the test suite; the CLI subcommands themselves
are deterministic.
"""

import argparse
import sys

from . import bench as bench_mod
from . import compiler, kk, oracle, rulespec, textio
from . import fsm as fsm_mod
from .errors import RwcError
from .fsm import compose, trim
from .boolean_ops import compact_transducer


def _load_rules(path):
    with open(path, encoding="utf-8") as f:
        return rulespec.parse_rule_file(f.read())


def cmd_compile(args):
    ruleset = _load_rules(args.rules)
    alphabet = ruleset.alphabet
    compact = not args.no_compact
    if args.algorithm == "new":
        t = compiler.compile_ruleset(ruleset, compact=compact)
    else:
        t = compiler.identity_over_sigma(alphabet)
        for rule in ruleset.rules:
            if not rulespec.is_unweighted(rule.psi):
                raise RwcError(
                    "the kk algorithm compiles unweighted rules only")
            cr = kk.kk_compile_rule(rule, alphabet)
            t = trim(compose(t, cr.transducer))
            if compact:
                t = compact_transducer(t)
    textio.write_machine(args.out, t, alphabet)
    print(f"wrote {args.out}: states={t.num_states} arcs={len(t.arcs)} "
          f"weighted={'yes' if t.weighted else 'no'}")
    return 0


def cmd_apply(args):
    m, alphabet = textio.read_machine(args.fst)
    t = m if isinstance(m, fsm_mod.Transducer) else fsm_mod.id_transducer(m)
    inputs = []
    if args.stdin:
        inputs = [ln.rstrip("\n") for ln in sys.stdin if ln.strip()]
    elif args.input is not None:
        inputs = [args.input]
    else:
        raise RwcError("provide an input string or --stdin")
    for text in inputs:
        wss, truncated = oracle.apply(t, text, alphabet, bound=args.bound)
        if truncated:
            print(f"warning: output enumeration truncated at {args.bound} "
                  f"strings for {text!r}", file=sys.stderr)
        items = wss.sorted_items()
        if args.nbest is not None:
            items = items[:args.nbest]
        for names, w in items:
            print(f"{alphabet.names_to_string(names)} {w:.6f}")
    return 0


def _check_one_rule(idx, rule, alphabet, max_len):
    """Oracle equivalence (and KK cross-check for unweighted rules) for one
    rule; returns a list of failure strings."""
    failures = []
    cr = compiler.compile_rule(rule, alphabet)
    rel = oracle.relation_upto(cr.transducer, alphabet, max_len)
    orc = oracle.RewriteOracle(rule, alphabet)
    n_checked = 0
    for u in oracle._all_inputs(alphabet, max_len):
        n_checked += 1
        ids = tuple(alphabet.id_of(x) for x in u)
        exp = {tuple(alphabet.name_of(s) for s in k): w
               for k, w in orc.rewrite_ids(ids).items()}
        got = rel.get(u, {})
        if not exp:
            failures.append(f"rule {idx}: oracle produced no output "
                            f"for {u!r}")
            continue
        if set(exp) != set(got) or any(
                abs(exp[k] - got[k]) > 1e-9 for k in exp):
            failures.append(
                f"rule {idx}: input {u!r}: compiled {got!r} != "
                f"oracle {exp!r}")
            if len(failures) >= 10:
                break
    tag = "ok" if not failures else "FAIL"
    print(f"rule {idx}: oracle equivalence on {n_checked} strings: {tag}")
    if rulespec.is_unweighted(rule.psi):
        kkc = kk.kk_compile_rule(rule, alphabet)
        rep = oracle.equivalent_on(cr.transducer, kkc.transducer,
                                   alphabet, max_len)
        print(f"rule {idx}: kk cross-check: "
              f"{'ok' if rep.equivalent else 'FAIL'}")
        if not rep.equivalent:
            failures.extend(
                f"rule {idx}: kk mismatch on {inp!r}: {a!r} vs {b!r}"
                for inp, a, b in rep.counterexamples)
    else:
        print(f"rule {idx}: kk cross-check skipped (weighted rule)")
    return failures


def cmd_check(args):
    ruleset = _load_rules(args.rules)
    alphabet = ruleset.alphabet
    failures = []
    for idx, rule in enumerate(ruleset.rules):
        failures.extend(_check_one_rule(idx, rule, alphabet, args.max_len))
    if args.against:
        t, alpha2 = textio.read_machine(args.against)
        if alpha2.symbols != alphabet.symbols:
            failures.append("--against machine declares a different "
                            "alphabet")
        else:
            composed = compiler.compile_ruleset(ruleset)
            rep = oracle.equivalent_on(composed, t, alphabet, args.max_len)
            print(f"ruleset vs {args.against}: "
                  f"{'ok' if rep.equivalent else 'FAIL'}")
            if not rep.equivalent:
                failures.extend(
                    f"against: mismatch on {inp!r}: {a!r} vs {b!r}"
                    for inp, a, b in rep.counterexamples)
    if failures:
        print(f"{len(failures)} failure(s):", file=sys.stderr)
        for f in failures:
            print("  " + f, file=sys.stderr)
        return 2
    print("all checks passed")
    return 0


def cmd_bench(args):
    records = bench_mod.run_bench(
        args.family, args.kmax, alphabet_size=args.alphabet_size,
        deadline_ms=args.deadline_ms,
        skip_after=0 if args.no_skip else args.skip_after)
    bench_mod.write_csv(args.out, records)
    n_timeouts = sum(r.timeout for r in records)
    print(f"wrote {args.out}: {len(records)} rows, {n_timeouts} timeouts")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="rwc",
        description="Compile weighted context-dependent rewrite rules "
                    "into weighted finite-state transducers.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a rule file to an FST file")
    c.add_argument("rules")
    c.add_argument("-o", "--out", required=True)
    c.add_argument("--no-compact", action="store_true")
    c.add_argument("--algorithm", choices=("new", "kk"), default="new")
    c.set_defaults(func=cmd_compile)

    a = sub.add_parser("apply", help="apply a compiled FST to input")
    a.add_argument("fst")
    a.add_argument("input", nargs="?")
    a.add_argument("--stdin", action="store_true",
                   help="read one input per line from stdin")
    a.add_argument("--nbest", type=int, default=None)
    a.add_argument("--bound", type=int, default=1000,
                   help="output enumeration bound")
    a.set_defaults(func=cmd_apply)

    k = sub.add_parser("check", help="verify compiled rules against the "
                                     "rewriting oracle and the KK baseline")
    k.add_argument("rules")
    k.add_argument("--max-len", type=int, default=6)
    k.add_argument("--against", default=None,
                   help="also compare the composed ruleset with this FST")
    k.set_defaults(func=cmd_check)

    b = sub.add_parser("bench", help="growth benchmark, CSV output")
    b.add_argument("out")
    b.add_argument("--family", choices=("left", "right"), required=True)
    b.add_argument("--kmax", type=int, default=10)
    b.add_argument("--alphabet-size", type=int, default=194)
    b.add_argument("--deadline-ms", type=int, default=300_000)
    b.add_argument("--skip-after", type=int, default=2,
                   help="skip remaining KK points after this many "
                        "consecutive timeouts")
    b.add_argument("--no-skip", action="store_true",
                   help="always run every KK point to its deadline")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except RwcError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
