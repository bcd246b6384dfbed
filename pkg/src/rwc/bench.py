"""Growth benchmarks: compile a -> b rules whose left or right context is
c^k for k in [0, kmax] with both algorithms over a synthetic alphabet,
recording wall time, machine sizes, and the right-context determinization
probe. Results go to CSV (gnuplot-ready).

The synthetic alphabet has `alphabet_size` labels s000, s001, ... (the
default 194 mirrors a realistic text-to-speech symbol set). Absolute
timings are machine-dependent; only growth shapes are meaningful.
"""

import time
from dataclasses import dataclass
from typing import Optional

from . import compiler, kk, rulespec
from .errors import DeadlineExceeded
from .fsm import Alphabet, Deadline

CSV_HEADER = "rule,k,algorithm,ms,states,arcs,dfa_arcs,timeout"


@dataclass
class BenchRecord:
    rule: str              # rule family: "left" or "right"
    k: int
    algorithm: str         # "new" or "kk"
    ms: float
    states: Optional[int]
    arcs: Optional[int]
    dfa_arcs: Optional[int]
    timeout: bool

    def csv_row(self):
        opt = lambda v: "" if v is None else str(v)
        return (f"{self.rule},{self.k},{self.algorithm},{self.ms:.3f},"
                f"{opt(self.states)},{opt(self.arcs)},{opt(self.dfa_arcs)},"
                f"{int(self.timeout)}")


def bench_alphabet(size):
    return Alphabet([f"s{i:03d}" for i in range(size)])


def bench_rule(family, k):
    """a -> b with a c^k left or right context, over the bench alphabet."""
    ctx = (rulespec.Cat(tuple(rulespec.Sym("s002") for _ in range(k)))
           if k else rulespec.Eps())
    lam, rho = (ctx, rulespec.Eps()) if family == "left" \
        else (rulespec.Eps(), ctx)
    return rulespec.Rule(phi=rulespec.Sym("s000"), psi=rulespec.Sym("s001"),
                         lam=lam, rho=rho)


def _time_new(rule, alphabet, repeats):
    best = None
    stats = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        cr = compiler.compile_rule(rule, alphabet)
        ms = (time.perf_counter() - t0) * 1000.0
        if best is None or ms < best:
            best = ms
            stats = cr.stats
    return best, stats


def run_bench(family, kmax, alphabet_size=194, deadline_ms=300_000,
              repeats_new=3, skip_after=2):
    """Bench one rule family for k in [0, kmax]. KK points run under a
    per-point deadline; after `skip_after` consecutive KK timeouts the
    remaining (larger, strictly slower) KK points are recorded as timeouts
    without running. Returns a list of BenchRecords (2 per k)."""
    if family not in ("left", "right"):
        raise ValueError("family must be 'left' or 'right'")
    alphabet = bench_alphabet(alphabet_size)
    records = []
    kk_consecutive_timeouts = 0
    for k in range(kmax + 1):
        rule = bench_rule(family, k)
        ms, stats = _time_new(rule, alphabet, repeats_new)
        records.append(BenchRecord(family, k, "new", ms,
                                   stats.states, stats.arcs, None, False))
        dfa_arcs = None
        if family == "right":
            try:
                _, dfa_arcs = kk.kk_rightcontext_probe(
                    rule.rho, alphabet, deadline=Deadline(deadline_ms))
            except DeadlineExceeded:
                dfa_arcs = None
        if skip_after and kk_consecutive_timeouts >= skip_after:
            records.append(BenchRecord(family, k, "kk", float(deadline_ms),
                                       None, None, dfa_arcs, True))
            continue
        try:
            compiled = kk.kk_compile_rule(rule, alphabet,
                                          deadline=Deadline(deadline_ms))
            records.append(BenchRecord(
                family, k, "kk", compiled.build_ms,
                compiled.transducer.num_states,
                len(compiled.transducer.arcs), dfa_arcs, False))
            kk_consecutive_timeouts = 0
        except DeadlineExceeded:
            records.append(BenchRecord(family, k, "kk", float(deadline_ms),
                                       None, None, dfa_arcs, True))
            kk_consecutive_timeouts += 1
    return records


def write_csv(path, records):
    with open(path, "w", encoding="utf-8") as f:
        f.write(CSV_HEADER + "\n")
        for r in records:
            f.write(r.csv_row() + "\n")


def read_csv(path):
    rows = []
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        for ln in f:
            rule, k, alg, ms, states, arcs, dfa_arcs, tmo = \
                ln.strip().split(",")
            rows.append(BenchRecord(
                rule, int(k), alg, float(ms),
                int(states) if states else None,
                int(arcs) if arcs else None,
                int(dfa_arcs) if dfa_arcs else None,
                tmo == "1"))
    return rows


def affine_fit(xs, ys):
    """Least-squares y ~ a*x + b; returns (a, b, r_squared)."""
    import numpy as np

    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    design = np.vstack([x, np.ones_like(x)]).T
    coef, residual, _, _ = np.linalg.lstsq(design, y, rcond=None)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0.0:
        return float(coef[0]), float(coef[1]), 1.0
    ss_res = float(residual[0]) if len(residual) else float(
        ((design @ coef - y) ** 2).sum())
    return float(coef[0]), float(coef[1]), 1.0 - ss_res / ss_tot
