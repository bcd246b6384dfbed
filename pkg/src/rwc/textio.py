"""Line-oriented FST text format (one machine per file, UTF-8).

    WFST v1 <weighted|unweighted> <acceptor|transducer>
    sym <id> <name>            # full symbol table incl. reserved names
    init <state>
    final <state> <weight>
    arc <src> <dst> <in> <out> <weight>   # acceptors omit <out>

Arc labels are symbol-table ids. Weights are printed with 6 decimal
places; the reader accepts any precision. Reserved names are <eps>,
<rb>, <lb1>, <lb2>; user symbols occupy ids 1..n.
"""

from . import fsm
from .errors import FormatError
from .fsm import RESERVED_NAMES, Alphabet, Automaton, Transducer

_HEADER = "WFST v1"


def format_machine(m, alphabet):
    """Serialize an Automaton or Transducer to the text format."""
    is_acceptor = isinstance(m, Automaton)
    kind = "acceptor" if is_acceptor else "transducer"
    wtag = "weighted" if m.weighted else "unweighted"
    lines = [f"{_HEADER} {wtag} {kind}"]
    lines.append("sym 0 <eps>")
    for i, name in enumerate(alphabet.symbols, start=1):
        lines.append(f"sym {i} {name}")
    for off, name in enumerate(RESERVED_NAMES[1:], start=1):
        lines.append(f"sym {alphabet.n + off} {name}")
    max_label = alphabet.num_labels - 1
    lines.append(f"init {m.initial}")
    for q in sorted(m.finals):
        lines.append(f"final {q} {m.finals[q]:.6f}")
    for a in m.arcs:
        if is_acceptor:
            s, i, w, d = a
            labs = (i,)
        else:
            s, i, o, w, d = a
            labs = (i, o)
        for l in labs:
            if not (0 <= l <= max_label):
                raise FormatError(
                    f"label {l} has no name in the symbol table")
        lines.append(f"arc {s} {d} " + " ".join(str(l) for l in labs)
                     + f" {w:.6f}")
    return "\n".join(lines) + "\n"


def write_machine(path, m, alphabet):
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_machine(m, alphabet))


def parse_machine(text):
    """Parse the text format; returns (machine, alphabet)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty FST file")
    head = lines[0].split()
    if len(head) != 4 or " ".join(head[:2]) != _HEADER:
        raise FormatError(f"bad header: {lines[0]!r}")
    weighted = head[2] == "weighted"
    if head[2] not in ("weighted", "unweighted"):
        raise FormatError(f"bad weight tag {head[2]!r}")
    if head[3] not in ("acceptor", "transducer"):
        raise FormatError(f"bad kind {head[3]!r}")
    is_acceptor = head[3] == "acceptor"

    syms = {}
    initial = None
    finals = {}
    arcs = []
    for ln in lines[1:]:
        parts = ln.split()
        tag = parts[0]
        try:
            if tag == "sym":
                syms[int(parts[1])] = parts[2]
            elif tag == "init":
                initial = int(parts[1])
            elif tag == "final":
                finals[int(parts[1])] = float(parts[2])
            elif tag == "arc":
                if is_acceptor:
                    s, d, i, w = (int(parts[1]), int(parts[2]),
                                  int(parts[3]), float(parts[4]))
                    arcs.append((s, i, w, d))
                else:
                    s, d, i, o, w = (int(parts[1]), int(parts[2]),
                                     int(parts[3]), int(parts[4]),
                                     float(parts[5]))
                    arcs.append((s, i, o, w, d))
            else:
                raise FormatError(f"unknown line tag {tag!r}")
        except (IndexError, ValueError) as e:
            raise FormatError(f"malformed line {ln!r}: {e}") from None
    if initial is None:
        raise FormatError("missing init line")
    user = [syms[i] for i in sorted(syms) if syms[i] not in RESERVED_NAMES]
    expected = {0: "<eps>"}
    expected.update({i + 1: name for i, name in enumerate(user)})
    expected.update({len(user) + 1 + off: name
                     for off, name in enumerate(RESERVED_NAMES[1:])})
    if {i: n for i, n in syms.items()} != expected:
        raise FormatError("symbol table ids are not contiguous "
                          "(eps, users, rb, lb1, lb2)")
    try:
        alphabet = Alphabet(user)
    except ValueError as e:
        raise FormatError(str(e)) from None
    num_states = 1 + max(
        [initial] + [q for q in finals]
        + [x for a in arcs for x in (a[0], a[-1])], default=0)
    try:
        if is_acceptor:
            m = Automaton(num_states, initial, finals, arcs, weighted)
        else:
            m = Transducer(num_states, initial, finals, arcs, weighted)
    except ValueError as e:
        raise FormatError(str(e)) from None
    return m, alphabet


def read_machine(path):
    with open(path, encoding="utf-8") as f:
        return parse_machine(f.read())
