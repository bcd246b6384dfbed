"""FST text format round trips and error handling."""

import pytest

from rwc import compiler as C
from rwc import oracle as O
from rwc.errors import FormatError
from rwc.fsm import Alphabet, Automaton, Transducer
from rwc.rulespec import parse_rule_file
from rwc.textio import format_machine, parse_machine

from .helpers import enum_language, enum_relation, weights_close

AB = Alphabet(["a", "b"])
A, B = AB.ids_of(["a", "b"])


def test_acceptor_round_trip():
    aut = Automaton(3, 0, {2: 0.5},
                    [(0, A, 1.25, 1), (1, B, 0.0, 2), (2, A, 2.0, 2)],
                    weighted=True)
    text = format_machine(aut, AB)
    m, alpha = parse_machine(text)
    assert isinstance(m, Automaton)
    assert alpha == AB
    assert weights_close(enum_language(aut, 4), enum_language(m, 4), 1e-6)


def test_transducer_round_trip_exact_structure():
    t = Transducer(2, 0, {1: 0.0},
                   [(0, A, B, 0.5, 1), (1, AB.rb, 0, 0.0, 1)],
                   weighted=True)
    text = format_machine(t, AB)
    m, alpha = parse_machine(text)
    assert m.num_states == 2 and m.initial == 0
    assert weights_close(enum_relation(t, 3), enum_relation(m, 3), 1e-6)


def test_header_and_symbol_table_shape():
    aut = Automaton(1, 0, {0: 0.0}, [(0, A, 0.0, 0)])
    lines = format_machine(aut, AB).splitlines()
    assert lines[0] == "WFST v1 unweighted acceptor"
    assert "sym 0 <eps>" in lines
    assert "sym 1 a" in lines and "sym 2 b" in lines
    assert "sym 3 <rb>" in lines and "sym 5 <lb2>" in lines


def test_reader_accepts_any_weight_precision():
    text = ("WFST v1 weighted acceptor\n"
            "sym 0 <eps>\nsym 1 a\nsym 2 <rb>\nsym 3 <lb1>\nsym 4 <lb2>\n"
            "init 0\nfinal 1 0.25000000001\narc 0 1 1 1e-3\n")
    m, alpha = parse_machine(text)
    assert m.finals[1] == 0.25000000001
    assert m.arcs[0][2] == 1e-3


def test_malformed_files_raise():
    with pytest.raises(FormatError):
        parse_machine("")
    with pytest.raises(FormatError):
        parse_machine("WFST v2 weighted acceptor\ninit 0\n")
    with pytest.raises(FormatError):
        parse_machine("WFST v1 weighted acceptor\nsym 0 <eps>\n")  # no init
    with pytest.raises(FormatError):
        parse_machine("WFST v1 weighted acceptor\nsym 0 <eps>\nsym 1 a\n"
                      "sym 2 <rb>\nsym 3 <lb1>\nsym 4 <lb2>\n"
                      "init 0\narc 0 zero 1\n")


def test_compiled_rule_round_trip_preserves_relation(tmp_path):
    rs = parse_rule_file("alphabet: a b c ;\n a -> <0.5> b / c _ ;\n")
    t = C.compile_ruleset(rs)
    path = tmp_path / "rule.fst"
    from rwc.textio import read_machine, write_machine
    write_machine(path, t, rs.alphabet)
    m, alpha = read_machine(path)
    rep = O.equivalent_on(t, m, rs.alphabet, 5, tol=1e-6)
    assert rep.equivalent, str(rep)
