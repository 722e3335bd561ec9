"""Tests for the growth machines and the verdicts read off them."""

import json

import pytest

from mealyorbits import (
    Analysis,
    AutomatonFormatError,
    EmptyPostCriticalSetError,
    EvPeriodicWord,
    NotBoundedError,
    OmegaWord,
    UnsupportedAutomatonError,
    analyze,
    classify_omega_orbit,
    classify_postcritical,
    decide_finite,
    decide_level_transitive,
    export_machine,
    parse_automaton,
    recognizer_from_json,
)
from mealyorbits.fixtures import load

GOLDEN = analyze(load("seven_states"))

# One state has two independent cycles: a swap-on-repeat cycle over letter 1
# (orbit sizes double with depth) and a do-nothing cycle over letter 2 whose
# post-critical words have singleton orbits.  Gives both classifications.
TWO_CYCLE = """
alphabet 0 1 2 3

state g
  0|1 -> e
  1|0 -> g
  2|2 -> e
  3|3 -> e

state f
  0|0 -> e
  1|1 -> e
  2|2 -> f
  3|3 -> s

state s
  0|1 -> e
  1|0 -> e
  2|2 -> e
  3|3 -> e

state e identity
"""


# -- machine structure ---------------------------------------------------------


def test_eorbit_machine_states():
    m = GOLDEN.re_machine
    assert [st.part for st in m.states] == [
        tuple(range(14)),
        (0, 1, 2, 3, 5, 6, 7, 8, 9, 10, 12, 13),
        (4, 11),
        (0, 1, 2, 3, 7, 8, 9, 10),
        (4, 11),
        (5, 12),
        (6, 13),
        (),
    ]
    assert [st.level for st in m.states] == [0, 1, 1, 2, 2, 2, 2, 0]
    assert m.initial == 0
    assert m.sink == 7
    assert m.states[m.sink].is_sink
    assert not m.states[0].is_sink


def test_eorbit_machine_transitions():
    m = GOLDEN.re_machine
    assert m.delta == (
        (1, 1, 1, 2),
        (3, 3, 3, 4),
        (5, 7, 6, 7),
        (3, 3, 3, 4),
        (5, 7, 6, 7),
        (7, 7, 7, 7),
        (7, 7, 7, 7),
        (7, 7, 7, 7),
    )


def test_eorbit_machine_accepting():
    m = GOLDEN.re_machine
    assert m.state_accepting == frozenset({1, 3})
    # growth happens exactly on non-d letters out of the states whose part
    # contains the bulk block
    assert sorted(m.edge_accepting) == [
        (0, 0), (0, 1), (0, 2),
        (1, 0), (1, 1), (1, 2),
        (3, 0), (3, 1), (3, 2),
    ]


def test_run_traces():
    m = GOLDEN.re_machine
    t = m.run("aaa")
    assert t.states == (0, 1, 3, 3)
    assert t.final == 3
    assert t.accepting_steps == (1, 2, 3)
    assert t.accepting_count == 3

    t = m.run("dd")
    assert t.states == (0, 2, 7)
    assert t.final == m.sink
    assert t.accepting_count == 0

    t = m.run("cdad")
    assert t.states == (0, 1, 4, 5, 7)
    assert t.accepting_steps == (1,)


def test_run_rejects_unknown_letter():
    with pytest.raises(AutomatonFormatError):
        GOLDEN.re_machine.run("ax")


def test_orbit_machine_shares_transitions_and_relabels():
    re, r = GOLDEN.re_machine, GOLDEN.r_machine
    assert r.delta == re.delta
    assert r.edge_accepting == re.edge_accepting
    assert [st.part for st in r.states] == [st.part for st in re.states]
    # the two depth-two singleton-pair blocks fall together under full orbits
    assert r.states[5].label == (5, 6, 12, 13)
    assert r.states[6].label == (5, 6, 12, 13)
    # the letter-d block keeps its own label on both levels
    assert r.states[2].label == (4, 11)
    assert r.states[4].label == (4, 11)
    assert r.states[2].level == 1 and r.states[4].level == 2
    assert r.state_accepting == frozenset({1, 3})
    assert r.flavor == "R" and re.flavor == "Re"


def test_machines_reach_every_state():
    for m in (GOLDEN.re_machine, GOLDEN.r_machine):
        assert m.reachable() == set(range(len(m.states)))


# -- group finiteness ----------------------------------------------------------


def test_finiteness_verdicts():
    assert decide_finite(load("seven_states")).finite is False
    assert decide_finite(load("seven_states_abc")).finite is False
    assert decide_finite(load("adding")).finite is False
    assert decide_finite(load("grigorchuk")).finite is False
    assert decide_finite(load("swap")).finite is True
    assert decide_finite(load("identity")).finite is True


def test_finiteness_rejects_unbounded():
    with pytest.raises(NotBoundedError):
        decide_finite(load("lamplighter"))


def test_infinite_witness_lasso():
    res = decide_finite(GOLDEN)
    assert res.finite is False
    assert res.witness.stem == ("a", "a")
    assert res.witness.cycle == ("a",)


def test_lasso_replays_on_the_machine():
    for name in ("seven_states", "seven_states_abc", "adding", "grigorchuk"):
        ana = analyze(load(name))
        res = decide_finite(ana)
        assert res.finite is False
        m = ana.re_machine
        stem, cycle = res.witness.stem, res.witness.cycle
        one = m.run(stem + cycle)
        two = m.run(stem + cycle + cycle)
        # the cycle really is a cycle, and repeating it keeps accepting
        assert one.final == two.final
        extra = [p for p in two.accepting_steps if p > len(stem) + len(cycle)]
        assert extra


def test_finite_verdict_has_no_witness():
    res = decide_finite(load("swap"))
    assert res.finite is True and res.witness is None
    assert isinstance(res.analysis, Analysis)


# -- level transitivity ----------------------------------------------------------


def test_transitivity_verdicts():
    assert decide_level_transitive(load("seven_states")) is False
    assert decide_level_transitive(load("seven_states_abc")) is True
    assert decide_level_transitive(load("adding")) is True
    assert decide_level_transitive(load("grigorchuk")) is True
    assert decide_level_transitive(load("identity")) is False


def test_transitivity_needs_circuit_automaton():
    with pytest.raises(UnsupportedAutomatonError):
        decide_level_transitive(load("swap"))


# -- omega-word orbits -----------------------------------------------------------


def test_omega_orbit_verdicts():
    cases = [
        ((), ("a",), False, None),
        ((), ("d",), True, 0),
        (("c",), ("d", "a"), True, 1),
        (("d",), ("a", "c"), True, 0),
        (("a", "b"), ("c",), False, None),
    ]
    for pre, per, finite, lgs in cases:
        v = classify_omega_orbit(GOLDEN, OmegaWord(pre, per))
        assert v.finite is finite
        assert v.last_growth_step == lgs


def test_omega_orbit_infinite_witness_is_a_growth_lasso():
    v = classify_omega_orbit(GOLDEN, OmegaWord((), ("a",)))
    m = GOLDEN.r_machine
    stem, cycle = v.witness.stem, v.witness.cycle
    one = m.run(stem + cycle)
    two = m.run(stem + cycle + cycle)
    assert one.final == two.final
    assert [p for p in two.accepting_steps if p > len(stem) + len(cycle)]


def test_omega_orbit_on_the_odometer():
    adding = analyze(load("adding"))
    assert classify_omega_orbit(adding, OmegaWord((), ("1",))).finite is False
    assert classify_omega_orbit(adding, OmegaWord(("0", "0"), ("1", "0"))).finite is False


def test_omega_orbit_checks_letters():
    with pytest.raises(AutomatonFormatError):
        classify_omega_orbit(GOLDEN, OmegaWord((), ("z",)))


def test_omega_orbit_needs_circuit_automaton():
    with pytest.raises(UnsupportedAutomatonError):
        classify_omega_orbit(load("swap"), OmegaWord((), ("0",)))


def test_omega_orbit_trivial_group():
    v = classify_omega_orbit(load("identity"), OmegaWord((), ("a",)))
    assert v.finite is True and v.last_growth_step == 0


# -- post-critical orbit growth ---------------------------------------------------


def test_postcritical_all_unbounded_on_the_golden_automaton():
    pcs = GOLDEN.pcs
    for w in pcs.elements:
        assert classify_postcritical(GOLDEN, w) == "unbounded"


def test_postcritical_mixed_verdicts():
    ana = analyze(parse_automaton(TWO_CYCLE))
    al = ana.normalized.alphabet
    verdicts = {
        ana.pcs.render(i): classify_postcritical(ana, ana.pcs.elements[i])
        for i in range(len(ana.pcs))
    }
    assert verdicts == {
        "(0)^-w": "unbounded",
        "(1)^-w": "unbounded",
        "(2)^-w": "bounded",
        "(2)^-w 3": "bounded",
    }
    with pytest.raises(ValueError):
        classify_postcritical(ana, EvPeriodicWord.parse("(3)^-w", al))


def test_postcritical_on_the_odometer():
    ana = analyze(load("adding"))
    w = EvPeriodicWord.parse("(1)^-w", ana.normalized.alphabet)
    assert classify_postcritical(ana, w) == "unbounded"


def test_postcritical_error_paths():
    identity = load("identity")
    with pytest.raises(EmptyPostCriticalSetError):
        classify_postcritical(identity, EvPeriodicWord.parse("(a)^-w", identity.alphabet))
    swap = load("swap")
    with pytest.raises(UnsupportedAutomatonError):
        classify_postcritical(swap, EvPeriodicWord.parse("(0)^-w", swap.alphabet))


# -- reuse, serialization, export --------------------------------------------------


def test_analysis_objects_are_accepted_everywhere():
    a = load("seven_states")
    ana = analyze(a)
    assert decide_finite(ana).finite == decide_finite(a).finite
    assert decide_level_transitive(ana) == decide_level_transitive(a)
    w = OmegaWord((), ("d",))
    assert classify_omega_orbit(ana, w) == classify_omega_orbit(a, w)


def test_machine_json_roundtrip():
    for m in (GOLDEN.re_machine, GOLDEN.r_machine):
        back = recognizer_from_json(m.to_json())
        assert back == m
        assert back.digest() == m.digest()


def test_digests_are_deterministic_and_distinct():
    again = analyze(load("seven_states"))
    assert again.re_machine.digest() == GOLDEN.re_machine.digest()
    assert again.r_machine.digest() == GOLDEN.r_machine.digest()
    assert GOLDEN.re_machine.digest() != GOLDEN.r_machine.digest()


def test_json_shape():
    doc = GOLDEN.re_machine.to_json_dict()
    assert doc["flavor"] == "Re"
    assert doc["alphabet"] == ["a", "b", "c", "d"]
    assert len(doc["states"]) == 8
    assert len(doc["edges"]) == 8 * 4
    trimmed = GOLDEN.re_machine.to_json_dict(include_sink=False)
    assert len(trimmed["states"]) == 7
    assert trimmed["sink"] is None
    assert all(e["to"] != GOLDEN.re_machine.sink for e in trimmed["edges"])


def test_from_json_validation():
    doc = GOLDEN.re_machine.to_json_dict()
    bad = json.loads(json.dumps(doc))
    bad["states"][1]["id"] = 9
    with pytest.raises(AutomatonFormatError):
        recognizer_from_json(bad)

    bad = json.loads(json.dumps(doc))
    bad["edges"] = bad["edges"][:-1]
    with pytest.raises(AutomatonFormatError):
        recognizer_from_json(bad)

    with pytest.raises(AutomatonFormatError):
        recognizer_from_json({"flavor": "Re"})


def test_export_machine():
    out = export_machine(GOLDEN.re_machine, "json")
    assert json.loads(out)["flavor"] == "Re"
    dot = export_machine(GOLDEN.r_machine, "dot")
    assert dot.startswith("digraph R {")
    assert "peripheries=2" in dot          # accepting states stand out
    assert "{5,12} pi2 / {5,6,12,13}" in dot
    with pytest.raises(ValueError):
        export_machine(GOLDEN.re_machine, "yaml")
    with pytest.raises(ValueError):
        export_machine(None)


def test_dot_can_hide_the_sink():
    dot = GOLDEN.re_machine.to_dot(include_sink=False)
    assert "sink" not in dot
    assert f"q{GOLDEN.re_machine.sink}" not in dot
