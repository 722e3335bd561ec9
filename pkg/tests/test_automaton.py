"""Parsing, actions, minimization, inversion, and composition."""

import itertools

import pytest

from mealyorbits import (
    AutomatonFormatError,
    MealyAutomaton,
    NotInvertibleError,
    automaton_from_json,
    compose,
    fixtures,
    parse_automaton,
    union_with_inverse,
)

ODOMETER = """
alphabet 0 1
state a
  0|1 -> e
  1|0 -> a
state e identity
"""


def test_parse_basic():
    a = parse_automaton(ODOMETER)
    assert a.states == ("a", "e")
    assert a.alphabet.letters == ("0", "1")
    assert a.trivial_name == "e"


def test_parse_ignores_comments_and_blank_lines():
    a = parse_automaton("# intro\n\n" + ODOMETER + "\n# done\n")
    assert a.states == ("a", "e")


def test_parse_errors():
    with pytest.raises(AutomatonFormatError):
        parse_automaton("")
    with pytest.raises(AutomatonFormatError):
        parse_automaton("state a\n0|1 -> a\n1|0 -> a")  # no alphabet line
    with pytest.raises(AutomatonFormatError):
        parse_automaton("alphabet 0\nstate a\n0|0 -> a")  # one letter
    with pytest.raises(AutomatonFormatError):
        parse_automaton("alphabet 0 1\nstate a\n0|1 -> a")  # missing row
    with pytest.raises(AutomatonFormatError):
        parse_automaton(ODOMETER + "state e2 identity\n0|0 -> e2")


def test_act_runs_the_transducer():
    a = parse_automaton(ODOMETER)
    # Increment with carry: every 1 flips to 0 until a 0 absorbs the carry.
    assert a.act("a", ("1", "1", "1")) == (("0", "0", "0"), "a")
    assert a.act("a", ("1", "0", "1")) == (("0", "1", "1"), "e")
    assert a.act("a", ()) == ((), "a")
    assert a.act("e", ("1", "0")) == (("1", "0"), "e")


def test_is_invertible():
    assert parse_automaton(ODOMETER).is_invertible()
    folder = parse_automaton(
        "alphabet 0 1\nstate a\n0|0 -> a\n1|0 -> a\nstate e identity"
    )
    assert not folder.is_invertible()
    with pytest.raises(NotInvertibleError):
        folder.invert()


def test_invert_is_an_involution():
    for name in ("adding", "seven_states", "grigorchuk", "lamplighter"):
        a = fixtures.load(name)
        assert a.invert().invert() == a


def test_invert_undoes_the_action():
    a = fixtures.load("seven_states")
    inv = a.invert()
    for s, sinv in zip(a.states, inv.states):
        for word in itertools.product(a.alphabet.letters, repeat=3):
            out, _ = a.act(s, word)
            back, _ = inv.act(sinv, out)
            assert back == word


def test_minimize_merges_equivalent_states():
    dup = parse_automaton(
        """
alphabet 0 1
state a
  0|1 -> e
  1|0 -> b
state b
  0|1 -> e
  1|0 -> a
state e identity
"""
    )
    m = dup.minimize()
    assert len(m) == 2  # a and b realize the same transformation
    out_min, _ = m.act(m.states[0], ("1", "1", "1"))
    out_dup, _ = dup.act("a", ("1", "1", "1"))
    assert out_min == out_dup


def test_minimize_is_idempotent():
    for name in fixtures.names():
        m = fixtures.load(name).minimize()
        assert m.minimize() == m
        assert m.is_minimized()


def test_ensure_trivial_state():
    lamp = fixtures.load("lamplighter")
    assert lamp.trivial_name is None
    lifted = lamp.ensure_trivial_state()
    assert lifted.trivial_name is not None
    assert len(lifted) == len(lamp) + 1
    # Already present: untouched.
    a = parse_automaton(ODOMETER)
    assert a.ensure_trivial_state() is a


def test_compose_acts_as_first_after_second():
    a = fixtures.load('adding')
    aa = compose(a, a)
    assert "(a,a)" in aa.states
    for word in itertools.product("01", repeat=4):
        once, _ = a.act("a", word)
        twice, _ = a.act("a", once)
        got, _ = aa.act("(a,a)", word)
        assert got == twice


def test_compose_pairs_all_states():
    a = fixtures.load("adding")
    g = fixtures.load("grigorchuk")
    ag = compose(a, g)
    assert len(ag) == len(a) * len(g)
    for s in a.states:
        for t in g.states:
            assert f"({s},{t})" in ag.states


def test_union_with_inverse_contains_both_actions():
    a = fixtures.load("adding")
    u = union_with_inverse(a)
    assert u.trivial_name == "e"
    assert "a" in u.states and "a^-1" in u.states
    word = ("1", "0", "1")
    out, _ = u.act("a", word)
    back, _ = u.act("a^-1", out)
    assert back == word


def test_union_with_inverse_merges_self_inverse_states():
    swap = fixtures.load("swap")
    u = union_with_inverse(swap)
    # The swap is its own inverse, so nothing new appears.
    assert len(u) == len(swap.ensure_trivial_state())


def test_json_roundtrip():
    for name in fixtures.names():
        a = fixtures.load(name)
        assert automaton_from_json(a.to_json()) == a


def test_text_roundtrip():
    for name in fixtures.names():
        a = fixtures.load(name)
        assert parse_automaton(a.to_text()) == a


def test_subautomaton_keeps_closed_subsets():
    g = fixtures.load("seven_states")
    # States 5, 6 and e form a closed subautomaton (all arrows stay inside).
    keep = [g.state_index("5"), g.state_index("6"), g.state_index("e")]
    sub = g.subautomaton(keep)
    assert sub.states == ("5", "6", "e")
    assert sub.act("6", ("a", "a")) == g.act("6", ("a", "a"))


def test_state_index_unknown_name():
    a = parse_automaton(ODOMETER)
    with pytest.raises(AutomatonFormatError):
        a.state_index("nope")
