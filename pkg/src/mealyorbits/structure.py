"""Cycle structure of an automaton and the labels of infinite paths into it.

For a bounded automaton the non-trivial states split into disjoint simple
cycles plus an acyclic fringe.  Every left-infinite path ending at a
non-trivial state therefore wraps one cycle forever and then walks a finite
stretch of fringe, so its input and output label sequences are eventually
periodic.  Collecting those label sequences gives the post-critical set; the
pairs they form at path endpoints drive everything downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import FrozenSet, Tuple

from .automaton import MealyAutomaton
from .errors import (
    ConsistencyError,
    NotBoundedError,
    NotInvertibleError,
    UnsupportedAutomatonError,
)
from .words import Alphabet, EvPeriodicWord


def _require_normalized(a: MealyAutomaton, invertible: bool = False) -> None:
    if a.trivial is None:
        raise UnsupportedAutomatonError("automaton has no identity state")
    if not a.is_minimized():
        raise UnsupportedAutomatonError("automaton must be minimized first")
    if invertible and not a.is_invertible():
        raise NotInvertibleError("automaton is not invertible")


def _sccs(n: int, succ) -> list[list[int]]:
    """Tarjan's strongly connected components, iterative."""
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def _nontrivial_edges(a: MealyAutomaton):
    """Edges of the directed graph on non-trivial states, with letters."""
    edges = {s: [] for s in range(len(a.states)) if s != a.trivial}
    for s in edges:
        for x in range(len(a.alphabet)):
            t = a.nxt[s][x]
            if t != a.trivial:
                edges[s].append((x, a.out[s][x], t))
    return edges


def circuit_part(a: MealyAutomaton) -> MealyAutomaton:
    """The subautomaton of states reachable from directed cycles.

    Sections of length ``len(a)`` always land here, so group questions about
    ``a`` reduce to its circuit part.  The identity state is always kept.
    """
    _require_normalized(a)
    n = len(a.states)
    comps = _sccs(n, lambda s: a.nxt[s])
    on_cycle = set()
    for comp in comps:
        if len(comp) > 1:
            on_cycle.update(comp)
        else:
            s = comp[0]
            if s in a.nxt[s]:
                on_cycle.add(s)
    reach = set(on_cycle)
    stack = list(on_cycle)
    while stack:
        s = stack.pop()
        for t in a.nxt[s]:
            if t not in reach:
                reach.add(t)
                stack.append(t)
    reach.add(a.trivial)
    return a.subautomaton(reach)


def is_bounded(a: MealyAutomaton) -> bool:
    """Whether non-trivial cycles are disjoint simple cycles, none reaching another.

    Equivalent to the number of non-trivial sections per level staying
    bounded as the level grows.
    """
    _require_normalized(a, invertible=True)
    edges = _nontrivial_edges(a)
    if not edges:
        return True
    comps = _sccs(len(a.states), lambda s: [t for (_, _, t) in edges.get(s, ())])
    comps = [c for c in comps if c != [a.trivial]]
    comp_of = {}
    for i, comp in enumerate(comps):
        for s in comp:
            comp_of[s] = i
    cyclic = set()
    for i, comp in enumerate(comps):
        has_cycle = len(comp) > 1 or any(t == comp[0] for (_, _, t) in edges.get(comp[0], ()))
        if not has_cycle:
            continue
        cyclic.add(i)
        counts = {s: 0 for s in comp}
        for s in comp:
            for (_, _, t) in edges.get(s, ()):
                if comp_of.get(t) == i:
                    counts[s] += 1
        if any(c != 1 for c in counts.values()):
            return False
    # No cyclic component may reach a different cyclic component.
    for i in cyclic:
        seen = set(comps[i])
        stack = list(comps[i])
        while stack:
            s = stack.pop()
            for (_, _, t) in edges.get(s, ()):
                if t in seen:
                    continue
                if comp_of.get(t) in cyclic and comp_of[t] != i:
                    return False
                seen.add(t)
                stack.append(t)
    return True


# -- infinite path labels -----------------------------------------------------


@dataclass(frozen=True)
class PathPair:
    """Input and output label sequences of one left-infinite path."""

    input: EvPeriodicWord
    output: EvPeriodicWord

    def aligned(self):
        """Unroll both sides to a common period and preperiod length."""
        m = lcm(len(self.input.period), len(self.output.period))
        pre = max(len(self.input.preperiod), len(self.output.preperiod))

        def unroll(w: EvPeriodicWord):
            ext = pre - len(w.preperiod)
            period = w.period
            prefix = ()
            while ext > 0:
                take = min(ext, len(period))
                prefix = period[-take:] + prefix
                period = period[-take:] + period[:-take]
                ext -= take
            full = period * (m // len(period))
            return full, prefix + w.preperiod

        pin, uin = unroll(self.input)
        pout, uout = unroll(self.output)
        return pin, uin, pout, uout


def _cycles(a: MealyAutomaton):
    """The simple cycles among non-trivial states, as edge lists.

    Each cycle is ``[(state, x, y), ...]`` meaning ``state --x|y--> next``,
    listed in cycle order starting from the least state index.
    """
    edges = _nontrivial_edges(a)
    comps = _sccs(len(a.states), lambda s: [t for (_, _, t) in edges.get(s, ())])
    comp_of = {}
    for i, comp in enumerate(comps):
        for s in comp:
            comp_of[s] = i
    cycles = []
    for comp in comps:
        if comp and comp[0] == a.trivial and len(comp) == 1:
            continue
        inner = {
            s: [(x, y, t) for (x, y, t) in edges.get(s, ()) if comp_of.get(t) == comp_of[s] and (len(comp) > 1 or t == s)]
            for s in comp
        }
        if all(not v for v in inner.values()):
            continue
        if any(len(v) != 1 for v in inner.values()):
            raise NotBoundedError("entangled cycles: automaton is not bounded")
        start = comp[0]
        cyc = []
        s = start
        while True:
            x, y, t = inner[s][0]
            cyc.append((s, x, y))
            s = t
            if s == start:
                break
        if len(cyc) != len(comp):
            raise NotBoundedError("entangled cycles: automaton is not bounded")
        cycles.append(cyc)
    return cycles


def _raw_paths(a: MealyAutomaton):
    """All left-infinite path labels, as (end state, period pair, extension pair).

    Periods are letter-index tuples read forward, rotated to end with the edge
    into the path's exit point; extensions are the fringe walks.
    """
    if not is_bounded(a):
        raise NotBoundedError("automaton is not bounded")
    edges = _nontrivial_edges(a)
    cycles = _cycles(a)
    cycle_states = {s for cyc in cycles for (s, _, _) in cyc}
    raw = []
    for cyc in cycles:
        m = len(cyc)
        for j in range(m):
            z = cyc[j][0]
            pin = tuple(cyc[(j + i) % m][1] for i in range(m))
            pout = tuple(cyc[(j + i) % m][2] for i in range(m))
            raw.append((z, pin, pout, (), ()))
            stack = [(z, (), ())]
            while stack:
                s, ein, eout = stack.pop()
                for (x, y, t) in edges.get(s, ()):
                    if t in cycle_states:
                        if s == z and not ein and t == cyc[(j + 1) % m][0] and x == cyc[j][1]:
                            continue  # the cycle edge itself
                        raise NotBoundedError("entangled cycles: automaton is not bounded")
                    nin, nout = ein + (x,), eout + (y,)
                    raw.append((t, pin, pout, nin, nout))
                    stack.append((t, nin, nout))
    return raw


def _as_pair(a: MealyAutomaton, pin, pout, ein, eout) -> PathPair:
    letters = a.alphabet.letters
    return PathPair(
        EvPeriodicWord(tuple(letters[i] for i in pin), tuple(letters[i] for i in ein)),
        EvPeriodicWord(tuple(letters[i] for i in pout), tuple(letters[i] for i in eout)),
    )


def _require_circuit(a: MealyAutomaton) -> None:
    if len(circuit_part(a)) != len(a):
        raise UnsupportedAutomatonError("automaton differs from its circuit part")


def path_pairs(a: MealyAutomaton, state: str) -> Tuple[PathPair, ...]:
    """Label pairs of all left-infinite paths ending at ``state``.

    Requires ``a`` to equal its circuit part; the trivial state has no such
    paths through non-trivial states and is rejected.
    """
    _require_circuit(a)
    s = a.state_index(state)
    if s == a.trivial:
        raise ValueError("path pairs are defined for non-trivial states only")
    pairs = {
        _as_pair(a, pin, pout, ein, eout)
        for (t, pin, pout, ein, eout) in _raw_paths(a)
        if t == s
    }
    return tuple(sorted(pairs, key=lambda p: (p.input.sort_key(a.alphabet), p.output.sort_key(a.alphabet))))


def post_critical_set(a: MealyAutomaton) -> Tuple[EvPeriodicWord, ...]:
    """All label sequences of left-infinite paths ending at non-trivial states.

    Computed on the circuit part of ``a``; input and output labels are both
    collected.  The result is sorted by (period, preperiod) in alphabet order
    and is closed under dropping the last letter.
    """
    _require_normalized(a, invertible=True)
    c = circuit_part(a)
    words = set()
    for (_, pin, pout, ein, eout) in _raw_paths(c):
        pair = _as_pair(c, pin, pout, ein, eout)
        words.add(pair.input)
        words.add(pair.output)
    elements = tuple(sorted(words, key=lambda w: w.sort_key(a.alphabet)))
    present = set(elements)
    for w in elements:
        if w.drop_last() not in present:
            raise ConsistencyError(f"post-critical set not shift-closed at {w.render()}")
    return elements


MergePair = FrozenSet[Tuple[int, int]]


def compute_Ee(a: MealyAutomaton, elements: Tuple[EvPeriodicWord, ...]) -> FrozenSet[MergePair]:
    """Unordered pairs {(p, x), (q, y)} read off paths that end at the trivial state.

    A pair records that some left-infinite path, after passing a non-trivial
    state with labels ``p|q``, takes a transition ``x|y`` into the identity.
    Elements are given as indices into ``elements``; letters as alphabet
    indices.  Degenerate pairs (p, x) = (q, y) collapse to singletons.
    """
    _require_circuit(a)
    index = {w: i for i, w in enumerate(elements)}
    pairs = set()
    for (t, pin, pout, ein, eout) in _raw_paths(a):
        into_e = [
            (x, a.out[t][x])
            for x in range(len(a.alphabet))
            if a.nxt[t][x] == a.trivial
        ]
        if not into_e:
            continue
        pair = _as_pair(a, pin, pout, ein, eout)
        try:
            p, q = index[pair.input], index[pair.output]
        except KeyError:
            raise ConsistencyError("path label missing from post-critical set") from None
        for x, y in into_e:
            pairs.add(frozenset(((p, x), (q, y))))
    return frozenset(pairs)


def compute_E(a: MealyAutomaton, elements: Tuple[EvPeriodicWord, ...]) -> FrozenSet[FrozenSet[int]]:
    """Unordered pairs {p, q} of distinct labels of one path into a non-trivial state."""
    _require_circuit(a)
    index = {w: i for i, w in enumerate(elements)}
    pairs = set()
    for (t, pin, pout, ein, eout) in _raw_paths(a):
        pair = _as_pair(a, pin, pout, ein, eout)
        try:
            p, q = index[pair.input], index[pair.output]
        except KeyError:
            raise ConsistencyError("path label missing from post-critical set") from None
        if p != q:
            pairs.add(frozenset((p, q)))
    return frozenset(pairs)


@dataclass(frozen=True)
class PostCriticalData:
    """The post-critical set with everything the refinement needs.

    ``shift[i]`` is the index of element ``i`` with its last letter dropped
    (the set is closed under that), ``last[i]`` the alphabet index of that
    letter.  ``ee_pairs``/``e_pairs`` are the merge relations described above.
    """

    alphabet: Alphabet
    elements: Tuple[EvPeriodicWord, ...]
    ee_pairs: FrozenSet[MergePair]
    e_pairs: FrozenSet[FrozenSet[int]]
    shift: Tuple[int, ...]
    last: Tuple[int, ...]

    def __len__(self):
        return len(self.elements)

    @cached_property
    def index(self):
        return {w: i for i, w in enumerate(self.elements)}

    def render(self, i: int) -> str:
        return self.elements[i].render(self.alphabet)


def post_critical_data(a: MealyAutomaton) -> PostCriticalData:
    """Bundle the post-critical set of ``a`` (which must equal its circuit part)."""
    _require_circuit(a)
    elements = post_critical_set(a)
    index = {w: i for i, w in enumerate(elements)}
    shift = tuple(index[w.drop_last()] for w in elements)
    last = tuple(a.alphabet.index(w.last) for w in elements)
    return PostCriticalData(
        alphabet=a.alphabet,
        elements=elements,
        ee_pairs=compute_Ee(a, elements),
        e_pairs=compute_E(a, elements),
        shift=shift,
        last=last,
    )
