"""Finite machines that track orbit intersections with the post-critical set.

Both machines read finite words letter by letter.  After reading ``v`` the
reached state names the set of post-critical words whose length-``|v|``
suffix lies in the single-trivial-move orbit of ``v`` (the ``part``); the
orbit-flavoured machine additionally carries the coarser set for the full
group orbit (the ``label``).  An edge is accepting when taking it makes the
underlying orbit strictly grow, so questions about orbit growth along
infinite words reduce to cycle inspection:

* the group is finite iff no reachable cycle carries an accepting edge;
* the action is transitive on every level iff every reachable label is the
  whole post-critical set and the sink is unreachable;
* the orbit of an eventually periodic infinite word is finite iff the run
  settles into a cycle free of accepting edges.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Optional, Tuple

from .automaton import MealyAutomaton
from .errors import (
    AutomatonFormatError,
    EmptyPostCriticalSetError,
    NotBoundedError,
    NotInvertibleError,
    UnsupportedAutomatonError,
)
from .partitions import PartitionChain, stabilize
from .structure import (
    PostCriticalData,
    circuit_part,
    is_bounded,
    post_critical_data,
)
from .words import Alphabet, EvPeriodicWord, OmegaWord, Word


@dataclass(frozen=True)
class MachineState:
    """``part``/``label`` are sorted post-critical indices; the sink is empty."""

    part: Tuple[int, ...]
    level: int
    label: Tuple[int, ...]

    @property
    def is_sink(self) -> bool:
        return not self.part


@dataclass(frozen=True)
class RunTrace:
    states: Tuple[int, ...]
    accepting_steps: Tuple[int, ...]  # 1-based positions of accepting edges

    @property
    def final(self) -> int:
        return self.states[-1]

    @property
    def accepting_count(self) -> int:
        return len(self.accepting_steps)


@dataclass(frozen=True)
class Recognizer:
    flavor: str  # "Re" or "R"
    alphabet: Alphabet
    states: Tuple[MachineState, ...]
    initial: int
    sink: int
    delta: Tuple[Tuple[int, ...], ...]
    edge_accepting: FrozenSet[Tuple[int, int]]
    state_accepting: FrozenSet[int]
    pcs: Optional[PostCriticalData] = field(default=None, compare=False)
    chain: Optional[PartitionChain] = field(default=None, compare=False)

    def run(self, word: Iterable[str]) -> RunTrace:
        s = self.initial
        states = [s]
        accepting = []
        for i, letter in enumerate(word, start=1):
            x = self.alphabet.index(letter)
            if (s, x) in self.edge_accepting:
                accepting.append(i)
            s = self.delta[s][x]
            states.append(s)
        return RunTrace(tuple(states), tuple(accepting))

    def reachable(self) -> set[int]:
        seen = {self.initial}
        stack = [self.initial]
        while stack:
            s = stack.pop()
            for t in self.delta[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    def to_json_dict(self, include_sink: bool = True) -> dict:
        keep = [i for i in range(len(self.states)) if include_sink or i != self.sink]
        return {
            "flavor": self.flavor,
            "alphabet": list(self.alphabet.letters),
            "states": [
                {
                    "id": i,
                    "part": list(self.states[i].part),
                    "label": list(self.states[i].label),
                    "partition": self.states[i].level,
                    "accepting": i in self.state_accepting,
                }
                for i in keep
            ],
            "initial": self.initial,
            "sink": self.sink if include_sink else None,
            "edges": [
                {
                    "from": s,
                    "letter": letter,
                    "to": self.delta[s][x],
                    "accepting": (s, x) in self.edge_accepting,
                }
                for s in keep
                for x, letter in enumerate(self.alphabet.letters)
                if include_sink or self.delta[s][x] != self.sink
            ],
        }

    def to_json(self, include_sink: bool = True) -> str:
        return json.dumps(self.to_json_dict(include_sink), indent=2)

    def digest(self) -> str:
        blob = json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_dot(self, include_sink: bool = True) -> str:
        lines = [f"digraph {self.flavor} {{", "  rankdir=LR;", '  start [shape=point];']
        for i, st in enumerate(self.states):
            if st.is_sink and not include_sink:
                continue
            if st.is_sink:
                label = "sink"
                shape = "square"
            else:
                part = ",".join(map(str, st.part))
                label = f"{{{part}}} pi{st.level}"
                if self.flavor == "R" and st.label != st.part:
                    label += " / {" + ",".join(map(str, st.label)) + "}"
                shape = "circle"
            peripheries = 2 if i in self.state_accepting else 1
            lines.append(
                f'  q{i} [shape={shape}, peripheries={peripheries}, label="{label}"];'
            )
        lines.append(f"  start -> q{self.initial};")
        for s in range(len(self.states)):
            if self.states[s].is_sink and not include_sink:
                continue
            by_target: dict[tuple[int, bool], list[str]] = {}
            for x, letter in enumerate(self.alphabet.letters):
                t = self.delta[s][x]
                if self.states[t].is_sink and not include_sink:
                    continue
                key = (t, (s, x) in self.edge_accepting)
                by_target.setdefault(key, []).append(letter)
            for (t, acc), letters in sorted(by_target.items(), key=lambda kv: kv[0][0]):
                style = ', style=bold, color="#b03030"' if acc else ""
                lines.append(
                    f'  q{s} -> q{t} [label="{",".join(letters)}"{style}];'
                )
        lines.append("}")
        return "\n".join(lines) + "\n"


def recognizer_from_json(text: str | dict) -> Recognizer:
    """Rebuild a machine from its JSON export (provenance fields are not kept)."""
    data = json.loads(text) if isinstance(text, str) else text
    try:
        alphabet = Alphabet(tuple(data["alphabet"]))
        ids = [st["id"] for st in data["states"]]
        if ids != list(range(len(ids))):
            raise AutomatonFormatError("machine state ids must be 0..n-1")
        states = tuple(
            MachineState(
                part=tuple(st["part"]),
                level=st["partition"],
                label=tuple(st["label"]),
            )
            for st in data["states"]
        )
        n = len(states)
        k = len(alphabet)
        delta = [[None] * k for _ in range(n)]
        edge_acc = set()
        for e in data["edges"]:
            x = alphabet.index(e["letter"])
            delta[e["from"]][x] = e["to"]
            if e["accepting"]:
                edge_acc.add((e["from"], x))
        if any(None in row for row in delta):
            raise AutomatonFormatError("machine edges are not total")
        state_acc = frozenset(st["id"] for st in data["states"] if st["accepting"])
        return Recognizer(
            flavor=data["flavor"],
            alphabet=alphabet,
            states=states,
            initial=data["initial"],
            sink=data["sink"],
            delta=tuple(tuple(row) for row in delta),
            edge_accepting=frozenset(edge_acc),
            state_accepting=state_acc,
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise AutomatonFormatError(f"malformed machine JSON: {exc}") from None


# -- construction -------------------------------------------------------------


def build_eorbit_recognizer(
    pcs: PostCriticalData, chain: PartitionChain | None = None
) -> Recognizer:
    """The machine tracking single-trivial-move orbits (flavor ``Re``).

    Edges into the sink are never accepting: once no post-critical suffix is
    left in the orbit there is nothing for the machine to witness.
    """
    if chain is None:
        chain = stabilize(pcs)
    depth = chain.depth
    ids: dict[tuple[int, Tuple[int, ...]], int] = {}
    states: list[MachineState] = []
    for i, pi in enumerate(chain.partitions):
        for block in pi.blocks:
            ids[(i, block)] = len(states)
            states.append(MachineState(part=block, level=i, label=block))
    sink = len(states)
    states.append(MachineState(part=(), level=0, label=()))

    k = len(pcs.alphabet)
    delta = []
    edge_acc = set()
    for i, pi in enumerate(chain.partitions):
        step = chain.steps[i]
        nxt_level = min(i + 1, depth)
        for b, block in enumerate(pi.blocks):
            row = []
            for x in range(k):
                group = step.groups[step.group_of_cell[(b, x)]]
                if group.members:
                    target = ids[(nxt_level, group.members)]
                    row.append(target)
                    if group.merged:
                        edge_acc.add((ids[(i, block)], x))
                else:
                    row.append(sink)
            delta.append(tuple(row))
    delta.append((sink,) * k)

    state_acc = frozenset(
        delta[s][x] for (s, x) in edge_acc if delta[s][x] != sink
    )
    machine = Recognizer(
        flavor="Re",
        alphabet=pcs.alphabet,
        states=tuple(states),
        initial=ids[(0, chain.partitions[0].blocks[0])],
        sink=sink,
        delta=tuple(delta),
        edge_accepting=frozenset(edge_acc),
        state_accepting=state_acc,
        pcs=pcs,
        chain=chain,
    )
    return _prune(machine)


def _prune(machine: Recognizer) -> Recognizer:
    """Drop states unreachable from the initial one; the sink always stays."""
    keep = sorted(machine.reachable() | {machine.sink})
    if len(keep) == len(machine.states):
        return machine
    remap = {old: new for new, old in enumerate(keep)}
    return Recognizer(
        flavor=machine.flavor,
        alphabet=machine.alphabet,
        states=tuple(machine.states[s] for s in keep),
        initial=remap[machine.initial],
        sink=remap[machine.sink],
        delta=tuple(
            tuple(remap[t] for t in machine.delta[s]) for s in keep
        ),
        edge_accepting=frozenset(
            (remap[s], x) for (s, x) in machine.edge_accepting if s in remap
        ),
        state_accepting=frozenset(
            remap[s] for s in machine.state_accepting if s in remap
        ),
        pcs=machine.pcs,
        chain=machine.chain,
    )


def build_orbit_recognizer(re: Recognizer) -> Recognizer:
    """Relabel the ``Re`` machine for full group orbits (flavor ``R``).

    Blocks related through a shared path into a non-trivial state are united;
    a state is accepting when its united label swallows an accepting ``Re``
    block of the same partition.  Transitions and edge marks are unchanged.
    """
    if re.pcs is None or re.chain is None:
        raise ValueError("orbit relabelling needs the machine's provenance data")
    e_pairs = re.pcs.e_pairs
    merged_labels: dict[int, dict[Tuple[int, ...], Tuple[int, ...]]] = {}
    for i, pi in enumerate(re.chain.partitions):
        parent = list(range(len(pi.blocks)))

        def find(b):
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            return b

        for pair in e_pairs:
            p, q = tuple(pair)
            rp, rq = find(pi.block_of[p]), find(pi.block_of[q])
            if rp != rq:
                parent[max(rp, rq)] = min(rp, rq)
        unions: dict[int, list[int]] = {}
        for b, block in enumerate(pi.blocks):
            unions.setdefault(find(b), []).extend(block)
        merged_labels[i] = {
            pi.blocks[b]: tuple(sorted(unions[find(b)])) for b in range(len(pi.blocks))
        }

    states = []
    for st in re.states:
        if st.is_sink:
            states.append(st)
        else:
            states.append(
                MachineState(
                    part=st.part,
                    level=st.level,
                    label=merged_labels[st.level][st.part],
                )
            )
    accepting_blocks = {
        (re.states[s].level, re.states[s].part) for s in re.state_accepting
    }
    state_acc = frozenset(
        i
        for i, st in enumerate(states)
        if not st.is_sink
        and any(
            level == st.level and set(part) <= set(st.label)
            for (level, part) in accepting_blocks
        )
    )
    return Recognizer(
        flavor="R",
        alphabet=re.alphabet,
        states=tuple(states),
        initial=re.initial,
        sink=re.sink,
        delta=re.delta,
        edge_accepting=re.edge_accepting,
        state_accepting=state_acc,
        pcs=re.pcs,
        chain=re.chain,
    )


# -- analysis pipeline ---------------------------------------------------------


@dataclass(frozen=True)
class Analysis:
    """Everything derived from one automaton, built lazily by :func:`analyze`."""

    original: MealyAutomaton
    normalized: MealyAutomaton          # minimized, with identity state
    circuit: MealyAutomaton
    pcs: Optional[PostCriticalData]     # None when the circuit part is trivial
    chain: Optional[PartitionChain]
    re_machine: Optional[Recognizer]
    r_machine: Optional[Recognizer]

    @property
    def is_circuit(self) -> bool:
        return len(self.circuit) == len(self.normalized)


def analyze(a: MealyAutomaton) -> Analysis:
    """Normalize ``a`` and build both machines (when the circuit part is non-trivial)."""
    if not a.is_invertible():
        raise NotInvertibleError("automaton is not invertible")
    m = a.minimize().ensure_trivial_state()
    if not is_bounded(m):
        raise NotBoundedError("automaton is not bounded")
    c = circuit_part(m)
    if len(c) == 1:
        return Analysis(a, m, c, None, None, None, None)
    pcs = post_critical_data(c)
    chain = stabilize(pcs)
    re = build_eorbit_recognizer(pcs, chain)
    r = build_orbit_recognizer(re)
    return Analysis(a, m, c, pcs, chain, re, r)


@dataclass(frozen=True)
class Lasso:
    """A reachable cycle witnessing infinite growth: read stem, repeat cycle."""

    stem: Word
    cycle: Word


@dataclass(frozen=True)
class FinitenessResult:
    finite: bool
    witness: Optional[Lasso]
    analysis: Analysis


def _accepting_cycle_states(machine: Recognizer) -> tuple[set[int], list]:
    """States on cycles that contain an accepting edge, plus those edges."""
    from .structure import _sccs  # same iterative Tarjan

    comp_of = {}
    for i, comp in enumerate(_sccs(len(machine.states), lambda s: machine.delta[s])):
        for s in comp:
            comp_of[s] = i
    cycle_edges = sorted(
        (s, x)
        for (s, x) in machine.edge_accepting
        if comp_of[s] == comp_of[machine.delta[s][x]]
    )
    hot = {comp_of[s] for (s, _) in cycle_edges}
    states = {s for s, c in comp_of.items() if c in hot}
    return states, cycle_edges


def _bfs_path(machine: Recognizer, sources: Iterable[int], target: int) -> Word | None:
    """Letter word along a shortest delta-path from any source to target."""
    sources = list(sources)
    prev: dict[int, tuple[int, int] | None] = {s: None for s in sources}
    queue = list(sources)
    qi = 0
    while qi < len(queue):
        s = queue[qi]
        qi += 1
        if s == target:
            letters = []
            cur = s
            while prev[cur] is not None:
                p, x = prev[cur]
                letters.append(machine.alphabet.letters[x])
                cur = p
            return tuple(reversed(letters))
        for x, t in enumerate(machine.delta[s]):
            if t not in prev:
                prev[t] = (s, x)
                queue.append(t)
    return None


def _as_analysis(a: "MealyAutomaton | Analysis") -> Analysis:
    return a if isinstance(a, Analysis) else analyze(a)


def decide_finite(a: "MealyAutomaton | Analysis") -> FinitenessResult:
    """Whether the group generated by the automaton's states is finite.

    Finite exactly when the growth machine has no reachable cycle through an
    accepting edge; an infinite verdict comes with a replayable lasso.
    """
    ana = _as_analysis(a)
    if ana.re_machine is None:
        return FinitenessResult(True, None, ana)
    machine = ana.re_machine
    _, cycle_edges = _accepting_cycle_states(machine)
    reachable = machine.reachable()
    for (s, x) in cycle_edges:
        if s not in reachable:
            continue
        stem = _bfs_path(machine, [machine.initial], s)
        t = machine.delta[s][x]
        back = _bfs_path(machine, [t], s)
        cycle = (machine.alphabet.letters[x],) + back
        return FinitenessResult(False, Lasso(stem, cycle), ana)
    return FinitenessResult(True, None, ana)


def decide_level_transitive(a: "MealyAutomaton | Analysis") -> bool:
    """Whether the group acts transitively on every level of the tree.

    Only supported when the automaton equals its circuit part (nothing was
    cut away); everything hinges on every reachable label being full.
    """
    ana = _as_analysis(a)
    if not ana.is_circuit:
        raise UnsupportedAutomatonError(
            "level transitivity needs the automaton to equal its circuit part"
        )
    if ana.r_machine is None:
        return False  # trivial group on at least two letters
    machine = ana.r_machine
    full = tuple(range(len(ana.pcs)))
    for s in machine.reachable():
        if machine.states[s].is_sink or machine.states[s].label != full:
            return False
    return True


@dataclass(frozen=True)
class OrbitVerdict:
    finite: bool
    witness: Optional[Lasso]          # infinite case
    last_growth_step: Optional[int]   # finite case: last run step on an accepting edge


def classify_omega_orbit(a: "MealyAutomaton | Analysis", w: OmegaWord) -> OrbitVerdict:
    """Whether the orbit of the infinite word ``u v v v ...`` is finite.

    Runs the orbit machine through ``u`` and then period blocks of ``v``
    until the state at a block boundary repeats; the orbit is infinite
    exactly when the repeating stretch crosses an accepting edge.
    """
    ana = _as_analysis(a)
    if not ana.is_circuit:
        raise UnsupportedAutomatonError(
            "orbit classification needs the automaton to equal its circuit part"
        )
    for letter in w.preperiod + w.period:
        ana.normalized.alphabet.index(letter)
    if ana.r_machine is None:
        return OrbitVerdict(True, None, 0)
    machine = ana.r_machine

    s = machine.initial
    last_accept = 0
    step = 0
    for letter in w.preperiod:
        x = machine.alphabet.index(letter)
        step += 1
        if (s, x) in machine.edge_accepting:
            last_accept = step
        s = machine.delta[s][x]

    seen = {s: (0, step)}
    block = 0
    while True:
        block += 1
        for letter in w.period:
            x = machine.alphabet.index(letter)
            step += 1
            if (s, x) in machine.edge_accepting:
                last_accept = step
            s = machine.delta[s][x]
        if s in seen:
            first_block, first_step = seen[s]
            if last_accept > first_step:
                # The repeating stretch crosses an accepting edge.
                stem = w.prefix(len(w.preperiod) + first_block * len(w.period))
                cycle = w.period * (block - first_block)
                return OrbitVerdict(False, Lasso(stem, cycle), None)
            return OrbitVerdict(True, None, last_accept)
        seen[s] = (block, step)


def classify_postcritical(a: "MealyAutomaton | Analysis", p: EvPeriodicWord) -> str:
    """``"bounded"`` or ``"unbounded"``: do the orbits of the suffixes of the
    post-critical word ``p`` stay bounded in size?

    Unbounded exactly when some machine state whose part contains ``p`` is
    reachable from a cycle with an accepting edge.
    """
    ana = _as_analysis(a)
    if not ana.is_circuit:
        raise UnsupportedAutomatonError(
            "post-critical classification needs the automaton to equal its circuit part"
        )
    if ana.pcs is None:
        raise EmptyPostCriticalSetError("empty post-critical set")
    try:
        idx = ana.pcs.index[p]
    except KeyError:
        raise ValueError(f"{p.render()} is not post-critical for this automaton") from None
    machine = ana.re_machine
    sources, _ = _accepting_cycle_states(machine)
    seen = set(sources)
    stack = list(sources)
    while stack:
        s = stack.pop()
        for t in machine.delta[s]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    for s in seen:
        if idx in machine.states[s].part:
            return "unbounded"
    return "bounded"


def export_machine(machine: Recognizer, fmt: str = "json", include_sink: bool = True) -> str:
    if machine is None:
        raise ValueError("no machine to export (empty post-critical set)")
    if fmt == "json":
        return machine.to_json(include_sink)
    if fmt == "dot":
        return machine.to_dot(include_sink)
    raise ValueError(f"unknown export format {fmt!r}")
