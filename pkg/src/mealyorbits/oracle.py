"""Brute-force ground truth, used to cross-validate every machine verdict.

Nothing here looks at the recognizer constructions: orbits are computed by
explicitly acting on all words of each level (words are base-k codes, the
action tables grow one letter at a time), and group elements are enumerated
as minimized pointed transducers.  The :func:`cross_check` driver then
replays the machines against these tables and reports any disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import kernel
from .automaton import MealyAutomaton, compose, union_with_inverse
from .errors import CapExceededError, NotInvertibleError
from .partitions import Partition
from .recognizer import Recognizer, analyze
from .words import OmegaWord

DEFAULT_MAX_WORDS = 65536


def default_max_level(k: int) -> int:
    return 12 if k == 2 else 8


class OrbitTables:
    """Level-by-level orbit labels for the group generated by ``a``'s states.

    ``a`` must be minimized with an identity state.  Generators are the
    non-trivial states of ``a`` together with their inverses; a word moves to
    its image under a generator, for the single-move flavour only when the
    generator's section at the word is the identity.  Labels are dense ints
    per level, identical across kernel backends.
    """

    def __init__(self, a: MealyAutomaton):
        if not a.is_invertible():
            raise NotInvertibleError("orbit tables need an invertible automaton")
        u = union_with_inverse(a)
        self.automaton = u
        self.k = len(a.alphabet)
        self.level = 0
        self._out = np.array(u.out, dtype=np.int64)
        self._nxt = np.array(u.nxt, dtype=np.int64)
        self.trivial = u.trivial
        gens = [s for s in range(len(u.states)) if s != u.trivial]
        self.img = np.zeros((len(gens), 1), dtype=np.int64)
        self.sec = np.array(gens, dtype=np.int64).reshape(-1, 1)
        self._cache: dict[str, np.ndarray] = {}

    @property
    def n_words(self) -> int:
        return self.k ** self.level

    def advance(self) -> None:
        self.img, self.sec = kernel.advance_action(
            self._out, self._nxt, self.img, self.sec
        )
        self.level += 1
        self._cache.clear()

    def single_move_labels(self) -> np.ndarray:
        """Orbit labels under generator moves whose section is the identity."""
        if "e" not in self._cache:
            mask = (self.sec == self.trivial).astype(np.uint8)
            self._cache["e"] = kernel.union_labels(self.img, mask)
        return self._cache["e"]

    def orbit_labels(self) -> np.ndarray:
        """Orbit labels under the full group action."""
        if "o" not in self._cache:
            mask = np.ones(self.img.shape, dtype=np.uint8)
            self._cache["o"] = kernel.union_labels(self.img, mask)
        return self._cache["o"]

    @staticmethod
    def class_sizes(labels: np.ndarray) -> np.ndarray:
        return np.bincount(labels)

    def word_of_code(self, code: int) -> Tuple[str, ...]:
        letters = []
        for _ in range(self.level):
            letters.append(self.automaton.alphabet.letters[code % self.k])
            code //= self.k
        return tuple(reversed(letters))


def _pcs_suffix_codes(pcs, n: int) -> list[int]:
    """Base-k codes of the length-``n`` suffixes of all post-critical words."""
    k = len(pcs.alphabet)
    codes = []
    for w in pcs.elements:
        code = 0
        for letter in w.suffix(n):
            code = code * k + pcs.alphabet.index(letter)
        codes.append(code)
    return codes


def _tables_at_level(a: MealyAutomaton, n: int) -> OrbitTables:
    m = a.minimize().ensure_trivial_state()
    k = len(m.alphabet)
    if n > default_max_level(k) or k ** n > DEFAULT_MAX_WORDS:
        raise CapExceededError(f"level {n} exceeds the brute-force cap")
    tables = OrbitTables(m)
    for _ in range(n):
        tables.advance()
    return tables


def _blocks_of(tables: OrbitTables, labels) -> list[list[Tuple[str, ...]]]:
    groups: dict[int, list] = {}
    for code in range(tables.n_words):
        groups.setdefault(int(labels[code]), []).append(tables.word_of_code(code))
    return [groups[key] for key in sorted(groups)]


def e_orbits_level(a: MealyAutomaton, n: int) -> list[list[Tuple[str, ...]]]:
    """The single-trivial-move orbit classes of all length-``n`` words."""
    tables = _tables_at_level(a, n)
    return _blocks_of(tables, tables.single_move_labels())


def orbits_level(a: MealyAutomaton, n: int) -> list[list[Tuple[str, ...]]]:
    """The full-group orbit classes of all length-``n`` words."""
    tables = _tables_at_level(a, n)
    return _blocks_of(tables, tables.orbit_labels())


def growth_csv(sizes: Sequence[int]) -> str:
    """Orbit-growth series as two-column CSV text."""
    lines = ["level,orbit_size"]
    lines += [f"{n},{size}" for n, size in enumerate(sizes)]
    return "\n".join(lines) + "\n"


def pcs_partition_level(a: MealyAutomaton, n: int) -> Partition:
    """Partition of post-critical words by same-single-move-orbit suffixes.

    Brute force; the refinement chain must reproduce this at every level.
    """
    ana = analyze(a)
    if ana.pcs is None:
        raise ValueError("trivial circuit part: no post-critical words")
    if n == 0:
        return Partition.single(len(ana.pcs))
    tables = OrbitTables(ana.circuit)
    for _ in range(n):
        tables.advance()
    labels = tables.single_move_labels()
    groups: dict[int, list[int]] = {}
    for i, code in enumerate(_pcs_suffix_codes(ana.pcs, n)):
        groups.setdefault(int(labels[code]), []).append(i)
    return Partition.from_blocks(groups.values())


def orbit_growth(a: MealyAutomaton, w: OmegaWord, levels: int) -> list[int]:
    """Sizes of the full orbit of each prefix of ``w``, levels ``0..levels``."""
    ana = analyze(a)
    tables = OrbitTables(ana.circuit)
    k = tables.k
    if k ** levels > DEFAULT_MAX_WORDS:
        raise CapExceededError(f"level {levels} needs {k ** levels} words")
    sizes = [1]
    code = 0
    for n in range(1, levels + 1):
        tables.advance()
        code = code * k + tables.automaton.alphabet.index(w.prefix(n)[-1])
        labels = tables.orbit_labels()
        sizes.append(int(tables.class_sizes(labels)[labels[code]]))
    return sizes


def activity_counts(a: MealyAutomaton, levels: int) -> list[int]:
    """Max over generators of the number of non-identity sections per level.

    Stays bounded for the automata this library targets; grows without bound
    otherwise, which makes it a handy smoke test.
    """
    tables = OrbitTables(a.minimize().ensure_trivial_state())
    counts = []
    for _ in range(levels):
        tables.advance()
        counts.append(int((tables.sec != tables.trivial).sum(axis=1).max()))
    return counts


# -- group enumeration ---------------------------------------------------------


def _dense(values: dict) -> dict:
    ids: dict = {}
    out = {}
    for key, value in values.items():
        if value not in ids:
            ids[value] = len(ids)
        out[key] = ids[value]
    return out


def _canonical_pointed(a: MealyAutomaton, point: int):
    """Canonical key of the transducer ``a`` started at ``point``.

    Restrict to the reachable part, merge behaviourally equal states, then
    read the tables off in breadth-first letter order.  Two pointed automata
    get the same key exactly when they act identically on all words.
    """
    k = len(a.alphabet)
    reach = [point]
    seen = {point}
    for s in reach:
        for t in a.nxt[s]:
            if t not in seen:
                seen.add(t)
                reach.append(t)
    cls = _dense({s: tuple(a.out[s]) for s in reach})
    n_cls = len(set(cls.values()))
    while True:
        sig = {
            s: (cls[s],) + tuple(cls[a.nxt[s][x]] for x in range(k)) for s in reach
        }
        cls = _dense(sig)
        n_new = len(set(cls.values()))
        if n_new == n_cls:
            break
        n_cls = n_new
    pos = {}
    order = []
    for s in reach:  # reach is already in BFS order from the point
        if cls[s] not in pos:
            pos[cls[s]] = len(order)
            order.append(s)
    rows = tuple(
        (tuple(a.out[s]), tuple(pos[cls[a.nxt[s][x]]] for x in range(k)))
        for s in order
    )
    return rows


def _machine_from_key(key, alphabet) -> MealyAutomaton:
    names = tuple(f"g{i}" for i in range(len(key)))
    out = tuple(row[0] for row in key)
    nxt = tuple(row[1] for row in key)
    return MealyAutomaton(alphabet, names, out, nxt, None)


def enumerate_group(a: MealyAutomaton, cap: int = 5000) -> Optional[int]:
    """Order of the group generated by the automaton's states.

    Breadth-first closure under left multiplication by generators, elements
    held as canonical pointed transducers.  Returns ``None`` once more than
    ``cap`` distinct elements appear (the group may well be infinite).
    """
    m = a.minimize().ensure_trivial_state()
    if not m.is_invertible():
        raise NotInvertibleError("group enumeration needs an invertible automaton")
    u = union_with_inverse(m)
    gens = [s for s in range(len(u.states)) if s != u.trivial]
    identity = _canonical_pointed(u, u.trivial)
    seen = {identity}
    reps = [_machine_from_key(identity, u.alphabet)]
    qi = 0
    while qi < len(reps):
        elem = reps[qi]
        qi += 1
        for g in gens:
            prod = compose(u, elem)  # generator applied after the element
            key = _canonical_pointed(prod, g * len(elem.states))
            if key not in seen:
                seen.add(key)
                if len(seen) > cap:
                    return None
                reps.append(_machine_from_key(key, u.alphabet))
    return len(seen)


# -- machine cross-validation --------------------------------------------------


@dataclass(frozen=True)
class CheckRecord:
    name: str
    level: int
    ok: bool
    details: str = ""


@dataclass(frozen=True)
class CrossCheckReport:
    levels: int
    backend: str
    records: Tuple[CheckRecord, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def failures(self) -> Tuple[CheckRecord, ...]:
        return tuple(r for r in self.records if not r.ok)

    def summary(self) -> str:
        lines = [
            f"cross-check: {len(self.records)} checks over levels 1..{self.levels} "
            f"[{self.backend} kernel]"
        ]
        by_name: dict[str, list[CheckRecord]] = {}
        for r in self.records:
            by_name.setdefault(r.name, []).append(r)
        for name, recs in sorted(by_name.items()):
            bad = [r for r in recs if not r.ok]
            if bad:
                lines.append(f"  {name}: FAIL at level {bad[0].level}: {bad[0].details}")
            else:
                lines.append(f"  {name}: ok ({len(recs)} levels)")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "checks": [
                {
                    "name": r.name,
                    "level": r.level,
                    "status": "ok" if r.ok else "mismatch",
                    "details": r.details,
                }
                for r in self.records
            ]
        }


ALL_CHECKS = ("parts", "labels", "edges", "chain", "eclasses")


def _advance_run(machine: Recognizer, states: np.ndarray, k: int) -> np.ndarray:
    """Machine states after one more letter, for all words at once."""
    delta = np.array(machine.delta, dtype=np.int64)
    return delta[np.repeat(states, k), np.tile(np.arange(k), states.shape[0])]


def cross_check(
    a: MealyAutomaton,
    max_level: Optional[int] = None,
    machines: Optional[Tuple[Recognizer, Recognizer]] = None,
    checks: Sequence[str] = ALL_CHECKS,
    max_words: int = DEFAULT_MAX_WORDS,
) -> CrossCheckReport:
    """Replay the machines against brute-force orbits, level by level.

    ``machines`` overrides the pair built from ``a`` (used to prove the
    harness can catch a corrupted machine).  Checks:

    * ``parts``: the reached single-move machine state lists exactly the
      post-critical words whose suffix shares the word's single-move orbit;
    * ``labels``: same for the orbit machine and full orbits;
    * ``edges``: an edge is accepting exactly when taking it grows the
      single-move orbit (runs touching the dead state are out of scope);
    * ``chain``: the refinement chain matches the brute-force partition of
      post-critical suffixes at every level;
    * ``eclasses``: a full orbit that splits into several single-move classes
      has post-critical suffixes in all of them.
    """
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    ana = analyze(a)
    k = len(ana.normalized.alphabet)
    if max_level is None:
        max_level = default_max_level(k)
        while k ** max_level > max_words:
            max_level -= 1
    if k ** max_level > max_words:
        raise CapExceededError(
            f"level {max_level} needs {k ** max_level} words; raise max_words to allow"
        )
    if ana.pcs is None:
        return CrossCheckReport(levels=0, backend=kernel.BACKEND, records=())
    re_machine, r_machine = machines if machines is not None else (
        ana.re_machine,
        ana.r_machine,
    )
    pcs, chain = ana.pcs, ana.chain
    alphabet = ana.circuit.alphabet

    tables = OrbitTables(ana.circuit)
    records: list[CheckRecord] = []

    re_acc = np.zeros((len(re_machine.states), k), dtype=bool)
    for (s, x) in re_machine.edge_accepting:
        re_acc[s, x] = True
    re_parts = [set(st.part) for st in re_machine.states]
    r_labels = [set(st.label) for st in r_machine.states]

    re_states = np.array([re_machine.initial], dtype=np.int64)
    r_states = np.array([r_machine.initial], dtype=np.int64)
    e_labels = np.zeros(1, dtype=np.int64)
    e_sizes = np.ones(1, dtype=np.int64)
    suffix_codes = [0] * len(pcs)

    for n in range(1, max_level + 1):
        old_re_states, old_e_labels, old_e_sizes = re_states, e_labels, e_sizes
        tables.advance()
        re_states = _advance_run(re_machine, re_states, k)
        r_states = _advance_run(r_machine, r_states, k)
        e_labels = tables.single_move_labels()
        e_sizes = tables.class_sizes(e_labels)
        suffix_codes = [
            alphabet.index(w.suffix(n)[0]) * k ** (n - 1) + c
            for w, c in zip(pcs.elements, suffix_codes)
        ]

        if "parts" in checks:
            by_label: dict[int, set] = {}
            for i, code in enumerate(suffix_codes):
                by_label.setdefault(int(e_labels[code]), set()).add(i)
            bad = None
            for v in range(tables.n_words):
                expect = by_label.get(int(e_labels[v]), set())
                if re_parts[re_states[v]] != expect:
                    bad = (v, expect, re_parts[re_states[v]])
                    break
            records.append(
                CheckRecord(
                    "parts",
                    n,
                    bad is None,
                    ""
                    if bad is None
                    else f"word {''.join(tables.word_of_code(bad[0]))}: "
                    f"expected {sorted(bad[1])}, machine says {sorted(bad[2])}",
                )
            )

        if "labels" in checks:
            o_labels = tables.orbit_labels()
            by_olabel: dict[int, set] = {}
            for i, code in enumerate(suffix_codes):
                by_olabel.setdefault(int(o_labels[code]), set()).add(i)
            bad = None
            for v in range(tables.n_words):
                expect = by_olabel.get(int(o_labels[v]), set())
                if r_labels[r_states[v]] != expect:
                    bad = (v, expect, r_labels[r_states[v]])
                    break
            records.append(
                CheckRecord(
                    "labels",
                    n,
                    bad is None,
                    ""
                    if bad is None
                    else f"word {''.join(tables.word_of_code(bad[0]))}: "
                    f"expected {sorted(bad[1])}, machine says {sorted(bad[2])}",
                )
            )

        if "edges" in checks:
            bad = None
            for v in range(old_re_states.shape[0]):
                s = old_re_states[v]
                if s == re_machine.sink:
                    continue
                size_v = old_e_sizes[old_e_labels[v]]
                for x in range(k):
                    if re_states[v * k + x] == re_machine.sink:
                        continue
                    grew = bool(e_sizes[e_labels[v * k + x]] > size_v)
                    if grew != bool(re_acc[s, x]):
                        bad = (v, x, grew)
                        break
                if bad:
                    break
            records.append(
                CheckRecord(
                    "edges",
                    n,
                    bad is None,
                    ""
                    if bad is None
                    else "word "
                    + "".join(
                        tables.word_of_code(bad[0] * k + bad[1])
                    )
                    + f": orbit {'grew' if bad[2] else 'did not grow'}, marks say otherwise",
                )
            )

        if "chain" in checks:
            groups: dict[int, list[int]] = {}
            for i, code in enumerate(suffix_codes):
                groups.setdefault(int(e_labels[code]), []).append(i)
            brute = Partition.from_blocks(groups.values())
            predicted = chain.at_level(n)
            records.append(
                CheckRecord(
                    "chain",
                    n,
                    brute == predicted,
                    ""
                    if brute == predicted
                    else f"chain says {predicted.blocks}, orbits say {brute.blocks}",
                )
            )

        if "eclasses" in checks:
            o_labels = tables.orbit_labels()
            e_in_orbit: dict[int, set] = {}
            for v in range(tables.n_words):
                e_in_orbit.setdefault(int(o_labels[v]), set()).add(int(e_labels[v]))
            pcs_e = {int(e_labels[code]) for code in suffix_codes}
            bad = any(
                len(es) >= 2 and not es <= pcs_e for es in e_in_orbit.values()
            )
            records.append(
                CheckRecord(
                    "eclasses",
                    n,
                    not bad,
                    ""
                    if not bad
                    else "an orbit splits into single-move classes missing "
                    "post-critical suffixes",
                )
            )

    return CrossCheckReport(
        levels=max_level, backend=kernel.BACKEND, records=tuple(records)
    )
