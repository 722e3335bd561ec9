"""Letter-to-letter transducers (Mealy automata) with total transition tables.

A state ``s`` acts on words: it rewrites the first letter through its output
table and hands the rest of the word to the successor state (the section
``s|_x``).  All tables here are total, so every state acts on every word.

The text format, one automaton per file::

    # comment
    alphabet a b c d
    state 1
      a|b -> e
      b|a -> e
      c|c -> e
      d|d -> e
    state e identity

``state NAME identity`` declares NAME with implied ``x|x`` self-loops.
Targets may reference states declared later in the file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Tuple

from .errors import AutomatonFormatError, NotInvertibleError
from .words import Alphabet, Word


@dataclass(frozen=True)
class MealyAutomaton:
    """Immutable automaton: ``out[s][x]`` output letter, ``nxt[s][x]`` section."""

    alphabet: Alphabet
    states: Tuple[str, ...]
    out: Tuple[Tuple[int, ...], ...]
    nxt: Tuple[Tuple[int, ...], ...]
    trivial: int | None = None

    def __post_init__(self):
        k = len(self.alphabet)
        n = len(self.states)
        if len(set(self.states)) != n or n == 0:
            raise AutomatonFormatError("state names must be non-empty and distinct")
        if len(self.out) != n or len(self.nxt) != n:
            raise AutomatonFormatError("transition tables do not match state count")
        for row_out, row_nxt in zip(self.out, self.nxt):
            if len(row_out) != k or len(row_nxt) != k:
                raise AutomatonFormatError("transition table is not total")
            if not all(0 <= y < k for y in row_out):
                raise AutomatonFormatError("output letter index out of range")
            if not all(0 <= t < n for t in row_nxt):
                raise AutomatonFormatError("successor state index out of range")
        if self.trivial is not None:
            s = self.trivial
            if self.out[s] != tuple(range(k)) or self.nxt[s] != (s,) * k:
                raise AutomatonFormatError(
                    f"state {self.states[s]!r} is marked trivial but is not an identity"
                )

    # -- basics ------------------------------------------------------------

    @cached_property
    def _state_index(self):
        return {name: i for i, name in enumerate(self.states)}

    def state_index(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise AutomatonFormatError(f"unknown state {name!r}") from None

    def __len__(self):
        return len(self.states)

    @property
    def trivial_name(self) -> str | None:
        return None if self.trivial is None else self.states[self.trivial]

    def act(self, state: str, word: Iterable[str]) -> tuple[Word, str]:
        """Apply ``state`` to ``word``; return (output word, section name)."""
        s = self.state_index(state)
        xs = [self.alphabet.index(x) for x in word]
        out = []
        for x in xs:
            out.append(self.out[s][x])
            s = self.nxt[s][x]
        return tuple(self.alphabet.letters[y] for y in out), self.states[s]

    def is_invertible(self) -> bool:
        k = len(self.alphabet)
        return all(sorted(row) == list(range(k)) for row in self.out)

    # -- constructions -----------------------------------------------------

    def invert(self) -> "MealyAutomaton":
        """The automaton of inverse transformations (state names get ``^-1``)."""
        if not self.is_invertible():
            raise NotInvertibleError("cannot invert: some output row is not a permutation")
        names = []
        used = set()
        for i, name in enumerate(self.states):
            base = name[:-3] if name.endswith("^-1") else name + "^-1"
            if i == self.trivial:
                base = name
            while base in used:
                base += "'"
            used.add(base)
            names.append(base)
        k = len(self.alphabet)
        out = []
        nxt = []
        for s in range(len(self.states)):
            row_out = [0] * k
            row_nxt = [0] * k
            for x in range(k):
                y = self.out[s][x]
                row_out[y] = x
                row_nxt[y] = self.nxt[s][x]
            out.append(tuple(row_out))
            nxt.append(tuple(row_nxt))
        return MealyAutomaton(self.alphabet, tuple(names), tuple(out), tuple(nxt), self.trivial)

    def minimize(self) -> "MealyAutomaton":
        """Merge behaviourally equal states.

        Classes are refined from the output rows until successor classes
        stabilize.  Each class is named after its lexicographically least
        member and classes keep the order of their first appearance, so an
        already minimal automaton comes back unchanged.
        """
        n = len(self.states)
        cls = {}
        sig = [self.out[s] for s in range(n)]
        cls = _group(sig)
        while True:
            sig = [(cls[s],) + tuple(cls[t] for t in self.nxt[s]) for s in range(n)]
            new = _group(sig)
            if new == cls:
                break
            cls = new
        reps = {}
        order = []
        for s in range(n):
            if cls[s] not in reps:
                reps[cls[s]] = len(order)
                order.append([s])
            else:
                order[reps[cls[s]]].append(s)
        names = tuple(min(self.states[m] for m in members) for members in order)
        remap = {cls[members[0]]: i for i, members in enumerate(order)}
        out = tuple(self.out[members[0]] for members in order)
        nxt = tuple(
            tuple(remap[cls[t]] for t in self.nxt[members[0]]) for members in order
        )
        trivial = _find_trivial(out, nxt)
        return MealyAutomaton(self.alphabet, names, out, nxt, trivial)

    def is_minimized(self) -> bool:
        return len(self.minimize()) == len(self)

    def ensure_trivial_state(self) -> "MealyAutomaton":
        """Return an automaton that has an identity state, adding one if needed."""
        trivial = _find_trivial(self.out, self.nxt)
        if trivial is not None:
            if trivial == self.trivial:
                return self
            return MealyAutomaton(self.alphabet, self.states, self.out, self.nxt, trivial)
        name = "e"
        while name in self.states:
            name += "'"
        k = len(self.alphabet)
        e = len(self.states)
        return MealyAutomaton(
            self.alphabet,
            self.states + (name,),
            self.out + (tuple(range(k)),),
            self.nxt + ((e,) * k,),
            e,
        )

    def subautomaton(self, keep: Iterable[int]) -> "MealyAutomaton":
        """Restrict to the state set ``keep`` (must be transition-closed)."""
        keep = sorted(set(keep))
        remap = {s: i for i, s in enumerate(keep)}
        for s in keep:
            for t in self.nxt[s]:
                if t not in remap:
                    raise ValueError("state set is not closed under transitions")
        return MealyAutomaton(
            self.alphabet,
            tuple(self.states[s] for s in keep),
            tuple(self.out[s] for s in keep),
            tuple(tuple(remap[t] for t in self.nxt[s]) for s in keep),
            remap.get(self.trivial),
        )

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet.letters),
            "states": [
                {
                    "name": name,
                    "transitions": [
                        {
                            "in": self.alphabet.letters[x],
                            "out": self.alphabet.letters[self.out[s][x]],
                            "to": self.states[self.nxt[s][x]],
                        }
                        for x in range(len(self.alphabet))
                    ],
                }
                for s, name in enumerate(self.states)
            ],
            "trivial": self.trivial_name,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_text(self) -> str:
        lines = ["alphabet " + " ".join(self.alphabet.letters)]
        for s, name in enumerate(self.states):
            if s == self.trivial:
                lines.append(f"state {name} identity")
                continue
            lines.append(f"state {name}")
            for x, letter in enumerate(self.alphabet.letters):
                y = self.alphabet.letters[self.out[s][x]]
                lines.append(f"  {letter}|{y} -> {self.states[self.nxt[s][x]]}")
        return "\n".join(lines) + "\n"


def _group(signatures) -> dict:
    """Map index -> class id, classes numbered by first appearance."""
    ids = {}
    cls = {}
    for i, sig in enumerate(signatures):
        if sig not in ids:
            ids[sig] = len(ids)
        cls[i] = ids[sig]
    return cls


def _find_trivial(out, nxt) -> int | None:
    k = len(out[0]) if out else 0
    identity = tuple(range(k))
    for s in range(len(out)):
        if out[s] == identity and nxt[s] == (s,) * k:
            return s
    return None


# -- parsing ----------------------------------------------------------------


def parse_automaton(text: str) -> MealyAutomaton:
    """Parse the text format described in the module docstring."""
    lines = text.splitlines()
    stripped = []
    for no, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            stripped.append((no, raw, body))

    if not stripped:
        raise AutomatonFormatError("empty automaton description")

    # First pass: the alphabet line and the declared state names.
    no, raw, body = stripped[0]
    head = body.strip().split()
    if head[0] != "alphabet":
        raise AutomatonFormatError("first directive must be 'alphabet'", line=no)
    if len(head) < 3:
        raise AutomatonFormatError("alphabet needs at least two letters", line=no)
    if len(set(head[1:])) != len(head[1:]):
        raise AutomatonFormatError("duplicate letter in alphabet", line=no)
    try:
        alphabet = Alphabet(tuple(head[1:]))
    except AutomatonFormatError as exc:
        raise AutomatonFormatError(str(exc), line=no) from None

    names = []
    identity_decl = {}
    for no, raw, body in stripped[1:]:
        words = body.strip().split()
        if words[0] == "alphabet":
            raise AutomatonFormatError("duplicate alphabet line", line=no)
        if words[0] == "state":
            if len(words) == 2:
                name, is_id = words[1], False
            elif len(words) == 3 and words[2] == "identity":
                name, is_id = words[1], True
            else:
                raise AutomatonFormatError(
                    "expected 'state NAME' or 'state NAME identity'", line=no
                )
            if name in identity_decl:
                raise AutomatonFormatError(f"duplicate state {name!r}", line=no)
            names.append(name)
            identity_decl[name] = is_id

    if not names:
        raise AutomatonFormatError("no states declared")
    index = {name: i for i, name in enumerate(names)}
    k = len(alphabet)
    out = [[None] * k for _ in names]
    nxt = [[None] * k for _ in names]

    # Second pass: transitions.
    current = None
    for no, raw, body in stripped[1:]:
        words = body.strip().split()
        if words[0] == "state":
            current = index[words[1]]
            continue
        if "|" not in body or "->" not in body:
            raise AutomatonFormatError(f"cannot parse line {body.strip()!r}", line=no)
        if current is None:
            raise AutomatonFormatError("transition before any state declaration", line=no)
        if identity_decl[names[current]]:
            raise AutomatonFormatError(
                f"state {names[current]!r} is declared identity; no explicit "
                "transitions allowed",
                line=no,
            )
        lhs, _, target = body.partition("->")
        inp, _, outp = lhs.partition("|")
        inp, outp, target = inp.strip(), outp.strip(), target.strip()
        for letter, what in ((inp, "input"), (outp, "output")):
            if letter not in alphabet:
                raise AutomatonFormatError(
                    f"{what} letter {letter!r} not in alphabet",
                    line=no,
                    col=raw.find(letter) + 1,
                )
        if target not in index:
            raise AutomatonFormatError(
                f"undeclared state {target!r}", line=no, col=raw.find(target) + 1
            )
        x = alphabet.index(inp)
        if out[current][x] is not None:
            raise AutomatonFormatError(
                f"duplicate transition for {names[current]!r} on {inp!r}", line=no
            )
        out[current][x] = alphabet.index(outp)
        nxt[current][x] = index[target]

    for name, is_id in identity_decl.items():
        s = index[name]
        if is_id:
            out[s] = list(range(k))
            nxt[s] = [s] * k
    for s, name in enumerate(names):
        for x in range(k):
            if out[s][x] is None:
                raise AutomatonFormatError(
                    f"table not total: state {name!r} has no transition on "
                    f"{alphabet.letters[x]!r}"
                )

    return MealyAutomaton(
        alphabet,
        tuple(names),
        tuple(tuple(row) for row in out),
        tuple(tuple(row) for row in nxt),
        _find_trivial(tuple(tuple(r) for r in out), tuple(tuple(r) for r in nxt)),
    )


def automaton_from_json(text: str | dict) -> MealyAutomaton:
    """Inverse of :meth:`MealyAutomaton.to_json`."""
    data = json.loads(text) if isinstance(text, str) else text
    try:
        alphabet = Alphabet(tuple(data["alphabet"]))
        names = tuple(st["name"] for st in data["states"])
        index = {name: i for i, name in enumerate(names)}
        out = []
        nxt = []
        for st in data["states"]:
            row_out = [None] * len(alphabet)
            row_nxt = [None] * len(alphabet)
            for tr in st["transitions"]:
                x = alphabet.index(tr["in"])
                if row_out[x] is not None:
                    raise AutomatonFormatError(
                        f"duplicate transition for {st['name']!r} on {tr['in']!r}"
                    )
                row_out[x] = alphabet.index(tr["out"])
                row_nxt[x] = index[tr["to"]]
            if None in row_out:
                raise AutomatonFormatError(f"table not total for state {st['name']!r}")
            out.append(tuple(row_out))
            nxt.append(tuple(row_nxt))
    except (KeyError, TypeError) as exc:
        raise AutomatonFormatError(f"malformed automaton JSON: {exc}") from None
    trivial = None if data.get("trivial") is None else index[data["trivial"]]
    a = MealyAutomaton(alphabet, names, tuple(out), tuple(nxt), trivial)
    if trivial is None:
        found = _find_trivial(a.out, a.nxt)
        if found is not None:
            a = MealyAutomaton(alphabet, names, a.out, a.nxt, found)
    return a


# -- binary constructions ----------------------------------------------------


def compose(a: MealyAutomaton, b: MealyAutomaton) -> MealyAutomaton:
    """Product automaton whose state ``(s, t)`` acts as ``s`` after ``t``."""
    if a.alphabet.letters != b.alphabet.letters:
        raise ValueError("compose needs identical alphabets")
    k = len(a.alphabet)
    names = []
    out = []
    nxt = []
    pairs = [(s, t) for s in range(len(a.states)) for t in range(len(b.states))]
    pos = {pair: i for i, pair in enumerate(pairs)}
    for s, t in pairs:
        names.append(f"({a.states[s]},{b.states[t]})")
        row_out = []
        row_nxt = []
        for x in range(k):
            y = b.out[t][x]
            row_out.append(a.out[s][y])
            row_nxt.append(pos[(a.nxt[s][y], b.nxt[t][x])])
        out.append(tuple(row_out))
        nxt.append(tuple(row_nxt))
    trivial = None
    if a.trivial is not None and b.trivial is not None:
        trivial = pos[(a.trivial, b.trivial)]
    return MealyAutomaton(a.alphabet, tuple(names), tuple(out), tuple(nxt), trivial)


def union_with_inverse(a: MealyAutomaton) -> MealyAutomaton:
    """Minimized disjoint union of ``a`` and its inverse, identity states merged."""
    inv = a.invert()
    n = len(a.states)
    if a.trivial is not None:
        keep = [s for s in range(n) if s != a.trivial]
        names = list(a.states)
        used = set(names)
        inv_names = []
        for s in keep:
            base = inv.states[s]
            while base in used:
                base += "'"
            used.add(base)
            inv_names.append(base)
        names += inv_names
        remap = {s: n + i for i, s in enumerate(keep)}
        remap[a.trivial] = a.trivial

        def fix(row):
            return tuple(remap[t] for t in row)

        out = tuple(a.out) + tuple(inv.out[s] for s in keep)
        nxt = tuple(a.nxt) + tuple(fix(inv.nxt[s]) for s in keep)
        u = MealyAutomaton(a.alphabet, tuple(names), out, nxt, a.trivial)
    else:
        names = list(a.states)
        used = set(names)
        for s in range(n):
            base = inv.states[s]
            while base in used:
                base += "'"
            used.add(base)
            names.append(base)
        out = tuple(a.out) + tuple(inv.out)
        nxt = tuple(a.nxt) + tuple(tuple(t + n for t in row) for row in inv.nxt)
        u = MealyAutomaton(a.alphabet, tuple(names), out, nxt, None)
    return u.minimize()
