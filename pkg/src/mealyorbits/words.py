"""Alphabets, finite words, and the two infinite word shapes.

Finite words are plain tuples of letters.  Left-infinite eventually periodic
words (the labels of infinite paths into an automaton, read so that the last
letter is the most recent one) are kept in a canonical form so that equal
sequences compare equal.  Right-infinite words are described by a finite
preperiod followed by a repeated period.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Tuple

from .errors import AutomatonFormatError

Word = Tuple[str, ...]

_LETTER_FORBIDDEN = set("|#>()")


def _check_letter(letter: str) -> None:
    if not letter or any(c.isspace() for c in letter) or set(letter) & _LETTER_FORBIDDEN:
        raise AutomatonFormatError(f"bad letter {letter!r}")


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of at least two distinct letters."""

    letters: Tuple[str, ...]

    def __post_init__(self):
        if len(self.letters) < 2:
            raise AutomatonFormatError("alphabet needs at least two letters")
        if len(set(self.letters)) != len(self.letters):
            raise AutomatonFormatError("duplicate letter in alphabet")
        for letter in self.letters:
            _check_letter(letter)

    @cached_property
    def _index(self):
        return {x: i for i, x in enumerate(self.letters)}

    def __len__(self):
        return len(self.letters)

    def __contains__(self, letter):
        return letter in self._index

    def __iter__(self):
        return iter(self.letters)

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise AutomatonFormatError(f"letter {letter!r} not in alphabet") from None

    @property
    def single_char(self) -> bool:
        return all(len(x) == 1 for x in self.letters)

    def word(self, text: str) -> Word:
        """Tokenize ``text`` into a word.

        Single-character alphabets read the string letter by letter; otherwise
        letters must be separated by whitespace.  The empty string is the
        empty word.
        """
        text = text.strip()
        if not text:
            return ()
        parts = text.split() if not self.single_char or " " in text else list(text)
        for p in parts:
            if p not in self._index:
                raise AutomatonFormatError(f"letter {p!r} not in alphabet")
        return tuple(parts)

    def format_word(self, word: Iterable[str]) -> str:
        word = tuple(word)
        return "".join(word) if self.single_char else " ".join(word)

    def indices(self, word: Iterable[str]) -> Tuple[int, ...]:
        return tuple(self.index(x) for x in word)


def _primitive_root(block: Tuple[str, ...]) -> Tuple[str, ...]:
    n = len(block)
    for d in range(1, n + 1):
        if n % d == 0 and block == block[:d] * (n // d):
            return block[:d]
    return block


@dataclass(frozen=True)
class EvPeriodicWord:
    """A left-infinite word ``... p p p u`` in canonical form.

    ``period`` is primitive, ``preperiod`` is as short as possible, and the
    period block is the one sitting immediately left of the preperiod, so two
    descriptions of the same sequence normalize to identical fields.
    """

    period: Tuple[str, ...]
    preperiod: Tuple[str, ...] = ()

    def __post_init__(self):
        period = tuple(self.period)
        pre = tuple(self.preperiod)
        if not period:
            raise ValueError("period must be non-empty")
        for letter in period + pre:
            _check_letter(letter)
        period = _primitive_root(period)
        # Pull letters out of the preperiod while they continue the periodic
        # pattern; each absorption rotates the period one step left.
        while pre and pre[0] == period[0]:
            pre = pre[1:]
            period = period[1:] + period[:1]
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "preperiod", pre)

    def suffix(self, n: int) -> Word:
        """The last ``n`` letters, unused period copies unrolled as needed."""
        if n < 0:
            raise ValueError("suffix length must be >= 0")
        if n <= len(self.preperiod):
            return self.preperiod[len(self.preperiod) - n:]
        m = n - len(self.preperiod)
        reps = -(-m // len(self.period))
        return (self.period * reps)[-m:] + self.preperiod

    @property
    def last(self) -> str:
        return self.suffix(1)[0]

    def drop_last(self) -> "EvPeriodicWord":
        """The word with its final letter removed (left shift)."""
        if self.preperiod:
            return EvPeriodicWord(self.period, self.preperiod[:-1])
        return EvPeriodicWord(self.period[-1:] + self.period[:-1], ())

    def append(self, letter: str) -> "EvPeriodicWord":
        return EvPeriodicWord(self.period, self.preperiod + (letter,))

    def render(self, alphabet: Alphabet | None = None) -> str:
        if alphabet is not None:
            fmt = alphabet.format_word
        else:
            tight = all(len(x) == 1 for x in self.period + self.preperiod)
            fmt = (lambda w: "".join(w)) if tight else (lambda w: " ".join(w))
        head = f"({fmt(self.period)})^-w"
        return head + (" " + fmt(self.preperiod) if self.preperiod else "")

    def sort_key(self, alphabet: Alphabet):
        return (alphabet.indices(self.period), alphabet.indices(self.preperiod))

    def to_json_dict(self) -> dict:
        return {"period": list(self.period), "preperiod": list(self.preperiod)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "EvPeriodicWord":
        return cls(tuple(data["period"]), tuple(data.get("preperiod", ())))

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet) -> "EvPeriodicWord":
        """Parse the ``(w)^-w u`` rendering back into a word."""
        m = re.fullmatch(r"\s*\(\s*(.+?)\s*\)\s*\^-w\s*(.*?)\s*", text)
        if not m:
            raise AutomatonFormatError(f"cannot parse eventually periodic word {text!r}")
        return cls(alphabet.word(m.group(1)), alphabet.word(m.group(2)))


@dataclass(frozen=True)
class OmegaWord:
    """A right-infinite word ``u v v v ...`` given by preperiod and period."""

    preperiod: Tuple[str, ...]
    period: Tuple[str, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be non-empty")
        for letter in self.preperiod + self.period:
            _check_letter(letter)

    def prefix(self, n: int) -> Word:
        if n <= len(self.preperiod):
            return self.preperiod[:n]
        m = n - len(self.preperiod)
        reps = -(-m // len(self.period))
        return self.preperiod + (self.period * reps)[:m]

    def render(self, alphabet: Alphabet | None = None) -> str:
        fmt = alphabet.format_word if alphabet else "".join
        head = fmt(self.preperiod)
        return (head + " " if head else "") + f"({fmt(self.period)})^w"
