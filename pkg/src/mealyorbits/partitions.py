"""Refinement of post-critical partitions by one-letter extension.

Start from the partition with a single block.  One step takes every cell
(block, letter), unites cells related by a trivial-destination merge pair,
and reads the next partition off the united groups: an element belongs to
the cell (block of its shifted word, its last letter).  The chain of
partitions this produces stabilizes after at most as many steps as there are
post-critical words, and the recognizer machines are built from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Tuple

from .errors import EmptyPostCriticalSetError
from .structure import PostCriticalData


@dataclass(frozen=True)
class Partition:
    """A partition of ``0..n-1``: blocks sorted internally and by least member."""

    blocks: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, blocks) -> "Partition":
        canon = tuple(sorted((tuple(sorted(set(b))) for b in blocks if b), key=lambda b: b[0]))
        seen = [i for b in canon for i in b]
        if len(seen) != len(set(seen)):
            raise ValueError("blocks overlap")
        return cls(canon)

    @classmethod
    def single(cls, n: int) -> "Partition":
        return cls((tuple(range(n)),))

    @cached_property
    def block_of(self) -> Dict[int, int]:
        return {i: b for b, block in enumerate(self.blocks) for i in block}

    def __len__(self):
        return len(self.blocks)

    def refines(self, other: "Partition") -> bool:
        """Every block of self lies inside a block of other."""
        return all(
            len({other.block_of[i] for i in block}) == 1 for block in self.blocks
        )


@dataclass(frozen=True)
class CellGroup:
    """Cells united by one refinement step, with the elements embedded in them."""

    cells: Tuple[Tuple[int, int], ...]  # (block index, letter index), sorted
    members: Tuple[int, ...]            # element indices, sorted
    merged: bool                        # at least two cells united


@dataclass(frozen=True)
class RefineResult:
    """One refinement step: the united cell groups and the partition they induce.

    ``merges`` records each union actually performed, as (cell, cell,
    witnessing merge pair), in the deterministic order they were applied.
    """

    source: Partition
    groups: Tuple[CellGroup, ...]
    refined: Partition
    merges: Tuple[Tuple[Tuple[int, int], Tuple[int, int], Tuple[Tuple[int, int], ...]], ...] = ()

    @cached_property
    def group_of_cell(self) -> Dict[Tuple[int, int], int]:
        return {cell: g for g, grp in enumerate(self.groups) for cell in grp.cells}


def refine_step(pcs: PostCriticalData, pi: Partition) -> RefineResult:
    """Apply one round of cell merging to ``pi``."""
    k = len(pcs.alphabet)
    cells = [(b, x) for b in range(len(pi.blocks)) for x in range(k)]
    parent = {c: c for c in cells}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def unite(c, d):
        rc, rd = find(c), find(d)
        if rc == rd:
            return False
        if rd < rc:
            rc, rd = rd, rc
        parent[rd] = rc
        return True

    merges = []
    for pair in sorted(pcs.ee_pairs, key=sorted):
        entries = sorted(pair)
        (p, x) = entries[0]
        (q, y) = entries[-1]
        c, d = (pi.block_of[p], x), (pi.block_of[q], y)
        if unite(c, d):
            merges.append((c, d, tuple(entries)))

    grouped: Dict[Tuple[int, int], list] = {}
    for c in cells:
        grouped.setdefault(find(c), []).append(c)
    member_cell = {
        i: (pi.block_of[pcs.shift[i]], pcs.last[i]) for i in range(len(pcs))
    }
    members_by_root: Dict[Tuple[int, int], list] = {}
    for i, cell in member_cell.items():
        members_by_root.setdefault(find(cell), []).append(i)

    groups = tuple(
        CellGroup(
            cells=tuple(grouped[root]),
            members=tuple(sorted(members_by_root.get(root, ()))),
            merged=len(grouped[root]) >= 2,
        )
        for root in sorted(grouped)
    )
    refined = Partition.from_blocks(g.members for g in groups)
    return RefineResult(
        source=pi, groups=groups, refined=refined, merges=tuple(merges)
    )


@dataclass(frozen=True)
class PartitionChain:
    """The stabilized chain: ``partitions[i+1] == steps[i].refined`` and the
    final step confirms the fixpoint."""

    partitions: Tuple[Partition, ...]
    steps: Tuple[RefineResult, ...]

    @property
    def depth(self) -> int:
        """Index of the first repeated partition (number of proper refinements)."""
        return len(self.partitions) - 1

    def at_level(self, n: int) -> Partition:
        return self.partitions[min(n, self.depth)]

    def to_json_dict(self) -> dict:
        return {
            "partitions": [
                [list(block) for block in pi.blocks] for pi in self.partitions
            ],
            "depth": self.depth,
            "steps": [
                {
                    "merges": [
                        {
                            "cells": [list(c), list(d)],
                            "witness": [list(entry) for entry in pair],
                        }
                        for (c, d, pair) in step.merges
                    ]
                }
                for step in self.steps
            ],
        }


def stabilize(pcs: PostCriticalData) -> PartitionChain:
    """Iterate :func:`refine_step` from the one-block partition to its fixpoint."""
    if len(pcs) == 0:
        raise EmptyPostCriticalSetError("empty post-critical set")
    partitions = [Partition.single(len(pcs))]
    steps = []
    while True:
        step = refine_step(pcs, partitions[-1])
        steps.append(step)
        if step.refined == partitions[-1]:
            return PartitionChain(tuple(partitions), tuple(steps))
        partitions.append(step.refined)
        if len(partitions) > len(pcs) + 1:
            raise AssertionError("refinement chain exceeded theoretical bound")
