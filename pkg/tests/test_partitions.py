"""Tests for the partition-refinement chain over the post-critical set."""

import pytest

from mealyorbits import (
    Alphabet,
    EmptyPostCriticalSetError,
    Partition,
    PostCriticalData,
    post_critical_data,
    refine_step,
    stabilize,
)
from mealyorbits.fixtures import load


GOLDEN = load("seven_states")
PCS = post_critical_data(GOLDEN)

# The stabilized chain on the 14-element post-critical set of the golden
# automaton, in the package's numbering of the elements (sorted by their
# (period, preperiod) letter indices).
LEVEL_1 = ((0, 1, 2, 3, 5, 6, 7, 8, 9, 10, 12, 13), (4, 11))
LEVEL_2 = ((0, 1, 2, 3, 7, 8, 9, 10), (4, 11), (5, 12), (6, 13))


def test_single_partition():
    pi = Partition.single(4)
    assert pi.blocks == ((0, 1, 2, 3),)
    assert len(pi) == 1


def test_from_blocks_canonicalizes():
    pi = Partition.from_blocks([(3, 1), (), (2,), (0,)])
    assert pi.blocks == ((0,), (1, 3), (2,))
    # duplicates inside one block collapse
    assert Partition.from_blocks([(1, 1, 0)]).blocks == ((0, 1),)


def test_from_blocks_rejects_overlap():
    with pytest.raises(ValueError):
        Partition.from_blocks([(0, 1), (1, 2)])


def test_block_of_maps_every_element():
    pi = Partition.from_blocks([(0, 2), (1,), (3,)])
    assert pi.block_of == {0: 0, 1: 1, 2: 0, 3: 2}


def test_refines():
    coarse = Partition.from_blocks([(0, 1, 2), (3,)])
    fine = Partition.from_blocks([(0, 1), (2,), (3,)])
    assert fine.refines(coarse)
    assert not coarse.refines(fine)
    assert coarse.refines(coarse)


def test_golden_chain_exact():
    chain = stabilize(PCS)
    assert chain.depth == 2
    assert chain.partitions[0] == Partition.single(14)
    assert chain.partitions[1].blocks == LEVEL_1
    assert chain.partitions[2].blocks == LEVEL_2


def test_chain_bookkeeping():
    chain = stabilize(PCS)
    assert len(chain.partitions) == chain.depth + 1
    # one step per proper refinement plus the confirming fixpoint step
    assert len(chain.steps) == chain.depth + 1
    for i, step in enumerate(chain.steps[:-1]):
        assert step.source == chain.partitions[i]
        assert step.refined == chain.partitions[i + 1]
    assert chain.steps[-1].source == chain.partitions[-1]
    assert chain.steps[-1].refined == chain.partitions[-1]


def test_at_level_clamps():
    chain = stabilize(PCS)
    assert chain.at_level(0) == chain.partitions[0]
    assert chain.at_level(1) == chain.partitions[1]
    assert chain.at_level(2) == chain.partitions[2]
    assert chain.at_level(99) == chain.partitions[2]


def test_refinement_is_monotone():
    for name in ("seven_states", "seven_states_abc", "adding", "grigorchuk"):
        chain = stabilize(post_critical_data(load(name)))
        for earlier, later in zip(chain.partitions, chain.partitions[1:]):
            assert later.refines(earlier)
            assert len(later) > len(earlier)


def test_fixpoint_is_idempotent():
    final = stabilize(PCS).partitions[-1]
    again = refine_step(PCS, final)
    assert again.refined == final


def test_depth_bounded_by_set_size():
    for name in ("seven_states", "seven_states_abc", "adding", "grigorchuk"):
        pcs = post_critical_data(load(name))
        assert stabilize(pcs).depth <= len(pcs)


def test_merge_witnesses_come_from_merge_pairs():
    chain = stabilize(PCS)
    merged_something = False
    for step in chain.steps:
        for c, d, witness in step.merges:
            merged_something = True
            assert frozenset(witness) in PCS.ee_pairs
            (p, x) = witness[0]
            (q, y) = witness[-1]
            assert c == (step.source.block_of[p], x)
            assert d == (step.source.block_of[q], y)
            assert c != d or len(witness) == 1
    assert merged_something


def test_groups_cover_cells_and_members():
    chain = stabilize(PCS)
    k = len(PCS.alphabet)
    all_cells = {(b, x) for b in range(len(chain.partitions[0])) for x in range(k)}
    step = chain.steps[0]
    seen_cells = [c for g in step.groups for c in g.cells]
    assert sorted(seen_cells) == sorted(all_cells)
    members = sorted(i for g in step.groups for i in g.members)
    assert members == list(range(len(PCS)))
    # each element sits in the group of its (shifted block, last letter) cell
    for g, grp in enumerate(step.groups):
        for i in grp.members:
            cell = (step.source.block_of[PCS.shift[i]], PCS.last[i])
            assert step.group_of_cell[cell] == g


def test_merged_flag_matches_group_size():
    for step in stabilize(PCS).steps:
        for grp in step.groups:
            assert grp.merged == (len(grp.cells) >= 2)


def test_to_json_dict_shape():
    doc = stabilize(PCS).to_json_dict()
    assert doc["depth"] == 2
    assert [sorted(map(tuple, p)) for p in doc["partitions"]] == [
        [tuple(range(14))],
        [tuple(b) for b in LEVEL_1],
        [tuple(b) for b in LEVEL_2],
    ]
    assert len(doc["steps"]) == 3
    for step in doc["steps"]:
        for merge in step["merges"]:
            assert set(merge) == {"cells", "witness"}
            assert len(merge["cells"]) == 2


def test_stabilize_rejects_empty_set():
    empty = PostCriticalData(
        alphabet=Alphabet(("0", "1")),
        elements=(),
        ee_pairs=frozenset(),
        e_pairs=frozenset(),
        shift=(),
        last=(),
    )
    with pytest.raises(EmptyPostCriticalSetError):
        stabilize(empty)
