import pytest
from hypothesis import given, settings, strategies as st

from maxatsp.cycle_cover import (CycleCover, cycle_weight, drop_lightest_and_collect_paths, is_hard,
                                 max_cycle_cover)
from maxatsp.instance import Instance, instance_from_edges, random_instance
from maxatsp.oracle import brute_cycle_cover


def test_nine_vertex_cover_weight(nine):
    cover = max_cycle_cover(nine)
    assert nine.value(cover.weight) == 3
    assert any(set(c) == {0, 1, 2} for c in cover.cycles)


def test_all_zero_cover():
    assert max_cycle_cover(random_instance(6, 0, 3)).weight == 0


@pytest.mark.parametrize("seed", range(60))
def test_matches_derangement_scan(seed):
    inst = random_instance(2 + seed % 6, 30, seed)
    cover = max_cycle_cover(inst)
    assert cover.weight == brute_cycle_cover(inst).value
    assert sorted(v for c in cover.cycles for v in c) == list(range(inst.n))
    assert all(len(c) >= 2 for c in cover.cycles)


def test_cover_rejects_fixed_points():
    inst = random_instance(3, 5, 0)
    with pytest.raises(ValueError):
        CycleCover.from_succ(inst, (0, 2, 1))
    with pytest.raises(ValueError):
        CycleCover.from_succ(inst, (1, 1, 0))


def test_hardness_examples():
    tri = instance_from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    assert is_hard(tri, (0, 1, 2))
    pair = instance_from_edges(2, [(0, 1, 1)])
    assert not is_hard(pair, (0, 1))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 20), min_size=4, max_size=7))
def test_long_cycles_never_hard(ws):
    k = len(ws)
    inst = instance_from_edges(k, [(i, (i + 1) % k, w) for i, w in enumerate(ws)])
    assert not is_hard(inst, tuple(range(k)))


def test_drop_lightest_examples():
    inst = instance_from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
    cover = CycleCover.from_cycles(inst, [(0, 1, 2, 3)])
    (path,) = drop_lightest_and_collect_paths(inst, cover)
    assert inst.value(sum(inst.w(a, b) for a, b in zip(path, path[1:]))) == 3

    inst = Instance.from_values([[0, 5], [2, 0]])
    cover = CycleCover.from_cycles(inst, [(0, 1)])
    assert drop_lightest_and_collect_paths(inst, cover) == [[0, 1]]


@pytest.mark.parametrize("seed", range(40))
def test_drop_lightest_keeps_fraction_per_cycle(seed):
    inst = random_instance(4 + seed % 8, 50, seed)
    cover = max_cycle_cover(inst)
    paths = drop_lightest_and_collect_paths(inst, cover)
    for cyc, path in zip(cover.cycles, paths):
        k = len(cyc)
        kept = sum(inst.w(a, b) for a, b in zip(path, path[1:]))
        assert sorted(path) == sorted(cyc)
        assert k * kept >= (k - 1) * cycle_weight(inst, cyc)
