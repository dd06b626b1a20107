import pytest

from maxatsp.alternating import (NotAlternatingError, alternating_weight, apply, cycle_from_edges,
                                 decompose, is_necessary, necessity_filter)
from maxatsp.cycle_cover import CycleCover, cycle_edges, max_cycle_cover
from maxatsp.gadgets import RelaxedCover, build_g1_graph, solve_gadget_graph, verify_relaxed_constraints
from maxatsp.instance import instance_from_edges, random_instance


def two_pairs_vs_four_cycle(cover_w=2, other_w=1):
    pairs = [(0, 1), (1, 0), (2, 3), (3, 2)]
    quad = cycle_edges((0, 2, 1, 3))
    inst = instance_from_edges(4, [(u, v, cover_w) for u, v in pairs] + [(u, v, other_w) for u, v in quad])
    cmax = CycleCover.from_cycles(inst, [(0, 1), (2, 3)])
    return inst, cmax, RelaxedCover.from_edges(quad)


def test_identical_cover_has_no_structures():
    inst = random_instance(6, 10, 0)
    cmax = max_cycle_cover(inst)
    assert decompose(cmax, cmax) == []


def test_four_cycle_against_pairs_is_one_cycle_of_eight():
    _, cmax, quad = two_pairs_vs_four_cycle()
    (a,) = decompose(quad, cmax)
    assert a.kind == "cycle" and len(a.pieces) == 8
    assert sum(p.in_cover for p in a.pieces) == 4


def test_zero_weight_structure():
    inst, cmax, quad = two_pairs_vs_four_cycle(0, 0)
    (a,) = decompose(quad, cmax)
    assert alternating_weight(inst, a, cmax) == 0


def test_alternating_weight_arithmetic():
    inst, cmax, quad = two_pairs_vs_four_cycle(2, 1)
    (a,) = decompose(quad, cmax)
    assert inst.value(alternating_weight(inst, a, cmax)) == 4 - 8
    assert inst.value(alternating_weight(inst, a, quad)) == 8 - 4


def test_apply_is_an_involution():
    _, cmax, quad = two_pairs_vs_four_cycle()
    (a,) = decompose(quad, cmax)
    there = apply(cmax, a)
    assert there == quad
    assert apply(there, a) == RelaxedCover.from_cycle_cover(cmax)


def test_apply_rejects_foreign_structure():
    _, cmax, _ = two_pairs_vs_four_cycle()
    bogus = cycle_from_edges([(0, 2), (2, 1)], [True, False])
    with pytest.raises(NotAlternatingError):
        apply(cmax, bogus)


def test_necessary_witness():
    inst, cmax, quad = two_pairs_vs_four_cycle(2, 1)
    (a,) = decompose(quad, cmax)
    # applying it to the quad recreates both C_max 2-cycles
    assert is_necessary(inst, a, quad, cmax)


def test_filter_leaves_necessary_only_cover_alone():
    inst, cmax, quad = two_pairs_vs_four_cycle(2, 1)
    assert necessity_filter(inst, quad, cmax) == quad


def _c1_raw(seed):
    inst = random_instance(4 + seed % 6, 100, seed)
    cmax = max_cycle_cover(inst)
    c, _ = solve_gadget_graph(build_g1_graph(inst, cmax))
    return inst, cmax, c


@pytest.mark.parametrize("seed", range(40))
def test_structures_partition_symmetric_difference(seed):
    inst, cmax, c = _c1_raw(seed)
    structs = decompose(c, cmax)
    diff = c.halves ^ RelaxedCover.from_cycle_cover(cmax).halves
    seen = set()
    for a in structs:
        assert not (a.halves & seen)
        seen |= a.halves
    assert seen == diff


@pytest.mark.parametrize("seed", range(40))
def test_alternating_cycles_never_gain_on_cmax(seed):
    inst, cmax, c = _c1_raw(seed)
    for a in decompose(c, cmax):
        if a.kind == "cycle":
            assert alternating_weight(inst, a, cmax) <= 0


@pytest.mark.parametrize("seed", range(40))
def test_filter_postconditions(seed):
    inst, cmax, c = _c1_raw(seed)
    f = necessity_filter(inst, c, cmax)
    assert f.weight(inst) >= c.weight(inst)
    assert verify_relaxed_constraints(inst, f, cmax).ok
    for a in decompose(f, cmax):
        if a.kind == "cycle":
            assert is_necessary(inst, a, f, cmax)
        before = f.weight(inst)
        after = apply(f, a).weight(inst)
        assert after - before == alternating_weight(inst, a, f)


def test_h_cycles_are_not_filtered():
    for seed in range(200):
        inst, cmax, c = _c1_raw(seed)
        for a in decompose(c, cmax):
            if a.kind == "h-cycle":
                assert not is_necessary(inst, a, c, cmax)
                return
    pytest.skip("no h-cycle in the sampled seeds")
