import random
from itertools import combinations

import pytest

from builders import NINE_POSITIVE
from maxatsp.cycle_cover import CycleCover, cycle_edges, max_cycle_cover
from maxatsp.gadgets import (HEAD, TAIL, HalfEdge, RelaxedCover, build_g1_graph, build_g2_graph,
                             extract_relaxed_cover, find_problematic_cycles, matching_for_edges,
                             solve_gadget_graph, verify_relaxed_constraints)
from maxatsp.instance import instance_from_edges, random_instance
from maxatsp.matching import Matching
from maxatsp.oracle import held_karp_max
from maxatsp.tour import compute_c1, compute_c2


def test_g1_vertex_count_without_pairs():
    inst = random_instance(4, 10, 0)
    cmax = CycleCover.from_cycles(inst, [(0, 1, 2, 3)])
    assert len(build_g1_graph(inst, cmax).labels) == 32


def test_g1_vertex_count_with_two_pairs():
    inst = random_instance(4, 10, 0)
    cmax = CycleCover.from_cycles(inst, [(0, 1), (2, 3)])
    g = build_g1_graph(inst, cmax)
    assert len(g.labels) == 36
    assert len(g.gadgets) == 2


def test_nine_vertex_has_no_pair_gadgets(nine):
    # the drawn optimum: triangle abc and a zero-weight 6-cycle
    cmax = CycleCover.from_cycles(nine, [(0, 1, 2), (3, 4, 5, 6, 7, 8)])
    assert cmax.weight == max_cycle_cover(nine).weight
    g = build_g1_graph(nine, cmax)
    assert not any(lbl[0] in ("a", "b") for lbl in g.labels)


def test_gadget_edge_weights():
    inst = instance_from_edges(3, [(0, 1, 3), (1, 2, 1)])
    g = build_g1_graph(inst, max_cycle_cover(inst))
    idx = g.index
    assert g.edges[tuple(sorted((idx[("e1", 0, 1)], idx[("e2", 0, 1)])))] == 0
    assert g.edges[tuple(sorted((idx[("out", 0)], idx[("e1", 0, 1)])))] == inst.w(0, 1) // 2
    assert g.edges[tuple(sorted((idx[("in", 1)], idx[("e2", 0, 1)])))] == inst.w(0, 1) // 2


def test_hamiltonian_matching_decodes_to_cycle():
    inst = random_instance(5, 10, 4)
    cmax = max_cycle_cover(inst)
    g = build_g1_graph(inst, cmax)
    ham = cycle_edges((0, 2, 4, 1, 3))
    m = matching_for_edges(g, ham)
    assert m is not None
    c = extract_relaxed_cover(g, m)
    assert c.is_integral and c.full_edges == frozenset(ham)


def nine_relaxed():
    """Relaxed cover with 4-cycles a c i d and e f g h plus two halves at b."""
    a, b, c, d, e, f, g, h, i = range(9)
    halves = set(RelaxedCover.from_edges(cycle_edges((a, c, i, d)) + cycle_edges((e, f, g, h))).halves)
    halves |= {HalfEdge(a, b, HEAD), HalfEdge(b, c, TAIL)}
    return RelaxedCover(frozenset(halves))


def test_nine_relaxed_decodes_to_weight_three():
    # weighting a->c at 2 makes this cover reach 3; with the plain weights it is 2
    inst = instance_from_edges(9, [(u, v, 2 if (u, v) == (0, 2) else 1) for u, v in NINE_POSITIVE])
    g = build_g1_graph(inst, max_cycle_cover(inst))
    tilde = nine_relaxed()
    pairs = []
    for hf in tilde.halves:
        side = ("out", hf.u) if hf.side == TAIL else ("in", hf.v)
        end = ("e1" if hf.side == TAIL else "e2", hf.u, hf.v)
        pairs.append(tuple(sorted((g.index[side], g.index[end]))))
    c = extract_relaxed_cover(g, Matching(tuple(sorted(pairs)), 0))
    assert c == tilde
    assert inst.value(c.weight(inst)) == 3
    assert not c.is_integral
    assert [comp.kind for comp in c.components].count("path") == 1


def test_nine_relaxed_passes_basic_clauses(nine):
    rep = verify_relaxed_constraints(nine, nine_relaxed(), max_cycle_cover(nine))
    assert rep.passed("i") and rep.passed("ii")


def test_integral_cover_without_shared_short_cycles_passes():
    inst = random_instance(6, 10, 1)
    cmax = CycleCover.from_cycles(inst, [(0, 1, 2, 3, 4, 5)])
    c = RelaxedCover.from_edges(cycle_edges((0, 2, 4)) + cycle_edges((1, 3, 5)))
    assert verify_relaxed_constraints(inst, c, cmax).ok
    assert verify_relaxed_constraints(inst, c, cmax, c).ok


def test_clause_one_catches_missing_out_edge():
    inst = random_instance(4, 10, 1)
    cmax = CycleCover.from_cycles(inst, [(0, 1, 2, 3)])
    c = RelaxedCover.from_edges([(0, 1), (1, 2), (2, 3)])
    rep = verify_relaxed_constraints(inst, c, cmax)
    assert not rep.passed("i")


def test_clause_two_catches_copied_pair():
    inst = random_instance(4, 10, 1)
    cmax = CycleCover.from_cycles(inst, [(0, 1), (2, 3)])
    rep = verify_relaxed_constraints(inst, RelaxedCover.from_cycle_cover(cmax), cmax)
    assert not rep.passed("ii")


def test_problematic_hamiltonian_is_empty():
    inst = random_instance(5, 10, 1)
    cmax = CycleCover.from_cycles(inst, [(0, 1), (2, 3, 4)])
    c = RelaxedCover.from_edges(cycle_edges((0, 1, 2, 3, 4)))
    assert find_problematic_cycles(c, cmax) == []


def test_problematic_two_cycle_listed():
    inst = random_instance(4, 10, 1)
    cmax = CycleCover.from_cycles(inst, [(0, 1, 2, 3)])
    c = RelaxedCover.from_edges(cycle_edges((0, 1)) + cycle_edges((2, 3)))
    found = {frozenset(x) for x in find_problematic_cycles(c, cmax)}
    assert found == {frozenset((0, 1)), frozenset((2, 3))}


def rescan_problematic(c, cmax):
    """Independent restatement: short cycles of c that clash with C_max."""
    n = len(cmax.succ)
    cm = set(cmax.edges)
    pairs = [frozenset(x) for x in cmax.cycles if len(x) == 2]
    triangles = [frozenset(x) for x in cmax.cycles if len(x) == 3]
    out = set()
    for cyc in c.cycles:
        vs = frozenset(cyc)
        if len(cyc) == n:
            continue
        if len(cyc) == 2:
            u, v = cyc
            if (u, v) in cm or (v, u) in cm:
                out.add(vs)
        elif len(cyc) == 3:
            if vs in triangles or any(p <= vs for p in pairs):
                out.add(vs)
        elif len(cyc) == 4:
            es = set(cycle_edges(cyc))
            touching = [p for p in pairs if any((x, y) in es for x in p for y in p if x != y)]
            if len(touching) >= 2:
                out.add(vs)
    return out


@pytest.mark.parametrize("seed", range(40))
def test_problematic_matches_rescan(seed):
    inst = random_instance(4 + seed % 6, 100, seed)
    cmax = max_cycle_cover(inst)
    c1 = compute_c1(inst, cmax)
    assert {frozenset(x) for x in find_problematic_cycles(c1, cmax)} == rescan_problematic(c1, cmax)


@pytest.mark.parametrize("seed", range(30))
def test_extracted_cover_beats_opt(seed):
    inst = random_instance(4 + seed % 7, 100, seed)
    cmax = max_cycle_cover(inst)
    c, m = solve_gadget_graph(build_g1_graph(inst, cmax))
    assert m.is_perfect(len(build_g1_graph(inst, cmax).labels))
    assert c.weight(inst) >= held_karp_max(inst).value
    assert verify_relaxed_constraints(inst, c, cmax).ok


def half_counts_ok(c2, cmax, c1):
    """At most four halves, an even number, on edges among each shared triangle."""
    shared = [t for t in cmax.cycles if len(t) == 3 and set(cycle_edges(t)) <= c1.full_edges]
    for t in shared:
        present = [hf for hf in c2.halves if hf.u in t and hf.v in t]
        if len(present) > 4 or len(present) % 2:
            return False
    return True


def test_c2_triangle_half_counts():
    hits = 0
    for seed in range(150):
        inst = random_instance(4 + seed % 6, 100, seed)
        cmax = max_cycle_cover(inst)
        c1 = compute_c1(inst, cmax)
        if not find_problematic_cycles(c1, cmax):
            continue
        c2 = compute_c2(inst, cmax, c1)
        hits += 1
        assert half_counts_ok(c2, cmax, c1), seed
        assert verify_relaxed_constraints(inst, c2, cmax, c1).ok, seed
        assert c2.weight(inst) >= held_karp_max(inst).value
    assert hits >= 10


def test_shared_triangle_gadget_touches_reverse_edge():
    inst = instance_from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    cmax = CycleCover.from_cycles(inst, [(0, 1, 2)])
    c1 = RelaxedCover.from_cycle_cover(cmax)
    g = build_g2_graph(inst, cmax, c1)
    tri = [key for kind, key in g.gadgets if kind == "triangle"]
    assert len(tri) == 1
    p, q, r = tri[0]
    a = g.index[("a", "triangle", (p, q, r))]
    nbrs = {g.labels[j] for (i, j) in g.edges if i == a} | {g.labels[i] for (i, j) in g.edges if j == a}
    assert ("e1", r, q) in nbrs
    assert (r, q) not in set(cmax.edges)


def test_g2_without_structures_adds_only_pairs():
    inst = random_instance(6, 10, 2)
    cmax = CycleCover.from_cycles(inst, [(0, 1, 2, 3, 4, 5)])
    c1 = RelaxedCover.from_edges(cycle_edges((0, 2, 4, 1, 3, 5)))
    g = build_g2_graph(inst, cmax, c1)
    assert {kind for kind, _ in g.gadgets} <= {"pair"}
    assert len(g.labels) == len(build_g1_graph(inst, cmax).labels) + 2 * len(g.gadgets)
