"""Acceptance criteria 1-9, each reported as one PASS/FAIL line."""

import random
import time
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from pathlib import Path

import pytest

from builders import nine_vertex_instance, planted_instance
from maxatsp.alternating import alternating_weight, decompose, is_necessary, necessity_filter
from maxatsp.coloring import K4, K8, verify_coloring
from maxatsp.coloring.verify import monochromatic_cycles
from maxatsp.cycle_cover import max_cycle_cover
from maxatsp.gadgets import (build_g1_graph, build_g2_graph, find_problematic_cycles, solve_gadget_graph,
                             verify_relaxed_constraints)
from maxatsp.instance import random_instance
from maxatsp.matching import UndirectedWeightedGraph, max_weight_assignment, max_weight_perfect_matching
from maxatsp.oracle import brute_perfect_matching, brute_superstring, held_karp_max
from maxatsp.superstring import approximation_factor, shortest_superstring
from maxatsp.tour import solve

README = Path(__file__).resolve().parent.parent / "README.md"


@lru_cache(maxsize=None)
def instance(n, seed):
    return random_instance(n, 100, seed)


@lru_cache(maxsize=None)
def opt(n, seed):
    return held_karp_max(instance(n, seed)).value


@lru_cache(maxsize=None)
def solved(n, seed):
    return solve(instance(n, seed))


def ratio_suite():
    return [(4 + s % 9, s) for s in range(1000)]


def test_criterion_1_nine_vertex(verdict):
    t0 = time.perf_counter()
    inst = nine_vertex_instance()
    cmax = max_cycle_cover(inst)
    hk = held_karp_max(inst)
    res = solve(inst)
    took = time.perf_counter() - t0
    got = (inst.value(cmax.weight), inst.value(hk.value), inst.value(res.tour_weight))
    ok = got == (3, 2, 2) and took < 1
    verdict(1, ok, f"w(C_max), OPT, tour = {tuple(map(int, got))}; {took:.2f}s")
    assert ok


def test_criterion_2_cover_bound(verdict):
    t0 = time.perf_counter()
    bad = [(n, s) for n, s in ratio_suite() if max_cycle_cover(instance(n, s)).weight < opt(n, s)]
    took = time.perf_counter() - t0
    ok = not bad and took < 120
    verdict(2, ok, f"{len(bad)} violations over 1000 instances; {took:.1f}s")
    assert ok, bad[:5]


def test_criterion_3_relaxed_bound(verdict):
    t0 = time.perf_counter()
    bad = []
    d_cases = 0
    for s in range(300):
        n = 4 + s % 7
        inst, best = instance(n, s), opt(n, s)
        cmax = max_cycle_cover(inst)
        raw, _ = solve_gadget_graph(build_g1_graph(inst, cmax))
        c1 = necessity_filter(inst, raw, cmax)
        for c in (raw, c1):
            if c.weight(inst) < best or not verify_relaxed_constraints(inst, c, cmax).ok:
                bad.append((s, "c1"))
        if find_problematic_cycles(c1, cmax):
            d_cases += 1
            raw2, _ = solve_gadget_graph(build_g2_graph(inst, cmax, c1))
            c2 = necessity_filter(inst, raw2, cmax, c1)
            for c in (raw2, c2):
                if c.weight(inst) < best or not verify_relaxed_constraints(inst, c, cmax, c1).ok:
                    bad.append((s, "c2"))
    took = time.perf_counter() - t0
    ok = not bad and took < 300
    verdict(3, ok, f"{len(bad)} violations over 300 instances ({d_cases} with C2); {took:.1f}s")
    assert ok, bad[:5]


def test_criterion_4_alternating(verdict):
    bad = []
    cycles = 0
    for s in range(300):
        n = 4 + s % 7
        inst = instance(n, s)
        cmax = max_cycle_cover(inst)
        raw, _ = solve_gadget_graph(build_g1_graph(inst, cmax))
        for a in decompose(raw, cmax):
            if a.kind == "cycle":
                cycles += 1
                if alternating_weight(inst, a, cmax) > 0:
                    bad.append((s, "positive cycle"))
        c1 = necessity_filter(inst, raw, cmax)
        if c1.weight(inst) < raw.weight(inst):
            bad.append((s, "filter lost weight"))
        if any(a.kind == "cycle" and not is_necessary(inst, a, c1, cmax) for a in decompose(c1, cmax)):
            bad.append((s, "non-necessary cycle left"))
    ok = not bad
    verdict(4, ok, f"{len(bad)} violations over 300 seeds ({cycles} alternating cycles checked)")
    assert ok, bad[:5]


def coloring_suite():
    cases = [(f"random-{s}", instance(4 + s % 6, s)) for s in range(500)]
    for kind in ("pairs", "triangles", "mixed"):
        cases += [(f"{kind}-{s}", planted_instance(4 + s % 6, s, kind)) for s in range(60)]
    return cases


def test_criterion_5_coloring(verdict):
    bad = []
    colored = {"C": 0, "D": 0}
    fallback = []
    mono = 0
    for label, inst in coloring_suite():
        res = solve(inst, oracle=False)
        out = res.coloring
        if out is None:
            continue
        palette = K8 if res.branch == "D" else K4
        if not res.certified:
            fallback.append(label)
            rep = verify_coloring(out.g, out.coloring, allow_uncolored=True, colors=palette)
        else:
            colored[res.branch] += 1
            rep = verify_coloring(out.g, out.coloring, colors=palette)
        by_color = {}
        for i, k in out.coloring.items():
            by_color.setdefault(k, []).append(out.g.copies[i].edge)
        mono += sum(len(monochromatic_cycles(e)) for e in by_color.values())
        if not rep.ok:
            bad.append(label)
    ok = not bad and mono == 0
    verdict(5, ok, f"{colored['C']} G1 and {colored['D']} G2 completed colorings verified, "
                   f"{mono} monochromatic cycles, {len(bad)} failures; "
                   f"{len(fallback)} non-certified runs: {' '.join(fallback)}")
    assert ok, bad[:5]


def test_criterion_6_ratio(verdict):
    bad = []
    fallback = []
    worst = Fraction(1)
    for n, s in ratio_suite():
        res = solved(n, s)
        r = res.ratio()
        worst = min(worst, r)
        if 4 * res.tour_weight < 3 * opt(n, s):
            bad.append((n, s))
        if not res.certified:
            fallback.append(s)
    ok = not bad
    verdict(6, ok, f"{len(bad)} instances below 3/4 of 1000; worst ratio {worst} ({float(worst):.4f}); "
                   f"{len(fallback)} non-certified runs kept the ratio")
    assert ok, bad[:5]


def derangement_best(costs):
    n = len(costs)
    return max(sum(costs[i][p[i]] for i in range(n))
               for p in permutations(range(n)) if all(p[i] != i for i in range(n)))


def test_criterion_7_matching(verdict):
    rng = random.Random(7)
    bad = []
    for k in range(200):
        n = rng.choice((2, 4, 6, 8, 10, 12))
        order = list(range(n))
        rng.shuffle(order)
        edges = {(min(order[i], order[i + 1]), max(order[i], order[i + 1])): rng.randint(0, 40)
                 for i in range(0, n, 2)}
        for u in range(n):
            for v in range(u + 1, n):
                if (u, v) not in edges and rng.random() < 0.4:
                    edges[(u, v)] = rng.randint(0, 40)
        el = [(u, v, w) for (u, v), w in edges.items()]
        if max_weight_perfect_matching(UndirectedWeightedGraph(n, el)).weight != brute_perfect_matching(n, el).value:
            bad.append(("matching", k))
    for k in range(200):
        n = rng.randint(2, 7)
        costs = [[0 if i == j else rng.randint(0, 60) for j in range(n)] for i in range(n)]
        sigma = max_weight_assignment(costs)
        if sum(costs[i][sigma[i]] for i in range(n)) != derangement_best(costs):
            bad.append(("assignment", k))
    ok = not bad
    verdict(7, ok, f"{len(bad)} discrepancies over 200 matchings and 200 assignments")
    assert ok, bad[:5]


def test_criterion_8_superstring(verdict):
    rng = random.Random(8)
    bad = []
    ratios = []
    for k in range(200):
        alphabet = "acgt"[:rng.randint(2, 4)]
        strings = ["".join(rng.choice(alphabet) for _ in range(rng.randint(1, 8)))
                   for _ in range(rng.randint(2, 8))]
        res = shortest_superstring(strings)
        if not all(s in res.superstring for s in strings):
            bad.append(("missing input", k))
        if len(res.superstring) > sum(map(len, strings)):
            bad.append(("too long", k))
        best = brute_superstring(strings).value
        ratios.append(Fraction(len(res.superstring), best))
    factor = approximation_factor(Fraction(3, 4))
    if factor != 2 + Fraction(11, 30):
        bad.append(("factor", factor))
    ok = not bad
    verdict(8, ok, f"{len(bad)} failures over 200 sets; empirical ratio mean "
                   f"{float(sum(ratios) / len(ratios)):.4f} max {float(max(ratios)):.4f}; factor {factor}")
    assert ok, bad[:5]


def test_criterion_9_documented_substitution(verdict):
    text = README.read_text() if README.exists() else ""
    ok = "not proved" in text and "criteria 5 and 6" in text
    verdict(9, ok, "worst-case 3/4 guarantee replaced by the empirical suite (criteria 5-6), stated in README")
    assert ok
