import itertools
import random

import pytest

from oracles import raw_coefficient_search
from sumnet.field import GF, GF2
from sumnet.fixtures import fixture
from sumnet.generate import generate_instance
from sumnet.graph import Dag, Instance
from sumnet.io import to_instance
from sumnet.pipeline import solve
from sumnet.rewire import augment
from sumnet.verify import (
    LocalCode,
    SearchTooLarge,
    brute_force_assignment_search,
    check_local_validity,
    check_sum_recovery,
    local_code_from_assignment,
    propagate,
    simulate_transmission,
    xor_fold,
)


def unit_code(g, sources, coeff=1):
    index = {s: k for k, s in enumerate(sources)}
    code = LocalCode()
    for e in g.edges.values():
        if e.tail in index:
            code.source_inputs[e.id] = {index[e.tail]: coeff}
        else:
            code.inputs[e.id] = {f.id: coeff for f in g.in_edges(e.tail)}
    return code


def edge(g, a, b):
    return next(e for e in g.out_edges(g.node(a)) if g.label(e.head) == b)


def test_propagate_diamond_all_ones():
    aug = augment(fixture("DIAMOND"))
    g = aug.graph
    vecs = propagate(g, unit_code(g, aug.virtual_sources), 2, GF2)
    assert vecs[edge(g, "m", "t1").id] == (1, 1)


def test_propagate_line():
    aug = augment(fixture("LINE1"))
    vecs = propagate(aug.graph, unit_code(aug.graph, aug.virtual_sources), 1, GF2)
    assert set(vecs.values()) == {(1,)}


def test_propagate_zero_code():
    aug = augment(fixture("BUTTERFLY"))
    vecs = propagate(aug.graph, unit_code(aug.graph, aug.virtual_sources, 0), 2, GF2)
    assert set(vecs.values()) == {(0, 0)}


def test_propagate_missing_coefficient_names_edge():
    aug = augment(fixture("LINE1"))
    g = aug.graph
    code = unit_code(g, aug.virtual_sources)
    del code.inputs[edge(g, "a", "t1").id]
    with pytest.raises(ValueError, match="a->t1"):
        propagate(g, code, 1, GF2)


def test_validity_of_propagated_code():
    aug = augment(fixture("BUTTERFLY"))
    g = aug.graph
    vecs = propagate(g, unit_code(g, aug.virtual_sources), 2, GF2)
    assert check_local_validity(g, vecs, aug.virtual_sources, GF2) == (True, None)


def test_validity_projection_inside_span():
    aug = augment(fixture("DIAMOND"))
    g = aug.graph
    vecs = propagate(g, unit_code(g, aug.virtual_sources), 2, GF2)
    vecs[edge(g, "m", "t1").id] = (1, 0)
    vecs[edge(g, "t1", "t1'").id] = (1, 0)
    assert check_local_validity(g, vecs, aug.virtual_sources, GF2)[0]


def test_validity_witness_on_line():
    aug = augment(fixture("LINE1"))
    g = aug.graph
    a = {e.id: (1,) for e in g.edges.values()}
    a[edge(g, "a", "t1").id] = (0,)
    ok, witness = check_local_validity(g, a, aug.virtual_sources, GF2)
    assert not ok and witness == edge(g, "t1", "t1'")


def test_sum_recovery_examples():
    rep = solve(fixture("STAR3x2"))
    aug = rep.augmented
    tr = check_sum_recovery(aug.graph, rep.assignment, aug.virtual_sources, aug.virtual_terminals, rep.field)
    assert tr.all_recovered and all(v.sum_recovered for v in tr.per_terminal.values())
    zero = {i: (0, 0, 0) for i in aug.graph.edges}
    tr = check_sum_recovery(aug.graph, zero, aug.virtual_sources, aug.virtual_terminals, GF2)
    assert not any(v.sum_recovered for v in tr.per_terminal.values())


def test_sum_recovery_single_source():
    aug = augment(fixture("LINE1"))
    a = {i: (1,) for i in aug.graph.edges}
    tr = check_sum_recovery(aug.graph, a, aug.virtual_sources, aug.virtual_terminals, GF2)
    assert tr.all_recovered


def test_span_diagnostic_differs_from_edge_criterion():
    # the terminal could combine [1,0] and [0,1] but its virtual edge carries [1,0]
    aug = augment(fixture("BUTTERFLY"))
    g = aug.graph
    a = propagate(g, unit_code(g, aug.virtual_sources), 2, GF2)
    t1 = edge(g, "t1", "t1'")
    a[t1.id] = (1, 0)
    tr = check_sum_recovery(g, a, aug.virtual_sources, aug.virtual_terminals, GF2)
    verdict = tr.per_terminal[t1.head]
    assert not verdict.sum_recovered and verdict.span_recovered


def butterfly_gf8():
    return solve(fixture("BUTTERFLY"), GF(3), solver="2xn")


def test_simulate_butterfly_3_5():
    rep = butterfly_gf8()
    aug = rep.augmented
    (out,) = simulate_transmission(aug.graph, rep.assignment, aug.virtual_sources, aug.virtual_terminals, rep.field, [3, 5])
    assert set(out.values()) == {6}


def test_simulate_zero_sources():
    rep = butterfly_gf8()
    aug = rep.augmented
    (out,) = simulate_transmission(aug.graph, rep.assignment, aug.virtual_sources, aug.virtual_terminals, rep.field, [0, 0])
    assert set(out.values()) == {0}


def test_simulate_star_ones():
    rep = solve(fixture("STAR3x2"))
    aug = rep.augmented
    (out,) = simulate_transmission(aug.graph, rep.assignment, aug.virtual_sources, aug.virtual_terminals, GF2, [1, 1, 1])
    assert set(out.values()) == {1}


def test_simulate_batch_runs_each_tuple():
    rep = butterfly_gf8()
    aug = rep.augmented
    tuples = [(3, 5), (0, 7), (4, 4)]
    outs = simulate_transmission(aug.graph, rep.assignment, aug.virtual_sources, aug.virtual_terminals, rep.field, batch=tuples)
    assert [set(o.values()) for o in outs] == [{6}, {7}, {0}]


def test_simulate_refuses_invalid():
    aug = augment(fixture("LINE1"))
    a = {i: (0,) for i in aug.graph.edges}
    with pytest.raises(ValueError):
        simulate_transmission(aug.graph, a, aug.virtual_sources, aug.virtual_terminals, GF2)


def test_simulate_is_linear():
    rep = solve(fixture("FAN3"), GF(4))
    aug = rep.augmented
    rounds = simulate_transmission(
        aug.graph, rep.assignment, aug.virtual_sources, aug.virtual_terminals, rep.field, rounds=50, seed=9
    )
    rng = random.Random(9)
    for out in rounds:
        xs = [rep.field.random_element(rng) for _ in aug.virtual_sources]
        for t, y in out.items():
            vec = rep.assignment[aug.graph.in_edges(t)[0].id]
            assert y == rep.field.dot(vec, xs) == xor_fold(xs)


def test_local_code_round_trip():
    for name in ("BUTTERFLY", "FAN3", "STAR3x2", "DD"):
        rep = solve(fixture(name))
        aug = rep.augmented
        code = local_code_from_assignment(aug.graph, rep.assignment, aug.virtual_sources, rep.field)
        assert propagate(aug.graph, code, len(aug.virtual_sources), rep.field) == rep.assignment


def test_mutation_outside_span_is_caught():
    rng = random.Random(4)
    for name in ("BUTTERFLY", "FAN3", "DIAMOND", "DD"):
        rep = solve(fixture(name), GF(2), solver="2xn")
        aug, f = rep.augmented, rep.field
        g = aug.graph
        for e in g.edges.values():
            if e.tail in aug.virtual_sources:
                continue
            span_in = [rep.assignment[x.id] for x in g.in_edges(e.tail)]
            outside = [v for v in itertools.product(range(f.size), repeat=2) if not f.in_span(v, span_in)]
            if not outside:
                continue
            a = dict(rep.assignment)
            a[e.id] = rng.choice(outside)
            ok, witness = check_local_validity(g, a, aug.virtual_sources, f)
            assert not ok and witness.id == e.id


def test_brute_force_examples():
    assert brute_force_assignment_search(fixture("CUT")) is False
    assert brute_force_assignment_search(fixture("DIAMOND")) is True
    assert brute_force_assignment_search(fixture("LINE1")) is True
    assert brute_force_assignment_search(fixture("BUTTERFLY")) is True


def test_brute_force_matches_raw_coefficient_enumeration():
    compared = {True: 0, False: 0}
    for seed in range(300):
        kind = "two_by_n" if seed % 2 else "n_by_two"
        n = 1 + seed % 3
        src, term = (2, n) if kind == "two_by_n" else (n, 2)
        doc = generate_instance(kind, src, term, extra_nodes=seed % 3, seed=seed, infeasible=seed % 3 == 0, extra_edges=seed % 2)
        inst = to_instance(doc)
        raw = raw_coefficient_search(inst)
        if raw is None:
            continue
        assert brute_force_assignment_search(inst) is raw, doc.name
        compared[raw] += 1
    assert compared[True] >= 20 and compared[False] >= 10, compared


def test_brute_force_cap():
    doc = generate_instance("two_by_n", 2, 5, extra_nodes=8, seed=1, extra_edges=6)
    with pytest.raises(SearchTooLarge):
        brute_force_assignment_search(to_instance(doc), edge_cap=12)


def test_brute_force_single_relay_serves_three_by_three():
    # outside both solved shapes, but one relay forwarding the sum suffices
    labels = ["s1", "s2", "s3", "r", "t1", "t2", "t3"]
    pairs = [("s1", "r"), ("s2", "r"), ("s3", "r"), ("r", "t1"), ("r", "t2"), ("r", "t3")]
    inst = Instance(Dag.from_pairs(labels, pairs), (0, 1, 2), (4, 5, 6))
    assert brute_force_assignment_search(inst) is True


def naive_gf2_search(inst):
    """Enumerate raw local coefficients over GF(2); only for very small graphs."""
    aug = augment(inst, check=False)
    g = aug.graph
    slots = []
    for e in g.edges.values():
        if e.tail in aug.virtual_sources:
            continue
        for f in g.in_edges(e.tail):
            slots.append((e.id, f.id))
    for bits in itertools.product((0, 1), repeat=len(slots)):
        code = unit_code(g, aug.virtual_sources)
        for e in code.inputs:
            code.inputs[e] = {}
        for (e, f), b in zip(slots, bits):
            code.inputs[e][f] = b
        vecs = propagate(g, code, len(inst.sources), GF2)
        tr = check_sum_recovery(g, vecs, aug.virtual_sources, aug.virtual_terminals, GF2)
        if tr.all_recovered:
            return True
    return False


def test_brute_force_matches_raw_coefficient_enumeration():
    rng = random.Random(0)
    checked = 0
    while checked < 40:
        kind = rng.choice(["two_by_n", "n_by_two"])
        n_src, n_term = (2, rng.randint(1, 2)) if kind == "two_by_n" else (rng.randint(1, 2), 2)
        doc = generate_instance(kind, n_src, n_term, extra_nodes=rng.randint(0, 2), seed=rng.randrange(10 ** 6),
                                infeasible=rng.random() < 0.5, extra_edges=rng.randint(0, 2))
        inst = to_instance(doc)
        aug = augment(inst, check=False)
        slots = sum(len(aug.graph.in_edges(e.tail)) for e in aug.graph.edges.values())
        if slots > 16:
            continue
        assert brute_force_assignment_search(inst) == naive_gf2_search(inst)
        checked += 1
