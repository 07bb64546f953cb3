import pytest
from hypothesis import given, settings, strategies as st

import oracles
from finring.errors import LatticeCapExceeded, NotLocal
from finring.extension import make_extension
from finring.fixtures import diagonal_extension, fixture, local_ramified_pair
from finring.lattice import (bell_number, enumerate_interval, hasse_dot, is_chained, maximal_chain,
                             partition_count_check, powerset_subrings, set_partitions)
from finring.ring import construct_gf, construct_product, construct_zmod
from finring.suite import random_instances

F2 = construct_gf(2)


def f2_power(n):
    return diagonal_extension(F2, n)


def test_bell_numbers_against_stirling_sums():
    for n in range(9):
        assert bell_number(n) == oracles.stirling_bell(n)
        if n <= 6:
            assert len(list(set_partitions(range(n)))) == bell_number(n)


def test_lattice_sizes():
    assert len(enumerate_interval(f2_power(3))) == 5
    assert len(enumerate_interval(f2_power(4))) == 15
    assert len(enumerate_interval(make_extension(construct_zmod(4), [1]))) == 1


def test_partition_lattice_of_three_set_has_six_covers():
    L = enumerate_interval(f2_power(3))
    assert len(L.hasse_edges) == 6


def test_maximal_chains():
    fx = fixture("FX-RAMDEC")
    path = maximal_chain(enumerate_interval(fx.ext))
    assert path.tags == ["Ramified", "Decomposed"]
    path = maximal_chain(enumerate_interval(make_extension(construct_gf(2, 2))))
    assert path.tags == ["Inert"]
    path = maximal_chain(enumerate_interval(make_extension(construct_zmod(4), [1])))
    assert path.chain == [0] and path.tags == []


def test_chained():
    assert is_chained(enumerate_interval(local_ramified_pair()))
    assert not is_chained(enumerate_interval(f2_power(3)))
    assert is_chained(enumerate_interval(fixture("FX-RAMDEC").ext))


def test_partition_report_on_f2_squared():
    rep = partition_count_check(f2_power(2))
    assert rep.lattice_count == rep.formula_count == 2


def test_partition_report_local_and_fixture():
    rep = partition_count_check(local_ramified_pair())
    assert rep.agrees and rep.formula_count == 2
    rep = partition_count_check(fixture("FX-RAMDEC").ext)
    assert rep.agrees and rep.lattice_count == 3


def test_partition_report_requires_local_base():
    E = make_extension(construct_product([F2, construct_gf(3)]))
    with pytest.raises(NotLocal):
        partition_count_check(E)


def test_hasse_dot_single_node():
    dot = hasse_dot(enumerate_interval(make_extension(construct_zmod(4), [1])))
    assert dot == 'digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n  n0 [label="#0 |4|"];\n}\n'


def test_hasse_dot_labels_steps():
    dot = hasse_dot(enumerate_interval(fixture("FX-RAMDEC").ext))
    assert 'n0 -> n1 [label="ramified"];' in dot
    assert 'n1 -> n2 [label="decomposed"];' in dot
    dot = hasse_dot(enumerate_interval(f2_power(3)))
    assert dot.count("->") == 6


def test_node_cap():
    with pytest.raises(LatticeCapExceeded) as info:
        enumerate_interval(f2_power(4), cap=5)
    assert info.value.partial_count > 5


def test_interval_queries():
    L = enumerate_interval(f2_power(3))
    assert L.interval(L.bottom, L.top) == list(range(5))
    assert all(L.leq[L.bottom, k] and L.leq[k, L.top] for k in range(len(L)))


@pytest.mark.parametrize("make", [lambda: f2_power(3), local_ramified_pair, lambda: fixture("FX-RAMDEC").ext,
                                  lambda: diagonal_extension(construct_zmod(4), 2)])
def test_bfs_matches_brute_force_subsets(make):
    E = make()
    nodes = [tuple(n.tolist()) for n in enumerate_interval(E).nodes]
    assert nodes == oracles.subrings_between(E.S, E.sub)
    assert nodes == powerset_subrings(E)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_bfs_matches_powerset_filter(seed):
    _, E = random_instances(seed, 1, budget=64)[0]
    L = enumerate_interval(E)
    assert [tuple(n.tolist()) for n in L.nodes] == powerset_subrings(E)
    for i, j in L.hasse_edges:
        assert L.step(i, j).is_minimal
