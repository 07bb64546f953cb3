import pytest
from hypothesis import given, settings, strategies as st

import oracles
from finring import config
from finring.errors import CapExceeded
from finring.polyquot import construct_polyquot
from finring.ring import construct_gf, construct_product, construct_zmod, product_index
from finring.spectrum import (enumerate_ideals, fmir_decomposition, ideal_generated, idempotents,
                              is_local, is_radical_ideal, is_reduced, local_decomposition,
                              maximal_ideals, nilradical, IdealSet)

F2 = construct_gf(2)
D = construct_polyquot(F2, ["z"], ["z^2"])
T_ALG = construct_polyquot(F2, ["z", "x"], ["z^2", "z*x", "x^2"])
S_SPLIT = construct_polyquot(F2, ["z", "x", "y"], ["z^2", "z*x", "x^2", "y^2 - y", "z*y - x"])

SMALL_RINGS = [
    construct_zmod(4), construct_zmod(6), construct_zmod(12), construct_gf(2, 2), D, T_ALG,
    construct_product([D, F2]), construct_product([F2] * 3), construct_product([construct_zmod(4), construct_gf(3)]),
    construct_polyquot(F2, ["t"], ["t^3"]), S_SPLIT,
]


def test_nilradicals():
    assert nilradical(F2).members == (0,)
    assert nilradical(construct_zmod(4)).members == (0, 2)
    P = construct_product([D, F2])
    z = D.gen("z")
    assert set(nilradical(P).members) == {product_index(P, [0, 0]), product_index(P, [z, 0])}


def test_idempotent_counts():
    P = construct_product([F2, F2])
    assert len(idempotents(P)) == 4
    assert len(idempotents(construct_zmod(9))) == 2
    found = {i for i, _ in idempotents(S_SPLIT)}
    y = S_SPLIT.gen("y")
    assert found == {S_SPLIT.zero, S_SPLIT.one, y, int(S_SPLIT.sub(S_SPLIT.one, y))}


def test_local_decompositions():
    assert sorted(local_decomposition(construct_zmod(6)).tags) == ["Field", "Field"]
    (f,) = local_decomposition(construct_zmod(4)).factors
    assert f.tag == "SPIR" and f.nilpotency_index == 2 and f.ring.element(f.uniformizer) == f.ring.element(2)
    (f,) = local_decomposition(construct_polyquot(F2, ["t"], ["t^3"])).factors
    assert f.tag == "SPIR" and f.nilpotency_index == 3
    (f,) = local_decomposition(construct_polyquot(F2, ["x", "y"], ["x^2", "x*y", "y^2"])).factors
    assert f.tag == "FiniteLocal" and len(f.maximal_ideal) == 4


def test_z12_splits_as_spir_times_field():
    dec = local_decomposition(construct_zmod(12))
    assert sorted((f.tag, f.ring.order) for f in dec.factors) == [("Field", 3), ("SPIR", 4)]
    assert fmir_decomposition(construct_zmod(12)).certified


def test_maximal_ideals_small_cases():
    P = construct_product([F2, F2])
    assert [len(M) for M in maximal_ideals(P)] == [2, 2]
    assert [M.members for M in maximal_ideals(construct_zmod(4))] == [(0, 2)]


def test_t_algebra_has_one_maximal_ideal():
    (M,) = maximal_ideals(T_ALG)
    assert set(M.members) == set(ideal_generated(T_ALG, [T_ALG.gen("z"), T_ALG.gen("x")]).members)


def test_generated_ideals():
    assert ideal_generated(construct_zmod(4), [2]).members == (0, 2)
    assert set(ideal_generated(D, [D.gen("z")]).members) == {D.zero, D.gen("z")}
    x = T_ALG.gen("x")
    assert set(ideal_generated(T_ALG, [x]).members) == {T_ALG.zero, x}


def test_ideal_counts():
    assert len(enumerate_ideals(construct_product([F2] * 3))) == 8
    assert len(enumerate_ideals(construct_zmod(4))) == 3
    assert len(enumerate_ideals(construct_gf(2, 2))) == 2


def test_ideal_enumeration_cap():
    big = construct_product([construct_zmod(8), construct_zmod(9), construct_zmod(25)])
    with pytest.raises(CapExceeded):
        enumerate_ideals(big)


def test_radical_ideals():
    Z4 = construct_zmod(4)
    assert is_radical_ideal(Z4, IdealSet(Z4, [0, 2]))
    assert not is_radical_ideal(Z4, IdealSet(Z4, [0]))
    P = construct_product([F2, F2])
    assert is_radical_ideal(P, IdealSet(P, [P.zero]))
    assert is_reduced(P) and not is_reduced(Z4)


@pytest.mark.parametrize("R", SMALL_RINGS, ids=lambda R: R.provenance)
def test_ideals_match_oracle(R):
    assert {frozenset(I.members) for I in enumerate_ideals(R)} == oracles.ideals(R)
    assert {frozenset(M.members) for M in maximal_ideals(R)} == oracles.maximal_ideals(R)
    assert set(nilradical(R).members) == oracles.nilradical(R)
    assert {i for i, _ in idempotents(R)} == oracles.idempotents(R)


@pytest.mark.parametrize("R", SMALL_RINGS, ids=lambda R: R.provenance)
def test_local_factors_recompose(R):
    dec = local_decomposition(R)
    assert len(dec.factors) == len(maximal_ideals(R))
    prod = 1
    for f in dec.factors:
        assert is_local(f.ring)
        prod *= f.ring.order
    assert prod == R.order


@settings(max_examples=20, deadline=None)
@given(st.lists(st.sampled_from(range(len(SMALL_RINGS[:7]))), min_size=1, max_size=2))
def test_ideal_count_is_multiplicative(picks):
    rings = [SMALL_RINGS[k] for k in picks]
    P = construct_product(rings)
    if P.order > config.limits().ideal_enumeration:
        return
    expected = 1
    for R in rings:
        expected *= len(enumerate_ideals(R))
    assert len(enumerate_ideals(P)) == expected
