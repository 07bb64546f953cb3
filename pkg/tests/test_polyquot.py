from itertools import product

import pytest

import oracles
from finring.errors import BadCoefficientRing, RingError, RingNotFinite, UndefinedName
from finring.polyquot import construct_polyquot
from finring.ring import construct_gf, construct_zmod, ring_axiom_violation
from finring.spectrum import classify_local, is_local

F2 = construct_gf(2)


def test_dual_numbers_have_nonzero_nilpotent():
    D = construct_polyquot(F2, ["z"], ["z^2"])
    z = D.gen("z")
    assert D.order == 4
    assert z != D.zero and D.mul[z, z] == D.zero


def test_quotient_by_variable_is_base():
    assert construct_polyquot(F2, ["x"], ["x"]).same_tables(F2)


def _monomial_algebra_matches(S, variables, basis, vanishes):
    """Compare products of basis monomials in ``S`` with the rule of a monomial algebra."""
    def ev(exps):
        x = S.one
        for v, e in zip(variables, exps):
            x = S.mul[x, S.power(S.gen(v), e)]
        return int(x)

    images = {m: ev(m) for m in basis}
    if len(set(images.values())) != len(basis):
        return False
    for a, b in product(basis, repeat=2):
        c = tuple(i + j for i, j in zip(a, b))
        expected = S.zero if vanishes(c) else images[c]
        if S.mul[images[a], images[b]] != expected:
            return False
    return True


def test_monomial_algebra_of_order_256():
    S = construct_polyquot(F2, ["t", "y"], ["t^3", "y^3", "t^2*y^2"])
    assert S.order == 2 ** 8
    basis = [(i, j) for i in range(3) for j in range(3) if not (i == 2 and j == 2)]
    assert len(basis) == 8
    vanishes = lambda m: m[0] >= 3 or m[1] >= 3 or (m[0] >= 2 and m[1] >= 2)
    assert _monomial_algebra_matches(S, ["t", "y"], basis, vanishes)
    assert ring_axiom_violation(S) is None


def test_sixteen_element_algebra_brute_force_axioms():
    S = construct_polyquot(F2, ["z", "x", "y"], ["z^2", "z*x", "x^2", "y^2 - y", "z*y - x"])
    assert S.order == 16
    assert oracles.axiom_violations(S) == []


@pytest.mark.parametrize("base,variables,relations,order", [
    (construct_zmod(4), ["x"], ["2*x", "x^2"], 8),
    (construct_zmod(4), ["x"], ["x^2 + x + 1"], 16),
    (construct_gf(2, 2), ["z"], ["z^2"], 16),
    (construct_zmod(8), ["x"], ["x^2 - 2"], 64),
    (construct_zmod(9), ["x"], ["x^3 - 3"], 729),
])
def test_orders_over_chain_rings(base, variables, relations, order):
    S = construct_polyquot(base, variables, relations)
    assert S.order == order
    assert ring_axiom_violation(S) is None


def test_galois_ring_of_order_16_is_local_with_residue_field_four():
    S = construct_polyquot(construct_zmod(4), ["x"], ["x^2 + x + 1"])
    tag, M, _, nilpotency = classify_local(S)
    assert tag == "SPIR" and nilpotency == 2
    assert S.order // len(M) == 4


def test_eisenstein_extension_is_spir():
    S = construct_polyquot(construct_zmod(9), ["x"], ["x^3 - 3"])
    assert is_local(S)
    tag, M, t, _ = classify_local(S)
    assert tag == "SPIR"
    assert len(M) == 243


def test_non_chain_coefficients_rejected():
    with pytest.raises(BadCoefficientRing):
        construct_polyquot(construct_zmod(6), ["x"], ["x^2"])


def test_infinite_quotient_rejected():
    with pytest.raises(RingNotFinite):
        construct_polyquot(F2, ["x", "y"], ["x^2"])


def test_unit_relation_rejected():
    with pytest.raises(RingError):
        construct_polyquot(F2, ["x"], ["1"])


def test_unknown_symbol_in_relation():
    with pytest.raises(UndefinedName):
        construct_polyquot(F2, ["x"], ["w^2"])


def test_gf4_constant_in_relation():
    F4 = construct_gf(2, 2)
    S = construct_polyquot(F4, ["z"], ["z^2 - x"])
    assert S.order == 16
    assert is_local(S)
