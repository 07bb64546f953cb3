import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finring.closures import (RModuleSet, canonical_tower, is_uniserial, chain_condition_report, local_chain,
                              module_length, module_span, seminormalization, submodules_between,
                              t_closure)
from finring.errors import NotLocal
from finring.extension import make_extension
from finring.fixtures import diagonal_extension, fixture, local_ramified_pair
from finring.lattice import enumerate_interval
from finring.ring import construct_gf, construct_product, construct_zmod
from finring.suite import random_instances

F2 = construct_gf(2)


def test_seminormalization_examples():
    fx = fixture("FX-RAMDEC")
    assert list(seminormalization(fx.ext)) == list(fx.extras["T"])
    E = make_extension(construct_product([F2, F2]))
    assert list(seminormalization(E)) == list(E.sub)


@pytest.mark.parametrize("base", ["F2", "Z4"])
def test_seminormalization_of_r_in_r_squared_is_t(base):
    fx = fixture(f"FX-SQUARE-{base}")
    assert list(seminormalization(fx.ext)) == list(fx.extras["T"])
    assert list(seminormalization(fx.ext, "oracle")) == list(fx.extras["T"])


def test_t_closure_examples():
    fx = fixture("FX-RAMDEC")
    assert len(t_closure(fx.ext)) == fx.ext.S.order
    E = make_extension(construct_gf(2, 2))
    assert list(t_closure(E)) == list(E.sub)
    E = diagonal_extension(construct_zmod(4), 2)
    assert len(t_closure(E)) == 16


def test_canonical_towers():
    tw = canonical_tower(fixture("FX-RAMDEC").ext)
    assert tw.sizes == (4, 8, 16, 16) and tw.certified
    tw = canonical_tower(make_extension(construct_gf(2, 2)))
    assert tw.sizes == (2, 2, 2, 4) and tw.certified
    tw = canonical_tower(make_extension(construct_zmod(4), [1]))
    assert tw.sizes == (4, 4, 4, 4) and tw.certified


def test_unknown_method():
    with pytest.raises(ValueError):
        seminormalization(local_ramified_pair(), method="guess")


def test_local_chain_of_two_variable_monomial_algebra():
    E = fixture("FX-MONOMIAL").ext
    data = local_chain(E)
    assert data.n == 3
    dims = [int(np.log2(len(m))) for m in data.modules]
    # M_i = M + M^(n-i) S for i = 0, 1, 2
    assert dims[1] == 3 and dims[2] == 5
    assert module_length(E, data.modules[1], data.modules[2]) == 2


def test_local_chain_of_minimal_ramified():
    data = local_chain(local_ramified_pair())
    assert data.n == 1
    assert len(data.rings) == 1 and len(data.rings[0]) == 4


def test_local_chain_requires_local_base():
    with pytest.raises(NotLocal):
        local_chain(make_extension(construct_product([construct_gf(2), construct_gf(3)]), [3]))


def test_uniserial_examples():
    E = local_ramified_pair()
    data = local_chain(E)
    M = module_span(E, data.M)
    MS = RModuleSet(E, data.power_ideals[1].indices)
    assert is_uniserial(M, MS)
    assert is_uniserial(M, M)


def test_monomial_algebra_submodule_report():
    E = fixture("FX-MONOMIAL").ext
    data = local_chain(E)
    M = module_span(E, data.M)
    MS = RModuleSet(E, data.power_ideals[1].indices)
    subs = submodules_between(M, MS)
    assert subs[0] == M and subs[-1] == MS
    # two submodules of equal size exist, so the interval is not a chain
    assert not is_uniserial(M, MS)


def test_chain_conditions_on_minimal_ramified_hold_trivially():
    rep = chain_condition_report(local_ramified_pair())
    assert rep.vector == (True, True, True, True)
    assert rep.branch == "trivial" and rep.n == 1


def test_chain_conditions_on_monomial_algebra_reported():
    rep = chain_condition_report(fixture("FX-MONOMIAL").ext)
    assert rep.n == 3
    assert len(rep.vector) == 4
    assert rep.colon_matches_conductor_colon


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_ascent_agrees_with_lattice_oracle(seed):
    _, E = random_instances(seed, 1, budget=64)[0]
    L = enumerate_interval(E)
    assert list(seminormalization(E)) == list(seminormalization(E, "oracle", L))
    assert list(t_closure(E)) == list(t_closure(E, "oracle", L))
    tw = canonical_tower(E)
    assert tw.certified
    assert set(tw.plus_ring) <= set(tw.t_ring)
