"""Named example extensions with their known facts."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import UnknownFixture
from .extension import Extension, make_extension
from .polyquot import construct_polyquot
from .ring import construct_gf, construct_product, construct_zmod, product_index, subring_closure


@dataclass
class Fixture:
    name: str
    ext: Extension
    facts: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)   # named index sets (intermediate rings)


def _field(q):
    for p in (2, 3, 5, 7, 11, 13):
        d, x = 0, 1
        while x < q:
            x *= p
            d += 1
        if x == q:
            return construct_gf(p, d)
    raise UnknownFixture(f"no field of order {q} available")


def diagonal_extension(K, n) -> Extension:
    """``K ⊆ K^n`` along the diagonal; ``K`` may be any ring."""
    S = construct_product([K] * n)
    gens = [product_index(S, [i] * n) for _, i in K.gen_names]
    return make_extension(S, gens)


def local_ramified_pair():
    """``k[z]/(z^2) ⊂ k[z,x]/(z^2, zx, x^2)`` over k = F_2."""
    T = construct_polyquot(construct_gf(2), ["z", "x"], ["z^2", "z*x", "x^2"])
    return make_extension(T, [T.gen("z")])


def fx_ramdec():
    S = construct_polyquot(construct_gf(2), ["z", "x", "y"],
                           ["z^2", "z*x", "x^2", "y^2 - y", "z*y - x"])
    E = make_extension(S, [S.gen("z")])
    T = subring_closure(S, [S.gen("z"), S.gen("x")])
    facts = {"order": 16, "chain": ["Ramified", "Decomposed"], "infraintegral": True,
             "unramified": True, "seminormal": False}
    return Fixture("FX-RAMDEC", E, facts, {"T": T, "S": list(range(S.order))})


def fx_ram():
    E = local_ramified_pair()
    facts = {"order": 8, "minimal": True, "class": "Ramified", "subintegral": True,
             "unramified": False, "seminormal": False, "flat": False, "chain_conditions": (True,) * 4}
    return Fixture("FX-RAM", E, facts)


def fx_square(base="F2"):
    """``R ⊆ R^2`` with the image of ``R[x]/(x^2, tx)`` under ``a + bx -> (a + bt, a)``."""
    if base == "F2":
        R = construct_polyquot(construct_gf(2), ["z"], ["z^2"])
        t = R.gen("z")
    elif base == "Z4":
        R = construct_zmod(4)
        t = 2
    else:
        raise UnknownFixture(f"FX-SQUARE has no base {base!r}")
    E = diagonal_extension(R, 2)
    S = E.S
    T = subring_closure(S, list(E.sub) + [product_index(S, [t, R.zero])])
    return Fixture(f"FX-SQUARE-{base}", E, {"plus_is_T": True}, {"T": T})


def fx_monomial():
    S = construct_polyquot(construct_gf(2), ["t", "y"], ["t^3", "y^3", "t^2*y^2"])
    E = make_extension(S, [S.gen("t")])
    return Fixture("FX-MONOMIAL", E, {"order": 256, "n": 3, "dim_M2": 5, "dim_M1": 3, "length_M2_M1": 2})


def fx_diag(q, n):
    K = _field(q)
    E = diagonal_extension(K, n)
    from .lattice import bell_number
    return Fixture(f"FX-DIAG({q},{n})", E, {"lattice_count": bell_number(n), "ideal_count": 2 ** n})


def fx_f2f4():
    E = make_extension(construct_gf(2, 2))
    return Fixture("FX-F2F4", E, {"minimal": True, "class": "Inert", "tclosed": True, "unramified": True})


def fx_z4sq():
    E = diagonal_extension(construct_zmod(4), 2)
    return Fixture("FX-Z4SQ", E, {"etale": True, "seminormal": False, "nucleus_reduced": False})


_SIMPLE = {
    "FX-RAMDEC": fx_ramdec,
    "FX-RAM": fx_ram,
    "FX-SQUARE-F2": lambda: fx_square("F2"),
    "FX-SQUARE-Z4": lambda: fx_square("Z4"),
    "FX-MONOMIAL": fx_monomial,
    "FX-F2F4": fx_f2f4,
    "FX-Z4SQ": fx_z4sq,
}

DEFAULT_DIAGONALS = [(2, 2), (2, 3), (3, 2), (4, 2), (3, 3)]


def fixture_names():
    return list(_SIMPLE) + [f"FX-DIAG({q},{n})" for q, n in DEFAULT_DIAGONALS]


def fixture(name: str) -> Fixture:
    if name in _SIMPLE:
        return _SIMPLE[name]()
    m = re.fullmatch(r"FX-DIAG\((\d+),\s*(\d+)\)", name)
    if m:
        return fx_diag(int(m.group(1)), int(m.group(2)))
    raise UnknownFixture(f"unknown fixture {name!r}")
