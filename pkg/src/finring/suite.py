"""Executable structure checks over fixtures and random extensions.

Each check inspects one extension and returns a :class:`CheckResult` with
verdict ``pass``, ``fail`` or ``skipped``. Checks whose hypotheses are not met
are skipped with the unmet hypothesis named; failures carry a witness.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import config
from .closures import seminormal_witnesses, canonical_tower, seminormalization, t_closure
from .errors import ClassificationFailed, LatticeCapExceeded, RingError, UnknownCheck
from .extension import Extension, make_extension
from .lattice import bell_number, enumerate_interval, maximal_chain, partition_count_check
from .polyquot import construct_polyquot
from .ring import (FiniteRing, construct_gf, construct_product, construct_zmod, product_index,
                   quotient_by_ideal, restrict)
from .spectrum import classify_local, enumerate_ideals, ideal_generated, is_reduced


@dataclass
class CheckResult:
    check_id: str
    instance: str
    verdict: str                      # "pass", "fail" or "skipped"
    detail: str = ""
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        return {"check": self.check_id, "instance": self.instance, "verdict": self.verdict,
                "detail": self.detail, "witness": self.witness}


class Skip(Exception):
    pass


class Fail(Exception):
    def __init__(self, detail, **witness):
        super().__init__(detail)
        self.witness = witness


def require(cond, hypothesis):
    if not cond:
        raise Skip(hypothesis)


def expect(cond, detail, **witness):
    if not cond:
        raise Fail(detail, **witness)


class Instance:
    """An extension plus lazily computed lattice and tower shared across checks."""

    def __init__(self, ext: Extension, name="instance"):
        self.ext = ext
        self.name = name

    @cached_property
    def lattice(self):
        try:
            return enumerate_interval(self.ext)
        except LatticeCapExceeded:
            return None

    def need_lattice(self):
        require(self.lattice is not None, "lattice within the node cap")
        return self.lattice

    @cached_property
    def tower(self):
        return canonical_tower(self.ext)


# -- helpers ------------------------------------------------------------------

def _quotient_by_conductor(E: Extension):
    return quotient_by_ideal(E.S, E.conductor)[0]


def _nucleus(E: Extension):
    return quotient_by_ideal(E.R, E.conductor_in_R)[0]


def _is_von_neumann_regular(A: FiniteRing):
    """Every ``a`` has some ``x`` with ``a = a^2 x``."""
    ar = np.arange(A.order)
    sq = A.mul[ar, ar]
    return bool((A.mul[sq] == ar[:, None]).any(axis=1).all())


def _dimension(big, small):
    d, x = 0, 1
    while x < big:
        x *= small
        d += 1
    return d if x == big else None


def _edges_in(L, lo, hi):
    inside = set(L.interval(lo, hi))
    return [(i, j) for i, j in L.hasse_edges if i in inside and j in inside]


def _diagonal_base(E: Extension):
    """The factor ring ``K`` when ``E`` is ``K ⊆ K^n`` along the diagonal, else ``None``."""
    S = E.S
    if S.factors is None or len(S.factors) < 2:
        return None
    K = S.factors[0]
    if not all(F.same_tables(K) for F in S.factors[1:]):
        return None
    n = len(S.factors)
    diag = sorted(product_index(S, [a] * n) for a in range(K.order))
    if list(E.sub) != diag:
        return None
    return K


# -- checks -------------------------------------------------------------------

def check_min(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    L = inst.need_lattice()
    for i, j in L.hasse_edges:
        step = L.step(i, j)
        expect(step.is_minimal, "Hasse edge is not a minimal extension", edge=[i, j])
        try:
            cls = step.classify_minimal()
        except ClassificationFailed as exc:
            raise Fail(str(exc), edge=[i, j])
        M = step.conductor_in_R
        expect(any(M == P for P in step.max_R), "conductor is not maximal", edge=[i, j])
        expect(len(step.support) == 1 and step.support[0] == M, "support differs from {M}", edge=[i, j])
        expect(cls.tag in ("Inert", "Decomposed", "Ramified"), "unknown tag", edge=[i, j])
    return {"edges": len(L.hasse_edges)}


def check_canmin(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    L = inst.need_lattice()
    tw = inst.tower
    p, t = L.index_of(tw.plus_ring), L.index_of(tw.t_ring)
    classes = L.edge_classes
    for lo, hi, tag in ((L.bottom, p, "Ramified"), (p, t, "Decomposed"), (t, L.top, "Inert")):
        for e in _edges_in(L, lo, hi):
            expect(classes[e].tag == tag, f"edge inside the {tag.lower()} segment has tag {classes[e].tag}",
                   edge=list(e))
    return {"plus": p, "t": t}


def check_momega(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    L = inst.need_lattice()
    for e, cls in L.edge_classes.items():
        unr = L.step(*e).is_unramified
        expect(unr == (cls.tag != "Ramified"), f"{cls.tag} step with unramified={unr}", edge=list(e))
    return {"edges": len(L.hasse_edges)}


def check_noun(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    require(E.is_subintegral, "subintegral")
    expect(not E.is_unramified, "subintegral proper extension is unramified")
    return {}


def check_semiprime(inst):
    E = inst.ext
    radical = E.conductor_is_radical()
    expect(E.is_seminormal == radical, "seminormality and radical conductor disagree",
           seminormal=E.is_seminormal, radical=radical)
    return {"seminormal": E.is_seminormal}


def check_tclosed(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    require(E.is_tclosed, "t-closed")
    require(E.is_unramified, "unramified")
    L = inst.need_lattice()
    for j in np.flatnonzero(L.covers[L.bottom]):
        tag = L.edge_classes[(L.bottom, int(j))].tag
        expect(tag == "Inert", f"minimal subextension is {tag}", node=int(j))
    return {}


def check_etale_fiber(inst):
    E = inst.ext
    require(E.is_etale, "etale")
    S = E.S
    sd = E.spectral_data
    equal_everywhere = True
    for i, P in enumerate(E.max_R):
        n = sd.fiber_size(i)
        PS = ideal_generated(S, E.embed[P.indices])
        dim = _dimension(S.order // len(PS), E.R.order // len(P))
        expect(dim is not None and n <= dim, "fiber larger than the fiber-ring dimension", prime=i,
               n=n, dim=dim)
        equal_everywhere &= n == dim
        meet = np.ones(S.order, dtype=bool)
        for j in sd.fiber(i):
            meet &= E.max_S[j].mask
        expect(np.array_equal(PS.mask, meet), "PS is not the meet of the primes above P", prime=i)
    expect(equal_everywhere == E.is_infraintegral, "equality of fiber counts does not match infra-integrality")
    expect(E.is_subintegral == E.is_improper, "subintegral etale extension is proper")
    return {}


def check_red(inst):
    E = inst.ext
    require(E.is_unramified, "unramified")
    S = E.S
    sd = E.spectral_data
    for i, P in enumerate(E.max_R):
        PS = ideal_generated(S, E.embed[P.indices])
        meet = np.ones(S.order, dtype=bool)
        for j in sd.fiber(i):
            meet &= E.max_S[j].mask
        expect(np.array_equal(PS.mask, meet), "PS is not the meet of the primes above P", prime=i)
    if E.is_etale and is_reduced(E.R):
        expect(is_reduced(S), "etale extension of a reduced ring is not reduced")
    return {}


def check_diag(inst):
    E = inst.ext
    K = _diagonal_base(E)
    require(K is not None, "diagonal extension K <= K^n with n >= 2")
    n = len(E.S.factors)
    expect(E.conductor.is_zero(), "conductor of the diagonal is nonzero")
    expect(E.is_infraintegral, "diagonal extension is not infra-integral")
    expect(E.is_seminormal == is_reduced(K), "seminormality differs from reducedness of the base")
    data = {"n": n}
    if n == 2 and K.order <= config.limits().ideal_enumeration:
        L = inst.need_lattice()
        ideals = len(enumerate_ideals(K))
        expect(len(L) == ideals, "intermediate rings of R <= R^2 do not match ideals of R",
               lattice=len(L), ideals=ideals)
        data["ideals"] = ideals
    return data


def check_bell(inst):
    E = inst.ext
    K = _diagonal_base(E)
    require(K is not None, "diagonal extension K <= K^n with n >= 2")
    require(classify_local(K)[0] == "Field", "base ring is a field")
    n = len(E.S.factors)
    L = inst.need_lattice()
    expect(len(L) == bell_number(n), "lattice size differs from the Bell number",
           count=len(L), bell=bell_number(n))
    data = {"count": len(L)}
    if E.S.order <= config.limits().ideal_enumeration:
        ideals = len(enumerate_ideals(E.S))
        expect(ideals == 2 ** n, "ideal count differs from 2^n", ideals=ideals)
        data["ideals"] = ideals
    return data


def check_supf(inst):
    E = inst.ext
    supp = E.support
    expect(supp == E.annihilator_support(), "support from conductor and annihilator differ")
    expect((len(supp) == 0) == E.is_improper, "empty support does not match R = S")
    if not E.is_improper:
        L = inst.need_lattice()
        path = maximal_chain(L)
        contracted = set()
        for a, b in zip(path.chain, path.chain[1:]):
            step = L.step(a, b)
            amb = L.nodes[b][step.conductor.indices]
            inR = amb[E.sub_mask[amb]]
            contracted.add(tuple(sorted(inR.tolist())))
        supp_amb = {tuple(sorted(E.embed[M.indices].tolist())) for M in supp}
        expect(contracted == supp_amb, "support differs from contracted step conductors")
    return {"support": len(supp)}


def check_conzero(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    require(E.is_flat, "flat")
    loc = E.localize_at_conductor()
    expect(loc.conductor.is_zero(), "localized conductor is nonzero", size=len(loc.conductor))
    # the conductor is the kernel of R -> R localized at the support
    e = E.R.zero
    for M in E.support:
        e = int(E.R.add[e, E.r_idempotent_for(M)])
    kernel = tuple(np.flatnonzero(E.R.mul[e] == E.R.zero).tolist())
    expect(kernel == E.conductor_in_R.members, "conductor differs from the localization kernel")
    return {}


_TRANSFER = ("is_seminormal", "is_tclosed", "is_subintegral", "is_infraintegral",
             "is_unramified", "is_flat", "is_etale")


def check_propn(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    loc = E.localize_at_conductor()
    for name in _TRANSFER:
        a, b = getattr(E, name), getattr(loc, name)
        expect(a == b, f"{name} does not transfer to the localization", original=a, localized=b)
    expect(E.is_minimal == loc.is_minimal, "minimality does not transfer")
    L = inst.lattice
    if L is not None:
        count = len(enumerate_interval(loc))
        expect(count == len(L), "lattice size changes under localization", original=len(L), localized=count)
    return {}


def check_sn_quotient(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    Q = _quotient_by_conductor(E)
    red, vnr = is_reduced(Q), _is_von_neumann_regular(Q)
    expect(E.is_seminormal == red == vnr, "seminormal / reduced / regular quotient disagree",
           seminormal=E.is_seminormal, reduced=red, regular=vnr)
    return {"seminormal": E.is_seminormal}


def check_bell_bound(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    require(E.is_etale, "etale")
    red = is_reduced(_quotient_by_conductor(E))
    expect(red == E.is_seminormal, "reduced quotient does not match seminormality")
    require(E.is_seminormal, "seminormal (the Bell bound is stated for the seminormal case)")
    L = inst.need_lattice()
    bound = 1
    S = E.S
    for M in E.support:
        MS = ideal_generated(S, E.embed[M.indices])
        n = _dimension(S.order // len(MS), E.R.order // len(M))
        bound *= bell_number(n)
    expect(len(L) <= bound, "lattice larger than the Bell bound", count=len(L), bound=bound)
    return {"count": len(L), "bound": bound}


def check_sn_infra_unramified(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    require(E.is_seminormal, "seminormal")
    require(E.is_infraintegral, "infra-integral")
    expect(E.is_unramified, "seminormal infra-integral extension is ramified")
    return {}


def check_nucleus(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    require(E.is_etale, "etale")
    red = is_reduced(_nucleus(E))
    expect(red == E.is_seminormal, "reduced nucleus does not match seminormality",
           nucleus_reduced=red, seminormal=E.is_seminormal)
    return {"nucleus_reduced": red}


def check_flat_fields(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    meet = np.ones(E.R.order, dtype=bool)
    for M in E.support:
        meet &= M.mask
    require(np.array_equal(meet, E.conductor_in_R.mask), "conductor is an intersection of maximal ideals")
    fields = all(classify_local(E.localize_at(E.r_idempotent_for(M)).R)[0] == "Field" for M in E.support)
    expect(fields == E.is_flat, "local fields at the support do not match flatness",
           fields=fields, flat=E.is_flat)
    return {}


def check_sn_etale_equiv(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    loc = E.localize_at_conductor()
    first = E.is_seminormal and E.is_etale
    second = is_reduced(loc.R) and is_reduced(loc.S)
    third = is_reduced(loc.R) and loc.conductor.is_zero()
    if not (first == second == third):
        witness = {"first": first, "second": second, "third": third}
        bad = np.flatnonzero(seminormal_witnesses(E.S, E.sub_mask) & ~E.sub_mask)
        if bad.size:
            witness["element_with_square_and_cube_in_R"] = int(bad[0])
        raise Fail("the three characterizations disagree", **witness)
    if first:
        L = inst.need_lattice()
        path = maximal_chain(L)
        for a, b in zip(path.chain, path.chain[1:]):
            base = L.step(a, b).localize_at_conductor().R
            expect(classify_local(base)[0] == "Field", "a minimal step is not over a field after localizing",
                   edge=[a, b])
    return {"holds": first}


def check_tclosure_segments(inst):
    E = inst.ext
    require(not E.is_improper, "R != S")
    require(E.is_seminormal, "seminormal")
    require(E.is_unramified, "unramified")
    t = inst.tower.t_ring
    lower, upper = E.lower(t), E.upper(t)
    expect(lower.is_unramified and upper.is_unramified, "a segment around the t-closure is ramified")
    if E.is_etale:
        expect(lower.is_etale and upper.is_etale, "a segment around the t-closure is not etale")
    return {}


def check_partition(inst):
    E = inst.ext
    require(len(E.max_R) == 1, "R local")
    L = inst.need_lattice()
    rep = partition_count_check(E, L)
    expect(rep.agrees, "partition formula differs from the lattice size",
           lattice=rep.lattice_count, formula=rep.formula_count)
    return {"count": rep.lattice_count}


def check_tower_pieces(inst):
    E = inst.ext
    L = inst.need_lattice()
    tw = inst.tower
    expect(tw.certified, "tower certificate failed", certificates=tw.certificates)
    S = E.S
    plus, t = tw.plus_ring, tw.t_ring
    expect(list(seminormalization(E, "oracle", L)) == list(plus), "seminormalization ascent differs from oracle")
    expect(list(t_closure(E, "oracle", L)) == list(t), "t-closure ascent differs from oracle")
    p_idx, t_idx = L.index_of(plus), L.index_of(t)
    tring, _ = restrict(S, t)
    segments = [
        (E.lower(plus), plus, L.bottom, p_idx),
        (Extension(tring, np.searchsorted(t, plus), verify=False), t, p_idx, t_idx),
        (E.upper(t), None, t_idx, L.top),
    ]
    for seg, ambient, lo, hi in segments:
        sub_lat = enumerate_interval(seg)
        mapped = {tuple((ambient[n] if ambient is not None else n).tolist()) for n in sub_lat.nodes}
        expected = {tuple(L.nodes[k].tolist()) for k in L.interval(lo, hi)}
        expect(mapped == expected, "segment lattice differs from the interval of the full lattice")
    return {"sizes": list(tw.sizes)}


REGISTRY = {
    "T-MIN": check_min,
    "T-CANMIN": check_canmin,
    "T-MOMEGA": check_momega,
    "T-NOUN": check_noun,
    "T-SEMIPRIME": check_semiprime,
    "T-TCLOSED": check_tclosed,
    "T-ETALE-FIBER": check_etale_fiber,
    "T-RED": check_red,
    "T-DIAG": check_diag,
    "T-BELL": check_bell,
    "T-SUPF": check_supf,
    "T-CONZERO": check_conzero,
    "T-PROPN": check_propn,
    "T-SN-QUOTIENT": check_sn_quotient,
    "T-BELL-BOUND": check_bell_bound,
    "T-SN-INFRA-UNRAMIFIED": check_sn_infra_unramified,
    "T-NUCLEUS": check_nucleus,
    "T-FLAT-FIELDS": check_flat_fields,
    "T-SN-ETALE-EQUIV": check_sn_etale_equiv,
    "T-TCLOSURE-SEGMENTS": check_tclosure_segments,
    "T-PARTITION": check_partition,
    "T-TOWER-PIECES": check_tower_pieces,
}


def check_ids():
    return list(REGISTRY)


def run_check(check_id, target, name=None) -> CheckResult:
    if check_id not in REGISTRY:
        raise UnknownCheck(f"unknown check {check_id!r}")
    inst = target if isinstance(target, Instance) else Instance(target, name or "instance")
    try:
        data = REGISTRY[check_id](inst)
    except Skip as s:
        return CheckResult(check_id, inst.name, "skipped", f"hypothesis not met: {s}")
    except Fail as f:
        return CheckResult(check_id, inst.name, "fail", str(f), f.witness)
    except RingError as exc:
        return CheckResult(check_id, inst.name, "fail", f"error: {exc}")
    return CheckResult(check_id, inst.name, "pass", "", data or {})


def run_suite(target, ids=None, name=None):
    inst = target if isinstance(target, Instance) else Instance(target, name or "instance")
    return [run_check(cid, inst) for cid in (ids or check_ids())]


def parse_check_ids(spec: str):
    if spec.strip() == "all":
        return check_ids()
    ids = [s.strip() for s in spec.split(",") if s.strip()]
    for cid in ids:
        if cid not in REGISTRY:
            raise UnknownCheck(f"unknown check {cid!r}")
    return ids


# -- random instances ---------------------------------------------------------

def _f2_quotient(variables, relations):
    return lambda: construct_polyquot(construct_gf(2), variables, relations)


CATALOG = [
    ("F2", lambda: construct_gf(2)),
    ("F3", lambda: construct_gf(3)),
    ("F4", lambda: construct_gf(2, 2)),
    ("Z4", lambda: construct_zmod(4)),
    ("Z8", lambda: construct_zmod(8)),
    ("Z9", lambda: construct_zmod(9)),
    ("F2[z]/(z^2)", _f2_quotient(["z"], ["z^2"])),
    ("F2[t]/(t^3)", _f2_quotient(["t"], ["t^3"])),
    ("F2[x,y]/(x^2,xy,y^2)", _f2_quotient(["x", "y"], ["x^2", "x*y", "y^2"])),
]

DEFAULT_BUDGET = 256
_BLOCKS = {}


def catalog_block(k):
    if k not in _BLOCKS:
        _BLOCKS[k] = CATALOG[k][1]()
    return _BLOCKS[k]


class InstanceGenerator:
    """Deterministic stream of random extensions built from small local rings.

    ``budget`` bounds ``|S|``; the carrier cap applies as well.
    """

    def __init__(self, seed=0, budget=DEFAULT_BUDGET, local_only=False):
        self.seed = seed
        self.budget = budget
        self.local_only = local_only
        self.rng = random.Random(seed)
        self.count = 0

    def __iter__(self):
        return self

    def __next__(self):
        return random_extension(self)


def random_extension(g: InstanceGenerator):
    """Next ``(descriptor, Extension)`` from the generator's stream."""
    cap = min(g.budget, config.limits().carrier)
    while True:
        picks = [g.rng.randrange(len(CATALOG)) for _ in range(g.rng.randint(1, 3))]
        blocks = [catalog_block(k) for k in picks]
        order = int(np.prod([B.order for B in blocks]))
        gens = [g.rng.randrange(order) for _ in range(g.rng.randint(0, 3))]
        if order > cap:
            continue
        E = make_extension(construct_product(blocks), gens)
        if g.local_only and len(E.max_R) != 1:
            continue
        g.count += 1
        names = "*".join(CATALOG[k][0] for k in picks)
        return f"seed={g.seed}#{g.count} S={names} gens={gens}", E


def random_instances(seed, count, budget=DEFAULT_BUDGET, local_only=False):
    g = InstanceGenerator(seed, budget, local_only)
    return [random_extension(g) for _ in range(count)]
