"""Seminormalization, t-closure, the canonical tower and the R_k chain."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotLocal, RingError
from .extension import Extension
from .ring import closure_mask, is_subring
from .spectrum import IdealSet, classify_local, ideal_generated, ideal_product


# -- closures ---------------------------------------------------------------

def _ascend(E: Extension, adjoinable):
    S = E.S
    cur = E.sub_mask.copy()
    while True:
        cand = np.flatnonzero(adjoinable(cur) & ~cur)
        if cand.size == 0:
            return np.flatnonzero(cur)
        cur = closure_mask(S, [int(cand[0])], include_unit=False, base=cur)


def seminormal_witnesses(S, inR):
    b = np.arange(S.order)
    b2 = S.mul[b, b]
    return inR[b2] & inR[S.mul[b2, b]]


def tclosed_witnesses(S, inR):
    b = np.arange(S.order)
    b2 = S.mul[b, b]
    b3 = S.mul[b2, b]
    r = np.flatnonzero(inR)
    c1 = S.add[b2[:, None], S.neg[S.mul[b[:, None], r[None, :]]]]
    c2 = S.add[b3[:, None], S.neg[S.mul[b2[:, None], r[None, :]]]]
    return (inR[c1] & inR[c2]).any(axis=1)


def _greatest(E: Extension, predicate, lattice=None):
    from .lattice import enumerate_interval
    L = lattice or enumerate_interval(E)
    good = [k for k in range(len(L)) if predicate(E.lower(L.nodes[k]))]
    tops = [k for k in good if all(L.leq[j, k] for j in good)]
    if len(tops) != 1:
        raise RingError("no greatest element among the qualifying intermediate rings")
    return L.nodes[tops[0]]


def seminormalization(E: Extension, method="ascent", lattice=None):
    """Index set of the seminormalization of R in S."""
    if method == "ascent":
        return _ascend(E, lambda cur: seminormal_witnesses(E.S, cur))
    if method == "oracle":
        return _greatest(E, lambda X: X.is_subintegral, lattice)
    raise ValueError(f"unknown method {method!r}")


def t_closure(E: Extension, method="ascent", lattice=None):
    """Index set of the t-closure of R in S."""
    if method == "ascent":
        return _ascend(E, lambda cur: tclosed_witnesses(E.S, cur))
    if method == "oracle":
        return _greatest(E, lambda X: X.is_infraintegral, lattice)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class CanonicalTower:
    base: Extension
    plus_ring: np.ndarray
    t_ring: np.ndarray
    certificates: dict = field(default_factory=dict)

    @property
    def certified(self):
        return all(self.certificates.values())

    @property
    def sizes(self):
        return (len(self.base.sub), len(self.plus_ring), len(self.t_ring), self.base.S.order)


def canonical_tower(E: Extension, method="ascent", lattice=None) -> CanonicalTower:
    plus = seminormalization(E, method, lattice)
    t = t_closure(E, method, lattice)
    if not np.isin(plus, t).all():
        raise RingError("seminormalization is not contained in the t-closure")
    certs = {
        "R<+R subintegral": E.lower(plus).is_subintegral,
        "R<tR infraintegral": E.lower(t).is_infraintegral,
        "+R<S seminormal": E.upper(plus).is_seminormal,
        "tR<S t-closed": E.upper(t).is_tclosed,
    }
    return CanonicalTower(E, plus, t, certs)


# -- R-modules inside S ------------------------------------------------------

class RModuleSet:
    """Subset of ``S`` closed under addition and scaling by the subring ``R``."""

    def __init__(self, E: Extension, members, verified=False):
        mask = np.zeros(E.S.order, dtype=bool)
        mask[np.asarray(list(members), dtype=np.int64)] = True
        if not verified:
            idx = np.flatnonzero(mask)
            if not (mask[E.S.zero] and mask[E.S.add[np.ix_(idx, idx)]].all()
                    and mask[E.S.mul[np.ix_(idx, E.sub)]].all()):
                raise RingError("subset is not an R-submodule")
        self.ext = E
        self.mask = mask

    def __len__(self):
        return int(self.mask.sum())

    @property
    def indices(self):
        return np.flatnonzero(self.mask)

    def __le__(self, other):
        return bool(other.mask[self.mask].all())

    def __eq__(self, other):
        return isinstance(other, RModuleSet) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(np.packbits(self.mask).tobytes())


def module_span(E: Extension, seed, base: RModuleSet | None = None) -> RModuleSet:
    S = E.S
    seed = np.asarray(list(seed), dtype=np.int64)
    scaled = np.unique(S.mul[np.ix_(seed, E.sub)]) if seed.size else seed
    mask = closure_mask(S, scaled.tolist() + [S.zero], mul_closed=False, include_unit=False,
                        base=None if base is None else base.mask.copy())
    return RModuleSet(E, np.flatnonzero(mask), verified=True)


def submodules_between(bottom: RModuleSet, top: RModuleSet, cap=None):
    """All R-submodules N with ``bottom ⊆ N ⊆ top``, ordered by size then indices."""
    from . import config
    from .errors import CapExceeded
    cap = cap or config.limits().lattice_nodes
    E = bottom.ext
    seen = {hash(bottom): bottom}
    frontier = [bottom]
    while frontier:
        nxt = []
        for N in frontier:
            for x in np.flatnonzero(top.mask & ~N.mask):
                M = module_span(E, [int(x)], N)
                h = hash(M)
                if h not in seen:
                    seen[h] = M
                    nxt.append(M)
                    if len(seen) > cap:
                        raise CapExceeded("too many submodules")
        frontier = nxt
    return sorted(seen.values(), key=lambda M: (len(M), tuple(M.indices.tolist())))


def is_uniserial(bottom: RModuleSet, top: RModuleSet) -> bool:
    """Whether the submodules of ``top/bottom`` form a chain."""
    subs = submodules_between(bottom, top)
    return all(a <= b for a, b in zip(subs, subs[1:]))


def module_length(E: Extension, bottom: RModuleSet, top: RModuleSet) -> int:
    """Length of ``top/bottom`` over a local ``R``: every composition factor is ``R/M``."""
    residue = _local_residue_size(E)
    q = len(top) // len(bottom)
    n, x = 0, 1
    while x < q:
        x *= residue
        n += 1
    if x != q:
        raise RingError("quotient size is not a power of the residue field size")
    return n


def _local_max(E: Extension):
    if len(E.max_R) != 1:
        raise NotLocal("the base ring must be local")
    return E.max_R[0]


def _local_residue_size(E: Extension):
    M = _local_max(E)
    return E.R.order // len(M)


def _ambient(E, I: IdealSet):
    return E.embed[I.indices]


@dataclass
class LocalChainData:
    n: int                   # nilpotency index of M modulo the conductor
    M: np.ndarray            # ambient indices of the maximal ideal of R
    power_ideals: list       # power_ideals[j] = M^j S (ideal of S), j = 0..n
    rings: list              # R_k = R + M^(n-k) S, k = 0..n-1
    modules: list            # M_i = M + M^(n-i) S, i = 0..n-1


def local_chain(E: Extension) -> LocalChainData:
    R, S = E.R, E.S
    M = _local_max(E)
    C = E.conductor_in_R
    n, P = 1, M
    while not C.mask[P.indices].all():
        P = ideal_product(P, M)
        n += 1
    powers_R = [IdealSet(R, range(R.order), verified=True), M]
    for _ in range(2, n + 1):
        powers_R.append(ideal_product(powers_R[-1], M))
    power_ideals = [ideal_generated(S, _ambient(E, Pj)) for Pj in powers_R]
    Rmod = module_span(E, [S.one])
    Mmod = module_span(E, _ambient(E, M))
    rings, modules = [], []
    for k in range(n):
        I = power_ideals[n - k]
        Rk = module_span(E, I.indices, Rmod)
        if not is_subring(S, Rk.indices):
            raise RingError(f"R + M^{n - k} S is not a ring")
        rings.append(Rk.indices)
        modules.append(module_span(E, I.indices, Mmod))
    return LocalChainData(n, _ambient(E, M), power_ideals, rings, modules)


def rk_chain(E: Extension):
    """The rings R_k = R + M^(n-k) S for k = 0..n-1."""
    return local_chain(E).rings


@dataclass
class ChainConditionReport:
    uniserial: bool
    chained: bool
    length_matches: bool
    spir_and_cyclic: bool
    n: int
    length: int
    colon_ideal: IdealSet            # I = (M : MS), an ideal of R
    colon_matches_conductor_colon: bool
    branch: str                      # "SPIR", "Field", "FiniteLocal", or "trivial" when M = MS

    @property
    def vector(self):
        return (self.uniserial, self.chained, self.length_matches, self.spir_and_cyclic)


def chain_condition_report(E: Extension) -> ChainConditionReport:
    from .lattice import enumerate_interval, is_chained
    from .ring import quotient_by_ideal
    R, S = E.R, E.S
    data = local_chain(E)
    Mmod = module_span(E, data.M)
    MS = data.power_ideals[1]
    MSmod = RModuleSet(E, MS.indices, verified=True)
    uniserial = is_uniserial(Mmod, MSmod)
    top = module_span(E, MS.indices, module_span(E, [S.one]))
    chained = is_chained(enumerate_interval(E.lower(top.indices)))
    length = module_length(E, Mmod, MSmod)
    # I = (M : MS) and ((R:S) : M), both inside R
    I = [r for r in range(R.order) if Mmod.mask[S.mul[E.embed[r], MS.indices]].all()]
    J = [r for r in range(R.order)
         if E.conductor.mask[S.mul[E.embed[r], data.M]].all()]
    I = IdealSet(R, I, verified=True)
    if Mmod == MSmod:
        principal_quotient, branch = True, "trivial"
    else:
        Q, _ = quotient_by_ideal(R, I)
        tag = classify_local(Q)[0]
        branch = tag if tag in ("SPIR", "Field") else "FiniteLocal"
        cyclic = any(module_span(E, [int(x)], Mmod) == MSmod for x in MS.indices)
        principal_quotient = branch in ("SPIR", "Field") and cyclic
    return ChainConditionReport(uniserial, chained, length == data.n - 1, principal_quotient,
                                data.n, length, I, I.members == tuple(J), branch)
