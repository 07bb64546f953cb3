"""Ideals, maximal spectrum and local decomposition of a finite ring."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import CapExceeded, NotAnIdeal, RingError
from .ring import FiniteRing, RingElement, closure_mask, idempotent_factor, is_ideal


class IdealSet:
    """An ideal of ``ring``, stored as a sorted tuple of carrier indices.

    Membership in the ring's ideal lattice is verified on construction unless
    the caller passes ``verified=True`` for a set it has just closed itself.
    """

    __slots__ = ("ring", "members", "_mask")

    def __init__(self, ring: FiniteRing, members, verified=False):
        members = tuple(sorted(set(int(m) for m in members)))
        if not verified and not is_ideal(ring, members):
            raise NotAnIdeal("subset is not closed under addition and ring multiplication")
        self.ring = ring
        self.members = members
        self._mask = None

    @property
    def mask(self):
        if self._mask is None:
            m = np.zeros(self.ring.order, dtype=bool)
            m[list(self.members)] = True
            m.setflags(write=False)
            self._mask = m
        return self._mask

    @property
    def indices(self):
        return np.asarray(self.members, dtype=np.int64)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x):
        if isinstance(x, RingElement):
            x = x.idx
        return 0 <= int(x) < self.ring.order and bool(self.mask[int(x)])

    def __eq__(self, other):
        return isinstance(other, IdealSet) and other.ring is self.ring and other.members == self.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        shown = ", ".join(self.ring.label(m) for m in self.members[:8])
        more = ", ..." if len(self.members) > 8 else ""
        return f"IdealSet[{len(self)}]({{{shown}{more}}})"

    @property
    def sort_key(self):
        return (len(self.members), self.members)

    def is_unit_ideal(self):
        return self.ring.one in self

    def is_zero(self):
        return self.members == (self.ring.zero,)


def canonical_sort(ideals):
    return sorted(ideals, key=lambda I: I.sort_key)


def _indices(R, elems):
    out = []
    for e in elems:
        if isinstance(e, RingElement):
            if e.ring is not R:
                raise RingError("element belongs to a different ring")
            out.append(e.idx)
        else:
            out.append(int(e))
    return out


def ideal_generated(R: FiniteRing, gens=()) -> IdealSet:
    gens = _indices(R, gens)
    seed = [R.zero]
    for g in gens:
        seed.extend(np.unique(R.mul[g]).tolist())
    mask = closure_mask(R, seed, mul_closed=False, include_unit=False)
    return IdealSet(R, np.flatnonzero(mask), verified=True)


def ideal_sum(I: IdealSet, J: IdealSet) -> IdealSet:
    R = I.ring
    mask = closure_mask(R, J.members, mul_closed=False, include_unit=False, base=I.mask.copy())
    return IdealSet(R, np.flatnonzero(mask), verified=True)


def ideal_intersection(I: IdealSet, J: IdealSet) -> IdealSet:
    return IdealSet(I.ring, np.flatnonzero(I.mask & J.mask), verified=True)


def ideal_product(I: IdealSet, J: IdealSet) -> IdealSet:
    R = I.ring
    prods = np.unique(R.mul[np.ix_(I.indices, J.indices)])
    return ideal_generated(R, prods)


def high_powers(R: FiniteRing):
    """``x^(2^k)`` for every ``x`` with ``2^k >= order``; zero exactly on nilpotents."""
    p = np.arange(R.order)
    steps = 1
    while steps < R.order:
        p = R.mul[p, p]
        steps *= 2
    return p


def nilradical(R: FiniteRing) -> IdealSet:
    return IdealSet(R, np.flatnonzero(high_powers(R) == R.zero), verified=True)


def idempotents(R: FiniteRing):
    """All idempotents in index order, as ``(index, is_primitive)`` pairs."""
    ar = np.arange(R.order)
    idem = ar[R.mul[ar, ar] == ar]
    out = []
    for e in idem:
        e = int(e)
        if e == R.zero:
            out.append((e, False))
            continue
        below = [f for f in idem if f != R.zero and f != e and R.mul[f, e] == f]
        out.append((e, not below))
    return out


def primitive_idempotents(R: FiniteRing):
    return [e for e, prim in idempotents(R) if prim]


@dataclass
class LocalFactor:
    ring: FiniteRing
    embed: np.ndarray        # factor index -> ambient index
    idempotent: int          # ambient index of the factor's unit
    tag: str                 # "Field", "SPIR" or "FiniteLocal"
    maximal_ideal: IdealSet  # inside the factor ring
    uniformizer: int | None = None     # factor index, SPIR only
    nilpotency_index: int | None = None

    @property
    def residue_size(self):
        return self.ring.order // len(self.maximal_ideal)


@dataclass
class LocalDecomposition:
    ring: FiniteRing
    idempotents: list
    factors: list = field(default_factory=list)

    @property
    def tags(self):
        return [f.tag for f in self.factors]


def local_maximal_ideal(R: FiniteRing) -> IdealSet:
    """The maximal ideal of a local ring (its nonunits); raises if not local."""
    nonunits = np.flatnonzero(~R.units_mask())
    if not is_ideal(R, nonunits):
        raise RingError("ring is not local")
    return IdealSet(R, nonunits, verified=True)


def is_local(R: FiniteRing) -> bool:
    return is_ideal(R, np.flatnonzero(~R.units_mask()))


def _nilpotency_index(R: FiniteRing, M: IdealSet):
    k, P = 1, M
    while not P.is_zero():
        P = ideal_product(P, M)
        k += 1
    return k


def classify_local(R: FiniteRing):
    """``(tag, maximal ideal, uniformizer, nilpotency index)`` for a local ring."""
    M = local_maximal_ideal(R)
    if M.is_zero():
        return "Field", M, None, 1
    k = _nilpotency_index(R, M)
    target = set(M.members)
    for t in M.members:
        if set(np.unique(R.mul[t]).tolist()) == target:
            return "SPIR", M, int(t), k
    return "FiniteLocal", M, None, k


def local_decomposition(R: FiniteRing) -> LocalDecomposition:
    prims = primitive_idempotents(R)
    dec = LocalDecomposition(R, prims)
    for e in prims:
        F, embed = idempotent_factor(R, e)
        tag, M, t, k = classify_local(F)
        dec.factors.append(LocalFactor(F, embed, e, tag, M, t, k))
    return dec


def maximal_ideals(R: FiniteRing):
    """One maximal ideal per primitive idempotent ``e``: ``{x : e*x nilpotent}``."""
    nil = high_powers(R) == R.zero
    out = []
    for e in primitive_idempotents(R):
        out.append(IdealSet(R, np.flatnonzero(nil[R.mul[e]]), verified=True))
    return canonical_sort(out)


def is_maximal_ideal(I: IdealSet) -> bool:
    return any(I == M for M in maximal_ideals(I.ring))


def enumerate_ideals(R: FiniteRing):
    cap = config.limits().ideal_enumeration
    if R.order > cap:
        raise CapExceeded(f"ideal enumeration needs order <= {cap}, got {R.order}")
    principal = [np.unique(R.mul[x]) for x in range(R.order)]
    zero = IdealSet(R, [R.zero], verified=True)
    seen = {zero.members: zero}
    queue = deque([zero])
    while queue:
        I = queue.popleft()
        for x in range(R.order):
            if I.mask[x]:
                continue
            mask = closure_mask(R, principal[x], mul_closed=False, include_unit=False, base=I.mask.copy())
            key = tuple(np.flatnonzero(mask).tolist())
            if key not in seen:
                J = IdealSet(R, key, verified=True)
                seen[key] = J
                queue.append(J)
    return canonical_sort(seen.values())


def is_radical_ideal(R: FiniteRing, I: IdealSet) -> bool:
    # some power of x lies in I  iff  x^(2^k) does, for 2^k >= order
    return bool(np.array_equal(I.mask[high_powers(R)], I.mask))


def is_reduced(R: FiniteRing) -> bool:
    return len(nilradical(R)) == 1


@dataclass
class FmirReport:
    certified: bool
    decomposition: LocalDecomposition

    @property
    def summary(self):
        return [(f.tag, f.ring.order) for f in self.decomposition.factors]


def fmir_decomposition(R: FiniteRing) -> FmirReport:
    # a finite ring is always a finite product of finite local rings
    return FmirReport(True, local_decomposition(R))
