"""Ring extensions R ⊆ S of finite rings and their structural predicates.

An :class:`Extension` keeps the ambient ring ``S`` together with the carrier
indices of the subring ``R``. Ideals of ``S`` are :class:`IdealSet` objects on
``S``; ideals of ``R`` live on the restricted ring ``E.R`` (with ``E.embed``
mapping back into ``S``).

Localizing a finite ring at a maximal ideal is the same as passing to the
idempotent factor that carries it, and every predicate below is computed
that way, by exhaustive scans of the operation tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (ClassificationFailed, EmptySupport, ImproperExtension, NotMinimal,
                     RingError)
from .ring import (FiniteRing, closure_mask, idempotent_factor, is_subring, quotient_by_ideal,
                   restrict, subring_closure)
from .spectrum import (IdealSet, high_powers, ideal_generated, ideal_product,
                       is_radical_ideal, local_decomposition, maximal_ideals, primitive_idempotents)


@dataclass
class ResidualExtension:
    P: IdealSet          # maximal ideal of R
    Q: IdealSet          # maximal ideal of S lying over P
    kP: FiniteRing
    kQ: FiniteRing
    induced: np.ndarray  # kP index -> kQ index
    degree: int          # [kQ : kP]

    @property
    def is_isomorphism(self):
        return self.degree == 1


@dataclass
class SpectralData:
    max_R: list
    max_S: list
    lies_over: list                      # lies_over[j] = index into max_R of Q_j ∩ R
    residuals: list = field(default_factory=list)

    def fiber(self, i):
        """Indices into ``max_S`` of the primes lying over ``max_R[i]``."""
        return [j for j, k in enumerate(self.lies_over) if k == i]

    def fiber_size(self, i):
        return len(self.fiber(i))


@dataclass
class MinimalClass:
    tag: str                 # "Inert", "Decomposed" or "Ramified"
    conductor: IdealSet      # as an ideal of S
    witnesses: tuple = ()    # (M1, M2) for decomposed, (M',) for ramified


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _log_exact(n, base):
    """``d`` with ``base**d == n`` or ``None``."""
    if base < 2:
        return None
    d, x = 0, 1
    while x < n:
        x *= base
        d += 1
    return d if x == n else None


class Extension:
    def __init__(self, S: FiniteRing, sub, *, verify=True):
        sub = np.asarray(sorted(set(int(s) for s in sub)), dtype=np.int64)
        if verify and not is_subring(S, sub):
            raise RingError("the given subset is not a subring of the ambient ring")
        self.S = S
        self.sub = sub
        self.sub.setflags(write=False)

    def __repr__(self):
        return f"<Extension |R|={len(self.sub)} |S|={self.S.order}>"

    # -- basic views ---------------------------------------------------------

    @cached_property
    def _restricted(self):
        return restrict(self.S, self.sub)

    @property
    def R(self) -> FiniteRing:
        return self._restricted[0]

    @property
    def embed(self) -> np.ndarray:
        return self._restricted[1]

    @cached_property
    def sub_mask(self):
        m = np.zeros(self.S.order, dtype=bool)
        m[self.sub] = True
        return m

    @property
    def is_improper(self):
        return len(self.sub) == self.S.order

    def to_R(self, ambient_indices):
        """Positions inside ``R`` of ambient indices that lie in ``R``."""
        return np.searchsorted(self.sub, np.asarray(ambient_indices, dtype=np.int64))

    def r_ideal_in_S(self, I: IdealSet):
        return self.embed[I.indices]

    def upper(self, T) -> "Extension":
        """``T ⊆ S`` for an intermediate ring ``T`` given by ambient indices."""
        return Extension(self.S, T, verify=False)

    def lower(self, T) -> "Extension":
        """``R ⊆ T`` with ``T`` restricted to its own carrier."""
        T = np.asarray(sorted(set(int(t) for t in T)), dtype=np.int64)
        Tring, _ = restrict(self.S, T)
        return Extension(Tring, np.searchsorted(T, self.sub), verify=False)

    # -- conductor and support ----------------------------------------------

    @cached_property
    def conductor(self) -> IdealSet:
        """``(R:S) = {x in S : xS ⊆ R}`` as an ideal of ``S``."""
        ok = self.sub_mask[self.S.mul].all(axis=1)
        return IdealSet(self.S, np.flatnonzero(ok), verified=True)

    @cached_property
    def conductor_in_R(self) -> IdealSet:
        return IdealSet(self.R, self.to_R(self.conductor.indices), verified=True)

    @cached_property
    def max_R(self):
        return maximal_ideals(self.R)

    @cached_property
    def max_S(self):
        return maximal_ideals(self.S)

    @cached_property
    def support(self):
        """Maximal ideals of ``R`` containing the conductor."""
        c = self.conductor_in_R.mask
        return [M for M in self.max_R if M.mask[c].all()]

    def annihilator_support(self):
        """Maximal ideals containing ``ann_R(S/R)``, computed independently of the conductor."""
        S, R = self.S, self.R
        ann = [i for i in range(R.order) if self.sub_mask[S.mul[self.embed[i]]].all()]
        mask = np.zeros(R.order, dtype=bool)
        mask[ann] = True
        return [M for M in self.max_R if M.mask[mask].all()]

    # -- local pieces ---------------------------------------------------------

    @cached_property
    def r_decomposition(self):
        return local_decomposition(self.R)

    def r_idempotent_for(self, M: IdealSet):
        """The primitive idempotent of ``R`` (R index) whose factor carries ``M``."""
        nil = high_powers(self.R) == self.R.zero
        for e in primitive_idempotents(self.R):
            if np.array_equal(nil[self.R.mul[e]], M.mask):
                return e
        raise RingError("not a maximal ideal of R")

    def s_idempotent_for(self, Q: IdealSet):
        nil = high_powers(self.S) == self.S.zero
        for f in primitive_idempotents(self.S):
            if np.array_equal(nil[self.S.mul[f]], Q.mask):
                return f
        raise RingError("not a maximal ideal of S")

    def localize_at(self, e_R) -> "Extension":
        """``eR ⊆ eS`` for an idempotent ``e`` of ``R`` (given as an R index)."""
        e = int(self.embed[e_R])
        Sf, members = idempotent_factor(self.S, e)
        inv = np.full(self.S.order, -1, dtype=np.int64)
        inv[members] = np.arange(members.size)
        sub = np.unique(inv[self.S.mul[e, self.sub]])
        return Extension(Sf, sub, verify=False)

    def localize_at_conductor(self) -> "Extension":
        supp = self.support
        if not supp:
            raise EmptySupport("the extension is trivial, so its support is empty")
        e = self.R.zero
        for M in supp:
            e = int(self.R.add[e, self.r_idempotent_for(M)])
        return self.localize_at(e)

    # -- spectral data --------------------------------------------------------

    @cached_property
    def spectral_data(self) -> SpectralData:
        R, S = self.R, self.S
        lies = []
        for Q in self.max_S:
            P_members = self.to_R(self.sub[Q.mask[self.sub]])
            P = IdealSet(R, P_members, verified=True)
            lies.append(next(i for i, M in enumerate(self.max_R) if M == P))
        data = SpectralData(self.max_R, self.max_S, lies)
        quotients_R = {}
        for j, Q in enumerate(self.max_S):
            i = lies[j]
            P = self.max_R[i]
            if i not in quotients_R:
                quotients_R[i] = quotient_by_ideal(R, P)
            kP, projP = quotients_R[i]
            kQ, projQ = quotient_by_ideal(S, Q)
            induced = np.zeros(kP.order, dtype=np.int64)
            induced[projP] = projQ[self.embed]
            degree = _log_exact(kQ.order, kP.order)
            data.residuals.append(ResidualExtension(P, Q, kP, kQ, induced, degree))
        return data

    def fiber_sizes(self):
        sd = self.spectral_data
        return [sd.fiber_size(i) for i in range(len(sd.max_R))]

    # -- predicates ------------------------------------------------------------

    @cached_property
    def is_seminormal(self):
        S, inR = self.S, self.sub_mask
        b = np.arange(S.order)
        b2 = S.mul[b, b]
        b3 = S.mul[b2, b]
        return bool(np.all(~(inR[b2] & inR[b3]) | inR))

    @cached_property
    def is_tclosed(self):
        S, inR = self.S, self.sub_mask
        b = np.arange(S.order)
        b2 = S.mul[b, b]
        b3 = S.mul[b2, b]
        r = self.sub
        rb = S.mul[b[:, None], r[None, :]]            # r*b
        rb2 = S.mul[b2[:, None], r[None, :]]          # r*b^2
        c1 = S.add[b2[:, None], S.neg[rb]]
        c2 = S.add[b3[:, None], S.neg[rb2]]
        hyp = (inR[c1] & inR[c2]).any(axis=1)
        return bool(np.all(~hyp | inR))

    @cached_property
    def is_infraintegral(self):
        return all(x.is_isomorphism for x in self.spectral_data.residuals)

    @cached_property
    def is_subintegral(self):
        return self.is_infraintegral and all(n == 1 for n in self.fiber_sizes())

    @cached_property
    def is_flat(self):
        """Local freeness, tested factor by factor through cardinalities."""
        S = self.S
        for fac in self.r_decomposition.factors:
            e = int(self.embed[fac.idempotent])
            eS = np.unique(S.mul[e])
            m_amb = self.embed[fac.embed[fac.maximal_ideal.indices]]
            mS = ideal_generated(S, m_amb)
            residue = fac.residue_size
            mu = _log_exact(len(eS) // len(mS), residue)
            if mu is None or len(eS) != fac.ring.order ** mu:
                return False
        return True

    def _unramified_at(self, j):
        """``P S_Q == Q S_Q`` inside the local factor ``fS`` carrying ``Q = max_S[j]``."""
        S = self.S
        sd = self.spectral_data
        Q = self.max_S[j]
        P = self.max_R[sd.lies_over[j]]
        f = self.s_idempotent_for(Q)
        PS_Q = ideal_generated(S, S.mul[f, self.embed[P.indices]])
        QS_Q = np.unique(S.mul[f, Q.indices])
        return PS_Q.members == tuple(QS_Q.tolist())

    @cached_property
    def unramified_by_prime(self):
        return [self._unramified_at(j) for j in range(len(self.max_S))]

    @cached_property
    def unramified_by_intersection(self):
        """Per maximal ideal ``P`` of ``R``: ``PS`` equals the meet of the primes over ``P``."""
        S = self.S
        sd = self.spectral_data
        out = []
        for i, P in enumerate(self.max_R):
            PS = ideal_generated(S, self.embed[P.indices])
            meet = np.ones(S.order, dtype=bool)
            for j in sd.fiber(i):
                meet &= self.max_S[j].mask
            out.append(bool(np.array_equal(PS.mask, meet)))
        return out

    @cached_property
    def is_unramified(self):
        # residue fields are finite, hence perfect: separability always holds
        local = all(self.unramified_by_prime)
        if local != all(self.unramified_by_intersection):
            raise RingError("internal: the two unramified criteria disagree")
        return local

    @cached_property
    def is_etale(self):
        return self.is_flat and self.is_unramified

    def conductor_is_radical(self):
        return is_radical_ideal(self.S, self.conductor)

    # -- minimality --------------------------------------------------------------

    @cached_property
    def is_minimal(self):
        if self.is_improper:
            raise ImproperExtension("R = S has no minimal structure")
        S = self.S
        base = self.sub_mask
        for t in np.flatnonzero(~base):
            if not closure_mask(S, [int(t)], include_unit=False, base=base.copy()).all():
                return False
        return True

    def classify_minimal(self) -> MinimalClass:
        if not self.is_minimal:
            raise NotMinimal("the extension has a proper intermediate ring")
        S = self.S
        M = self.conductor
        M_R = self.conductor_in_R
        if not any(M_R == P for P in self.max_R):
            raise ClassificationFailed("conductor is not a maximal ideal of R")
        kR = self.R.order // len(M_R)
        kS_over_M = S.order // len(M)
        matches = []
        if any(M == Q for Q in self.max_S):
            d = _log_exact(kS_over_M, kR)
            if d is not None and _is_prime(d):
                matches.append(MinimalClass("Inert", M))
        maxS = self.max_S
        for a in range(len(maxS)):
            for b in range(a + 1, len(maxS)):
                M1, M2 = maxS[a], maxS[b]
                if (np.array_equal(M1.mask & M2.mask, M.mask)
                        and S.order // len(M1) == kR and S.order // len(M2) == kR):
                    matches.append(MinimalClass("Decomposed", M, (M1, M2)))
                    break
            if matches and matches[-1].tag == "Decomposed":
                break
        for Mp in maxS:
            sq = ideal_product(Mp, Mp)
            if (M.mask[sq.indices].all() and Mp.mask[M.indices].all() and len(Mp) > len(M)
                    and kS_over_M == kR ** 2 and S.order // len(Mp) == kR):
                matches.append(MinimalClass("Ramified", M, (Mp,)))
                break
        if len(matches) != 1:
            raise ClassificationFailed(f"{len(matches)} minimal-extension cases matched")
        return matches[0]


def make_extension(S: FiniteRing, gens=()) -> Extension:
    return Extension(S, subring_closure(S, gens), verify=False)


def extension_from_subring(S: FiniteRing, members) -> Extension:
    return Extension(S, members)
