"""Finite commutative rings stored as dense operation tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import config
from .errors import CapExceeded, NotAnIdeal, NotPrime, RingError, RingMismatch

IDX_DTYPE = np.int32


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=IDX_DTYPE)
    a.setflags(write=False)
    return a


def check_cap(order, what="carrier"):
    cap = config.limits().carrier
    if order > cap:
        raise CapExceeded(f"{what} of size {order} exceeds the carrier cap {cap}")


class FiniteRing:
    """A finite commutative unital ring on the carrier ``0..order-1``.

    ``add`` and ``mul`` are ``order x order`` index tables. ``factors`` is set
    for rings built by :func:`construct_product` so that tuple notation can be
    resolved; ``gen_names`` maps declared generator names to indices.
    """

    def __init__(self, add, mul, zero, one, *, gen_names=(), provenance="",
                 labeler: Callable[[int], str] | None = None, factors=None):
        add = _frozen(add)
        mul = _frozen(mul)
        n = add.shape[0]
        if add.shape != (n, n) or mul.shape != (n, n):
            raise RingError("operation tables must be square and of equal size")
        if zero == one:
            raise RingError("the zero ring is not allowed (zero == one)")
        self.order = n
        self.add = add
        self.mul = mul
        self.zero = int(zero)
        self.one = int(one)
        self.gen_names = tuple((str(name), int(i)) for name, i in gen_names)
        self.provenance = provenance
        self.factors = tuple(factors) if factors is not None else None
        self._labeler = labeler
        self._neg = None
        self._char = None

    def __repr__(self):
        return f"<FiniteRing order={self.order} {self.provenance}>"

    @property
    def neg(self):
        if self._neg is None:
            self._neg = _frozen(np.argmax(self.add == self.zero, axis=1))
        return self._neg

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def element(self, idx) -> RingElement:
        idx = int(idx)
        if not 0 <= idx < self.order:
            raise RingError(f"index {idx} outside carrier of order {self.order}")
        return RingElement(self, idx)

    def elements(self):
        return [RingElement(self, i) for i in range(self.order)]

    @property
    def characteristic(self):
        if self._char is None:
            k, x = 1, self.one
            while x != self.zero:
                x = int(self.add[x, self.one])
                k += 1
            self._char = k
        return self._char

    def from_int(self, n):
        n %= self.characteristic
        x = self.zero
        for _ in range(n):
            x = int(self.add[x, self.one])
        return x

    def power(self, a, k):
        result, base = self.one, int(a)
        while k:
            if k & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            k >>= 1
        return result

    def gen(self, name):
        for n, i in self.gen_names:
            if n == name:
                return i
        raise KeyError(name)

    def label(self, idx):
        if self._labeler is not None:
            return self._labeler(int(idx))
        return str(int(idx))

    def same_tables(self, other):
        return (self.order == other.order and self.zero == other.zero and self.one == other.one
                and np.array_equal(self.add, other.add) and np.array_equal(self.mul, other.mul))

    def units_mask(self):
        return (self.mul == self.one).any(axis=1)


@dataclass(frozen=True, eq=False)
class RingElement:
    ring: FiniteRing
    idx: int

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise RingMismatch("arithmetic between elements of different rings")
            return other.idx
        if isinstance(other, (int, np.integer)):
            return self.ring.from_int(int(other))
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, RingElement) and other.ring is self.ring and other.idx == self.idx

    def __hash__(self):
        return hash((id(self.ring), self.idx))

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return RingElement(self.ring, int(self.ring.add[self.idx, b]))

    __radd__ = __add__

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return RingElement(self.ring, int(self.ring.mul[self.idx, b]))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, int(self.ring.neg[self.idx]))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return RingElement(self.ring, int(self.ring.sub(self.idx, b)))

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, k):
        return RingElement(self.ring, self.ring.power(self.idx, int(k)))

    def __repr__(self):
        return f"RingElement({self.ring.label(self.idx)})"


def elem_arith(a: RingElement, b: RingElement | None, op: str) -> RingElement:
    if op == "neg":
        return -a
    if b is None:
        raise RingError(f"operation {op!r} needs two operands")
    if a.ring is not b.ring:
        raise RingMismatch("operands belong to different rings")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "sub":
        return a - b
    raise RingError(f"unknown operation {op!r}")


def _as_indices(ring, elems):
    out = []
    for e in elems:
        if isinstance(e, RingElement):
            if e.ring is not ring:
                raise RingMismatch("generator belongs to a different ring")
            out.append(e.idx)
        else:
            i = int(e)
            if not 0 <= i < ring.order:
                raise RingError(f"index {i} outside carrier of order {ring.order}")
            out.append(i)
    return out


# -- constructors -----------------------------------------------------------

def construct_zmod(n: int) -> FiniteRing:
    if n < 2:
        raise RingError(f"Z/{n}Z is the zero ring or undefined; need n >= 2")
    check_cap(n)
    a = np.arange(n)
    return FiniteRing((a[:, None] + a[None, :]) % n, (a[:, None] * a[None, :]) % n, 0, 1,
                      provenance=f"zmod({n})")


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_divmod_monic(num, den, p):
    """Remainder of ``num`` by monic ``den``; lists hold coefficients lowest degree first."""
    num = list(num)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    return [c % p for c in num[:dd]] + [0] * max(0, dd - len(num))


def _monic_polys(p, d):
    """Monic degree-``d`` polynomials over F_p in lexicographic order of
    (c_{d-1}, ..., c_0)."""
    from itertools import product
    for coeffs in product(range(p), repeat=d):
        yield list(reversed(coeffs)) + [1]


def least_irreducible(p, d):
    """Lexicographically least monic irreducible of degree ``d`` over F_p."""
    if d == 1:
        return [0, 1]
    small = [f for k in range(1, d // 2 + 1) for f in _monic_polys(p, k)]
    for f in _monic_polys(p, d):
        if all(any(_poly_divmod_monic(f, g, p)) for g in small):
            return f
    raise RingError(f"no irreducible polynomial of degree {d} over F_{p}")


def construct_gf(p: int, d: int = 1) -> FiniteRing:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if d < 1:
        raise RingError("degree must be at least 1")
    q = p ** d
    check_cap(q)
    if d == 1:
        ring = construct_zmod(p)
        ring.provenance = f"gf({p},1)"
        return ring
    f = least_irreducible(p, d)
    digits = np.array([[(i // p ** j) % p for j in range(d)] for i in range(q)])
    weights = p ** np.arange(d)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights

    def mulpoly(a, b):
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return _poly_divmod_monic(prod, f, p)

    def to_idx(c):
        return int(sum(int(c[j]) * p ** j for j in range(d)))

    # discrete log tables from a primitive element
    exp = None
    for g in range(2, q):
        gpoly = list(digits[g])
        seq = [1]
        cur = [1] + [0] * (d - 1)
        for _ in range(q - 2):
            cur = mulpoly(cur, gpoly)
            seq.append(to_idx(cur))
        if len(set(seq)) == q - 1:
            exp = np.array(seq)
            break
    log = np.zeros(q, dtype=np.int64)
    log[exp] = np.arange(q - 1)
    a = np.arange(q)
    mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
    mul[(a[:, None] == 0) | (a[None, :] == 0)] = 0

    def labeler(i):
        terms = []
        for j in reversed(range(d)):
            c = (i // p ** j) % p
            if c:
                mono = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
                terms.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return "+".join(terms) or "0"

    return FiniteRing(add, mul, 0, 1, gen_names=[("x", p)], provenance=f"gf({p},{d})",
                      labeler=labeler)


def construct_product(factors: Sequence[FiniteRing]) -> FiniteRing:
    """Direct product; index = mixed-radix encoding with the first factor most significant."""
    factors = list(factors)
    if not factors:
        raise RingError("a product needs at least one factor")
    if len(factors) == 1:
        return factors[0]
    order = 1
    for f in factors:
        order *= f.order
    check_cap(order)
    sizes = [f.order for f in factors]
    weights = [int(np.prod(sizes[k + 1:], dtype=np.int64)) for k in range(len(sizes))]
    idx = np.arange(order)
    comps = [(idx // w) % s for w, s in zip(weights, sizes)]
    add = np.zeros((order, order), dtype=np.int64)
    mul = np.zeros((order, order), dtype=np.int64)
    for f, c, w in zip(factors, comps, weights):
        add += f.add[c[:, None], c[None, :]].astype(np.int64) * w
        mul += f.mul[c[:, None], c[None, :]].astype(np.int64) * w
    zero = sum(f.zero * w for f, w in zip(factors, weights))
    one = sum(f.one * w for f, w in zip(factors, weights))

    def labeler(i):
        return "(" + ",".join(f.label((i // w) % f.order) for f, w in zip(factors, weights)) + ")"

    ring = FiniteRing(add, mul, zero, one, provenance="product(" + ", ".join(f.provenance for f in factors) + ")",
                      labeler=labeler, factors=factors)
    ring.factor_weights = tuple(weights)
    return ring


def product_index(ring: FiniteRing, comps: Sequence[int]) -> int:
    if ring.factors is None or len(comps) != len(ring.factors):
        raise RingError("tuple does not match the product structure")
    return int(sum(int(c) * w for c, w in zip(comps, ring.factor_weights)))


def product_components(ring: FiniteRing, idx: int) -> tuple:
    return tuple((int(idx) // w) % f.order for f, w in zip(ring.factors, ring.factor_weights))


def projection(ring: FiniteRing, k: int) -> np.ndarray:
    """Index map onto factor ``k`` of a product ring."""
    w = ring.factor_weights[k]
    return (np.arange(ring.order) // w) % ring.factors[k].order


# -- subsets ----------------------------------------------------------------

def closure_mask(ring: FiniteRing, seed, *, mul_closed=True, include_unit=True, base=None):
    """Boolean mask of the smallest set containing ``seed`` (plus 0 and 1 when
    ``include_unit``) closed under addition, and under multiplication when
    ``mul_closed``. ``base`` is an optional mask already known to be closed."""
    mask = np.zeros(ring.order, dtype=bool) if base is None else base.copy()
    start = list(seed)
    if include_unit:
        start += [ring.zero, ring.one]
    start = np.unique(np.asarray(start, dtype=np.int64))
    frontier = start[~mask[start]] if start.size else start
    mask[frontier] = True
    while frontier.size:
        cur = np.flatnonzero(mask)
        cands = [ring.add[np.ix_(frontier, cur)].ravel()]
        if mul_closed:
            cands.append(ring.mul[np.ix_(frontier, cur)].ravel())
        cand = np.concatenate(cands)
        new = np.unique(cand[~mask[cand]])
        mask[new] = True
        frontier = new
    return mask


def subring_closure(S: FiniteRing, gens=()) -> np.ndarray:
    """Sorted indices of the subring of ``S`` generated by ``gens``."""
    idx = _as_indices(S, gens)
    return np.flatnonzero(closure_mask(S, idx))


def is_subring(S: FiniteRing, members) -> bool:
    members = np.asarray(sorted(set(int(m) for m in members)), dtype=np.int64)
    mask = np.zeros(S.order, dtype=bool)
    mask[members] = True
    if not (mask[S.zero] and mask[S.one]):
        return False
    sub = np.ix_(members, members)
    return bool(mask[S.add[sub]].all() and mask[S.mul[sub]].all())


def restrict(S: FiniteRing, members, provenance=None):
    """The subring on ``members`` as its own :class:`FiniteRing`.

    Returns ``(ring, embed)`` where ``embed[i]`` is the ambient index of element ``i``.
    """
    members = np.asarray(sorted(set(int(m) for m in members)), dtype=np.int64)
    inv = np.full(S.order, -1, dtype=np.int64)
    inv[members] = np.arange(members.size)
    sub = np.ix_(members, members)
    add = inv[S.add[sub]]
    mul = inv[S.mul[sub]]
    if (add < 0).any() or (mul < 0).any() or inv[S.one] < 0 or inv[S.zero] < 0:
        raise RingError("subset is not a subring")
    ring = FiniteRing(add, mul, inv[S.zero], inv[S.one],
                      gen_names=[(n, inv[i]) for n, i in S.gen_names if inv[i] >= 0],
                      provenance=provenance or f"subring[{members.size}] of {S.provenance}",
                      labeler=lambda i, S=S, m=members: S.label(m[i]))
    return ring, _frozen(members)


def idempotent_factor(S: FiniteRing, e: int):
    """The ring ``eS`` with unit ``e``; returns ``(ring, embed)``."""
    members = np.unique(S.mul[e])
    inv = np.full(S.order, -1, dtype=np.int64)
    inv[members] = np.arange(members.size)
    sub = np.ix_(members, members)
    ring = FiniteRing(inv[S.add[sub]], inv[S.mul[sub]], inv[S.zero], inv[e],
                      gen_names=[(n, inv[S.mul[e, i]]) for n, i in S.gen_names],
                      provenance=f"factor[{S.label(e)}] of {S.provenance}",
                      labeler=lambda i, S=S, m=members: S.label(m[i]))
    return ring, _frozen(members)


def is_ideal(R: FiniteRing, members) -> bool:
    members = np.asarray(sorted(set(int(m) for m in members)), dtype=np.int64)
    if members.size == 0:
        return False
    mask = np.zeros(R.order, dtype=bool)
    mask[members] = True
    return bool(mask[R.zero] and mask[R.add[np.ix_(members, members)]].all()
                and mask[R.mul[members]].all())


def quotient_by_ideal(R: FiniteRing, ideal):
    """``R/I`` with least-index coset representatives; returns ``(ring, projection)``."""
    members = getattr(ideal, "members", ideal)
    members = np.asarray(sorted(set(int(m) for m in members)), dtype=np.int64)
    if not is_ideal(R, members):
        raise NotAnIdeal("the given subset is not an ideal")
    rep = R.add[:, members].min(axis=1)
    reps = np.unique(rep)
    proj = np.searchsorted(reps, rep)
    sub = np.ix_(reps, reps)
    q = FiniteRing(proj[R.add[sub]], proj[R.mul[sub]], proj[R.zero], proj[R.one],
                   gen_names=[(n, proj[i]) for n, i in R.gen_names],
                   provenance=f"{R.provenance}/I[{members.size}]",
                   labeler=lambda i, R=R, reps=reps: R.label(reps[i]) if members.size == 1 else f"[{R.label(reps[i])}]")
    return q, _frozen(proj)


# -- axioms -----------------------------------------------------------------

def additive_generators(R: FiniteRing):
    """Greedy generating set of the additive group (least indices first)."""
    mask = np.zeros(R.order, dtype=bool)
    mask[R.zero] = True
    gens = []
    for x in range(R.order):
        if mask[x]:
            continue
        gens.append(x)
        mult = [R.zero]
        y = x
        while y != R.zero:
            mult.append(y)
            y = int(R.add[y, x])
        cur = np.flatnonzero(mask)
        mask[np.unique(R.add[np.ix_(cur, np.asarray(mult))])] = True
        if mask.all():
            break
    return gens


def ring_axiom_violation(R: FiniteRing):
    """Return ``None`` if ``R`` satisfies the commutative-ring axioms, else a
    ``(axiom, witness)`` pair.

    Exhaustive: associativity and distributivity are checked against every
    element in one slot and an additive generating set in the other, which
    implies the full identities by induction on sums of generators.
    """
    n = R.order
    A, M = R.add, R.mul
    ar = np.arange(n)
    if R.zero == R.one:
        return ("nonzero", (R.zero,))
    for name, T in (("add-commutative", A), ("mul-commutative", M)):
        bad = np.argwhere(T != T.T)
        if bad.size:
            return (name, tuple(int(v) for v in bad[0]))
    if not np.array_equal(A[R.zero], ar):
        return ("additive-identity", (int(np.flatnonzero(A[R.zero] != ar)[0]),))
    if not np.array_equal(M[R.one], ar):
        return ("multiplicative-identity", (int(np.flatnonzero(M[R.one] != ar)[0]),))
    has_inv = (A == R.zero).any(axis=1)
    if not has_inv.all():
        return ("additive-inverse", (int(np.flatnonzero(~has_inv)[0]),))
    gens = additive_generators(R)
    flat_add = A.ravel()
    for g in gens:
        col = A[:, g]
        ok = np.array_equal(col[A], A[:, col])        # (a+b)+g == a+(b+g)
        if not ok:
            a, b = np.argwhere(col[A] != A[:, col])[0]
            return ("add-associative", (int(a), int(b), g))
        mg = M[:, g]
        lhs = M[:, col]                                 # a(b+g)
        rhs = flat_add[M.astype(np.int64) * n + mg[:, None]]  # ab+ag
        if not np.array_equal(lhs, rhs):
            a, b = np.argwhere(lhs != rhs)[0]
            return ("distributive", (int(a), int(b), g))
    return mul_associativity_violation(R, gens)


def mul_associativity_violation(R: FiniteRing, gens):
    """Check ``(ab)c == a(bc)`` for ``a, b, c`` in ``gens``; with bilinear
    multiplication this covers the whole ring when ``gens`` generate it additively."""
    M = R.mul
    G = np.asarray(gens, dtype=np.int64)
    if G.size:
        ab = M[np.ix_(G, G)]
        lhs = M[ab[:, :, None], G[None, None, :]]
        rhs = M[G[:, None, None], ab[None, :, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            i, j, k = bad[0]
            return ("mul-associative", (int(G[i]), int(G[j]), int(G[k])))
    return None


def ring_axiom_violation_random(R: FiniteRing, samples=10_000, seed=0):
    """Randomized triple check, for use as an independent cross-check."""
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, R.order, size=(3, samples))
    A, M = R.add, R.mul
    checks = {
        "add-associative": (A[A[a, b], c], A[a, A[b, c]]),
        "mul-associative": (M[M[a, b], c], M[a, M[b, c]]),
        "distributive": (M[a, A[b, c]], A[M[a, b], M[a, c]]),
        "add-commutative": (A[a, b], A[b, a]),
        "mul-commutative": (M[a, b], M[b, a]),
    }
    for name, (lhs, rhs) in checks.items():
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            k = bad[0]
            return (name, (int(a[k]), int(b[k]), int(c[k])))
    return None
