"""Quotients of polynomial rings over a finite chain ring.

The ideal is approximated degree by degree: for a degree bound ``D`` we take
the base-module span of ``m * g`` (``g`` a relation, ``m`` a monomial, total
degree at most ``D``) and put it in strong echelon form over the chain ring.
Once every monomial of some degree ``d0`` is a unit pivot, the monomials
below ``d0`` span the quotient; the candidate ring is accepted only after the
relations vanish in it, monomial products agree with their normal forms, and
the ring axioms hold. Otherwise ``D`` grows up to the configured degree cap.
"""
from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np

from . import config
from .errors import BadCoefficientRing, RingError, RingNotFinite, UndefinedName
from .expr import Node, evaluate, parse_expression
from .ring import FiniteRing, check_cap, is_ideal, mul_associativity_violation, ring_axiom_violation

# above this order the table-level axiom check is replaced by the module-level one
FULL_AXIOM_CHECK_ORDER = 1024


class ChainRing:
    """Valuation and division helpers for a finite local ring with principal maximal ideal."""

    def __init__(self, base: FiniteRing):
        self.base = base
        n = base.order
        units = base.units_mask()
        nonunits = np.flatnonzero(~units)
        if not is_ideal(base, nonunits):
            raise BadCoefficientRing(f"{base.provenance} is not local")
        if nonunits.size == 1:
            pi = base.zero
        else:
            target = set(nonunits.tolist())
            pi = next((int(t) for t in nonunits if set(np.unique(base.mul[t]).tolist()) == target), None)
            if pi is None:
                raise BadCoefficientRing(f"{base.provenance} is local but its maximal ideal is not principal")
        self.pi = pi
        powers = [base.one]
        while powers[-1] != base.zero:
            powers.append(int(base.mul[powers[-1], pi]))
        self.k = len(powers) - 1  # pi^k == 0
        self.pi_pow = powers
        self.ideals = [np.unique(base.mul[p]) for p in powers]
        # val(a) = largest v with a in pi^v R
        val = np.zeros(n, dtype=np.int64)
        for v in range(self.k + 1):
            val[self.ideals[v]] = v
        self.val = val
        self.unit_idx = np.flatnonzero(units)
        inv = np.full(n, -1, dtype=np.int64)
        r, c = np.nonzero(base.mul[np.ix_(self.unit_idx, self.unit_idx)] == base.one)
        inv[self.unit_idx[r]] = self.unit_idx[c]
        self.inv = inv
        unit_part = np.full(n, -1, dtype=np.int64)
        for v in range(self.k):
            prods = base.mul[self.unit_idx, powers[v]]
            for u, a in zip(self.unit_idx[::-1], prods[::-1]):
                unit_part[a] = u
        self.unit_part = unit_part
        self.rep = []
        self.quo = []
        for v in range(self.k + 1):
            rep = base.add[:, self.ideals[v]].min(axis=1)
            diff = base.add[np.arange(n), base.neg[rep]]
            quo = np.zeros(n, dtype=np.int64)
            for a in range(n):
                d = int(diff[a])
                if d != base.zero:
                    quo[a] = self.divide(d, powers[v])
            self.rep.append(rep)
            self.quo.append(quo)
        self.reps = [np.unique(r) for r in self.rep]

    def divide(self, b, a):
        """Some ``c`` with ``a*c == b``; requires ``val(a) <= val(b)``."""
        base = self.base
        if b == base.zero:
            return base.zero
        vb, va = int(self.val[b]), int(self.val[a])
        if va > vb:
            raise RingError("division not possible")
        u = int(base.mul[self.unit_part[b], self.inv[self.unit_part[a]]])
        return int(base.mul[u, self.pi_pow[vb - va]])


class Echelon:
    """Strong echelon form of a submodule of a free module over a chain ring.

    Vectors are dicts ``column -> coefficient`` with smaller columns leading.
    Each pivot row is normalized so its pivot is exactly ``pi^v``; inserting a
    row also inserts its annihilator multiple, which keeps membership testable
    by plain reduction.
    """

    def __init__(self, cr: ChainRing):
        self.cr = cr
        self.rows = {}

    def _axpy(self, v, f, row):
        base = self.cr.base
        out = dict(v)
        for col, x in row.items():
            t = int(base.mul[f, x])
            if t == base.zero:
                continue
            y = int(base.sub(out.get(col, base.zero), t))
            if y == base.zero:
                out.pop(col, None)
            else:
                out[col] = y
        return out

    def _scale(self, v, f):
        base = self.cr.base
        out = {}
        for col, x in v.items():
            y = int(base.mul[f, x])
            if y != base.zero:
                out[col] = y
        return out

    def insert(self, vec):
        cr = self.cr
        queue = [vec]
        while queue:
            v = {c: x for c, x in queue.pop().items() if x != cr.base.zero}
            while v:
                col = min(v)
                c = v[col]
                vc = int(cr.val[c])
                held = self.rows.get(col)
                if held is not None and vc >= held[0]:
                    v = self._axpy(v, cr.divide(c, cr.pi_pow[held[0]]), held[1])
                    continue
                row = self._scale(v, int(cr.inv[cr.unit_part[c]]))
                self.rows[col] = (vc, row)
                if held is not None:
                    queue.append(held[1])
                if vc > 0:
                    queue.append(self._scale(row, cr.pi_pow[cr.k - vc]))
                break

    def is_howell(self):
        """Every annihilator multiple of a pivot row reduces to zero."""
        cr = self.cr
        for v, row in self.rows.values():
            if v > 0 and self.reduce(self._scale(row, cr.pi_pow[cr.k - v])):
                return False
        return True

    def reduce(self, vec):
        """Canonical representative of ``vec`` modulo the span."""
        cr = self.cr
        v = {c: x for c, x in vec.items() if x != cr.base.zero}
        done = {}
        while v:
            col = min(v)
            held = self.rows.get(col)
            if held is None:
                done[col] = v.pop(col)
                continue
            pv, row = held
            c = v[col]
            q = int(cr.quo[pv][c])
            if q != cr.base.zero:
                v = self._axpy(v, q, row)
            r = v.pop(col, cr.base.zero)
            if r != cr.base.zero:
                done[col] = r
        return done


# -- polynomials ------------------------------------------------------------

class _PolyContext:
    def __init__(self, base: FiniteRing, variables):
        self.base = base
        self.vars = list(variables)
        self.nv = len(self.vars)
        self.consts = dict(base.gen_names)

    def _clean(self, p):
        return {m: c for m, c in p.items() if c != self.base.zero}

    def const(self, n, node=None):
        return self._clean({(0,) * self.nv: self.base.from_int(n)})

    def name(self, s, node=None):
        if s in self.vars:
            e = [0] * self.nv
            e[self.vars.index(s)] = 1
            return {tuple(e): self.base.one}
        if s in self.consts:
            return self._clean({(0,) * self.nv: self.consts[s]})
        raise UndefinedName(f"unknown name {s!r} in polynomial", )

    def tuple(self, items, node=None):
        raise RingError("tuples are not polynomials")

    def add(self, a, b):
        out = dict(a)
        for m, c in b.items():
            out[m] = int(self.base.add[out.get(m, self.base.zero), c])
        return self._clean(out)

    def neg(self, a):
        return {m: int(self.base.neg[c]) for m, c in a.items()}

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = int(self.base.add[out.get(m, self.base.zero), self.base.mul[c1, c2]])
        return self._clean(out)

    def pow(self, a, k):
        out = self.const(1)
        for _ in range(k):
            out = self.mul(out, a)
        return out


def to_polynomial(base, variables, rel):
    if isinstance(rel, dict):
        return {tuple(m): int(c) for m, c in rel.items() if int(c) != base.zero}
    node = rel if isinstance(rel, Node) else parse_expression(str(rel))
    return evaluate(node, _PolyContext(base, variables))


def _monomials(nv, max_deg):
    out = []
    for d in range(max_deg + 1):
        for combo in combinations_with_replacement(range(nv), d):
            e = [0] * nv
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _mono_str(variables, m):
    parts = []
    for v, e in zip(variables, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def construct_polyquot(base: FiniteRing, variables, relations) -> FiniteRing:
    """``base[variables]/(relations)`` as a :class:`FiniteRing`.

    ``relations`` may be strings such as ``"t^2*y^2"``, parsed expression nodes,
    or dicts mapping exponent tuples to base indices.
    """
    cr = ChainRing(base)
    variables = list(variables)
    if len(set(variables)) != len(variables):
        raise RingError("duplicate variable names")
    polys = [to_polynomial(base, variables, r) for r in relations]
    polys = [p for p in polys if p]
    cap_deg = config.limits().polyquot_degree
    for D in range(1, cap_deg + 1):
        ring = _attempt(base, cr, variables, polys, D)
        if ring is not None:
            rel_text = ", ".join(str(r) if not isinstance(r, dict) else "<poly>" for r in relations)
            ring.provenance = f"polyquot({base.provenance}, [{', '.join(variables)}], ({rel_text}))"
            return ring
    raise RingNotFinite(f"monomial basis did not stabilize below degree {cap_deg}")


def _attempt(base, cr, variables, polys, D):
    nv = len(variables)
    monos = _monomials(nv, D)
    # leading columns first: higher degree, then larger exponent tuple
    order = sorted(monos, key=lambda m: (-sum(m), tuple(-x for x in m)))
    pos = {m: i for i, m in enumerate(order)}
    ech = Echelon(cr)
    for g in polys:
        dg = max(sum(m) for m in g)
        if dg > D:
            continue
        for m in monos:
            if sum(m) + dg > D:
                continue
            vec = {}
            for gm, c in g.items():
                vec[pos[tuple(a + b for a, b in zip(m, gm))]] = c
            ech.insert(vec)
    unit_cols = {col for col, (v, _) in ech.rows.items() if v == 0}
    d0 = None
    for d in range(D + 1):
        if all(pos[m] in unit_cols for m in monos if sum(m) == d):
            d0 = d
            break
    if d0 is None or (d0 > 0 and 2 * (d0 - 1) > D):
        return None
    if d0 == 0:
        raise RingError("the relations generate the unit ideal (zero ring)")
    if not ech.is_howell():
        return None
    # standard columns in increasing monomial order, constant first
    std = [m for m in reversed(order) if sum(m) < d0 and pos[m] not in unit_cols]
    std_cols = [pos[m] for m in std]
    moduli = [ech.rows[c][0] if c in ech.rows else cr.k for c in std_cols]
    digit_vals = [cr.reps[v] for v in moduli]
    sizes = [len(r) for r in digit_vals]
    total = int(np.prod(sizes, dtype=np.int64))
    check_cap(total, "quotient ring")
    weights = [int(np.prod(sizes[:j], dtype=np.int64)) for j in range(len(sizes))]
    digit_of = []
    for r in digit_vals:
        lookup = np.full(base.order, -1, dtype=np.int64)
        lookup[r] = np.arange(len(r))
        digit_of.append(lookup)
    col_to_j = {c: j for j, c in enumerate(std_cols)}
    nstd = len(std)

    def std_coeffs(vec):
        red = ech.reduce(vec)
        out = [base.zero] * nstd
        for col, c in red.items():
            j = col_to_j.get(col)
            if j is None:
                raise _Retry()
            out[j] = c
        return out

    # pivot rows on standard columns, with tails rewritten over standard columns
    tails = {}
    try:
        for j, col in enumerate(std_cols):
            if col in ech.rows:
                pv, row = ech.rows[col]
                tail = std_coeffs({c: x for c, x in row.items() if c != col})
                tails[j] = (pv, [(k, t) for k, t in enumerate(tail) if t != base.zero])
    except _Retry:
        return None
    # leading standard column first
    sweep = sorted(range(nstd), key=lambda j: std_cols[j])
    lookups = np.stack(digit_of)
    rep_tab = np.stack(cr.rep)
    quo_tab = np.stack(cr.quo)
    w_arr = np.asarray(weights, dtype=np.int64)

    def to_index(C):
        """Reduce coefficient arrays ``C[..., j]`` in place and encode them."""
        for j in sweep:
            if j not in tails:
                continue
            pv, tail = tails[j]
            c = C[..., j]
            q = quo_tab[pv][c]
            C[..., j] = rep_tab[pv][c]
            for k, t in tail:
                C[..., k] = base.sub(C[..., k], base.mul[q, t])
        d = np.stack([lookups[j][C[..., j]] for j in range(nstd)], axis=-1)
        return d @ w_arr

    digits = np.array([[(i // weights[j]) % sizes[j] for j in range(nstd)] for i in range(total)],
                      dtype=np.int64).reshape(total, nstd)
    coef = np.stack([np.asarray(digit_vals[j])[digits[:, j]] for j in range(nstd)], axis=1)
    vecs = [{std_cols[j]: int(coef[i, j]) for j in range(nstd) if coef[i, j] != base.zero}
            for i in range(total)]
    add = np.empty((total, total), dtype=np.int32)
    step = max(1, (1 << 22) // max(1, total * nstd))
    for lo in range(0, total, step):
        C = base.add[coef[lo:lo + step, None, :], coef[None, :, :]].astype(np.int64)
        add[lo:lo + step] = to_index(C)
    # scal[c, z] = c * z
    scal = to_index(base.mul[np.arange(base.order)[:, None, None], coef[None, :, :]].astype(np.int64))
    try:
        basis_prod = np.array([[to_index(np.array(std_coeffs(shift_mono(std[a], std[b], order, pos, D, base.one))))
                                for b in range(nstd)] for a in range(nstd)], dtype=np.int64).reshape(nstd, nstd)
        one = int(to_index(np.array(std_coeffs({pos[(0,) * nv]: base.one}))))
        gens = [(v, int(to_index(np.array(std_coeffs({pos[tuple(1 if i == k else 0 for i in range(nv))]: base.one})))))
                for k, v in enumerate(variables)]
        gens += [(n, int(scal[i, one])) for n, i in base.gen_names if n not in variables]
    except _Retry:
        return None
    zero = 0
    # xb[x, b] = x * (basis monomial b)
    xb = np.zeros((total, nstd), dtype=np.int32)
    for a in range(nstd):
        xb = add[xb, scal[coef[:, a][:, None], basis_prod[a][None, :]]]
    mul = np.zeros((total, total), dtype=np.int32)
    for b in range(nstd):
        mul = add[mul, scal[coef[None, :, b], xb[:, b][:, None]]]

    def idx_of(vec):
        return int(to_index(np.array(std_coeffs(vec))))

    def labeler(i, vecs=vecs):
        terms = []
        for col, c in sorted(vecs[i].items()):
            mono = _mono_str(variables, order[col])
            cl = base.label(c)
            if not mono:
                terms.append(cl)
            elif c == base.one:
                terms.append(mono)
            else:
                terms.append(f"{cl}*{mono}" if "+" not in cl else f"({cl})*{mono}")
        return " + ".join(terms) or "0"

    if one == zero:
        raise RingError("the relations generate the unit ideal (zero ring)")
    ring = FiniteRing(add, mul, zero, one, gen_names=gens, labeler=labeler)
    if total <= FULL_AXIOM_CHECK_ORDER:
        if ring_axiom_violation(ring) is not None:
            return None
    else:
        # addition and bilinearity come from canonical reduction; associativity
        # only needs the module generators c * (basis monomial)
        module_gens = np.unique(scal[:, [int(weights[j]) * int(digit_of[j][base.one]) for j in range(nstd)]])
        if mul_associativity_violation(ring, module_gens) is not None:
            return None
    # the evaluation map must agree with normal forms on every monomial up to D
    var_idx = [i for _, i in gens[:nv]]
    values = {(0,) * nv: one}
    try:
        for m in sorted(monos, key=sum):
            if sum(m) == 0:
                continue
            k = next(i for i, e in enumerate(m) if e)
            prev = tuple(e - (1 if i == k else 0) for i, e in enumerate(m))
            values[m] = int(ring.mul[values[prev], var_idx[k]])
            if values[m] != idx_of({pos[m]: base.one}):
                return None
    except _Retry:
        return None
    for g in polys:
        acc = zero
        for m, c in g.items():
            if m not in values:
                return None
            acc = int(ring.add[acc, ring.mul[values[m], idx_of({pos[(0,) * nv]: c})]])
        if acc != zero:
            return None
    return ring


class _Retry(Exception):
    pass


def shift_mono(a, b, order, pos, D, one):
    m = tuple(x + y for x, y in zip(a, b))
    if sum(m) > D:
        raise _Retry()
    return {pos[m]: one}
