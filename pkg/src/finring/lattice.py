"""The lattice [R,S] of intermediate rings: enumeration, Hasse diagram, chains."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from . import config
from .errors import LatticeCapExceeded, NotLocal, RingError
from .extension import Extension
from .ring import closure_mask, idempotent_factor, restrict
from .spectrum import is_local


@dataclass
class SubalgebraLattice:
    ext: Extension
    nodes: list            # sorted index arrays, canonical order
    masks: np.ndarray      # (len(nodes), |S|) bool

    def __len__(self):
        return len(self.nodes)

    @property
    def bottom(self):
        return 0

    @property
    def top(self):
        return len(self.nodes) - 1

    def sizes(self):
        return [len(n) for n in self.nodes]

    @cached_property
    def leq(self):
        """``leq[i, j]`` iff node i ⊆ node j."""
        B = self.masks.astype(np.int32)
        outside = (~self.masks).astype(np.int32)
        return (B @ outside.T) == 0

    @cached_property
    def covers(self):
        lt = self.leq & ~np.eye(len(self.nodes), dtype=bool)
        between = (lt.astype(np.int32) @ lt.astype(np.int32)) > 0
        return lt & ~between

    @cached_property
    def hasse_edges(self):
        return [(int(i), int(j)) for i, j in np.argwhere(self.covers)]

    def index_of(self, members):
        key = tuple(sorted(int(m) for m in members))
        for i, n in enumerate(self.nodes):
            if len(n) == len(key) and tuple(n.tolist()) == key:
                return i
        raise KeyError("not a node of the lattice")

    def step(self, i, j) -> Extension:
        """The extension node_i ⊆ node_j with node_j as ambient ring."""
        cache = self.__dict__.setdefault("_steps", {})
        if (i, j) not in cache:
            T = self.nodes[j]
            Tring, _ = restrict(self.ext.S, T)
            cache[(i, j)] = Extension(Tring, np.searchsorted(T, self.nodes[i]), verify=False)
        return cache[(i, j)]

    @cached_property
    def edge_classes(self):
        return {e: self.step(*e).classify_minimal() for e in self.hasse_edges}

    def interval(self, lo, hi):
        """Node indices ``k`` with ``node_lo ⊆ node_k ⊆ node_hi``."""
        return [k for k in range(len(self.nodes)) if self.leq[lo, k] and self.leq[k, hi]]


def _node_key(mask):
    return np.packbits(mask).tobytes()


def enumerate_interval(E: Extension, cap=None) -> SubalgebraLattice:
    S = E.S
    cap = cap or config.limits().lattice_nodes
    start = E.sub_mask.copy()
    seen = {_node_key(start): start}
    frontier = [start]
    while frontier:
        nxt = []
        for A in frontier:
            covered = A.copy()
            A_idx = np.flatnonzero(A)
            for s in np.flatnonzero(~A):
                if covered[s]:
                    continue
                # s + A all generate the same ring together with A
                covered[S.add[s, A_idx]] = True
                C = closure_mask(S, [int(s)], include_unit=False, base=A.copy())
                key = _node_key(C)
                if key not in seen:
                    seen[key] = C
                    nxt.append(C)
                    if len(seen) > cap:
                        raise LatticeCapExceeded(f"more than {cap} intermediate rings", partial_count=len(seen))
        frontier = nxt
    masks = list(seen.values())
    nodes = [np.flatnonzero(m) for m in masks]
    order = sorted(range(len(nodes)), key=lambda k: (len(nodes[k]), tuple(nodes[k].tolist())))
    return SubalgebraLattice(E, [nodes[k] for k in order], np.array([masks[k] for k in order]))


def powerset_subrings(E: Extension, max_order=64):
    """Every subset of ``S`` containing ``R`` that is closed under + and *.

    Depth-first include/exclude over the elements outside ``R`` in index
    order. A branch dies as soon as a sum or product of included elements is
    an excluded element, so only closed sets reach the leaves.
    """
    S = E.S
    n = S.order
    if n > max_order:
        raise RingError(f"powerset oracle limited to order {max_order}")
    add = S.add.tolist()
    mul = S.mul.tolist()
    base = [int(x) for x in E.sub]
    free = [x for x in range(n) if not E.sub_mask[x]]

    def results(x, members):
        out = 0
        for a in members:
            out |= (1 << add[x][a]) | (1 << mul[x][a])
        out |= (1 << add[x][x]) | (1 << mul[x][x])
        return out

    required = 0
    for i, a in enumerate(base):
        required |= results(a, base[:i])
    base_bits = sum(1 << a for a in base)
    if required & ~base_bits:
        raise RingError("R is not closed")
    found = []

    def dfs(k, members, inc, exc, req):
        if k == len(free):
            found.append(inc)
            return
        x = free[k]
        bit = 1 << x
        new_req = req | results(x, members)
        if not (new_req & exc):
            dfs(k + 1, members + [x], inc | bit, exc, new_req)
        if not (req & bit):
            dfs(k + 1, members, inc, exc | bit, req)

    dfs(0, base, base_bits, 0, required)
    return sorted((tuple(i for i in range(n) if m >> i & 1) for m in found), key=lambda t: (len(t), t))


@dataclass
class MinimalStepPath:
    chain: list                       # node indices, bottom to top
    classes: list = field(default_factory=list)

    @property
    def tags(self):
        return [c.tag for c in self.classes]


def maximal_chain(L: SubalgebraLattice) -> MinimalStepPath:
    """Greedy chain following the least-indexed cover at every step."""
    cov = L.covers
    chain = [L.bottom]
    while chain[-1] != L.top:
        chain.append(int(np.flatnonzero(cov[chain[-1]])[0]))
    classes = [L.step(a, b).classify_minimal() for a, b in zip(chain, chain[1:])]
    return MinimalStepPath(chain, classes)


def is_chained(L: SubalgebraLattice) -> bool:
    return bool((L.leq | L.leq.T).all())


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def bell_number(n):
    """Bell numbers from the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


@dataclass
class PartitionReport:
    lattice_count: int
    formula_count: int
    local_counts: dict      # block (tuple of maximal-ideal positions) -> local subextension count

    @property
    def agrees(self):
        return self.lattice_count == self.formula_count


def _local_subextension_count(E: Extension, block, idems):
    S = E.S
    f = S.zero
    for i in block:
        f = int(S.add[f, idems[i]])
    Sf, members = idempotent_factor(S, f)
    inv = np.full(S.order, -1, dtype=np.int64)
    inv[members] = np.arange(members.size)
    sub = np.unique(inv[S.mul[f, E.sub]])
    lat = enumerate_interval(Extension(Sf, sub, verify=False))
    return sum(1 for node in lat.nodes if is_local(restrict(Sf, node)[0]))


def partition_count_check(E: Extension, lattice: SubalgebraLattice | None = None) -> PartitionReport:
    """|[R,S]| against the sum over partitions of Max(S) of products of local counts."""
    if len(E.max_R) != 1:
        raise NotLocal("the base ring must be local")
    lattice = lattice or enumerate_interval(E)
    # primitive idempotents of S, ordered like the maximal ideals they carry
    idems = [E.s_idempotent_for(Q) for Q in E.max_S]
    m = len(idems)
    local = {}
    for size in range(1, m + 1):
        for block in combinations(range(m), size):
            local[block] = _local_subextension_count(E, block, idems)
    total = 0
    for part in set_partitions(range(m)):
        prod = 1
        for block in part:
            prod *= local[tuple(sorted(block))]
        total += prod
    return PartitionReport(len(lattice), total, local)


def hasse_dot(L: SubalgebraLattice) -> str:
    lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=box];"]
    for i, node in enumerate(L.nodes):
        lines.append(f'  n{i} [label="#{i} |{len(node)}|"];')
    classes = L.edge_classes
    for i, j in L.hasse_edges:
        lines.append(f'  n{i} -> n{j} [label="{classes[(i, j)].tag.lower()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
