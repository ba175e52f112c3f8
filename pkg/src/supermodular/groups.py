"""Finite closure of matrix groups with Cayley-graph bookkeeping.

Generic breadth-first closure over exact carriers (cyclotomic matrices,
optionally canonicalized modulo scalars, and 2x2 matrices over Z/nZ).  The
resulting table stores Cayley edges and spanning-tree words, from which
centers, derived subgroups, center quotients and structural fingerprints are
computed with pure index arithmetic (no further matrix products).

Fingerprints (order, center order, derived order, exponent, element-order
histogram) are isomorphism-consistency evidence only, never isomorphism
proofs.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exactmat import CycMatrix

DEFAULT_CAP = 2_000_000


@dataclass(frozen=True)
class Exceeded:
    """Closure abandoned: more than `cap` distinct elements were found."""

    cap: int
    found: int


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    center_order: int
    derived_order: int
    exponent: int
    order_histogram: tuple[tuple[int, int], ...]  # sorted (element order, count)

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "center_order": self.center_order,
            "derived_order": self.derived_order,
            "exponent": self.exponent,
            "order_histogram": {str(k): v for k, v in self.order_histogram},
        }


class MatrixCarrier:
    """Cyclotomic matrices; `projective` divides out scalar matrices."""

    def __init__(self, projective: bool = False):
        self.projective = projective

    def canonical(self, m: CycMatrix) -> CycMatrix:
        return m.projective_canonical() if self.projective else m

    def identity_like(self, m: CycMatrix) -> CycMatrix:
        return self.canonical(CycMatrix.identity(m.conductor, m.size))

    def mul(self, a: CycMatrix, b: CycMatrix) -> CycMatrix:
        return self.canonical(a @ b)

    def key(self, m: CycMatrix) -> bytes:
        return m.key()

    def validate_generator(self, m: CycMatrix) -> None:
        if not m.is_invertible():
            raise ValueError("generator matrix is not invertible")


class ModNCarrier:
    """2x2 matrices over Z/nZ as 4-tuples; `projective` divides out {+-I}."""

    def __init__(self, n: int, projective: bool = False):
        if n < 1:
            raise ValueError(f"modulus must be positive, got {n}")
        self.n = n
        self.projective = projective

    def canonical(self, m: tuple) -> tuple:
        n = self.n
        m = (m[0] % n, m[1] % n, m[2] % n, m[3] % n)
        if self.projective:
            neg = ((-m[0]) % n, (-m[1]) % n, (-m[2]) % n, (-m[3]) % n)
            return min(m, neg)
        return m

    def identity_like(self, m: tuple) -> tuple:
        return self.canonical((1, 0, 0, 1))

    def mul(self, x: tuple, y: tuple) -> tuple:
        a, b, c, d = x
        e, f, g, h = y
        n = self.n
        return self.canonical((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))

    def key(self, m: tuple) -> tuple:
        return m

    def validate_generator(self, m: tuple) -> None:
        det = (m[0] * m[3] - m[1] * m[2]) % self.n
        if math.gcd(det, self.n) != 1:
            raise ValueError(f"generator is singular modulo {self.n}")


class _CosetCarrier:
    """Center cosets of a closed table, labeled by minimal member index."""

    def __init__(self, table: "FiniteGroupTable", coset_map: np.ndarray):
        self.table = table
        self.coset_map = coset_map

    def canonical(self, idx: int) -> int:
        return int(self.coset_map[idx])

    def identity_like(self, idx: int) -> int:
        return int(self.coset_map[0])

    def mul(self, a: int, b: int) -> int:
        return int(self.coset_map[self.table.mult_idx(a, b)])

    def key(self, idx: int) -> int:
        return idx

    def validate_generator(self, idx: int) -> None:
        pass


class FiniteGroupTable:
    """Closed element list with Cayley edges and spanning-tree words."""

    def __init__(self, carrier, generators, elems, key2idx, edges, parent, parent_gen, cap):
        self.carrier = carrier
        self.generators = generators
        self.elems = elems
        self.key2idx = key2idx
        self.edges = [np.asarray(e, dtype=np.int64) for e in edges]
        self.parent = parent
        self.parent_gen = parent_gen
        self.cap = cap
        self.closed = True
        self._words: list[tuple[int, ...] | None] = [None] * len(elems)
        self._words[0] = ()
        self._inv: np.ndarray | None = None
        self._inv_edges: list[np.ndarray] | None = None
        self._gen_indices: list[int] | None = None

    # -- basics ---------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def element(self, i: int):
        return self.elems[i]

    def index_of(self, element) -> int:
        key = self.carrier.key(self.carrier.canonical(element))
        return self.key2idx[key]

    def generator_indices(self) -> list[int]:
        if self._gen_indices is None:
            self._gen_indices = [int(self.edges[g][0]) for g in range(len(self.generators))]
        return self._gen_indices

    def word(self, i: int) -> tuple[int, ...]:
        """Generator indices whose product (left to right) equals element i."""
        if self._words[i] is None:
            chain = []
            j = i
            while self._words[j] is None:
                chain.append(j)
                j = self.parent[j]
            base = self._words[j]
            for node in reversed(chain):
                base = base + (self.parent_gen[node],)
                self._words[node] = base
        return self._words[i]

    def mult_idx(self, i: int, j: int) -> int:
        x = i
        for g in self.word(j):
            x = int(self.edges[g][x])
        return x

    def inv_edges(self) -> list[np.ndarray]:
        if self._inv_edges is None:
            self._inv_edges = [np.argsort(e).astype(np.int64) for e in self.edges]
        return self._inv_edges

    def inverses(self) -> np.ndarray:
        """inverses()[i] is the index of elems[i]^-1."""
        if self._inv is None:
            inv_edges = self.inv_edges()
            out = np.zeros(len(self.elems), dtype=np.int64)
            for i in range(len(self.elems)):
                x = 0
                for g in reversed(self.word(i)):
                    x = int(inv_edges[g][x])
                out[i] = x
            self._inv = out
        return self._inv

    def right_perm(self, j: int) -> np.ndarray:
        """Permutation i -> i * elems[j], vectorized over the whole table."""
        arr = np.arange(len(self.elems), dtype=np.int64)
        for g in self.word(j):
            arr = self.edges[g][arr]
        return arr

    def element_order(self, i: int) -> int:
        if i == 0:
            return 1
        order = 1
        x = i
        while x != 0:
            x = self.mult_idx(x, i)
            order += 1
        return order

    # -- structure ---------------------------------------------------------------

    def center_indices(self) -> list[int]:
        inv = self.inverses()
        inv_edges = self.inv_edges()
        mask = np.ones(len(self.elems), dtype=bool)
        for g in range(len(self.generators)):
            # left multiplication by generator g: x*i = inv(inv(i)*x^-1)
            left = inv[inv_edges[g][inv]]
            mask &= self.edges[g] == left
        return [int(i) for i in np.nonzero(mask)[0]]

    def subgroup_closure(self, gen_idxs: Sequence[int]) -> list[int]:
        members = {0}
        frontier = [0]
        gens = [g for g in gen_idxs if g != 0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mult_idx(x, g)
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(members)

    def normal_closure(self, seeds: Sequence[int]) -> tuple[list[int], list[int]]:
        """Normal closure of the given elements; returns (members, generators)."""
        inv = self.inverses()
        queue = [s for s in dict.fromkeys(seeds) if s != 0]
        gens = list(queue)
        members = set(self.subgroup_closure(gens))
        qi = 0
        while qi < len(queue):
            h = queue[qi]
            qi += 1
            for g in self.generator_indices():
                c = self.mult_idx(self.mult_idx(g, h), int(inv[g]))
                if c not in members:
                    queue.append(c)
                    gens.append(c)
                    members = set(self.subgroup_closure(gens))
        return sorted(members), gens

    def derived_subgroup(self) -> "Subgroup":
        """Commutator subgroup, as the normal closure of generator commutators."""
        inv = self.inverses()
        gi = self.generator_indices()
        seeds = []
        for a in gi:
            for b in gi:
                if a == b:
                    continue
                c = self.mult_idx(self.mult_idx(self.mult_idx(a, b), int(inv[a])), int(inv[b]))
                seeds.append(c)
        members, gens = self.normal_closure(seeds)
        return Subgroup(self, tuple(members), tuple(dict.fromkeys(g for g in gens if g != 0)))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(len(self.elems))), tuple(self.generator_indices()))

    def fingerprint(self) -> GroupFingerprint:
        return self.whole().fingerprint()

    def check_words(self) -> bool:
        """Every spanning-tree word must reproduce its element exactly."""
        for i in range(len(self.elems)):
            acc = self.carrier.identity_like(self.elems[0])
            for g in self.word(i):
                acc = self.carrier.mul(acc, self.generators[g])
            if self.carrier.key(acc) != self.carrier.key(self.elems[i]):
                return False
        return True

    def as_report(self) -> dict:
        return {"order": self.order, "generators": len(self.generators), "cap": self.cap}


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a closed table, given by member and generator indices."""

    table: FiniteGroupTable
    indices: tuple[int, ...]
    gen_idxs: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.indices)

    def element_orders(self) -> Counter:
        return Counter(self.table.element_order(i) for i in self.indices)

    def center_order(self) -> int:
        t = self.table
        count = 0
        for h in self.indices:
            if all(t.mult_idx(h, g) == t.mult_idx(g, h) for g in self.gen_idxs):
                count += 1
        return count

    def derived(self) -> "Subgroup":
        t = self.table
        inv = t.inverses()
        seeds = []
        for a in self.gen_idxs:
            for b in self.gen_idxs:
                if a == b:
                    continue
                seeds.append(t.mult_idx(t.mult_idx(t.mult_idx(a, b), int(inv[a])), int(inv[b])))
        members = set(t.subgroup_closure([s for s in seeds if s != 0]))
        gens = [s for s in dict.fromkeys(seeds) if s != 0]
        queue = list(gens)
        qi = 0
        while qi < len(queue):
            h = queue[qi]
            qi += 1
            for g in self.gen_idxs:
                c = t.mult_idx(t.mult_idx(g, h), int(inv[g]))
                if c not in members:
                    queue.append(c)
                    gens.append(c)
                    members = set(t.subgroup_closure(gens))
        return Subgroup(t, tuple(sorted(members)), tuple(gens))

    def fingerprint(self) -> GroupFingerprint:
        hist = self.element_orders()
        exponent = math.lcm(*hist.keys()) if hist else 1
        return GroupFingerprint(
            order=self.order,
            center_order=self.center_order(),
            derived_order=self.derived().order,
            exponent=exponent,
            order_histogram=tuple(sorted(hist.items())),
        )


def close(generators: Sequence, cap: int = DEFAULT_CAP, *, carrier=None, projective: bool = False):
    """Breadth-first closure of the group generated by `generators`.

    Returns a FiniteGroupTable, or an Exceeded marker once more than `cap`
    distinct elements have been found.  The element set is independent of
    generator order; edges and words follow BFS discovery order.
    """
    if not generators:
        raise ValueError("at least one generator is required")
    if carrier is None:
        if isinstance(generators[0], CycMatrix):
            carrier = MatrixCarrier(projective=projective)
        else:
            raise ValueError("a carrier is required for non-matrix generators")
    for g in generators:
        carrier.validate_generator(g)
    gens = [carrier.canonical(g) for g in generators]
    ident = carrier.identity_like(gens[0])
    elems = [ident]
    key2idx = {carrier.key(ident): 0}
    edges: list[list[int]] = [[] for _ in gens]
    parent = [0]
    parent_gen = [0]
    head = 0
    while head < len(elems):
        current = elems[head]
        for gi, g in enumerate(gens):
            cand = carrier.mul(current, g)
            key = carrier.key(cand)
            idx = key2idx.get(key)
            if idx is None:
                idx = len(elems)
                if idx > cap:
                    return Exceeded(cap=cap, found=idx)
                key2idx[key] = idx
                elems.append(cand)
                parent.append(head)
                parent_gen.append(gi)
            edges[gi].append(idx)
        head += 1
    return FiniteGroupTable(carrier, gens, elems, key2idx, edges, parent, parent_gen, cap)


def sl2_table(n: int, projective: bool = False, cap: int = DEFAULT_CAP):
    """Closure of SL(2, Z/nZ) from the standard generators s and t."""
    if n < 2:
        raise ValueError(f"sl2_table requires n >= 2, got {n}")
    carrier = ModNCarrier(n, projective=projective)
    s = (0, (-1) % n, 1, 0)
    t = (1, 1 % n, 0, 1)
    return close([s, t], cap=cap, carrier=carrier)


def sl2_order(n: int) -> int:
    """|SL(2, Z/nZ)| = n^3 * prod over primes p | n of (1 - 1/p^2)."""
    if n == 1:
        return 1
    result = n**3
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            result = result // (p * p) * (p * p - 1)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        result = result // (m * m) * (m * m - 1)
    return result


def quotient_by_center_order(table: FiniteGroupTable) -> int:
    return table.order // len(table.center_indices())


def central_quotient(table: FiniteGroupTable, cap: int = DEFAULT_CAP) -> FiniteGroupTable:
    """Materialize G/Z(G) as a closure over center cosets."""
    center = table.center_indices()
    n = table.order
    stack = np.empty((len(center), n), dtype=np.int64)
    for row, z in enumerate(center):
        stack[row] = table.right_perm(z)
    coset_map = stack.min(axis=0)
    carrier = _CosetCarrier(table, coset_map)
    gens = [int(coset_map[g]) for g in table.generator_indices()]
    result = close(gens, cap=cap, carrier=carrier)
    assert not isinstance(result, Exceeded)
    return result
