"""Fully enumerated finite matrix groups and their structure.

A :class:`Group` is a subgroup of GL(n, p) listed element by element, with
element 0 the identity.  Everything here is exact and brute force; groups
are small (a few hundred elements at most in practice).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .gfp import is_prime, prime_factors
from .linalg import Matrix, OrderCapExceeded, SingularMatrixError, det, mat_inv

MAX_CLOSE = 20160
TABLE_LIMIT = 512
ISO_LIMIT = 64
SHAPE_LIMIT = 512


class Group:
    def __init__(self, p: int, n: int, elements: list[Matrix], gens: list[int]):
        self.p = p
        self.n = n
        self.elements = elements
        self.index = {m: i for i, m in enumerate(elements)}
        self.gens = gens
        if elements[0] != Matrix.identity(p, n):
            raise ValueError("element 0 must be the identity")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"<Group order={self.order} in GL({self.n},{self.p})>"

    @property
    def generators(self) -> list[Matrix]:
        return [self.elements[i] for i in self.gens]

    @cached_property
    def table(self) -> np.ndarray | None:
        if self.order > TABLE_LIMIT:
            return None
        t = np.empty((self.order, self.order), dtype=np.int32)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                t[i, j] = self.index[a @ b]
        return t

    def mul(self, i: int, j: int) -> int:
        t = self.table
        if t is not None:
            return int(t[i, j])
        return self.index[self.elements[i] @ self.elements[j]]

    @cached_property
    def inverses(self) -> list[int]:
        t = self.table
        if t is not None:
            return [int(np.nonzero(t[i] == 0)[0][0]) for i in range(self.order)]
        return [self.index[mat_inv(m)] for m in self.elements]

    def inv(self, i: int) -> int:
        return self.inverses[i]

    @cached_property
    def element_orders(self) -> list[int]:
        out = []
        for i in range(self.order):
            k, x = 1, i
            while x != 0:
                x = self.mul(x, i)
                k += 1
            out.append(k)
        return out

    def power(self, i: int, k: int) -> int:
        x = 0
        for _ in range(k % self.element_orders[i]):
            x = self.mul(x, i)
        return x

    def cyclic(self, i: int) -> tuple[int, ...]:
        out, x = [0], i
        while x != 0:
            out.append(x)
            x = self.mul(x, i)
        return tuple(sorted(out))

    def is_abelian(self) -> bool:
        gs = self.gens
        return all(self.mul(a, b) == self.mul(b, a) for a in gs for b in gs)

    def subgroup(self, ids) -> SubgroupRef:
        return SubgroupRef(self, tuple(sorted(set(ids))))

    def closure_ids(self, ids) -> frozenset[int]:
        """Subgroup generated by the given element ids."""
        gens = [i for i in ids if i != 0]
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def export(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "order": self.order,
            "generators": [m.to_json() for m in self.generators],
            "fingerprint": fingerprint(self).to_json(),
        }


@dataclass(frozen=True)
class SubgroupRef:
    parent: Group = field(repr=False, compare=False)
    member_ids: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.member_ids)

    @property
    def matrices(self) -> list[Matrix]:
        return [self.parent.elements[i] for i in self.member_ids]

    def generator_ids(self) -> list[int]:
        """A small generating set, greedily chosen by element order."""
        g = self.parent
        members = sorted(self.member_ids, key=lambda i: (-g.element_orders[i], i))
        gens: list[int] = []
        current: frozenset[int] = frozenset({0})
        for x in members:
            if x not in current:
                gens.append(x)
                current = g.closure_ids(gens)
                if len(current) == self.order:
                    break
        return gens

    def as_group(self) -> Group:
        """Re-enumerate as a standalone group (identity first)."""
        mats = self.matrices
        return close(self.parent.p, self.parent.n, [mats[self.member_ids.index(i)] for i in self.generator_ids()])


# --- closure -------------------------------------------------------------


def close(p: int, n: int, generators: list[Matrix], cap: int = MAX_CLOSE) -> Group:
    """Enumerate <generators> by Dimino-style coset layers.

    Raises OrderCapExceeded once more than ``cap`` elements appear.
    """
    if cap > MAX_CLOSE:
        raise ValueError(f"cap {cap} exceeds {MAX_CLOSE}")
    for g in generators:
        if g.p != p or g.n != n:
            raise ValueError("generator shape mismatch")
        if det(g) == 0:
            raise SingularMatrixError("singular generator")
    ident = Matrix.identity(p, n)
    elements = [ident]
    index = {ident: 0}
    used: list[Matrix] = []

    def add(m):
        index[m] = len(elements)
        elements.append(m)
        if len(elements) > cap:
            raise OrderCapExceeded(f"group order exceeds {cap}")

    for g in generators:
        if g in index:
            continue
        used.append(g)
        prev = list(elements)
        if len(prev) == 1:
            x = g
            while x != ident:
                add(x)
                x = x @ g
            continue
        reps = [ident]
        pos = 0
        while pos < len(reps):
            r = reps[pos]
            for s in used:
                rs = r @ s
                if rs not in index:
                    reps.append(rs)
                    for h in prev:
                        add(h @ rs)
            pos += 1
    gens = [index[g] for g in generators if g != ident]
    gens = list(dict.fromkeys(gens))
    return Group(p, n, elements, gens)


# --- structure -----------------------------------------------------------


def center(g: Group) -> SubgroupRef:
    return g.subgroup(x for x in range(g.order) if all(g.mul(x, s) == g.mul(s, x) for s in g.gens))


def derived_subgroup(g: Group) -> SubgroupRef:
    comms = set()
    for a in range(g.order):
        for b in range(a + 1, g.order):
            comms.add(g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)))
    comms.discard(0)
    return g.subgroup(g.closure_ids(sorted(comms)))


def exponent(g: Group) -> int:
    return math.lcm(*g.element_orders)


def minimal_subgroups(g: Group) -> list[SubgroupRef]:
    """All subgroups of prime order, each once, sorted by (order, members)."""
    seen = set()
    for i, k in enumerate(g.element_orders):
        if is_prime(k):
            seen.add(g.cyclic(i))
    return [g.subgroup(s) for s in sorted(seen, key=lambda s: (len(s), s))]


def count_prime_order_subgroups(g: Group, r: int) -> int:
    if g.order % r:
        return 0
    return sum(1 for s in minimal_subgroups(g) if s.order == r)


def _ilog(x: int, r: int) -> int:
    k = 0
    while x > 1:
        x //= r
        k += 1
    return k


def abelian_invariants(g: Group, normal: SubgroupRef) -> list[int]:
    """Elementary divisors (prime powers) of the abelian quotient g/normal."""
    nset = set(normal.member_ids)
    qorder = g.order // len(nset)

    def qord(x):
        k, y = 1, x
        while y not in nset:
            y = g.mul(y, x)
            k += 1
        return k

    orders = [qord(x) for x in range(g.order)]  # each coset counted |N| times
    out = []
    for r in prime_factors(qorder):
        # c[k] = log_r #{a in quotient : a^(r^k) = 1}
        c = [0]
        while True:
            k = len(c)
            cnt = sum(1 for o in orders if r**k % o == 0) // len(nset)
            c.append(_ilog(cnt, r))
            if c[-1] == c[-2]:
                break
        at_least = [c[k] - c[k - 1] for k in range(1, len(c))] + [0]
        for k in range(1, len(at_least)):
            out.extend([r**k] * (at_least[k - 1] - at_least[k]))
    return sorted(out)


@dataclass(frozen=True)
class Fingerprint:
    order: int
    order_counts: tuple[tuple[int, int], ...]
    center_order: int
    derived_order: int
    exponent: int
    abelianization: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "element_orders": {str(k): v for k, v in self.order_counts},
            "center_order": self.center_order,
            "derived_order": self.derived_order,
            "exponent": self.exponent,
            "abelianization": list(self.abelianization),
        }


def fingerprint(g: Group) -> Fingerprint:
    d = derived_subgroup(g)
    return Fingerprint(
        order=g.order,
        order_counts=tuple(sorted(Counter(g.element_orders).items())),
        center_order=center(g).order,
        derived_order=d.order,
        exponent=exponent(g),
        abelianization=tuple(abelian_invariants(g, d)),
    )


# --- isomorphism -----------------------------------------------------------


def _generates(g: Group, ids) -> bool:
    return len(g.closure_ids(ids)) == g.order


def small_generating_set(g: Group) -> list[int]:
    """Minimum-size generating set when it has at most two elements, else greedy."""
    if g.order == 1:
        return []
    ords = g.element_orders
    for x in range(g.order):
        if ords[x] == g.order:
            return [x]
    ranked = sorted(range(1, g.order), key=lambda i: (-ords[i], i))
    for a_pos, a in enumerate(ranked):
        sub = g.closure_ids([a])
        for b in ranked[a_pos + 1:]:
            if b not in sub and _generates(g, [a, b]):
                return [a, b]
    return g.subgroup(range(g.order)).generator_ids()


def find_isomorphism(g: Group, h: Group) -> list[int] | None:
    """An isomorphism g -> h as a list of image ids, or None.

    Invariant screening, then backtracking over images of a small generating
    set; each partial assignment is propagated along the Cayley graph.
    """
    if max(g.order, h.order) > ISO_LIMIT:
        raise ValueError(f"isomorphism testing is limited to order {ISO_LIMIT}")
    if g.order != h.order or fingerprint(g) != fingerprint(h):
        return None
    gens = small_generating_set(g)
    if not gens:
        return [0]
    ords_g, ords_h = g.element_orders, h.element_orders
    cands = [[y for y in range(h.order) if ords_h[y] == ords_g[x]] for x in gens]

    def propagate(k: int, images: list[int]) -> dict[int, int] | None:
        phi = {0: 0}
        frontier = [0]
        used = {0}
        while frontier:
            nxt = []
            for x in frontier:
                for gi, yi in zip(gens[:k], images):
                    a, b = g.mul(x, gi), h.mul(phi[x], yi)
                    if a in phi:
                        if phi[a] != b:
                            return None
                    else:
                        if b in used:
                            return None
                        phi[a] = b
                        used.add(b)
                        nxt.append(a)
            frontier = nxt
        return phi

    def search(k: int, images: list[int]) -> list[int] | None:
        if k == len(gens):
            phi = propagate(k, images)
            if phi is None or len(phi) != g.order:
                return None
            return [phi[x] for x in range(g.order)]
        for y in cands[k]:
            trial = images + [y]
            if propagate(k + 1, trial) is not None:
                found = search(k + 1, trial)
                if found is not None:
                    return found
        return None

    return search(0, [])


def is_isomorphic(g: Group, h: Group) -> bool:
    return find_isomorphism(g, h) is not None


def is_homomorphism(g: Group, h: Group, phi: list[int]) -> bool:
    return all(phi[g.mul(a, b)] == h.mul(phi[a], phi[b]) for a in range(g.order) for b in range(g.order))
