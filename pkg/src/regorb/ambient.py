"""GL(n, p) as a flat numpy table, and bounded subgroup enumeration inside it.

Every invertible matrix gets an integer id (ascending by ``Matrix.code``).
Products, powers, inverses and the action on vector indices are array
lookups or batched matmuls, which is what keeps exhaustive searches over
tens of thousands of subgroups tractable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .gfp import is_prime
from .linalg import Matrix, all_vectors

log = logging.getLogger(__name__)

MAX_AMBIENT_CODES = 1 << 20
# every group of order < 60 is solvable, which cyclic extension relies on
SOLVABLE_BOUND = 59


class GeneralLinear:
    def __init__(self, n: int, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        ncodes = p ** (n * n)
        if ncodes > MAX_AMBIENT_CODES:
            raise ValueError(f"GL({n},{p}) is too large to tabulate")
        self.n, self.p = n, p
        codes = np.arange(ncodes, dtype=np.int64)
        self._weights = p ** np.arange(n * n, dtype=np.int64)
        mats = ((codes[:, None] // self._weights) % p).reshape(-1, n, n)
        dets = np.round(np.linalg.det(mats.astype(float))).astype(np.int64) % p
        # float det is exact here: entries < 13 and n <= 3 keep |det| far below 2^53
        keep = dets != 0
        self.codes = codes[keep]
        self.mats = mats[keep]
        self.size = len(self.codes)
        self.code_to_id = np.full(ncodes, -1, dtype=np.int64)
        self.code_to_id[self.codes] = np.arange(self.size)
        self.identity = int(self.code_to_id[Matrix.identity(p, n).code])
        self._orders_and_inverses()
        self.vectors = all_vectors(p, n)
        self.npoints = len(self.vectors)
        vw = p ** np.arange(n, dtype=np.int64)
        # act[g, v] = index of g @ v
        self.act = ((self.mats @ self.vectors.T) % p * vw[None, :, None]).sum(1).astype(np.int32)
        self._powers: dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"GeneralLinear(n={self.n}, p={self.p}, size={self.size})"

    def encode(self, mats: np.ndarray) -> np.ndarray:
        return self.code_to_id[(mats.reshape(-1, self.n * self.n) % self.p) @ self._weights]

    def mul(self, a, b) -> np.ndarray:
        """Elementwise products of id arrays (broadcasting)."""
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        return self.encode(self.mats[a.ravel()] @ self.mats[b.ravel()]).reshape(a.shape)

    def conj(self, gs: np.ndarray, x: int) -> np.ndarray:
        """g x g^-1 for every id in ``gs``."""
        return self.encode(self.mats[gs] @ self.mats[x] @ self.mats[self.inverse[gs]])

    def _orders_and_inverses(self) -> None:
        order = np.zeros(self.size, dtype=np.int64)
        inverse = np.full(self.size, -1, dtype=np.int64)
        ids = np.arange(self.size)
        prev = np.full(self.size, self.identity)
        cur = ids.copy()
        k = 1
        while (order == 0).any():
            done = (cur == self.identity) & (order == 0)
            order[done] = k
            inverse[done] = prev[done]
            prev, cur = cur, self.mul(cur, ids)
            k += 1
        self.order = order
        self.inverse = inverse

    def power(self, r: int) -> np.ndarray:
        """Array mapping each id to the id of its r-th power."""
        if r not in self._powers:
            ids = np.arange(self.size)
            result = np.full(self.size, self.identity)
            base, k = ids, r
            while k:
                if k & 1:
                    result = self.mul(result, base)
                base = self.mul(base, base)
                k >>= 1
            self._powers[r] = result
        return self._powers[r]

    def matrix(self, i: int) -> Matrix:
        return Matrix(self.p, self.n, tuple(int(x) for x in self.mats[i].ravel()))

    def id_of(self, m: Matrix) -> int:
        if m.p != self.p or m.n != self.n:
            raise ValueError("matrix shape mismatch")
        return int(self.code_to_id[m.code])

    def cyclic(self, g: int) -> np.ndarray:
        out = [self.identity]
        x = g
        while x != self.identity:
            out.append(x)
            x = int(self.mul(x, g))
        return np.sort(np.array(out, dtype=np.int64))

    def closure(self, gens, cap: int | None = None) -> np.ndarray | None:
        """Sorted ids of <gens>; None when the order would exceed ``cap``."""
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        seen = np.zeros(self.size, dtype=bool)
        seen[self.identity] = True
        count = 1
        frontier = np.array([self.identity])
        while frontier.size:
            prods = self.mul(frontier[:, None], gens[None, :]).ravel()
            prods = np.unique(prods)
            new = prods[~seen[prods]]
            seen[new] = True
            count += new.size
            if cap is not None and count > cap:
                return None
            frontier = new
        return np.nonzero(seen)[0]


@dataclass
class Universe:
    """Distinct coprime subgroups of GL(n, p) of order <= bound."""

    n: int
    p: int
    bound: int
    ambient: GeneralLinear = field(repr=False)
    groups: list[np.ndarray]  # sorted id arrays
    gens: list[list[int]]

    def __len__(self) -> int:
        return len(self.groups)

    def counts_by_order(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in self.groups:
            out[len(g)] = out.get(len(g), 0) + 1
        return dict(sorted(out.items()))


def _primes_upto(k: int) -> list[int]:
    return [r for r in range(2, k + 1) if is_prime(r)]


def enumerate_by_extension(gl: GeneralLinear, bound: int) -> Universe:
    """All p'-subgroups of order <= bound, by cyclic extension.

    A solvable K has a normal subgroup H of prime index r, so K = <H, g> with
    g normalizing H and g^r in H.  Starting from the trivial group and
    extending level by level therefore reaches every solvable subgroup, and
    every intermediate group lies inside the target.
    """
    if bound > SOLVABLE_BOUND:
        raise ValueError(f"cyclic extension is complete only for orders <= {SOLVABLE_BOUND}")
    p = gl.p
    primes = [r for r in _primes_upto(bound) if r != p]
    trivial = np.array([gl.identity])
    index: dict[bytes, int] = {trivial.tobytes(): 0}
    groups, gens = [trivial], [[]]
    by_order: dict[int, list[int]] = {1: [0]}
    for h in range(1, bound // 2 + 1):
        for gi in by_order.get(h, []):
            H, hgens = groups[gi], gens[gi]
            mem = np.zeros(gl.size, dtype=bool)
            mem[H] = True
            for r in primes:
                if r * h > bound:
                    break
                cand = np.nonzero(~mem & mem[gl.power(r)])[0]
                for x in hgens:
                    if cand.size == 0:
                        break
                    cand = cand[mem[gl.conj(cand, x)]]
                done = np.zeros(gl.size, dtype=bool)
                for g in cand:
                    if done[g]:
                        continue
                    powers = [gl.identity, int(g)]
                    for _ in range(r - 2):
                        powers.append(int(gl.mul(powers[-1], g)))
                    K = np.sort(gl.mul(H[:, None], np.array(powers)[None, :]).ravel())
                    done[K] = True
                    key = K.tobytes()
                    if key not in index:
                        index[key] = len(groups)
                        by_order.setdefault(len(K), []).append(len(groups))
                        groups.append(K)
                        gens.append(hgens + [int(g)])
    order = sorted(range(len(groups)), key=lambda i: (len(groups[i]), groups[i].tolist()))
    log.info("GL(%d,%d): %d subgroups of order <= %d", gl.n, p, len(groups), bound)
    return Universe(gl.n, p, bound, gl, [groups[i] for i in order], [gens[i] for i in order])


def enumerate_by_joins(gl: GeneralLinear, bound: int | None) -> Universe:
    """Join-closure fixpoint over cyclic p'-subgroups; ``bound=None`` means uncapped.

    Any subgroup is the join of its cyclic subgroups and every partial join
    stays inside it, so capped joins lose nothing of order <= bound.
    """
    p = gl.p
    cap = bound
    cyc: dict[bytes, tuple[np.ndarray, list[int]]] = {}
    for g in range(gl.size):
        k = int(gl.order[g])
        if k % p == 0 or (cap is not None and k > cap):
            continue
        c = gl.cyclic(g)
        cyc.setdefault(c.tobytes(), (c, [g] if g != gl.identity else []))
    found = dict(cyc)
    seeds = list(cyc.values())
    frontier = list(found.values())
    while frontier:
        nxt = []
        for A, agens in frontier:
            amem = np.zeros(gl.size, dtype=bool)
            amem[A] = True
            for C, cgens in seeds:
                if amem[C].all():
                    continue
                jgens = agens + cgens
                J = gl.closure(jgens, cap)
                if J is None or len(J) % p == 0:
                    continue
                key = J.tobytes()
                if key not in found:
                    found[key] = (J, jgens)
                    nxt.append(found[key])
        frontier = nxt
    items = sorted(found.values(), key=lambda t: (len(t[0]), t[0].tolist()))
    return Universe(gl.n, p, bound if bound is not None else gl.size, gl,
                    [t[0] for t in items], [t[1] for t in items])
