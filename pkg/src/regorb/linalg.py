"""Dense exact linear algebra over prime fields F_p.

Vectors are column vectors; a vector ``v`` has canonical index
``sum(v[i] * p**i)`` (little-endian base p).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DIM = 6
MAX_POINTS = 1 << 20


class SingularMatrixError(ValueError):
    pass


class OrderCapExceeded(RuntimeError):
    """An element order or group order ran past the caller's cap."""


@dataclass(frozen=True)
class Matrix:
    p: int
    n: int
    entries: tuple[int, ...]  # row-major, length n*n

    def __post_init__(self):
        if len(self.entries) != self.n * self.n:
            raise ValueError("entry count does not match dimension")

    @classmethod
    def from_rows(cls, p: int, rows) -> Matrix:
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        return cls(p, n, tuple(int(x) % p for r in rows for x in r))

    @classmethod
    def identity(cls, p: int, n: int) -> Matrix:
        return cls(p, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def scalar(cls, p: int, n: int, c: int) -> Matrix:
        return cls(p, n, tuple((c % p) * int(i == j) for i in range(n) for j in range(n)))

    @property
    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    @property
    def code(self) -> int:
        """Little-endian base-p integer over the row-major entries."""
        c = 0
        for x in reversed(self.entries):
            c = c * self.p + x
        return c

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return apply(self, other)

    def __sub__(self, other: Matrix) -> Matrix:
        _same(self, other)
        return Matrix(self.p, self.n, tuple((a - b) % self.p for a, b in zip(self.entries, other.entries)))

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "rows": self.rows}

    @classmethod
    def from_json(cls, d: dict) -> Matrix:
        m = cls.from_rows(d["p"], d["rows"])
        if m.n != d["n"]:
            raise ValueError("declared n does not match rows")
        if any(not 0 <= x < d["p"] for r in d["rows"] for x in r):
            raise ValueError("matrix entries must already be reduced mod p")
        return m


def _same(a: Matrix, b: Matrix) -> None:
    if a.p != b.p or a.n != b.n:
        raise ValueError(f"shape mismatch: ({a.p},{a.n}) vs ({b.p},{b.n})")


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    _same(a, b)
    n, p = a.n, a.p
    ae, be = a.entries, b.entries
    out = []
    for i in range(n):
        row = ae[i * n:(i + 1) * n]
        for j in range(n):
            s = 0
            for k in range(n):
                s += row[k] * be[k * n + j]
            out.append(s % p)
    return Matrix(p, n, tuple(out))


def apply(a: Matrix, v) -> tuple[int, ...]:
    n, p = a.n, a.p
    if len(v) != n:
        raise ValueError("vector length does not match matrix")
    return tuple(sum(a.entries[i * n + k] * v[k] for k in range(n)) % p for i in range(n))


def mat_inv(a: Matrix) -> Matrix:
    n, p = a.n, a.p
    aug = [r + [int(i == j) for j in range(n)] for i, r in enumerate(a.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [x * inv % p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
    return Matrix.from_rows(p, [r[n:] for r in aug])


def mat_pow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        a, k = mat_inv(a), -k
    result = Matrix.identity(a.p, a.n)
    while k:
        if k & 1:
            result = mat_mul(result, a)
        a = mat_mul(a, a)
        k >>= 1
    return result


def mat_order(a: Matrix, cap: int) -> int:
    """Least k >= 1 with a^k = I; raises OrderCapExceeded past ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if det(a) == 0:
        raise SingularMatrixError("a singular matrix has no multiplicative order")
    ident = Matrix.identity(a.p, a.n)
    x = a
    for k in range(1, cap + 1):
        if x == ident:
            return k
        x = mat_mul(x, a)
    raise OrderCapExceeded(f"order exceeds {cap}")


def det(a: Matrix) -> int:
    n, p = a.n, a.p
    m = a.rows
    d = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            d = -d
        d = d * m[col][col] % p
        inv = pow(m[col][col], -1, p)
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv % p
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[col])]
    return d % p


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    if a.p != b.p:
        raise ValueError("characteristic mismatch")
    n = a.n * b.n
    if n > MAX_DIM:
        raise ValueError(f"Kronecker product dimension {n} exceeds {MAX_DIM}")
    ar, br = a.rows, b.rows
    rows = [[ar[i // b.n][j // b.n] * br[i % b.n][j % b.n] for j in range(n)] for i in range(n)]
    return Matrix.from_rows(a.p, rows)


def block_diag(*blocks: Matrix) -> Matrix:
    p = blocks[0].p
    n = sum(b.n for b in blocks)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        if b.p != p:
            raise ValueError("characteristic mismatch")
        for i, r in enumerate(b.rows):
            rows[off + i][off:off + b.n] = r
        off += b.n
    return Matrix.from_rows(p, rows)


# --- vectors -----------------------------------------------------------------


def vec_index(v, p: int) -> int:
    idx = 0
    for x in reversed(v):
        idx = idx * p + x
    return idx


def vec_from_index(idx: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        idx, r = divmod(idx, p)
        out.append(r)
    return tuple(out)


def all_vectors(p: int, n: int) -> np.ndarray:
    """Array of shape (p**n, n); row i is the vector with index i."""
    size = p**n
    if size > MAX_POINTS:
        raise ValueError(f"{p}^{n} points exceed {MAX_POINTS}")
    idx = np.arange(size, dtype=np.int64)
    return np.stack([(idx // p**i) % p for i in range(n)], axis=1)


# --- subspaces ---------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    p: int
    n: int
    basis: tuple[tuple[int, ...], ...]  # reduced row-echelon rows

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.p**self.dim

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    def __contains__(self, v) -> bool:
        v = [x % self.p for x in v]
        for row, piv in zip(self.basis, self.pivots):
            c = v[piv]
            if c:
                v = [(x - c * y) % self.p for x, y in zip(v, row)]
        return not any(v)

    def __le__(self, other: Subspace) -> bool:
        return all(r in other for r in self.basis)


def _rref_rows(rows: list[list[int]], p: int, ncols: int) -> tuple[list[list[int]], list[int]]:
    m = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    return m[:r], pivots


def rref(rows, p: int, n: int) -> Subspace:
    """Row space of ``rows`` in reduced echelon form."""
    rows = [list(r) for r in rows]
    if any(len(r) != n for r in rows):
        raise ValueError("row length does not match n")
    red, _ = _rref_rows(rows, p, n)
    return Subspace(p, n, tuple(tuple(r) for r in red))


def nullspace(rows, p: int, n: int) -> Subspace:
    """{v : r.v = 0 for every row r}, for any number of rows of length n."""
    rows = [list(r) for r in rows]
    if any(len(r) != n for r in rows):
        raise ValueError("row length does not match n")
    red, pivots = _rref_rows(rows, p, n)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, piv in zip(red, pivots):
            v[piv] = -row[f] % p
        basis.append(v)
    return rref(basis, p, n)


def kernel(a: Matrix) -> Subspace:
    return nullspace(a.rows, a.p, a.n)


def rank(a: Matrix) -> int:
    return rref(a.rows, a.p, a.n).dim


def span_indices(s: Subspace) -> np.ndarray:
    """Sorted indices of every vector in ``s``."""
    if s.p**s.n > MAX_POINTS:
        raise ValueError(f"{s.p}^{s.n} points exceed {MAX_POINTS}")
    weights = s.p ** np.arange(s.n, dtype=np.int64)
    if s.dim == 0:
        return np.zeros(1, dtype=np.int64)
    coeffs = all_vectors(s.p, s.dim)
    vecs = coeffs @ np.array(s.basis, dtype=np.int64) % s.p
    return np.sort(vecs @ weights)


def subspace_bitset(s: Subspace) -> int:
    """Bit ``vec_index(v)`` is set iff v lies in ``s``."""
    bits = np.zeros(s.p**s.n, dtype=bool)
    bits[span_indices(s)] = True
    return bitset_from_mask(bits)


def bitset_from_mask(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def full_bitset(p: int, n: int) -> int:
    return (1 << p**n) - 1
