"""Arithmetic in prime fields and small extension fields F_{p^t}.

Elements live in polynomial-basis coordinates (low degree first).  The
element index ``sum(c[i] * p**i)`` doubles as the vector index used by the
linear-algebra and orbit code, so a field of size p^t is literally the
vector space F_p^t with the same numbering.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .linalg import Matrix

MAX_DEGREE = 4
MAX_SIZE = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over F_p as coefficient tuples, low degree first ---------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int):
    for low in product(range(p), repeat=degree):
        # product() varies the last slot fastest; reverse so c_0 varies fastest
        yield list(reversed(low)) + [1]


def is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(m)/2."""
    t = len(m) - 1
    if t <= 1:
        return t == 1
    for d in range(1, t // 2 + 1):
        for q in _monic_polys(p, d):
            if not poly_mod(m, q, p):
                return False
    return True


def _poly_key(c: list[int], p: int) -> int:
    return sum(x * p**i for i, x in enumerate(c))


# --- fields ------------------------------------------------------------------


class Field:
    """F_{p^t} with a fixed modulus and primitive element.

    Built by :func:`make_field`; holds exp/log tables over the element index.
    """

    def __init__(self, p: int, t: int, modulus: tuple[int, ...], gamma: int):
        self.p = p
        self.t = t
        self.modulus = modulus
        self.q = p**t
        self.gamma = gamma
        self._exp: list[int] = []
        self._log: list[int] = [-1] * self.q
        x = 1
        for k in range(self.q - 1):
            self._exp.append(x)
            self._log[x] = k
            x = self._mul_index(x, gamma)
        if x != 1 or len(set(self._exp)) != self.q - 1:
            raise ValueError(f"element {gamma} is not primitive in F_{self.q}")

    def __repr__(self) -> str:
        return f"Field(p={self.p}, t={self.t}, modulus={list(self.modulus)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def key(self) -> tuple:
        return (self.p, self.modulus)

    # index <-> coefficients
    def coeffs(self, index: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.t):
            index, r = divmod(index, self.p)
            out.append(r)
        return tuple(out)

    def index(self, coeffs) -> int:
        return _poly_key(list(coeffs), self.p)

    def _mul_index(self, a: int, b: int) -> int:
        return _mul_index(self.p, self.t, self.modulus, a, b)

    def element(self, index: int) -> FieldElement:
        return FieldElement(self.coeffs(index), self.key)

    def zero(self) -> FieldElement:
        return self.element(0)

    def one(self) -> FieldElement:
        return self.element(1)

    def gen(self) -> FieldElement:
        """The fixed primitive element."""
        return self.element(self.gamma)

    def power_of_gamma(self, k: int) -> FieldElement:
        return self.element(self._exp[k % (self.q - 1)])

    def log(self, a: FieldElement) -> int:
        """Discrete log of a nonzero element to base gamma."""
        self._check(a)
        k = self._log[self.index(a.coeffs)]
        if k < 0:
            raise ZeroDivisionError("log of zero")
        return k

    def elements(self) -> list[FieldElement]:
        return [self.element(i) for i in range(self.q)]

    def descriptor(self) -> dict:
        return {"p": self.p, "t": self.t, "modulus_poly": list(self.modulus)}

    def _check(self, *elts: FieldElement) -> None:
        for a in elts:
            if a.field_key != self.key:
                raise ValueError("element does not belong to this field")


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]
    field_key: tuple

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)


def make_field(p: int, t: int | None = None) -> Field:
    """Deterministic F_{p^t}: least irreducible monic modulus, least primitive element.

    Polynomials and elements are ordered by their base-p index with the
    constant coefficient as the least significant digit.
    """
    if t is None:
        raise ValueError("extension degree t is required")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= t <= MAX_DEGREE:
        raise ValueError(f"degree {t} outside 1..{MAX_DEGREE}")
    if p**t > MAX_SIZE:
        raise ValueError(f"field size {p}^{t} exceeds {MAX_SIZE}")
    modulus = next(m for m in _monic_polys(p, t) if is_irreducible(m, p))
    q = p**t
    mul = lambda a, b: _mul_index(p, t, tuple(modulus), a, b)  # noqa: E731
    divisors = [(q - 1) // r for r in prime_factors(q - 1)]
    for g in range(1, q):
        if all(_pow_index(mul, g, d) != 1 for d in divisors):
            return Field(p, t, tuple(modulus), g)
    raise AssertionError("multiplicative group has no generator")


def _mul_index(p: int, t: int, modulus: tuple[int, ...], a: int, b: int) -> int:
    ca, cb = [], []
    for _ in range(t):
        a, x = divmod(a, p)
        b, y = divmod(b, p)
        ca.append(x)
        cb.append(y)
    prod = [0] * (2 * t - 1)
    for i, x in enumerate(ca):
        if x:
            for j, y in enumerate(cb):
                prod[i + j] += x * y
    return _poly_key(poly_mod(prod, list(modulus), p), p)


def _pow_index(mul, a: int, k: int) -> int:
    result, base = 1, a
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


# --- operations --------------------------------------------------------------


def fadd(f: Field, a: FieldElement, b: FieldElement) -> FieldElement:
    f._check(a, b)
    return FieldElement(tuple((x + y) % f.p for x, y in zip(a.coeffs, b.coeffs)), f.key)


def fmul(f: Field, a: FieldElement, b: FieldElement) -> FieldElement:
    """Polynomial product reduced modulo the field modulus."""
    f._check(a, b)
    return f.element(f._mul_index(f.index(a.coeffs), f.index(b.coeffs)))


def fpow(f: Field, a: FieldElement, k: int) -> FieldElement:
    f._check(a)
    if k < 0:
        if a.is_zero:
            raise ZeroDivisionError("negative power of zero")
        k %= f.q - 1
    return f.element(_pow_index(f._mul_index, f.index(a.coeffs), k))


def frobenius(f: Field, a: FieldElement) -> FieldElement:
    return fpow(f, a, f.p)


def _matrix_of(f: Field, linear_map) -> Matrix:
    cols = [linear_map(f.element(f.p**j)).coeffs for j in range(f.t)]
    return Matrix.from_rows(f.p, [[cols[j][i] for j in range(f.t)] for i in range(f.t)])


def regular_rep(f: Field, a: FieldElement) -> Matrix:
    """Matrix of x -> a*x on column coordinate vectors in the polynomial basis."""
    f._check(a)
    if a.is_zero:
        raise ValueError("regular representation of zero is singular")
    return _matrix_of(f, lambda x: fmul(f, a, x))


def frobenius_matrix(f: Field) -> Matrix:
    if f.t < 2:
        raise ValueError("Frobenius of a prime field is the identity; need t >= 2")
    return _matrix_of(f, lambda x: frobenius(f, x))


def norm(f: Field, a: FieldElement) -> int:
    """Field norm to F_p, as a residue."""
    n = fpow(f, a, (f.q - 1) // (f.p - 1))
    assert all(c == 0 for c in n.coeffs[1:])
    return n.coeffs[0]
