"""Concrete group actions and reference groups.

Actions are subgroups of GL(n, p) acting on F_p^n.  Reference groups are
faithful matrix copies over a fixed coprime field (F_7 unless noted) used
for recognition by isomorphism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .gfp import fpow, frobenius_matrix, is_prime, make_field, regular_rep
from .group import Group, center, close, derived_subgroup, exponent
from .linalg import Matrix, block_diag, det, kronecker, mat_order, mat_pow

REF_P = 7


@dataclass(frozen=True)
class ConstructionDescriptor:
    kind: str
    params: dict = field(default_factory=dict)
    label: str = ""

    def to_json(self) -> dict:
        return {"label": self.label, "kind": self.kind, "params": dict(self.params)}

    @classmethod
    def from_json(cls, d: dict) -> ConstructionDescriptor:
        return cls(d["kind"], dict(d.get("params", {})), d.get("label", ""))


# --- field-based actions ---------------------------------------------------


def dihedral_field_action(p: int) -> Group:
    """Multiplication by the order-(p+1) subgroup of F_{p^2}^x, extended by Frobenius.

    Acts on F_p^2 = F_{p^2}; the group is dihedral of order 2p + 2 and has no
    regular orbit.
    """
    if p == 2 or not is_prime(p):
        raise ValueError("need an odd prime")
    if p > 61:
        raise ValueError("p is capped at 61")
    f = make_field(p, 2)
    h = regular_rep(f, fpow(f, f.gen(), p - 1))
    return close(p, 2, [h, frobenius_matrix(f)])


def semilinear_gamma_l(p: int, t: int, frobenius_power: str | int = "full") -> Group:
    """<x -> gamma x, x -> x^(p^k)> on F_p^t.

    ``frobenius_power`` is "full" (k = 1), "trivial" (no field automorphism),
    or the exponent k itself.
    """
    f = make_field(p, t)
    gens = [regular_rep(f, f.gen())]
    if frobenius_power == "trivial":
        k = 0
    elif frobenius_power == "full":
        k = 1
    else:
        k = int(frobenius_power)
    if k % t:
        gens.append(mat_pow(frobenius_matrix(f), k))
    return close(p, t, gens)


def sylow2_of_gl23() -> Group:
    """The Sylow 2-subgroup of GL(2,3) through the least element of order 8.

    "Least" is by ``Matrix.code``; the involution is the least one completing
    it to order 16.
    """
    gl = _gl_elements(3, 2)
    a = next(m for m in gl if _order(m) == 8)
    for b in gl:
        if _order(b) == 2:
            g = close(3, 2, [a, b])
            if g.order == 16:
                return g
    raise AssertionError("GL(2,3) has no subgroup of order 16")


def _gl_elements(p: int, n: int) -> list[Matrix]:
    out = []
    for code in range(p ** (n * n)):
        entries, c = [], code
        for _ in range(n * n):
            c, r = divmod(c, p)
            entries.append(r)
        m = Matrix(p, n, tuple(entries))
        if det(m):
            out.append(m)
    return out


def _order(m: Matrix) -> int:
    return mat_order(m, 10**6)


# --- 2-groups --------------------------------------------------------------


def d8_generators(p: int) -> tuple[Matrix, Matrix]:
    """Rotation [[0,-1],[1,0]] and reflection diag(1,-1), generating D_8 in GL(2,p)."""
    return Matrix.from_rows(p, [[0, -1], [1, 0]]), Matrix.from_rows(p, [[1, 0], [0, -1]])


def central_product_d8(copies: int, base_p: int) -> Group:
    """D_8 (copies=1) or D_8 * D_8 via Kronecker products (copies=2)."""
    if base_p % 2 == 0:
        raise ValueError("need an odd characteristic")
    r, s = d8_generators(base_p)
    if copies == 1:
        return close(base_p, 2, [r, s])
    if copies == 2:
        i2 = Matrix.identity(base_p, 2)
        return close(base_p, 4, [kronecker(r, i2), kronecker(s, i2), kronecker(i2, r), kronecker(i2, s)])
    raise ValueError("only one or two D_8 factors are supported")


def d8_star_c4(p: int = 5) -> Group:
    """D_8 * C_4 in GL(2,p), p = 1 mod 4: D_8 together with a scalar of order 4."""
    if (p - 1) % 4:
        raise ValueError("need p = 1 mod 4 for a scalar of order 4")
    r, s = d8_generators(p)
    i4 = next(x for x in range(2, p) if pow(x, 2, p) == p - 1)
    return close(p, 2, [r, s, Matrix.scalar(p, 2, i4)])


def d8_star_c4_search(p: int = 5) -> Group:
    """First order-16 subgroup of GL(2,p) with no regular orbit, found by enumeration."""
    from .action import regular_orbit_certificate
    from .verifier import universe_for

    u = universe_for(2, p, 16)
    for ids, gens in zip(u.groups, u.gens):
        if len(ids) != 16:
            continue
        g = close(p, 2, [u.ambient.matrix(i) for i in gens])
        if regular_orbit_certificate(g).has_regular:
            continue
        z = center(g)
        cyclic_center = z.order == 4 and any(g.element_orders[i] == 4 for i in z.member_ids)
        if not (cyclic_center and exponent(g) == 4 and derived_subgroup(g).order == 2):
            raise AssertionError(f"order-16 exception has an unexpected fingerprint: {g.export()}")
        return g
    raise AssertionError(f"no order-16 subgroup of GL(2,{p}) without a regular orbit")


# --- references --------------------------------------------------------------


def permutation_matrix(p: int, perm: list[int]) -> Matrix:
    """Matrix sending basis vector e_i to e_perm[i]."""
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[j][i] = 1
    return Matrix.from_rows(p, rows)


def _cycle(n: int, cyc: list[int]) -> list[int]:
    perm = list(range(n))
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        perm[a] = b
    return perm


def _least_prime(cond) -> int:
    q = 3
    while not (is_prime(q) and cond(q)):
        q += 1
    return q


def cyclic_reference(k: int, p: int = REF_P) -> Group:
    """C_k as <multiplication by an element of order k> in the smallest F_{p^t} containing one."""
    if k == 1:
        return close(p, 1, [])
    t = next(t for t in range(1, 5) if (p**t - 1) % k == 0)
    f = make_field(p, t)
    return close(p, t, [regular_rep(f, f.power_of_gamma((f.q - 1) // k))])


def dihedral_reference(order: int) -> Group:
    """D_order (order = 2k, k >= 3): diag(z, 1/z) and the coordinate swap over F_q, k | q-1."""
    k = order // 2
    if order % 2 or k < 3:
        raise ValueError("dihedral order must be even and at least 6")
    q = REF_P if (REF_P - 1) % k == 0 else _least_prime(lambda q: (q - 1) % k == 0)
    z = pow(make_field(q, 1).gamma, (q - 1) // k, q)
    rot = Matrix.from_rows(q, [[z, 0], [0, pow(z, -1, q)]])
    swap = Matrix.from_rows(q, [[0, 1], [1, 0]])
    return close(q, 2, [rot, swap])


def quaternion_reference(p: int = REF_P) -> Group:
    """Q_8 in SL(2,p): i = [[0,-1],[1,0]], j = [[a,b],[b,-a]] with a^2 + b^2 = -1."""
    a, b = next((a, b) for a in range(p) for b in range(p) if (a * a + b * b + 1) % p == 0)
    i = Matrix.from_rows(p, [[0, -1], [1, 0]])
    j = Matrix.from_rows(p, [[a, b], [b, -a]])
    return close(p, 2, [i, j])


def symmetric_reference(n: int, p: int = REF_P) -> Group:
    return close(p, n, [permutation_matrix(p, _cycle(n, list(range(n)))), permutation_matrix(p, _cycle(n, [0, 1]))])


def alternating5_reference(p: int = REF_P) -> Group:
    return close(p, 5, [permutation_matrix(p, _cycle(5, [0, 1, 2, 3, 4])), permutation_matrix(p, _cycle(5, [0, 1, 2]))])


def _s3_gens(p: int) -> list[Matrix]:
    return [permutation_matrix(p, _cycle(3, [0, 1, 2])), permutation_matrix(p, _cycle(3, [0, 1]))]


def direct_product(*factors: list[Matrix]) -> list[Matrix]:
    """Generators of the block-diagonal direct product of generator lists."""
    dims = [fs[0].n for fs in factors]
    p = factors[0][0].p
    out = []
    for k, fs in enumerate(factors):
        for m in fs:
            blocks = [m if i == k else Matrix.identity(p, d) for i, d in enumerate(dims)]
            out.append(block_diag(*blocks))
    return out


def s3_squared_reference(p: int = REF_P) -> Group:
    return close(p, 6, direct_product(_s3_gens(p), _s3_gens(p)))


def s3_times_d8_reference(p: int = REF_P) -> Group:
    return close(p, 5, direct_product(_s3_gens(p), list(d8_generators(p))))


def sign_generators(p: int, k: int) -> list[Matrix]:
    """diag(-1 at position i) for i < k: generators of C_2^k in GL(k, p)."""
    return [Matrix.from_rows(p, [[(-1 if i == j == a else int(i == j)) for j in range(k)] for i in range(k)])
            for a in range(k)]


def elementary_abelian2_reference(k: int, p: int = REF_P) -> Group:
    return close(p, k, sign_generators(p, k))


def d8_times_c2n_reference(n: int, p: int = REF_P) -> Group:
    gens = list(d8_generators(p))
    return close(p, 2 + n, direct_product(gens, sign_generators(p, n)) if n else gens)


def d8_central_squared_times_c2n_reference(n: int, p: int = REF_P) -> Group:
    dd = central_product_d8(2, p).generators
    return close(p, 4 + n, direct_product(dd, sign_generators(p, n)) if n else dd)


def d8_squared_reference(p: int = REF_P) -> Group:
    d = list(d8_generators(p))
    return close(p, 4, direct_product(d, d))


def c2n_by_c2_reference(n: int, p: int = REF_P) -> Group:
    """C_2^n x| C_2 with the C_2 swapping the first two sign coordinates."""
    if n < 2:
        raise ValueError("need n >= 2")
    swap = permutation_matrix(p, _cycle(n, [0, 1]))
    return close(p, n, sign_generators(p, n) + [swap])


def a4_reference(p: int = REF_P) -> Group:
    """C_2^2 x| C_3: sign changes of determinant 1 and a 3-cycle."""
    d1 = Matrix.from_rows(p, [[-1, 0, 0], [0, -1, 0], [0, 0, 1]])
    d2 = Matrix.from_rows(p, [[1, 0, 0], [0, -1, 0], [0, 0, -1]])
    return close(p, 3, [d1, d2, permutation_matrix(p, _cycle(3, [0, 1, 2]))])


def heisenberg_reference() -> Group:
    """Upper unitriangular 3x3 matrices over F_3 (order 27, exponent 3)."""
    x = Matrix.from_rows(3, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    y = Matrix.from_rows(3, [[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    return close(3, 3, [x, y])


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    group: Group = field(repr=False)
    expected_order: int
    positive: bool  # expected to have more than |G|/2 - 1 minimal subgroups


@lru_cache(maxsize=None)
def reference_groups() -> tuple[CatalogEntry, ...]:
    """Positive and negative controls for the minimal-subgroup threshold."""
    table = [
        ("D8", lambda: central_product_d8(1, REF_P), 8, True),
        ("D8*D8", lambda: central_product_d8(2, REF_P), 32, True),
        ("Heisenberg27", heisenberg_reference, 27, True),
        ("S3^2", s3_squared_reference, 36, True),
        ("S4", lambda: symmetric_reference(4), 24, True),
        ("A5", alternating5_reference, 60, True),
        ("S3xD8", s3_times_d8_reference, 48, True),
        ("C2^1", lambda: elementary_abelian2_reference(1), 2, True),
        ("C2^2", lambda: elementary_abelian2_reference(2), 4, True),
        ("C2^3", lambda: elementary_abelian2_reference(3), 8, True),
        ("C2^4", lambda: elementary_abelian2_reference(4), 16, True),
        ("C2^2:C3", a4_reference, 12, True),
        ("S3", lambda: dihedral_reference(6), 6, True),
        ("C2^3:C2", lambda: c2n_by_c2_reference(3), 16, True),
        ("D8xD8", d8_squared_reference, 64, True),
        ("C4", lambda: cyclic_reference(4), 4, False),
        ("C5", lambda: cyclic_reference(5), 5, False),
        ("C6", lambda: cyclic_reference(6), 6, False),
        ("Q8", quaternion_reference, 8, False),
        ("C9", lambda: cyclic_reference(9), 9, False),
    ]
    out = []
    for label, build, order, positive in table:
        g = build()
        if g.order != order:
            raise AssertionError(f"{label}: built order {g.order}, expected {order}")
        if label != "Heisenberg27" and order % g.p == 0:
            raise AssertionError(f"{label}: characteristic {g.p} divides the order")
        out.append(CatalogEntry(label, g, order, positive))
    return tuple(out)


# --- descriptors -----------------------------------------------------------

GOLDEN = Path(__file__).with_name("data") / "golden.json"
DIHEDRAL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


@lru_cache(maxsize=None)
def golden() -> dict:
    return json.loads(GOLDEN.read_text())


def _from_rows(p: int, gens) -> Group:
    mats = [Matrix.from_rows(p, r) for r in gens]
    return close(p, mats[0].n, mats)


def build(desc: ConstructionDescriptor) -> Group:
    k, a = desc.kind, desc.params
    if k == "dihedral_field":
        return dihedral_field_action(a["p"])
    if k == "semilinear":
        return semilinear_gamma_l(a["p"], a["t"], a.get("frobenius", "full"))
    if k == "sylow2_gl23":
        return sylow2_of_gl23()
    if k == "central_product_d8":
        return central_product_d8(a["copies"], a["p"])
    if k == "heisenberg3":
        return heisenberg_reference()
    if k == "perm_group":
        return close(a["p"], len(a["perms"][0]), [permutation_matrix(a["p"], q) for q in a["perms"]])
    if k == "search_result":
        return _from_rows(a["p"], a["generators"])
    raise ValueError(f"unknown construction kind {k!r}")


def catalog_descriptors() -> list[ConstructionDescriptor]:
    gold = golden()
    out = [
        ConstructionDescriptor("sylow2_gl23", {}, "SD16_on_C3^2"),
        ConstructionDescriptor("semilinear", {"p": 2, "t": 3, "frobenius": "full"}, "C7:C3_on_C2^3"),
        ConstructionDescriptor("search_result", {"p": 5, "generators": gold["D8*C4_on_C5^2"]["generators"]},
                               "D8*C4_on_C5^2"),
        ConstructionDescriptor("search_result",
                               {"p": 7, "generators": gold["Order24_on_C7^2"]["generators"]},
                               "Order24_on_C7^2"),
    ]
    out += [ConstructionDescriptor("dihedral_field", {"p": p}, f"DihedralField_p={p}") for p in DIHEDRAL_PRIMES]
    out += [
        ConstructionDescriptor("central_product_d8", {"copies": 2, "p": 5}, "D8*D8_on_C5^4"),
        ConstructionDescriptor("heisenberg3", {}, "Heisenberg27"),
        ConstructionDescriptor("perm_group", {"p": 7, "perms": [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]]}, "A5_on_C7^5"),
    ]
    return out


def catalog_json() -> list[dict]:
    out = []
    for d in catalog_descriptors():
        g = build(d)
        entry = d.to_json()
        entry.update({"p": g.p, "n": g.n, "order": g.order, "coprime": g.order % g.p != 0, "generators": [m.to_json() for m in g.generators]})
        if d.kind in ("dihedral_field", "semilinear"):
            entry["field"] = make_field(d.params["p"], d.params.get("t", 2)).descriptor()
        out.append(entry)
    return out


def lookup(label: str) -> Group:
    for d in catalog_descriptors():
        if d.label == label:
            return build(d)
    raise KeyError(f"no catalog entry {label!r}")
