"""Recognition of the group shapes that carry many minimal subgroups.

``recognize_shape`` runs a direct structural test for every shape and
reports all matches; the headline tag is the first match in ``ORDER``.  The
two theorem exceptions come first so that, e.g., a dihedral group is named
as such even though it also fits the "abelian inverted by C_2" family.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import constructions as cons
from .group import ISO_LIMIT, SHAPE_LIMIT, Group, exponent, is_isomorphic

# (tag name, minimal-subgroup classification case or None)
ORDER = [
    ("Dihedral", None),
    ("D8starC4", None),
    ("AbelianInvertedByC2", "i"),
    ("C2nByC2", "ii"),
    ("C2evenByC3", "iii"),
    ("CentralProductD8family", "iv"),
    ("Exponent3", "v"),
    ("D8squaredTimesC2n", "vi"),
    ("S3xD8xC2n", "vii"),
    ("S3sq_S4_A5", "viii"),
]


@dataclass(frozen=True)
class ShapeTag:
    name: str
    params: tuple = ()
    cases: tuple[str, ...] = ()  # every classification case that matched
    matches: tuple[str, ...] = ()  # every tag that matched, in ORDER

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({','.join(map(str, self.params))})"

    def to_json(self) -> dict:
        return {"tag": str(self), "cases": list(self.cases), "matches": list(self.matches)}


NONE = ShapeTag("None")


def _is_two_power(k: int) -> bool:
    return k > 0 and k & (k - 1) == 0


def _log2(k: int) -> int:
    return k.bit_length() - 1


def _is_subgroup_abelian(g: Group, ids) -> bool:
    ids = list(ids)
    return all(g.mul(a, b) == g.mul(b, a) for i, a in enumerate(ids) for b in ids[i + 1:])


def index2_subgroups(g: Group) -> list[frozenset[int]]:
    """Every subgroup of index 2, as element-id sets."""
    if g.order % 2:
        return []
    squares = g.closure_ids({g.mul(x, x) for x in range(g.order)})
    basis: list[int] = []
    current = squares
    for x in range(g.order):
        if x not in current:
            basis.append(x)
            current = g.closure_ids(list(squares) + basis)
    out = set()
    k = len(basis)
    for mask in range(1, 1 << k):
        ones = [basis[i] for i in range(k) if mask >> i & 1]
        zeros = [basis[i] for i in range(k) if not mask >> i & 1]
        gens = list(squares) + zeros + [g.mul(ones[0], y) for y in ones[1:]]
        sub = g.closure_ids(gens)
        assert 2 * len(sub) == g.order
        out.add(sub)
    return sorted(out, key=sorted)


def _dihedral(g: Group):
    m = g.order
    if m < 6 or m % 2 or g.is_abelian():
        return None
    ords = g.element_orders
    for c in range(g.order):
        if ords[c] != m // 2:
            continue
        rot = set(g.cyclic(c))
        cinv = g.inv(c)
        if any(ords[t] == 2 and t not in rot and g.mul(g.mul(t, c), t) == cinv for t in range(g.order)):
            return (m,)
    return None


@lru_cache(maxsize=None)
def _ref(name: str, *args) -> Group:
    return getattr(cons, name)(*args)


def _iso(g: Group, name: str, *args) -> bool:
    ref = _ref(name, *args)
    return ref.order == g.order <= ISO_LIMIT and is_isomorphic(g, ref)


def _d8_star_c4(g: Group):
    return () if g.order == 16 and _iso(g, "d8_star_c4", 5) else None


def _abelian_inverted(g: Group):
    for a in index2_subgroups(g):
        if not _is_subgroup_abelian(g, a):
            continue
        for t in range(g.order):
            if t in a or g.mul(t, t) != 0:
                continue
            if all(g.mul(g.mul(t, x), t) == g.inv(x) for x in a):
                return (len(a),)
    return None


def _c2n_by_c2(g: Group):
    if not _is_two_power(g.order) or g.order < 8:
        return None
    for e in index2_subgroups(g):
        if all(g.mul(x, x) == 0 for x in e):
            if any(t not in e and g.mul(t, t) == 0 for t in range(g.order)):
                return (_log2(len(e)),)
    return None


def _c2even_by_c3(g: Group):
    k = g.order // 3
    if g.order % 3 or not _is_two_power(k) or k < 4 or _log2(k) % 2:
        return None
    e = [x for x in range(g.order) if g.mul(x, x) == 0]
    if len(e) != k or len(g.closure_ids(e)) != k:
        return None
    for c in range(g.order):
        if g.element_orders[c] == 3:
            ci = g.inv(c)
            if all(g.mul(g.mul(c, x), ci) != x for x in e if x != 0):
                return (_log2(k),)
    return None


def _central_product_family(g: Group):
    if not _is_two_power(g.order) or not 8 <= g.order <= ISO_LIMIT:
        return None
    k = _log2(g.order)
    # (D_8 factors, log2 of the extraspecial part, reference builder); matrix dim is 2*copies + extra
    for copies, base, name in ((1, 3, "d8_times_c2n_reference"), (2, 5, "d8_central_squared_times_c2n_reference")):
        extra = k - base
        if 0 <= extra and 2 * copies + extra <= 6 and _iso(g, name, extra):
            return (copies, extra)
    return None


def _exponent3(g: Group):
    return () if g.order > 1 and exponent(g) == 3 else None


def _d8_squared(g: Group):
    return (0,) if g.order == 64 and _iso(g, "d8_squared_reference") else None


def _s3_d8(g: Group):
    return (0,) if g.order == 48 and _iso(g, "s3_times_d8_reference") else None


def _small_sporadic(g: Group):
    refs = {36: ("s3_squared_reference", "S3^2"), 24: ("symmetric_reference", "S4"), 60: ("alternating5_reference", "A5")}
    if g.order not in refs:
        return None
    name, label = refs[g.order]
    args = (4,) if g.order == 24 else ()
    return (label,) if _iso(g, name, *args) else None


_TESTS = {
    "Dihedral": _dihedral,
    "D8starC4": _d8_star_c4,
    "AbelianInvertedByC2": _abelian_inverted,
    "C2nByC2": _c2n_by_c2,
    "C2evenByC3": _c2even_by_c3,
    "CentralProductD8family": _central_product_family,
    "Exponent3": _exponent3,
    "D8squaredTimesC2n": _d8_squared,
    "S3xD8xC2n": _s3_d8,
    "S3sq_S4_A5": _small_sporadic,
}


def recognize_shape(g: Group) -> ShapeTag:
    if g.order > SHAPE_LIMIT:
        raise ValueError(f"shape recognition is limited to order {SHAPE_LIMIT}")
    hits = []
    for name, case in ORDER:
        params = _TESTS[name](g)
        if params is not None:
            hits.append((name, case, params))
    if not hits:
        return NONE
    name, _, params = hits[0]
    return ShapeTag(name, params, tuple(c for _, c, _ in hits if c), tuple(h[0] for h in hits))
