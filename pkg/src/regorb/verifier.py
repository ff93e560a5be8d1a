"""Exhaustive verification campaigns over coprime subgroups of GL(n, p).

Per subgroup, the census decides regular-orbit existence twice (stabilizer
scan on the ambient action table, and the union of prime-order fixed spaces
computed by kernels) and audits the structural facts that must hold for
every finite group along the way.  Any disagreement raises
:class:`~regorb.action.CrossCheckError`.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import constructions as cons
from .action import (
    CrossCheckError,
    check_orbit_stabilizer,
    inclusion_exclusion_bound,
    orbits,
    permutation,
    regular_orbit_certificate,
    sum_bound_report,
)
from .ambient import GeneralLinear, Universe, enumerate_by_extension
from .gfp import fmul, frobenius, is_prime, make_field
from .group import Group, close, fingerprint, is_isomorphic, minimal_subgroups
from .linalg import Matrix, full_bitset, kernel, subspace_bitset
from .shapes import recognize_shape

log = logging.getLogger(__name__)

SUPPORTED = ((2, 3), (2, 5), (2, 7), (2, 11), (2, 13), (3, 2), (3, 3))
CONVERSE_MAX_P = 61


def theorem_bound(p: int) -> int:
    return 2 * p + 9


@lru_cache(maxsize=None)
def ambient(n: int, p: int) -> GeneralLinear:
    return GeneralLinear(n, p)


@lru_cache(maxsize=None)
def universe_for(n: int, p: int, bound: int) -> Universe:
    return enumerate_by_extension(ambient(n, p), bound)


def enumerate_coprime_subgroups(n: int, p: int, bound: int | None = None) -> Universe:
    if (n, p) not in SUPPORTED:
        raise ValueError(f"GL({n},{p}) is not in the supported set {SUPPORTED}")
    bound = theorem_bound(p) if bound is None else bound
    if bound > theorem_bound(p):
        raise ValueError(f"bound {bound} exceeds 2p + 9 = {theorem_bound(p)}")
    return universe_for(n, p, bound)


# --- census ----------------------------------------------------------------


@dataclass
class GroupRecord:
    index: int
    order: int
    m: int
    has_regular: bool
    witness: int | None


class _Census:
    """Vectorized regular-orbit decisions and invariant audits over a universe."""

    def __init__(self, gl: GeneralLinear):
        self.gl = gl
        self.points = np.arange(gl.npoints)
        self.full = full_bitset(gl.p, gl.n)
        self.prime_order = np.array([is_prime(int(k)) for k in gl.order])
        self._key = np.full(gl.size, -1, dtype=np.int64)
        self._fixbits: dict[int, int] = {}
        self.checks = {"cross_checks": 0, "orbit_stabilizer_vectors": 0,
                       "frobenius_congruence": 0, "odd_order_bound": 0, "sum_bound": 0}

    def cyclic_key(self, ids: np.ndarray) -> np.ndarray:
        """Smallest id in <g>, for elements of prime order: one key per subgroup."""
        for g in ids[self._key[ids] < 0]:
            c = self.gl.cyclic(int(g))
            self._key[g] = c[c != self.gl.identity].min()
        return self._key[ids]

    def fixbits(self, key: int) -> int:
        if key not in self._fixbits:
            x = self.gl.matrix(key)
            self._fixbits[key] = subspace_bitset(kernel(x - Matrix.identity(x.p, x.n)))
        return self._fixbits[key]

    def run(self, index: int, H: np.ndarray) -> GroupRecord:
        gl, h = self.gl, len(H)
        nonid = H[H != gl.identity]
        fixed = gl.act[nonid] == self.points
        stab = 1 + fixed.sum(0)
        direct = bool((stab == 1).any())

        orb = np.sort(gl.act[H], axis=0)
        orbit_sizes = 1 + (np.diff(orb, axis=0) != 0).sum(0)
        if not np.all(orbit_sizes * stab == h):
            raise CrossCheckError(f"orbit-stabilizer law fails in subgroup {index}")
        self.checks["orbit_stabilizer_vectors"] += gl.npoints

        prime_elts = nonid[self.prime_order[nonid]]
        keys = np.unique(self.cyclic_key(prime_elts))
        m = len(keys)
        union = 0
        for k in keys:
            union |= self.fixbits(int(k))
        cover = union != self.full
        if cover != direct:
            raise CrossCheckError(f"direct and covering tests disagree on subgroup {index} of GL({gl.n},{gl.p})")
        self.checks["cross_checks"] += 1
        witness = int(np.argmax(stab == 1)) if direct else None
        if direct:
            missing = self.full & ~union
            if (missing & -missing).bit_length() - 1 != witness:
                raise CrossCheckError(f"least regular vector differs between methods in subgroup {index}")

        key_orders = gl.order[keys]
        for r in {int(x) for x in key_orders}:
            if int((key_orders == r).sum()) % r != 1:
                raise CrossCheckError(f"prime-order subgroup count not 1 mod {r} in subgroup {index}")
        for r in range(2, h + 1):
            if h % r == 0 and is_prime(r) and r not in set(key_orders.tolist()):
                raise CrossCheckError(f"no subgroup of order {r} dividing |G| in subgroup {index}")
        self.checks["frobenius_congruence"] += 1
        if h % 2 == 1:
            if 2 * m > h - 1:
                raise CrossCheckError(f"odd-order group {index} has too many minimal subgroups")
            self.checks["odd_order_bound"] += 1
        if not direct:
            if gl.p > m - 1:
                raise CrossCheckError(f"no-regular-orbit subgroup {index} violates p <= m - 1")
            self.checks["sum_bound"] += 1
        return GroupRecord(index, h, m, direct, witness)


def census(u: Universe) -> tuple[list[GroupRecord], dict]:
    c = _Census(u.ambient)
    records = [c.run(i, H) for i, H in enumerate(u.groups)]
    return records, c.checks


def as_group(u: Universe, index: int) -> Group:
    gl = u.ambient
    g = close(gl.p, gl.n, [gl.matrix(i) for i in u.gens[index]])
    if g.order != len(u.groups[index]):
        raise CrossCheckError("re-closing a universe subgroup changed its order")
    return g


def no_regular_orbit_groups(n: int, p: int, bound: int) -> list[Group]:
    u = universe_for(n, p, bound)
    records, _ = census(u)
    return [as_group(u, r.index) for r in records if not r.has_regular]


# --- main theorem ----------------------------------------------------------


@dataclass
class VerificationReport:
    n: int
    p: int
    bound: int
    group_count: int
    counts_by_order: dict[int, int]
    exceptions: list[dict]
    checks: dict
    theorem_holds: bool
    elapsed_ms: int | None = field(default=None)

    def exception_summary(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.exceptions:
            out[e["isomorphic_to"]] = out.get(e["isomorphic_to"], 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        d = {
            "n": self.n,
            "p": self.p,
            "bound": self.bound,
            "group_count": self.group_count,
            "counts_by_order": {str(k): v for k, v in self.counts_by_order.items()},
            "exception_summary": self.exception_summary(),
            "exceptions": self.exceptions,
            "checks": self.checks,
            "theorem_holds": self.theorem_holds,
        }
        if self.elapsed_ms is not None:
            d["elapsed_ms"] = self.elapsed_ms
        return d


def _allowed_exceptions(p: int) -> list[tuple[str, Group]]:
    out = [(f"D_{2 * p + 2}", cons.dihedral_reference(2 * p + 2))]
    if p == 5:
        out.append(("D8*C4", cons.d8_star_c4(5)))
    return out


def verify_main_theorem(n: int, p: int, bound: int | None = None, timing: bool = False) -> VerificationReport:
    """Every coprime subgroup of order <= 2p+9 without a regular orbit must be one of the exceptions."""
    t0 = time.perf_counter()
    u = enumerate_coprime_subgroups(n, p, bound)
    records, checks = census(u)
    allowed = _allowed_exceptions(p)
    exceptions = []
    holds = True
    for r in records:
        if r.has_regular:
            continue
        g = as_group(u, r.index)
        cert = regular_orbit_certificate(g)
        if cert.has_regular:
            raise CrossCheckError(f"census and group-level certificate disagree on subgroup {r.index}")
        match = next((label for label, ref in allowed if ref.order == g.order and is_isomorphic(g, ref)), None)
        if match is None:
            holds = False
            log.error("unexpected group without a regular orbit: %s", g.export())
        bound_rep = sum_bound_report(g)
        exceptions.append({
            "order": g.order,
            "shape": str(recognize_shape(g)),
            "isomorphic_to": match or "UNEXPECTED",
            "m": bound_rep.m,
            "fixed_dims": list(inclusion_exclusion_bound(g).dims),
            "generators": [m.to_json() for m in g.generators],
        })
    elapsed = round((time.perf_counter() - t0) * 1000)
    log.info("GL(%d,%d) bound %d: %d groups, %d exceptions, %d ms", n, p, u.bound, len(u), len(exceptions), elapsed)
    return VerificationReport(n, p, u.bound, len(u), u.counts_by_order(), exceptions, checks, holds,
                              elapsed if timing else None)


# --- converse construction -------------------------------------------------


def frobenius_fixes_orbits(p: int) -> bool:
    """For every nonzero x in F_{p^2}, x^p lies in the orbit of x under the order-(p+1) subgroup."""
    f = make_field(p, 2)
    h = [f.power_of_gamma((p - 1) * k) for k in range(p + 1)]
    for x in f.elements()[1:]:
        if frobenius(f, x) not in {fmul(f, y, x) for y in h}:
            return False
    return True


def verify_converse(p: int) -> dict:
    if p == 2 or not is_prime(p) or p > CONVERSE_MAX_P:
        raise ValueError(f"need an odd prime <= {CONVERSE_MAX_P}")
    g = cons.dihedral_field_action(p)
    perms = [permutation(m) for m in g.elements]
    identity = np.arange(p * p)
    faithful = len({pm.tobytes() for pm in perms}) == g.order and all((pm != identity).any() for pm in perms[1:])
    cert = regular_orbit_certificate(g)
    part = orbits(g)
    check_orbit_stabilizer(g, part)
    iso = None
    if 2 * p + 2 <= 64:
        iso = is_isomorphic(g, cons.dihedral_reference(2 * p + 2))
    fixes = frobenius_fixes_orbits(p)
    ok = (g.order == 2 * p + 2 and faithful and not cert.has_regular and part.max_size == p + 1
          and fixes and iso is not False)
    return {
        "p": p,
        "order": g.order,
        "points": p * p,
        "faithful": faithful,
        "verdict": cert.verdict,
        "max_orbit": part.max_size,
        "orbit_sizes": {str(s): c for s, c in part.size_counts()},
        "minimal_subgroups": len(minimal_subgroups(g)),
        "frobenius_fixes_orbits": fixes,
        "isomorphic_to_dihedral": iso,
        "generators": [m.to_json() for m in g.generators],
        "ok": ok,
    }


# --- minimal-subgroup threshold --------------------------------------------


def verify_classification_threshold(catalog=None) -> dict:
    catalog = cons.reference_groups() if catalog is None else catalog
    rows = []
    for e in catalog:
        g = e.group
        m = len(minimal_subgroups(g))
        threshold = Fraction(g.order, 2) - 1
        above = m > threshold
        tag = recognize_shape(g)
        if e.positive:
            ok = above and tag.name != "None" and bool(tag.cases)
        else:
            ok = not above
        rows.append({"label": e.label, "order": g.order, "m": m, "threshold": str(threshold),
                     "above_threshold": above, "expected_positive": e.positive,
                     "shape": tag.to_json(), "ok": ok})
    return {"entries": rows, "ok": all(r["ok"] for r in rows)}


# --- named counterexamples ---------------------------------------------------


def _order24_hits() -> tuple[Universe, list[GroupRecord]]:
    u = universe_for(2, 7, 24)
    records, _ = census(u)
    return u, [r for r in records if r.order == 24 and not r.has_regular]


def find_order24_counterexample() -> Group:
    """First order-24 subgroup of GL(2,7) (by id order) without a regular orbit."""
    u, hits = _order24_hits()
    if not hits:
        raise AssertionError("no order-24 subgroup of GL(2,7) without a regular orbit")
    g = as_group(u, hits[0].index)
    if regular_orbit_certificate(g).has_regular:
        raise CrossCheckError("order-24 counterexample failed its certificate")
    return g


def order24_report() -> dict:
    g = find_order24_counterexample()
    u, hits = _order24_hits()
    classes: list[Group] = []
    for r in hits:
        h = as_group(u, r.index)
        if not any(is_isomorphic(h, c) for c in classes):
            classes.append(h)
    return {
        "order": g.order,
        "n": 2,
        "p": 7,
        "verdict": "none",
        "outside_theorem_bound": g.order > theorem_bound(7),
        "isomorphic_to_S4": is_isomorphic(g, cons.symmetric_reference(4)),
        "fingerprint": fingerprint(g).to_json(),
        "shape": str(recognize_shape(g)),
        "generators": [m.to_json() for m in g.generators],
        "copies_found": len(hits),
        "isomorphism_classes": [fingerprint(c).to_json() for c in classes],
    }
