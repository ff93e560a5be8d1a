"""Dihedral field action for every odd prime up to a cap: order, verdict, orbit profile."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from regorb.gfp import is_prime
from regorb.verifier import CONVERSE_MAX_P, verify_converse


@dataclass
class SweepConfig:
    max_p: int = CONVERSE_MAX_P
    out: Path | None = None


def main(cfg: SweepConfig) -> int:
    rows = ["p,order,verdict,max_orbit,minimal_subgroups,frobenius_fixes_orbits,ok"]
    ok = True
    for p in range(3, cfg.max_p + 1):
        if not is_prime(p):
            continue
        r = verify_converse(p)
        ok &= r["ok"]
        rows.append(f"{p},{r['order']},{r['verdict']},{r['max_orbit']},{r['minimal_subgroups']},"
                    f"{r['frobenius_fixes_orbits']},{r['ok']}")
    text = "\n".join(rows) + "\n"
    if cfg.out:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.write_text(text)
    print(text, end="")
    return 0 if ok else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-p", type=int, default=SweepConfig.max_p)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    raise SystemExit(main(SweepConfig(args.max_p, args.out)))
