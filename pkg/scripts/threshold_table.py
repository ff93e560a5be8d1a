"""Minimal-subgroup counts against |G|/2 - 1 for the reference catalog, as CSV."""

from __future__ import annotations

from regorb.verifier import verify_classification_threshold


def main() -> int:
    rep = verify_classification_threshold()
    print("label,order,m,threshold,above,shape,cases")
    for r in rep["entries"]:
        print(f"{r['label']},{r['order']},{r['m']},{r['threshold']},{r['above_threshold']},"
              f"{r['shape']['tag']},{' '.join(r['shape']['cases'])}")
    return 0 if rep["ok"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
