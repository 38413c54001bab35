"""Scan orders of E2 multiples in C((q)) / (c Z((q)) + MF_2).

    python3 scripts/scan_class_orders.py --lattice-scale 2 --pole 2 --order 50
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from wfcalc.modforms import QuotientClass, class_order
from wfcalc.qseries import eisenstein_q


@dataclass
class ScanConfig:
    lattice_scale: int = 2
    pole: int = 2
    order: int = 50
    max_d: int = 100
    divisors: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 6, 8, 12, 24, 48])


def scan(cfg: ScanConfig) -> list[dict]:
    e2 = eisenstein_q(2, cfg.order)
    rows = []
    for m in cfg.divisors:
        t = time.perf_counter()
        x = QuotientClass(e2.scale(Fraction(1, m)), 2, cfg.lattice_scale, cfg.pole, cfg.order)
        res = class_order(x, cfg.max_d).to_json()
        rows.append({"representative": f"E2/{m}", **res, "seconds": round(time.perf_counter() - t, 3)})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f, v in asdict(ScanConfig()).items():
        if not isinstance(v, list):
            ap.add_argument("--" + f.replace("_", "-"), type=int, default=v)
    ap.add_argument("--json", action="store_true")
    args = vars(ap.parse_args())
    as_json = args.pop("json")
    rows = scan(ScanConfig(**args))
    if as_json:
        print(json.dumps(rows, indent=1))
        return
    for r in rows:
        order = r["order"] if r["order"] is not None else f"none up to {r['none_up_to']}"
        print(f"{r['representative']:>6}  order {order}  (P={r['P']}, N={r['N']}, {r['seconds']}s)")


if __name__ == "__main__":
    main()
