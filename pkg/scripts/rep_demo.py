"""Load a representation manifest and print its traces and operator checks.

    python3 scripts/rep_demo.py data/rep_small.json
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from wfcalc.superconn import block_heat_trace, l_operators, load_rep, partition_trace

DEFAULT = Path(__file__).resolve().parent.parent / "data" / "rep_small.json"


def main(path: Path) -> None:
    rep = load_rep(json.loads(path.read_text()))
    print(f"{path.name}: weights {list(rep.blocks)}, {rep.sig.coords} coordinates")
    for k, A in rep.blocks.items():
        print(f"  k={k}  sTr exp(-A(t)^2) = {block_heat_trace(A)}")
    print(f"partition trace: {partition_trace(rep)}")
    try:
        print(f"L-operator checks: {l_operators(rep).checks()}")
    except ValueError as exc:
        print(f"L-operator checks skipped: {exc}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT)
