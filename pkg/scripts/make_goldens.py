"""Record the type E substitution coefficients as golden files.

Usage: python3 scripts/make_goldens.py [--trunc 25]
Refuses to overwrite an existing file whose coefficients disagree.
"""

import argparse
import json
from pathlib import Path

from wallseries.lie import coarse_substitution

DATA = Path(__file__).resolve().parent.parent / "src" / "wallseries" / "data"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trunc", type=int, default=25)
    args = ap.parse_args()
    DATA.mkdir(exist_ok=True)
    for kind in ("E6", "E7", "E8"):
        coeffs = coarse_substitution(kind, args.trunc).coefficient_list()
        path = DATA / f"coarse_{kind}.json"
        if path.exists():
            old = json.loads(path.read_text())["coefficients"]
            k = min(len(old), len(coeffs))
            if old[:k] != coeffs[:k]:
                raise SystemExit(f"{kind}: recomputed coefficients differ from {path}")
        path.write_text(json.dumps({"kind": kind, "truncation": args.trunc, "coefficients": coeffs}) + "\n")
        print(kind, coeffs)


if __name__ == "__main__":
    main()
