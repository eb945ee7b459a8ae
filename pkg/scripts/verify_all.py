"""Run every cross-method verification through the command line entry point.

Usage: python3 scripts/verify_all.py
Prints one line per command with its exit code; exits 1 if any check failed.
"""

import io
import sys

from wallseries.cli import run

COMMANDS = [
    "verify jacobi --trunc 30",
    "verify ramanujan --trunc 10",
    *(f"verify triangle --p {p} --trunc 15" for p in (1, 2, 3)),
    *(f"verify fountains --p {p} --trunc 12" for p in (1, 2, 3, 4)),
    *(f"verify orbifold-a --kind A{n} --trunc 12" for n in (1, 2, 3)),
    *(f"verify coarse-a --kind A{n} --trunc 10" for n in (1, 2, 3)),
    *(f"verify frobenius --kind A{n} --trunc 8" for n in (1, 2)),
    "verify higher-rank --kind A2 --shifts 0,1 --trunc 8",
    "verify orbifold-d --kind D4 --trunc 12",
    "verify orbifold-d --kind D5 --trunc 10",
    "verify coarse-d --kind D4 --trunc 10",
    *(f"verify cyclic --p {p} --trunc 12" for p in (1, 2, 3)),
    *(f"verify conjectural-e --kind {k} --trunc 25" for k in ("E6", "E7", "E8")),
    "verify global --chi 2 --sing A1 D4 P3 --trunc 8",
]


def main():
    worst = 0
    for cmd in COMMANDS:
        buf = io.StringIO()
        code = run(cmd.split(), out=buf)
        worst = max(worst, code)
        print(f"[{code}] {cmd}")
        if code:
            print(buf.getvalue().rstrip())
    sys.exit(1 if worst else 0)


if __name__ == "__main__":
    main()
