"""End-to-end demo on the shipped butter suite: bench -> eval -> report.

Usage:  python scripts/run_butter_demo.py [output_dir]
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from procqa.cli import main  # noqa: E402
from procqa.fixtures.suite import shipped_suite_path  # noqa: E402


def run() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else REPO / "demo_out"
    suite = str(shipped_suite_path())
    for argv in (
        ["validate", suite],
        ["bench", suite, "--out", str(out), "--parallel", "4"],
        ["eval", str(out / "predictions.json"), suite, "--out", str(out / "scores.json")],
        ["report", str(out / "scores.json"), "--label", "fixture"],
    ):
        print(f"\n$ procqa {' '.join(argv)}")
        code = main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
