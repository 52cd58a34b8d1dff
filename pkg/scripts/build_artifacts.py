#!/usr/bin/env python3
"""Build the canonical JSON artifact set.

One file per CLI surface, written through the real command handlers so
the artifacts are exactly what a user would get.  Running this twice
into two directories must produce byte-identical trees; the test suite
holds us to that.
"""

import argparse
import contextlib
import io
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cmtk.cli import main as cli_main

ARTIFACTS = [
    ("factor_q3.json", ["factor", "--q", "3", "--poly", "2*T^6+T^2+2*T"]),
    (
        "classgroup_q3_reps.json",
        ["classgroup", "--q", "3", "--m", "T^3+2*T+1", "--with-reps"],
    ),
    (
        "classgroup_q5_conductor.json",
        ["classgroup", "--q", "5", "--m", "T^3+T+1", "--f", "T"],
    ),
    ("catalogue_q3_B12.json", ["cm-enumerate", "--q", "3", "--bound", "12"]),
    (
        "orbit_q3_conductor_T.json",
        ["cm-orbit", "--q", "3", "--m", "T^3+2*T+1", "--f", "T", "--prime", "T+1"],
    ),
    (
        "tree_median.json",
        ["tree", "--op", "median", "--arity", "3", "--vertices", "0.1.0,0.0,1"],
    ),
    (
        "hecke_T2_covering.json",
        ["hecke", "--q", "3", "--level", "T^2", "--deg-y", "2", "--covering"],
    ),
    (
        "split_audit_q3_t4.json",
        ["split-count", "--q", "3", "--radicands", "T,T+1", "--t", "4"],
    ),
    (
        "certificate_point0.json",
        ["certify", "--q", "3", "--d", "1", "--bound", "4", "--point", "0"],
    ),
    (
        "height_bound_q3.json",
        ["minimal-B", "--q", "3", "--d", "1", "--grid", str(3**70)],
    ),
    (
        "heegner_tower_T.json",
        ["heegner", "--q", "3", "--level", "T", "--prime", "T+2", "--levels", "3"],
    ),
]


def build(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, argv in ARTIFACTS:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli_main(argv)
        if code != 0:
            raise SystemExit(f"artifact {name}: exit code {code}")
        (out / name).write_bytes(buf.getvalue().encode("ascii"))
        written.append(name)
    return written


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="artifacts", help="output directory")
    args = ap.parse_args()
    for name in build(args.out):
        print(f"wrote {args.out}/{name}")


if __name__ == "__main__":
    main()
