#!/usr/bin/env python3
"""Writes small QAPLIB-format instances whose optimum is found by exhaustive
search. Usage: make_synthetic_qap.py OUTDIR"""
import itertools
import sys
from pathlib import Path

import numpy as np


def solve(a, b):
    n = a.shape[0]
    best, best_perm = None, None
    for perm in itertools.permutations(range(n)):
        p = np.array(perm)
        v = int((a * b[p][:, p]).sum())
        if best is None or v < best:
            best, best_perm = v, p
    return best, best_perm


def write(outdir, name, a, b):
    n = a.shape[0]
    best, perm = solve(a, b)
    rows = lambda m: "\n".join(" ".join(str(int(x)) for x in r) for r in m)
    (outdir / f"{name}.dat").write_text(f"{n}\n\n{rows(a)}\n\n{rows(b)}\n")
    (outdir / f"{name}.sln").write_text(
        f"{n} {best}\n" + " ".join(str(i + 1) for i in perm) + "\n")
    print(name, n, best)


def main():
    outdir = Path(sys.argv[1])
    rng = np.random.default_rng(20240601)

    # Manhattan distances on a 3 x 3 grid against random symmetric flows.
    pts = [(r, c) for r in range(3) for c in range(3)]
    dist = np.array([[abs(p[0] - q[0]) + abs(p[1] - q[1]) for q in pts] for p in pts])
    flow = rng.integers(0, 10, size=(9, 9))
    flow = np.triu(flow, 1)
    flow = flow + flow.T
    write(outdir, "synth_grid9", flow, dist)

    # Asymmetric integer matrices.
    a = rng.integers(0, 20, size=(8, 8))
    b = rng.integers(0, 20, size=(8, 8))
    np.fill_diagonal(a, 0)
    np.fill_diagonal(b, 0)
    write(outdir, "synth_rand8", a, b)


if __name__ == "__main__":
    main()
