#!/usr/bin/env python3
"""Probe nonabelian nilpotent algebras for Weyl-Einstein structures.

None should admit one; the interesting output is the infimum of the residual
over an escalating number of solver starts.  A floor that stays put as the
start count grows is numerical evidence that the equation really has no
solution, rather than the solver missing one.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from lieweyl import samples, weyl


def models(max_extra):
    for extra in range(max_extra + 1):
        yield f"heisenberg+{extra}", samples.heisenberg(extra=extra)
    yield "filiform4", samples.filiform4()
    yield "free 2-step (3 gen)", samples.free_two_step()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ladder", type=int, nargs="+", default=[50, 200, 800])
    parser.add_argument("--seed", type=int, default=weyl.DEFAULT_SEED)
    parser.add_argument("--max-extra", type=int, default=2,
                        help="largest abelian factor glued onto the Heisenberg algebra")
    args = parser.parse_args(argv)

    width = max(len(name) for name, _ in models(args.max_extra))
    header = " ".join(f"{f'starts={s}':>14s}" for s in args.ladder)
    print(f"{'model':{width}s} dim {header}   roots")
    failures = 0
    begin = time.perf_counter()
    for name, m in models(args.max_extra):
        infima = []
        root_count = None
        for starts in args.ladder:
            result = weyl.solve_lee_forms(m, starts=starts, seed=args.seed)
            infima.append(result.infimum)
            root_count = len(result.roots)
            if root_count:
                failures += 1
                break
        cells = " ".join(f"{v:14.6f}" for v in infima)
        print(f"{name:{width}s} {m.dim:3d} {cells}   {root_count}")
        spread = max(infima) - min(infima)
        if spread > 1e-6 * (1.0 + max(infima)):
            print(f"{'':{width}s}     warning: infimum drifted by {spread:.2e} across the ladder")
    print(f"\n{time.perf_counter() - begin:.1f}s total")
    if failures:
        print(f"unexpected: {failures} model(s) produced a root")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
