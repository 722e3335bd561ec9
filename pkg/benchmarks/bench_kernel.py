#!/usr/bin/env python3
"""Compare the pure-Python and compiled kernels on the brute-force hot loops.

Advances the level tables of a bundled automaton to a given depth with both
backends, timing the two kernel entry points (table advancement and
union-find labelling) and checking that the outputs agree bit for bit.

    python3 benchmarks/bench_kernel.py --automaton seven_states --max-level 8
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mealyorbits import fixtures
from mealyorbits.automaton import union_with_inverse
from mealyorbits.kernel import pykernel

try:
    from mealyorbits.kernel import _ckernel
except ImportError:
    _ckernel = None


def tables(a):
    m = union_with_inverse(a)
    out = np.array(m.out, dtype=np.int64)
    nxt = np.array(m.nxt, dtype=np.int64)
    trivial = m.state_index(m.trivial_name)
    img = np.zeros((len(m.states), 1), dtype=np.int64)
    sec = np.arange(len(m.states), dtype=np.int64)[:, None]
    return out, nxt, img, sec, trivial


def run(impl, out, nxt, img, sec, trivial, max_level):
    t_adv = t_uni = 0.0
    roots = None
    for _ in range(max_level):
        t0 = time.perf_counter()
        img, sec = impl.advance_action(out, nxt, img, sec)
        t_adv += time.perf_counter() - t0
        img = np.ascontiguousarray(img)
        sec = np.ascontiguousarray(sec)
        mask = (np.asarray(sec) == trivial).astype(np.uint8)
        t0 = time.perf_counter()
        roots = impl.union_roots(img, mask)
        t_uni += time.perf_counter() - t0
    return t_adv, t_uni, np.asarray(img), np.asarray(roots)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--automaton", default="seven_states",
                    help="bundled automaton name (default: seven_states)")
    ap.add_argument("--max-level", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    a = fixtures.load(args.automaton)
    out, nxt, img0, sec0, trivial, = tables(a)
    k = out.shape[1]
    n_words = k ** args.max_level
    print(f"{args.automaton}: {len(a.states)} states, alphabet {k}, "
          f"levels 1..{args.max_level} ({n_words} words at the bottom)")

    backends = [("python", pykernel)]
    if _ckernel is not None:
        backends.append(("c", _ckernel))
    else:
        print("compiled kernel not built; timing the pure backend only")

    results = {}
    for name, impl in backends:
        best = None
        for _ in range(args.repeat):
            t_adv, t_uni, img, roots = run(impl, out, nxt, img0, sec0,
                                           trivial, args.max_level)
            if best is None or t_adv + t_uni < best[0] + best[1]:
                best = (t_adv, t_uni, img, roots)
        results[name] = best
        print(f"  {name:>7}: advance {best[0] * 1e3:8.2f} ms   "
              f"union {best[1] * 1e3:8.2f} ms")

    if len(results) == 2:
        py, cc = results["python"], results["c"]
        same = np.array_equal(py[2], cc[2]) and np.array_equal(py[3], cc[3])
        print(f"  outputs identical: {same}")
        total_py, total_c = py[0] + py[1], cc[0] + cc[1]
        if total_c > 0:
            print(f"  speedup: {total_py / total_c:.1f}x")
        if not same:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
