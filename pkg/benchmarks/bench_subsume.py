"""Time the compiled subsumption kernel against the pure-Python one.

    python3 benchmarks/bench_subsume.py [--events 6] [--pairs 3000]

Both kernels get the same (source, target) encodings taken from random
series-parallel pomsets; the answers are compared before timing.
"""

import argparse
import random
import sys
import timeit

from ckaclose import _pysubsume
from ckaclose.pomsets import KERNEL, Prim, par_compose, seq_compose


def random_pomset(rng, n, alphabet="abc"):
    if n == 1:
        return Prim(rng.choice(alphabet))
    k = rng.randint(1, n - 1)
    op = seq_compose if rng.random() < 0.5 else par_compose
    return op(random_pomset(rng, k, alphabet), random_pomset(rng, n - k, alphabet))


def workload(events, pairs, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < pairs:
        # share a label multiset so the search does real work
        v = random_pomset(rng, events, "ab")
        u = random_pomset(rng, events, "ab")
        if u.labels != v.labels:
            continue
        out.append(v.encoding() + u.encoding())
    return out


def run(kernel, cases):
    return [kernel(sl, sp, dl, dp) is not None for sl, sp, dl, dp in cases]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--events", type=int, default=6)
    ap.add_argument("--pairs", type=int, default=3000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        from ckaclose import _csubsume
    except ImportError:
        print("compiled kernel not built; only the Python kernel is available", file=sys.stderr)
        return 1

    cases = workload(args.events, args.pairs, args.seed)
    py, cy = _pysubsume.find_subsumption, _csubsume.find_subsumption
    if run(py, cases) != run(cy, cases):
        print("kernels disagree", file=sys.stderr)
        return 1
    hits = sum(run(cy, cases))
    print(f"default kernel: {KERNEL}; {len(cases)} pairs of {args.events} events, {hits} subsumptions")
    best = {}
    for name, fn in (("python", py), ("cython", cy)):
        best[name] = min(timeit.repeat(lambda: run(fn, cases), number=1, repeat=args.repeat))
        print(f"{name:>7}: {best[name] * 1e6 / len(cases):8.2f} us/pair")
    print(f"speedup: {best['python'] / best['cython']:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
