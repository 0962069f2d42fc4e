"""Compare the compiled and pure-Python graph kernels.

    python3 benchmarks/bench_kernels.py [--terminals 400] [--repeat 5]

Builds one large random constituency-like DAG (plus a few back edges for
the cycle search) and times each kernel under both backends. Results are
checked for equality before timing.
"""
import argparse
import importlib
import random
import timeit

from tiger2 import kernels
from tiger2 import _pykernels


def build(terminals, seed):
    rng = random.Random(seed)
    edges = []
    frontier = list(range(terminals))
    nxt = terminals
    while len(frontier) > 1:
        grouped = []
        i = 0
        while i < len(frontier):
            width = rng.randint(1, 4)
            for child in frontier[i:i + width]:
                edges.append((nxt, child))
            if rng.random() < 0.05 and grouped:  # a crossing edge makes a gap
                edges.append((nxt, rng.choice(frontier[:i] or [frontier[0]])))
            grouped.append(nxt)
            nxt += 1
            i += width
        frontier = grouped
    n = nxt
    cyclic = edges + [(rng.randrange(terminals), rng.randrange(terminals, n)) for _ in range(5)]
    positions = kernels.array("q", [i + 1 if i < terminals else 0 for i in range(n)])
    return n, edges, cyclic, positions


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--terminals", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)

    backends = {"python": _pykernels}
    try:
        backends["cython"] = importlib.import_module("tiger2._ckernels")
    except ImportError:
        print("compiled kernels not built; timing the Python fallback only")

    n, dag, cyclic, positions = build(args.terminals, args.seed)
    indptr, indices = kernels.csr(n, dag)
    c_indptr, c_indices = kernels.csr(n, cyclic)
    root = n - 1
    jobs = {
        "reachable_positions": lambda m: m.reachable_positions(indptr, indices, positions, root),
        "discontinuous_nodes": lambda m: m.discontinuous_nodes(indptr, indices, positions),
        "find_cycles": lambda m: m.find_cycles(c_indptr, c_indices),
    }
    print(f"{n} nodes, {len(dag)} edges ({len(cyclic)} with back edges); best of {args.repeat}")
    print(f"{'kernel':<22}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, job in jobs.items():
        results = {b: job(m) for b, m in backends.items()}
        if len(set(map(repr, results.values()))) != 1:
            raise SystemExit(f"{name}: backends disagree")
        times = {b: min(timeit.repeat(lambda: job(m), number=1, repeat=args.repeat))
                 for b, m in backends.items()}
        row = f"{name:<22}" + "".join(f"{times[b] * 1000:>10.2f}ms" for b in backends)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
