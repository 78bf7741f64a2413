"""Compare the numba and pure-numpy tower kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--family A|B|C|D]

For each backend this times (a) raw tower products, (b) Galois conjugation
and (c) a full scaffold verification, after one warm-up pass so numba
compilation is excluded.  The results of both backends are also compared
for exact equality.
"""

import argparse
import statistics
import time

from scaffoldlab import _kernels
from scaffoldlab.ramification import compute_breaks, decompose
from scaffoldlab.scaffold import ScaffoldBuilder
from scaffoldlab.series import parse_series
from scaffoldlab.tower import Tower

FAMILIES = {
    "A": (2, ["t^-1", "t^-3"]),
    "B": (2, ["t^-3", "t^-9"]),
    "C": (3, ["t^-1", "t^-4"]),
    "D": (2, ["t^-1", "t^-5", "t^-13"]),
}


def build(name):
    p, src = FAMILIES[name]
    beta = [parse_series(s, p) for s in src]
    tower = Tower(p, beta)
    return tower, ScaffoldBuilder(tower, decompose(beta, p), compute_breaks(beta, p))


def workloads(name):
    def products():
        tower, sb = build(name)
        e = sb.Y
        acc = tower.one()
        for _ in range(40):
            acc = acc * e + tower.x(0)
        return acc

    def conjugates():
        tower, sb = build(name)
        e = sb.lam(1) * sb.Y
        return [tower.apply_sigma(e, k) for k in range(tower.R)]

    def verify():
        _, sb = build(name)
        return sb.verify().valid

    return {"products": products, "conjugates": conjugates, "verify": verify}


def timed(fn, repeat):
    fn()  # warm-up (includes JIT compilation for numba)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--family", default="D", choices=sorted(FAMILIES))
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    results = {}
    for bk in backends:
        _kernels.set_backend(bk)
        for label, fn in workloads(args.family).items():
            results[bk, label] = timed(fn, args.repeat)

    print(f"family {args.family}, median of {args.repeat} runs")
    print(f"{'workload':<12}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for label in workloads(args.family):
        row = f"{label:<12}" + "".join(f"{results[b, label][0] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{results['numpy', label][0] / results['numba', label][0]:>11.1f}x"
            a, b = results["numpy", label][1], results["numba", label][1]
            same = a == b
            row += "" if same else "   MISMATCH"
        print(row)


if __name__ == "__main__":
    main()
