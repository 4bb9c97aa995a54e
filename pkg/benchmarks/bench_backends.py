"""Time the compiled kernel against the numpy fallback.

    python benchmarks/bench_backends.py [--repeat 20] [--threads 1,2,4]

Each case scores one GWO-sized population (10 genomes) on a training split
of 1553 rows, the shape of one optimizer iteration.
"""
import argparse
import timeit

import numpy as np

from platefault import _pure
from platefault.network import TopologySpec, param_count

try:
    from platefault import _core
except ImportError:  # extension not built
    _core = None

CASES = [
    ("MLP 27-55-1", TopologySpec.for_inputs(27)),
    ("CMLP 27-55-1", TopologySpec.for_inputs(27, cascade=True)),
    ("MLP 33-67-1", TopologySpec.for_inputs(33)),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=1553)
    ap.add_argument("--agents", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--threads", default="1,4")
    args = ap.parse_args(argv)
    threads = [int(t) for t in args.threads.split(",")]
    rng = np.random.default_rng(0)
    print(f"population_mse, {args.agents} genomes x {args.rows} rows, best of {args.repeat} (ms)")
    head = f"{'case':<14}{'numpy':>10}" + "".join(f"{'cython/' + str(t):>12}" for t in threads)
    print(head + f"{'speedup':>10}{'max rel diff':>14}")
    for name, spec in CASES:
        X = rng.random((args.rows, spec.inputs))
        Y = rng.choice([1.0, 2.0], (args.rows, 1))
        P = rng.uniform(-10, 10, (args.agents, param_count(spec)))
        run = lambda k, t=1: k.population_mse(X, Y, P, spec.hidden, 1, spec.cascade, t)
        ref = run(_pure)
        t_np = min(timeit.repeat(lambda: run(_pure), number=1, repeat=args.repeat)) * 1e3
        row = f"{name:<14}{t_np:>10.2f}"
        if _core is None:
            print(row + "  (compiled kernel not available)")
            continue
        times = []
        for t in threads:
            times.append(min(timeit.repeat(lambda: run(_core, t), number=1, repeat=args.repeat)) * 1e3)
            row += f"{times[-1]:>12.2f}"
        diff = np.max(np.abs(run(_core) - ref) / np.abs(ref))
        print(row + f"{t_np / times[0]:>9.2f}x{diff:>14.1e}")


if __name__ == "__main__":
    main()
