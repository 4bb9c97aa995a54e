"""Command-line entry point: ``platefault {train,paper,bench,eval}``."""
from __future__ import annotations

import argparse
import dataclasses
import statistics
import sys

from . import dataset as ds
from . import network as nn
from ._backend import BACKEND
from .harness import (STANDARD_MODELS, ConfigError, ExperimentConfig, _Parser,
                      add_config_arguments, config_from_namespace, evaluate_model, run_experiment)
from .optimizers import Algorithm, OptimizerRunConfig, benchmark_suite, optimize, random_search
from .reports import ALL_FORMATS, render_text


def _formats(text: str) -> tuple[str, ...]:
    if text.strip().lower() in ("", "none"):
        return ()
    fmts = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in fmts if f not in ALL_FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s) {bad}; choose from {', '.join(ALL_FORMATS)}")
    return fmts


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="platefault", description="Swarm-trained MLP classifiers for steel plate faults.",
                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 (kernel: {BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train and score one model")
    add_config_arguments(p)
    p.add_argument("--formats", type=_formats, default=ALL_FORMATS,
                   help=f"comma-separated outputs from {','.join(ALL_FORMATS)}, or 'none'")

    p = sub.add_parser("paper", help="train all five models (GWO/MGWO/FDO x MLP/CMLP)")
    add_config_arguments(p, include=tuple(n for n in ExperimentConfig.__dataclass_fields__
                                          if n not in ("algorithm", "model")))
    p.add_argument("--formats", type=_formats, default=ALL_FORMATS)

    p = sub.add_parser("bench", help="optimizer benchmark suite vs random search")
    p.add_argument("--dim", type=int, default=10)
    p.add_argument("--agents", type=int, default=30)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--functions", default="sphere,rosenbrock,rastrigin,ackley")
    p.add_argument("--algorithms", default="gwo,mgwo,fdo")

    p = sub.add_parser("eval", help="re-score a saved model on a split manifest")
    p.add_argument("model_file")
    p.add_argument("--data", required=True, dest="data_path")
    p.add_argument("--manifest", required=True)
    p.add_argument("--delimiter", default=None)
    p.add_argument("--preprocess", choices=[m.value for m in ds.PreprocessMode], default="minmax")
    p.add_argument("--feature-set", choices=[m.value for m in ds.FeatureSet], default="base27")
    return parser


def _run(ns, models=None) -> int:
    config = config_from_namespace(ns)
    if not config.output_dir:
        config = dataclasses.replace(config, output_dir="runs")
    report = run_experiment(config, formats=ns.formats, models=models)
    print(render_text(report))
    if ns.formats:
        print(f"outputs written to {config.output_dir}")
    return 0


def _bench(ns) -> int:
    suite = {b.name: b for b in benchmark_suite(ns.dim)}
    names = [n.strip() for n in ns.functions.split(",") if n.strip()]
    algs = [Algorithm(a.strip()) for a in ns.algorithms.split(",") if a.strip()]
    budget = ns.agents * (ns.max_iter + 1)
    print(f"dim={ns.dim} agents={ns.agents} iterations={ns.max_iter} seeds={ns.seeds} budget={budget}")
    print(f"{'function':<12}{'algorithm':<10}{'median best':>16}{'random search':>16}{'ratio':>12}")
    for name in names:
        fn = suite[name]
        rs = statistics.median(random_search(fn, fn.space(), budget, s).best_fitness for s in range(ns.seeds))
        for alg in algs:
            best = statistics.median(
                optimize(fn, fn.space(), OptimizerRunConfig(alg, ns.agents, ns.max_iter, s)).best_fitness
                for s in range(ns.seeds))
            ratio = rs / best if best > 0 else float("inf")
            print(f"{name:<12}{alg.name:<10}{best:>16.4e}{rs:>16.4e}{ratio:>12.3g}")
    return 0


def _eval(ns) -> int:
    spec, params = nn.load_model(ns.model_file)
    samples = ds.preprocess(ds.binarize(ds.load_raw(ns.data_path, ns.delimiter)), ns.preprocess, ns.feature_set)
    split = ds.apply_manifest(samples, ds.read_manifest(ns.manifest))
    train, test, metrics, _ = evaluate_model(spec, params, split)
    for p in (train, test):
        print(f"{p.phase:<6} pos {p.pos_correct}/{p.pos_cases}  neg {p.neg_correct}/{p.neg_cases}  "
              f"mse {p.mse:.5f}  rate {100 * p.rate:.3f} %")
    print("test metrics: " + ", ".join(f"{k}={v}" for k, v in metrics.items()))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command == "train":
            return _run(ns)
        if ns.command == "paper":
            return _run(ns, models=STANDARD_MODELS)
        if ns.command == "bench":
            return _bench(ns)
        return _eval(ns)
    except (ConfigError, ds.DatasetError, OSError) as exc:
        print(f"platefault: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
