"""Experiment configuration and orchestration.

A run loads the data, labels and scales it, splits it, trains one network
with one optimizer per repeat seed, and scores it on both splits. Per-repeat
optimizer seeds are derived from the master seed with
``numpy.random.SeedSequence(master, spawn_key=(r,))`` for repeat ``r``, so
adding repeats never changes earlier ones.
"""
from __future__ import annotations

import argparse
import dataclasses
import os
import statistics
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dataset as ds
from . import network as nn
from .evaluation import confusion, derive_metrics, roc
from .optimizers import Algorithm, OptimizerRunConfig, OptRun, SearchSpace, optimize

OUTPUT_ENV = "PLATEFAULT_OUTPUT_DIR"

STANDARD_MODELS = (
    (Algorithm.GWO, False),
    (Algorithm.MGWO, False),
    (Algorithm.GWO, True),
    (Algorithm.FDO, False),
    (Algorithm.FDO, True),
)


class ConfigError(ValueError):
    pass


class UnknownFlag(ConfigError):
    pass


class InvalidValue(ConfigError):
    def __init__(self, flag: str, reason: str):
        super().__init__(f"invalid value for {flag}: {reason}")
        self.flag, self.reason = flag, reason


class MissingDataPath(ConfigError):
    pass


def model_name(algorithm: Algorithm | str, cascade: bool) -> str:
    return f"{Algorithm(algorithm).name}_{'CMLP' if cascade else 'MLP'}"


@dataclass(frozen=True)
class ExperimentConfig:
    data_path: str | None = None
    delimiter: str | None = None
    preprocess: ds.PreprocessMode = ds.PreprocessMode.MINMAX
    feature_set: ds.FeatureSet = ds.FeatureSet.BASE27
    split_mode: ds.SplitMode = ds.SplitMode.RATIO_80_20
    split_seed: int = 0
    model: str = "mlp"
    algorithm: Algorithm = Algorithm.GWO
    agents: int = 10
    max_iter: int = 50
    seed: int = 0
    wf: int = 0
    bound: float = 10.0
    repeat: int = 1
    workers: int = 1
    output_dir: str | None = None

    @property
    def cascade(self) -> bool:
        return self.model == "cmlp"

    @property
    def name(self) -> str:
        return model_name(self.algorithm, self.cascade)

    def repeat_seeds(self) -> list[int]:
        return [derive_seed(self.seed, r) for r in range(self.repeat)]

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for k, v in d.items():
            if hasattr(v, "value"):
                d[k] = v.value
        return d


def derive_seed(master: int, repeat: int) -> int:
    return int(np.random.SeedSequence(master, spawn_key=(repeat,)).generate_state(1)[0])


# -- configuration parsing ---------------------------------------------------

_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
_DEFAULTS = {f.name: f.default for f in dataclasses.fields(ExperimentConfig)}
_CHOICES = {
    "preprocess": [m.value for m in ds.PreprocessMode],
    "feature_set": [m.value for m in ds.FeatureSet],
    "split_mode": [m.value for m in ds.SplitMode],
    "model": ["mlp", "cmlp"],
    "algorithm": [a.value for a in Algorithm],
}
_HELP = {
    "data_path": "34-column Steel Plates Faults text file",
    "delimiter": "field delimiter (default: auto-detect tab / comma / whitespace)",
    "preprocess": "feature scaling",
    "feature_set": "base27, or with-indicators33 to append the six named-fault indicators",
    "split_mode": "ratio = 80:20 shuffle; paper-counts = test set of 311 positive / 77 negative",
    "split_seed": "seed of the train/test split",
    "model": "mlp or cmlp (cascade)",
    "algorithm": "training optimizer",
    "agents": "search agents",
    "max_iter": "optimizer iterations",
    "seed": "master optimizer seed",
    "wf": "FDO weight factor (0 or 1)",
    "bound": "weights are searched in [-bound, bound]",
    "repeat": "independent optimizer seeds",
    "workers": "threads for fitness evaluation (results do not depend on it)",
    "output_dir": f"output directory (default: ${OUTPUT_ENV} or ./runs)",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "unrecognized arguments" in message:
            raise UnknownFlag(message)
        raise ConfigError(message)


def add_config_arguments(parser: argparse.ArgumentParser, include: tuple[str, ...] | None = None) -> None:
    """Register one ``--flag`` per config field (defaults suppressed so that
    unset flags can fall back to a config file)."""
    parser.add_argument("--config", metavar="FILE", default=argparse.SUPPRESS,
                        help="flat key = value file; command-line flags take precedence")
    for name in include or _FIELDS:
        flag = "--data" if name == "data_path" else "--" + name.replace("_", "-")
        kw = {"dest": name, "default": argparse.SUPPRESS,
              "help": f"{_HELP[name]} (default: {_show_default(name)})"}
        if name in _CHOICES:
            kw["choices"] = _CHOICES[name]
        parser.add_argument(flag, **kw)


def _show_default(name):
    v = _DEFAULTS[name]
    if name == "output_dir":
        return os.environ.get(OUTPUT_ENV, "runs")
    return getattr(v, "value", v)


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "data":
            key = "data_path"
        if key not in _FIELDS:
            raise UnknownFlag(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _coerce(name: str, raw) -> object:
    if raw is None:
        return None
    flag = "--" + name.replace("_", "-")
    try:
        if name in ("split_seed", "agents", "max_iter", "seed", "wf", "repeat", "workers"):
            v = int(raw)
        elif name == "bound":
            v = float(raw)
        elif name == "delimiter":
            v = {"tab": "\t", "\\t": "\t", "comma": ",", "space": " "}.get(str(raw), str(raw))
            if len(v) != 1:
                raise ValueError("must be a single character, tab, comma or space")
        elif name in _CHOICES:
            v = str(raw).lower()
            if v not in _CHOICES[name]:
                raise ValueError(f"choose from {', '.join(_CHOICES[name])}")
        else:
            v = str(raw)
    except ValueError as exc:
        raise InvalidValue(flag, str(exc)) from None
    return v


def build_config(values: dict, require_data: bool = True) -> ExperimentConfig:
    merged = dict(_DEFAULTS)
    merged["output_dir"] = os.environ.get(OUTPUT_ENV) or None
    for k, v in values.items():
        merged[k] = _coerce(k, v)
    checks = {
        "agents": merged["agents"] >= 1, "max_iter": merged["max_iter"] >= 0,
        "repeat": merged["repeat"] >= 1, "workers": merged["workers"] >= 1,
        "wf": merged["wf"] in (0, 1), "seed": merged["seed"] >= 0,
        "split_seed": merged["split_seed"] >= 0, "bound": merged["bound"] > 0,
    }
    for k, ok in checks.items():
        if not ok:
            raise InvalidValue("--" + k.replace("_", "-"), f"{merged[k]!r} is out of range")
    if merged["algorithm"] in ("gwo", "mgwo") and merged["agents"] < 4:
        raise InvalidValue("--agents", "the wolf optimizers need at least 4 agents")
    if require_data and not merged["data_path"]:
        raise MissingDataPath("a data file is required (--data)")
    return ExperimentConfig(
        data_path=merged["data_path"], delimiter=merged["delimiter"],
        preprocess=ds.PreprocessMode(merged["preprocess"]), feature_set=ds.FeatureSet(merged["feature_set"]),
        split_mode=ds.SplitMode(merged["split_mode"]), split_seed=merged["split_seed"],
        model=merged["model"], algorithm=Algorithm(merged["algorithm"]), agents=merged["agents"],
        max_iter=merged["max_iter"], seed=merged["seed"], wf=merged["wf"], bound=merged["bound"],
        repeat=merged["repeat"], workers=merged["workers"], output_dir=merged["output_dir"],
    )


def config_from_namespace(ns: argparse.Namespace, require_data: bool = True) -> ExperimentConfig:
    values = {}
    cfg = getattr(ns, "config", None)
    if cfg:
        values.update(read_config_file(cfg))
    values.update({k: v for k, v in vars(ns).items() if k in _FIELDS})
    return build_config(values, require_data)


def parse_config(argv: list[str], config_file: str | os.PathLike | None = None) -> ExperimentConfig:
    """Flags override config-file values, which override the defaults."""
    parser = _Parser(prog="platefault train", add_help=False)
    add_config_arguments(parser)
    ns = parser.parse_args(argv)
    if config_file is not None and not getattr(ns, "config", None):
        ns.config = str(config_file)
    return config_from_namespace(ns)


# -- running -----------------------------------------------------------------

@dataclass
class PhaseRecord:
    phase: str
    pos_cases: int
    pos_correct: int
    neg_cases: int
    neg_correct: int
    mse: float

    @property
    def pos_accuracy(self) -> float | None:
        return self.pos_correct / self.pos_cases if self.pos_cases else None

    @property
    def neg_accuracy(self) -> float | None:
        return self.neg_correct / self.neg_cases if self.neg_cases else None

    @property
    def rate(self) -> float:
        return (self.pos_correct + self.neg_correct) / (self.pos_cases + self.neg_cases)

    def as_dict(self) -> dict:
        return {"phase": self.phase, "pos_cases": self.pos_cases, "pos_correct": self.pos_correct,
                "pos_accuracy": self.pos_accuracy, "neg_cases": self.neg_cases,
                "neg_correct": self.neg_correct, "neg_accuracy": self.neg_accuracy,
                "mse": self.mse, "rate": self.rate}


@dataclass
class RunRecord:
    model: str
    algorithm: str
    cascade: bool
    seed: int
    samples: int
    dimensions: int
    run_time: float
    train: PhaseRecord
    test: PhaseRecord
    metrics: dict
    roc_fpr: list[float]
    roc_tpr: list[float]
    roc_auc: float | None
    history: list[tuple[int, float]]
    evaluations: int
    params: np.ndarray = field(repr=False)
    spec: nn.TopologySpec = field(repr=False)

    @property
    def stem(self) -> str:
        return f"{self.model}_{self.algorithm}_seed{self.seed}"

    def as_dict(self) -> dict:
        return {
            "model": self.model, "algorithm": self.algorithm, "cascade": self.cascade,
            "seed": self.seed, "samples": self.samples, "dimensions": self.dimensions,
            "run_time": round(self.run_time, 3), "training_rate": self.train.rate,
            "testing_rate": self.test.rate, "evaluations": self.evaluations,
            "best_fitness": self.history[-1][1],
            "phases": [self.train.as_dict(), self.test.as_dict()],
            "metrics": self.metrics,
            "roc": {"fpr": self.roc_fpr, "tpr": self.roc_tpr, "auc": self.roc_auc},
            "topology": {"inputs": self.spec.inputs, "hidden": self.spec.hidden,
                         "outputs": self.spec.outputs, "cascade": self.spec.cascade},
        }


@dataclass
class ExperimentReport:
    configs: list[ExperimentConfig]
    runs: list[RunRecord]
    split: ds.DatasetSplit = field(repr=False)

    def models(self) -> list[str]:
        seen = []
        for r in self.runs:
            if r.model not in seen:
                seen.append(r.model)
        return seen

    def summary(self) -> list[dict]:
        """Median over repeat seeds for each model."""
        rows = []
        for m in self.models():
            runs = [r for r in self.runs if r.model == m]
            rows.append({
                "model": m, "repeats": len(runs), "samples": runs[0].samples,
                "dimensions": runs[0].dimensions,
                "run_time": statistics.median(r.run_time for r in runs),
                "training_rate": statistics.median(r.train.rate for r in runs),
                "testing_rate": statistics.median(r.test.rate for r in runs),
                "test_mse": statistics.median(r.test.mse for r in runs),
            })
        return rows

    def as_dict(self) -> dict:
        return {
            # workers and output_dir change where and how fast, never what
            "configs": [{k: v for k, v in c.as_dict().items() if k not in ("workers", "output_dir")}
                        for c in self.configs],
            "split": {"mode": self.split.mode.value, "seed": self.split.seed,
                      "train": len(self.split.train), "test": len(self.split.test),
                      "train_positive": self.split.train.n_positive,
                      "train_negative": self.split.train.n_negative,
                      "test_positive": self.split.test.n_positive,
                      "test_negative": self.split.test.n_negative},
            "runs": [r.as_dict() for r in self.runs],
            "summary": self.summary(),
        }


def prepare_data(config: ExperimentConfig) -> tuple[ds.SampleSet, ds.DatasetSplit]:
    if not config.data_path:
        raise MissingDataPath("a data file is required (--data)")
    samples = ds.preprocess(ds.binarize(ds.load_raw(config.data_path, config.delimiter)),
                            config.preprocess, config.feature_set)
    return samples, ds.split(samples, config.split_mode, config.split_seed)


def score_phase(phase: str, spec: nn.TopologySpec, params, samples: ds.SampleSet) -> tuple[PhaseRecord, np.ndarray]:
    raw = nn.forward_batch(spec, params, samples.features)[:, 0]
    pred = nn.labels_from_outputs(raw)
    pos = samples.labels == ds.Label.POSITIVE
    rec = PhaseRecord(phase, int(pos.sum()), int(np.sum(pos & (pred == ds.Label.POSITIVE))),
                      int((~pos).sum()), int(np.sum(~pos & (pred == ds.Label.NEGATIVE))),
                      nn.mse(spec, params, samples))
    return rec, raw


def evaluate_model(spec: nn.TopologySpec, params, split: ds.DatasetSplit):
    """Score a trained genome; metrics and ROC come from the test split."""
    train, _ = score_phase("train", spec, params, split.train)
    test, raw = score_phase("test", spec, params, split.test)
    cm = confusion(nn.labels_from_outputs(raw), split.test.labels)
    metrics = dataclasses.asdict(cm) | derive_metrics(cm, test.mse).as_dict()
    if split.test.n_positive and split.test.n_negative:
        curve = roc(2.0 - raw, split.test.labels)
        fpr, tpr, auc = list(curve.fpr), list(curve.tpr), curve.auc
    else:
        fpr, tpr, auc = [], [], None
    return train, test, metrics, (fpr, tpr, auc)


def train_model(config: ExperimentConfig, split: ds.DatasetSplit, seed: int) -> tuple[nn.TopologySpec, OptRun]:
    spec = nn.TopologySpec.for_inputs(split.train.features.shape[1], cascade=config.cascade)
    objective = nn.objective(spec, split.train, num_threads=config.workers)
    space = SearchSpace.box(nn.param_count(spec), -config.bound, config.bound)
    run = optimize(objective, space, OptimizerRunConfig(config.algorithm, config.agents, config.max_iter,
                                                        seed, config.wf, config.workers))
    return spec, run


def run_model(config: ExperimentConfig, split: ds.DatasetSplit, n_samples: int) -> list[RunRecord]:
    records = []
    for seed in config.repeat_seeds():
        spec, run = train_model(config, split, seed)
        train, test, metrics, (fpr, tpr, auc) = evaluate_model(spec, run.best_position, split)
        records.append(RunRecord(
            model=config.name, algorithm=config.algorithm.value, cascade=config.cascade, seed=seed,
            samples=n_samples, dimensions=nn.param_count(spec), run_time=run.elapsed,
            train=train, test=test, metrics=metrics, roc_fpr=fpr, roc_tpr=tpr, roc_auc=auc,
            history=run.history, evaluations=run.evaluations, params=run.best_position, spec=spec,
        ))
    return records


def run_experiment(config: ExperimentConfig, formats: tuple[str, ...] | None = None,
                   models: tuple[tuple[Algorithm, bool], ...] | None = None) -> ExperimentReport:
    """Train and score ``config``'s model, or each ``(algorithm, cascade)``
    pair in ``models``. When ``config.output_dir`` is set, the models, the
    split manifest and the reports in ``formats`` are written there."""
    samples, split = prepare_data(config)
    configs = [config] if models is None else [
        dataclasses.replace(config, algorithm=a, model="cmlp" if c else "mlp") for a, c in models]
    runs = []
    for cfg in configs:
        runs.extend(run_model(cfg, split, len(samples)))
    report = ExperimentReport(configs, runs, split)
    if config.output_dir:
        from .reports import ALL_FORMATS, emit_reports
        emit_reports(report, ALL_FORMATS if formats is None else formats, config.output_dir)
    return report
