"""Single-hidden-layer MLP and cascade MLP over a flat parameter vector.

Genome layout, for ``I`` inputs, ``H`` hidden units and ``O`` outputs::

    W_ih (H x I, row per hidden unit) | b_h (H) | W_ho (O x H) | b_o (O) | W_io (O x I, cascade only)

Hidden units are logistic, outputs are linear. A prediction ``y_hat`` is
labelled positive when it lies below 1.5, the midpoint of the 1/2 target
coding.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from ._backend import kernels
from .dataset import EmptyInputError, Label, SampleSet

THRESHOLD = 1.5


class DimensionMismatch(ValueError):
    pass


def hidden_size(n_inputs: int) -> int:
    """Hidden width rule: twice the inputs plus one."""
    if n_inputs < 1:
        raise ValueError("n_inputs must be >= 1")
    return 2 * n_inputs + 1


@dataclass(frozen=True)
class TopologySpec:
    inputs: int
    hidden: int
    outputs: int = 1
    cascade: bool = False

    def __post_init__(self):
        if min(self.inputs, self.hidden, self.outputs) < 1:
            raise ValueError("layer sizes must be positive")

    @classmethod
    def for_inputs(cls, inputs: int, cascade: bool = False, hidden: int | None = None,
                   outputs: int = 1) -> "TopologySpec":
        return cls(inputs, hidden_size(inputs) if hidden is None else hidden, outputs, cascade)

    @property
    def name(self) -> str:
        return "CMLP" if self.cascade else "MLP"


def param_count(spec: TopologySpec) -> int:
    i, h, o = spec.inputs, spec.hidden, spec.outputs
    return i * h + h + h * o + o + (i * o if spec.cascade else 0)


class Weights(NamedTuple):
    w_ih: np.ndarray
    b_h: np.ndarray
    w_ho: np.ndarray
    b_o: np.ndarray
    w_io: np.ndarray | None


def decode(spec: TopologySpec, params) -> Weights:
    p = _check_params(spec, params)
    i, h, o = spec.inputs, spec.hidden, spec.outputs
    k = 0
    w_ih = p[k:k + h * i].reshape(h, i); k += h * i
    b_h = p[k:k + h]; k += h
    w_ho = p[k:k + o * h].reshape(o, h); k += o * h
    b_o = p[k:k + o]; k += o
    w_io = p[k:k + o * i].reshape(o, i) if spec.cascade else None
    return Weights(w_ih.copy(), b_h.copy(), w_ho.copy(), b_o.copy(), None if w_io is None else w_io.copy())


def encode(spec: TopologySpec, weights: Weights) -> np.ndarray:
    parts = [weights.w_ih, weights.b_h, weights.w_ho, weights.b_o]
    if spec.cascade:
        if weights.w_io is None:
            raise DimensionMismatch("cascade topology needs input-to-output weights")
        parts.append(weights.w_io)
    p = np.concatenate([np.asarray(a, dtype=np.float64).ravel() for a in parts])
    return _check_params(spec, p)


def _check_params(spec: TopologySpec, params) -> np.ndarray:
    p = np.ascontiguousarray(params, dtype=np.float64)
    if p.ndim != 1 or p.shape[0] != param_count(spec):
        raise DimensionMismatch(f"expected {param_count(spec)} parameters, got shape {p.shape}")
    return p


def _check_inputs(spec: TopologySpec, X) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != spec.inputs:
        raise DimensionMismatch(f"expected inputs of width {spec.inputs}, got shape {X.shape}")
    return X


@dataclass(frozen=True)
class Prediction:
    raw_output: float

    @property
    def label(self) -> Label:
        return Label.POSITIVE if self.raw_output < THRESHOLD else Label.NEGATIVE

    @property
    def score_positive(self) -> float:
        return 2.0 - self.raw_output


def forward_batch(spec: TopologySpec, params, X) -> np.ndarray:
    """Raw outputs for every row of ``X``, shape ``(n, outputs)``."""
    return kernels.forward(_check_inputs(spec, X), _check_params(spec, params),
                           spec.hidden, spec.outputs, spec.cascade)


def forward(spec: TopologySpec, params, x) -> Prediction:
    if spec.outputs != 1:
        raise DimensionMismatch("Prediction is defined for a single output unit")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (spec.inputs,):
        raise DimensionMismatch(f"expected {spec.inputs} inputs, got shape {x.shape}")
    return Prediction(float(forward_batch(spec, params, x[None, :])[0, 0]))


def predict(spec: TopologySpec, params, samples: SampleSet) -> list[Prediction]:
    out = forward_batch(spec, params, samples.features)
    return [Prediction(float(v)) for v in out[:, 0]]


def labels_from_outputs(raw: np.ndarray) -> np.ndarray:
    return np.where(np.asarray(raw) < THRESHOLD, Label.POSITIVE, Label.NEGATIVE).astype(np.int64)


def _targets(spec: TopologySpec, samples: SampleSet) -> np.ndarray:
    # every output unit regresses the same 1/2 target
    return np.ascontiguousarray(np.repeat(samples.targets, spec.outputs, axis=1))


def mse(spec: TopologySpec, params, samples: SampleSet) -> float:
    """Mean of squared errors over all samples and output units."""
    if len(samples) == 0:
        raise EmptyInputError("mse of an empty sample set")
    X = _check_inputs(spec, samples.features)
    P = _check_params(spec, params)[None, :]
    return float(kernels.population_mse(X, _targets(spec, samples), P,
                                        spec.hidden, spec.outputs, spec.cascade, 1)[0])


class MSEObjective:
    """Training objective: genome -> mean squared error on fixed samples.

    Calling the object scores a single genome; :meth:`evaluate_population`
    scores a ``(m, dim)`` batch in one kernel call, optionally threaded.
    Results are identical for any ``num_threads``.
    """

    def __init__(self, spec: TopologySpec, samples: SampleSet, num_threads: int = 1):
        if len(samples) == 0:
            raise EmptyInputError("objective needs training samples")
        self.spec = spec
        self.dim = param_count(spec)
        self.num_threads = num_threads
        self._X = _check_inputs(spec, samples.features)
        self._Y = _targets(spec, samples)

    def __call__(self, params) -> float:
        P = _check_params(self.spec, params)[None, :]
        return float(self.evaluate_population(P)[0])

    def evaluate_population(self, P) -> np.ndarray:
        P = np.ascontiguousarray(P, dtype=np.float64)
        if P.ndim != 2 or P.shape[1] != self.dim:
            raise DimensionMismatch(f"expected population of width {self.dim}, got {P.shape}")
        return kernels.population_mse(self._X, self._Y, P, self.spec.hidden,
                                      self.spec.outputs, self.spec.cascade, self.num_threads)


def objective(spec: TopologySpec, samples: SampleSet, num_threads: int = 1) -> MSEObjective:
    return MSEObjective(spec, samples, num_threads)


MODEL_MAGIC = "platefault-model 1"


def dumps_model(spec: TopologySpec, params) -> str:
    p = _check_params(spec, params)
    head = [MODEL_MAGIC, f"inputs {spec.inputs}", f"hidden {spec.hidden}",
            f"outputs {spec.outputs}", f"cascade {int(spec.cascade)}", f"params {len(p)}"]
    return "\n".join(head + [repr(float(v)) for v in p]) + "\n"


def loads_model(text: str) -> tuple[TopologySpec, np.ndarray]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MODEL_MAGIC:
        raise ValueError("not a platefault model file")
    head = dict(line.split(None, 1) for line in lines[1:6])
    spec = TopologySpec(int(head["inputs"]), int(head["hidden"]), int(head["outputs"]),
                        bool(int(head["cascade"])))
    values = np.array([float(v) for v in lines[6:] if v.strip()], dtype=np.float64)
    if len(values) != int(head["params"]):
        raise DimensionMismatch("parameter count in model file does not match header")
    return spec, _check_params(spec, values)


def save_model(path: str | os.PathLike, spec: TopologySpec, params) -> None:
    Path(path).write_text(dumps_model(spec, params), encoding="utf-8")


def load_model(path: str | os.PathLike) -> tuple[TopologySpec, np.ndarray]:
    return loads_model(Path(path).read_text(encoding="utf-8"))
