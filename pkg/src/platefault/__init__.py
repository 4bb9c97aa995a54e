"""Steel plate fault classification with swarm-trained neural networks.

Modules: :mod:`~platefault.dataset` (loading, labels, scaling, splits),
:mod:`~platefault.network` (MLP / cascade MLP over a flat genome),
:mod:`~platefault.optimizers` (GWO, four-leader GWO, FDO),
:mod:`~platefault.evaluation` (confusion matrix, metrics, ROC) and
:mod:`~platefault.harness` / :mod:`~platefault.reports` (experiments, output).
"""
from ._backend import BACKEND
from .dataset import FaultClass, Label, binarize, load_raw, preprocess, split
from .evaluation import confusion, derive_metrics, roc
from .network import TopologySpec, forward, hidden_size, mse, objective, param_count
from .optimizers import Algorithm, OptimizerRunConfig, SearchSpace, benchmark_suite, optimize

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "FaultClass", "Label", "binarize", "load_raw", "preprocess", "split",
    "confusion", "derive_metrics", "roc", "TopologySpec", "forward", "hidden_size", "mse",
    "objective", "param_count", "Algorithm", "OptimizerRunConfig", "SearchSpace",
    "benchmark_suite", "optimize",
]
