"""Population-based derivative-free minimizers: GWO, four-leader GWO, FDO.

All three share one driver, :func:`optimize`. Random numbers come from a
single ``numpy.random.Generator`` seeded by the run config and are drawn in a
fixed order per iteration:

* GWO / MGWO: for each leader in rank order, ``r1`` then ``r2``, each an
  ``(agents, dim)`` block;
* FDO: one ``(agents, dim)`` block of ``r`` in ``[-1, 1)``.

Fitness evaluation happens after all draws and position updates of an
iteration, so evaluating agents concurrently cannot change the trajectory.
"""
from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

Objective = Callable[[np.ndarray], float]


class Algorithm(str, enum.Enum):
    GWO = "gwo"
    MGWO = "mgwo"
    FDO = "fdo"


class NonFiniteFitness(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class SearchSpace:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=np.float64).ravel()
        hi = np.asarray(self.upper, dtype=np.float64).ravel()
        if lo.shape != hi.shape or lo.size == 0:
            raise ValueError("bounds must be non-empty vectors of equal length")
        if not np.all(lo < hi):
            raise ValueError("lower bound must be strictly below upper bound")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def box(cls, dim: int, lower: float = -10.0, upper: float = 10.0) -> "SearchSpace":
        return cls(np.full(dim, lower), np.full(dim, upper))

    @property
    def dim(self) -> int:
        return self.lower.size

    def clip(self, X: np.ndarray) -> np.ndarray:
        return np.clip(X, self.lower, self.upper)

    def contains(self, X: np.ndarray) -> bool:
        return bool(np.all(X >= self.lower) and np.all(X <= self.upper))


@dataclass(frozen=True)
class OptimizerRunConfig:
    algorithm: Algorithm = Algorithm.GWO
    agents: int = 10
    max_iter: int = 50
    seed: int = 0
    wf: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if self.agents < 1:
            raise ValueError("agents must be positive")
        if self.algorithm is not Algorithm.FDO and self.agents < 4:
            raise ValueError("GWO and MGWO need at least 4 agents")
        if self.max_iter < 0:
            raise ValueError("max_iter must be non-negative")
        if self.wf not in (0, 1):
            raise ValueError("wf must be 0 or 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class AgentState:
    position: np.ndarray
    fitness: float


@dataclass(eq=False)
class Population:
    """Agent positions ``(n, dim)`` and fitness ``(n,)``."""

    positions: np.ndarray
    fitness: np.ndarray

    def __len__(self) -> int:
        return len(self.fitness)

    def __getitem__(self, i: int) -> AgentState:
        return AgentState(self.positions[i], float(self.fitness[i]))


@dataclass
class OptRun:
    best_position: np.ndarray
    best_fitness: float
    history: list[tuple[int, float]]
    evaluations: int
    elapsed: float
    algorithm: Algorithm
    seed: int

    def history_csv(self) -> str:
        lines = ["iteration,best_fitness"]
        lines += [f"{t},{f!r}" for t, f in self.history]
        return "\n".join(lines) + "\n"


class Evaluator:
    """Counts objective calls and rejects non-finite values.

    Objectives exposing ``evaluate_population(P)`` are scored in one batch;
    plain callables are mapped row by row, on a thread pool if
    ``workers > 1``. Output order always follows agent order.
    """

    def __init__(self, objective: Objective, workers: int = 1):
        self.objective = objective
        self.workers = workers
        self.count = 0

    def __call__(self, P: np.ndarray) -> np.ndarray:
        batch = getattr(self.objective, "evaluate_population", None)
        if batch is not None:
            fit = np.asarray(batch(P), dtype=np.float64)
        elif self.workers > 1 and len(P) > 1:
            with ThreadPoolExecutor(self.workers) as pool:
                fit = np.fromiter(pool.map(lambda row: float(self.objective(row)), P),
                                  dtype=np.float64, count=len(P))
        else:
            fit = np.fromiter((float(self.objective(row)) for row in P), dtype=np.float64, count=len(P))
        self.count += len(P)
        if not np.all(np.isfinite(fit)):
            raise NonFiniteFitness(f"objective returned non-finite value(s): {fit[~np.isfinite(fit)][:3]}")
        return fit


def select_leaders(pop: Population, k: int) -> list[np.ndarray]:
    """The ``k`` fittest agents, best first.

    Ties keep agent order. Exact duplicates are skipped while enough distinct
    positions remain.
    """
    order = np.argsort(pop.fitness, kind="stable")
    chosen = []
    for i in order:
        if not any(np.array_equal(pop.positions[i], pop.positions[j]) for j in chosen):
            chosen.append(i)
            if len(chosen) == k:
                break
    for i in order:
        if len(chosen) == k:
            break
        if i not in chosen:
            chosen.append(i)
    return [pop.positions[i] for i in chosen]


def initialize(space: SearchSpace, config: OptimizerRunConfig, evaluate: Callable[[np.ndarray], np.ndarray],
               rng: np.random.Generator | None = None) -> Population:
    """Uniform random positions within the bounds, evaluated once each."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    X = space.lower + (space.upper - space.lower) * rng.random((config.agents, space.dim))
    X = space.clip(X)
    return Population(X, evaluate(X))


def gwo_coefficient(t: int, max_iter: int) -> float:
    """Linearly decreasing ``a``: 2 at ``t = 0``, 0 at ``t = max_iter``."""
    if max_iter <= 0:
        return 0.0
    return 2.0 * (1.0 - t / max_iter)


def hunt(X: np.ndarray, leaders: Sequence[np.ndarray], a: float, rng: np.random.Generator) -> np.ndarray:
    """Average of the per-leader encircling moves for every agent."""
    n, d = X.shape
    total = np.zeros((n, d))
    for lead in leaders:
        r1 = rng.random((n, d))
        r2 = rng.random((n, d))
        A = 2.0 * a * r1 - a
        C = 2.0 * r2
        D = np.abs(C * lead - X)
        total = total + (lead - A * D)
    return total / len(leaders)


def _wolf_step(pop, space, t, max_iter, rng, evaluate, n_leaders):
    leaders = select_leaders(pop, min(n_leaders, len(pop) - 1))
    while len(leaders) < n_leaders:
        leaders.append(leaders[-1])  # four agents: gamma repeats delta
    X = space.clip(hunt(pop.positions, leaders, gwo_coefficient(t, max_iter), rng))
    return Population(X, evaluate(X))


def gwo_iterate(pop: Population, space: SearchSpace, t: int, max_iter: int, rng: np.random.Generator,
                evaluate: Callable[[np.ndarray], np.ndarray]) -> Population:
    """One grey wolf step led by the alpha, beta and delta wolves."""
    return _wolf_step(pop, space, t, max_iter, rng, evaluate, 3)


def mgwo_iterate(pop: Population, space: SearchSpace, t: int, max_iter: int, rng: np.random.Generator,
                 evaluate: Callable[[np.ndarray], np.ndarray]) -> Population:
    """Grey wolf step with a fourth (gamma) leader; gamma repeats delta
    when there are only four agents."""
    return _wolf_step(pop, space, t, max_iter, rng, evaluate, 4)


def fitness_weight(best_fitness: float, current_fitness: float, wf: int) -> float:
    return abs(best_fitness / current_fitness) - wf


def fdo_pace(x: np.ndarray, fitness: float, best_x: np.ndarray, best_fitness: float,
             r: np.ndarray, wf: int) -> np.ndarray:
    """Scout-bee displacement for one agent given its random vector ``r``."""
    if fitness != 0.0:
        fw = fitness_weight(best_fitness, fitness, wf)
        if 0.0 < fw < 1.0:
            return (x - best_x) * fw * np.where(r < 0.0, -1.0, 1.0)
    return x * r


def fdo_iterate(pop: Population, space: SearchSpace, best: AgentState, rng: np.random.Generator, wf: int,
                evaluate: Callable[[np.ndarray], np.ndarray]) -> tuple[Population, AgentState]:
    """Move every scout bee by its pace; keep a move only if it improves."""
    n, d = pop.positions.shape
    r = rng.uniform(-1.0, 1.0, (n, d))
    cand = np.empty_like(pop.positions)
    for i in range(n):
        pace = fdo_pace(pop.positions[i], pop.fitness[i], best.position, best.fitness, r[i], wf)
        cand[i] = pop.positions[i] + pace
    cand = space.clip(cand)
    cand_fit = evaluate(cand)
    accept = cand_fit < pop.fitness
    X = np.where(accept[:, None], cand, pop.positions)
    fit = np.where(accept, cand_fit, pop.fitness)
    i = int(np.argmin(fit))
    if fit[i] < best.fitness:
        best = AgentState(X[i].copy(), float(fit[i]))
    return Population(X, fit), best


def optimize(objective: Objective, space: SearchSpace, config: OptimizerRunConfig,
             callback: Callable[[int, Population], None] | None = None) -> OptRun:
    """Run ``config.max_iter`` iterations of the configured algorithm.

    ``callback(t, population)`` is invoked after initialization (``t = 0``)
    and after every iteration. The best position over all evaluations is
    tracked independently of the population.
    """
    rng = np.random.default_rng(config.seed)
    evaluate = Evaluator(objective, config.workers)
    t0 = time.perf_counter()
    pop = initialize(space, config, evaluate, rng)
    i = int(np.argmin(pop.fitness))
    best = AgentState(pop.positions[i].copy(), float(pop.fitness[i]))
    history = [(0, best.fitness)]
    if callback:
        callback(0, pop)
    for t in range(config.max_iter):
        if config.algorithm is Algorithm.FDO:
            pop, best = fdo_iterate(pop, space, best, rng, config.wf, evaluate)
        else:
            step = gwo_iterate if config.algorithm is Algorithm.GWO else mgwo_iterate
            pop = step(pop, space, t, config.max_iter, rng, evaluate)
            i = int(np.argmin(pop.fitness))
            if pop.fitness[i] < best.fitness:
                best = AgentState(pop.positions[i].copy(), float(pop.fitness[i]))
        history.append((t + 1, best.fitness))
        if callback:
            callback(t + 1, pop)
    return OptRun(best.position, best.fitness, history, evaluate.count, time.perf_counter() - t0,
                  config.algorithm, config.seed)


def random_search(objective: Objective, space: SearchSpace, evaluations: int, seed: int = 0) -> OptRun:
    """Uniform random sampling baseline with a fixed evaluation budget."""
    rng = np.random.default_rng(seed)
    evaluate = Evaluator(objective)
    t0 = time.perf_counter()
    best_x, best_f = None, math.inf
    history = []
    done = 0
    while done < evaluations:
        m = min(1024, evaluations - done)
        X = space.lower + (space.upper - space.lower) * rng.random((m, space.dim))
        fit = evaluate(X)
        i = int(np.argmin(fit))
        if fit[i] < best_f:
            best_x, best_f = X[i].copy(), float(fit[i])
        done += m
        history.append((done, best_f))
    return OptRun(best_x, best_f, history, evaluate.count, time.perf_counter() - t0, None, seed)


# -- analytic test functions -------------------------------------------------

def sphere(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(np.dot(x, x))


def rosenbrock(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def ackley(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    s1 = np.sqrt(np.dot(x, x) / n)
    s2 = np.sum(np.cos(2.0 * np.pi * x)) / n
    return float((20.0 - 20.0 * np.exp(-0.2 * s1)) + (np.e - np.exp(s2)))


@dataclass(frozen=True)
class BenchmarkFunction:
    name: str
    dimension: int
    evaluate: Callable[[np.ndarray], float] = field(repr=False)
    known_optimum: float
    optimum_position: np.ndarray = field(repr=False)
    lower: float
    upper: float

    def __call__(self, x) -> float:
        return self.evaluate(x)

    def space(self) -> SearchSpace:
        return SearchSpace.box(self.dimension, self.lower, self.upper)


def benchmark_suite(dimension: int = 10) -> list[BenchmarkFunction]:
    zeros, ones = np.zeros(dimension), np.ones(dimension)
    return [
        BenchmarkFunction("sphere", dimension, sphere, 0.0, zeros, -10.0, 10.0),
        BenchmarkFunction("rosenbrock", dimension, rosenbrock, 0.0, ones, -5.0, 10.0),
        BenchmarkFunction("rastrigin", dimension, rastrigin, 0.0, zeros, -5.12, 5.12),
        BenchmarkFunction("ackley", dimension, ackley, 0.0, zeros, -32.768, 32.768),
    ]
