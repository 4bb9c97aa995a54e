import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from platefault import optimizers as op
from platefault.optimizers import Algorithm, OptimizerRunConfig, Population, SearchSpace


def batch(fn):
    return lambda X: np.array([fn(x) for x in X])


def test_coefficient_schedule():
    assert op.gwo_coefficient(0, 50) == 2.0
    assert op.gwo_coefficient(50, 50) == 0.0
    assert op.gwo_coefficient(25, 50) == 1.0
    assert op.gwo_coefficient(0, 0) == 0.0


def test_fixed_point_when_leaders_coincide_and_a_zero():
    rng = np.random.default_rng(0)
    star = np.array([1.5, -2.0, 0.25])
    X = rng.uniform(-5, 5, (6, 3))
    for k in (3, 4):
        out = op.hunt(X, [star] * k, 0.0, rng)
        assert np.array_equal(out, np.tile(star, (6, 1)))


def naive_hunt(X, leaders, a, rng):
    n, d = X.shape
    blocks = [(rng.random((n, d)), rng.random((n, d))) for _ in leaders]
    out = np.zeros((n, d))
    for i in range(n):
        for j in range(d):
            acc = 0.0
            for lead, (r1, r2) in zip(leaders, blocks):
                A = 2 * a * r1[i, j] - a
                C = 2 * r2[i, j]
                acc += lead[j] - A * abs(C * lead[j] - X[i, j])
            out[i, j] = acc / len(leaders)
    return out


def test_gwo_iterate_matches_scalar_oracle():
    space = SearchSpace.box(4, -3, 3)
    rng = np.random.default_rng(7)
    X = rng.uniform(-3, 3, (8, 4))
    pop = Population(X, batch(op.sphere)(X))
    order = np.argsort(pop.fitness, kind="stable")
    leaders = [X[i] for i in order[:3]]
    expected = np.clip(naive_hunt(X, leaders, op.gwo_coefficient(3, 10), np.random.default_rng(1)), -3, 3)
    got = op.gwo_iterate(pop, space, 3, 10, np.random.default_rng(1), batch(op.sphere))
    assert np.allclose(got.positions, expected, rtol=0, atol=1e-14)
    assert np.array_equal(got.fitness, batch(op.sphere)(got.positions))


def test_mgwo_uses_four_leaders():
    space = SearchSpace.box(3)
    X = np.random.default_rng(3).uniform(-10, 10, (9, 3))
    pop = Population(X, batch(op.sphere)(X))
    order = np.argsort(pop.fitness, kind="stable")
    expected = space.clip(op.hunt(X, [X[i] for i in order[:4]], 1.2, np.random.default_rng(4)))
    got = op.mgwo_iterate(pop, space, 4, 10, np.random.default_rng(4), batch(op.sphere))
    assert np.array_equal(got.positions, expected)


def test_mgwo_four_agents_gamma_repeats_delta():
    space = SearchSpace.box(2)
    X = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [4.0, 4.0]])
    pop = Population(X, batch(op.sphere)(X))
    expected = space.clip(op.hunt(X, [X[0], X[1], X[2], X[2]], 1.0, np.random.default_rng(5)))
    got = op.mgwo_iterate(pop, space, 5, 10, np.random.default_rng(5), batch(op.sphere))
    assert np.array_equal(got.positions, expected)


def test_select_leaders_prefers_distinct():
    X = np.array([[0.0], [0.0], [1.0], [2.0]])
    pop = Population(X, np.array([0.0, 0.0, 1.0, 2.0]))
    assert [float(v[0]) for v in op.select_leaders(pop, 3)] == [0.0, 1.0, 2.0]
    same = Population(np.zeros((4, 1)), np.zeros(4))
    assert len(op.select_leaders(same, 3)) == 3


@pytest.mark.parametrize("xs,x,wf,expected", [(1.0, 1.0, 0, 1.0), (1.0, 1.0, 1, 0.0), (0.5, 2.0, 0, 0.25)])
def test_fitness_weight(xs, x, wf, expected):
    assert op.fitness_weight(xs, x, wf) == expected


def test_fdo_pace_rules():
    x, best = np.array([2.0, 2.0]), np.array([1.0, 1.0])
    r = np.array([-0.5, 0.5])
    # 0 < fw = 0.25 < 1: move relative to the best, sign follows r
    assert op.fdo_pace(x, 2.0, best, 0.5, r, 0).tolist() == [-0.25, 0.25]
    # fw == 1 (agent is the best): random walk x * r
    assert op.fdo_pace(x, 0.5, best, 0.5, r, 0).tolist() == [-1.0, 1.0]
    # fw == 0 under wf = 1
    assert op.fdo_pace(x, 0.5, best, 0.5, r, 1).tolist() == [-1.0, 1.0]
    # zero fitness takes the random branch without dividing
    assert op.fdo_pace(x, 0.0, best, 0.0, r, 0).tolist() == [-1.0, 1.0]


def test_fdo_iterate_matches_scalar_oracle():
    space = SearchSpace.box(3, -4, 4)
    f = op.rastrigin
    X = np.random.default_rng(11).uniform(-4, 4, (7, 3))
    fit = batch(f)(X)
    b = int(np.argmin(fit))
    best = op.AgentState(X[b].copy(), float(fit[b]))
    r = np.random.default_rng(12).uniform(-1, 1, (7, 3))
    exp_X, exp_f = X.copy(), fit.copy()
    for i in range(7):
        fw = abs(best.fitness / fit[i]) - 0 if fit[i] != 0 else None
        pace = []
        for j in range(3):
            if fw is not None and 0 < fw < 1:
                pace.append((X[i, j] - best.position[j]) * fw * (-1 if r[i, j] < 0 else 1))
            else:
                pace.append(X[i, j] * r[i, j])
        cand = np.clip(X[i] + np.array(pace), -4, 4)
        if f(cand) < fit[i]:
            exp_X[i], exp_f[i] = cand, f(cand)
    pop, new_best = op.fdo_iterate(Population(X, fit), space, best, np.random.default_rng(12), 0, batch(f))
    assert np.array_equal(pop.positions, exp_X)
    assert np.array_equal(pop.fitness, exp_f)
    assert new_best.fitness == min(best.fitness, exp_f.min())


@pytest.mark.parametrize("alg", list(Algorithm))
def test_max_iter_zero(alg):
    cfg = OptimizerRunConfig(alg, agents=5, max_iter=0, seed=1)
    run = op.optimize(op.sphere, SearchSpace.box(2), cfg)
    assert run.evaluations == 5
    assert run.history == [(0, run.best_fitness)]


@pytest.mark.parametrize("alg", list(Algorithm))
def test_evaluation_accounting(alg):
    calls = []

    def f(x):
        calls.append(1)
        return op.sphere(x)

    run = op.optimize(f, SearchSpace.box(3), OptimizerRunConfig(alg, agents=6, max_iter=9))
    assert run.evaluations == len(calls) == 6 * 10
    assert len(run.history) == 10 and run.history[-1] == (9, run.best_fitness)
    assert run.best_fitness == op.sphere(run.best_position)


@pytest.mark.parametrize("alg", list(Algorithm))
def test_constant_objective(alg):
    run = op.optimize(lambda x: 3.0, SearchSpace.box(2), OptimizerRunConfig(alg, agents=4, max_iter=5))
    assert run.best_fitness == 3.0
    assert all(f == 3.0 for _, f in run.history)


@pytest.mark.parametrize("alg", list(Algorithm))
def test_deterministic_and_worker_independent(alg):
    space = SearchSpace.box(4)
    runs = [op.optimize(op.ackley, space, OptimizerRunConfig(alg, 8, 15, seed=42, workers=w)) for w in (1, 1, 4)]
    for r in runs[1:]:
        assert np.array_equal(r.best_position, runs[0].best_position)
        assert r.history == runs[0].history
    other = op.optimize(op.ackley, space, OptimizerRunConfig(alg, 8, 15, seed=43))
    assert other.history != runs[0].history


def test_non_finite_fitness_rejected():
    with pytest.raises(op.NonFiniteFitness):
        op.optimize(lambda x: math.nan, SearchSpace.box(2), OptimizerRunConfig(agents=4, max_iter=1))


@pytest.mark.parametrize("kw", [dict(agents=3), dict(agents=0, algorithm="fdo"), dict(max_iter=-1),
                                dict(wf=2), dict(seed=-1), dict(workers=0)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        OptimizerRunConfig(**kw)


def test_search_space_validation():
    with pytest.raises(ValueError):
        SearchSpace(np.array([1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        SearchSpace(np.zeros(2), np.ones(3))


def test_random_search_budget():
    run = op.random_search(op.sphere, SearchSpace.box(3), 2500, seed=0)
    assert run.evaluations == 2500
    assert run.best_fitness == op.sphere(run.best_position)


@pytest.mark.parametrize("bench", op.benchmark_suite(10), ids=lambda b: b.name)
def test_benchmark_optima(bench):
    assert bench(bench.optimum_position) == bench.known_optimum
    assert bench.space().contains(bench.optimum_position)


class Recorder:
    def __init__(self, space):
        self.space = space
        self.pops = []

    def __call__(self, t, pop):
        assert self.space.contains(pop.positions)
        self.pops.append((t, pop.positions.copy(), pop.fitness.copy()))


objectives = st.sampled_from([op.sphere, op.rastrigin, op.rosenbrock, op.ackley])


@settings(max_examples=30, deadline=None)
@given(alg=st.sampled_from(list(Algorithm)), f=objectives, dim=st.integers(1, 6),
       agents=st.integers(4, 12), iters=st.integers(0, 15), seed=st.integers(0, 2**31),
       lo=st.floats(-20, 0, exclude_max=True), width=st.floats(0.01, 30))
def test_monotone_best_and_bounds(alg, f, dim, agents, iters, seed, lo, width):
    space = SearchSpace.box(dim, lo, lo + width)
    rec = Recorder(space)
    run = op.optimize(f, space, OptimizerRunConfig(alg, agents, iters, seed), rec)
    bests = [b for _, b in run.history]
    assert [t for t, _ in run.history] == list(range(iters + 1))
    assert all(b2 <= b1 for b1, b2 in zip(bests, bests[1:]))
    assert space.contains(run.best_position)
    assert run.best_fitness == min(p[2].min() for p in rec.pops)
    for t, _, fit in rec.pops:
        assert bests[t] == min(p[2].min() for p in rec.pops[:t + 1])


@settings(max_examples=30, deadline=None)
@given(f=objectives, dim=st.integers(1, 6), agents=st.integers(1, 10), iters=st.integers(1, 15),
       seed=st.integers(0, 2**31), wf=st.sampled_from([0, 1]))
def test_fdo_agents_never_worsen(f, dim, agents, iters, seed, wf):
    space = SearchSpace.box(dim, -5, 5)
    rec = Recorder(space)
    op.optimize(f, space, OptimizerRunConfig("fdo", agents, iters, seed, wf=wf), rec)
    for (_, X0, f0), (_, X1, f1) in zip(rec.pops, rec.pops[1:]):
        assert np.all(f1 <= f0)
        same = np.all(X0 == X1, axis=1)
        assert np.all(f1[same] == f0[same])
