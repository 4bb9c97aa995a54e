"""Checks specific to the compiled kernel; skipped when only numpy is available."""
import numpy as np
import pytest

from platefault import _pure

core = pytest.importorskip("platefault._core")


def test_logistic_accuracy():
    z = np.concatenate([np.linspace(-800, 800, 20001), [0.0, -0.0, 1e-300, -1e-300, 36.7, -745.2]])
    ref = _pure._sigmoid(z)
    got = z.copy()
    core.logistic(got)
    assert np.all((got >= 0) & (got <= 1))
    assert np.max(np.abs(got - ref)) < 1e-15
    big = ref > 1e-290
    assert np.max(np.abs(got[big] - ref[big]) / ref[big]) < 1e-14


def test_logistic_extremes():
    z = np.array([-np.inf, np.inf, -1e6, 1e6])
    core.logistic(z)
    # the negative tail saturates at exp(-708), below any representable error budget
    assert z[1] == z[3] == 1.0
    assert 0.0 <= z[0] < 1e-300 and 0.0 <= z[2] < 1e-300


@pytest.mark.parametrize("n", [1, 63, 64, 65, 200])
def test_block_edges(n):
    rng = np.random.default_rng(n)
    X = rng.random((n, 7))
    Y = rng.choice([1.0, 2.0], (n, 2))
    P = rng.normal(0, 2, (3, 7 * 15 + 15 + 30 + 2 + 14))
    assert np.allclose(core.population_mse(X, Y, P, 15, 2, True),
                       _pure.population_mse(X, Y, P, 15, 2, True), rtol=1e-12)


def test_shape_checks():
    X = np.zeros((4, 3))
    with pytest.raises(ValueError):
        core.forward(X, np.zeros(5), 2, 1, False)
    with pytest.raises(ValueError):
        core.population_mse(X, np.zeros((3, 1)), np.zeros((1, 2 * 3 + 2 + 2 + 1)), 2, 1, False)


def test_thread_count_invariance():
    rng = np.random.default_rng(3)
    X = rng.random((500, 27))
    Y = rng.choice([1.0, 2.0], (500, 1))
    P = rng.normal(0, 1, (17, 27 * 55 + 55 + 55 + 1))
    base = core.population_mse(X, Y, P, 55, 1, False, 1)
    for t in (2, 3, 8):
        assert np.array_equal(core.population_mse(X, Y, P, 55, 1, False, t), base)
