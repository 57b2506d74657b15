import numpy as np
import pytest

from jamplan.optim import nelder_mead_box


def test_nelder_mead_finds_interior_peak():
    target = np.array([0.2, 0.7, 0.45])
    res = nelder_mead_box(lambda u: -float(np.sum((u - target) ** 2)), np.full(3, 0.9))
    np.testing.assert_allclose(res.x, target, atol=1e-4)
    assert res.converged


def test_nelder_mead_respects_the_box():
    res = nelder_mead_box(lambda u: float(u.sum()), np.full(4, 0.5))
    assert np.all(res.x >= 0) and np.all(res.x <= 1)
    np.testing.assert_allclose(res.x, 1.0, atol=1e-6)


def test_nelder_mead_is_deterministic_and_budgeted():
    calls = []

    def f(u):
        calls.append(1)
        return -float(np.sum((u - 0.3) ** 4)) + float(np.sin(10 * u).sum())

    a = nelder_mead_box(f, np.full(5, 0.6), max_evals=200)
    n = len(calls)
    b = nelder_mead_box(f, np.full(5, 0.6), max_evals=200)
    np.testing.assert_array_equal(a.x, b.x)
    assert a.evaluations == n <= 200 + 10
    assert a.value == pytest.approx(f(a.x))
    assert all(y >= x for x, y in zip(a.history, a.history[1:]))
