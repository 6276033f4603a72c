from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_domain.rearrangement import (
    EmptyFunction, StepFunction, characteristic, decade_grid, distribution, geometric_grid, hardy_average,
    hl_defect, pairing, primitive, random_step, rearrange,
)


@st.composite
def steps(draw, max_cells=12):
    n = draw(st.integers(1, max_cells))
    cuts = draw(st.lists(st.floats(0.01, 0.99), min_size=n - 1, max_size=n - 1, unique=True))
    edges = np.concatenate([[0.0], np.sort(cuts), [1.0]])
    if np.any(np.diff(edges) < 1e-6):
        edges = np.linspace(0, 1, n + 1)
    vals = draw(st.lists(st.floats(0, 100), min_size=n, max_size=n))
    return StepFunction(edges, np.array(vals))


def test_validation():
    with pytest.raises(EmptyFunction, match="empty function"):
        StepFunction(np.array([0.0]), np.array([]))
    with pytest.raises(ValueError):
        StepFunction(np.array([0.0, 0.5]), np.array([1.0]))
    with pytest.raises(ValueError):
        StepFunction(np.array([0.0, 0.6, 0.5, 1.0]), np.array([1.0, 2.0, 3.0]))


def test_values_are_absolute():
    f = StepFunction(np.array([0.0, 0.5, 1.0]), np.array([-2.0, 1.0]))
    assert f.values.tolist() == [2.0, 1.0]


def test_distribution_and_rearrangement_known_case():
    f = StepFunction(np.array([0.0, 0.25, 0.5, 1.0]), np.array([1.0, 3.0, 2.0]))
    assert distribution(f, 1.5) == pytest.approx(0.75)
    assert distribution(f, 0.0) == pytest.approx(1.0)
    fs = rearrange(f)
    assert fs.values.tolist() == [3.0, 2.0, 1.0]
    assert fs.edges.tolist() == [0.0, 0.25, 0.75, 1.0]


@given(steps())
def test_rearrangement_is_equimeasurable_and_nonincreasing(f):
    fs = rearrange(f)
    assert np.all(np.diff(fs.values) <= 0)
    lam = np.unique(np.concatenate([f.values, f.values / 2, [0.0]]))
    assert np.allclose(distribution(fs, lam), distribution(f, lam), atol=1e-12)
    assert fs.integral() == pytest.approx(f.integral(), rel=1e-12, abs=1e-12)


@given(steps())
def test_hardy_average_dominates_rearrangement(f):
    fs = rearrange(f)
    t = np.linspace(0.01, 1, 37)
    assert np.all(hardy_average(f, t) >= fs(t) * (1 - 1e-12) - 1e-12)


@given(steps(), st.floats(0.01, 1.0))
def test_majorization(f, t):
    # int_0^t f* >= int_0^t f
    assert primitive(rearrange(f), t) >= primitive(f, t) - 1e-10


@given(steps(), steps())
def test_hardy_littlewood(f, g):
    assert hl_defect(f, g) >= -1e-12 * (1 + abs(pairing(f, g)))


def test_hardy_average_domain():
    with pytest.raises(ValueError):
        hardy_average(StepFunction.constant(), 0.0)


def test_characteristic_and_grids():
    chi = characteristic(0.5, 0.25)
    assert chi.integral() == pytest.approx(0.25)
    g = geometric_grid(8)
    assert g[0] == 0 and g[-1] == 1 and np.all(np.diff(g) > 0)
    d = decade_grid(1e-3, 4)
    assert d[1] == pytest.approx(1e-3) and d[-1] == 1


def test_from_callable_cell_averages():
    f = StepFunction.from_callable(lambda s: s, np.linspace(0, 1, 5))
    assert np.allclose(f.values, [0.125, 0.375, 0.625, 0.875])
    g = StepFunction.from_callable(lambda s: s ** -0.5, np.array([0.0, 0.25, 1.0]))
    assert g.values[0] == pytest.approx(4.0, rel=1e-2)  # (1/0.25) int_0^0.25 s^-1/2 = 4
    assert g.values[1] == pytest.approx(4 / 3, rel=1e-10)


def test_csv_round_trip(tmp_path):
    f = random_step(np.random.default_rng(1), 9)
    f.to_csv(tmp_path / "f.csv")
    g = StepFunction.from_csv(tmp_path / "f.csv")
    assert np.array_equal(f.edges, g.edges) and np.array_equal(f.values, g.values)


def test_empty_csv(tmp_path):
    (tmp_path / "e.csv").write_text("# nothing\n")
    with pytest.raises(EmptyFunction, match="empty function"):
        StepFunction.from_csv(tmp_path / "e.csv")


def test_random_step_is_deterministic_per_seed():
    a = random_step(np.random.default_rng(5), 10, support=0.3)
    b = random_step(np.random.default_rng(5), 10, support=0.3)
    assert np.array_equal(a.values, b.values)
    assert a(0.5) == 0
