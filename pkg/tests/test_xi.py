import numpy as np
import pytest

from vcdim.core.dataset import Dataset
from vcdim.core.errors import InvalidConfigError, LossExceedsBoundError, StratumTooSmallError
from vcdim.core.rng import replicate_stream
from vcdim.schemas.config import BootstrapConfig, BoundPolicy, DesignPoints, DiscretizationConfig
from vcdim.schemas.xi import LossProfile
from vcdim.services import xi
from vcdim.services.linmod import ols_fit, squared_errors
from vcdim.services.xi import (
    allocate_strata,
    block_members,
    bootstrap_pair,
    discretize_losses,
    inner_replicate,
    nu_values,
    r_b1,
    replicate_gap,
    xi_curve,
)


def oracle_xi(d, points, m, b1, b2, seed):
    """Resample, cross-fit, bin and average written out longhand"""
    X, y = d.X, d.y
    values = []
    for l, n_l in enumerate(points):
        outer = []
        for i in range(b2):
            gaps = []
            for b in range(b1):
                rng = replicate_stream(seed, l, i, b)
                draws = rng.integers(0, d.n, size=2 * n_l)
                perm = rng.permutation(2 * n_l)
                g1, g2 = draws[perm[:n_l]], draws[perm[n_l:]]

                c1 = np.linalg.lstsq(np.column_stack([np.ones(n_l), X[g1]]), y[g1], rcond=1e-10)[0]
                c2 = np.linalg.lstsq(np.column_stack([np.ones(n_l), X[g2]]), y[g2], rcond=1e-10)[0]
                se1 = (c1[0] + X[g2] @ c1[1:] - y[g2]) ** 2
                se2 = (c2[0] + X[g1] @ c2[1:] - y[g1]) ** 2

                B = float(max(se1.max(), se2.max()))
                k1 = np.bincount(np.minimum(np.floor(se1 * m / B).astype(np.int64), m - 1), minlength=m)
                k2 = np.bincount(np.minimum(np.floor(se2 * m / B).astype(np.int64), m - 1), minlength=m)
                w = (2 * np.arange(m) + 1) * B / (2 * m)
                gaps.append(np.abs(k1 / n_l * w - k2 / n_l * w))
            outer.append(float(np.array(gaps).mean(axis=0).sum()))
        values.append(float(np.array(outer).mean()))
    return values


@pytest.fixture
def tiny_dataset():
    rng = np.random.default_rng(2024)
    X = rng.normal(size=(10, 2))
    y = 0.5 + X[:, 0] - 2 * X[:, 1] + rng.normal(scale=0.5, size=10)
    return Dataset(y=y, X=X, columns=("a", "b"))


def test_matches_longhand_algorithm(tiny_dataset):
    curve = xi_curve(
        tiny_dataset,
        ["a", "b"],
        DesignPoints(points=[4, 6]),
        DiscretizationConfig(m=2),
        BootstrapConfig(b1=3, b2=3, seed=11),
    )
    expected = oracle_xi(tiny_dataset, [4, 6], m=2, b1=3, b2=3, seed=11)
    np.testing.assert_array_equal(curve.values, expected)
    assert curve.design_points == [4, 6]


def test_r_b1_matches_longhand(rng):
    X = rng.normal(size=(6, 1))
    d = Dataset(y=X[:, 0] + rng.normal(size=6), X=X, columns=["x"])
    value = r_b1(d, 4, ["x"], DiscretizationConfig(m=2), 3, lambda b: replicate_stream(5, 0, 0, b))
    assert value == oracle_xi(d, [4], m=2, b1=3, b2=1, seed=5)[0]


def test_bootstrap_halves_have_n_l_rows(linear_dataset):
    g1, g2 = bootstrap_pair(linear_dataset, 4, replicate_stream(0, 0, 0, 0))
    assert g1.n == g2.n == 4
    assert g1.columns == linear_dataset.columns


def test_stratified_halves_contain_every_level(blocked_dataset):
    for b in range(20):
        g1, g2 = bootstrap_pair(blocked_dataset, 5, replicate_stream(1, 0, 0, b), stratified=True)
        assert set(g1.blocks) == {"a", "b"}
        assert set(g2.blocks) == {"a", "b"}
        assert g1.n == g2.n == 5


def test_single_row_dataset_repeats_row():
    d = Dataset(y=[3.0], X=[[1.0]], columns=["x"])
    g1, g2 = bootstrap_pair(d, 3, replicate_stream(0, 0, 0, 0))
    np.testing.assert_array_equal(g1.y, [3.0, 3.0, 3.0])
    np.testing.assert_array_equal(g2.X[:, 0], [1.0, 1.0, 1.0])


def test_stratified_needs_blocks(linear_dataset):
    with pytest.raises(InvalidConfigError):
        bootstrap_pair(linear_dataset, 4, replicate_stream(0, 0, 0, 0), stratified=True)


def test_stratified_small_levels():
    d = Dataset(y=[1.0, 2.0, 3.0], X=[[1.0], [2.0], [3.0]], columns=["x"], blocks=["a", "a", "b"])
    with pytest.raises(StratumTooSmallError):
        bootstrap_pair(d, 2, replicate_stream(0, 0, 0, 0), stratified=True)


def test_design_point_below_level_count(blocked_dataset):
    with pytest.raises(StratumTooSmallError):
        bootstrap_pair(blocked_dataset, 1, replicate_stream(0, 0, 0, 0), stratified=True)


@pytest.mark.parametrize(
    "n_l, sizes, expected",
    [(10, [25, 15], [6, 4]), (3, [100, 1, 1], [1, 1, 1]), (4, [5, 5], [2, 2]), (7, [1, 1, 1], [3, 2, 2])],
)
def test_allocate_strata(n_l, sizes, expected):
    assert allocate_strata(n_l, sizes) == expected


def test_discretize_by_hand():
    np.testing.assert_array_equal(discretize_losses(np.array([0.1, 0.4, 0.9]), 2, 1.0), [2, 1])


def test_loss_equal_to_bound_goes_to_last_bin():
    np.testing.assert_array_equal(discretize_losses(np.array([0.0, 1.0]), 4, 1.0), [1, 0, 0, 1])


def test_single_interval():
    np.testing.assert_array_equal(discretize_losses(np.array([0.3, 0.2, 0.7, 1.0]), 1, 1.0), [4])


def test_loss_above_bound_rejected():
    with pytest.raises(LossExceedsBoundError):
        discretize_losses(np.array([0.5, 2.0]), 2, 1.0)


def test_nu_by_hand():
    profile = LossProfile(counts_1=[3, 0], counts_2=[2, 1], B=1.0, m=2, n_l=3)
    _, nu2 = nu_values(profile)
    np.testing.assert_allclose(nu2, [2 * 0.25 / 3, 1 * 0.75 / 3])


def test_nu_single_interval_is_midpoint():
    nu1, _ = nu_values(LossProfile(counts_1=[5], counts_2=[5], B=1.0, m=1, n_l=5))
    np.testing.assert_allclose(nu1, [0.5])


def test_gap_cases():
    same = LossProfile(counts_1=[2, 1], counts_2=[2, 1], B=1.0, m=2, n_l=3)
    np.testing.assert_array_equal(replicate_gap(same), [0.0, 0.0])

    apart = LossProfile(counts_1=[4, 0], counts_2=[0, 4], B=1.0, m=2, n_l=4)
    np.testing.assert_allclose(replicate_gap(apart), [0.25, 0.75])
    swapped = LossProfile(counts_1=[0, 4], counts_2=[4, 0], B=1.0, m=2, n_l=4)
    np.testing.assert_array_equal(replicate_gap(swapped), replicate_gap(apart))


def test_profile_counts_validated():
    with pytest.raises(ValueError):
        LossProfile(counts_1=[1, 1], counts_2=[2, 1], B=1.0, m=2, n_l=3)


def test_single_inner_replicate(linear_dataset):
    cfg = DiscretizationConfig(m=4)
    gap = inner_replicate(linear_dataset, 10, ["x1"], cfg, replicate_stream(3, 0, 0, 0))
    value = r_b1(linear_dataset, 10, ["x1"], cfg, 1, lambda b: replicate_stream(3, 0, 0, b))
    assert value == float(gap.sum())


def test_zero_loss_everywhere(rng):
    d = Dataset(y=np.zeros(20), X=rng.normal(size=(20, 2)), columns=["a", "b"])
    assert r_b1(d, 8, ["a", "b"], DiscretizationConfig(m=3), 4, lambda b: replicate_stream(0, 0, 0, b)) == 0.0


def test_single_outer_replicate(linear_dataset):
    cfg = DiscretizationConfig(m=5)
    curve = xi_curve(linear_dataset, ["x1", "x2"], DesignPoints(points=[10, 20]), cfg, BootstrapConfig(b1=2, b2=1, seed=4))
    for l, n_l in enumerate([10, 20]):
        expected = r_b1(linear_dataset, n_l, ["x1", "x2"], cfg, 2, lambda b: replicate_stream(4, l, 0, b))
        assert curve.entries[l].xi_hat == expected
        assert curve.entries[l].replicates == [expected]


def test_values_bounded_by_fixed_bound(linear_dataset):
    B = 1e4
    cfg = DiscretizationConfig(m=1000, bound_policy=BoundPolicy.FIXED, fixed_b=B)
    curve = xi_curve(linear_dataset, ["x1", "x2", "x3"], DesignPoints(points=[10, 30]), cfg, BootstrapConfig(b1=3, b2=3, seed=1))
    for entry in curve.entries:
        assert 0.0 <= entry.xi_hat <= B
        assert all(0.0 <= r <= B for r in entry.replicates)


def test_same_curve_for_any_worker_count(rng):
    X = rng.normal(size=(40, 3))
    d = Dataset(y=X @ [1.0, -1.0, 0.5] + rng.normal(size=40), X=X, columns=["a", "b", "c"])
    args = (d, ["a", "b", "c"], DesignPoints(points=[8, 14, 20]), DiscretizationConfig(m=5), BootstrapConfig(b1=4, b2=4, seed=9))
    serial = xi_curve(*args, workers=1)
    threaded = xi_curve(*args, workers=4)
    assert serial == threaded


def test_every_replicate_runs_once(mocker, linear_dataset):
    spy = mocker.spy(xi, "inner_replicate")
    xi_curve(linear_dataset, ["x1"], DesignPoints(points=[10, 20, 30]), DiscretizationConfig(m=3), BootstrapConfig(b1=2, b2=4, seed=0))
    assert spy.call_count == 3 * 2 * 4


def test_curve_metadata(linear_dataset):
    curve = xi_curve(linear_dataset, ["x2", "x1"], DesignPoints(points=[10, 20]), DiscretizationConfig(m=3), BootstrapConfig(b1=2, b2=2, seed=6))
    assert curve.model == ["x2", "x1"]
    assert (curve.m, curve.b1, curve.b2, curve.seed) == (3, 2, 2, 6)


def test_curve_decreases_with_sample_size():
    data_rng = np.random.default_rng(77)
    X = data_rng.normal(size=(120, 3))
    d = Dataset(y=X @ [1.0, 0.5, -1.0] + data_rng.normal(scale=0.5, size=120), X=X, columns=["a", "b", "c"])
    points = [20, 40, 60, 80, 100]
    curves = [
        xi_curve(d, ["a", "b", "c"], DesignPoints(points=points), DiscretizationConfig(m=5), BootstrapConfig(b1=5, b2=5, seed=seed)).values
        for seed in range(30)
    ]
    mean_curve = np.mean(curves, axis=0)
    slope = np.polyfit(points, mean_curve, 1)[0]
    # one-sided tolerance for Monte Carlo noise
    assert slope <= 0.1 * np.std(mean_curve) / np.std(points)


def test_inner_replicate_agrees_with_loss_profile(linear_dataset):
    cfg = DiscretizationConfig(m=4)
    model = ["x1", "x2"]
    gap = inner_replicate(linear_dataset, 12, model, cfg, replicate_stream(2, 0, 0, 0))

    g1, g2 = bootstrap_pair(linear_dataset, 12, replicate_stream(2, 0, 0, 0))
    se_1 = squared_errors(ols_fit(g1, model), g2)
    se_2 = squared_errors(ols_fit(g2, model), g1)
    B = float(max(se_1.max(), se_2.max()))
    profile = LossProfile(
        counts_1=discretize_losses(se_1, 4, B).tolist(),
        counts_2=discretize_losses(se_2, 4, B).tolist(),
        B=B,
        m=4,
        n_l=12,
    )
    np.testing.assert_allclose(gap, replicate_gap(profile), rtol=1e-12, atol=0)


def test_stratified_replicate_reuses_block_index(blocked_dataset):
    cfg = DiscretizationConfig(m=3)
    members = block_members(blocked_dataset)
    assert [m.shape[0] for m in members] == [25, 15]
    cached = inner_replicate(blocked_dataset, 8, ["x1"], cfg, replicate_stream(6, 0, 0, 0), True, members)
    fresh = inner_replicate(blocked_dataset, 8, ["x1"], cfg, replicate_stream(6, 0, 0, 0), True)
    np.testing.assert_array_equal(cached, fresh)


def test_xi_curve_leaves_design_checks_to_callers(caplog, linear_dataset):
    with caplog.at_level("WARNING"):
        xi_curve(linear_dataset, ["x1"], DesignPoints(points=[10, 20, 30]), DiscretizationConfig(m=3), BootstrapConfig(b1=1, b2=1))
    assert "cover both" not in caplog.text
