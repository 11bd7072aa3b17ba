import json
import logging

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from vcdim.core import errors
from vcdim.core.dataset import Dataset, validate_dataset
from vcdim.core.errors import (
    EmptyStratumError,
    InvalidConfigError,
    LengthMismatchError,
    MissingColumnError,
    NonFiniteError,
    VcdimError,
)
from vcdim.core.rng import integer_seed, replicate_stream, stream
from vcdim.core.utils import DateTimeEncoder, file_digest, format_real, write_tsv
from vcdim.schemas.config import (
    BootstrapConfig,
    BoundPolicy,
    CGrid,
    DesignPoints,
    DiscretizationConfig,
    RunConfig,
)


def test_valid_dataset_accepted():
    d = validate_dataset(Dataset(y=[1, 2, 3], X=[[1, 2], [3, 4], [5, 6]], columns=["a", "b"]))
    assert (d.n, d.p) == (3, 2)
    assert d.columns == ("a", "b")


def test_row_mismatch_rejected():
    with pytest.raises(LengthMismatchError):
        validate_dataset(Dataset(y=[1, 2, 3], X=np.ones((4, 2)), columns=["a", "b"]))


def test_column_name_mismatch_rejected():
    with pytest.raises(LengthMismatchError):
        validate_dataset(Dataset(y=[1, 2], X=np.ones((2, 2)), columns=["a"]))


def test_nan_cell_reported_with_position():
    X = np.ones((3, 2))
    X[2, 1] = np.nan
    with pytest.raises(NonFiniteError) as exc:
        validate_dataset(Dataset(y=[1, 2, 3], X=X, columns=["a", "b"]))
    assert exc.value.details == {"row": 2, "column": "b"}


def test_infinite_response_rejected():
    with pytest.raises(NonFiniteError):
        validate_dataset(Dataset(y=[1, np.inf], X=np.ones((2, 1)), columns=["a"]))


def test_missing_block_label_rejected():
    with pytest.raises(EmptyStratumError):
        validate_dataset(Dataset(y=[1, 2], X=np.ones((2, 1)), columns=["a"], blocks=["g", ""]))


def test_dataset_arrays_are_read_only(linear_dataset):
    with pytest.raises(ValueError):
        linear_dataset.X[0, 0] = 1.0


def test_select_and_take_keep_blocks(blocked_dataset):
    sub = blocked_dataset.select(["x2"])
    assert sub.columns == ("x2",)
    np.testing.assert_array_equal(sub.X[:, 0], blocked_dataset.X[:, 1])
    rows = blocked_dataset.take(np.array([0, 0, 39]))
    assert list(rows.blocks) == ["a", "a", "b"]
    assert blocked_dataset.block_levels == ["a", "b"]


def test_unknown_column_raises(linear_dataset):
    with pytest.raises(MissingColumnError) as exc:
        linear_dataset.select(["x9"])
    assert exc.value.column == "x9"


def test_design_points_sorted_and_deduplicated(caplog):
    with caplog.at_level(logging.WARNING):
        dp = DesignPoints(points=[30, 10, 10, 20])
    assert dp.points == [10, 20, 30]
    assert dp.L == 3
    assert "deduplicated" in caplog.text


@pytest.mark.parametrize("points", [[5], [4, 4], [0, 10], [-3, 10]])
def test_design_points_rejected(points):
    with pytest.raises(ValidationError):
        DesignPoints(points=points)


def test_design_point_placement_advice():
    assert DesignPoints(points=[100, 250, 300, 350]).check_against(400) == []
    assert any("cover both" in w for w in DesignPoints(points=[300, 350, 400]).check_against(400))
    assert any("exceeds" in w for w in DesignPoints(points=[100, 500]).check_against(200))


def test_design_points_all_beyond_n_rejected():
    with pytest.raises(InvalidConfigError):
        DesignPoints(points=[50, 100]).check_against(40)
    # one point inside the sample is enough
    assert any("cover both" in w for w in DesignPoints(points=[40, 100]).check_against(40))


def test_fixed_bound_policy_needs_value():
    with pytest.raises(ValidationError):
        DiscretizationConfig(bound_policy=BoundPolicy.FIXED)
    assert DiscretizationConfig(bound_policy="fixed", fixed_b=2.5).fixed_b == 2.5


def test_default_c_grid():
    values = CGrid().values()
    assert values.shape == (10000,)
    assert values[0] == 0.01
    assert values[-1] == 100.0
    assert 3.0 in values


def test_c_grid_range_checked():
    with pytest.raises(ValidationError):
        CGrid(c_min=5, c_max=1)


def test_run_config_round_trip(tmp_path):
    run = RunConfig(
        design_points=DesignPoints(points=[50, 100]),
        bootstrap=BootstrapConfig(b1=4, b2=5, seed=99),
        eta=0.1,
        d_max=12.5,
    )
    path = run.dump(tmp_path / "run.json")
    assert RunConfig.load(path) == run


def test_run_config_invalid_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"discretization": {"m": 0}}), encoding="utf-8")
    with pytest.raises(InvalidConfigError) as exc:
        RunConfig.load(path)
    assert exc.value.details["errors"]

    path.write_text("{", encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        RunConfig.load(path)


def test_design_points_required_at_run_time():
    with pytest.raises(InvalidConfigError):
        RunConfig().require_design_points()


def test_keyed_streams_reproducible():
    a = stream(3, 1, 2).integers(0, 1000, 20)
    b = stream(3, 1, 2).integers(0, 1000, 20)
    c = stream(3, 1, 3).integers(0, 1000, 20)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    np.testing.assert_array_equal(
        replicate_stream(3, 0, 1, 2).random(5), stream(3, 1, 0, 1, 2).random(5)
    )


def test_integer_seed_is_32_bit_and_stable():
    s = integer_seed(5, 3)
    assert s == integer_seed(5, 3)
    assert 0 <= s < 2**32


def test_error_exit_codes_distinct():
    classes = [
        obj for obj in vars(errors).values()
        if isinstance(obj, type) and issubclass(obj, VcdimError)
    ]
    codes = [cls.exit_code for cls in classes]
    assert len(set(codes)) == len(codes)
    assert min(codes) >= 10
    assert len({cls.error_type for cls in classes}) == len(classes)


def test_format_real():
    assert format_real(0.1) == "0.1"
    assert float(format_real(1 / 3)) == 1 / 3
    assert format_real(float("nan")) == "nan"
    assert format_real(float("-inf")) == "-inf"


def test_write_tsv_and_digest(tmp_path):
    path = write_tsv(tmp_path / "t.tsv", ["a", "b"], [[1, 0.25], ["x", None]])
    assert path.read_text(encoding="utf-8") == "a\tb\n1\t0.25\nx\t\n"
    assert len(file_digest(path)) == 64


def test_write_tsv_quotes_cells_with_tabs(tmp_path):
    path = write_tsv(tmp_path / "t.tsv", ["name", "v"], [["a\tb", 1.5], ["plain", 2.0]])
    frame = pd.read_csv(path, sep="\t")
    assert frame["name"].tolist() == ["a\tb", "plain"]
    assert frame["v"].tolist() == [1.5, 2.0]


def test_write_tsv_header_only(tmp_path):
    path = write_tsv(tmp_path / "t.tsv", ["a", "b"], [])
    assert path.read_text(encoding="utf-8") == "a\tb\n"


def test_encoder_handles_numpy():
    payload = {"i": np.int64(3), "f": np.float64(0.5), "a": np.arange(3)}
    assert json.loads(json.dumps(payload, cls=DateTimeEncoder)) == {"i": 3, "f": 0.5, "a": [0, 1, 2]}
