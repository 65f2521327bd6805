import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsadvisor.errors import EmptyInput, ParseError, TooShort
from tsadvisor.series import (
    SeriesSet,
    SplitSpec,
    TimeSeries,
    load_csv,
    load_jsonl,
    minmax_normalize,
    minmax_values,
    save_csv,
    save_jsonl,
    sliding_windows,
    split,
)


class TestTimeSeries:
    def test_values_read_only(self):
        ts = TimeSeries("a", [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            ts.values[0] = 99.0

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            TimeSeries("a", [1.0, float("nan")])

    def test_rejects_single_point(self):
        with pytest.raises(ValueError):
            TimeSeries("a", [1.0])

    def test_rejects_2d(self):
        with pytest.raises(ValueError):
            TimeSeries("a", [[1.0, 2.0], [3.0, 4.0]])


class TestSeriesSet:
    def test_unique_ids_enforced(self):
        a = TimeSeries("x", [1.0, 2.0])
        with pytest.raises(ValueError):
            SeriesSet((a, a))

    def test_lookup_by_id(self):
        a = TimeSeries("x", [1.0, 2.0])
        b = TimeSeries("y", [3.0, 4.0])
        ss = SeriesSet((a, b))
        assert ss["y"] is b
        with pytest.raises(KeyError):
            ss["z"]


class TestCsvRoundTrip:
    def test_wide_round_trip(self, tmp_path):
        ss = SeriesSet(
            (TimeSeries("a", [1.5, 2.5, 3.5]), TimeSeries("b", [0.1, 0.2, 0.3]))
        )
        path = tmp_path / "wide.csv"
        save_csv(ss, path)
        back = load_csv(path)
        assert back.ids() == ["a", "b"]
        for sid in back.ids():
            np.testing.assert_array_equal(back[sid].values, ss[sid].values)

    def test_headerless_wide(self, tmp_path):
        path = tmp_path / "plain.csv"
        path.write_text("1.0,2.0\n3.0,4.0\n")
        ss = load_csv(path)
        assert ss.ids() == ["series-0", "series-1"]

    def test_long_layout(self, tmp_path):
        path = tmp_path / "long.csv"
        path.write_text("id,value\ns1,1.0\ns1,2.0\ns2,5.0\ns2,6.0\n")
        ss = load_csv(path, layout="long")
        np.testing.assert_array_equal(ss["s1"].values, [1.0, 2.0])

    def test_parse_error_names_location(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,oops\n")
        with pytest.raises(ParseError) as err:
            load_csv(path)
        assert "row 1" in str(err.value)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(EmptyInput):
            load_csv(path)


class TestJsonl:
    def test_round_trip(self, tmp_path):
        ss = SeriesSet((TimeSeries("a", [1.0, 2.0]), TimeSeries("b", [3.0, 4.0, 5.0])))
        path = tmp_path / "s.jsonl"
        save_jsonl(ss, path)
        back = load_jsonl(path)
        assert back.ids() == ["a", "b"]
        np.testing.assert_array_equal(back["b"].values, [3.0, 4.0, 5.0])

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text("{not json}\n")
        with pytest.raises(ParseError):
            load_jsonl(path)


class TestSplit:
    def test_lengths_and_order(self):
        ts = TimeSeries("a", np.arange(100, dtype=float))
        train, val, test = split(ts, SplitSpec(history_len=10, horizon=5))
        assert len(train) == 70 and len(val) == 10 and len(test) == 20
        np.testing.assert_array_equal(
            np.concatenate([train.values, val.values, test.values]), ts.values
        )

    def test_remainder_goes_to_test(self):
        ts = TimeSeries("a", np.arange(101, dtype=float))
        train, val, test = split(ts, SplitSpec(history_len=10, horizon=5))
        assert len(train) == 70 and len(val) == 10 and len(test) == 21

    def test_too_short(self):
        ts = TimeSeries("a", np.arange(10, dtype=float))
        with pytest.raises(TooShort):
            split(ts, SplitSpec(history_len=3, horizon=2))

    def test_ratio_validation(self):
        with pytest.raises(ValueError):
            SplitSpec(train_ratio=0.5, val_ratio=0.1, test_ratio=0.1)


class TestSlidingWindows:
    def test_count_formula(self):
        ts = TimeSeries("a", np.arange(50, dtype=float))
        wins = sliding_windows(ts, 10, 5, stride=3)
        assert len(wins) == (50 - 10 - 5) // 3 + 1

    def test_window_contents(self):
        ts = TimeSeries("a", np.arange(20, dtype=float))
        wins = sliding_windows(ts, 3, 2)
        hist, fut = wins[0]
        np.testing.assert_array_equal(hist, [0, 1, 2])
        np.testing.assert_array_equal(fut, [3, 4])

    def test_too_short(self):
        ts = TimeSeries("a", np.arange(5, dtype=float))
        with pytest.raises(TooShort):
            sliding_windows(ts, 4, 4)


class TestMinMax:
    def test_constant_maps_to_half(self):
        assert np.all(minmax_values(np.full(5, 3.0)) == 0.5)

    def test_range_is_unit(self):
        ts = minmax_normalize(TimeSeries("a", [2.0, 4.0, 6.0]))
        assert ts.values.min() == 0.0 and ts.values.max() == 1.0

    @given(
        st.lists(
            st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
            min_size=2,
            max_size=50,
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_output_always_in_unit_interval(self, values):
        out = minmax_values(np.asarray(values))
        assert np.all(out >= 0.0) and np.all(out <= 1.0)
