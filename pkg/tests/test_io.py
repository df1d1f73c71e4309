import math

import numpy as np
import pytest

import mshmm
from mshmm import (
    Dataset,
    load_dataset,
    load_paths,
    load_trace,
    save_dataset,
    save_paths,
    save_trace,
)
from mshmm.errors import DataError
from mshmm.model import StatePath

from conftest import random_model


class TestDatasetFile:
    def test_roundtrip_exact(self, rng, tmp_path):
        model = random_model(rng, 3, 2, absorbing=True, death_prob=0.5)
        data, _ = mshmm.sample_dataset(mshmm.SimulationSpec(model, 10, 5, seed=3))
        path = tmp_path / "data.csv"
        save_dataset(data, path)
        loaded = load_dataset(path)
        assert loaded.seq_ids == data.seq_ids
        for a, b in zip(loaded.sequences, data.sequences):
            np.testing.assert_array_equal(a, b)
        for a, b in zip(loaded.alive_masks, data.alive_masks):
            np.testing.assert_array_equal(a, b)

    def test_write_deterministic(self, rng, tmp_path):
        data = Dataset(sequences=(rng.normal(0, 1, (4, 3)),))
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        save_dataset(data, p1)
        save_dataset(data, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_header_and_one_based_t(self, rng, tmp_path):
        data = Dataset(sequences=(np.array([[1.5, -2.0], [0.25, 4.0]]),),
                       seq_ids=("alpha",))
        path = tmp_path / "d.csv"
        save_dataset(data, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "seq_id,t,y_1,y_2"
        assert lines[1] == "alpha,1,1.5,-2"
        assert lines[2] == "alpha,2,0.25,4"

    def test_death_sentinel_parsed(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text(
            "seq_id,t,y_1,y_2\n"
            "p1,1,1.0,2.0\n"
            "p1,2,0,0\n"
            "p1,3,0,0\n"
            "p2,1,3.0,1.0\n"
        )
        data = load_dataset(path)
        assert data.alive_masks[0].tolist() == [True, False, False]
        assert data.alive_masks[1].tolist() == [True]

    def test_zero_then_data_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text(
            "seq_id,t,y_1\n"
            "p1,1,1.0\n"
            "p1,2,0\n"
            "p1,3,2.5\n"
        )
        with pytest.raises(DataError, match="reserved zero vector"):
            load_dataset(path)

    def test_nonconsecutive_sequence_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text(
            "seq_id,t,y_1\n"
            "a,1,1.0\n"
            "b,1,2.0\n"
            "a,2,1.5\n"
        )
        with pytest.raises(DataError, match="not consecutive"):
            load_dataset(path)

    def test_t_must_count_from_one(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("seq_id,t,y_1\na,2,1.0\n")
        with pytest.raises(DataError, match="expects t=1"):
            load_dataset(path)

    def test_t_gap_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("seq_id,t,y_1\na,1,1.0\na,3,1.5\n")
        with pytest.raises(DataError, match="expects t=2"):
            load_dataset(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("id,time,y_1\na,1,1.0\n")
        with pytest.raises(DataError, match="header"):
            load_dataset(path)

    def test_non_numeric_cell_names_line(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("seq_id,t,y_1\na,1,oops\n")
        with pytest.raises(DataError, match="line 2"):
            load_dataset(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("")
        with pytest.raises(DataError, match="empty"):
            load_dataset(path)


class TestPathsFile:
    def test_roundtrip(self, tmp_path):
        paths = [StatePath(0, [0, 1, 2]), StatePath(1, [2, 2])]
        file = tmp_path / "paths.csv"
        save_paths(paths, ("s1", "s2"), file)
        lines = file.read_text().splitlines()
        assert lines[0] == "seq_id,t,state"
        assert lines[1] == "s1,1,1"           # states are 1-based on disk
        assert lines[-1] == "s2,2,3"
        loaded = load_paths(file)
        assert loaded[0][0] == "s1"
        np.testing.assert_array_equal(loaded[0][1], [0, 1, 2])
        np.testing.assert_array_equal(loaded[1][1], [2, 2])

    def test_zero_based_state_rejected(self, tmp_path):
        file = tmp_path / "paths.csv"
        file.write_text("seq_id,t,state\na,1,0\n")
        with pytest.raises(DataError, match="1-based"):
            load_paths(file)


class TestTraceFile:
    def test_roundtrip_with_infinite_first_delta(self, tmp_path):
        trace = (-3.5, -3.2, -3.19)
        file = tmp_path / "trace.csv"
        save_trace(trace, file)
        lines = file.read_text().splitlines()
        assert lines[0] == "iter,llh,delta"
        assert lines[1] == "1,-3.5,inf"
        rows = load_trace(file)
        assert rows[0] == (1, -3.5, math.inf)
        assert rows[1][0] == 2
        assert rows[1][2] == pytest.approx(0.3, abs=1e-12)

    def test_seventeen_digit_rendering(self, tmp_path):
        value = -2.718281828459045235
        file = tmp_path / "trace.csv"
        save_trace((value,), file)
        line = file.read_text().splitlines()[1]
        assert line.split(",")[1] == "-2.7182818284590451"
        assert float(line.split(",")[1]) == value
