import json

import numpy as np
import pandas as pd
import pytest

from deconvldp import (
    ColumnSpec,
    DataError,
    LabeledDataset,
    ParameterError,
    SupportBox,
    SweepSpec,
    ingest_csv,
    run_sweep,
    write_dataset_csv,
)
from deconvldp.cli import main
from deconvldp.dataio import SWEEP_HEADER, emit_plotdata
from deconvldp.privacy import Dataset


class TestColumnSpec:
    def test_log_shift_examples(self):
        spec = ColumnSpec(source="v", transform="log_shift", shift=600.0)
        out = spec.apply(pd.Series([700.0, 750.0, 800.0]))
        np.testing.assert_allclose(out, np.log([100.0, 150.0, 200.0]), rtol=1e-15)

    def test_log_shift_domain_violation(self):
        spec = ColumnSpec(source="v", transform="log_shift", shift=600.0)
        with pytest.raises(DataError, match="domain violation"):
            spec.apply(pd.Series([700.0, 600.0]))

    def test_indicator_strips_whitespace(self):
        spec = ColumnSpec(source="v", transform="indicator", positive_labels=(">50K",))
        out = spec.apply(pd.Series([" >50K", "<=50K", ">50K "]))
        np.testing.assert_array_equal(out, [1.0, 0.0, 1.0])

    def test_unknown_transform_rejected(self):
        with pytest.raises(ParameterError):
            ColumnSpec(source="v", transform="sqrt")


class TestIngest:
    def test_basic_with_response(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x,y\n0.1,1.0\n0.2,0.0\n0.3,1.0\n")
        result = ingest_csv(
            path,
            ColumnSpec(source="x", support=(0.0, 1.0)),
            ColumnSpec(source="y"),
        )
        assert isinstance(result.data, LabeledDataset)
        assert result.rows_total == 3 and result.rows_dropped == 0
        assert isinstance(result.support, SupportBox)
        np.testing.assert_array_equal(result.data.responses, [1.0, 0.0, 1.0])

    def test_question_marks_dropped_with_counts(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x,y\n0.1,1\n?,0\n0.3,?\n0.4,0\n")
        result = ingest_csv(path, ColumnSpec(source="x"), ColumnSpec(source="y"))
        assert result.rows_total == 4
        assert result.rows_dropped == 2
        assert result.data.n == 2

    def test_missing_column_raises(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(DataError, match="'x' not found"):
            ingest_csv(path, ColumnSpec(source="x"))

    def test_write_then_ingest_is_bit_exact(self, tmp_path):
        rng = np.random.default_rng(5)
        values = rng.standard_normal(200) * np.pi
        data = Dataset(records=values[:, None], column_names=["x"])
        path = tmp_path / "round.csv"
        write_dataset_csv(path, data)
        back = ingest_csv(path, ColumnSpec(source="x")).data
        np.testing.assert_array_equal(back.records, data.records)

    def test_labeled_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(6)
        data = LabeledDataset(rng.standard_normal(100), rng.standard_normal(100))
        path = tmp_path / "round.csv"
        write_dataset_csv(path, data)
        back = ingest_csv(path, ColumnSpec(source="x"), ColumnSpec(source="y")).data
        np.testing.assert_array_equal(back.inputs, data.inputs)
        np.testing.assert_array_equal(back.responses, data.responses)


@pytest.fixture
def small_labeled():
    rng = np.random.default_rng(7)
    x = rng.random(40) * 2 - 1
    y = np.sin(3 * x) + 0.2 * rng.standard_normal(40)
    return LabeledDataset(x, y)


@pytest.fixture
def unit_support():
    return SupportBox(lower=np.array([-1.0]), upper=np.array([1.0]))


class TestSweep:
    def test_row_count_and_reference_rows(self, small_labeled, unit_support):
        spec = SweepSpec(epsilons=(1.0, 4.0), seeds=2)
        rows = run_sweep(spec, small_labeled, unit_support, cv_subsample=40)
        # (1 reference + 2 epsilons * 2 seeds) cells * 2 estimators * 1 metric
        assert len(rows) == (1 + 4) * 2
        ref = [r for r in rows if r["epsilon"] == np.inf]
        assert {r["seed"] for r in ref} == {-1}
        assert {r["estimator"] for r in ref} == {"kernel", "linear"}
        assert all(np.isfinite(r["value"]) for r in ref)

    def test_failed_cell_becomes_nan_row(self, unit_support):
        # constant inputs make the OLS design rank deficient at the reference
        data = LabeledDataset(np.zeros(10), np.arange(10.0))
        spec = SweepSpec(epsilons=(1.0,), estimators=("linear",))
        rows = run_sweep(spec, data, unit_support)
        ref = next(r for r in rows if r["epsilon"] == np.inf)
        assert np.isnan(ref["value"])
        assert "rank deficient" in ref["error"]

    def test_rejects_privatized_input(self, unit_support):
        data = LabeledDataset(np.zeros(5), np.zeros(5), privatized=True)
        with pytest.raises(ParameterError):
            run_sweep(SweepSpec(epsilons=(1.0,)), data, unit_support)

    def test_emit_plotdata_schema_and_manifest(
        self, small_labeled, unit_support, tmp_path
    ):
        spec = SweepSpec(epsilons=(2.0,), seeds=1)
        rows = run_sweep(spec, small_labeled, unit_support, cv_subsample=40)
        csv_path, json_path = emit_plotdata(rows, tmp_path, {"note": "t"})
        frame = pd.read_csv(csv_path)
        assert list(frame.columns) == SWEEP_HEADER
        assert len(frame) == len(rows)
        # canonical order: epsilon, then seed, then estimator
        assert frame["epsilon"].is_monotonic_increasing
        manifest = json.loads(json_path.read_text())
        assert "package_version" in manifest
        assert manifest["note"] == "t"

    def test_spec_validation(self):
        with pytest.raises(ParameterError):
            SweepSpec(epsilons=())
        with pytest.raises(ParameterError):
            SweepSpec(epsilons=(1.0,), seeds=0)
        with pytest.raises(ParameterError):
            SweepSpec(epsilons=(1.0,), estimators=("tree",))


class TestCli:
    def _synth(self, tmp_path, n=200, curve="g1", name="data.csv"):
        out = tmp_path / name
        rc = main(
            [
                "synth", "--dist", "mixture", "--curve", curve,
                "--n", str(n), "--seed", "3", "--out", str(out),
            ]
        )
        assert rc == 0
        return out

    def test_synth_writes_csv_and_metadata(self, tmp_path):
        out = self._synth(tmp_path)
        frame = pd.read_csv(out)
        assert list(frame.columns) == ["x", "y"]
        assert len(frame) == 200
        meta = json.loads(out.with_suffix(".json").read_text())
        assert meta["distribution"] == "mixture"

    def test_privatize_round(self, tmp_path):
        src = self._synth(tmp_path)
        out = tmp_path / "priv.csv"
        rc = main(
            [
                "privatize", "--input", str(src), "--epsilon", "2",
                "--support=-3:3", "--seed", "1", "--clamp", "--out", str(out),
            ]
        )
        assert rc == 0
        z = pd.read_csv(out)["x"].to_numpy()
        x = pd.read_csv(src)["x"].to_numpy()
        assert z.shape == x.shape
        assert not np.allclose(z, x)

    def test_deconv_kde_outputs_and_determinism(self, tmp_path):
        src = self._synth(tmp_path, curve="none")
        priv = tmp_path / "priv.csv"
        main(
            [
                "privatize", "--input", str(src), "--epsilon", "2",
                "--support=-3:3", "--clamp", "--out", str(priv),
            ]
        )
        args = [
            "deconv-kde", "--input", str(priv), "--epsilon", "2",
            "--support=-3:3", "--bandwidth", "0.4",
        ]
        assert main(args + ["--out", str(tmp_path / "a")]) == 0
        assert main(args + ["--out", str(tmp_path / "b")]) == 0
        a = (tmp_path / "a" / "deconv_kde.csv").read_bytes()
        b = (tmp_path / "b" / "deconv_kde.csv").read_bytes()
        assert a == b
        meta = json.loads((tmp_path / "a" / "deconv_kde.json").read_text())
        assert meta["estimator_tag"] == "deconv_kde"
        assert meta["bandwidth"] == 0.4

    def test_regress_linear(self, tmp_path):
        src = self._synth(tmp_path)
        out = tmp_path / "reg"
        rc = main(
            [
                "regress", "--input", str(src), "--model", "linear",
                "--support=-3:3", "--out", str(out),
            ]
        )
        assert rc == 0
        payload = json.loads((out / "metrics.json").read_text())
        assert len(payload["coefficients"]) == 2
        assert payload["metrics"]["mse"] >= 0

    def test_cv_command_writes_scores(self, tmp_path):
        src = self._synth(tmp_path, n=60)
        out = tmp_path / "cv"
        rc = main(
            [
                "cv", "--input", str(src), "--support=-3:3",
                "--grid", "0.2:2:4", "--out", str(out),
            ]
        )
        assert rc == 0
        scores = pd.read_csv(out / "cv_scores.csv")
        assert list(scores.columns) == ["h", "score"]
        assert len(scores) == 4

    def test_sweep_command(self, tmp_path):
        src = self._synth(tmp_path, n=80)
        out = tmp_path / "sweep"
        rc = main(
            [
                "sweep", "--input", str(src), "--support=-3:3",
                "--epsilons", "1,4", "--seeds", "1",
                "--cv-subsample", "80", "--out", str(out),
            ]
        )
        assert rc == 0
        frame = pd.read_csv(out / "sweep.csv")
        assert list(frame.columns) == SWEEP_HEADER
        assert len(frame) == (1 + 2) * 2

    def test_exit_codes(self, tmp_path):
        src = self._synth(tmp_path)
        bad_support = main(
            [
                "privatize", "--input", str(src), "--epsilon", "1",
                "--support=oops", "--out", str(tmp_path / "o.csv"),
            ]
        )
        assert bad_support == 2
        missing_col = main(
            [
                "privatize", "--input", str(src), "--epsilon", "1",
                "--column", "nope", "--support=-3:3",
                "--out", str(tmp_path / "o.csv"),
            ]
        )
        assert missing_col == 3
