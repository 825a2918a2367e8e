"""Experiment driver tests: spec validation, determinism, parallel/serial
equivalence, record layout, and file formats."""

import json

import pytest

from hrcslab import CapacityError, ConfigurationError
from hrcslab.runner import (
    CSV_COLUMNS,
    ExperimentSpec,
    run_experiment,
    write_records,
)

from hrcslab import theory


def cp_spec(**overrides):
    base = dict(
        kind="cp_sweep",
        n_system=2,
        n_bath=1,
        steps=(1, 2),
        instances=25,
        master_seed=99,
    )
    base.update(overrides)
    return ExperimentSpec(**base)


def spec_doc(**overrides):
    doc = {
        "schema_version": 1,
        "kind": "cp_sweep",
        "n_system": 2,
        "n_bath": 1,
        "steps": [1, 2],
        "instances": 10,
        "master_seed": 5,
    }
    doc.update(overrides)
    return doc


class TestSpecParsing:
    def test_round_trip(self):
        spec = ExperimentSpec.from_json_dict(spec_doc())
        assert spec.kind == "cp_sweep" and spec.steps == (1, 2)

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigurationError, match="unknown config keys"):
            ExperimentSpec.from_json_dict(spec_doc(surprise=1))

    def test_wrong_schema_version_rejected(self):
        with pytest.raises(ConfigurationError, match="schema_version"):
            ExperimentSpec.from_json_dict(spec_doc(schema_version=2))

    def test_missing_required_keys_rejected(self):
        doc = spec_doc()
        del doc["steps"]
        with pytest.raises(ConfigurationError, match="missing config keys"):
            ExperimentSpec.from_json_dict(doc)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigurationError):
            ExperimentSpec.from_json_dict(spec_doc(kind="mystery"))

    def test_theory_table_needs_family(self):
        with pytest.raises(ConfigurationError, match="theory_family"):
            ExperimentSpec.from_json_dict(spec_doc(kind="theory_table"))


class TestCapacity:
    def test_enumeration_capacity_refused_before_work(self):
        spec = cp_spec(steps=(25,))  # n_eff = 27 > 22
        with pytest.raises(CapacityError):
            run_experiment(spec)

    def test_trajectory_capacity_refused(self):
        spec = ExperimentSpec(
            kind="xeb", n_system=13, n_bath=12, steps=(1,), instances=2, shots=10
        )
        with pytest.raises(CapacityError):
            run_experiment(spec)


class TestRunExperiment:
    def test_cp_sweep_record_layout(self):
        records = run_experiment(cp_spec())
        assert len(records) == 2
        assert [r.steps for r in records] == [1, 2]
        for rec in records:
            assert rec.statistic == "collision_probability"
            assert rec.theory_source == "hrcs_power_sum_exact"
            assert rec.measured.count == 25
            target = theory.hrcs_power_sum(2, 1, rec.steps, 2, "exact")
            assert rec.theory_value == pytest.approx(target, rel=1e-12)
            assert abs(rec.measured.mean - target) < 4 * rec.measured.std_error

    def test_ps_sweep_shares_instances_across_orders(self):
        spec = cp_spec(kind="ps_sweep", k_orders=(2, 3), steps=(2,))
        records = run_experiment(spec)
        assert [r.order for r in records] == [2, 3]
        cp_records = run_experiment(cp_spec(steps=(2,)))
        assert records[0].measured.mean == pytest.approx(
            cp_records[0].measured.mean, rel=1e-12
        )

    def test_marginal_sweep_statistics(self):
        spec = cp_spec(kind="marginal_sweep", steps=(1,), instances=40)
        records = run_experiment(spec)
        assert [r.statistic for r in records] == [
            "marginal_cp_spatial",
            "marginal_cp_temporal",
            "marginal_cp_per_step",
        ]
        for rec in records:
            assert abs(rec.measured.mean - rec.theory_value) < 4 * rec.measured.std_error

    def test_reset_check_records(self):
        spec = cp_spec(kind="reset_check", steps=(2,), instances=30)
        records = run_experiment(spec)
        stats = [r.statistic for r in records]
        assert stats == [
            "collision_probability_reset",
            "collision_probability_no_reset",
            "power_sum_reset",
            "power_sum_no_reset",
        ]

    def test_theory_table_pure_sweep(self):
        spec = ExperimentSpec(
            kind="theory_table",
            n_system=2,
            n_bath=1,
            steps=(1, 2, 3),
            k_orders=(2,),
            theory_family="hrcs_power_sum",
        )
        records = run_experiment(spec)
        assert [r.measured.mean for r in records] == [
            theory.hrcs_power_sum(2, 1, t, 2, "exact") for t in (1, 2, 3)
        ]
        assert all(r.measured.std_error == 0.0 for r in records)

    def test_tvd_bounded_by_theory(self):
        spec = cp_spec(kind="tvd", steps=(1, 2), instances=20)
        records = run_experiment(spec)
        for rec in records:
            assert rec.measured.mean <= rec.theory_value

    def test_xeb_small_run(self):
        spec = cp_spec(kind="xeb", steps=(1,), instances=30, shots=400)
        rec = run_experiment(spec)[0]
        assert abs(rec.measured.mean - rec.theory_value) < 4 * rec.measured.std_error

    def test_noisy_xeb_small_run(self):
        spec = cp_spec(
            kind="noisy_xeb", steps=(1, 2), gammas=(0.7,), instances=40, shots=300
        )
        records = run_experiment(spec)
        for rec in records:
            assert rec.gamma == 0.7
            assert rec.theory_source == "noisy_xeb_exact"
            assert abs(rec.measured.mean - rec.theory_value) < 4 * rec.measured.std_error

    def test_pop_hist_reports_ks_and_integral(self):
        spec = ExperimentSpec(
            kind="pop_hist", n_system=2, n_bath=1, steps=(2,), instances=40, master_seed=1
        )
        ks_rec, int_rec = run_experiment(spec)
        assert ks_rec.statistic == "pop_ks_to_porter_thomas"
        assert 0.0 <= ks_rec.measured.mean < 0.2
        assert int_rec.statistic == "pop_density_integral"
        assert int_rec.measured.mean == pytest.approx(1.0, abs=0.05)

    def test_instance_failure_reports_seed(self, monkeypatch):
        import hrcslab.runner as runner_mod

        def boom(spec_dict, t, orders, index):
            if index == 3:
                raise RuntimeError("synthetic fault")
            return [0.1]

        monkeypatch.setattr(runner_mod, "_instance_power_sums", boom)
        with pytest.raises(runner_mod.InstanceFailure, match=r"instance 3 .*stream seed 0x"):
            run_experiment(cp_spec(steps=(1,)))


class TestDeterminism:
    def test_rerun_identical(self):
        a = run_experiment(cp_spec())
        b = run_experiment(cp_spec())
        assert [r.to_json_dict() for r in a] == [r.to_json_dict() for r in b]

    def test_worker_count_invariance(self):
        serial = run_experiment(cp_spec(), workers=1)
        parallel = run_experiment(cp_spec(), workers=3)
        assert [r.to_json_dict() for r in serial] == [r.to_json_dict() for r in parallel]

    def test_seed_changes_measurements(self):
        a = run_experiment(cp_spec())
        b = run_experiment(cp_spec(master_seed=100))
        assert a[0].measured.mean != b[0].measured.mean

    def test_adding_parameter_points_keeps_existing_instances(self):
        short = run_experiment(cp_spec(steps=(1,)))
        longer = run_experiment(cp_spec(steps=(1, 2)))
        assert short[0].measured.mean == pytest.approx(longer[0].measured.mean, rel=1e-15)


class TestWriteRecords:
    def test_empty_csv_has_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_records([], str(path), "csv")
        assert path.read_text() == ",".join(CSV_COLUMNS) + "\n"

    def test_empty_jsonl_is_empty(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        write_records([], str(path), "jsonl")
        assert path.read_text() == ""

    def test_jsonl_round_trip(self, tmp_path):
        records = run_experiment(cp_spec(instances=5))
        path = tmp_path / "out.jsonl"
        write_records(records, str(path), "jsonl")
        lines = path.read_text().splitlines()
        assert len(lines) == len(records)
        for rec, line in zip(records, lines):
            parsed = json.loads(line)
            assert parsed == json.loads(json.dumps(rec.to_json_dict()))
            assert list(parsed) == sorted(parsed)

    def test_jsonl_floats_have_17_significant_digits(self, tmp_path):
        records = run_experiment(cp_spec(instances=5))
        path = tmp_path / "out.jsonl"
        write_records(records, str(path), "jsonl")
        parsed = json.loads(path.read_text().splitlines()[0])
        assert parsed["mean"] == records[0].measured.mean  # lossless round trip

    def test_csv_column_order(self, tmp_path):
        records = run_experiment(cp_spec(instances=5))
        path = tmp_path / "out.csv"
        write_records(records, str(path), "csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "n_A,n_B,t,K,gamma,statistic,mean,std_error,theory_value"
        first = lines[1].split(",")
        assert first[0] == "2" and first[1] == "1" and first[2] == "1"
        assert first[5] == "collision_probability"

    def test_byte_identical_files_across_runs_and_workers(self, tmp_path):
        paths = []
        for i, workers in enumerate((1, 1, 2)):
            path = tmp_path / f"run{i}.jsonl"
            write_records(run_experiment(cp_spec(), workers=workers), str(path), "jsonl")
            paths.append(path.read_bytes())
        assert paths[0] == paths[1] == paths[2]

    def test_wall_time_not_serialized(self):
        rec = run_experiment(cp_spec(instances=3))[0]
        assert rec.wall_time_s >= 0.0
        assert "wall_time_s" not in rec.to_json_dict()
