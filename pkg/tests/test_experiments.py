"""Configuration parsing, experiment runners, determinism, and the CLI."""

import json
import warnings

import numpy as np
import pytest

from drchm.cli import main
from drchm.experiments import (
    ExperimentConfig,
    edge_count_ensemble,
    run_experiment,
    run_simulate,
    run_validate_gaussian,
    run_validate_marks,
    run_sample_limit,
)
from drchm.model import ModelParams
from drchm.paths import StepPath
from drchm.sampler import SamplerConfig


def _base_config(**overrides):
    data = {
        "model": {"beta": 0.25, "gamma": 0.2, "gamma_prime": 0.2, "n": 50.0},
        "sampler": {"master_seed": 1},
        "kind": "simulate",
        "replicates": 5,
        "eval_times": [0.25, 0.5, 0.75],
    }
    data.update(overrides)
    return data


class TestConfigParsing:
    def test_round_trip(self):
        cfg = ExperimentConfig.from_dict(_base_config())
        assert cfg.model == ModelParams(0.25, 0.2, 0.2, 50.0)
        assert cfg.sampler.master_seed == 1
        assert cfg.eval_times == (0.25, 0.5, 0.75)
        back = ExperimentConfig.from_dict(
            json.loads(json.dumps(cfg.to_dict()))
        )
        assert back == cfg

    def test_unknown_top_level_key(self):
        with pytest.raises(ValueError, match="unknown config keys"):
            ExperimentConfig.from_dict(_base_config(bogus=1))

    def test_unknown_model_key(self):
        data = _base_config()
        data["model"]["extra"] = 1
        with pytest.raises(ValueError, match="unknown model keys"):
            ExperimentConfig.from_dict(data)

    def test_unknown_sampler_key(self):
        data = _base_config()
        data["sampler"]["extra"] = 1
        with pytest.raises(ValueError, match="unknown sampler keys"):
            ExperimentConfig.from_dict(data)

    def test_missing_required(self):
        with pytest.raises(ValueError, match="missing required"):
            ExperimentConfig.from_dict({"kind": "simulate"})

    def test_bad_kind(self):
        with pytest.raises(ValueError, match="unknown experiment kind"):
            ExperimentConfig.from_dict(_base_config(kind="frobnicate"))

    def test_bad_replicates(self):
        with pytest.raises(ValueError, match="replicates"):
            ExperimentConfig.from_dict(_base_config(replicates=0))

    def test_unsorted_eval_times(self):
        with pytest.raises(ValueError, match="sorted"):
            ExperimentConfig.from_dict(_base_config(eval_times=[0.5, 0.25]))

    def test_eval_times_out_of_range(self):
        with pytest.raises(ValueError, match="eval_times"):
            ExperimentConfig.from_dict(_base_config(eval_times=[0.5, 1.5]))

    def test_from_json(self, tmp_path):
        fname = tmp_path / "cfg.json"
        fname.write_text(json.dumps(_base_config()))
        assert ExperimentConfig.from_json(fname).replicates == 5

    def test_default_mark_threshold(self):
        cfg = ExperimentConfig.from_dict(_base_config())
        assert cfg.mark_threshold == pytest.approx(50.0 ** (-2.0 / 3.0))


class TestSimulate:
    def test_byte_identical_reruns(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            cfg = ExperimentConfig.from_dict(
                _base_config(
                    out_dir=str(tmp_path / name),
                    write_paths=True,
                    replicates=3,
                )
            )
            res = run_simulate(cfg)
            outs.append(res)
        for fa, fb in zip(
            [outs[0]["report"]] + outs[0]["paths"],
            [outs[1]["report"]] + outs[1]["paths"],
        ):
            assert open(fa, "rb").read() == open(fb, "rb").read()

    def test_path_files_parse(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            _base_config(out_dir=str(tmp_path), write_paths=True, replicates=2)
        )
        res = run_simulate(cfg)
        for f in res["paths"]:
            StepPath.from_csv(f)

    def test_summary_contents(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            _base_config(out_dir=str(tmp_path), replicates=4)
        )
        res = run_simulate(cfg)
        assert res["summary"]["max_missed_edge_bound"] <= 1.0
        lines = [json.loads(l) for l in open(res["report"])]
        assert len(lines) == 5  # 4 replicates + summary

    def test_single_replicate_sentinels(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            _base_config(out_dir=str(tmp_path), replicates=1)
        )
        res = run_simulate(cfg)
        per_time = res["summary"]["per_time"]
        assert all(np.isinf(pt["mean_se"]) for pt in per_time)


class TestEnsemble:
    def test_worker_count_irrelevant(self):
        p = ModelParams(0.25, 0.2, 0.2, 30.0)
        scfg = SamplerConfig(master_seed=5)
        serial = edge_count_ensemble(p, scfg, (0.5,), 20, workers=1)
        parallel = edge_count_ensemble(p, scfg, (0.5,), 20, workers=4)
        np.testing.assert_array_equal(serial["counts"], parallel["counts"])


class TestRunners:
    def test_validate_gaussian_small(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            _base_config(
                kind="validate-gaussian",
                replicates=30,
                out_dir=str(tmp_path),
                n_ladder=[20, 50],
            )
        )
        res = run_validate_gaussian(cfg)
        sections = {r["section"] for r in res["records"]}
        assert {
            "variance",
            "covariance",
            "normality",
            "low_mark",
            "low_mark_trend",
        } <= sections

    def test_validate_gaussian_warns_in_marginal_regime(self, tmp_path):
        data = _base_config(
            kind="validate-gaussian", replicates=2, out_dir=str(tmp_path)
        )
        data["model"]["gamma"] = 0.4
        cfg = ExperimentConfig.from_dict(data)
        with pytest.warns(UserWarning, match="1/4"):
            run_validate_gaussian(cfg)

    def test_validate_marks_identities(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            _base_config(
                kind="validate-marks", replicates=10, out_dir=str(tmp_path)
            )
        )
        res = run_validate_marks(cfg)
        summary = res["records"][-1]
        assert summary["max_pm_identity_err"] == 0.0
        assert summary["max_split_identity_err"] == 0.0

    def test_sample_limit_gaussian(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            _base_config(
                kind="sample-limit",
                replicates=3,
                out_dir=str(tmp_path),
                grid_points=21,
            )
        )
        res = run_sample_limit(cfg)
        assert len(res["paths"]) == 3
        data = np.loadtxt(res["paths"][0], delimiter=",", skiprows=1)
        assert data.shape == (21, 2)

    def test_sample_limit_stable(self, tmp_path):
        data = _base_config(
            kind="sample-limit",
            replicates=3,
            out_dir=str(tmp_path),
            epsilon=0.1,
        )
        data["model"]["gamma"] = 0.7
        res = run_sample_limit(ExperimentConfig.from_dict(data))
        assert len(res["paths"]) == 3
        assert res["records"][-1]["section"] == "summary"

    def test_dispatch(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            _base_config(replicates=1, out_dir=str(tmp_path))
        )
        assert "report" in run_experiment(cfg)


class TestCLI:
    def _write(self, tmp_path, data, name="cfg.json"):
        fname = tmp_path / name
        fname.write_text(json.dumps(data))
        return str(fname)

    def test_success_exit_zero(self, tmp_path, capsys):
        cfg = self._write(tmp_path, _base_config(replicates=2))
        code = main(
            ["simulate", "--config", cfg, "--out", str(tmp_path / "out")]
        )
        assert code == 0
        assert "simulate_summary.jsonl" in capsys.readouterr().out

    def test_seed_override_changes_output(self, tmp_path):
        cfg = self._write(tmp_path, _base_config(replicates=2))
        for seed, sub in ((1, "s1"), (2, "s2")):
            assert (
                main(
                    [
                        "simulate",
                        "--config",
                        cfg,
                        "--seed",
                        str(seed),
                        "--out",
                        str(tmp_path / sub),
                    ]
                )
                == 0
            )
        a = (tmp_path / "s1" / "simulate_summary.jsonl").read_bytes()
        b = (tmp_path / "s2" / "simulate_summary.jsonl").read_bytes()
        assert a != b

    def test_config_error_exit_two(self, tmp_path):
        cfg = self._write(tmp_path, _base_config(bogus=1))
        assert main(["simulate", "--config", cfg]) == 2

    def test_kind_mismatch_exit_two(self, tmp_path):
        cfg = self._write(tmp_path, _base_config())
        assert main(["validate-stable", "--config", cfg]) == 2

    def test_regime_error_exit_two(self, tmp_path):
        data = _base_config(kind="validate-gaussian", replicates=2)
        data["model"]["gamma"] = 0.7
        cfg = self._write(tmp_path, data)
        assert main(["validate-gaussian", "--config", cfg]) == 2

    def test_truncation_exit_three(self, tmp_path):
        data = _base_config(replicates=1)
        data["model"] = {
            "beta": 0.25,
            "gamma": 0.7,
            "gamma_prime": 0.2,
            "n": 5000.0,
        }
        data["sampler"] = {"w_min": 0.5, "missed_edge_tolerance": 1e-4}
        cfg = self._write(tmp_path, data)
        assert (
            main(["simulate", "--config", cfg, "--out", str(tmp_path / "x")])
            == 3
        )

    def test_missing_config_file(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.json")]) == 2
