import json
from typing import get_args

import pytest
from pydantic import ValidationError

from geoflow.exceptions import ConfigurationError
from geoflow.experiments import TASKS, execute, load_config, run, run_from
from geoflow.experiments.config import ExperimentName


def _write(tmp_path, text: str):
    path = tmp_path / "experiment.conf"
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestLoadConfig:
    def test_file_values(self, tmp_path):
        path = _write(tmp_path, "scenario=flat_torus\nexperiment=integrate\nt_max=2.5\nsemi_axes=[1.0, 1.1, 1.3]\n")
        config = load_config(path)
        assert config.scenario == "flat_torus"
        assert config.t_max == 2.5
        assert config.semi_axes == (1.0, 1.1, 1.3)

    def test_flags_override_the_file(self, tmp_path):
        path = _write(tmp_path, "scenario=flat_torus\nt_max=2.5\n")
        config = load_config(path, t_max=4.0, seed=None)
        assert config.t_max == 4.0
        assert config.seed == 0

    def test_hyphenated_flags(self):
        assert load_config(None, **{"t-max": 3.0, "map-name": "twist"}).map_name == "twist"

    def test_unknown_key_is_rejected(self, tmp_path):
        path = _write(tmp_path, "scenario=sphere\nwobble=3\n")
        with pytest.raises(ValidationError):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError) as info:
            load_config(str(tmp_path / "nope.conf"))
        assert info.value.exit_code == 2

    @pytest.mark.parametrize(
        "overrides",
        [
            {"period_range": (10.0, 5.0)},
            {"blend_inner": 1.0, "blend_outer": 0.5},
            {"grid": (1, 10)},
            {"scenario": "mobius"},
            {"tol": 0.0},
        ],
    )
    def test_invalid_values(self, overrides):
        with pytest.raises(ValidationError):
            load_config(None, **overrides)

    def test_every_experiment_has_a_task(self):
        assert set(TASKS) == set(get_args(ExperimentName))


class TestExports:
    def test_json_is_deterministic(self, tmp_path):
        out = tmp_path / "run.json"
        config = load_config(None, scenario="flat_torus", experiment="integrate", t_max=2.0, samples=11, out=str(out))
        assert run(config) == 0
        first = out.read_bytes()
        assert run(config) == 0
        assert out.read_bytes() == first

        document = json.loads(first)
        assert document["schema"] == 1
        assert document["experiment"] == "integrate"
        assert document["config"]["scenario"] == "flat_torus"
        assert document["diagnostics"]["escaped"] is False

    def test_csv_header(self, tmp_path):
        out = tmp_path / "run.csv"
        config = load_config(
            None, scenario="flat_torus", experiment="integrate", t_max=1.0, samples=5, format="csv", out=str(out)
        )
        assert run(config) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,u,v,du,dv,drift"
        assert len(lines) == 6

    def test_no_csv_for_equicontinuity(self, tmp_path):
        config = load_config(None, experiment="equicont", format="csv", out=str(tmp_path / "x.csv"))
        with pytest.raises(ConfigurationError):
            execute(config)
        assert run(config) == 2


class TestRun:
    def test_matching_expectation(self):
        config = load_config(
            None, scenario="flat_torus", experiment="oracle-check", samples=3, t_max=2.0, expect="satisfied"
        )
        assert run(config) == 0

    def test_contradicted_expectation(self):
        config = load_config(
            None, scenario="flat_torus", experiment="oracle-check", samples=3, t_max=2.0, expect="violated"
        )
        assert run(config) == 1

    def test_no_closed_form_is_an_error(self):
        assert run(load_config(None, scenario="ellipsoid", experiment="oracle-check", samples=1)) == 2

    def test_unknown_scenario(self, tmp_path):
        assert run_from(None, scenario="mobius") == 2
        assert run_from(str(tmp_path / "missing.conf")) == 2

    def test_recurrence_of_model_maps(self):
        twist = load_config(None, experiment="recur", map_name="twist", n_max=4, samples=100)
        identity = load_config(None, experiment="recur", map_name="identity", n_max=3, samples=100, power=2)
        assert execute(twist).verdict == "violated"
        result = execute(identity)
        assert result.verdict == "satisfied"
        assert result.payload["power_check"]["passed"]
        assert [n for n, _ in result.rows] == [1, 2, 3]

    def test_identity_census(self):
        result = execute(load_config(None, experiment="census", map_name="identity", grid=(10, 5)))
        assert result.payload["report"]["identity_like"]
        assert "identity-like" in result.summary

    def test_torus_distality(self):
        result = execute(load_config(None, scenario="flat_torus", experiment="distal", samples=5, t_max=5.0, n_times=51))
        assert result.verdict == "satisfied"
        assert len(result.rows) == 5

    def test_anchor_plane_needs_an_ellipsoid(self):
        config = load_config(None, scenario="flat_torus", experiment="equicont", mode="pointwise", anchor_plane="xy")
        assert run(config) == 2
