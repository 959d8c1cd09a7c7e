import pytest

from geoflow.exceptions import PreconditionError
from geoflow.experiments import execute, load_config
from geoflow.experiments.acceptance import CRITERIA, Criterion, run_criteria


def _failing(context):
    raise PreconditionError("不可用", module="analysis", data={"scenario": context.scenario})


class TestRegistry:
    def test_criteria_ids(self):
        assert sorted(CRITERIA) == list(range(1, 12))

    def test_every_criterion_has_a_scenario(self):
        assert all(entry.scenarios for entry in CRITERIA.values())

    def test_library_errors_fail_the_criterion(self, monkeypatch):
        monkeypatch.setitem(CRITERIA, 99, Criterion(99, "always fails", ("plane_flat",), _failing))
        outcomes = run_criteria("plane_flat", only=(99,))
        assert len(outcomes) == 1
        assert not outcomes[0].passed
        assert outcomes[0].error == "不可用"
        assert outcomes[0].measured["scenario"] == "plane_flat"

    def test_no_criteria_is_not_a_pass(self):
        result = execute(load_config(None, experiment="accept", scenario="plane_flat"))
        assert result.verdict == "violated"


@pytest.mark.slow
class TestAcceptance:
    @pytest.mark.parametrize("scenario", ["sphere", "zoll", "flat_torus", "plane_exp", "ellipsoid"])
    def test_scenario_passes(self, scenario):
        result = execute(load_config(None, experiment="accept", scenario=scenario))
        failed = [c for c in result.payload["criteria"] if not c["passed"]]
        assert result.verdict == "satisfied", failed

    def test_subset(self):
        result = execute(load_config(None, experiment="accept", scenario="sphere", criteria=(1, 5)))
        assert [c["id"] for c in result.payload["criteria"]] == [1, 5]
