import json

import pytest

from geoflow.commands.base import BaseCommand
from geoflow.commands.builtins.analyze import AnalyzeCommand
from geoflow.commands.builtins.find_geodesics import FindGeodesicsCommand
from geoflow.commands.builtins.integrate import IntegrateCommand
from geoflow.commands.builtins.oracle_check import OracleCheckCommand
from geoflow.commands.discover import CommandDiscover


class TestCommandNames:
    @pytest.mark.parametrize(
        "cls, name",
        [
            (FindGeodesicsCommand, "find-geodesics"),
            (OracleCheckCommand, "oracle-check"),
            (AnalyzeCommand, "analyze"),
            (IntegrateCommand, "integrate"),
        ],
    )
    def test_derived_from_class_name(self, cls, name):
        assert cls._get_command_name() == name

    def test_custom_affixes(self):
        assert BaseCommand._get_command_name("GeoSectionGroup", prefixes=["Geo"]) == "section"
        assert BaseCommand._get_command_name("PlainThing", suffixes=[]) == "plain-thing"


class TestDiscovery:
    def test_builtin_commands(self):
        commands = CommandDiscover().collect()
        assert set(commands) == {
            "accept",
            "analyze",
            "census",
            "find-geodesics",
            "integrate",
            "oracle-check",
            "section",
        }

    def test_single_action_commands_are_functions(self):
        commands = CommandDiscover().collect()
        assert callable(commands["integrate"])
        assert commands["integrate"].__name__ == "run"
        assert isinstance(commands["analyze"], AnalyzeCommand)


class TestLaunch:
    def test_success_returns_normally(self, tmp_path):
        out = tmp_path / "orbit.json"
        IntegrateCommand().run(scenario="flat_torus", t_max=1.0, samples=3, out=str(out))
        assert json.loads(out.read_text(encoding="utf-8"))["experiment"] == "integrate"

    def test_failure_exits_with_status(self):
        with pytest.raises(SystemExit) as info:
            IntegrateCommand().run(scenario="mobius")
        assert info.value.code == 2

    def test_mismatch_exits_with_one(self):
        with pytest.raises(SystemExit) as info:
            OracleCheckCommand().run(scenario="flat_torus", samples=2, t_max=1.0, expect="violated")
        assert info.value.code == 1

    def test_group_subcommand(self):
        AnalyzeCommand().recur(map_name="identity", n_max=2, samples=25, expect="satisfied")
