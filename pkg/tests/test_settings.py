import pytest
from pydantic import ValidationError

from geoflow.settings.builtins.settings import DefaultSettings
from geoflow.utils.logger import format_log_message


class TestDefaultSettings:
    def test_numeric_defaults(self):
        settings = DefaultSettings()
        assert settings.numerics.tangency_guard == 0.01
        assert settings.numerics.dedup_threshold == 1e-3
        assert settings.numerics.near_miss == 0.9

    def test_environment_overrides_nested_groups(self, monkeypatch):
        monkeypatch.setenv("GEOFLOW_LOG_LEVEL", "DEBUG")
        monkeypatch.setenv("GEOFLOW_TOL", "1e-11")
        settings = DefaultSettings()
        assert settings.log.level == "DEBUG"
        assert settings.numerics.tol == 1e-11

    def test_unknown_log_format_rejected(self, monkeypatch):
        monkeypatch.setenv("GEOFLOW_LOG_FORMAT", "XML")
        with pytest.raises(ValidationError):
            DefaultSettings()


class TestLogMessage:
    def test_full_message(self):
        text = format_log_message("积分", resource="曲面", resource_id="sphere", status="完成", details={"n": 3})
        assert text == "[积分] 曲面: sphere 状态: 完成 n: 3"

    def test_custom_message_wins(self):
        assert format_log_message("积分", message="done") == "done"
