import pytest
from pydantic import BaseModel, ValidationError

from geoflow.exceptions import (
    ConfigurationError,
    ExceptionManager,
    GeoflowError,
    HorizonError,
    NumericalError,
    PreconditionError,
    StiffnessError,
    TangencyError,
    get_manager,
)


class _Strict(BaseModel):
    tol: float


class TestGeoflowError:
    def test_defaults(self):
        exc = GeoflowError()
        assert exc.exit_code == 2
        assert exc.data == {}
        assert exc.module == "geoflow"

    def test_to_dict_carries_module_and_data(self):
        exc = HorizonError("no crossing", data={"horizon": 200.0})
        payload = exc.to_dict()
        assert payload["error"] == "HorizonError"
        assert payload["data"] == {"horizon": 200.0}
        assert str(exc).startswith("[")

    def test_hierarchy(self):
        assert issubclass(TangencyError, PreconditionError)
        assert issubclass(StiffnessError, NumericalError)
        assert issubclass(ConfigurationError, GeoflowError)

    def test_configuration_error_is_tagged_cli(self):
        assert ConfigurationError("bad").module == "cli"


class TestExceptionManager:
    def test_resolves_most_specific_handler_by_mro(self):
        manager = ExceptionManager()
        manager.register(GeoflowError, lambda exc: 2)
        manager.register(NumericalError, lambda exc: 7)
        assert manager.handle(StiffnessError()) == 7
        assert manager.handle(HorizonError()) == 2

    def test_double_registration_rejected(self):
        manager = ExceptionManager()
        manager.register(GeoflowError, lambda exc: 2)
        with pytest.raises(ValueError):
            manager.register(GeoflowError, lambda exc: 3)

    def test_unregister_unknown(self):
        with pytest.raises(KeyError):
            ExceptionManager().unregister(GeoflowError)

    def test_unhandled_exception_is_reraised(self):
        with pytest.raises(RuntimeError):
            ExceptionManager().handle(RuntimeError("boom"))

    def test_default_handlers_map_to_status_two(self):
        manager = get_manager()
        assert manager.handle(PreconditionError("bad input")) == 2
        assert manager.handle(RuntimeError("boom")) == 2
        with pytest.raises(ValidationError) as info:
            _Strict(tol="x")
        assert manager.handle(info.value) == 2

    def test_custom_exit_code(self):
        assert get_manager().handle(GeoflowError("x", exit_code=5)) == 5
