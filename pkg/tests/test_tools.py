"""Tests for the tool layer: registry discovery and result handling."""

import math

import pytest

from app.core.base_tool import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, BaseTool, VerificationFailed, exit_code_for
from app.core.config import AnalysisSettings
from app.core.errors import ConfigurationError, NumericFailure, SingularCovarianceError
from app.core.tool_registry import ToolRegistry
from app.schemas import ToolInfo
from app.tools.verify_tool import VerifyTool

VERBS = {"efficiency", "simulate", "sweep", "table", "verify"}


@pytest.fixture
def registry():
    reg = ToolRegistry()
    reg.discover_tools()
    return reg


class TestToolRegistry:
    """Test dynamic discovery of the verbs"""

    def test_discovers_every_verb(self, registry):
        assert set(registry.list_tool_names()) == VERBS

    def test_tools_describe_themselves(self, registry):
        for name, tool in registry.get_all_tools().items():
            info = tool.get_info()
            assert isinstance(info, ToolInfo)
            assert info.name == name
            assert info.description
            assert info.enabled

    def test_lazy_lookup(self):
        assert ToolRegistry().get_tool("sweep").name == "sweep"

    def test_unknown_tool(self, registry):
        assert registry.get_tool("audit") is None

    def test_missing_directory(self, tmp_path):
        reg = ToolRegistry()
        reg.discover_tools(tmp_path / "absent")
        assert reg.list_tool_names() == []


class TestExecute:
    """Test how BaseTool.execute maps outcomes to exit codes"""

    @pytest.mark.parametrize(
        "error,code",
        [
            (ConfigurationError("bad"), EXIT_USAGE),
            (NumericFailure("slow"), EXIT_NUMERIC),
            (SingularCovarianceError("v_c", 0.0), EXIT_NUMERIC),
            (VerificationFailed("rows", {}), EXIT_VERIFICATION),
        ],
    )
    def test_exit_code_for(self, error, code):
        assert exit_code_for(error) == code

    def test_success(self, registry):
        result = registry.get_tool("efficiency").execute({"dist": "laplace:var=1", "theta_r": math.pi, "method": "auto", "format": "json"})
        assert result.success
        assert result.exit_code == EXIT_OK
        assert result.data["report"]["efficiency"] == pytest.approx(2.0 / 3.0)

    def test_validation_error_is_usage(self, registry):
        result = registry.get_tool("efficiency").execute({"dist": "laplace:var=1", "theta_r": -1.0})
        assert not result.success
        assert result.exit_code == EXIT_USAGE
        assert "theta_r" in result.errors[0]

    def test_format_checked(self, registry):
        result = registry.get_tool("sweep").execute({"dist": "gaussian:sigma=1", "omega_min": 1.0, "omega_max": 1.0, "points": 1, "format": "json"})
        assert result.exit_code == EXIT_USAGE

    def test_verification_keeps_document(self):
        """A strict Stein threshold fails rows but the document survives."""
        tool = VerifyTool(AnalysisSettings(stein_pass=1e-300))
        result = tool.execute({"dist": "cauchy:gamma=1", "omega_min": 0.5, "omega_max": 1.0, "points": 2})
        assert result.exit_code == EXIT_VERIFICATION
        assert result.data["document"].count("\n") == 4
        assert result.data["failed_omegas"]

    def test_config_echo(self, registry):
        result = registry.get_tool("sweep").execute({"dist": "laplace:b=0.5", "omega_min": 0.1, "omega_max": 0.2, "points": 2, "theta_r": None})
        first_line = result.data["document"].splitlines()[0]
        assert '"dist":"laplace:b=0.5"' in first_line
        assert '"theta_r":null' in first_line

    def test_abstract_base(self):
        with pytest.raises(TypeError):
            BaseTool()

    def test_sweep_poles_become_warnings(self, registry):
        result = registry.get_tool("sweep").execute({"dist": "uniform:a=1", "omega_min": 3.0, "omega_max": math.pi, "points": 2})
        assert result.success
        assert result.warnings == ["AsV is infinite at 1 of 2 grid points"]
        assert result.data["poles"] == 1

    def test_warnings_reset_between_runs(self, registry):
        tool = registry.get_tool("sweep")
        tool.execute({"dist": "uniform:a=1", "omega_min": 3.0, "omega_max": math.pi, "points": 2})
        result = tool.execute({"dist": "gaussian:sigma=1", "omega_min": 0.5, "omega_max": 1.0, "points": 2})
        assert result.warnings == []
