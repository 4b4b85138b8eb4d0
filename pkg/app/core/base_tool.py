"""Base tool interface for the command verbs."""

import logging
import time
from abc import ABC, abstractmethod
from typing import Any

from pydantic import BaseModel, ValidationError

from app.core.config import DEFAULT_SETTINGS, AnalysisSettings
from app.core.errors import CfmacError, ConfigurationError, NumericFailure
from app.core.noise_models import format_model_spec
from app.schemas import ToolInfo, ToolResult

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_VERIFICATION = 4


class VerificationFailed(Exception):
    """Raised by a tool whose document is complete but whose checks did not pass."""

    def __init__(self, message: str, data: dict[str, Any]):
        super().__init__(message)
        self.data = data


def exit_code_for(error: Exception) -> int:
    if isinstance(error, NumericFailure):
        return EXIT_NUMERIC
    if isinstance(error, VerificationFailed):
        return EXIT_VERIFICATION
    return EXIT_USAGE


def validation_message(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        where = ".".join(str(p) for p in item["loc"]) or "config"
        parts.append(f"{where}: {item['msg']}")
    return "; ".join(parts)


class BaseTool(ABC):
    """Base class for all verbs.

    Subclasses implement :meth:`analyze`, which returns a data dict holding at
    least the rendered ``document``. :meth:`execute` wraps it into a
    :class:`ToolResult`, turning package errors into exit codes.
    """

    def __init__(self, config: AnalysisSettings | None = None):
        self.name = self.__class__.__name__.replace("Tool", "").lower()
        self.version = "1.0.0"
        self.enabled = True
        self.config = config or DEFAULT_SETTINGS
        self._warnings: list[str] = []

    @abstractmethod
    def analyze(self, params: dict[str, Any]) -> dict[str, Any]:
        """Run the verb.

        Args:
            params: Resolved flag values, keyed by parameter name

        Returns:
            Dictionary with the rendered ``document`` and the values behind it

        """

    @property
    @abstractmethod
    def description(self) -> str:
        """Return tool description."""

    def warn(self, message: str) -> None:
        """Log a warning and attach it to the result of the current run."""
        logger.warning(f"{self.name}: {message}")
        self._warnings.append(message)

    def execute(self, params: dict[str, Any]) -> ToolResult:
        start_t = time.time()
        self._warnings = []
        try:
            data = self.analyze(params)
        except ValidationError as e:
            error = ConfigurationError(validation_message(e))
            return self._failure(error, {}, start_t)
        except VerificationFailed as e:
            return self._failure(e, e.data, start_t)
        except CfmacError as e:
            return self._failure(e, {}, start_t)

        elapsed = time.time() - start_t
        logger.info(f"{self.name} finished in {elapsed:.2f}s")
        return ToolResult(tool_name=self.name, success=True, data=data, warnings=list(self._warnings), execution_time=elapsed)

    def _failure(self, error: Exception, data: dict[str, Any], start_t: float) -> ToolResult:
        code = exit_code_for(error)
        logger.warning(f"{self.name} failed with exit code {code}: {error}")
        return ToolResult(
            tool_name=self.name,
            success=False,
            data=data,
            errors=[f"{type(error).__name__}: {error}"],
            warnings=list(self._warnings),
            execution_time=time.time() - start_t,
            exit_code=code,
        )

    def request_fields(self, params: dict[str, Any]) -> dict[str, Any]:
        """Flag values as request-model fields: ``dist`` becomes ``model``, unset flags are dropped."""
        fields = {k: v for k, v in params.items() if v is not None and k != "format"}
        if "dist" in fields:
            fields["model"] = fields.pop("dist")
        return fields

    def config_echo(self, request: BaseModel) -> dict[str, Any]:
        """Resolved configuration of a run, with the noise model written back in spec form."""
        data = request.model_dump(mode="json")
        echo: dict[str, Any] = {"verb": self.name}
        if "model" in data:
            echo["dist"] = format_model_spec(request.model)
            del data["model"]
        echo.update(data)
        return echo

    def check_format(self, params: dict[str, Any], allowed: tuple[str, ...]) -> str:
        fmt = params.get("format") or allowed[0]
        if fmt not in allowed:
            raise ConfigurationError(f"{self.name} writes {', '.join(allowed)}, not {fmt}")
        return fmt

    def get_info(self) -> ToolInfo:
        """Get tool information."""
        return ToolInfo(name=self.name, description=self.description, version=self.version, enabled=self.enabled)
