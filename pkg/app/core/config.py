"""Configuration: analysis tunables and the ``--config`` file loader."""

import logging
import shlex
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field

from app.core.errors import ConfigurationError
from app.core.numerics import QuadratureSpec

logger = logging.getLogger(__name__)


class AnalysisSettings(BaseModel):
    """Tunables shared by the analysis, the simulator and the tools."""

    model_config = ConfigDict(frozen=True)

    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    grid_points: int = Field(default=256, ge=3, description="Grid density of the ω minimisation scan")
    gls_grid_points: int = Field(default=1024, ge=3, description="Grid density of the θ scan in the GLS estimator")
    golden_tol: float = Field(default=1e-10, gt=0, description="Golden-section tolerance, relative to the search interval")
    omega_floor_fraction: float = Field(default=1e-4, gt=0, lt=1, description="Lower ω cutoff as a fraction of 2π/θ_R")
    pole_threshold: float = Field(default=1e-300, gt=0)
    stein_pass: float = Field(default=1e-6, gt=0, description="Stein residual accepted as a pass")
    workers: int = Field(default=4, ge=1, description="Concurrent trial chunks in a campaign")
    chunk_size: int = Field(default=250, ge=1, description="Trials per campaign chunk")


DEFAULT_SETTINGS = AnalysisSettings()


def param_name(flag: str) -> str:
    return flag.lstrip("-").replace("-", "_")


def load_config_values(path: Path) -> dict[str, Any]:
    """Read a config file into ``{param_name: value}``.

    Plain files hold one flag per line in command-line grammar
    (``--dist gaussian:sigma=1``); blank lines and ``#`` comments are skipped and
    a bare flag means ``True``. ``.yaml``/``.yml`` files hold a mapping of flag
    names to values.
    """
    if not path.exists():
        raise ConfigurationError(f"Config file does not exist: {path}")
    text = path.read_text(encoding="utf-8")

    if path.suffix.lower() in {".yaml", ".yml"}:
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Failed to parse {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path} must contain a mapping of flag names to values")
        logger.info(f"Loaded config from {path}")
        return {param_name(str(k)): (True if v is None else v) for k, v in data.items()}

    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = shlex.split(line)
        if not tokens[0].startswith("--") or len(tokens) > 2:
            raise ConfigurationError(f"{path}:{lineno}: expected '--flag [value]', got '{raw.strip()}'")
        values[param_name(tokens[0])] = tokens[1] if len(tokens) == 2 else True
    logger.info(f"Loaded config from {path}")
    return values
