"""Command-line entry point: one sub-command per verb.

Documents go to stdout (or ``--out``); diagnostics go to stderr. Exit codes:
0 success, 2 invalid flags/config/model, 3 numeric failure, 4 verification failure.
"""

import logging
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click

from app.core.config import load_config_values, param_name
from app.core.errors import ConfigurationError
from app.core.logging_setup import LOG_LEVELS, configure_logging
from app.core.tool_registry import registry

logger = logging.getLogger(__name__)

EXIT_INTERNAL = 1


def _load_config(ctx: click.Context, param: click.Parameter, value: str | None) -> str | None:
    """Eager ``--config`` callback: file values become defaults that explicit flags override."""
    if value is None:
        return None
    try:
        values = load_config_values(Path(value))
    except ConfigurationError as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param) from e

    by_flag = {}
    for p in ctx.command.params:
        if p.name in {"config", "out"}:
            continue
        for opt in p.opts:
            by_flag[param_name(opt)] = p.name
    unknown = sorted(k for k in values if k not in by_flag)
    if unknown:
        raise click.BadParameter(f"unknown flags in {value}: {', '.join('--' + k.replace('_', '-') for k in unknown)}", ctx=ctx, param=param)

    ctx.default_map = {**(ctx.default_map or {}), **{by_flag[k]: v for k, v in values.items()}}
    logger.info(f"Config defaults from {value}: {sorted(ctx.default_map)}")
    return value


def output_options(formats: tuple[str, ...]) -> Callable:
    """``--config``, ``--out`` and ``--format`` shared by every verb."""

    def decorator(f: Callable) -> Callable:
        f = click.option("--format", "format", type=click.Choice(formats), default=formats[0], show_default=True, help="Output document format")(f)
        f = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write the document here instead of stdout")(f)
        f = click.option(
            "--config",
            type=click.Path(dir_okay=False),
            is_eager=True,
            expose_value=False,
            callback=_load_config,
            help="File of default flags: one '--flag value' per line, or a YAML mapping",
        )(f)
        return f

    return decorator


def dist_option(f: Callable) -> Callable:
    return click.option("--dist", required=True, help="Noise model, e.g. gaussian:sigma=1, laplace:var=1, cauchy:gamma=1, uniform:a=1")(f)


def grid_options(f: Callable) -> Callable:
    f = click.option("--points", type=int, required=True, help="Number of grid points")(f)
    f = click.option("--omega-max", type=float, required=True, help="Largest ω")(f)
    f = click.option("--omega-min", type=float, required=True, help="Smallest ω (> 0)")(f)
    return f


def _run_tool(name: str, params: dict[str, Any], out: Path | None) -> None:
    """Execute a registered tool, emit its document and exit with its code."""
    ctx = click.get_current_context()
    tool = registry.get_tool(name)
    if tool is None:
        raise click.ClickException(f"tool '{name}' is not registered")
    try:
        result = tool.execute(params)
    except Exception as e:
        logger.exception(f"{name} crashed: {e}")
        ctx.exit(EXIT_INTERNAL)

    document = result.data.get("document")
    if document is not None:
        if out is None:
            click.echo(document, nl=False)
        else:
            out.write_text(document, encoding="utf-8")
            logger.info(f"Wrote {out}")
    for message in result.errors:
        click.echo(f"error: {message}", err=True)
    ctx.exit(result.exit_code)


@click.group()
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default="WARNING", show_default=True, help="Diagnostics level on stderr")
def main(log_level: str) -> None:
    """Fisher information, AsV efficiency and MAC simulation for phase-modulated sensor networks."""
    configure_logging(log_level)


@main.command()
@dist_option
@grid_options
@click.option("--theta-r", type=float, default=None, help="Parameter range θ_R; checks ω_max ≤ 2π/θ_R")
@output_options(("csv",))
def sweep(out: Path | None, **params: Any) -> None:
    """AsV(ω) and 1/I over an ω grid (CSV)."""
    _run_tool("sweep", params, out)


@main.command()
@dist_option
@click.option("--theta-r", type=float, required=True, help="Parameter range θ_R; ω ranges over (0, 2π/θ_R]")
@click.option("--method", type=click.Choice(["auto", "closed_form", "numeric"]), default="auto", show_default=True)
@output_options(("json", "csv"))
def efficiency(out: Path | None, **params: Any) -> None:
    """Relative efficiency E(η) of one noise model."""
    _run_tool("efficiency", params, out)


@main.command()
@dist_option
@click.option("--l", "sensors", type=int, required=True, help="Number of sensors L")
@click.option("--trials", type=int, required=True, help="Monte Carlo trials (>= 2)")
@click.option("--omega", type=float, required=True, help="Modulation frequency ω")
@click.option("--theta", type=float, required=True, help="True parameter θ")
@click.option("--theta-r", type=float, required=True, help="Parameter range θ_R")
@click.option("--rho", type=float, default=1.0, show_default=True, help="Per-sensor power ρ")
@click.option("--sigma-nu2", type=float, default=0.0, show_default=True, help="Channel noise variance σ_ν²")
@click.option("--seed", type=int, default=0, show_default=True, help="Unsigned 64-bit seed")
@click.option("--estimator", type=click.Choice(["angle", "gls"]), default="angle", show_default=True)
@output_options(("json", "csv"))
def simulate(out: Path | None, **params: Any) -> None:
    """Monte Carlo campaign: L·var(θ̂) against the predicted AsV(ω)."""
    _run_tool("simulate", params, out)


@main.command()
@dist_option
@grid_options
@output_options(("csv",))
def verify(out: Path | None, **params: Any) -> None:
    """Inequality slacks and Stein residuals per ω (exit 4 if any row fails)."""
    _run_tool("verify", params, out)


@main.command()
@click.option("--theta-r", type=float, required=True, help="Parameter range θ_R")
@click.option("--sigma", type=float, default=None, help="Gaussian standard deviation (default 1)")
@click.option("--b", type=float, default=None, help="Laplace scale (default 1/√2, unit variance)")
@click.option("--gamma", type=float, default=None, help="Cauchy scale (default 1)")
@click.option("--a", type=float, default=None, help="Uniform half-width (default 1)")
@click.option("--method", type=click.Choice(["auto", "closed_form", "numeric"]), default="auto", show_default=True)
@output_options(("json", "md"))
def table(out: Path | None, **params: Any) -> None:
    """Relative efficiency of all built-in noise families."""
    _run_tool("table", params, out)


if __name__ == "__main__":
    main()
