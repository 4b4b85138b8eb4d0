"""Campaign Orchestrator - fans Monte Carlo trials out over worker threads."""

import asyncio
import logging
import math
import time
from collections.abc import Callable

import numpy as np

from app.core.config import DEFAULT_SETTINGS, AnalysisSettings
from app.core.efficiency import asv
from app.core.errors import ConfigurationError
from app.core.random_streams import derive_substream
from app.core.simulator import run_trial
from app.schemas import CampaignSummary, SimConfig

logger = logging.getLogger(__name__)

# θ closer than this many predicted standard deviations to the phase wrap is rejected
PHASE_MARGIN_SDS = 3.0


class LoggingMixin:
    """Mixin providing logging callback functionality for orchestrators."""

    log_callback: Callable[[str], None] | None = None

    def set_log_callback(self, callback: Callable[[str], None]) -> None:
        """Set a callback function for logging."""
        self.log_callback = callback

    def _log(self, message: str) -> None:
        """Log a message using the callback if set."""
        if self.log_callback:
            self.log_callback(message)
        else:
            logger.info(message)


def wrap_error(theta_hat: np.ndarray, theta: float, period: float) -> np.ndarray:
    """θ̂ - θ wrapped onto [-period/2, period/2)."""
    half = 0.5 * period
    return np.mod(np.asarray(theta_hat, dtype=float) - theta + half, period) - half


class CampaignOrchestrator(LoggingMixin):
    """Runs the independent trials of one SimConfig and summarises θ̂.

    Trial ``i`` always draws from ``derive_substream(seed, i)`` and results are
    reassembled in trial order before any reduction, so the summary is
    bit-identical for every worker count and chunk size.
    """

    def __init__(self, config: SimConfig, settings: AnalysisSettings = DEFAULT_SETTINGS):
        self.config = config
        self.settings = settings
        self.predicted_asv = asv(config.model, config.omega, settings)
        self.log_callback = None

    def check_phase_margin(self) -> None:
        """Reject θ so close to 0 or 2π/ω that θ̂ aliases across the wrap at this L."""
        config = self.config
        if not math.isfinite(self.predicted_asv):
            raise ConfigurationError(f"AsV is infinite at omega={config.omega}; pick a frequency away from the zeros of the characteristic function")
        margin = PHASE_MARGIN_SDS * math.sqrt(self.predicted_asv / config.sensors)
        if config.theta < margin or config.theta > config.phase_period - margin:
            raise ConfigurationError(
                f"theta={config.theta} lies within {PHASE_MARGIN_SDS:g} predicted standard deviations ({margin:.4g}) of the phase boundary [0, {config.phase_period:.6g})"
            )

    def _run_block(self, start: int, stop: int) -> np.ndarray:
        out = np.empty(stop - start, dtype=float)
        for offset, index in enumerate(range(start, stop)):
            stream = derive_substream(self.config.seed, index)
            out[offset] = run_trial(self.config, stream, self.settings.gls_grid_points).theta_hat
        return out

    async def _run_chunk(self, semaphore: asyncio.Semaphore, start: int, stop: int) -> np.ndarray:
        async with semaphore:
            start_t = time.time()
            block = await asyncio.to_thread(self._run_block, start, stop)
            logger.debug(f"Trials [{start}, {stop}) finished in {time.time() - start_t:.2f}s")
            return block

    async def run_async(self) -> CampaignSummary:
        config = self.config
        self.check_phase_margin()
        chunk = self.settings.chunk_size
        bounds = [(start, min(start + chunk, config.trials)) for start in range(0, config.trials, chunk)]
        semaphore = asyncio.Semaphore(self.settings.workers)

        self._log(f"Launching {config.trials} trials in {len(bounds)} chunks on {self.settings.workers} workers...")
        start_t = time.time()
        blocks = await asyncio.gather(*(self._run_chunk(semaphore, lo, hi) for lo, hi in bounds))
        theta_hats = np.concatenate(blocks)
        summary = self.summarize(theta_hats)
        self._log(f"Campaign finished ({time.time() - start_t:.2f}s): L*var={summary.l_times_variance:.6g}, predicted AsV={summary.predicted_asv:.6g}")
        return summary

    def run(self) -> CampaignSummary:
        return asyncio.run(self.run_async())

    def summarize(self, theta_hats: np.ndarray) -> CampaignSummary:
        config = self.config
        errors = wrap_error(theta_hats, config.theta, config.phase_period)
        bias = float(np.mean(errors))
        variance = float(np.var(errors, ddof=1))
        return CampaignSummary(
            mean_theta_hat=config.theta + bias,
            bias=bias,
            variance=variance,
            l_times_variance=config.sensors * variance,
            predicted_asv=self.predicted_asv,
            trials_used=int(theta_hats.size),
        )


def run_campaign(
    config: SimConfig,
    settings: AnalysisSettings = DEFAULT_SETTINGS,
    log_callback: Callable[[str], None] | None = None,
) -> CampaignSummary:
    """Run every trial of ``config`` and return its summary."""
    orchestrator = CampaignOrchestrator(config, settings)
    if log_callback:
        orchestrator.set_log_callback(log_callback)
    return orchestrator.run()
