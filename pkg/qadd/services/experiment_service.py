"""
Experiment runner behind the qadd CLI
"""

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel

from qadd.channels.base import Channel
from qadd.channels.io import read_channel_file
from qadd.config import settings
from qadd.middleware.error_handler import ParameterError, PreconditionError
from qadd.models.schemas import ExperimentConfig, ExperimentName, OptimizationStrategy
from qadd.services.capacity_service import CapacityService
from qadd.services.certificate_service import DegradabilityService
from qadd.services.ratio_service import RatioService
from qadd.services.singularity_service import SingularityService
from qadd.services.superadditivity_service import SuperadditivityService
from qadd.zoo.factory import ChannelFactory
from qadd.zoo.flagged_ad import flagged_ad, flagged_ad_region
from qadd.zoo.platypus import platypus

Row = dict[str, Any]

MAX_STEPS = 200
SIMPLEX_EDGE = 1e-12
ANTI_DEGRADABLE_T = 0.5
PRIVATE_FLAG = 1e-6

DEFAULTS: dict[ExperimentName, dict[str, Any]] = {
    ExperimentName.COHERENT_INFO_SURFACE: {"s_steps": 21, "t_steps": 21},
    ExperimentName.PRIVATE_INFO_SURFACE: {"s_steps": 11, "t_steps": 11},
    ExperimentName.FLAGGED_REGION_SCAN: {"p_steps": 10, "gamma_steps": 10, "eta_steps": 10},
    ExperimentName.AMPLIFICATION_DEMO: {"s": 0.1, "t": 0.1, "lam": 0.5},
    ExperimentName.SMITH_YARD_DEMO: {"s": 0.3, "t": 0.45, "d_c": 3},
    ExperimentName.SCALING_DEMO: {"gamma": 0.3},
    ExperimentName.RATIO_PROBE: {"gamma1": 0.3, "gamma2": 0.2, "dim_v": 2, "samples": 60},
    ExperimentName.CERTIFY: {},
    ExperimentName.Q1: {"strategy": OptimizationStrategy.AUTO.value},
}


def format_value(value: Any) -> str:
    """CSV cell: booleans as true/false, floats with FLOAT_DIGITS significant digits"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{settings.FLOAT_DIGITS}g}"
    return str(value)


def write_csv(path: Path, rows: Sequence[Row], fields: Sequence[str]) -> Path:
    """Header row plus one formatted row per grid point"""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(fields), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: format_value(row[k]) for k in fields})
    return path


def write_json(path: Path, payload: BaseModel | dict[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json(indent=2)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def config_echo_path(out: Path) -> Path:
    return out.with_name(out.name + ".config.json")


def _axis(steps: int) -> np.ndarray:
    if not 2 <= steps <= MAX_STEPS:
        raise ParameterError(f"Grid steps must lie in [2, {MAX_STEPS}], got {steps}")
    return np.linspace(0.0, 1.0, steps)


def _interior_axis(steps: int) -> list[float]:
    """k / steps for k = 1 .. steps - 1"""
    if not 2 <= steps <= MAX_STEPS:
        raise ParameterError(f"Grid steps must lie in [2, {MAX_STEPS}], got {steps}")
    return [k / steps for k in range(1, steps)]


def _simplex_points(s_steps: int, t_steps: int) -> list[tuple[int, float, float]]:
    points = []
    for s in _axis(s_steps):
        for t in _axis(t_steps):
            if s + t <= 1.0 + SIMPLEX_EDGE:
                points.append((len(points), float(s), float(t)))
    return points


# Grid tasks live at module level so worker processes can import them


def coherent_info_task(task: tuple[int, float, float]) -> Row:
    index, s, t = task
    u_star, value = CapacityService().q1_platypus_restricted(s, t)
    return {"index": index, "s": s, "t": t, "u_star": u_star, "q1": value}


def private_info_task(task: tuple[int, float, float]) -> Row:
    index, s, t = task
    optimum = CapacityService().maximize_private_information_two_state(platypus(s, t))
    return {
        "index": index,
        "s": s,
        "t": t,
        "p": optimum.p,
        "u": optimum.u,
        "p1": optimum.value,
        "flagged": t >= ANTI_DEGRADABLE_T and optimum.value > PRIVATE_FLAG,
    }


def flagged_region_task(task: tuple[int, float, float, float]) -> Row:
    index, p, gamma, eta = task
    analytic = flagged_ad_region(p, gamma, eta).verdict
    numeric = DegradabilityService().degradability_certificate(flagged_ad(p, gamma, eta)).verdict
    return {
        "index": index,
        "p": p,
        "gamma": gamma,
        "eta": eta,
        "analytic_verdict": analytic.value,
        "numeric_verdict": numeric.value,
        "agree": analytic == numeric,
    }


def in_boundary_band(p: float, gamma: float, eta: float, band: Optional[float] = None) -> bool:
    """
    Points within the band of gamma + eta = 1, gamma = 1/2, eta = 1/2 or p = 1/2

    p = 1/2 itself is kept.
    """
    band = settings.REGION_BAND if band is None else band
    if abs(gamma + eta - 1.0) < band or abs(gamma - 0.5) < band or abs(eta - 0.5) < band:
        return True
    return p != 0.5 and abs(p - 0.5) < band


class ExperimentService:
    """Service for running experiments and writing their outputs"""

    def __init__(
        self,
        seed: Optional[int] = None,
        workers: Optional[int] = None,
        degradability_service: Optional[DegradabilityService] = None,
        singularity_service: Optional[SingularityService] = None,
        superadditivity_service: Optional[SuperadditivityService] = None,
    ):
        self.seed = settings.DEFAULT_SEED if seed is None else seed
        self.workers = settings.WORKERS if workers is None else workers
        self.degradability_service = degradability_service or DegradabilityService()
        self.singularity_service = singularity_service or SingularityService()
        self.superadditivity_service = superadditivity_service or SuperadditivityService()

    def _map(self, task: Callable[[Any], Row], tasks: Sequence[Any]) -> list[Row]:
        if self.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                rows = list(pool.map(task, tasks))
        else:
            rows = [task(t) for t in tasks]
        return sorted(rows, key=lambda row: row["index"])

    # Surfaces and scans

    def run_coherent_info_surface(self, s_steps: int, t_steps: int) -> list[Row]:
        """Restricted Q1 of N_{s,t} on the simplex grid"""
        return self._map(coherent_info_task, _simplex_points(s_steps, t_steps))

    def run_private_info_surface(self, s_steps: int, t_steps: int) -> list[Row]:
        """Two-state private information of N_{s,t} on the simplex grid"""
        return self._map(private_info_task, _simplex_points(s_steps, t_steps))

    def run_flagged_region_scan(self, p_steps: int, gamma_steps: int, eta_steps: int) -> list[Row]:
        """Analytic against numeric classification of flagged AD mixtures off the boundary bands"""
        tasks = []
        for p in _interior_axis(p_steps):
            for gamma in _interior_axis(gamma_steps):
                for eta in _interior_axis(eta_steps):
                    if not in_boundary_band(p, gamma, eta):
                        tasks.append((len(tasks), p, gamma, eta))
        rows = self._map(flagged_region_task, tasks)
        disagreements = sum(1 for row in rows if not row["agree"])
        if disagreements:
            logger.warning(f"Flagged region scan: {disagreements} of {len(rows)} points disagree")
        return rows

    # Demos

    def run_amplification_demo(
        self, s: float, t: float, lam: float, epsilon_grid: Optional[Sequence[float]] = None
    ) -> BaseModel:
        return self.superadditivity_service.platypus_amplification(s, t, lam, epsilon_grid)

    def run_smith_yard_demo(self, s: float, t: float, d_c: int) -> BaseModel:
        """
        Smith-Yard construction on N_{s,t} with the optimal two-state ensemble

        Args:
            s: Platypus parameter
            t: Platypus parameter
            d_c: erasure input dimension, at least the construction's d_C

        Returns:
            SmithYardReport; passed when the identity holds and I_c exceeds q1(N)
        """
        capacity = CapacityService(seed=self.seed)
        channel = platypus(s, t)
        optimum = capacity.maximize_private_information_two_state(channel)
        if optimum.value <= PRIVATE_FLAG:
            raise PreconditionError(
                f"Private information of N_{{{s},{t}}} is {optimum.value:.3g}; nothing to amplify"
            )
        _, q1_channel = capacity.q1_platypus_restricted(s, t)
        ensemble = capacity.two_state_ensemble(optimum.p, optimum.u)
        report = SuperadditivityService(capacity_service=capacity).smith_yard_check(
            ensemble, channel, erasure_dim=d_c
        )
        return report.model_copy(
            update={
                "q1_channel": q1_channel,
                "passed": report.passed and report.coherent_information > q1_channel,
            }
        )

    def run_scaling_demo(
        self, gamma: float, epsilon_grid: Optional[Sequence[float]] = None
    ) -> BaseModel:
        return self.singularity_service.epsilon_scaling_mi(gamma, epsilon_grid)

    def run_ratio_probe(self, gamma1: float, gamma2: float, dim_v: int, samples: int) -> BaseModel:
        return RatioService(seed=self.seed).ratio_probe(gamma1, gamma2, dim_v, samples)

    # Channel-level experiments

    @staticmethod
    def resolve_channel(family: Optional[str], channel_file: Optional[str]) -> Channel:
        if (family is None) == (channel_file is None):
            raise ParameterError("Give exactly one of --family or --channel-file")
        if family is not None:
            return ChannelFactory.from_spec(family)
        return read_channel_file(channel_file)

    def run_certify(self, channel: Channel) -> dict[str, Any]:
        certificate = self.degradability_service.degradability_certificate(channel)
        return {"channel": channel.label, **certificate.summary()}

    def run_q1(self, channel: Channel, strategy: OptimizationStrategy) -> BaseModel:
        """Q1 report; multistart restarts are cross-checked when N is certified degradable"""
        degradable = False
        if strategy != OptimizationStrategy.DIAGONAL_GRID:
            certificate = self.degradability_service.degradability_certificate(channel)
            degradable = certificate.degradable.certified is True
        return CapacityService(seed=self.seed).q1(channel, strategy, degradable=degradable)

    # Dispatch

    def run(self, config: ExperimentConfig) -> Path:
        """
        Run one configured experiment and write its output and config echo

        Args:
            config: resolved experiment configuration

        Returns:
            Path of the written output
        """
        try:
            name = config.experiment
            params = {**DEFAULTS[name], **config.params}
            out = Path(config.out)
            logger.info(f"Running {name.value} with {params}")

            if name == ExperimentName.COHERENT_INFO_SURFACE:
                rows = self.run_coherent_info_surface(
                    int(params["s_steps"]), int(params["t_steps"])
                )
                write_csv(out, rows, ["s", "t", "u_star", "q1"])

            elif name == ExperimentName.PRIVATE_INFO_SURFACE:
                rows = self.run_private_info_surface(int(params["s_steps"]), int(params["t_steps"]))
                write_csv(out, rows, ["s", "t", "p", "u", "p1", "flagged"])

            elif name == ExperimentName.FLAGGED_REGION_SCAN:
                rows = self.run_flagged_region_scan(
                    int(params["p_steps"]), int(params["gamma_steps"]), int(params["eta_steps"])
                )
                write_csv(
                    out, rows, ["p", "gamma", "eta", "analytic_verdict", "numeric_verdict", "agree"]
                )

            elif name == ExperimentName.AMPLIFICATION_DEMO:
                report = self.run_amplification_demo(
                    float(params["s"]),
                    float(params["t"]),
                    float(params["lam"]),
                    config.epsilon_grid,
                )
                write_json(out, report)

            elif name == ExperimentName.SMITH_YARD_DEMO:
                report = self.run_smith_yard_demo(
                    float(params["s"]), float(params["t"]), int(params["d_c"])
                )
                write_json(out, report)

            elif name == ExperimentName.SCALING_DEMO:
                write_json(out, self.run_scaling_demo(float(params["gamma"]), config.epsilon_grid))

            elif name == ExperimentName.RATIO_PROBE:
                report = self.run_ratio_probe(
                    float(params["gamma1"]),
                    float(params["gamma2"]),
                    int(params["dim_v"]),
                    int(params["samples"]),
                )
                write_json(out, report)

            elif name == ExperimentName.CERTIFY:
                channel = self.resolve_channel(config.family, config.channel_file)
                write_json(out, self.run_certify(channel))

            elif name == ExperimentName.Q1:
                channel = self.resolve_channel(config.family, config.channel_file)
                try:
                    strategy = OptimizationStrategy(str(params["strategy"]))
                except ValueError:
                    raise ParameterError(f"Unknown strategy: {params['strategy']}")
                write_json(out, self.run_q1(channel, strategy))

            else:
                raise ParameterError(f"Unsupported experiment: {name}")

            write_json(config_echo_path(out), config)
            logger.info(f"Wrote {out}")
            return out

        except Exception as e:
            logger.error(f"Error running {config.experiment.value}: {e}")
            raise
