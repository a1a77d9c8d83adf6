"""
qadd command line: experiments on quantum channel additivity
"""

from pathlib import Path
from typing import Any, Optional

import typer

from qadd import __version__
from qadd.config import settings
from qadd.dependencies import get_experiment_service
from qadd.middleware.error_handler import ParameterError, handle_cli_errors
from qadd.models.schemas import ExperimentConfig, ExperimentName, OptimizationStrategy
from qadd.utils.logger import setup_logging

app = typer.Typer(
    name="qadd",
    help="Additivity experiments for finite-dimensional quantum channels",
    no_args_is_help=True,
    add_completion=False,
)

OutOption = typer.Option(..., "--out", help="Output file (CSV for surfaces, JSON otherwise)")
ParamOption = typer.Option(None, "--param", "-p", help="Experiment parameter as key=value")
SeedOption = typer.Option(settings.DEFAULT_SEED, "--seed", help="64-bit seed for all sampling")
WorkersOption = typer.Option(settings.WORKERS, "--workers", help="Worker processes for grid scans")
EpsilonOption = typer.Option(None, "--epsilon", help="Epsilon grid point (repeat for a grid)")
LogLevelOption = typer.Option(None, "--log-level", help="Override LOG_LEVEL")
FamilyOption = typer.Option(None, "--family", help='Family spec such as "platypus:0.2,0.3"')
ChannelFileOption = typer.Option(None, "--channel-file", help="Channel description JSON")


def _coerce(raw: str) -> float | int | str:
    for kind in (int, float):
        try:
            return kind(raw)
        except ValueError:
            continue
    return raw


def parse_params(items: Optional[list[str]]) -> dict[str, float | int | str]:
    """key=value pairs with numeric values converted"""
    params: dict[str, float | int | str] = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ParameterError(f"Parameters must look like key=value, got '{item}'")
        params[key.strip()] = _coerce(value.strip())
    return params


def _run(experiment: ExperimentName, out: Path, **options: Any) -> None:
    setup_logging(options.pop("log_level", None))
    config = ExperimentConfig(
        experiment=experiment,
        family=options.get("family"),
        channel_file=str(options["channel_file"]) if options.get("channel_file") else None,
        params=parse_params(options.get("param")),
        epsilon_grid=options.get("epsilon") or None,
        out=str(out),
        seed=options["seed"],
        workers=options["workers"],
    )
    service = get_experiment_service(config.seed, config.workers)
    path = service.run(config)
    typer.echo(str(path))


@app.command("coherent-info-surface")
@handle_cli_errors(report_errors=True)
def coherent_info_surface(
    out: Path = OutOption,
    param: Optional[list[str]] = ParamOption,
    seed: int = SeedOption,
    workers: int = WorkersOption,
    log_level: Optional[str] = LogLevelOption,
) -> None:
    """Q1 of the Platypus family on an (s, t) grid (params s_steps, t_steps)"""
    _run(
        ExperimentName.COHERENT_INFO_SURFACE,
        out,
        param=param,
        seed=seed,
        workers=workers,
        log_level=log_level,
    )


@app.command("private-info-surface")
@handle_cli_errors(report_errors=True)
def private_info_surface(
    out: Path = OutOption,
    param: Optional[list[str]] = ParamOption,
    seed: int = SeedOption,
    workers: int = WorkersOption,
    log_level: Optional[str] = LogLevelOption,
) -> None:
    """Two-state private information of the Platypus family (params s_steps, t_steps)"""
    _run(
        ExperimentName.PRIVATE_INFO_SURFACE,
        out,
        param=param,
        seed=seed,
        workers=workers,
        log_level=log_level,
    )


@app.command("flagged-region-scan")
@handle_cli_errors(report_errors=True)
def flagged_region_scan(
    out: Path = OutOption,
    param: Optional[list[str]] = ParamOption,
    seed: int = SeedOption,
    workers: int = WorkersOption,
    log_level: Optional[str] = LogLevelOption,
) -> None:
    """Analytic vs numeric degradability of flagged AD mixtures

    Params p_steps, gamma_steps and eta_steps set the grid resolution.
    """
    _run(
        ExperimentName.FLAGGED_REGION_SCAN,
        out,
        param=param,
        seed=seed,
        workers=workers,
        log_level=log_level,
    )


@app.command("amplification-demo")
@handle_cli_errors(report_errors=True)
def amplification_demo(
    out: Path = OutOption,
    param: Optional[list[str]] = ParamOption,
    epsilon: Optional[list[float]] = EpsilonOption,
    seed: int = SeedOption,
    workers: int = WorkersOption,
    log_level: Optional[str] = LogLevelOption,
) -> None:
    """Coherent information gain of N_{s,t} with an erasure channel (params s, t, lam)"""
    _run(
        ExperimentName.AMPLIFICATION_DEMO,
        out,
        param=param,
        epsilon=epsilon,
        seed=seed,
        workers=workers,
        log_level=log_level,
    )


@app.command("smith-yard-demo")
@handle_cli_errors(report_errors=True)
def smith_yard_demo(
    out: Path = OutOption,
    param: Optional[list[str]] = ParamOption,
    seed: int = SeedOption,
    workers: int = WorkersOption,
    log_level: Optional[str] = LogLevelOption,
) -> None:
    """Smith-Yard state for N_{s,t} with a 50% erasure channel (params s, t, d_c)"""
    _run(
        ExperimentName.SMITH_YARD_DEMO,
        out,
        param=param,
        seed=seed,
        workers=workers,
        log_level=log_level,
    )


@app.command("scaling-demo")
@handle_cli_errors(report_errors=True)
def scaling_demo(
    out: Path = OutOption,
    param: Optional[list[str]] = ParamOption,
    epsilon: Optional[list[float]] = EpsilonOption,
    seed: int = SeedOption,
    workers: int = WorkersOption,
    log_level: Optional[str] = LogLevelOption,
) -> None:
    """eps^2 log eps scaling of I(V;B) through amplitude damping (param gamma)"""
    _run(
        ExperimentName.SCALING_DEMO,
        out,
        param=param,
        epsilon=epsilon,
        seed=seed,
        workers=workers,
        log_level=log_level,
    )


@app.command("ratio-probe")
@handle_cli_errors(report_errors=True)
def ratio_probe(
    out: Path = OutOption,
    param: Optional[list[str]] = ParamOption,
    seed: int = SeedOption,
    workers: int = WorkersOption,
    log_level: Optional[str] = LogLevelOption,
) -> None:
    """Sampled ratio estimates for two amplitude damping channels

    Params: gamma1, gamma2, dim_v, samples.
    """
    _run(
        ExperimentName.RATIO_PROBE,
        out,
        param=param,
        seed=seed,
        workers=workers,
        log_level=log_level,
    )


@app.command("certify")
@handle_cli_errors(report_errors=True)
def certify(
    out: Path = OutOption,
    family: Optional[str] = FamilyOption,
    channel_file: Optional[Path] = ChannelFileOption,
    seed: int = SeedOption,
    workers: int = WorkersOption,
    log_level: Optional[str] = LogLevelOption,
) -> None:
    """Degradability certificate of a zoo channel or a channel file"""
    _run(
        ExperimentName.CERTIFY,
        out,
        family=family,
        channel_file=channel_file,
        seed=seed,
        workers=workers,
        log_level=log_level,
    )


@app.command("q1")
@handle_cli_errors(report_errors=True)
def q1(
    out: Path = OutOption,
    family: Optional[str] = FamilyOption,
    channel_file: Optional[Path] = ChannelFileOption,
    strategy: OptimizationStrategy = typer.Option(OptimizationStrategy.AUTO, "--strategy"),
    seed: int = SeedOption,
    workers: int = WorkersOption,
    log_level: Optional[str] = LogLevelOption,
) -> None:
    """Maximized coherent information of a zoo channel or a channel file"""
    _run(
        ExperimentName.Q1,
        out,
        family=family,
        channel_file=channel_file,
        param=[f"strategy={strategy.value}"],
        seed=seed,
        workers=workers,
        log_level=log_level,
    )


@app.command("version")
def version() -> None:
    """Print the package version"""
    typer.echo(__version__)


if __name__ == "__main__":
    app()
