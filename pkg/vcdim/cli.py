"""Command-line front end: simulate, estimate, fit, select and compare."""
import functools
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
from pydantic import ValidationError

from vcdim import __version__
from vcdim.core.config import settings
from vcdim.core.errors import InvalidConfigError, VcdimError
from vcdim.core.log import setup_logging
from vcdim.core.utils import DateTimeEncoder, file_digest, write_tsv
from vcdim.schemas.config import BoundPolicy, OrderKind, RunConfig, SelectionRule, SimulationConfig
from vcdim.schemas.manifest import RunManifest
from vcdim.services import dataio
from vcdim.services.modelselect import file_order, order_models, prepare, sweep
from vcdim.services.simgen import simulate
from vcdim.services.study import run_study
from vcdim.services.vcfit import fit_vc
from vcdim.services.xi import xi_curve

logger = logging.getLogger(__name__)

# flag name -> location inside RunConfig
RUN_FIELDS = {
    "design_points": ("design_points", "points"),
    "m": ("discretization", "m"),
    "bound": ("discretization", "bound_policy"),
    "fixed_b": ("discretization", "fixed_b"),
    "b1": ("bootstrap", "b1"),
    "b2": ("bootstrap", "b2"),
    "seed": ("bootstrap", "seed"),
    "stratified": ("bootstrap", "stratified"),
    "c_min": ("c_grid", "c_min"),
    "c_max": ("c_grid", "c_max"),
    "c_step": ("c_grid", "c_step"),
    "rule": ("selection", "rule"),
    "t": ("selection", "t"),
    "d_max": ("d_max",),
    "eta": ("eta",),
    "folds": ("folds",),
    "order": ("order",),
    "standardize": ("standardize",),
    "sphere": ("sphere",),
    "block_effects": ("block_effects",),
    "second_order": ("second_order",),
}


def _int_list(ctx, param, value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter("expected a comma separated list of integers")


def _name_list(ctx, param, value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    return [v.strip() for v in value.split(",") if v.strip()]


def resolve_config(config_path: Optional[str], **flags: Any) -> RunConfig:
    """Start from the JSON config (or defaults) and apply every flag that was given"""
    base = RunConfig.load(config_path) if config_path else RunConfig()
    data = base.model_dump()
    for name, value in flags.items():
        if value is None:
            continue
        *parents, leaf = RUN_FIELDS[name]
        target = data
        for key in parents:
            if target.get(key) is None:
                target[key] = {}
            target = target[key]
        target[leaf] = value
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise InvalidConfigError(
            "Invalid run configuration", {"errors": e.errors(include_url=False, include_context=False)}
        )


RUN_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON RunConfig; flags override it"),
    click.option("--design-points", callback=_int_list, help="Comma separated subsample sizes, e.g. 50,100,200"),
    click.option("--m", type=click.IntRange(min=1), help="Number of loss intervals"),
    click.option("--bound", type=click.Choice([b.value for b in BoundPolicy]), help="How the loss bound B is set"),
    click.option("--fixed-b", type=float, help="Loss bound when --bound fixed"),
    click.option("--b1", type=click.IntRange(min=1), help="Inner bootstrap replicates"),
    click.option("--b2", type=click.IntRange(min=1), help="Outer bootstrap replicates"),
    click.option("--seed", type=click.IntRange(min=0), help="Root seed of every random stream"),
    click.option("--stratified/--no-stratified", default=None, help="Resample within block levels"),
    click.option("--c-min", type=float),
    click.option("--c-max", type=float),
    click.option("--c-step", type=float),
    click.option("--d-max", type=float, help="Upper limit of the d search"),
    click.option("--eta", type=float, help="Confidence parameter of ERM1/ERM2"),
    click.option("--folds", type=click.IntRange(min=2), help="Cross-validation folds"),
    click.option("--order", type=click.Choice([o.value for o in OrderKind]), help="Nesting order: correlation, data column order, or --order-file"),
    click.option("--standardize/--no-standardize", default=None),
    click.option("--sphere/--no-sphere", default=None),
    click.option("--block-effects/--no-block-effects", default=None, help="Add block indicators to every model"),
    click.option("--second-order/--no-second-order", default=None, help="Add squares and pairwise products"),
    click.option("--rule", type=click.Choice([r.value for r in SelectionRule]), help="Selection rule for t = 0"),
    click.option("--t", type=float, help="Accept the first model with |size - d_hat| <= t"),
]


def run_options(f):
    for option in reversed(RUN_OPTIONS):
        f = option(f)
    return f


def data_options(f):
    f = click.option("--block-column", help="Column holding design-block labels")(f)
    f = click.option("--columns", callback=_name_list, help="Comma separated covariates (default: all numeric)")(f)
    f = click.option("--response", default="y", show_default=True, help="Response column")(f)
    f = click.option("--data", "data_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Input CSV")(f)
    return f


def out_option(f):
    return click.option("--out", required=True, type=click.Path(file_okay=False), help="Output directory")(f)


def workers_option(f):
    return click.option("--workers", type=click.IntRange(min=1), help=f"Worker threads (default {settings.WORKERS})")(f)


def reports_errors(f):
    """Turn pipeline errors into a diagnostic on stderr and a distinct exit code"""
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except VcdimError as e:
            click.echo(f"Error ({e.error_type}): {e.message}", err=True)
            if e.details:
                click.echo(json.dumps(e.details, cls=DateTimeEncoder), err=True)
            sys.exit(e.exit_code)
    return wrapper


def _split_run_flags(kwargs: Dict[str, Any]) -> Dict[str, Any]:
    return {name: kwargs.pop(name) for name in list(kwargs) if name in RUN_FIELDS}


def _out_dir(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _data_config(
    data_path: str, response: str, columns: Optional[List[str]], block_column: Optional[str], order_file: Optional[str] = None
) -> Dict[str, Any]:
    """The data-side flags a run needs to be repeated from its manifest"""
    return {
        "data": str(data_path),
        "response": response,
        "columns": columns,
        "block_column": block_column,
        "order_file": None if order_file is None else str(order_file),
    }


def _finish(command: str, out: Path, started: float, config: Dict[str, Any], seed: Optional[int], inputs: Sequence[str]):
    duration = time.perf_counter() - started
    manifest = RunManifest(
        command=command,
        config=config,
        seed=seed,
        version=__version__,
        duration_seconds=round(duration, 3),
        inputs={str(p): file_digest(p) for p in inputs},
    )
    dataio.write_manifest(manifest, out)
    logger.info(f"{command} finished in {duration:.2f}s; outputs in {out}")


@click.group()
@click.version_option(__version__, prog_name="vcdim")
@click.option("--log-level", default=None, help=f"Logging level (default {settings.LOG_LEVEL})")
def cli(log_level: Optional[str]):
    """Estimate VC dimensions by bootstrap and compare model selection criteria."""
    setup_logging(log_level)


@cli.command("simulate")
@click.option("--p", type=click.IntRange(min=1), default=15, show_default=True, help="Covariates with nonzero effect")
@click.option("--n", type=click.IntRange(min=2), default=400, show_default=True)
@click.option("--decoys", type=click.IntRange(min=0), default=0, show_default=True, help="Extra columns with zero effect")
@click.option("--sigma-eps", type=float, default=0.4, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@out_option
@reports_errors
def simulate_command(p: int, n: int, decoys: int, sigma_eps: float, seed: int, out: str):
    """Write a simulated linear-model dataset (unstandardized) and its true coefficients."""
    started = time.perf_counter()
    out_dir = _out_dir(out)
    sim_cfg = _simulation_config(p=p, n=n, decoys=decoys, sigma_eps=sigma_eps, seed=seed)
    simulation = simulate(sim_cfg)

    dataio.write_dataset_csv(simulation.raw, out_dir / "simulated.csv")
    terms = ["intercept"] + list(simulation.raw.columns)
    write_tsv(out_dir / "beta.tsv", ["term", "beta"], [[t, float(b)] for t, b in zip(terms, simulation.beta)])
    _finish("simulate", out_dir, started, sim_cfg.model_dump(mode="json"), seed, [])


@cli.command("xi")
@data_options
@run_options
@workers_option
@out_option
@reports_errors
def xi_command(data_path: str, response: str, columns, block_column, workers, out: str, config_path, **flags):
    """Estimate the xi curve of one model (the given columns) over the design points."""
    started = time.perf_counter()
    out_dir = _out_dir(out)
    run = resolve_config(config_path, **_split_run_flags(flags))
    dp = run.require_design_points()

    d = dataio.load_csv(data_path, response, block_column, columns)
    d, _ = prepare(d, run)
    dp.check_against(d.n)
    curve = xi_curve(d, d.columns, dp, run.discretization, run.bootstrap, workers=workers)

    dataio.write_xi_curve(curve, out_dir)
    config = {"run": run.model_dump(mode="json"), "data": _data_config(data_path, response, columns, block_column)}
    _finish("xi", out_dir, started, config, run.bootstrap.seed, [data_path])


@cli.command("fit")
@click.option("--curve", "curve_path", required=True, type=click.Path(exists=True, dir_okay=False), help="xi.json or a TSV with n_l and xi_hat")
@run_options
@click.option("--trace/--no-trace", default=False, help="Also write the per-c minimizers")
@out_option
@reports_errors
def fit_command(curve_path: str, trace: bool, out: str, config_path, **flags):
    """Fit the bound curve to a xi curve and report d_hat and c_hat."""
    started = time.perf_counter()
    out_dir = _out_dir(out)
    run = resolve_config(config_path, **_split_run_flags(flags))

    curve = dataio.read_xi_curve(curve_path)
    estimate = fit_vc(curve, run.c_grid, run.d_max, trace=trace)
    logger.info(f"d_hat = {estimate.d_hat:.4f}, c_hat = {estimate.c_hat:g}")

    dataio.write_vc_estimate(estimate, out_dir)
    config = {"run": run.model_dump(mode="json"), "curve": str(curve_path), "trace": trace}
    _finish("fit", out_dir, started, config, curve.seed, [curve_path])


@cli.command("select")
@data_options
@click.option("--order-file", type=click.Path(exists=True, dir_okay=False), help="One column per line, used with --order file")
@run_options
@workers_option
@out_option
@reports_errors
def select_command(data_path: str, response: str, columns, block_column, order_file, workers, out: str, config_path, **flags):
    """Sweep the nested models and report every criterion's choice."""
    started = time.perf_counter()
    out_dir = _out_dir(out)
    run = resolve_config(config_path, **_split_run_flags(flags))
    run.require_design_points()

    d = dataio.load_csv(data_path, response, block_column, columns)
    d, fixed = prepare(d, run)
    inputs = [data_path]
    if run.order == OrderKind.FILE:
        if not order_file:
            raise InvalidConfigError("--order file needs --order-file")
        models = file_order(dataio.read_order_file(order_file), d, fixed)
        inputs.append(order_file)
    else:
        models = order_models(d, run, fixed)
    logger.info(f"Inclusion order: {', '.join(models.order)}")

    report = sweep(d, models, run, workers=workers)
    dataio.write_report(report, out_dir)
    config = {
        "run": run.model_dump(mode="json"),
        "data": _data_config(data_path, response, columns, block_column, order_file),
    }
    _finish("select", out_dir, started, config, run.bootstrap.seed, inputs)


@cli.command("compare")
@click.option("--p", type=click.IntRange(min=1), default=15, show_default=True)
@click.option("--n", type=click.IntRange(min=2), default=400, show_default=True)
@click.option("--decoys", type=click.IntRange(min=0), default=12, show_default=True)
@click.option("--sigma-eps", type=float, default=0.4, show_default=True)
@click.option("--seeds", "seed_list", default="0,1,2,3,4,5,6,7,8,9", show_default=True, callback=_int_list, help="Comma separated seeds, one simulated dataset each")
@run_options
@workers_option
@out_option
@reports_errors
def compare_command(p: int, n: int, decoys: int, sigma_eps: float, seed_list, workers, out: str, config_path, **flags):
    """Simulate over several seeds and count how often each criterion finds the true size."""
    started = time.perf_counter()
    out_dir = _out_dir(out)
    if not seed_list:
        raise InvalidConfigError("--seeds must name at least one seed")
    if flags.get("order") is None and not config_path:
        # simulated columns are already nested: true effects first, decoys after
        flags["order"] = OrderKind.COLUMN.value
    run = resolve_config(config_path, **_split_run_flags(flags))
    run.require_design_points()
    sim_cfg = _simulation_config(p=p, n=n, decoys=decoys, sigma_eps=sigma_eps)

    study = run_study(sim_cfg, seed_list, run, workers=workers)
    dataio.write_study(study, out_dir)
    config = {"run": run.model_dump(mode="json"), "simulation": sim_cfg.model_dump(mode="json"), "seeds": seed_list}
    _finish("compare", out_dir, started, config, None, [])


@cli.command("serve")
@click.option("--host", default="0.0.0.0", show_default=True)
@click.option("--port", type=int, default=4000, show_default=True)
@click.option("--reload/--no-reload", default=False)
def serve_command(host: str, port: int, reload: bool):
    """Run the HTTP API with uvicorn."""
    import uvicorn

    uvicorn.run("vcdim.main:app", host=host, port=port, reload=reload)


def _simulation_config(**fields: Any) -> SimulationConfig:
    try:
        return SimulationConfig(**fields)
    except ValidationError as e:
        raise InvalidConfigError(
            "Invalid simulation settings", {"errors": e.errors(include_url=False, include_context=False)}
        )
