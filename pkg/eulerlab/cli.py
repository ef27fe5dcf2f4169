"""
euler-lab command line: run experiments, dump mode exponentials and frames.
"""

import json
import sys
from typing import Dict, List, Optional

import click
from tabulate import tabulate

from .config.config import KINDS, load_config
from .errors import EulerLabError
from .frame.decomposition import decompose_state
from .frame.functionals import solve_frame
from .harness.experiments import run_experiment
from .harness.outputs import write_outputs
from .integrator.trajectory import Trajectory
from .linear.propagator import mode_exponential
from .spectral.grid import make_grid
from .spectral.snapshot import fmt, write_matrix
from .utils.log import setup_logger


def _parse_modes(raw: str):
    try:
        return [int(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {raw!r}")


@click.group()
@click.option("--log-level", default=None, help="Log level (default EULER_LAB_LOG_LEVEL or INFO)")
def main(log_level: Optional[str]):
    """Damped compressible Euler laboratory"""
    setup_logger(level=log_level)


def _emit_failures(kind: Optional[str], seed: Optional[int], failures: List[Dict]):
    click.echo(json.dumps({"kind": kind, "seed": seed, "failures": failures}, sort_keys=True), err=True)


@main.command()
@click.option("--kind", type=click.Choice(KINDS), default=None, help="Experiment kind")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="JSON or TOML config file")
@click.option("--dim", type=int, default=None)
@click.option("--N", "N", type=int, default=None, help="Modes per axis")
@click.option("--s", "s", type=float, default=None, help="Sobolev index")
@click.option("--gamma", type=float, default=None)
@click.option("--amplitude", type=float, default=None)
@click.option("--T-end", "T_end", type=float, default=None)
@click.option("--dt", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--K-frame", "K_frame", type=int, default=None)
@click.option("--output-dir", type=str, default=None)
@click.option("--record-every", type=int, default=None)
@click.option("--T-window", "T_window", type=float, default=None)
@click.option("--save-trajectory/--no-save-trajectory", default=None)
def run(config_path: Optional[str], **flags):
    """Run one experiment and check its acceptance thresholds"""
    config = None
    try:
        config = load_config(config_path, flags)
        outcome = run_experiment(config)
        paths = write_outputs(outcome.report, outcome.trajectory, config)
    except EulerLabError as e:
        kind = config.kind if config is not None else flags.get("kind")
        seed = config.seed if config is not None else flags.get("seed")
        _emit_failures(kind, seed, [{"name": type(e).__name__, "detail": str(e), "passed": False}])
        raise click.ClickException(str(e))

    report = outcome.report
    rows = [
        [c.name, "-" if c.value is None else f"{c.value:.6g}", f"{c.comparison} {c.threshold:.6g}", "PASS" if c.passed else "FAIL"]
        for c in report.checks
    ]
    click.echo(tabulate(rows, headers=["Check", "Value", "Threshold", "Status"], tablefmt="grid"))
    click.echo(f"Artifacts: {len(paths)} files in {config.run_dir}")
    if not report.passed:
        _emit_failures(report.kind, report.seed, report.failures())
        sys.exit(1)


@main.command("dump-symbol")
@click.option("--xi", required=True, help="Mode as comma-separated integers, e.g. 1,0")
@click.option("--t", "t", type=float, required=True, help="Time")
@click.option("--N", "N", type=int, default=32, help="Modes per axis of the reference grid")
def dump_symbol(xi: str, t: float, N: int):
    """Print e^{tA(xi)} in the snapshot text layout"""
    modes = _parse_modes(xi)
    try:
        grid = make_grid(len(modes), N)
        matrix = mode_exponential(modes, t)
    except EulerLabError as e:
        raise click.ClickException(str(e))
    write_matrix(click.get_text_stream("stdout"), grid, matrix, f"exp_tA[{','.join(map(str, modes))}]", t)


@main.group()
def frame():
    """Moving-frame tools"""
    pass


@frame.command("dump")
@click.option("--traj", "traj_dir", type=click.Path(exists=True, file_okay=False), required=True, help="Trajectory directory")
@click.option("--t", "t", type=float, required=True, help="Time inside the trajectory")
@click.option("--K-frame", "K_frame", type=int, default=None, help="Frame truncation (default 8, 4 in 3D)")
def frame_dump(traj_dir: str, t: float, K_frame: Optional[int]):
    """Print the l1, l2 rows and c(t) as CSV"""
    try:
        trajectory = Trajectory.load(traj_dir)
        state = trajectory.state_at(t)
        K = K_frame or (4 if trajectory.grid.dim == 3 else 8)
        functionals = solve_frame(state, trajectory.params, K)
        c = decompose_state(state, functionals).c
    except EulerLabError as e:
        raise click.ClickException(str(e))

    dim = trajectory.grid.dim
    click.echo("component," + ",".join(f"xi_{i + 1}" for i in range(dim)) + ",re,im")
    rows = [("l1", functionals.l1)] + [(f"l2_{j + 1}", functionals.l2[j]) for j in range(dim)]
    for name, values in rows:
        for xi, value in zip(functionals.modes, values):
            click.echo(f"{name}," + ",".join(str(int(v)) for v in xi) + f",{fmt(value.real)},{fmt(value.imag)}")
    click.echo("c," + ",".join("0" for _ in range(dim)) + f",{fmt(c)},0")


if __name__ == "__main__":
    main()
