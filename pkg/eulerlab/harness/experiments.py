"""
The named experiment kinds and their acceptance checks.
"""

import math
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from loguru import logger
from threadpoolctl import threadpool_limits

from ..config.config import ExperimentConfig
from ..diagnostics.conservation import continuity_residual, mass_integral, momentum_residual
from ..diagnostics.decay import MIN_SAMPLES, fit_decay, local_maxima
from ..diagnostics.estimates import commutator_norm_probe, dissipativity_constant, dissipativity_form, gradient_sup
from ..diagnostics.slaving import slaving_series
from ..dynamics.gas import GasParameters
from ..frame.decomposition import c_rate, conjugated_rhs, decompose_state, frame_rate, frame_residual
from ..frame.functionals import solve_frame, solve_frames
from ..integrator.evolution import NormRecorder, evolve, step_count
from ..integrator.lawson import LawsonPropagators, lawson_rk4_step
from ..integrator.picard import picard_sequence
from ..integrator.trajectory import Trajectory
from ..linear.propagator import apply_semigroup, semigroup_constant
from ..models import CheckResult, DecayReport, ExperimentReport
from ..spectral.fields import ScalarField, State
from ..spectral.grid import GridSpec, make_grid
from ..spectral.norms import inner_product, sobolev_norm
from ..spectral.random_data import random_state
from ..utils.parallel import thread_count

LINEAR_RATE = 0.5
ENVELOPE_RTOL = 1e-12


class ExperimentOutcome(NamedTuple):
    report: ExperimentReport
    trajectory: Optional[Trajectory]


def check(name: str, value: float, threshold: float, comparison: str = "<", detail: str = "") -> CheckResult:
    """A NaN value never passes."""
    if comparison == "<":
        passed = bool(value < threshold)
    elif comparison == "<=":
        passed = bool(value <= threshold)
    elif comparison == ">=":
        passed = bool(value >= threshold)
    else:
        raise ValueError(f"unknown comparison {comparison!r}")
    value = float(value)
    return CheckResult(
        name=name,
        value=value if math.isfinite(value) else None,
        threshold=float(threshold),
        comparison=comparison,
        passed=passed and math.isfinite(value),
        detail=detail,
    )


def fit_rate(times: np.ndarray, values: np.ndarray, window: Tuple[float, float], name: str) -> DecayReport:
    """Envelope fit when the window holds enough strict maxima, plain fit otherwise."""
    times, values = np.asarray(times), np.asarray(values)
    inside = (times >= window[0] - 1e-12) & (times <= window[1] + 1e-12)
    envelope = local_maxima(values[inside]).size >= MIN_SAMPLES
    report = fit_decay(times, values, window, envelope=envelope, quantity_name=name)
    logger.info(f"{name}: rate={report.fitted_rate:.4f} over {window} (envelope={envelope})")
    return report


def _setup(config: ExperimentConfig, N: Optional[int] = None) -> Tuple[GridSpec, GasParameters]:
    return make_grid(config.dim, N or config.N), GasParameters(gamma=config.gamma)


def _nonlinear_initial(config: ExperimentConfig, grid: GridSpec, params: GasParameters, amplitude: float) -> State:
    return random_state(config.seed, grid, config.s + 1, amplitude, sigma_mean="unit_mass", theta=params.theta)


def _new_report(config: ExperimentConfig) -> ExperimentReport:
    return ExperimentReport(kind=config.kind, seed=config.seed, config=config.model_dump())


def run_linear_decay(config: ExperimentConfig) -> ExperimentOutcome:
    """
    Norm of T(t)x for zero-mean x: rate 1/2, and the data envelope against the
    semigroup constant K measured over the retained modes (rechecked on a 2N grid).
    """
    grid, params = _setup(config)
    thresholds = config.thresholds
    report = _new_report(config)
    initial = random_state(config.seed, grid, config.s, config.amplitude, theta=params.theta)
    T = config.linear_T_end

    recorder = NormRecorder(config.s)
    hilbert = NormRecorder(config.s, combine="l2")
    trajectory = evolve(initial, T, config.dt, params, [recorder, hilbert], config.record_every,
                        s=config.s, nonlinear=False)
    times, norms = np.array(recorder.times), np.array(recorder.norms_s)

    # the per-mode bound holds in the Euclidean combination at the same sample times
    K_measured = semigroup_constant(grid, config.s, times[1:])
    K_refined = semigroup_constant(make_grid(config.dim, 2 * config.N), config.s, times[1:])
    hilbert_norms = np.array(hilbert.norms_s)
    envelope = float(np.max(hilbert_norms * np.exp(LINEAR_RATE * times)) / hilbert_norms[0])

    decay = fit_rate(times, norms, (T / 4.0, T), "linear_norm_s")
    decay.K_measured = K_measured
    decay.constants["K_refined"] = K_refined
    decay.constants["data_envelope"] = envelope
    report.decay_reports.append(decay)
    report.measurements.update({
        "rate": decay.fitted_rate,
        "K_measured": K_measured,
        "K_refined": K_refined,
        "data_envelope": envelope,
    })
    report.checks += [
        check("linear_rate_error", abs(decay.fitted_rate - LINEAR_RATE) / LINEAR_RATE, thresholds.linear_rate_rtol),
        check("K_refinement_change", abs(K_refined - K_measured) / K_measured, thresholds.K_refinement_rtol),
        check("data_envelope", envelope, K_measured * (1.0 + ENVELOPE_RTOL), "<="),
    ]
    report.series["norms"] = {
        "t": times.tolist(),
        "norm_s": norms.tolist(),
        "norm_s1": recorder.norms_s1,
        "scaled_norm_s": (hilbert_norms * np.exp(LINEAR_RATE * times) / hilbert_norms[0]).tolist(),
    }
    return ExperimentOutcome(report, trajectory)


def _nonlinear_core(config: ExperimentConfig, report: ExperimentReport) -> Tuple[Trajectory, GasParameters]:
    grid, params = _setup(config)
    thresholds = config.thresholds
    initial = _nonlinear_initial(config, grid, params, config.amplitude)
    recorder = NormRecorder(config.s)
    trajectory = evolve(initial, config.T_end, config.dt, params, [recorder], config.record_every, s=config.s)

    times = np.array(recorder.times)
    decay = fit_rate(times, np.array(recorder.norms_s1), (config.fit_window_start, config.T_end), "norm_s1")
    masses = np.array([mass_integral(state, params) for state in trajectory.states])
    drift = float(np.max(np.abs(masses - masses[0])) / masses[0])

    report.decay_reports.append(decay)
    report.measurements.update({
        "decay_rate": decay.fitted_rate,
        "mass_drift": drift,
        "continuity_residual": continuity_residual(trajectory, params),
        "momentum_residual": momentum_residual(trajectory, params),
    })
    report.checks += [
        check("decay_rate", decay.fitted_rate, thresholds.decay_rate_min, ">="),
        check("mass_drift", drift, thresholds.mass_rtol),
    ]
    report.series["norms"] = {"t": recorder.times, "norm_s": recorder.norms_s, "norm_s1": recorder.norms_s1}
    report.series["state"] = {
        "t": trajectory.times.tolist(),
        "mass": masses.tolist(),
        "P_sigma": [state.sigma.mean for state in trajectory.states],
    }
    return trajectory, params


def run_nonlinear_decay(config: ExperimentConfig) -> ExperimentOutcome:
    report = _new_report(config)
    trajectory, _ = _nonlinear_core(config, report)
    return ExperimentOutcome(report, trajectory)


def _local_checks(config: ExperimentConfig, state: State, params: GasParameters) -> Dict[str, float]:
    """Finite-difference checks of the frame dynamics on a short sub-run through state."""
    h, K = config.fd_dt, config.frame_truncation
    sub = evolve(state, 2.0 * h, h, params, s=config.s)
    frames = [solve_frame(st, params, K) for st in sub.states]
    parts = [decompose_state(st, frame) for st, frame in zip(sub.states, frames)]

    tangent_fd = (parts[2].tangent() - parts[0].tangent()) * (0.5 / h)
    predicted = conjugated_rhs(parts[1], frames[1], params)
    tangent_error = sobolev_norm(tangent_fd - predicted, config.s) / sobolev_norm(predicted, config.s)

    c_fd = (parts[2].c - parts[0].c) / (2.0 * h)
    c_predicted = c_rate(frame_rate(frames[0], frames[2], 2.0 * h), sub.states[1])
    c_error = abs(c_fd - c_predicted) / max(abs(c_predicted), np.finfo(float).tiny)
    return {
        "tangent_error": tangent_error,
        "c_rate_error": c_error,
        "frame_residual": frame_residual(sub.states[1], frames[1], params, s=config.s, seed=config.seed),
    }


def run_frame_tracking(config: ExperimentConfig) -> ExperimentOutcome:
    """Nonlinear run decomposed in the moving frame at every stored state."""
    report = _new_report(config)
    thresholds = config.thresholds
    trajectory, params = _nonlinear_core(config, report)
    K = config.frame_truncation
    frames = solve_frames(trajectory.states, params, K)
    parts = [decompose_state(state, frame) for state, frame in zip(trajectory.states, frames)]
    part_norms = np.array([part.part_norm(config.s + 1) for part in parts])

    slaving = slaving_series(trajectory, frames, config.s)
    conjugated = fit_rate(trajectory.times, part_norms, (config.fit_window_start, config.T_end), "part_norm_s1")
    report.decay_reports += [conjugated, slaving]

    positions = [int(round(k * (len(trajectory) - 1) / (config.fd_checks + 1))) for k in range(1, config.fd_checks + 1)]
    local = [_local_checks(config, trajectory.states[i], params) for i in positions]
    worst = {key: max(entry[key] for entry in local) for key in local[0]}
    report.measurements.update({"slaving_C": slaving.constants["C"], "part_decay_rate": conjugated.fitted_rate})
    report.measurements.update({f"max_{key}": value for key, value in worst.items()})
    report.checks += [
        check("slaving_C", slaving.constants["C"], thresholds.slaving_max),
        check("part_decay_rate", conjugated.fitted_rate, thresholds.decay_rate_min, ">="),
        check("c_rate_error", worst["c_rate_error"], thresholds.c_rate_rtol),
        check("tangent_error", worst["tangent_error"], thresholds.tangent_rtol),
        check("frame_residual", worst["frame_residual"], thresholds.frame_residual_max),
    ]

    ratios = dict(zip(slaving.times, slaving.values))
    report.series["frame"] = {
        "t": trajectory.times.tolist(),
        "c": [part.c for part in parts],
        "P_sigma": [state.sigma.mean for state in trajectory.states],
        "sigma1_norm_s1": [sobolev_norm(part.sigma1, config.s + 1) for part in parts],
        "u1_norm_s1": [sum(sobolev_norm(u, config.s + 1) for u in part.u1) for part in parts],
        "slaving_ratio": [ratios.get(float(t), float("nan")) for t in trajectory.times],
        "frame_norm": [frame.row_norm() for frame in frames],
    }
    return ExperimentOutcome(report, trajectory)


def _sample_amplitudes(config: ExperimentConfig) -> np.ndarray:
    low, high = config.amplitude_range
    return np.logspace(np.log10(low), np.log10(high), config.n_samples)


def run_commutator_study(config: ExperimentConfig) -> ExperimentOutcome:
    """||S B S^{-1} - B|| / ||state||_{s+1} over random states, amplitudes and grids."""
    report = _new_report(config)
    thresholds = config.thresholds
    params = GasParameters(gamma=config.gamma)
    rows = {"sample": [], "N": [], "amplitude": [], "probe": [], "norm_s1": [], "ratio": []}
    for i, amplitude in enumerate(_sample_amplitudes(config)):
        grid = make_grid(config.dim, config.study_N[i % len(config.study_N)])
        state = random_state(config.seed + i, grid, config.s + 1, float(amplitude), theta=params.theta)
        probe = commutator_norm_probe(state, config.s, config.n_probes, config.seed + i, params, config.power_iterations)
        norm = sobolev_norm(state, config.s + 1, "paper")
        for key, value in zip(rows, (i, grid.N, float(amplitude), probe, norm, probe / norm)):
            rows[key].append(value)

    grid = make_grid(config.dim, config.study_N[0])
    constant = State.from_fields(
        ScalarField.constant(grid, 0.1), [ScalarField.constant(grid, 0.05 * (j + 1)) for j in range(grid.dim)]
    )
    constant_probe = commutator_norm_probe(constant, config.s, config.n_probes, config.seed, params, config.power_iterations)
    spread = max(rows["ratio"]) / min(rows["ratio"])
    report.measurements.update({"ratio_spread": spread, "constant_probe": constant_probe,
                                "ratio_max": max(rows["ratio"]), "ratio_min": min(rows["ratio"])})
    report.checks += [
        check("commutator_ratio_spread", spread, thresholds.commutator_spread_max),
        check("constant_state_commutator", constant_probe, thresholds.constant_commutator_max),
    ]
    report.series["samples"] = rows
    return ExperimentOutcome(report, None)


def run_dissipativity_study(config: ExperimentConfig) -> ExperimentOutcome:
    """sup |<B x, x>_s| / (||D(sigma,U)||_inf ||x||_s^2) over random coefficient states."""
    report = _new_report(config)
    thresholds = config.thresholds
    grid, params = _setup(config)
    rows = {"sample": [], "amplitude": [], "gradient_sup": [], "constant": [], "ratio": [], "form_ratio": []}
    for i, amplitude in enumerate(_sample_amplitudes(config)):
        coefficients = random_state(config.seed + i, grid, config.s + 1, float(amplitude), theta=params.theta)
        constant, argument = dissipativity_constant(
            coefficients, config.s, params, seed=config.seed + i, iterations=config.power_iterations
        )
        sup = gradient_sup(coefficients)
        form = dissipativity_form(coefficients, argument, config.s, params)
        form_ratio = abs(form) / (sup * inner_product(argument, argument, config.s))
        for key, value in zip(rows, (i, float(amplitude), sup, constant, constant / sup, form_ratio)):
            rows[key].append(value)
    spread = max(rows["ratio"]) / min(rows["ratio"])
    report.measurements.update({"ratio_spread": spread, "C_measured": max(rows["ratio"])})
    report.checks.append(check("dissipativity_ratio_spread", spread, thresholds.dissipativity_spread_max))
    report.series["samples"] = rows
    return ExperimentOutcome(report, None)


def run_picard_study(config: ExperimentConfig) -> ExperimentOutcome:
    """Contraction of the Picard map at the configured amplitude and a decade below."""
    report = _new_report(config)
    thresholds = config.thresholds
    grid, params = _setup(config)
    outcomes = []
    for amplitude in (config.amplitude, config.amplitude / 10.0):
        initial = _nonlinear_initial(config, grid, params, amplitude)
        outcome = picard_sequence(initial, config.T_window, config.dt, params, config.picard_iterations, config.s)
        growth = max(outcome.higher_norm_peaks) / sobolev_norm(initial, config.s + 1)
        outcomes.append((amplitude, outcome, growth))

    (_, main, growth), (_, small, small_growth) = outcomes
    report.contraction_factors = main.factors
    report.measurements.update({
        "contraction_factor": main.contraction_factor,
        "contraction_factor_small": small.contraction_factor,
        "higher_norm_growth": max(growth, small_growth),
    })
    report.checks += [
        check("contraction_factor", main.contraction_factor, thresholds.picard_factor_max),
        check("contraction_factor_small", small.contraction_factor, thresholds.picard_small_factor_max),
        check("higher_norm_growth", max(growth, small_growth), thresholds.higher_norm_growth_max, "<="),
    ]
    report.series["factors"] = {
        "iteration": list(range(2, len(main.factors) + 2)),
        "factor": main.factors,
        "factor_small": small.factors,
    }
    return ExperimentOutcome(report, main.trajectory)


def run_convergence_study(config: ExperimentConfig) -> ExperimentOutcome:
    """Self-convergence order of Lawson-RK4 and exactness of its linear part."""
    report = _new_report(config)
    thresholds = config.thresholds
    grid, params = _setup(config)
    initial = _nonlinear_initial(config, grid, params, config.convergence_amplitude)
    T = config.convergence_T

    finals = []
    for dt in config.convergence_dt:
        steps = step_count(T, dt)
        finals.append(evolve(initial, T, dt, params, record_every=steps, s=config.s).states[-1])
    differences = [sobolev_norm(a - b, config.s) for a, b in zip(finals[:-1], finals[1:])]
    order = math.log(differences[0] / differences[1]) / math.log(config.convergence_dt[0] / config.convergence_dt[1])

    dt = config.convergence_dt[0]
    linear_step = lawson_rk4_step(initial, dt, LawsonPropagators.build(grid, dt))
    exact = apply_semigroup(initial, dt)
    linear_error = float(np.max(np.abs(linear_step.data - exact.data)) / np.max(np.abs(exact.data)))

    report.measurements.update({"order": order, "linear_step_error": linear_error})
    report.checks += [
        check("convergence_order", order, thresholds.convergence_order_min, ">="),
        check("linear_step_error", linear_error, thresholds.linear_step_max),
    ]
    report.series["convergence"] = {"dt": config.convergence_dt[:-1], "difference": differences}
    return ExperimentOutcome(report, None)


RUNNERS: Dict[str, Callable[[ExperimentConfig], ExperimentOutcome]] = {
    "linear-decay": run_linear_decay,
    "nonlinear-decay": run_nonlinear_decay,
    "frame-tracking": run_frame_tracking,
    "commutator-study": run_commutator_study,
    "picard-study": run_picard_study,
    "convergence-study": run_convergence_study,
    "dissipativity-study": run_dissipativity_study,
}


def run_experiment(config: ExperimentConfig) -> ExperimentOutcome:
    """Run one experiment kind with BLAS threads capped at EULER_LAB_THREADS."""
    logger.info(f"Starting {config.kind} (seed={config.seed}, dim={config.dim}, N={config.N})")
    with threadpool_limits(limits=thread_count()):
        outcome = RUNNERS[config.kind](config)
    failed = [c.name for c in outcome.report.checks if not c.passed]
    logger.info(f"Finished {config.kind}: {'all checks passed' if not failed else 'failed ' + ', '.join(failed)}")
    return outcome
