"""Evaluation metrics and wall-clock comparison of exact vs early-fixed solving.

The objective gap of a heuristic region choice is (exact - fixed) / exact,
averaged over instances that stay feasible after fixing and have a positive
exact optimum; zero-optimum instances are counted separately.  Timings
compare a full 25-LP enumeration against one model inference plus one LP.
"""

import json
import statistics
import time
from dataclasses import asdict, dataclass

import numpy as np

from .exact import objective_for
from .formulation import build_early_fixed_lp, enumerate_assignments
from .lp_solver import SimplexSolver
from .neural import MlpModel, forward, round_assignment
from .training import predict_assignment
from .well_model import build_flow_table, default_grid

_ZERO_OPTIMUM = 1e-9


@dataclass
class EvalReport:
    per_head_accuracy: float
    exact_match_accuracy: float
    per_bit_accuracy: float
    infeasible_rate: float
    mean_objective_gap: float
    n_instances: int
    n_zero_optimum: int
    seeds_aggregated: int = 1


@dataclass
class TimingReport:
    mean_exact_ms: float
    mean_lp_ms: float
    mean_inference_ms: float
    runtime_reduction: float
    n_instances: int
    repetitions: int


def evaluate_assignments(assign_fn, test_records, table_builder=None) -> EvalReport:
    """Score any params -> RegionAssignment rule against optimally-labeled records."""
    if not test_records:
        raise ValueError("empty test set")
    table_builder = table_builder or (lambda p: build_flow_table(p, default_grid()))

    head_hits = 0
    exact_hits = 0
    bit_hits = 0
    n_infeasible = 0
    n_zero = 0
    gaps = []
    for record in test_records:
        zhat = assign_fn(record.params)
        head_hits += (zhat.zgl_idx == record.z_star.zgl_idx) + (
            zhat.zwhp_idx == record.z_star.zwhp_idx
        )
        exact_hits += zhat == record.z_star
        bit_hits += int((zhat.to_binary() == record.z_star.to_binary()).sum())

        fixed_obj = objective_for(record.params, table_builder(record.params), zhat)
        if fixed_obj is None:
            n_infeasible += 1
        elif record.objective_star <= _ZERO_OPTIMUM:
            n_zero += 1
        else:
            gaps.append((record.objective_star - fixed_obj) / record.objective_star)

    n = len(test_records)
    return EvalReport(
        per_head_accuracy=head_hits / (2 * n),
        exact_match_accuracy=exact_hits / n,
        per_bit_accuracy=bit_hits / (10 * n),
        infeasible_rate=n_infeasible / n,
        mean_objective_gap=float(np.mean(gaps)) if gaps else 0.0,
        n_instances=n,
        n_zero_optimum=n_zero,
    )


def evaluate_heuristic(model: MlpModel, test_records, table_builder=None) -> EvalReport:
    """Score a trained region classifier on held-out labeled records."""
    return evaluate_assignments(
        lambda params: predict_assignment(model, params), test_records, table_builder
    )


def aggregate_reports(reports) -> EvalReport:
    """Mean of every metric across seed repetitions."""
    if not reports:
        raise ValueError("no reports to aggregate")
    return EvalReport(
        per_head_accuracy=float(np.mean([r.per_head_accuracy for r in reports])),
        exact_match_accuracy=float(np.mean([r.exact_match_accuracy for r in reports])),
        per_bit_accuracy=float(np.mean([r.per_bit_accuracy for r in reports])),
        infeasible_rate=float(np.mean([r.infeasible_rate for r in reports])),
        mean_objective_gap=float(np.mean([r.mean_objective_gap for r in reports])),
        n_instances=reports[0].n_instances,
        n_zero_optimum=int(round(np.mean([r.n_zero_optimum for r in reports]))),
        seeds_aggregated=sum(r.seeds_aggregated for r in reports),
    )


def benchmark_runtime(model: MlpModel, instances, repetitions: int) -> TimingReport:
    """Median-of-repetitions timing per instance, averaged across instances.

    Measures LP solve time only (model building excluded) for both the
    25-LP enumeration and the single early-fixed LP, plus inference time.
    """
    if repetitions < 3:
        raise ValueError("repetitions must be >= 3 for a stable median")
    if not instances:
        raise ValueError("no instances to benchmark")

    exact_ms, lp_ms, inf_ms = [], [], []
    for params in instances:
        table = build_flow_table(params, default_grid())
        all_lps = [build_early_fixed_lp(params, table, z) for z in enumerate_assignments()]
        x = params.as_vector()

        runs = []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            for lp in all_lps:
                SimplexSolver().solve(lp)
            runs.append((time.perf_counter() - t0) * 1e3)
        exact_ms.append(statistics.median(runs))

        runs = []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            pred, _ = forward(model, x)
            zhat = round_assignment(pred)
            runs.append((time.perf_counter() - t0) * 1e3)
        inf_ms.append(statistics.median(runs))

        fixed_lp = build_early_fixed_lp(params, table, zhat)
        runs = []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            SimplexSolver().solve(fixed_lp)
            runs.append((time.perf_counter() - t0) * 1e3)
        lp_ms.append(statistics.median(runs))

    mean_exact = float(np.mean(exact_ms))
    mean_lp = float(np.mean(lp_ms))
    mean_inf = float(np.mean(inf_ms))
    return TimingReport(
        mean_exact_ms=mean_exact,
        mean_lp_ms=mean_lp,
        mean_inference_ms=mean_inf,
        runtime_reduction=1.0 - (mean_lp + mean_inf) / mean_exact,
        n_instances=len(instances),
        repetitions=repetitions,
    )


# -- report serialization --------------------------------------------------------------


def emit_report(report, fmt: str = "text") -> str:
    """Serialize an EvalReport or TimingReport as json or an aligned text table."""
    if isinstance(report, EvalReport) and report.n_instances == 0:
        raise ValueError("refusing to emit an empty report")
    if isinstance(report, TimingReport) and report.n_instances == 0:
        raise ValueError("refusing to emit an empty report")
    if fmt == "json":
        return json.dumps(asdict(report))
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(report, EvalReport):
        rows = [
            ("Accuracy (per head)", f"{report.per_head_accuracy:.2%}"),
            ("Accuracy (exact match)", f"{report.exact_match_accuracy:.2%}"),
            ("Accuracy (per bit)", f"{report.per_bit_accuracy:.2%}"),
            ("Infeasible", f"{report.infeasible_rate:.2%}"),
            ("Objective gap", f"{report.mean_objective_gap:.2%}"),
            ("Instances", str(report.n_instances)),
            ("Zero-optimum instances", str(report.n_zero_optimum)),
            ("Seeds aggregated", str(report.seeds_aggregated)),
        ]
    elif isinstance(report, TimingReport):
        rows = [
            ("Exact enumeration (ms)", f"{report.mean_exact_ms:.4f}"),
            ("Early-fixed LP (ms)", f"{report.mean_lp_ms:.4f}"),
            ("Model inference (ms)", f"{report.mean_inference_ms:.4f}"),
            ("Runtime reduction", f"{report.runtime_reduction:.2%}"),
            ("Instances", str(report.n_instances)),
            ("Repetitions", str(report.repetitions)),
        ]
    else:
        raise ValueError(f"cannot render report of type {type(report).__name__}")
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label:<{width}}  {value}" for label, value in rows)


def report_from_json(text: str):
    """Inverse of emit_report(..., "json"): reconstruct the right report type."""
    obj = json.loads(text)
    if "mean_exact_ms" in obj:
        return TimingReport(**obj)
    return EvalReport(**obj)
