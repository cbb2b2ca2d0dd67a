"""CLI entry point and result emission.

Verbs map one-to-one onto the study's result families: `single-loop` (LQR
cost per bandwidth-allocation scheme), `multi-loop` (power sweep and
per-robot allocation), `contour` (LQR over power x compute budgets), and
`validate`. CSV files are the contract; every output starts with a metadata
block sufficient to re-run it exactly, and identical runs are byte-identical.

Exit codes: 0 ok, 2 validation error, 3 solver non-convergence, 4 I/O.
"""
import argparse
import hashlib
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__, svgplot
from .control import INFEASIBLE
from .optimize import (MultiLoopScheme, SingleLoopObjective, solve_multi_loop,
                       solve_single_loop, sweep_contour)
from .scenario import (Scenario, ScenarioError, default_scenario, dump_scenario,
                       load_scenario, provenance_map)

_SINGLE_SCHEMES = (
    ("task_oriented", SingleLoopObjective.TASK_ORIENTED),
    ("min_latency", SingleLoopObjective.MIN_LATENCY),
    ("max_throughput", SingleLoopObjective.MAX_THROUGHPUT),
)
_MULTI_SCHEMES = (
    ("task_oriented", MultiLoopScheme.TASK_ORIENTED_JOINT),
    ("max_throughput", MultiLoopScheme.MAX_THROUGHPUT_JOINT),
    ("compute_only", MultiLoopScheme.COMPUTE_ONLY_EQUAL_COMM),
)


@dataclass(frozen=True)
class RunRecord:
    """Reproducibility record for one CLI invocation."""
    scenario_hash: str
    resolved_parameters: tuple
    scheme_summaries: dict
    wall_clock_s: float
    tool_version: str
    converged: bool


def scenario_hash(scn: Scenario) -> str:
    return hashlib.sha256(dump_scenario(scn).encode("utf-8")).hexdigest()


def _num(x) -> str:
    if x is INFEASIBLE:
        return "inf"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _metadata(scn: Scenario) -> str:
    prov = provenance_map()
    lines = [f"# satloop {__version__}",
             f"# scenario_hash = {scenario_hash(scn)}",
             f"# seed = {scn.seed}"]
    for path, value in scn.flat_items():
        label = prov.get(path, "user")
        lines.append(f"# param {path} = {_num(value)} [{label}]")
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise _IoFailure(f"cannot write {path}: {exc}") from exc


class _IoFailure(RuntimeError):
    pass


def cmd_single_loop(scn: Scenario, out_dir: Path, fmt: str = "csv+svg") -> RunRecord:
    """Solve all three bandwidth-split schemes and emit CSV (+ bar chart)."""
    started = time.perf_counter()
    rows = []
    summaries = {}
    converged = True
    for name, objective in _SINGLE_SCHEMES:
        result = solve_single_loop(scn.single_loop_problem(objective))
        outcome = result.per_loop_outcomes[0]
        converged = converged and result.solver_trace.converged
        summaries[name] = {
            "objective_value": result.objective_value,
            "lqr_total": result.lqr_total,
            "lqr_cost": outcome.lqr_cost,
            "converged": result.solver_trace.converged,
        }
        rows.append([
            name,
            result.decision["bandwidth_up_hz"],
            result.decision["bandwidth_down_hz"],
            outcome.uplink_rate_bps,
            outcome.downlink_rate_bps,
            outcome.t_up_s,
            outcome.t_comp_s,
            outcome.t_down_s,
            outcome.effective_bits_per_cycle,
            outcome.cner_bps,
            outcome.lqr_cost,
        ])
    header = ("scheme,bandwidth_up_hz,bandwidth_down_hz,uplink_rate_bps,"
              "downlink_rate_bps,t_up_s,t_comp_s,t_down_s,effective_bits,"
              "cner_bps,lqr_cost")
    csv = _metadata(scn) + header + "\n" + "\n".join(
        ",".join(_num(v) for v in row) for row in rows) + "\n"
    _write(out_dir / "single_loop.csv", csv)
    if fmt == "csv+svg":
        values = [float("inf") if r[-1] is INFEASIBLE else float(r[-1]) for r in rows]
        svg = svgplot.bar_chart([r[0] for r in rows], values,
                                "Closed-loop cost by bandwidth allocation scheme",
                                "LQR cost")
        _write(out_dir / "single_loop_lqr.svg", svg)
    return RunRecord(scenario_hash(scn), tuple(scn.flat_items()), summaries,
                     time.perf_counter() - started, __version__, converged)


def cmd_multi_loop(scn: Scenario, out_dir: Path, fmt: str = "csv+svg") -> RunRecord:
    """Power sweep per scheme plus per-robot allocation at the detail point."""
    started = time.perf_counter()
    sweep = scn.power_sweep_w()
    columns = {name: [] for name, _ in _MULTI_SCHEMES}
    converged = True
    for p_tot in sweep:
        baselines = []
        for name, scheme in _MULTI_SCHEMES:
            if scheme == MultiLoopScheme.TASK_ORIENTED_JOINT:
                continue
            result = solve_multi_loop(scn.multi_loop_problem(scheme, total_power_w=p_tot),
                                      seed=scn.seed)
            converged = converged and result.solver_trace.converged
            columns[name].append(result.lqr_total)
            baselines.append(result.decision)
        task = solve_multi_loop(
            scn.multi_loop_problem(MultiLoopScheme.TASK_ORIENTED_JOINT, total_power_w=p_tot),
            seed=scn.seed, extra_starts=baselines)
        converged = converged and task.solver_trace.converged
        columns["task_oriented"].append(task.lqr_total)

    header = "total_power_w," + ",".join(f"lqr_{name}" for name, _ in _MULTI_SCHEMES)
    lines = [header]
    for i, p_tot in enumerate(sweep):
        lines.append(",".join(
            [_num(float(p_tot))] + [_num(columns[name][i]) for name, _ in _MULTI_SCHEMES]))
    _write(out_dir / "multi_loop_sweep.csv", _metadata(scn) + "\n".join(lines) + "\n")

    # per-robot allocation at the designated power point
    detail_power = scn.tree["multi_loop"]["allocation_power_w"]
    detail = {}
    baselines = []
    for name, scheme in _MULTI_SCHEMES:
        if scheme == MultiLoopScheme.TASK_ORIENTED_JOINT:
            continue
        result = solve_multi_loop(scn.multi_loop_problem(scheme, total_power_w=detail_power),
                                  seed=scn.seed)
        converged = converged and result.solver_trace.converged
        detail[name] = result
        baselines.append(result.decision)
    detail["task_oriented"] = solve_multi_loop(
        scn.multi_loop_problem(MultiLoopScheme.TASK_ORIENTED_JOINT,
                               total_power_w=detail_power),
        seed=scn.seed, extra_starts=baselines)
    converged = converged and detail["task_oriented"].solver_trace.converged

    elevations = scn.robot_elevations()
    alloc_header = ("robot,elevation_deg,"
                    + ",".join(f"power_{name}_w" for name, _ in _MULTI_SCHEMES))
    alloc_lines = [alloc_header]
    for i, elev in enumerate(elevations):
        row = [str(i + 1), _num(elev)]
        for name, _ in _MULTI_SCHEMES:
            row.append(_num(float(detail[name].decision["power_w"][i])))
        alloc_lines.append(",".join(row))
    _write(out_dir / "multi_loop_allocation.csv",
           _metadata(scn) + "\n".join(alloc_lines) + "\n")

    if fmt == "csv+svg":
        series = [(name, columns[name]) for name, _ in _MULTI_SCHEMES]
        svg = svgplot.line_chart(list(sweep), series,
                                 "Total LQR cost vs downlink power budget",
                                 "total power (W)", "total LQR cost")
        _write(out_dir / "multi_loop_sweep.svg", svg)
        groups = [f"robot {i + 1}" for i in range(len(elevations))]
        bars = [(name, [float(detail[name].decision["power_w"][i])
                        for i in range(len(elevations))])
                for name, _ in _MULTI_SCHEMES]
        svg2 = svgplot.grouped_bar_chart(groups, bars,
                                         f"Per-robot power at {detail_power:g} W total",
                                         "power (W)")
        _write(out_dir / "multi_loop_allocation.svg", svg2)

    summaries = {name: {"lqr_total": detail[name].lqr_total,
                        "converged": detail[name].solver_trace.converged}
                 for name, _ in _MULTI_SCHEMES}
    return RunRecord(scenario_hash(scn), tuple(scn.flat_items()), summaries,
                     time.perf_counter() - started, __version__, converged)


def cmd_contour(scn: Scenario, out_dir: Path, fmt: str = "csv+svg") -> RunRecord:
    """Task-oriented LQR total over the scenario's power x compute grids."""
    started = time.perf_counter()
    power_grid, compute_grid = scn.contour_grids()
    problem = scn.multi_loop_problem(MultiLoopScheme.TASK_ORIENTED_JOINT)
    traces = []
    matrix = sweep_contour(problem, power_grid, compute_grid, seed=scn.seed,
                           trace_out=traces)
    converged = all(t.converged for t in traces)

    header = "power_w," + ",".join(_num(float(c)) for c in compute_grid)
    lines = [header]
    for i, p in enumerate(power_grid):
        lines.append(",".join([_num(float(p))] + [_num(float(v)) for v in matrix[i]]))
    _write(out_dir / "contour.csv", _metadata(scn) + "\n".join(lines) + "\n")

    if fmt == "csv+svg":
        svg = svgplot.heatmap(list(power_grid), list(compute_grid),
                              [list(row) for row in matrix],
                              "Total LQR cost over power x compute budgets",
                              "compute budget (cycles/s)", "power budget (W)")
        _write(out_dir / "contour.svg", svg)

    summaries = {"contour": {"min": float(matrix.min()), "max": float(matrix.max()),
                             "converged": converged}}
    return RunRecord(scenario_hash(scn), tuple(scn.flat_items()), summaries,
                     time.perf_counter() - started, __version__, converged)


def _load_from_args(args) -> Scenario:
    if args.scenario is None:
        scn = default_scenario()
    else:
        try:
            text = Path(args.scenario).read_text(encoding="utf-8")
        except OSError as exc:
            raise _IoFailure(f"cannot read {args.scenario}: {exc}") from exc
        scn = load_scenario(text)
    if getattr(args, "seed", None) is not None:
        scn = scn.with_seed(args.seed)
    return scn


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="satloop",
        description="Closed-loop satellite link resource allocation toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario YAML file (default: built-in baseline)")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--format", choices=("csv", "csv+svg"), default="csv+svg")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("single-loop", parents=[common],
                   help="bandwidth split under three objectives")
    sub.add_parser("multi-loop", parents=[common],
                   help="joint power/compute allocation across robots")
    sub.add_parser("contour", parents=[common],
                   help="LQR cost over power x compute budget grids")
    validate = sub.add_parser("validate", help="check a scenario and print it resolved")
    validate.add_argument("--scenario", help="scenario YAML file")

    args = parser.parse_args(argv)
    try:
        scn = _load_from_args(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except _IoFailure as exc:
        print(str(exc), file=sys.stderr)
        return 4

    if args.command == "validate":
        sys.stdout.write(dump_scenario(scn))
        return 0

    runner = {"single-loop": cmd_single_loop,
              "multi-loop": cmd_multi_loop,
              "contour": cmd_contour}[args.command]
    try:
        record = runner(scn, Path(args.out), fmt=args.format)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except _IoFailure as exc:
        print(str(exc), file=sys.stderr)
        return 4
    print(f"{args.command}: scenario {record.scenario_hash[:12]} "
          f"done in {record.wall_clock_s:.2f}s -> {args.out}")
    if not record.converged:
        print("warning: at least one solve did not converge", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
